//! The complete tree of rational pairs.
//!
//! Every rational pair of the closed triangle appears exactly once in a
//! leveled tree. Levels can be generated two ways:
//!
//! - by inverse branches: four expansion rules driven by the position of a
//!   node (interior, diagonal, on `Lambda`, or on the vertical side);
//! - by mediants: Farey sums along a growing family of segments.
//!
//! [`equivalence_check`] verifies that the two constructions coincide level
//! by level, [`completeness_check`] that every canonical pair up to a
//! denominator bound is reached exactly once, and
//! [`stern_brocot_boundary`] that the boundary levels are three copies of the
//! Stern-Brocot (Farey) levels.
//!
//! Words are over `{0, 1, 2}` (the three inverse branches), stored most
//! significant first: a node's pair is `phi_w1 . phi_w2 . ... . phi_wk`
//! applied to its anchor, one of the six points of the two anchor levels.

use crate::dynamics::{self, RegionTag};
use crate::error::{Error, Result};
use crate::exact::RationalPair;
use crate::projective::ProjMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

/// Boundary/interior split of a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Boundary,
    Interior,
}

/// A node of the tree: a pair, its level, its kind, and the inverse-branch
/// word reconstructing it from its anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub pair: RationalPair,
    pub level: i64,
    pub kind: NodeKind,
    pub word: Vec<u8>,
    pub anchor: RationalPair,
}

/// Where a pair sits relative to the sides of the triangle; this selects the
/// expansion rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Interior,
    Diagonal,
    Lambda,
    Vertical,
}

fn pair_of(px: u64, py: u64, q: u64) -> RationalPair {
    RationalPair::from_ints(px, py, q).expect("valid literal pair")
}

fn role(pair: &RationalPair) -> Role {
    if pair.num_y().is_zero() {
        Role::Lambda
    } else if pair.num_x() == pair.num_y() {
        Role::Diagonal
    } else if pair.num_x() == pair.den() {
        Role::Vertical
    } else {
        Role::Interior
    }
}

fn is_vertex(pair: &RationalPair) -> bool {
    *pair == pair_of(0, 0, 1) || *pair == pair_of(1, 0, 1) || *pair == pair_of(1, 1, 1)
}

/// The inverse branches acting directly on pairs, exactly:
/// `phi_0(p/q, r/q) = (q/(r+q), p/(r+q))`,
/// `phi_1(p/q, r/q) = (p/(r+q), r/(r+q))`,
/// `phi_2(p/q, p/q) = (p/q, 0)`.
pub fn phi_pair(branch: u8, pair: &RationalPair) -> Result<RationalPair> {
    let (p, r, q) = (pair.num_x(), pair.num_y(), pair.den());
    match branch {
        0 => RationalPair::new(q.clone(), p.clone(), r + q),
        1 => RationalPair::new(p.clone(), r.clone(), r + q),
        2 => {
            if p != r {
                return Err(Error::domain("branch 2 applies to diagonal pairs only"));
            }
            RationalPair::new(p.clone(), BigInt::zero(), q.clone())
        }
        _ => Err(Error::domain("branch must be 0, 1 or 2")),
    }
}

fn child(node: &TreeNode, branch: u8, level: i64, kind: NodeKind) -> Result<TreeNode> {
    let pair = phi_pair(branch, &node.pair)?;
    let mut word = Vec::with_capacity(node.word.len() + 1);
    word.push(branch);
    word.extend_from_slice(&node.word);
    Ok(TreeNode {
        pair,
        level,
        kind,
        word,
        anchor: node.anchor.clone(),
    })
}

/// Expands a node by the rule matching its role:
///
/// - interior: `phi_0` and `phi_1` children, one level down;
/// - diagonal `(p/q, p/q)`: the `phi_2` sibling `(p/q, 0)` at the same level
///   and the `phi_1` child at the next level;
/// - on `Lambda`, `(p/q, 0)`: the `phi_0` sibling `(1, p/q)` at the same
///   level;
/// - on the vertical side, `(1, p/q)`: `phi_0` and `phi_1` children at the
///   next level.
///
/// The three vertices of the triangle are rejected.
pub fn expand(node: &TreeNode) -> Result<Vec<TreeNode>> {
    if is_vertex(&node.pair) {
        return Err(Error::domain("vertices of the triangle are not expandable"));
    }
    if !node.pair.in_triangle() {
        return Err(Error::domain("node outside the closed triangle"));
    }
    let n = node.level;
    match role(&node.pair) {
        Role::Interior => Ok(vec![
            child(node, 0, n + 1, NodeKind::Interior)?,
            child(node, 1, n + 1, NodeKind::Interior)?,
        ]),
        Role::Diagonal => Ok(vec![
            child(node, 2, n, NodeKind::Boundary)?,
            child(node, 1, n + 1, NodeKind::Boundary)?,
        ]),
        Role::Lambda => Ok(vec![child(node, 0, n, NodeKind::Boundary)?]),
        Role::Vertical => Ok(vec![
            child(node, 0, n + 1, NodeKind::Boundary)?,
            child(node, 1, n + 1, NodeKind::Interior)?,
        ]),
    }
}

/// One fully generated level: nodes keyed by pair in lexicographic order.
pub type Level = BTreeMap<RationalPair, TreeNode>;

fn anchor_node(px: u64, py: u64, q: u64, level: i64) -> TreeNode {
    let pair = pair_of(px, py, q);
    TreeNode {
        anchor: pair.clone(),
        pair,
        level,
        kind: NodeKind::Boundary,
        word: Vec::new(),
    }
}

/// The two anchor levels: level -1 holds the vertices, level 0 the three
/// midpoint images `(1/2, 0)`, `(1, 1/2)`, `(1/2, 1/2)`. Anchors carry empty
/// words.
pub fn anchor_levels() -> (Level, Level) {
    let minus_one = [
        anchor_node(0, 0, 1, -1),
        anchor_node(1, 0, 1, -1),
        anchor_node(1, 1, 1, -1),
    ];
    let zero = [
        anchor_node(1, 0, 2, 0),
        anchor_node(2, 1, 2, 0),
        anchor_node(1, 1, 2, 0),
    ];
    let as_level = |nodes: [TreeNode; 3]| -> Level {
        nodes.into_iter().map(|n| (n.pair.clone(), n)).collect()
    };
    (as_level(minus_one), as_level(zero))
}

/// Saturates a level under the level-preserving rules (the `phi_2` sibling of
/// a diagonal node and the `phi_0` sibling of a `Lambda` node).
fn saturate(level: &mut Level) {
    let mut queue: Vec<TreeNode> = level.values().cloned().collect();
    while let Some(node) = queue.pop() {
        let siblings = match role(&node.pair) {
            Role::Diagonal => vec![child(&node, 2, node.level, NodeKind::Boundary)],
            Role::Lambda => vec![child(&node, 0, node.level, NodeKind::Boundary)],
            _ => vec![],
        };
        for sib in siblings {
            let sib = sib.expect("level-preserving expansion is total");
            if !level.contains_key(&sib.pair) {
                level.insert(sib.pair.clone(), sib.clone());
                queue.push(sib);
            }
        }
    }
}

/// Generates levels `-1..=n` of the tree. Index `i` of the returned vector is
/// level `i - 1`.
pub fn levels(n: i64) -> Vec<Level> {
    let (minus_one, zero) = anchor_levels();
    let mut out = vec![minus_one, zero];
    for _ in 1..=n {
        let prev = out.last().unwrap();
        let mut next: Level = BTreeMap::new();
        for node in prev.values() {
            let increments: Vec<TreeNode> = match role(&node.pair) {
                Role::Interior => vec![
                    child(node, 0, node.level + 1, NodeKind::Interior).unwrap(),
                    child(node, 1, node.level + 1, NodeKind::Interior).unwrap(),
                ],
                Role::Diagonal => {
                    vec![child(node, 1, node.level + 1, NodeKind::Boundary).unwrap()]
                }
                Role::Vertical => vec![
                    child(node, 0, node.level + 1, NodeKind::Boundary).unwrap(),
                    child(node, 1, node.level + 1, NodeKind::Interior).unwrap(),
                ],
                Role::Lambda => vec![],
            };
            for c in increments {
                next.insert(c.pair.clone(), c);
            }
        }
        saturate(&mut next);
        out.push(next);
    }
    out
}

/// The boundary and interior point sets of level `n`.
pub fn level_set(n: i64) -> (BTreeSet<RationalPair>, BTreeSet<RationalPair>) {
    let all = levels(n);
    let level = &all[(n + 1) as usize];
    let mut boundary = BTreeSet::new();
    let mut interior = BTreeSet::new();
    for node in level.values() {
        match node.kind {
            NodeKind::Boundary => boundary.insert(node.pair.clone()),
            NodeKind::Interior => interior.insert(node.pair.clone()),
        };
    }
    (boundary, interior)
}

/// The boundary of level `n` assembled from the Farey preimages
/// `F^(-n)(1/2)`: three copies `(p/q, p/q)`, `(p/q, 0)`, `(1, p/q)` of each
/// fraction, where the Farey inverse branches are `x -> x/(1+x)` and
/// `x -> 1/(1+x)`.
pub fn stern_brocot_boundary(n: i64) -> BTreeSet<RationalPair> {
    use num_rational::BigRational;
    let mut fractions = vec![BigRational::new(BigInt::from(1), BigInt::from(2))];
    for _ in 0..n {
        let mut next = Vec::with_capacity(fractions.len() * 2);
        for x in &fractions {
            let d = BigRational::from_integer(BigInt::from(1)) + x;
            next.push(x / &d);
            next.push(d.recip());
        }
        fractions = next;
    }
    let mut out = BTreeSet::new();
    for x in fractions {
        let (p, q) = (x.numer().clone(), x.denom().clone());
        out.insert(RationalPair::new(p.clone(), p.clone(), q.clone()).unwrap());
        out.insert(RationalPair::new(p.clone(), BigInt::zero(), q.clone()).unwrap());
        out.insert(RationalPair::new(q.clone(), p, q).unwrap());
    }
    out
}

/// A cell of the n-th triangle partition, with labeled vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTriangle {
    pub v0: RationalPair,
    pub v1: RationalPair,
    pub v2: RationalPair,
    pub word: Vec<u8>,
}

/// The partition of the closed triangle into the `2^n` images under all
/// length-`n` words over `{0, 1}`; vertex `k` of a cell is the image of the
/// standard vertex `k` ((0,0), (1,0), (1,1)).
pub fn partition(n: usize) -> Vec<LabeledTriangle> {
    let verts = [pair_of(0, 0, 1), pair_of(1, 0, 1), pair_of(1, 1, 1)];
    let mut out = Vec::with_capacity(1 << n);
    for bits in 0..(1u64 << n) {
        let word: Vec<u8> = (0..n).map(|i| ((bits >> (n - 1 - i)) & 1) as u8).collect();
        let m = ProjMatrix::of_word(&word);
        let image = |v: &RationalPair| -> RationalPair {
            let p = m.apply(&v.to_point()).expect("partition images are finite");
            RationalPair::from_point(&p).expect("rational image")
        };
        out.push(LabeledTriangle {
            v0: image(&verts[0]),
            v1: image(&verts[1]),
            v2: image(&verts[2]),
            word,
        });
    }
    out
}

/// A closed segment with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub a: RationalPair,
    pub b: RationalPair,
}

impl Segment {
    /// Exact membership of `p` in the closed segment.
    pub fn contains(&self, p: &RationalPair) -> bool {
        let (ax, ay) = (self.a.x(), self.a.y());
        let (bx, by) = (self.b.x(), self.b.y());
        let (px, py) = (p.x(), p.y());
        let cross = (&bx - &ax) * (&py - &ay) - (&by - &ay) * (&px - &ax);
        if !cross.is_zero() {
            return false;
        }
        let between = |lo: &num_rational::BigRational,
                       hi: &num_rational::BigRational,
                       t: &num_rational::BigRational| {
            if lo <= hi {
                lo <= t && t <= hi
            } else {
                hi <= t && t <= lo
            }
        };
        between(&ax, &bx, &px) && between(&ay, &by, &py)
    }
}

/// The segment family used to build level `n` of the mediant construction:
/// the three sides of the triangle plus the images of the central segment
/// `l` (joining `(1, 0)` and `(1/2, 1/2)`) under all words of length at most
/// `n - 1`.
pub fn segment_family(n: i64) -> Vec<Segment> {
    let mut segs = vec![
        Segment {
            a: pair_of(0, 0, 1),
            b: pair_of(1, 0, 1),
        },
        Segment {
            a: pair_of(1, 0, 1),
            b: pair_of(1, 1, 1),
        },
        Segment {
            a: pair_of(0, 0, 1),
            b: pair_of(1, 1, 1),
        },
    ];
    let ell = (pair_of(1, 0, 1), pair_of(1, 1, 2));
    for len in 0..=(n - 1).max(-1) {
        if len < 0 {
            continue;
        }
        let len = len as usize;
        for bits in 0..(1u64 << len) {
            let word: Vec<u8> = (0..len)
                .map(|i| ((bits >> (len - 1 - i)) & 1) as u8)
                .collect();
            let m = ProjMatrix::of_word(&word);
            let image = |v: &RationalPair| -> RationalPair {
                let p = m.apply(&v.to_point()).expect("segment images are finite");
                RationalPair::from_point(&p).expect("rational image")
            };
            segs.push(Segment {
                a: image(&ell.0),
                b: image(&ell.1),
            });
        }
    }
    segs
}

/// Inserts the mediant of every pair of lexicographic neighbors into a sorted
/// point list.
fn farey_sum(points: &[&RationalPair]) -> Vec<RationalPair> {
    let mut out: Vec<RationalPair> = points.iter().map(|p| (*p).clone()).collect();
    for w in points.windows(2) {
        out.push(w[0].mediant(w[1]));
    }
    out
}

/// The mediant-construction levels `S_-1..S_n` as cumulative point sets.
pub fn mediant_levels(n: i64) -> Vec<BTreeSet<RationalPair>> {
    let mut out = Vec::new();
    let base: BTreeSet<RationalPair> =
        [pair_of(0, 0, 1), pair_of(1, 0, 1), pair_of(1, 1, 1)]
            .into_iter()
            .collect();
    out.push(base);
    for m in 0..=n {
        let prev = out.last().unwrap();
        let mut next: BTreeSet<RationalPair> = BTreeSet::new();
        for seg in segment_family(m) {
            // BTreeSet iteration is lexicographic, so the on-segment points
            // arrive sorted.
            let on_seg: Vec<&RationalPair> =
                prev.iter().filter(|p| seg.contains(p)).collect();
            next.extend(farey_sum(&on_seg));
        }
        out.push(next);
    }
    out
}

/// The cumulative mediant set `S_n` (for `n >= -1`).
pub fn mediant_level(n: i64) -> BTreeSet<RationalPair> {
    mediant_levels(n).pop().unwrap()
}

/// Checks that level `n` of the inverse-branch tree equals the set difference
/// `S_n \ S_(n-1)` of the mediant construction.
pub fn equivalence_check(n: i64) -> bool {
    let s = mediant_levels(n);
    let s_n = &s[(n + 1) as usize];
    let s_prev = &s[n as usize];
    let diff: BTreeSet<RationalPair> = s_n.difference(s_prev).cloned().collect();
    let (boundary, interior) = level_set(n);
    let tree_level: BTreeSet<RationalPair> = boundary.union(&interior).cloned().collect();
    tree_level == diff
}

/// The result of locating a pair: its level and the word reconstructing it
/// from an anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub level: i64,
    pub word: Vec<u8>,
    pub anchor: RationalPair,
}

fn anchor_level_of(pair: &RationalPair) -> Option<i64> {
    if is_vertex(pair) {
        Some(-1)
    } else if *pair == pair_of(1, 0, 2) || *pair == pair_of(2, 1, 2) || *pair == pair_of(1, 1, 2)
    {
        Some(0)
    } else {
        None
    }
}

/// Finds the level and word of a rational pair by walking forward with the
/// modified slow map, undoing one inverse branch per step.
///
/// Steps from an interior point or a non-anchor diagonal point descend one
/// level; steps off `Lambda` or off the vertical side stay on the same level,
/// mirroring the expansion rules.
pub fn locate(pair: &RationalPair) -> Result<Location> {
    if !pair.in_triangle() {
        return Err(Error::domain("pair outside the closed triangle"));
    }
    let mut current = pair.clone();
    let mut word = Vec::new();
    let mut descents: i64 = 0;
    loop {
        if let Some(anchor_level) = anchor_level_of(&current) {
            return Ok(Location {
                level: anchor_level + descents,
                word,
                anchor: current,
            });
        }
        let point = current.to_point();
        let region = dynamics::classify(&point);
        let (symbol, descend) = match role(&current) {
            Role::Lambda => (2u8, false),
            Role::Vertical => (0u8, false),
            Role::Diagonal | Role::Interior => {
                if region.contains(RegionTag::Gamma0) {
                    (0u8, true)
                } else {
                    (1u8, true)
                }
            }
        };
        let next = dynamics::slow_map(&point, true)?;
        current = RationalPair::from_point(&next)?;
        word.push(symbol);
        if descend {
            descents += 1;
        }
    }
}

/// Re-applies the inverse branches of a [`Location`] to its anchor.
pub fn reconstruct(loc: &Location) -> Result<RationalPair> {
    let mut p = loc.anchor.clone();
    for &s in loc.word.iter().rev() {
        p = phi_pair(s, &p)?;
    }
    Ok(p)
}

/// Outcome of a completeness audit over all canonical pairs with denominator
/// at most `max_den`.
#[derive(Debug, Clone, Serialize)]
pub struct CompletenessReport {
    pub max_den: u64,
    pub checked: u64,
    pub max_level: i64,
    /// Pairs whose located level set does not contain them.
    pub missing: Vec<String>,
    /// Pairs present in more than one generated level.
    pub duplicated: Vec<String>,
    /// Pairs whose word does not reconstruct them.
    pub mismatched: Vec<String>,
}

impl CompletenessReport {
    pub fn ok(&self) -> bool {
        self.missing.is_empty() && self.duplicated.is_empty() && self.mismatched.is_empty()
    }
}

/// Enumerates every canonical pair `(p/q, r/q)` with `0 <= r <= p <= q <=
/// max_den`, locates each, and cross-checks against the generated levels:
/// each pair must appear in exactly one level, the one `locate` reports.
pub fn completeness_check(max_den: u64) -> Result<CompletenessReport> {
    if max_den == 0 {
        return Err(Error::domain("max_den must be at least 1"));
    }
    let mut located: Vec<(RationalPair, Location)> = Vec::new();
    let mut mismatched = Vec::new();
    let mut max_level = -1i64;
    for q in 1..=max_den {
        for p in 0..=q {
            for r in 0..=p {
                let g = gcd3(p, r, q);
                if g != 1 {
                    continue;
                }
                let pair = pair_of(p, r, q);
                let loc = locate(&pair)?;
                if reconstruct(&loc)? != pair {
                    mismatched.push(pair.to_string());
                }
                max_level = max_level.max(loc.level);
                located.push((pair, loc));
            }
        }
    }
    let all_levels = levels(max_level);
    let mut missing = Vec::new();
    let mut duplicated = Vec::new();
    for (pair, loc) in &located {
        let occurrences = all_levels
            .iter()
            .filter(|level| level.contains_key(pair))
            .count();
        let in_place = all_levels[(loc.level + 1) as usize].contains_key(pair);
        if occurrences == 0 || !in_place {
            missing.push(pair.to_string());
        }
        if occurrences > 1 {
            duplicated.push(pair.to_string());
        }
    }
    Ok(CompletenessReport {
        max_den,
        checked: located.len() as u64,
        max_level,
        missing,
        duplicated,
        mismatched,
    })
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    gcd(gcd(a, b), c)
}

#[derive(Serialize)]
struct JsonlNode<'a> {
    level: i64,
    num_x: String,
    num_y: String,
    den: String,
    kind: NodeKind,
    word: &'a str,
}

/// Writes the given levels as JSON lines, one node per line, ordered by level
/// and then lexicographically. Big integers are emitted as decimal strings.
pub fn write_jsonl<W: Write>(levels: &[Level], out: &mut W) -> std::io::Result<()> {
    for level in levels {
        for node in level.values() {
            let word: String = node
                .word
                .iter()
                .map(|b| char::from(b'0' + b))
                .collect();
            let line = serde_json::to_string(&JsonlNode {
                level: node.level,
                num_x: node.pair.num_x().to_string(),
                num_y: node.pair.num_y().to_string(),
                den: node.pair.den().to_string(),
                kind: node.kind,
                word: &word,
            })
            .expect("serializable node");
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}
