//! Invariant densities, transfer operators, Birkhoff sums, and the Monte
//! Carlo experiments around the weak laws of the infinite-measure system.
//!
//! Exact transfer fixed points are verified in rational arithmetic; the
//! simulations run in `f64` with reproducible per-sample RNG streams, so an
//! identical configuration yields a bit-identical report regardless of thread
//! count.

use crate::dynamics::{self, classify};
use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::scalar::{Point2, Scalar, StripPoint};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Which invariant density to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DensityKind {
    /// `k(x, y) = 12/(pi^2 x (1 + y))`, the normalized density invariant
    /// under the fast map.
    TInvariant,
    /// `h(x, y) = 1/(x y)`, the infinite invariant density of the slow map.
    SInvariant,
    /// `1/(1 + u v)` on the strip.
    StripInvariant,
}

/// Evaluates the requested density at a point `(a, b)` of its domain.
pub fn density(kind: DensityKind, a: f64, b: f64) -> Result<f64> {
    match kind {
        DensityKind::TInvariant => {
            if a <= 0.0 {
                return Err(Error::domain("T-invariant density needs x > 0"));
            }
            Ok(12.0 / (PI * PI * a * (1.0 + b)))
        }
        DensityKind::SInvariant => {
            if a <= 0.0 || b <= 0.0 {
                return Err(Error::domain("S-invariant density needs x, y > 0"));
            }
            Ok(1.0 / (a * b))
        }
        DensityKind::StripInvariant => {
            if a <= 0.0 {
                return Err(Error::domain("strip density needs u > 0"));
            }
            Ok(1.0 / (1.0 + a * b))
        }
    }
}

/// `h(x, y) = 1/(x y)` in any scalar type.
pub fn s_density<S: Scalar>(p: &Point2<S>) -> Result<S> {
    if p.x.is_zero() || p.y.is_zero() {
        return Err(Error::domain("S-invariant density singular at x*y = 0"));
    }
    Ok(S::one() / (p.x.clone() * p.y.clone()))
}

/// `1/(1 + u v)` in any scalar type.
pub fn strip_density<S: Scalar>(s: &StripPoint<S>) -> S {
    S::one() / (S::one() + s.u.clone() * s.v.clone())
}

/// One step of the transfer operator of the slow map:
/// `(P f)(x, y) = 1/(1+y)^3 * (f(phi_0(x, y)) + f(phi_1(x, y)))`.
pub fn transfer_s<S: Scalar, F: Fn(&Point2<S>) -> S>(f: &F, p: &Point2<S>) -> Result<S> {
    let b0 = dynamics::local_inverse(0, p)?;
    let b1 = dynamics::local_inverse(1, p)?;
    let d = S::one() + p.y.clone();
    let w = S::one() / (d.clone() * d.clone() * d);
    Ok(w * (f(&b0) + f(&b1)))
}

/// One step of the strip transfer operator:
/// `(P_F g)(u, v) = u/(uv+1)^2 * g(1/(uv+1), u) + g(u, v + 1)`.
pub fn transfer_f<S: Scalar, G: Fn(&StripPoint<S>) -> S>(g: &G, s: &StripPoint<S>) -> Result<S> {
    if s.u.is_zero() {
        return Err(Error::domain("strip transfer needs u > 0"));
    }
    let d = s.u.clone() * s.v.clone() + S::one();
    let branch0 = StripPoint::new(S::one() / d.clone(), s.u.clone());
    let branch1 = StripPoint::new(s.u.clone(), s.v.clone() + S::one());
    Ok(s.u.clone() / (d.clone() * d) * g(&branch0) + g(&branch1))
}

/// Which map drives a Birkhoff sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapKind {
    Slow,
    Fast,
    Strip,
}

/// Partial Birkhoff averages along an orbit.
#[derive(Debug, Clone, Serialize)]
pub struct BirkhoffSeries {
    /// `(1/m) * sum_{k<m} f(R^k start)` for `m = 1..=n`.
    pub averages: Vec<f64>,
    /// True when the orbit hit a singular point before `n` steps.
    pub truncated: bool,
}

/// Birkhoff partial averages of `f` along the `S` or `T` orbit of `start`.
pub fn birkhoff_triangle<F: Fn(&Point2<f64>) -> f64>(
    map: MapKind,
    f: &F,
    start: &Point2<f64>,
    n: usize,
) -> Result<BirkhoffSeries> {
    if map == MapKind::Strip {
        return Err(Error::domain("use birkhoff_strip for the strip map"));
    }
    if n == 0 {
        return Err(Error::domain("need at least one iterate"));
    }
    let mut p = start.clone();
    let mut sum = 0.0;
    let mut averages = Vec::with_capacity(n);
    let mut truncated = false;
    for m in 1..=n {
        sum += f(&p);
        averages.push(sum / m as f64);
        if m == n {
            break;
        }
        let next = match map {
            MapKind::Slow => dynamics::slow_map(&p, false),
            MapKind::Fast => dynamics::triangle_map(&p),
            MapKind::Strip => unreachable!(),
        };
        match next {
            Ok(q) => p = q,
            Err(_) => {
                truncated = true;
                break;
            }
        }
    }
    Ok(BirkhoffSeries {
        averages,
        truncated,
    })
}

/// Birkhoff partial averages of `f` along the `F` orbit of `start`.
pub fn birkhoff_strip<F: Fn(&StripPoint<f64>) -> f64>(
    f: &F,
    start: &StripPoint<f64>,
    n: usize,
) -> Result<BirkhoffSeries> {
    if n == 0 {
        return Err(Error::domain("need at least one iterate"));
    }
    let mut s = start.clone();
    let mut sum = 0.0;
    let mut averages = Vec::with_capacity(n);
    let mut truncated = false;
    for m in 1..=n {
        sum += f(&s);
        averages.push(sum / m as f64);
        if m == n {
            break;
        }
        match dynamics::strip_map(&s) {
            Ok(t) => s = t,
            Err(_) => {
                truncated = true;
                break;
            }
        }
    }
    Ok(BirkhoffSeries {
        averages,
        truncated,
    })
}

/// Initial distribution of Monte Carlo starts; any choice here is absolutely
/// continuous with respect to Lebesgue measure on the triangle.
#[derive(Debug, Clone, Serialize)]
pub enum InitialLaw {
    UniformTriangle,
    UniformRect { x0: f64, x1: f64, y0: f64, y1: f64 },
}

/// Monte Carlo configuration. Identical configurations produce bit-identical
/// reports.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub samples: usize,
    pub iters: usize,
    pub seed: u64,
    pub law: InitialLaw,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.iters == 0 {
            return Err(Error::Config("samples and iters must be positive".into()));
        }
        Ok(())
    }

    /// A dedicated RNG stream for one sample, independent of scheduling.
    fn stream(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64 + 1);
        rng
    }

    fn draw_start(&self, rng: &mut ChaCha8Rng) -> Point2<f64> {
        match self.law {
            InitialLaw::UniformTriangle => loop {
                let x: f64 = rng.gen();
                let y: f64 = rng.gen();
                if y < x && y > 0.0 {
                    return Point2::new(x, y);
                }
            },
            InitialLaw::UniformRect { x0, x1, y0, y1 } => loop {
                let x = x0 + (x1 - x0) * rng.gen::<f64>();
                let y = y0 + (y1 - y0) * rng.gen::<f64>();
                if y <= x && y > 0.0 && x <= 1.0 {
                    return Point2::new(x, y);
                }
            },
        }
    }
}

/// One summary row of a report: the empirical distribution of a statistic at
/// horizon `n`.
#[derive(Debug, Clone, Serialize)]
pub struct StatRow {
    pub n: u64,
    pub statistic: String,
    pub mean: f64,
    pub median: f64,
    pub q10: f64,
    pub q25: f64,
    pub q75: f64,
    pub q90: f64,
}

/// A Monte Carlo report: configuration echo plus per-horizon summaries.
#[derive(Debug, Clone, Serialize)]
pub struct StatReport {
    pub config: ExperimentConfig,
    pub rows: Vec<StatRow>,
}

impl StatReport {
    pub fn row(&self, n: u64, statistic: &str) -> Option<&StatRow> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.statistic == statistic)
    }

    /// CSV rendering, one row per (n, statistic).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,statistic,mean,median,q10,q25,q75,q90\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.n, r.statistic, r.mean, r.median, r.q10, r.q25, r.q75, r.q90
            ));
        }
        out
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

fn summarize(n: u64, statistic: &str, values: &[f64]) -> StatRow {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite statistics"));
    let mean = sorted.iter().sum::<f64>() / sorted.len() as f64;
    StatRow {
        n,
        statistic: statistic.to_string(),
        mean,
        median: quantile(&sorted, 0.5),
        q10: quantile(&sorted, 0.1),
        q25: quantile(&sorted, 0.25),
        q75: quantile(&sorted, 0.75),
        q90: quantile(&sorted, 0.9),
    }
}

/// The Khinchin weak-law experiment: distributions of the digit averages
/// `(1/n) sum alpha_k` and of the normalized sums
/// `(1/(n log^2 n)) sum alpha_k` over random starts, at each horizon of
/// `n_grid`. Digits are read from the fast-map orbit (the digit is the cell
/// index), which avoids the long excursions of the slow map near `Lambda`.
pub fn khinchin_experiment(cfg: &ExperimentConfig, n_grid: &[usize]) -> Result<StatReport> {
    cfg.validate()?;
    if n_grid.is_empty() || n_grid.iter().any(|&n| n == 0 || n > cfg.iters) {
        return Err(Error::Config(
            "n_grid entries must lie in 1..=iters".into(),
        ));
    }
    let max_n = *n_grid.iter().max().unwrap();
    // Per sample: the cumulative digit sum at every grid horizon.
    let per_sample: Vec<Vec<f64>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.stream(i);
            let mut p = cfg.draw_start(&mut rng);
            let mut sum = 0.0f64;
            let mut grid_sums = Vec::with_capacity(n_grid.len());
            let mut alive = true;
            for step in 1..=max_n {
                if alive {
                    match classify(&p).cell() {
                        Some(k) => {
                            sum += k as f64;
                            match dynamics::triangle_map(&p) {
                                Ok(q) => p = q,
                                Err(_) => alive = false,
                            }
                        }
                        None => alive = false,
                    }
                }
                if n_grid.contains(&step) {
                    grid_sums.push(sum);
                }
            }
            grid_sums
        })
        .collect();
    let mut rows = Vec::new();
    for (gi, &n) in n_grid.iter().enumerate() {
        let raw: Vec<f64> = per_sample
            .iter()
            .map(|s| s[gi] / n as f64)
            .collect();
        let log2 = (n as f64).ln().powi(2);
        let normalized: Vec<f64> = per_sample
            .iter()
            .map(|s| s[gi] / (n as f64 * log2))
            .collect();
        rows.push(summarize(n as u64, "digit_avg", &raw));
        rows.push(summarize(n as u64, "normalized", &normalized));
    }
    Ok(StatReport {
        config: cfg.clone(),
        rows,
    })
}

/// The `g` factor of a global observable `f(u, v) = g(u) h(v)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum GSpec {
    Const(f64),
    /// `g(u) = u`; admissible only when the period average of `h` vanishes.
    Identity,
}

impl GSpec {
    fn eval(&self, u: f64) -> f64 {
        match self {
            GSpec::Const(c) => *c,
            GSpec::Identity => u,
        }
    }
    fn is_const(&self) -> bool {
        matches!(self, GSpec::Const(_))
    }
}

/// The continuous periodic factor `h` (period `alpha`).
#[derive(Debug, Clone, Copy, Serialize)]
pub enum HSpec {
    Const(f64),
    /// `cos(2 pi v / alpha)`.
    Cos,
    /// `sin(2 pi v / alpha)`.
    Sin,
    /// `1 + cos(2 pi v / alpha)`.
    OnePlusCos,
}

impl HSpec {
    fn eval(&self, v: f64, alpha: f64) -> f64 {
        let w = 2.0 * PI * v / alpha;
        match self {
            HSpec::Const(c) => *c,
            HSpec::Cos => w.cos(),
            HSpec::Sin => w.sin(),
            HSpec::OnePlusCos => 1.0 + w.cos(),
        }
    }
}

/// Report of the global-observable experiment.
#[derive(Debug, Clone, Serialize)]
pub struct GlobalObsReport {
    /// Period average `h* = (1/alpha) int_0^alpha h`.
    pub h_star: f64,
    /// The limit constant the Birkhoff averages should approach.
    pub f_star: f64,
    pub report: StatReport,
}

/// Runs Birkhoff averages of `f(u, v) = g(u) h(v)` along strip orbits and
/// compares them with the constant `f*`.
///
/// `h` must be continuous and `alpha`-periodic; when its period average does
/// not vanish, `g` must be constant.
pub fn global_observable_experiment(
    g: GSpec,
    h: HSpec,
    alpha: f64,
    cfg: &ExperimentConfig,
) -> Result<GlobalObsReport> {
    cfg.validate()?;
    if !(alpha > 0.0) {
        return Err(Error::Config("alpha must be positive".into()));
    }
    let h_star = adaptive_simpson(&|v| h.eval(v, alpha), 0.0, alpha, 1e-10) / alpha;
    if h_star.abs() > 1e-9 && !g.is_const() {
        return Err(Error::Config(
            "non-constant g requires a vanishing period average of h".into(),
        ));
    }
    let f_star = match g {
        GSpec::Const(c) => c * h_star,
        GSpec::Identity => 0.0,
    };
    let n = cfg.iters;
    let finals: Vec<f64> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = cfg.stream(i);
            let p = cfg.draw_start(&mut rng);
            let mut s = StripPoint::new(p.y / p.x, (1.0 - p.x) / p.y);
            let mut sum = 0.0;
            let mut m = 0usize;
            while m < n {
                sum += g.eval(s.u) * h.eval(s.v, alpha);
                m += 1;
                if m == n {
                    break;
                }
                match dynamics::strip_map(&s) {
                    Ok(t) => s = t,
                    Err(_) => break,
                }
            }
            sum / m as f64
        })
        .collect();
    let errors: Vec<f64> = finals.iter().map(|a| (a - f_star).abs()).collect();
    let rows = vec![
        summarize(n as u64, "birkhoff_avg", &finals),
        summarize(n as u64, "abs_error", &errors),
    ];
    Ok(GlobalObsReport {
        h_star,
        f_star,
        report: StatReport {
            config: cfg.clone(),
            rows,
        },
    })
}

/// The invariant measure of the k-th digit cell,
/// `mu(cell_k) = int_k^(k+1) log(1 + v)/v dv`, by adaptive quadrature to
/// absolute tolerance `1e-10`. The integrand extends continuously by 1 at
/// `v = 0`.
pub fn cell_measure(k: u64) -> f64 {
    let f = |v: f64| if v == 0.0 { 1.0 } else { v.ln_1p() / v };
    adaptive_simpson(&f, k as f64, (k + 1) as f64, 1e-10)
}
