//! End-to-end acceptance audit. Each test prints one pass/fail line
//! (visible with `--nocapture`) and asserts the same condition.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tridyn::dynamics;
use tridyn::ergodic;
use tridyn::projective::{self, ProjMatrix};
use tridyn::quadrature::adaptive_simpson;
use tridyn::tree;
use tridyn::wandering;
use tridyn::{Point2, StripPoint};

fn report(label: &str, ok: bool) {
    println!("acceptance {label}: {}", if ok { "pass" } else { "FAIL" });
    assert!(ok, "acceptance {label} failed");
}

fn rational_point(rng: &mut ChaCha8Rng, max_den: u64) -> Point2<BigRational> {
    let q = rng.gen_range(2..=max_den);
    let px = rng.gen_range(1..=q);
    let py = rng.gen_range(1..=px);
    Point2::new(
        BigRational::new(BigInt::from(px), BigInt::from(q)),
        BigRational::new(BigInt::from(py), BigInt::from(q)),
    )
}

#[test]
fn c01_tree_cardinalities() {
    let mut ok = true;
    for n in 0..=12i64 {
        let (boundary, interior) = tree::level_set(n);
        ok &= boundary.len() as u64 == 3u64 << n;
        let expect_i = if n == 0 {
            0
        } else {
            (n as u64) * (1u64 << (n - 1))
        };
        ok &= interior.len() as u64 == expect_i;
        // Each of the three sides carries exactly 2^n points.
        let mut per_side = [0u64; 3];
        for p in &boundary {
            if p.num_y().is_zero() {
                per_side[0] += 1;
            } else if p.num_x() == p.den() {
                per_side[1] += 1;
            } else if p.num_x() == p.num_y() {
                per_side[2] += 1;
            }
        }
        ok &= per_side == [1u64 << n; 3];
    }
    report("1 tree cardinalities (n = 0..12)", ok);
}

#[test]
fn c02_tree_mediant_equivalence() {
    let ok = (0..=10).all(tree::equivalence_check);
    report("2 tree/mediant equivalence (n = 0..10)", ok);
}

#[test]
fn c03_completeness() {
    let rep = tree::completeness_check(8).unwrap();
    report("3 completeness of rationals with denominator <= 8", rep.ok());
}

#[test]
fn c04_boundary_is_stern_brocot() {
    let ok = (0..=12).all(|n| {
        let (boundary, _) = tree::level_set(n);
        boundary == tree::stern_brocot_boundary(n)
    });
    report("4 boundary levels match the Stern-Brocot sets (n = 0..12)", ok);
}

#[test]
fn c05_jump_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    for _ in 0..10_000 {
        let p = rational_point(&mut rng, 1_000);
        ok &= dynamics::jump_check(&p).unwrap();
    }
    for _ in 0..10_000 {
        // Keep the first digit bounded (tau <= ~60): the float check iterates
        // S tau times and 1e-12 is unreachable after thousands of rounding
        // steps near the corner.
        let x: f64 = rng.gen_range(0.1..0.999);
        let y = rng.gen_range((1.0 - x) / 60.0..0.99 * x);
        // jump_check compares within 1e-12 for inexact scalars.
        ok &= dynamics::jump_check(&Point2::new(x, y)).unwrap();
    }
    report("5 jump identity T = S^tau (10^4 exact + 10^4 float)", ok);
}

#[test]
fn c06_transfer_fixed_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ok = true;
    for _ in 0..1_000 {
        let p = rational_point(&mut rng, 10_000);
        let h = |p: &Point2<BigRational>| ergodic::s_density(p).unwrap();
        ok &= ergodic::transfer_s(&h, &p).unwrap() == ergodic::s_density(&p).unwrap();
    }
    for _ in 0..1_000 {
        let rat = |n: u64, d: u64| BigRational::new(BigInt::from(n), BigInt::from(d));
        let d = rng.gen_range(2..1_000u64);
        let s = StripPoint::new(
            rat(rng.gen_range(1..=d), d),
            rat(rng.gen_range(0..5 * d), d),
        );
        let rho = |s: &StripPoint<BigRational>| ergodic::strip_density(s);
        ok &= ergodic::transfer_f(&rho, &s).unwrap() == ergodic::strip_density(&s);
    }
    report("6 transfer-operator fixed points (10^3 exact points each)", ok);
}

#[test]
fn c07_density_normalization() {
    let f = |x: f64| if x == 0.0 { 1.0 } else { x.ln_1p() / x };
    let val = adaptive_simpson(&f, 0.0, 1.0, 1e-11);
    let ok = (val - std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-9;
    report("7 density normalization: int log(1+x)/x = pi^2/12 (1e-9)", ok);
}

#[test]
fn c08_projective_layer() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = true;
    for _ in 0..1_000 {
        let len = rng.gen_range(1..=40usize);
        let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2u8)).collect();
        let m = ProjMatrix::of_word(&word);
        ok &= m.det() == BigInt::one();
        let [v, v1, v2] = m.row_sums();
        ok &= v >= v1 && v >= v2;
    }
    for n in 0..=30usize {
        let word = vec![0u8; n];
        ok &= ProjMatrix::of_word(&word) == projective::narayana_matrix(n);
    }
    // gamma is the real root of x^3 - x^2 - 1.
    let mut gamma = 1.5f64;
    for _ in 0..64 {
        gamma -= (gamma.powi(3) - gamma.powi(2) - 1.0)
            / (3.0 * gamma.powi(2) - 2.0 * gamma);
    }
    let f = projective::narayana_seq(61);
    let ratio = f[61].to_f64().unwrap() / f[60].to_f64().unwrap();
    ok &= (ratio - gamma).abs() < 1e-6;
    // Jacobian determinant against central finite differences.
    for _ in 0..50 {
        let len = rng.gen_range(1..=6usize);
        let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2u8)).collect();
        let m = ProjMatrix::of_word(&word);
        let x = rng.gen_range(0.1..0.9f64);
        let y = x * rng.gen_range(0.1..0.9f64);
        let h = 1e-5;
        let at = |x: f64, y: f64| m.apply(&Point2::new(x, y)).unwrap();
        let (dx, mx) = (at(x + h, y), at(x - h, y));
        let (dy, my) = (at(x, y + h), at(x, y - h));
        let fd = ((dx.x - mx.x) * (dy.y - my.y) - (dy.x - my.x) * (dx.y - mx.y))
            / (4.0 * h * h);
        let exact = m.jacobian_det(&Point2::new(x, y)).unwrap();
        ok &= (fd - exact).abs() <= 1e-5 * exact.abs();
    }
    report("8 projective layer (det, row bound, Narayana, gamma, jacobian)", ok);
}

#[test]
fn c09_wandering_tree() {
    let mut ok = true;
    let rows = wandering::vector_tree(4).unwrap();
    ok &= rows[1].vectors == vec![[3, 1, 1]];
    ok &= rows[2].vectors == vec![[4, 1, 1], [4, 2, 1]];
    let rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let (lambdas, _) = wandering::lambda_tau(4).unwrap();
    ok &= lambdas == vec![rat(1, 2), rat(1, 3), rat(3, 8), rat(11, 30)];
    // Row recursion and contents up to the cap.
    let counts = wandering::row_counts(35).unwrap();
    for k in 2..35 {
        ok &= counts[k] == counts[k - 1] + counts[k - 2];
    }
    ok &= wandering::row_contents_check(35).unwrap();
    // Sandwich bound; the two sums coincide at n = 1.
    let taus = wandering::tau_list_f64(25).unwrap();
    let (_, tau_tildes) = wandering::lambda_tau_f64(25).unwrap();
    ok &= (taus[0] - tau_tildes[0]).abs() < 1e-12;
    let pi2 = std::f64::consts::PI.powi(2);
    for k in 1..25 {
        ok &= tau_tildes[k] < taus[k] && taus[k] < tau_tildes[k] + pi2;
    }
    // Pilot-calibrated band for tau~_n / log^2 n (observed 0.69..0.83).
    let (_, tt) = wandering::lambda_tau_f64(30).unwrap();
    for n in [10usize, 20, 30] {
        let ratio = tt[n - 1] / (n as f64).ln().powi(2);
        ok &= (0.5..1.5).contains(&ratio);
    }
    report("9 wandering tree (rows, lambdas, recursion, sandwich, band)", ok);
}

#[test]
fn c10_measure_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut ok = true;
    for _ in 0..100 {
        // A random admissible word: blocks of "1" and "10", ending in 1.
        let len = rng.gen_range(1..=12usize);
        let mut word: Vec<u8> = Vec::with_capacity(len);
        while word.len() < len {
            if word.len() + 2 <= len && rng.gen_bool(0.5) {
                word.extend_from_slice(&[0, 1]);
            } else {
                word.push(1);
            }
        }
        word.reverse();
        let m = ProjMatrix::of_word(&word);
        let t = m.psi_term().unwrap().to_f64().unwrap();
        let mu = wandering::mu_psi_a(&m).unwrap();
        let m_a = wandering::M_A;
        ok &= m_a * t <= mu + 1e-9 && mu <= 27.0 * m_a * t + 1e-9;
    }
    report("10 induced-measure bounds on 100 random admissible words", ok);
}

#[test]
fn d11_digit_average_divergence() {
    let cfg = ergodic::ExperimentConfig {
        samples: 10_000,
        iters: 10_000,
        seed: 11,
        law: ergodic::InitialLaw::UniformTriangle,
    };
    let rep = ergodic::khinchin_experiment(&cfg, &[100, 1_000, 10_000]).unwrap();
    let avg = |n: u64| rep.row(n, "digit_avg").unwrap().median;
    let norm = |n: u64| rep.row(n, "normalized").unwrap().median;
    // Divergence of the plain averages, and < 50% drift of the
    // n log^2 n-normalized median between n = 10^3 and 10^4.
    let diverges = avg(10_000) > 2.0 * avg(100) && avg(1_000) > avg(100);
    let drift = (norm(10_000) - norm(1_000)).abs() / norm(1_000);
    report(
        "11 digit averages diverge; normalized median drift < 50%",
        diverges && drift < 0.5,
    );
}

#[test]
fn d12_global_observable_convergence() {
    let alpha = std::f64::consts::SQRT_2;
    let n = 1_000_000usize;
    let starts = 100usize;
    // Case 1: h* = 0 with non-constant g(u) = u; f* = 0.
    // Case 2: constant g with 1 + cos; f* = h* = 1.
    let cases = [
        (ergodic::GSpec::Identity, ergodic::HSpec::Cos, 0.0),
        (ergodic::GSpec::Const(1.0), ergodic::HSpec::OnePlusCos, 1.0),
    ];
    let mut ok = true;
    for (ci, (g, h, f_star)) in cases.into_iter().enumerate() {
        let cfg = ergodic::ExperimentConfig {
            samples: starts,
            iters: n,
            seed: 12,
            law: ergodic::InitialLaw::UniformTriangle,
        };
        let rep = ergodic::global_observable_experiment(g, h, alpha, &cfg).unwrap();
        ok &= (rep.f_star - f_star).abs() < 1e-8;
        // Independent re-run of the orbits, keeping the worst start.
        let mut max_err = 0.0f64;
        for i in 0..starts {
            let mut rng = ChaCha8Rng::seed_from_u64(12);
            rng.set_stream(i as u64 + 1);
            let (x, y) = loop {
                let x: f64 = rng.gen();
                let y: f64 = rng.gen();
                if y < x && y > 0.0 {
                    break (x, y);
                }
            };
            let mut s = StripPoint::new(y / x, (1.0 - x) / y);
            let mut sum = 0.0;
            let mut m = 0usize;
            let w = 2.0 * std::f64::consts::PI / alpha;
            while m < n {
                let gv = match g {
                    ergodic::GSpec::Identity => s.u,
                    ergodic::GSpec::Const(c) => c,
                };
                let hv = match h {
                    ergodic::HSpec::Cos => (w * s.v).cos(),
                    ergodic::HSpec::OnePlusCos => 1.0 + (w * s.v).cos(),
                    ergodic::HSpec::Sin => (w * s.v).sin(),
                    ergodic::HSpec::Const(c) => c,
                };
                sum += gv * hv;
                m += 1;
                if m == n {
                    break;
                }
                match dynamics::strip_map(&s) {
                    Ok(t) => s = t,
                    Err(_) => break,
                }
            }
            max_err = max_err.max((sum / m as f64 - f_star).abs());
        }
        ok &= max_err < 0.05;
        // The library summary must agree with the worst-case re-run.
        let q90 = rep.report.row(n as u64, "abs_error").unwrap().q90;
        ok &= q90 <= max_err + 1e-12;
        println!("  case {ci}: max |avg - f*| = {max_err:.6}");
    }
    report("12 global-observable Birkhoff averages within 0.05 at n = 10^6", ok);
}

#[test]
fn determinism_of_seeded_reports() {
    let cfg = ergodic::ExperimentConfig {
        samples: 200,
        iters: 500,
        seed: 99,
        law: ergodic::InitialLaw::UniformTriangle,
    };
    let a = ergodic::khinchin_experiment(&cfg, &[100, 500]).unwrap().to_csv();
    let b = ergodic::khinchin_experiment(&cfg, &[100, 500]).unwrap().to_csv();
    report("determinism: identical seeds give identical reports", a == b);
}
