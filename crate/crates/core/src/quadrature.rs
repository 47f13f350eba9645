//! Adaptive quadrature helpers: Simpson's rule on intervals and a midpoint
//! rule with uniform refinement on triangles.

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), fm)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (left, flm) = simpson(f, a, fa, m, fm);
        let (right, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, flm, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, right, frm, 0.5 * tol, depth - 1)
        }
    }

    let fa = f(a);
    let fb = f(b);
    let (whole, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, fm, tol, 48)
}

fn tri_area(v: &[[f64; 2]; 3]) -> f64 {
    0.5 * ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1])
        - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]))
        .abs()
}

/// Degree-2 midpoint rule: exact for quadratics on a triangle.
fn tri_midpoint<F: Fn(f64, f64) -> f64>(f: &F, v: &[[f64; 2]; 3]) -> f64 {
    let mid = |a: [f64; 2], b: [f64; 2]| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let m01 = mid(v[0], v[1]);
    let m12 = mid(v[1], v[2]);
    let m02 = mid(v[0], v[2]);
    tri_area(v) / 3.0 * (f(m01[0], m01[1]) + f(m12[0], m12[1]) + f(m02[0], m02[1]))
}

/// Adaptive integration of `f` over the triangle with the given vertices, to
/// absolute tolerance `tol`, by recursive subdivision into four similar
/// triangles.
pub fn adaptive_triangle<F: Fn(f64, f64) -> f64>(f: &F, v: [[f64; 2]; 3], tol: f64) -> f64 {
    fn recurse<F: Fn(f64, f64) -> f64>(
        f: &F,
        v: [[f64; 2]; 3],
        coarse: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let mid = |a: [f64; 2], b: [f64; 2]| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let m01 = mid(v[0], v[1]);
        let m12 = mid(v[1], v[2]);
        let m02 = mid(v[0], v[2]);
        let sub = [
            [v[0], m01, m02],
            [m01, v[1], m12],
            [m02, m12, v[2]],
            [m01, m12, m02],
        ];
        let parts: Vec<f64> = sub.iter().map(|t| tri_midpoint(f, t)).collect();
        let fine: f64 = parts.iter().sum();
        if depth == 0 || (fine - coarse).abs() <= tol {
            fine
        } else {
            sub.iter()
                .zip(parts)
                .map(|(t, c)| recurse(f, *t, c, tol / 4.0, depth - 1))
                .sum()
        }
    }
    recurse(f, v, tri_midpoint(f, &v), tol, 24)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_polynomial() {
        let val = adaptive_simpson(&|x| x * x * x, 0.0, 2.0, 1e-12);
        assert!((val - 4.0).abs() < 1e-10);
    }

    #[test]
    fn simpson_dilogarithm_value() {
        // integral_0^1 log(1+x)/x dx = pi^2/12, with the integrand extended
        // by 1 at the origin.
        let f = |x: f64| if x == 0.0 { 1.0 } else { x.ln_1p() / x };
        let val = adaptive_simpson(&f, 0.0, 1.0, 1e-11);
        assert!((val - PI * PI / 12.0).abs() < 1e-9);
    }

    #[test]
    fn triangle_constant_and_linear() {
        let v = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        assert!((adaptive_triangle(&|_, _| 2.0, v, 1e-12) - 1.0).abs() < 1e-12);
        // integral of x over the unit corner triangle is 1/6.
        let val = adaptive_triangle(&|x, _| x, v, 1e-12);
        assert!((val - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_smooth_function() {
        // integral of exp(x+y) over the unit corner triangle equals
        // e^1*(e-2)... computed directly: int_0^1 int_0^{1-x} e^{x+y} dy dx
        // = int_0^1 (e - e^x) dx = e - (e - 1) = 1.
        let v = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let val = adaptive_triangle(&|x, y| (x + y).exp(), v, 1e-10);
        assert!((val - 1.0).abs() < 1e-8);
    }
}
