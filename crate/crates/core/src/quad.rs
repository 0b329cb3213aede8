//! Adaptive Gauss-Kronrod (G7, K15) quadrature for complex-valued
//! integrands. Used as the independent reference for the closed-form
//! waveform correlation integrals.

use num_complex::Complex64;

use crate::error::{Error, Result};

// K15 abscissae (positive half) and weights; G7 shares every other node.
const XK: [f64; 8] = [
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];
const WK: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];
const WG: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

/// One G7/K15 panel on [a, b]: returns (K15 value, |K15 - G7| estimate).
fn panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = WK[0] * fc;
    let mut gauss = WG[0] * fc;
    for i in 1..8 {
        let dx = half * XK[i];
        let pair = f(mid - dx) + f(mid + dx);
        kron += WK[i] * pair;
        if i % 2 == 0 {
            gauss += WG[i / 2] * pair;
        }
    }
    kron *= half;
    gauss *= half;
    (kron, (kron - gauss).norm())
}

/// Globally adaptive integration of `f` over [a, b].
///
/// Bisects the interval with the largest error estimate until the summed
/// estimate satisfies `max(abs_tol, rel_tol * |integral|)`, or errors out
/// after `max_subdivisions` splits. Returns the integral and the final
/// error estimate.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<(Complex64, f64)> {
    let (v, e) = panel(&f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    for _ in 0..max_subdivisions {
        let total: Complex64 = intervals.iter().map(|t| t.2).sum();
        let err: f64 = intervals.iter().map(|t| t.3).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = panel(&f, lo, mid);
        let (v2, e2) = panel(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    let total: Complex64 = intervals.iter().map(|t| t.2).sum();
    let err: f64 = intervals.iter().map(|t| t.3).sum();
    if err <= abs_tol.max(rel_tol * total.norm()) {
        Ok((total, err))
    } else {
        Err(Error::QuadratureNonConvergence {
            requested: abs_tol.max(rel_tol * total.norm()),
            achieved: err,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        // K15 integrates polynomials up to degree 22 exactly.
        let (v, _) = integrate(re(|x| x.powi(10)), 0.0, 1.0, 1e-12, 0.0, 0).unwrap();
        assert_relative_eq!(v.re, 1.0 / 11.0, max_relative = 1e-15);
    }

    #[test]
    fn exponential() {
        let (v, err) = integrate(re(f64::exp), 0.0, 1.0, 1e-12, 0.0, 50).unwrap();
        assert_relative_eq!(v.re, std::f64::consts::E - 1.0, max_relative = 1e-14);
        assert!(err < 1e-10);
    }

    #[test]
    fn oscillatory_complex_phase() {
        // integral of e^{j 2 pi f t} over [0, T] = (e^{j 2 pi f T} - 1)/(j 2 pi f)
        let freq = 2.37e5;
        let t_end = 1.0e-5;
        let (v, _) = integrate(
            |t| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * freq * t),
            0.0,
            t_end,
            1e-12,
            0.0,
            200,
        )
        .unwrap();
        let jw = Complex64::new(0.0, 2.0 * std::f64::consts::PI * freq);
        let want = (Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * freq * t_end)
            - Complex64::new(1.0, 0.0))
            / jw;
        assert_relative_eq!(v.re, want.re, max_relative = 1e-12);
        assert_relative_eq!(v.im, want.im, max_relative = 1e-12);
    }

    #[test]
    fn zero_integral_with_abs_floor() {
        // full-period sine: value 0; the absolute floor accepts it
        let f = re(|x| x.sin());
        let period = 2.0 * std::f64::consts::PI;
        let (v, _) = integrate(&f, 0.0, period, 1e-12, 1e-12, 100).unwrap();
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn discontinuity_exhausts_budget() {
        // a step edge cannot reach 1e-12 relative accuracy in 3 splits
        let f = re(|x: f64| if x < std::f64::consts::FRAC_1_SQRT_2 { 0.0 } else { 1.0 });
        assert!(matches!(
            integrate(&f, 0.0, 1.0, 1e-12, 0.0, 3),
            Err(Error::QuadratureNonConvergence { .. })
        ));
    }

    #[test]
    fn sharp_feature_forces_subdivision() {
        let f = re(|x: f64| (-(x * x) * 1e4).exp());
        let exact = std::f64::consts::PI.sqrt() / 100.0; // erf(100) ~ 1
        let (v, _) = integrate(&f, -1.0, 1.0, 1e-11, 0.0, 500).unwrap();
        assert_relative_eq!(v.re, exact, max_relative = 1e-10);
    }
}
