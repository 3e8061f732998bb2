//! Shared numerical primitives: compensated summation, adaptive quadrature
//! and one-dimensional minimization.

/// Neumaier-compensated sum. Keeps the relative error of long accumulations
/// near machine precision instead of growing with the number of terms.
pub(crate) fn sum_compensated<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    debug_assert!(!values.is_empty());
    sum_compensated(values.iter().copied()) / values.len() as f64
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` with absolute error
/// target `tol` (Richardson-corrected, so the realized error is usually far
/// below the target).
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    adapt(f, a, m, b, fa, fm, fb, whole, tol, 52)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
/// Ties are resolved toward the lower end of the interval, which keeps the
/// result deterministic on plateaus. Returns `(x_min, f(x_min))`.
pub(crate) fn golden_section_min<F: Fn(f64) -> f64>(
    f: &F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    debug_assert!(lo <= hi);
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > xtol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn compensated_sum_matches_exact_value() {
        // 1 + 1e-16 repeated: naive summation loses the small terms.
        let mut values = vec![1.0];
        values.extend(std::iter::repeat_n(1e-16, 1_000_000));
        let s = sum_compensated(values.iter().copied());
        assert!((s - (1.0 + 1e-10)).abs() < 1e-14, "got {s}");
    }

    #[test]
    fn integrate_polynomial_exactly() {
        // Simpson is exact for cubics; the adaptive wrapper must not spoil it.
        let f = |x: f64| 3.0 * x * x;
        let v = integrate(&f, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn integrate_smooth_transcendental() {
        let f = |x: f64| (x).sin();
        let v = integrate(&f, 0.0, PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn integrate_endpoint_singular_derivative() {
        // (1 - x)^{3/2} has unbounded higher derivatives at x = 1, the same
        // edge behavior as the bounded-support spacing laws.
        let f = |x: f64| (1.0 - x).max(0.0).powf(1.5);
        let v = integrate(&f, 0.0, 1.0, 1e-12);
        assert!((v - 0.4).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let f = |x: f64| (x - 0.3).powi(2);
        let (x, fx) = golden_section_min(&f, 0.0, 1.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-7);
        assert!(fx < 1e-13);
    }
}
