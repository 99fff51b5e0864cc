//! Adaptive Simpson quadrature used by the phase and Bessel integrals.
//!
//! Interval-halving with the Richardson acceptance test |S2 - S1| <= 15 tol;
//! the returned value carries the extrapolated correction. The error budget
//! halves at every split, so the absolute error of an accepted result is of
//! the order of the requested tolerance.

use num_complex::Complex64;

/// Quadrature failed to meet tolerance within the depth limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct DepthExhausted;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn simpson_c(fa: Complex64, fm: Complex64, fb: Complex64, h: f64) -> Complex64 {
    (fa + 4.0 * fm + fb) * (h / 6.0)
}

pub(crate) fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64, DepthExhausted> {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    step(f, a, m, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn step<F: Fn(f64) -> f64>(
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
) -> Result<f64, DepthExhausted> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let s2 = left + right;
    if (s2 - whole).abs() <= 15.0 * tol {
        return Ok(s2 + (s2 - whole) / 15.0);
    }
    if depth == 0 {
        return Err(DepthExhausted);
    }
    let half = 0.5 * tol;
    Ok(step(f, a, lm, m, fa, flm, fm, left, half, depth - 1)?
        + step(f, m, rm, b, fm, frm, fb, right, half, depth - 1)?)
}

pub(crate) fn adaptive_simpson_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<Complex64, DepthExhausted> {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson_c(fa, fm, fb, b - a);
    step_c(f, a, m, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn step_c<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    m: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Result<Complex64, DepthExhausted> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson_c(fa, flm, fm, m - a);
    let right = simpson_c(fm, frm, fb, b - m);
    let s2 = left + right;
    if (s2 - whole).norm() <= 15.0 * tol {
        return Ok(s2 + (s2 - whole) / 15.0);
    }
    if depth == 0 {
        return Err(DepthExhausted);
    }
    let half = 0.5 * tol;
    Ok(step_c(f, a, lm, m, fa, flm, fm, left, half, depth - 1)?
        + step_c(f, m, rm, b, fm, frm, fb, right, half, depth - 1)?)
}

/// Truncation point for integrals of exp(-z sinh t - nu t) on [0, inf):
/// asinh(max(1, ln(1/eps)/z)) + 5 with eps = 1e-14. Beyond this point the
/// integrand is bounded by exp(-z sinh T), far below round-off.
pub(crate) fn sinh_tail_cutoff(z: f64) -> f64 {
    let eps_log = 1e14_f64.ln();
    (eps_log / z).max(1.0).asinh() + 5.0
}

/// Analytic bound on the discarded tail: int_T^inf exp(-z sinh t) dt
/// <= exp(-z sinh T) / (z cosh T).
pub(crate) fn sinh_tail_bound(z: f64, t_cut: f64) -> f64 {
    (-z * t_cut.sinh()).exp() / (z * t_cut.cosh())
}
