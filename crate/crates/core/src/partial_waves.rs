//! Fractional-order Bessel evaluation and the partial-wave scattering field.
//!
//! Introducing a flux of strength alpha shifts every angular mode's radial
//! order from |m| to |m + alpha|, giving the mode expansion
//!
//! ```text
//! psi(r, phi) = sum_m (-i)^{|m+alpha|} J_{|m+alpha|}(k r)
//!               e^{i m (phi - theta0)} e^{i alpha phi0},
//! ```
//!
//! with `(-i)^nu = exp(-i pi nu / 2)` (principal power, continuous in alpha).
//! `theta0` is the direction the incident beam arrives from, so the free
//! field (alpha = 0) reduces to the plane wave `exp(-i k r cos(phi - theta0))`
//! propagating toward `theta0 + pi`, and the forward scattering direction is
//! `theta0 + pi`.
//!
//! The far-field amplitude extracted from the mode sum obeys the
//! sin^2(alpha pi) cross-section law; integer alpha scatters nothing.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use crate::error::{Error, Result};
use crate::flux_geometry::wrap_principal;
use crate::quad;

/// Supported order range of [`bessel_j`].
pub const BESSEL_MAX_NU: f64 = 200.0;
/// Supported argument range of [`bessel_j`].
pub const BESSEL_MAX_Z: f64 = 1.0e4;

/// Minimum k*r for far-field amplitude extraction.
pub const FAR_FIELD_MIN_KR: f64 = 50.0;
/// Samples closer than this to the forward direction are rejected; the
/// incident/scattered split is singular there.
pub const FORWARD_EXCLUSION_HALF_ANGLE: f64 = 0.5;

/// Tail bound required of the last included mode in [`ab_wavefunction`].
pub const MODE_TAIL_BOUND: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Bessel J of real non-negative order
// ---------------------------------------------------------------------------

/// Ascending series is free of cancellation when the terms decrease from the
/// start, i.e. z^2/4 <= 0.81 (nu+1); beyond z = 12 at small orders the
/// alternating terms grow large enough to eat the 1e-10 budget.
fn series_applicable(nu: f64, z: f64) -> bool {
    z <= 12.0 || z * z <= 3.24 * (nu + 1.0)
}

/// Ascending power series sum_j (-1)^j (z/2)^{nu+2j} / (j! Gamma(nu+j+1)),
/// with the prefactor taken through logs to survive large orders.
fn bessel_series(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * z;
    let pre = (nu * half.ln() - ln_gamma(nu + 1.0)).exp();
    if pre == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for j in 1..400 {
        let jf = j as f64;
        term *= -q / (jf * (nu + jf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1.0) {
            break;
        }
    }
    pre * sum
}

/// Real-angle plus exponential legs:
/// `J_nu(z) = (1/pi) int_0^pi cos(nu t - z sin t) dt
///            - (sin(nu pi)/pi) int_0^inf e^{-z sinh t - nu t} dt`,
/// the second leg dropping out at integer order.
fn bessel_integral(nu: f64, z: f64) -> Result<f64> {
    let oscillatory = quad::adaptive_simpson(
        &|t: f64| (nu * t - z * t.sin()).cos(),
        0.0,
        PI,
        3e-13,
        26,
    )
    .map_err(|_| Error::QuadratureFailure)?
        / PI;
    if nu.fract() == 0.0 {
        return Ok(oscillatory);
    }
    let t_cut = quad::sinh_tail_cutoff(z);
    if quad::sinh_tail_bound(z, t_cut) > 1e-12 {
        return Err(Error::TailNotConverged);
    }
    let tail = quad::adaptive_simpson(
        &|t: f64| (-z * t.sinh() - nu * t).exp(),
        0.0,
        t_cut,
        1e-14,
        26,
    )
    .map_err(|_| Error::QuadratureFailure)?;
    Ok(oscillatory - (nu * PI).sin() / PI * tail)
}

/// Bessel function of the first kind, real order `nu >= 0`, `z >= 0`,
/// absolute error below 1e-10 on the supported range.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    if !(nu.is_finite() && z.is_finite()) {
        return Err(Error::NonFinite {
            what: "bessel order/argument",
        });
    }
    if !(0.0..=BESSEL_MAX_NU).contains(&nu) {
        return Err(Error::OutOfSupportedRange {
            what: format!("order nu = {nu} outside [0, {BESSEL_MAX_NU}]"),
        });
    }
    if !(0.0..=BESSEL_MAX_Z).contains(&z) {
        return Err(Error::OutOfSupportedRange {
            what: format!("argument z = {z} outside [0, {BESSEL_MAX_Z}]"),
        });
    }
    if series_applicable(nu, z) {
        Ok(bessel_series(nu, z))
    } else {
        bessel_integral(nu, z)
    }
}

// ---------------------------------------------------------------------------
// Ladders of integer-spaced orders
// ---------------------------------------------------------------------------

/// `J_{nu0 + j}(z)` for `j = 0..=top`, `nu0` in [0, 1), by backward
/// recurrence started well above max(order, z) from an arbitrary seed and
/// normalized with `sum_k (nu0+2k) Gamma(nu0+k)/k! J_{nu0+2k}(z) = (z/2)^nu0`.
/// The seed's contamination decays on the way down through the evanescent
/// region, so every returned value is accurate relative to the largest.
fn bessel_ladder(nu0: f64, top: usize, z: f64) -> Vec<f64> {
    debug_assert!((0.0..1.0).contains(&nu0));
    if z <= 12.0 {
        return (0..=top).map(|j| bessel_series(nu0 + j as f64, z)).collect();
    }
    let highest = (nu0 + top as f64).max(z);
    let pad = 40 + (2.0 * highest.sqrt()).ceil() as usize;
    let start = (highest - nu0).ceil() as usize + pad;

    let mut values = vec![0.0_f64; start + 2];
    values[start + 1] = 0.0;
    values[start] = 1e-280;
    for j in (0..start).rev() {
        let mu = nu0 + (j + 1) as f64;
        values[j] = (2.0 * mu / z) * values[j + 1] - values[j + 2];
        if values[j].abs() > 1e250 {
            for v in values[j..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }

    // Normalization sum; coefficients c_k = (nu0+2k) Gamma(nu0+k)/k!.
    let mut c = (ln_gamma(nu0 + 1.0)).exp(); // c_0 = Gamma(nu0+1)
    let mut sum = c * values[0];
    let mut k = 1usize;
    while 2 * k <= start {
        let kf = k as f64;
        c *= if k == 1 {
            nu0 + 2.0
        } else {
            (nu0 + 2.0 * kf) / (nu0 + 2.0 * kf - 2.0) * (nu0 + kf - 1.0) / kf
        };
        sum += c * values[2 * k];
        k += 1;
    }
    let scale = (nu0 * (0.5 * z).ln()).exp() / sum;
    values.truncate(top + 1);
    for v in &mut values {
        *v *= scale;
    }
    values
}

/// Table of `J_{|m+alpha|}(z)` for `m` in `[-m_max, m_max]`, indexed by
/// `m + m_max`. The orders split into two integer-spaced ladders (fractional
/// parts `frac(alpha)` and `1 - frac(alpha)`), each filled by one backward
/// recurrence.
fn mode_table(alpha: f64, z: f64, m_max: usize) -> Vec<f64> {
    let m_max = m_max as i64;
    let shift = alpha.floor() as i64;
    let frac = alpha - alpha.floor(); // in [0, 1)

    // Ladder A: orders frac + j for m' = m + shift >= 0.
    let top_a = m_max + shift;
    let a = if top_a >= 0 {
        bessel_ladder(frac, top_a as usize, z)
    } else {
        Vec::new()
    };
    // Ladder B: orders (1 - frac) + j for m' <= -1.
    let top_b = m_max - shift - 1;
    let b = if top_b >= 0 {
        bessel_ladder(wrap_unit(1.0 - frac), top_b as usize, z)
    } else {
        Vec::new()
    };

    (-m_max..=m_max)
        .map(|m| {
            let mp = m + shift;
            if mp >= 0 {
                a[mp as usize]
            } else {
                b[(-mp - 1) as usize]
            }
        })
        .collect()
}

/// 1 - frac can round to 1.0 when frac underflows; keep it in [0, 1).
fn wrap_unit(x: f64) -> f64 {
    if x >= 1.0 {
        x - 1.0
    } else {
        x
    }
}

// ---------------------------------------------------------------------------
// Partial-wave field
// ---------------------------------------------------------------------------

/// Everything needed to evaluate the scattering field of a single flux at the
/// origin on a sample grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartialWaveSpec {
    /// Flux strength.
    pub alpha: f64,
    /// Wavenumber sqrt(2 m E), > 0.
    pub k: f64,
    /// Mode truncation: the sum runs over |m| <= m_max. Must be at least
    /// ceil(k r_max) + 15 for the grid it is evaluated on.
    pub m_max: usize,
    /// Direction the incident beam arrives from.
    pub incidence_angle: f64,
    /// Direction of the ideal point; enters as the global phase
    /// exp(i alpha ideal_angle).
    pub ideal_angle: f64,
}

impl PartialWaveSpec {
    pub fn new(
        alpha: f64,
        k: f64,
        m_max: usize,
        incidence_angle: f64,
        ideal_angle: f64,
    ) -> Result<Self> {
        if !(alpha.is_finite() && k.is_finite() && incidence_angle.is_finite()
            && ideal_angle.is_finite())
        {
            return Err(Error::NonFinite {
                what: "partial-wave parameter",
            });
        }
        if k <= 0.0 {
            return Err(Error::OutOfSupportedRange {
                what: format!("wavenumber k = {k} must be positive"),
            });
        }
        if m_max == 0 {
            return Err(Error::OutOfSupportedRange {
                what: "m_max must be at least 1".into(),
            });
        }
        Ok(Self {
            alpha,
            k,
            m_max,
            incidence_angle,
            ideal_angle,
        })
    }
}

/// Sample coordinates for field evaluation, either cartesian `(x, y)` or
/// polar `(r, phi)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleGrid {
    coords: Vec<[f64; 2]>,
    polar: bool,
}

impl SampleGrid {
    /// Row-major rectangular grid: y varies slowest.
    pub fn rectangular(
        xmin: f64,
        xmax: f64,
        ymin: f64,
        ymax: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 || !(xmin < xmax) || !(ymin < ymax) {
            return Err(Error::InvalidGeometry {
                reason: "rectangular grid needs xmin < xmax, ymin < ymax, nx, ny >= 1".into(),
            });
        }
        let mut coords = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            let y = if ny == 1 {
                ymin
            } else {
                ymin + (ymax - ymin) * iy as f64 / (ny - 1) as f64
            };
            for ix in 0..nx {
                let x = if nx == 1 {
                    xmin
                } else {
                    xmin + (xmax - xmin) * ix as f64 / (nx - 1) as f64
                };
                coords.push([x, y]);
            }
        }
        Ok(Self {
            coords,
            polar: false,
        })
    }

    pub fn from_cartesian(coords: Vec<[f64; 2]>) -> Self {
        Self {
            coords,
            polar: false,
        }
    }

    /// Polar sample points as `(r, phi)` pairs.
    pub fn from_polar(coords: Vec<[f64; 2]>) -> Self {
        Self {
            coords,
            polar: true,
        }
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn is_polar(&self) -> bool {
        self.polar
    }

    fn polar_at(&self, i: usize) -> (f64, f64) {
        let c = self.coords[i];
        if self.polar {
            (c[0], c[1])
        } else {
            (c[0].hypot(c[1]), c[1].atan2(c[0]))
        }
    }
}

/// Complex amplitudes on a sample grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    pub coords: Vec<[f64; 2]>,
    pub values: Vec<Complex64>,
    pub polar: bool,
}

impl ComplexField {
    /// CSV with header `x,y,re,im`, or `r,phi,re,im` preceded by the line
    /// `# coords=polar` for polar grids. Scientific notation, 17 significant
    /// digits.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        if self.polar {
            writeln!(w, "# coords=polar")?;
            writeln!(w, "r,phi,re,im")?;
        } else {
            writeln!(w, "x,y,re,im")?;
        }
        for (c, v) in self.coords.iter().zip(&self.values) {
            writeln!(
                w,
                "{},{},{},{}",
                crate::fmt::sci17(c[0]),
                crate::fmt::sci17(c[1]),
                crate::fmt::sci17(v.re),
                crate::fmt::sci17(v.im)
            )?;
        }
        Ok(())
    }
}

/// Single mode of the expansion:
/// `(-i)^{|m+alpha|} J_{|m+alpha|}(k r) e^{i m (phi-theta0)} e^{i alpha phi0}`.
pub fn ab_mode(m: i64, spec: &PartialWaveSpec, r: f64, phi: f64) -> Result<Complex64> {
    let nu = (m as f64 + spec.alpha).abs();
    let j = bessel_j(nu, spec.k * r)?;
    let phase = -FRAC_PI_2 * nu + m as f64 * (phi - spec.incidence_angle)
        + spec.alpha * spec.ideal_angle;
    Ok(Complex64::cis(phase) * j)
}

fn sum_modes(
    spec: &PartialWaveSpec,
    table: &[f64],
    phi: f64,
) -> Complex64 {
    let m_max = spec.m_max as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in -m_max..=m_max {
        let nu = (m as f64 + spec.alpha).abs();
        let j = table[(m + m_max) as usize];
        acc += Complex64::cis(-FRAC_PI_2 * nu + m as f64 * (phi - spec.incidence_angle)) * j;
    }
    acc * Complex64::cis(spec.alpha * spec.ideal_angle)
}

fn check_truncation(spec: &PartialWaveSpec, r_max: f64) -> Result<()> {
    let needed = (spec.k * r_max).ceil() as usize + 15;
    if spec.m_max < needed {
        return Err(Error::TruncationInsufficient {
            detail: format!(
                "m_max = {} below ceil(k r_max) + 15 = {needed}",
                spec.m_max
            ),
        });
    }
    Ok(())
}

fn check_tail(table: &[f64], kr: f64) -> Result<()> {
    let lo = table.first().copied().unwrap_or(0.0);
    let hi = table.last().copied().unwrap_or(0.0);
    if lo.abs() >= MODE_TAIL_BOUND || hi.abs() >= MODE_TAIL_BOUND {
        return Err(Error::TruncationInsufficient {
            detail: format!(
                "last included mode magnitude {:.3e} at k r = {kr} exceeds {MODE_TAIL_BOUND:e}",
                lo.abs().max(hi.abs())
            ),
        });
    }
    Ok(())
}

/// The full mode sum on a grid. Fails with `TruncationInsufficient` when
/// `m_max` violates the truncation invariant or the last included mode
/// exceeds [`MODE_TAIL_BOUND`] anywhere on the grid.
pub fn ab_wavefunction(spec: &PartialWaveSpec, grid: &SampleGrid) -> Result<ComplexField> {
    let n = grid.coords().len();
    let mut r_max = 0.0_f64;
    for i in 0..n {
        let (r, _) = grid.polar_at(i);
        if !(r.is_finite() && r > 1e-12) {
            return Err(Error::TooCloseToFlux { limit: 1e-12 });
        }
        r_max = r_max.max(r);
    }
    check_truncation(spec, r_max)?;

    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let (r, phi) = grid.polar_at(i);
        let table = mode_table(spec.alpha, spec.k * r, spec.m_max);
        check_tail(&table, spec.k * r)?;
        values.push(sum_modes(spec, &table, phi));
    }
    Ok(ComplexField {
        coords: grid.coords().to_vec(),
        values,
        polar: grid.is_polar(),
    })
}

/// Smallest `m_max = ceil(k_r_max) + c`, `c` in [15, 60], whose edge mode is
/// below `tail_tol`; clamped at c = 60. Monotone in `k_r_max`.
pub fn truncation_order(k_r_max: f64, tail_tol: f64) -> Result<usize> {
    if !(k_r_max.is_finite() && k_r_max > 0.0) {
        return Err(Error::OutOfSupportedRange {
            what: format!("k_r_max = {k_r_max} must be positive"),
        });
    }
    let base = k_r_max.ceil() as usize;
    for c in 15..=60 {
        if bessel_j((base + c) as f64, k_r_max)?.abs() < tail_tol {
            return Ok(base + c);
        }
    }
    Ok(base + 60)
}

/// Far-field scattering amplitude at radius `r_extract`:
/// `f(phi) = [psi(r, phi) - psi_inc(r, phi)] sqrt(r) e^{-i k r}` with the
/// gauge-phased incident wave
/// `psi_inc = e^{i alpha phi0} e^{-i alpha w(phi - theta0)} e^{-i k r cos(phi - theta0)}`,
/// `w` the principal wrap. The incident gauge's branch cut sits in the forward
/// direction `theta0 + pi`, which is why samples within
/// [`FORWARD_EXCLUSION_HALF_ANGLE`] of forward are rejected.
pub fn scattering_amplitude(
    spec: &PartialWaveSpec,
    r_extract: f64,
    phi_samples: &[f64],
) -> Result<Vec<Complex64>> {
    let kr = spec.k * r_extract;
    if kr < FAR_FIELD_MIN_KR {
        return Err(Error::RadiusTooSmall {
            kr,
            min: FAR_FIELD_MIN_KR,
        });
    }
    let forward = spec.incidence_angle + PI;
    for &phi in phi_samples {
        if wrap_principal(phi - forward).abs() < FORWARD_EXCLUSION_HALF_ANGLE {
            return Err(Error::ForwardRegion {
                phi,
                half_angle: FORWARD_EXCLUSION_HALF_ANGLE,
            });
        }
    }
    check_truncation(spec, r_extract)?;
    let table = mode_table(spec.alpha, kr, spec.m_max);
    check_tail(&table, kr)?;

    let sqrt_r = r_extract.sqrt();
    let outgoing = Complex64::cis(-kr);
    Ok(phi_samples
        .iter()
        .map(|&phi| {
            let psi = sum_modes(spec, &table, phi);
            let rel = wrap_principal(phi - spec.incidence_angle);
            let psi_inc = Complex64::cis(
                spec.alpha * spec.ideal_angle - spec.alpha * rel
                    - kr * (phi - spec.incidence_angle).cos(),
            );
            (psi - psi_inc) * sqrt_r * outgoing
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b} (diff {:.3e})", (a - b).abs());
    }

    #[test]
    fn bessel_small_arguments() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3.0, 0.0).unwrap(), 0.0);
        // Half-integer closed form sqrt(2/(pi z)) sin z at z = pi/2.
        assert_close(bessel_j(0.5, FRAC_PI_2).unwrap(), 2.0 / PI, 1e-12);
        // Frozen from an independent power-series oracle.
        assert_close(bessel_j(1.3, 2.7).unwrap(), 0.5039277619461297, 1e-12);
        assert_close(bessel_j(1.0, 1.0).unwrap(), 0.4400505857449335, 1e-12);
        assert_close(bessel_j(0.25, 3.0).unwrap(), -0.10063706433673127, 1e-12);
    }

    #[test]
    fn bessel_large_arguments_take_integral_path() {
        assert!(!series_applicable(0.3, 50.0));
        // Frozen references (17 digits) for the quadrature regime.
        assert_close(bessel_j(0.3, 5.0).unwrap(), -0.29682911012576076, 1e-10);
        assert_close(bessel_j(1.3, 10.0).unwrap(), 0.14499395777531305, 1e-10);
        assert_close(bessel_j(2.7, 10.0).unwrap(), 0.14785146777645409, 1e-10);
    }

    #[test]
    fn bessel_regimes_agree_on_overlap() {
        for &nu in &[0.0, 0.3, 1.7, 5.5, 20.0] {
            for &z in &[11.0, 12.0, 13.0, 14.0] {
                let s = bessel_series(nu, z);
                let q = bessel_integral(nu, z).unwrap();
                assert_close(s, q, 1e-10);
            }
        }
    }

    #[test]
    fn bessel_range_checks() {
        assert!(matches!(
            bessel_j(-0.1, 1.0),
            Err(Error::OutOfSupportedRange { .. })
        ));
        assert!(matches!(
            bessel_j(201.0, 1.0),
            Err(Error::OutOfSupportedRange { .. })
        ));
        assert!(matches!(
            bessel_j(1.0, 1.1e4),
            Err(Error::OutOfSupportedRange { .. })
        ));
    }

    #[test]
    fn ladder_matches_direct_evaluation() {
        for &(alpha, z) in &[(0.5_f64, 15.0_f64), (0.3, 30.0), (1.7, 60.0), (-0.4, 25.0), (0.0, 45.0)] {
            let m_max = z.ceil() as usize + 20;
            let table = mode_table(alpha, z, m_max);
            let m_max_i = m_max as i64;
            for &m in &[-(m_max_i), -7, -1, 0, 1, 5, m_max_i / 2, m_max_i] {
                let nu = (m as f64 + alpha).abs();
                let direct = bessel_j(nu, z).unwrap();
                let tabled = table[(m + m_max_i) as usize];
                assert!(
                    (direct - tabled).abs() < 1e-10,
                    "alpha={alpha} z={z} m={m}: {direct} vs {tabled}"
                );
            }
        }
    }

    #[test]
    fn mode_order_rule() {
        // Order |m + alpha|: m = -1, alpha = 0.5 gives 0.5.
        let spec = PartialWaveSpec::new(0.5, 1.0, 20, 0.0, 0.0).unwrap();
        let v = ab_mode(-1, &spec, 1.0, 0.7).unwrap();
        let j = bessel_j(0.5, 1.0).unwrap();
        let expected = Complex64::cis(-FRAC_PI_2 * 0.5 - 0.7) * j;
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn mode_alpha_zero_values() {
        let spec = PartialWaveSpec::new(0.0, 1.0, 20, 0.0, 0.0).unwrap();
        // m = 0 at r -> 0: J_0(0) = 1.
        let v = ab_mode(0, &spec, 1e-300, 0.3).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // m = 1, kr = 1: (-i) J_1(1).
        let v = ab_mode(1, &spec, 1.0, 0.0).unwrap();
        assert!((v - Complex64::new(0.0, -0.4400505857449335)).norm() < 1e-12);
    }

    #[test]
    fn free_space_reduces_to_plane_wave() {
        let k = 1.0;
        let m_max = truncation_order(10.0, 1e-12).unwrap();
        let spec = PartialWaveSpec::new(0.0, k, m_max, 0.0, 0.0).unwrap();
        let grid = SampleGrid::rectangular(-7.0, 7.0, -7.0, 7.0, 8, 8).unwrap();
        let field = ab_wavefunction(&spec, &grid).unwrap();
        for (c, v) in field.coords.iter().zip(&field.values) {
            // Incident beam arrives from theta0 = 0: wave vector (-k, 0).
            let expected = Complex64::cis(-k * c[0]);
            assert!((v - expected).norm() < 1e-10, "at {c:?}");
        }
    }

    #[test]
    fn truncation_orders() {
        assert_eq!(truncation_order(10.0, 1e-12).unwrap(), 31);
        assert_eq!(truncation_order(1.0, 1e-12).unwrap(), 16);
        // Looser tolerance never needs more modes.
        assert!(truncation_order(10.0, 1e-6).unwrap() <= 31);
        // Monotone in k r.
        let mut prev = 0;
        for i in 1..=40 {
            let m = truncation_order(i as f64 * 2.5, 1e-12).unwrap();
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn wavefunction_rejects_insufficient_truncation() {
        let spec = PartialWaveSpec::new(0.5, 1.0, 18, 0.0, 0.0).unwrap();
        let grid = SampleGrid::from_polar(vec![[9.0, 0.3]]);
        assert!(matches!(
            ab_wavefunction(&spec, &grid),
            Err(Error::TruncationInsufficient { .. })
        ));
    }

    #[test]
    fn wavefunction_rejects_zero_radius() {
        let spec = PartialWaveSpec::new(0.5, 1.0, 40, 0.0, 0.0).unwrap();
        let grid = SampleGrid::from_cartesian(vec![[0.0, 0.0]]);
        assert!(matches!(
            ab_wavefunction(&spec, &grid),
            Err(Error::TooCloseToFlux { .. })
        ));
    }

    #[test]
    fn scattering_amplitude_guards() {
        let spec = PartialWaveSpec::new(0.5, 1.0, 80, 0.0, 0.0).unwrap();
        assert!(matches!(
            scattering_amplitude(&spec, 20.0, &[1.0]),
            Err(Error::RadiusTooSmall { .. })
        ));
        assert!(matches!(
            scattering_amplitude(&spec, 50.0, &[PI - 0.3]),
            Err(Error::ForwardRegion { .. })
        ));
    }

    #[test]
    fn integer_alpha_does_not_scatter() {
        let m_max = truncation_order(50.0, 1e-12).unwrap();
        for &alpha in &[0.0, 1.0, 2.0] {
            let spec = PartialWaveSpec::new(alpha, 1.0, m_max, 0.0, 0.0).unwrap();
            let f = scattering_amplitude(&spec, 50.0, &[PI - 0.5, PI + 0.7, 1.2]).unwrap();
            for v in f {
                assert!(v.norm() < 1e-3, "alpha={alpha}: |f|={}", v.norm());
            }
        }
    }

    #[test]
    fn scattering_ratio_half_vs_quarter() {
        let m_max = truncation_order(50.0, 1e-12).unwrap();
        let phis = [PI - 0.5, PI + 0.5];
        let abs2_mean = |alpha: f64| {
            let spec = PartialWaveSpec::new(alpha, 1.0, m_max, 0.0, 0.0).unwrap();
            let f = scattering_amplitude(&spec, 50.0, &phis).unwrap();
            f.iter().map(|v| v.norm_sqr()).sum::<f64>() / f.len() as f64
        };
        let ratio = abs2_mean(0.5) / abs2_mean(0.25);
        assert!((ratio - 2.0).abs() / 2.0 < 0.05, "ratio = {ratio}");
    }

    #[test]
    fn alpha_periodicity_of_amplitude() {
        let m_max = truncation_order(50.0, 1e-12).unwrap();
        let phis = [PI - 0.8, PI + 1.1];
        let moduli = |alpha: f64| {
            let spec = PartialWaveSpec::new(alpha, 1.0, m_max, 0.0, 0.0).unwrap();
            scattering_amplitude(&spec, 50.0, &phis)
                .unwrap()
                .iter()
                .map(|v| v.norm())
                .collect::<Vec<_>>()
        };
        for (a, b) in moduli(0.3).iter().zip(moduli(1.3)) {
            assert!((a - b).abs() / a < 0.05);
        }
    }

    #[test]
    fn polar_csv_carries_marker() {
        let field = ComplexField {
            coords: vec![[1.0, 0.5]],
            values: vec![Complex64::new(0.25, -1.0)],
            polar: true,
        };
        let mut buf = Vec::new();
        field.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("# coords=polar\nr,phi,re,im\n"));
        assert!(s.contains("2.5000000000000000e-1"));
    }
}
