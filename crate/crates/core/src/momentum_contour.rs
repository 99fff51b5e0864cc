//! Momentum-representation machinery: integral representations of Bessel
//! functions on the real angle domain and on its complex extension.
//!
//! For integer order the familiar representation
//!
//! ```text
//! J_n(z) = (1/2pi) int_{-pi}^{pi} e^{-i z sin t + i n t} dt
//! ```
//!
//! closes over the real angles alone. For non-integer order the angle domain
//! must be extended into the complex plane; collapsing the two vertical legs
//! of the extended contour gives the split
//!
//! ```text
//! J_nu(z) = (1/2pi) int_{-pi}^{pi} e^{i (nu t - z sin t)} dt
//!           - (sin(nu pi)/pi) int_0^inf e^{-z sinh u - nu u} du.
//! ```
//!
//! The real-angle leg is the integer-flux (incident) part; the second leg
//! exists only at non-integer order and carries the sin(nu pi) factor that
//! the scattering cross section squares. Delta-function momentum eigenstates
//! are carried symbolically as [`MomentumSolution`] parameters and never
//! sampled; all verification happens mode by mode through these integrals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::io::Write;

use crate::error::{Error, Result};
use crate::quad;

/// Supported order range of [`bessel_contour_split`].
pub const CONTOUR_MAX_NU: f64 = 50.0;
/// Supported argument range of [`bessel_contour_split`].
pub const CONTOUR_MAX_Z: f64 = 100.0;
/// Supported |z| for [`bessel_integer_integral`].
pub const INTEGER_INTEGRAL_MAX_Z: f64 = 1e3;

const REAL_LEG_TOL: f64 = 3e-13;
const IMAG_LEG_TOL: f64 = 1e-14;
const QUAD_DEPTH: u32 = 26;

/// The two legs of the extended-contour representation, both divided by 2pi
/// (the exponential leg including its -2 sin(nu pi) prefactor).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSplit {
    /// Real-angle leg: (1/2pi) int_{-pi}^{pi} e^{i(nu t - z sin t)} dt.
    pub real_leg: f64,
    /// Exponential leg: -(sin(nu pi)/pi) int_0^inf e^{-z sinh u - nu u} du;
    /// identically zero at integer order.
    pub imag_leg: f64,
    /// real_leg + imag_leg = J_nu(z).
    pub total: f64,
}

/// Symbolic record of the plane-wave momentum eigenstate: radial delta at
/// `k`, angular delta at `theta0`, gauge factor parameters `alpha` and
/// `ideal_angle`. Distributions have no faithful grid representation, so the
/// parameters are carried as data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentumSolution {
    pub k: f64,
    pub theta0: f64,
    pub alpha: f64,
    pub ideal_angle: f64,
}

impl MomentumSolution {
    pub fn new(k: f64, theta0: f64, alpha: f64, ideal_angle: f64) -> Result<Self> {
        if !(k.is_finite() && theta0.is_finite() && alpha.is_finite() && ideal_angle.is_finite()) {
            return Err(Error::NonFinite {
                what: "momentum solution parameter",
            });
        }
        if k <= 0.0 {
            return Err(Error::OutOfSupportedRange {
                what: format!("wavenumber k = {k} must be positive"),
            });
        }
        Ok(Self {
            k,
            theta0,
            alpha,
            ideal_angle,
        })
    }
}

/// Complex quadrature of the real-angle leg over [-pi, pi], divided by 2pi.
/// The imaginary part cancels by symmetry; it is returned for inspection.
fn real_leg_complex(nu: f64, z: f64) -> Result<Complex64> {
    let v = quad::adaptive_simpson_complex(
        &|t: f64| Complex64::cis(nu * t - z * t.sin()),
        -PI,
        PI,
        REAL_LEG_TOL,
        QUAD_DEPTH,
    )
    .map_err(|_| Error::QuadratureFailure)?;
    Ok(v / TAU)
}

/// int_0^inf e^{-z sinh u - nu u} du, truncated at the analytic cutoff.
fn exponential_leg_integral(nu: f64, z: f64) -> Result<f64> {
    let t_cut = quad::sinh_tail_cutoff(z);
    if quad::sinh_tail_bound(z, t_cut) > 1e-12 {
        return Err(Error::TailNotConverged);
    }
    quad::adaptive_simpson(
        &|t: f64| (-z * t.sinh() - nu * t).exp(),
        0.0,
        t_cut,
        IMAG_LEG_TOL,
        QUAD_DEPTH,
    )
    .map_err(|_| Error::QuadratureFailure)
}

/// `(1/2pi) int_{-pi}^{pi} e^{-i z sin t + i n t} dt` for non-negative
/// integer `n`, by adaptive quadrature of the complex integrand.
pub fn bessel_integer_integral(n: u32, z: f64) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::NonFinite {
            what: "argument z",
        });
    }
    if z.abs() > INTEGER_INTEGRAL_MAX_Z {
        return Err(Error::OutOfSupportedRange {
            what: format!("|z| = {} above {INTEGER_INTEGRAL_MAX_Z}", z.abs()),
        });
    }
    Ok(real_leg_complex(n as f64, z)?.re)
}

/// Both legs of the extended-contour representation of `J_nu(z)`.
///
/// The real-angle leg's imaginary part must vanish by odd symmetry; a residue
/// above 1e-10 is reported as a quadrature failure. Exactly integer `nu`
/// short-circuits the exponential leg to zero.
pub fn bessel_contour_split(nu: f64, z: f64) -> Result<ContourSplit> {
    if !(nu.is_finite() && z.is_finite()) {
        return Err(Error::NonFinite {
            what: "order/argument",
        });
    }
    if !(0.0..=CONTOUR_MAX_NU).contains(&nu) {
        return Err(Error::OutOfSupportedRange {
            what: format!("order nu = {nu} outside [0, {CONTOUR_MAX_NU}]"),
        });
    }
    if !(z > 0.0 && z <= CONTOUR_MAX_Z) {
        return Err(Error::OutOfSupportedRange {
            what: format!("argument z = {z} outside (0, {CONTOUR_MAX_Z}]"),
        });
    }
    let real = real_leg_complex(nu, z)?;
    if real.im.abs() > 1e-10 {
        return Err(Error::QuadratureFailure);
    }
    let imag_leg = if nu.fract() == 0.0 {
        0.0
    } else {
        -(nu * PI).sin() / PI * exponential_leg_integral(nu, z)?
    };
    Ok(ContourSplit {
        real_leg: real.re,
        imag_leg,
        total: real.re + imag_leg,
    })
}

/// `imag_leg(alpha, z) / sin(alpha pi)` for each strength, pairing order
/// `nu = alpha`. Dividing the sin factor out exactly leaves the smooth,
/// strictly negative residual integral `-(1/pi) int_0^inf e^{-z sinh u - alpha u} du`.
pub fn scattered_scaling(alphas: &[f64], z: f64) -> Result<Vec<f64>> {
    alphas
        .iter()
        .map(|&alpha| {
            if alpha.fract() == 0.0 {
                return Err(Error::NonIntegerAlpha { alpha });
            }
            if !(0.0..1.0).contains(&alpha) {
                return Err(Error::OutOfSupportedRange {
                    what: format!("alpha = {alpha} outside (0, 1)"),
                });
            }
            let split = bessel_contour_split(alpha, z)?;
            Ok(split.imag_leg / (alpha * PI).sin())
        })
        .collect()
}

/// Angular mode of the inverse momentum transform:
/// `(1/2pi) int e^{-i k r sin t} e^{i (m+alpha) t} dt` over the real angles
/// for integer order, over the extended contour otherwise. Negative orders
/// are folded to `|m+alpha|` with the phase factor `e^{i pi (m+alpha)}`, so
/// the modulus always equals `J_{|m+alpha|}(k r)`.
pub fn fourier_reconstruct_mode(m: i64, alpha: f64, k: f64, r: f64) -> Result<Complex64> {
    let z = k * r;
    if !z.is_finite() || z < 0.0 {
        return Err(Error::OutOfSupportedRange {
            what: format!("k r = {z} must be finite and non-negative"),
        });
    }
    if z > CONTOUR_MAX_Z {
        return Err(Error::OutOfSupportedRange {
            what: format!("k r = {z} above {CONTOUR_MAX_Z}"),
        });
    }
    let order = m as f64 + alpha;
    if z == 0.0 {
        // Zero-argument limit: the real leg gives sin(nu pi)/(nu pi), the
        // exponential leg cancels it exactly for nu > 0.
        return Ok(if order == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        });
    }
    let folded = order.abs();
    let split = bessel_contour_split(folded, z)?;
    let value = Complex64::new(split.total, 0.0);
    Ok(if order < 0.0 {
        Complex64::cis(PI * order) * value
    } else {
        value
    })
}

/// One row of a split table export.
#[derive(Clone, Copy, Debug)]
pub struct SplitRow {
    pub nu: f64,
    pub z: f64,
    pub split: ContourSplit,
    /// Reference value from an independent evaluation route.
    pub series_ref: f64,
}

/// CSV export with header `nu,z,real_leg,imag_leg,total,series_ref`,
/// scientific notation at 17 significant digits.
pub fn write_split_table<W: Write>(rows: &[SplitRow], w: &mut W) -> std::io::Result<()> {
    writeln!(w, "nu,z,real_leg,imag_leg,total,series_ref")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            crate::fmt::sci17(row.nu),
            crate::fmt::sci17(row.z),
            crate::fmt::sci17(row.split.real_leg),
            crate::fmt::sci17(row.split.imag_leg),
            crate::fmt::sci17(row.split.total),
            crate::fmt::sci17(row.series_ref)
        )?;
    }
    Ok(())
}
