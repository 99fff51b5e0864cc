//! Two-beam winding experiment.
//!
//! Two coherent electron beams aim at a screen; one of them has been carried
//! `n` full turns around a flux of strength alpha while staying coherent with
//! the static one. The wound beam returns with the extra phase
//! `(2 pi n alpha) mod 2pi`, so the superposed fringes shift: for alpha = 1/2
//! the pattern is bimodal (in phase or anti-phase with the winding parity),
//! and for alpha = p/q a q-state phase logic.
//!
//! Beams are ideal unit-amplitude plane waves. The screen is one-dimensional;
//! translational symmetry along the flux axis makes the 2d model exact. The
//! transverse wave-vector difference is `k * beam_separation` (small-angle
//! far-field geometry per unit propagation distance).

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::io::Write;

use crate::error::{Error, Result};

/// Phase-difference tolerance separating the named contrast classes.
pub const CONTRAST_TOL: f64 = 1e-9;

/// Experiment geometry and flux parameters.
///
/// When the strength is supplied as an exact rational p/q the phase classes
/// are enumerable and results carry a modal-state index; a plain float
/// strength reports only the phase difference and contrast class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Flux strength.
    pub alpha: f64,
    /// Reduced rational form of alpha when exactly known.
    pub rational: Option<(i64, i64)>,
    /// Number of full turns the wound beam made.
    pub winding: i64,
    /// Wavenumber, > 0.
    pub k: f64,
    /// Transverse beam separation per unit distance, > 0.
    pub beam_separation: f64,
    /// Number of screen samples, >= 2.
    pub screen_points: usize,
    /// Screen width in length units, > 0.
    pub screen_width: f64,
}

impl ExperimentSpec {
    pub fn new(
        alpha: f64,
        winding: i64,
        k: f64,
        beam_separation: f64,
        screen_points: usize,
        screen_width: f64,
    ) -> Result<Self> {
        let spec = Self {
            alpha,
            rational: None,
            winding,
            k,
            beam_separation,
            screen_points,
            screen_width,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Strength given as the exact rational p/q (reduced internally).
    pub fn with_rational(
        p: i64,
        q: i64,
        winding: i64,
        k: f64,
        beam_separation: f64,
        screen_points: usize,
        screen_width: f64,
    ) -> Result<Self> {
        if q <= 0 {
            return Err(Error::InvalidGeometry {
                reason: format!("rational strength needs a positive denominator, got {q}"),
            });
        }
        let g = gcd(p.unsigned_abs(), q as u64) as i64;
        let (p, q) = (p / g, q / g);
        let spec = Self {
            alpha: p as f64 / q as f64,
            rational: Some((p, q)),
            winding,
            k,
            beam_separation,
            screen_points,
            screen_width,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite()
            && self.k.is_finite()
            && self.beam_separation.is_finite()
            && self.screen_width.is_finite())
        {
            return Err(Error::NonFinite {
                what: "experiment parameter",
            });
        }
        if self.k <= 0.0 || self.beam_separation <= 0.0 || self.screen_width <= 0.0 {
            return Err(Error::InvalidGeometry {
                reason: "k, beam separation and screen width must be positive".into(),
            });
        }
        if self.screen_points < 2 {
            return Err(Error::InvalidGeometry {
                reason: format!("screen_points = {} must be at least 2", self.screen_points),
            });
        }
        Ok(())
    }

    /// Screen sample positions, inclusive across the width.
    pub fn screen_positions(&self) -> Vec<f64> {
        let n = self.screen_points;
        (0..n)
            .map(|j| -0.5 * self.screen_width + self.screen_width * j as f64 / (n - 1) as f64)
            .collect()
    }

    /// Transverse wave-vector difference between the two beams.
    pub fn delta_k(&self) -> f64 {
        self.k * self.beam_separation
    }

    /// Relative phase between the wound and static beams. Exact (integer
    /// arithmetic) when the strength is rational.
    pub fn phase_difference(&self) -> f64 {
        match self.rational {
            Some((p, q)) => {
                TAU * (modal_index(p, q, self.winding) as f64) / q as f64
            }
            None => winding_phase(self.alpha, self.winding),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn modal_index(p: i64, q: i64, n: i64) -> i64 {
    ((n as i128 * p as i128).rem_euclid(q as i128)) as i64
}

/// Contrast classification of the superposed beams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ContrastClass {
    InPhase,
    AntiPhase,
    Intermediate,
}

/// Outcome of one experiment run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterferenceResult {
    /// Relative beam phase in [0, 2pi).
    pub phase_difference: f64,
    pub contrast_class: ContrastClass,
    /// `|1 + e^{i(dk x + dphi)}|^2` sampled across the screen; values in [0, 4].
    pub intensity_profile: Vec<f64>,
    /// Phase-class index in [0, q) when the strength is rational.
    pub modal_state: Option<i64>,
}

/// `(2 pi n alpha) mod 2pi` in [0, 2pi): the relative geometric phase between
/// a beam wound `n` times around the flux and a static one. Exact for
/// half-integer multiples (dyadic fractions of a turn).
pub fn winding_phase(alpha: f64, n: i64) -> f64 {
    TAU * (n as f64 * alpha).rem_euclid(1.0)
}

/// The distinct relative phases `{(2 pi n p/q) mod 2pi : n integer}` for a
/// rational strength p/q in lowest terms: exactly q values, increasing.
pub fn logic_states(p: i64, q: i64) -> Result<Vec<f64>> {
    if q < 2 {
        return Err(Error::InvalidModulus { q });
    }
    if gcd(p.unsigned_abs(), q as u64) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok((0..q).map(|j| TAU * j as f64 / q as f64).collect())
}

/// Superpose the two beams on the screen.
pub fn interference_pattern(spec: &ExperimentSpec) -> Result<InterferenceResult> {
    spec.validate()?;
    let dphi = spec.phase_difference();
    let dk = spec.delta_k();
    let intensity_profile = spec
        .screen_positions()
        .iter()
        .map(|&x| 2.0 + 2.0 * (dk * x + dphi).cos())
        .collect();

    let circular_distance_to_zero = dphi.min(TAU - dphi);
    let contrast_class = if circular_distance_to_zero < CONTRAST_TOL {
        ContrastClass::InPhase
    } else if (dphi - PI).abs() < CONTRAST_TOL {
        ContrastClass::AntiPhase
    } else {
        ContrastClass::Intermediate
    };

    Ok(InterferenceResult {
        phase_difference: dphi,
        contrast_class,
        intensity_profile,
        modal_state: spec
            .rational
            .map(|(p, q)| modal_index(p, q, spec.winding)),
    })
}

/// CSV export of the intensity profile, header `x,intensity`, scientific
/// notation at 17 significant digits.
pub fn write_profile_csv<W: Write>(
    spec: &ExperimentSpec,
    result: &InterferenceResult,
    w: &mut W,
) -> std::io::Result<()> {
    writeln!(w, "x,intensity")?;
    for (x, i) in spec.screen_positions().iter().zip(&result.intensity_profile) {
        writeln!(w, "{},{}", crate::fmt::sci17(*x), crate::fmt::sci17(*i))?;
    }
    Ok(())
}
