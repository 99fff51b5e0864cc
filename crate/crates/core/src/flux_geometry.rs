//! Multi-flux background geometry.
//!
//! A configuration is a set of idealized point magnetic fluxes (infinitely
//! thin coils piercing the plane) plus the direction of the ideal reference
//! point at infinity. The field-free vector potential of the background is
//!
//! ```text
//! eA(r) = sum_i alpha_i  z_hat x (r - a_i) / |r - a_i|^2,
//! ```
//!
//! curl-free away from the flux positions. Units: hbar = 1, the charge is
//! absorbed into the dimensionless strengths `alpha_i`; energy enters the
//! rest of the crate only through the wavenumber k = sqrt(2 m E).
//!
//! Angle convention throughout: counterclockwise positive, principal branch
//! (-pi, pi], two-argument arctangent.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Fluxes closer than this are rejected as duplicates.
pub const MIN_FLUX_SEPARATION: f64 = 1e-12;

/// The potential is singular at a flux; evaluations inside this radius fail
/// rather than returning a huge value.
pub const FLUX_EXCLUSION_RADIUS: f64 = 1e-9;

/// Wrap an angle to the principal branch (-pi, pi].
pub fn wrap_principal(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// A point of the plane, in length units.
///
/// Serializes as a two-element array `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_to(&self, other: PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for PlanePoint {
    fn from(v: [f64; 2]) -> Self {
        Self { x: v[0], y: v[1] }
    }
}

impl From<PlanePoint> for [f64; 2] {
    fn from(p: PlanePoint) -> Self {
        [p.x, p.y]
    }
}

/// One point flux: position and dimensionless strength.
///
/// Serializes flat as `{"x": ..., "y": ..., "alpha": ...}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "FluxRepr", into = "FluxRepr")]
pub struct Flux {
    pub position: PlanePoint,
    pub alpha: f64,
}

#[derive(Serialize, Deserialize)]
struct FluxRepr {
    x: f64,
    y: f64,
    alpha: f64,
}

impl From<FluxRepr> for Flux {
    fn from(r: FluxRepr) -> Self {
        Flux {
            position: PlanePoint::new(r.x, r.y),
            alpha: r.alpha,
        }
    }
}

impl From<Flux> for FluxRepr {
    fn from(f: Flux) -> Self {
        FluxRepr {
            x: f.position.x,
            y: f.position.y,
            alpha: f.alpha,
        }
    }
}

impl Flux {
    pub fn new(x: f64, y: f64, alpha: f64) -> Self {
        Self {
            position: PlanePoint::new(x, y),
            alpha,
        }
    }
}

/// The entire background: flux positions and strengths plus the direction
/// `ideal_angle` of the reference point at infinity, which anchors the zero
/// of all relative angles and the branch-cut directions.
///
/// An empty flux list is valid and describes free space. Immutable once
/// validated; all operations are pure and safe to call concurrently.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxConfig {
    pub fluxes: Vec<Flux>,
    pub ideal_angle: f64,
}

impl FluxConfig {
    /// Validate and normalize a raw configuration: wraps `ideal_angle` to the
    /// principal branch, rejects non-finite fields and coincident fluxes.
    pub fn validated(mut self) -> Result<Self> {
        if !self.ideal_angle.is_finite() {
            return Err(Error::NonFinite {
                what: "ideal_angle",
            });
        }
        for f in &self.fluxes {
            if !f.position.is_finite() {
                return Err(Error::NonFinite {
                    what: "flux position",
                });
            }
            if !f.alpha.is_finite() {
                return Err(Error::NonFinite {
                    what: "flux strength alpha",
                });
            }
        }
        for i in 0..self.fluxes.len() {
            for j in (i + 1)..self.fluxes.len() {
                if self.fluxes[i].position.distance_to(self.fluxes[j].position)
                    <= MIN_FLUX_SEPARATION
                {
                    return Err(Error::DuplicateFlux {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        self.ideal_angle = wrap_principal(self.ideal_angle);
        Ok(self)
    }

    pub fn new(fluxes: Vec<Flux>, ideal_angle: f64) -> Result<Self> {
        Self {
            fluxes,
            ideal_angle,
        }
        .validated()
    }

    /// Free space: no fluxes.
    pub fn free_space(ideal_angle: f64) -> Self {
        Self {
            fluxes: Vec::new(),
            ideal_angle: wrap_principal(ideal_angle),
        }
    }

    pub fn single(alpha: f64, position: PlanePoint, ideal_angle: f64) -> Result<Self> {
        Self::new(
            vec![Flux {
                position,
                alpha,
            }],
            ideal_angle,
        )
    }

    /// `eA(p)`, the in-plane vector potential of all fluxes at `p`.
    ///
    /// Fails if `p` lies within [`FLUX_EXCLUSION_RADIUS`] of any flux.
    pub fn vector_potential(&self, p: PlanePoint) -> Result<[f64; 2]> {
        if !p.is_finite() {
            return Err(Error::NonFinite {
                what: "evaluation point",
            });
        }
        for f in &self.fluxes {
            if p.distance_to(f.position) < FLUX_EXCLUSION_RADIUS {
                return Err(Error::TooCloseToFlux {
                    limit: FLUX_EXCLUSION_RADIUS,
                });
            }
        }
        Ok(self.vector_potential_unchecked(p))
    }

    /// Same sum without the exclusion check; callers guarantee clearance.
    pub(crate) fn vector_potential_unchecked(&self, p: PlanePoint) -> [f64; 2] {
        let mut ax = 0.0;
        let mut ay = 0.0;
        for f in &self.fluxes {
            let dx = p.x - f.position.x;
            let dy = p.y - f.position.y;
            let r2 = dx * dx + dy * dy;
            // z_hat x (dx, dy) = (-dy, dx)
            ax += f.alpha * (-dy) / r2;
            ay += f.alpha * dx / r2;
        }
        [ax, ay]
    }

    /// Principal-branch angle in (-pi, pi] between the ray from flux
    /// `flux_index` to `p` and the ray from that flux toward the ideal point.
    pub fn relative_angle(&self, flux_index: usize, p: PlanePoint) -> Result<f64> {
        let f = self
            .fluxes
            .get(flux_index)
            .ok_or(Error::IndexOutOfRange {
                index: flux_index,
                len: self.fluxes.len(),
            })?;
        if p.distance_to(f.position) < FLUX_EXCLUSION_RADIUS {
            return Err(Error::TooCloseToFlux {
                limit: FLUX_EXCLUSION_RADIUS,
            });
        }
        let theta = (p.y - f.position.y).atan2(p.x - f.position.x);
        Ok(wrap_principal(theta - self.ideal_angle))
    }

    /// Relative angle remapped to the branch [0, 2pi), whose discontinuity
    /// lies on the cut ray from the flux toward the ideal point. This is the
    /// branch used when projecting the plane-wave solution onto the plane.
    pub(crate) fn cut_branch_angle(&self, flux_index: usize, p: PlanePoint) -> Result<f64> {
        let rel = self.relative_angle(flux_index, p)?;
        Ok(if rel < 0.0 { rel + TAU } else { rel })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_examples() {
        assert!((wrap_principal(7.0) - 0.7168146928204138).abs() < 1e-15);
        assert_eq!(wrap_principal(PI), PI);
        assert_eq!(wrap_principal(-PI), PI);
        assert_eq!(wrap_principal(0.0), 0.0);
    }

    #[test]
    fn validate_wraps_ideal_angle() {
        let cfg = FluxConfig {
            fluxes: vec![],
            ideal_angle: 7.0,
        }
        .validated()
        .unwrap();
        assert!((cfg.ideal_angle - 0.7168146928204138).abs() < 1e-15);
    }

    #[test]
    fn validate_rejects_duplicates() {
        let cfg = FluxConfig {
            fluxes: vec![Flux::new(0.0, 0.0, 0.5), Flux::new(0.0, 0.0, -0.5)],
            ideal_angle: 0.0,
        };
        assert!(matches!(
            cfg.validated(),
            Err(Error::DuplicateFlux { first: 0, second: 1 })
        ));
    }

    #[test]
    fn validate_keeps_normalized_config() {
        let cfg = FluxConfig::single(0.5, PlanePoint::new(0.0, 0.0), 0.0).unwrap();
        assert_eq!(cfg.ideal_angle, 0.0);
        assert_eq!(cfg.fluxes.len(), 1);
    }

    #[test]
    fn validate_rejects_nan() {
        let cfg = FluxConfig {
            fluxes: vec![Flux::new(f64::NAN, 0.0, 0.5)],
            ideal_angle: 0.0,
        };
        assert!(matches!(cfg.validated(), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn potential_single_flux() {
        let cfg = FluxConfig::single(0.5, PlanePoint::new(0.0, 0.0), 0.0).unwrap();
        let a = cfg.vector_potential(PlanePoint::new(1.0, 0.0)).unwrap();
        assert!((a[0] - 0.0).abs() < 1e-15);
        assert!((a[1] - 0.5).abs() < 1e-15);

        let cfg = FluxConfig::single(0.3, PlanePoint::new(0.0, 0.0), 0.0).unwrap();
        let a = cfg.vector_potential(PlanePoint::new(0.0, 2.0)).unwrap();
        assert!((a[0] + 0.15).abs() < 1e-15);
        assert!(a[1].abs() < 1e-15);
    }

    #[test]
    fn potential_cancels_by_symmetry() {
        let cfg = FluxConfig::new(
            vec![Flux::new(1.0, 0.0, 1.0), Flux::new(-1.0, 0.0, 1.0)],
            0.0,
        )
        .unwrap();
        let a = cfg.vector_potential(PlanePoint::new(0.0, 0.0)).unwrap();
        assert!(a[0].abs() < 1e-15 && a[1].abs() < 1e-15);
    }

    #[test]
    fn potential_rejects_points_on_flux() {
        let cfg = FluxConfig::single(0.5, PlanePoint::new(0.0, 0.0), 0.0).unwrap();
        assert!(matches!(
            cfg.vector_potential(PlanePoint::new(1e-12, 0.0)),
            Err(Error::TooCloseToFlux { .. })
        ));
    }

    #[test]
    fn relative_angle_examples() {
        let cfg = FluxConfig::single(0.5, PlanePoint::new(0.0, 0.0), 0.0).unwrap();
        let a = cfg.relative_angle(0, PlanePoint::new(0.0, 1.0)).unwrap();
        assert!((a - PI / 2.0).abs() < 1e-15);
        let a = cfg.relative_angle(0, PlanePoint::new(3.0, 0.0)).unwrap();
        assert_eq!(a, 0.0);

        let cfg = FluxConfig::single(0.5, PlanePoint::new(1.0, 0.0), PI / 2.0).unwrap();
        let a = cfg.relative_angle(0, PlanePoint::new(1.0, 1.0)).unwrap();
        assert!(a.abs() < 1e-15);
    }

    #[test]
    fn relative_angle_checks_index() {
        let cfg = FluxConfig::free_space(0.0);
        assert!(matches!(
            cfg.relative_angle(0, PlanePoint::new(1.0, 0.0)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn cut_branch_has_range_zero_to_tau() {
        let cfg = FluxConfig::single(0.5, PlanePoint::new(0.0, 0.0), 0.0).unwrap();
        let below = cfg
            .cut_branch_angle(0, PlanePoint::new(1.0, -1e-6))
            .unwrap();
        let above = cfg.cut_branch_angle(0, PlanePoint::new(1.0, 1e-6)).unwrap();
        assert!(below > TAU - 1e-5);
        assert!(above < 1e-5 && above >= 0.0);
    }

    #[test]
    fn config_json_matches_declared_shape() {
        let cfg = FluxConfig::single(0.5, PlanePoint::new(0.0, 0.0), 0.0).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(
            json,
            r#"{"fluxes":[{"x":0.0,"y":0.0,"alpha":0.5}],"ideal_angle":0.0}"#
        );
        let back: FluxConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }
}
