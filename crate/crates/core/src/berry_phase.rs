//! Geometric phase accumulated along paths over a flux background.
//!
//! Transporting a plane-wave state along a path picks up the phase
//! `-int eA . dl`. With counterclockwise-positive angles this sign convention
//! makes a ccw loop around a single flux of strength alpha yield `-2 pi alpha`,
//! and reproduces the projected solution
//!
//! ```text
//! psi(p) = exp(i k.p) prod_i exp(-i alpha_i (phi - phi0)_i(p))
//! ```
//!
//! whose branch cuts run from every flux toward the ideal point. The phase is
//! computed two independent ways: adaptive line quadrature of the vector
//! potential, and continuous-angle unwrapping about each flux. Paths are
//! polylines; curved paths must be pre-sampled by the caller.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::flux_geometry::{wrap_principal, FluxConfig, PlanePoint};
use crate::quad;

/// Paths (and unwrapping centers) must stay this far from every flux.
pub const PATH_CLEARANCE: f64 = 1e-6;

/// Per-segment subdivision limit of the line quadrature: 2^20 intervals.
const MAX_QUAD_DEPTH: u32 = 20;

/// Angular offset used to probe both sides of a branch cut.
const CUT_PROBE_OFFSET: f64 = 1e-8;

/// An ordered planar polyline, open or closed.
///
/// Invariants: at least two points, consecutive points distinct, and a closed
/// path repeats its first point exactly as its last. Clearance from flux
/// positions is checked against a [`FluxConfig`] at use time.
///
/// Serializes as `{"points":[[x,y],...],"closed":bool}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathRepr", into = "PathRepr")]
pub struct PathPolyline {
    points: Vec<PlanePoint>,
    closed: bool,
}

#[derive(Serialize, Deserialize)]
struct PathRepr {
    points: Vec<PlanePoint>,
    closed: bool,
}

impl TryFrom<PathRepr> for PathPolyline {
    type Error = Error;
    fn try_from(r: PathRepr) -> Result<Self> {
        PathPolyline::new(r.points, r.closed)
    }
}

impl From<PathPolyline> for PathRepr {
    fn from(p: PathPolyline) -> Self {
        PathRepr {
            points: p.points,
            closed: p.closed,
        }
    }
}

impl PathPolyline {
    pub fn new(points: Vec<PlanePoint>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidPath {
                reason: format!("need at least 2 points, got {}", points.len()),
            });
        }
        for p in &points {
            if !p.is_finite() {
                return Err(Error::NonFinite {
                    what: "path point",
                });
            }
        }
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidPath {
                    reason: "consecutive points must be distinct".into(),
                });
            }
        }
        if closed && points.first() != points.last() {
            return Err(Error::InvalidPath {
                reason: "closed path must repeat its first point exactly".into(),
            });
        }
        Ok(Self { points, closed })
    }

    pub fn open(points: Vec<PlanePoint>) -> Result<Self> {
        Self::new(points, false)
    }

    pub fn closed_loop(points: Vec<PlanePoint>) -> Result<Self> {
        Self::new(points, true)
    }

    pub fn points(&self) -> &[PlanePoint] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    fn segments(&self) -> impl Iterator<Item = (PlanePoint, PlanePoint)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// Check the no-segment-within-`PATH_CLEARANCE`-of-a-flux invariant.
    pub fn check_clearance(&self, config: &FluxConfig) -> Result<()> {
        for f in &config.fluxes {
            for (a, b) in self.segments() {
                if segment_point_distance(a, b, f.position) < PATH_CLEARANCE {
                    return Err(Error::PathThroughFlux {
                        limit: PATH_CLEARANCE,
                    });
                }
            }
        }
        Ok(())
    }
}

fn segment_point_distance(a: PlanePoint, b: PlanePoint, p: PlanePoint) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return a.distance_to(p);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance_to(PlanePoint::new(a.x + t * dx, a.y + t * dy))
}

/// Accumulated phase together with the continuous per-flux angle changes and,
/// for closed paths, the integer winding numbers about each flux.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    /// Phase in radians, `-int eA . dl` or its analytic equivalent.
    pub phase: f64,
    /// Continuous change of the angle about each flux, in path order.
    pub per_flux_angle_change: Vec<f64>,
    /// Winding numbers about each flux; `None` for open paths.
    pub windings: Option<Vec<i64>>,
}

/// Continuous (unwrapped) angle of the path vertices about `center`.
///
/// The first entry is the principal-branch angle of the first vertex; each
/// subsequent entry continues the previous one, with segments bisected
/// internally until every piece subtends less than pi/2.
pub fn unwrap_angle(path: &PathPolyline, center: PlanePoint) -> Result<Vec<f64>> {
    for (a, b) in path.segments() {
        if segment_point_distance(a, b, center) < PATH_CLEARANCE {
            return Err(Error::PathThroughFlux {
                limit: PATH_CLEARANCE,
            });
        }
    }
    let pts = path.points();
    let mut angles = Vec::with_capacity(pts.len());
    let first = pts[0];
    let mut theta = (first.y - center.y).atan2(first.x - center.x);
    angles.push(theta);
    for (a, b) in path.segments() {
        theta += segment_sweep(a, b, center, 64)?;
        angles.push(theta);
    }
    Ok(angles)
}

/// Signed angle swept about `center` along the straight segment a -> b.
///
/// The sweep of a straight segment whose endpoints are off-center is always
/// inside (-pi, pi); bisection keeps each evaluated piece well inside the
/// principal branch so the wrap is unambiguous.
fn segment_sweep(a: PlanePoint, b: PlanePoint, center: PlanePoint, depth: u32) -> Result<f64> {
    let ta = (a.y - center.y).atan2(a.x - center.x);
    let tb = (b.y - center.y).atan2(b.x - center.x);
    let d = wrap_principal(tb - ta);
    if d.abs() <= FRAC_PI_2 {
        return Ok(d);
    }
    if depth == 0 {
        return Err(Error::PathThroughFlux {
            limit: PATH_CLEARANCE,
        });
    }
    let mid = PlanePoint::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
    Ok(segment_sweep(a, mid, center, depth - 1)? + segment_sweep(mid, b, center, depth - 1)?)
}

/// Integer number of signed full turns a closed path makes about `center`.
pub fn winding_number(path: &PathPolyline, center: PlanePoint) -> Result<i64> {
    if !path.is_closed() {
        return Err(Error::PathNotClosed);
    }
    let angles = unwrap_angle(path, center)?;
    let delta = angles.last().unwrap() - angles.first().unwrap();
    Ok((delta / TAU).round() as i64)
}

fn per_flux_sweeps(config: &FluxConfig, path: &PathPolyline) -> Result<Vec<f64>> {
    config
        .fluxes
        .iter()
        .map(|f| {
            let angles = unwrap_angle(path, f.position)?;
            Ok(angles.last().unwrap() - angles.first().unwrap())
        })
        .collect()
}

fn assemble_result(path: &PathPolyline, phase: f64, sweeps: Vec<f64>) -> PhaseResult {
    let windings = path
        .is_closed()
        .then(|| sweeps.iter().map(|d| (d / TAU).round() as i64).collect());
    PhaseResult {
        phase,
        per_flux_angle_change: sweeps,
        windings,
    }
}

/// Phase by adaptive line quadrature of the vector potential:
/// `phase = -int_path eA . dl`, to absolute tolerance `tol`.
pub fn phase_line_integral(
    config: &FluxConfig,
    path: &PathPolyline,
    tol: f64,
) -> Result<PhaseResult> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::NonFinite {
            what: "quadrature tolerance",
        });
    }
    path.check_clearance(config)?;
    let n_seg = path.points().len() - 1;
    let tol_seg = tol / n_seg as f64;
    let mut integral = 0.0;
    for (a, b) in path.segments() {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let f = |t: f64| {
            let p = PlanePoint::new(a.x + t * dx, a.y + t * dy);
            let pot = config.vector_potential_unchecked(p);
            pot[0] * dx + pot[1] * dy
        };
        integral += quad::adaptive_simpson(&f, 0.0, 1.0, tol_seg, MAX_QUAD_DEPTH)
            .map_err(|_| Error::ToleranceNotReached { tol })?;
    }
    let sweeps = per_flux_sweeps(config, path)?;
    Ok(assemble_result(path, -integral, sweeps))
}

/// Phase by continuous-angle unwrapping: `-sum_i alpha_i * Delta(phi_i)`,
/// where `Delta(phi_i)` is the unwrapped angle change of the path about flux
/// `i`. Agrees with [`phase_line_integral`].
pub fn phase_analytic(config: &FluxConfig, path: &PathPolyline) -> Result<PhaseResult> {
    path.check_clearance(config)?;
    let sweeps = per_flux_sweeps(config, path)?;
    let phase = -config
        .fluxes
        .iter()
        .zip(&sweeps)
        .map(|(f, d)| f.alpha * d)
        .sum::<f64>();
    Ok(assemble_result(path, phase, sweeps))
}

/// The projected plane-wave particular solution
/// `exp(i k.p) prod_i exp(-i alpha_i (phi - phi0)_i(p))`.
///
/// The wave vector is `k (cos incidence_angle, sin incidence_angle)`. Each
/// relative angle is taken on the branch [0, 2pi) whose discontinuity lies on
/// the cut ray from the flux toward the ideal point, so the projection jumps
/// by `exp(-i 2 pi alpha_i)` across flux i's cut. Unit modulus everywhere.
pub fn plane_wave_state(
    config: &FluxConfig,
    k: f64,
    incidence_angle: f64,
    p: PlanePoint,
) -> Result<Complex64> {
    if !p.is_finite() {
        return Err(Error::NonFinite {
            what: "evaluation point",
        });
    }
    let k_dot_p = k * (incidence_angle.cos() * p.x + incidence_angle.sin() * p.y);
    let mut gauge = 0.0;
    for i in 0..config.fluxes.len() {
        gauge += config.fluxes[i].alpha * config.cut_branch_angle(i, p)?;
    }
    Ok(Complex64::cis(k_dot_p - gauge))
}

/// Ratio of [`plane_wave_state`] just below over just above the cut ray of
/// flux `flux_index`, probed at distance `radius` from the flux with angular
/// offsets of `1e-8` rad. Equals `exp(-i 2 pi alpha_i)` up to O(k r * 1e-8);
/// the plane-wave factor cancels in the ratio.
pub fn cut_discontinuity(
    config: &FluxConfig,
    flux_index: usize,
    radius: f64,
) -> Result<Complex64> {
    let f = config
        .fluxes
        .get(flux_index)
        .ok_or(Error::IndexOutOfRange {
            index: flux_index,
            len: config.fluxes.len(),
        })?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidGeometry {
            reason: "cut probe radius must be positive".into(),
        });
    }
    let probe = |offset: f64| {
        let angle = config.ideal_angle + offset;
        let p = PlanePoint::new(
            f.position.x + radius * angle.cos(),
            f.position.y + radius * angle.sin(),
        );
        plane_wave_state(config, 1.0, 0.0, p)
    };
    let below = probe(-CUT_PROBE_OFFSET)?;
    let above = probe(CUT_PROBE_OFFSET)?;
    Ok(below / above)
}
