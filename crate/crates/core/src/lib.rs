//! Scattering of free 2d electrons on systems of parallel, infinitely thin
//! coils (point magnetic fluxes), treated as free propagation on a
//! topologically nontrivial background.
//!
//! The crate covers four connected pieces:
//!
//! - [`flux_geometry`]: the multi-flux background, its field-free vector
//!   potential, and relative angles measured from the ideal point.
//! - [`berry_phase`]: geometric phase along arbitrary polyline paths, by line
//!   quadrature and by continuous-angle unwrapping, plus the projected
//!   plane-wave solution with its branch cuts.
//! - [`partial_waves`]: fractional-order Bessel evaluation, the mode
//!   expansion of the single-flux scattering field, and far-field amplitude
//!   extraction exhibiting the sin^2(alpha pi) cross-section law.
//! - [`momentum_contour`]: integral representations of the same field in the
//!   momentum representation, where non-integer flux forces the angle domain
//!   into the complex plane; the contour splits into an incident real-angle
//!   leg and a scattered leg carrying the sin(alpha pi) factor.
//! - [`experiment`]: a two-beam interference experiment reading out the
//!   winding phase as a multimodal logic state.
//!
//! Everything is pure and deterministic; all functions are safe to call from
//! many threads at once.

pub mod berry_phase;
pub mod error;
pub mod experiment;
pub mod flux_geometry;
pub mod momentum_contour;
pub mod partial_waves;
mod quad;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Fixed-width numeric formatting for file outputs.
pub mod fmt {
    /// Scientific notation with 17 significant digits; reproducible across
    /// platforms and lossless for f64.
    pub fn sci17(x: f64) -> String {
        format!("{x:.16e}")
    }

}
