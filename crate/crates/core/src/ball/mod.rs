//! Exterior calculus on a spherical grid of B³ and the cocycles built on it.
//!
//! Derivatives are fourth-order finite differences in `r` and spectral in
//! both angles. The polar direction is treated as one half of a great
//! circle: every quantity that is differentiated in `θ` continues evenly
//! across the poles, so a meridian and its opposite form one periodic
//! line.

pub mod cocycle;
pub mod field;
pub mod form;
pub mod grid;

pub use cocycle::*;
pub use field::{random_potential, restrict_boundary, BallAlgebraField, BallGroupField, BoundaryClass, SphereGroupField, WaveSpec};
pub use form::{integrate_boundary, integrate_volume, PForm, SphereData};
pub use grid::BallGrid;
