//! Numerical geometry of weighted double bubbles in ℝⁿ.
//!
//! Competitors are surfaces of revolution described by labeled meridian
//! networks ([`profile`]). The standard bubble for any volumes and weights is
//! built by [`standard`], and [`unification`] scores competitors by their
//! relative area. [`gauss`] and [`symmetrization`] carry out the Gauss-image
//! and planar symmetrization arguments numerically.

pub mod curve;
pub mod error;
pub mod gauss;
pub mod perturb;
pub mod profile;
pub mod quadrature;
pub mod sphere;
pub mod standard;
pub mod symmetrization;
pub mod unification;

pub use error::{Error, Result};
