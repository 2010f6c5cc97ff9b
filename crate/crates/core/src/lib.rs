//! Dually flat geometry of finite exponential families and the Weyl group
//! of their toric Kähler torifications.
//!
//! The crate computes the Fisher metric, α-connections and Legendre
//! duality of a finite exponential family, verifies the Kähler structure
//! that Dombrowski's construction puts on its tangent bundle, and
//! enumerates the Weyl group of the torification twice: once from affine
//! witnesses of outcome permutations ([`weyl`]) and once as the metric
//! symmetries of the momentum polytope ([`polytope`]). The [`torus`]
//! module models the normalizer `T^n ⋊ W`.

pub mod cli;
pub mod dombrowski;
pub mod error;
pub mod expfam;
pub mod geometry;
pub mod groups;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod scalar;
pub mod torus;
pub mod weyl;

pub use error::{Error, Result};
pub use expfam::{Backend, ChristoffelArray, FiniteExpFam, MetricTensor};
