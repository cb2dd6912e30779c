//! Cardinality bounds for point sets under a maximum-angle constraint.
//!
//! A finite set `A ⊂ R^D` has angle bound `∠A`, the largest angle `∠xyz`
//! formed by three of its points. This crate evaluates how large `A` can be
//! given `∠A ≤ θ`, and provides the machinery to check those estimates on
//! concrete configurations:
//!
//! * [`geometry`]: points, angles and the angle bound itself.
//! * [`bounds`]: `θ_d`, `η_d(θ)`, the normal-cone fraction `f_d(η)` and the
//!   resulting bound `1/f_{D−1}(η_{D−1}(θ))`.
//! * [`convexity`]: convex-position decisions with Carathéodory and obtuse
//!   witnesses.
//! * [`curvature`]: Monte Carlo normal-cone fractions, minimal enclosing caps
//!   and cone-cover certificates.
//! * [`ef`]: line packings and coverings, the doubling construction and the
//!   monochromatic odd-cycle witness.
//! * [`search`]: stochastic search for configurations with small angle bound.

pub mod bounds;
pub mod convexity;
pub mod curvature;
pub mod ef;
pub mod error;
pub mod geometry;
mod linalg;
mod lp;
pub mod quadrature;
pub mod rng;
pub mod search;

pub use error::{Error, Result};
pub use geometry::{angle_at, max_angle, Angle, Point, PointSet, UnitVector};
