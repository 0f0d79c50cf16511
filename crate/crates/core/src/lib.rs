//! Computational core for Springer theory of type A and cyclic quivers.
//!
//! - [`quiver`]: quiver shapes, dimension vectors, compositions and flag dimensions.
//! - [`nilrep`]: nilpotent representations as multisegments, socles, Hom and orbit dimensions.
//! - [`paving`]: the recursive affine paving of quiver flag varieties and a finite-field
//!   point-counting oracle.
//! - [`series`]: truncated Laurent series in the half-twist variable `u` (`q = u^2`).
//! - [`extalg`]: graded dimensions of extension algebra blocks, geometric and KLR.
//! - [`klr`]: the polynomial representation of the KLR algebra and the smash product `S ⋊ Q[W]`.
//! - [`homotopy`]: bounded complexes of graded free modules, cones, weight truncation and
//!   minimization.
//! - [`suites`] and [`cli`]: verification batteries and the command-line surface.

pub mod cli;
pub mod error;
pub mod extalg;
pub mod homotopy;
pub mod klr;
pub mod linalg;
pub mod nilrep;
pub mod paving;
pub mod quiver;
pub mod series;
pub mod suites;

pub use error::{Error, Result};
pub use quiver::{Composition, DimVector, Quiver, QuiverKind};
pub use nilrep::{Multisegment, Segment};
pub use series::HalfLaurentSeries;
