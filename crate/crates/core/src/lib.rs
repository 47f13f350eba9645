//! Two-dimensional continued fractions.
//!
//! This crate implements a family of interrelated objects built around the
//! triangle map `T` on the triangle `{(x, y) : 1 >= x >= y > 0}`:
//!
//! - the fast map `T`, its slow version `S`, and the conjugate strip map `F`
//!   ([`dynamics`]);
//! - triangle-sequence digit expansions and their cylinder sets
//!   ([`dynamics`], [`projective`]);
//! - the complete tree of rational pairs, generated both by inverse branches
//!   and by mediants, with exact equivalence and completeness audits
//!   ([`tree`], [`exact`]);
//! - 3x3 projective matrix representations of inverse-branch compositions
//!   ([`projective`]);
//! - invariant densities, transfer operators, and Monte Carlo experiments for
//!   Birkhoff averages in infinite measure ([`ergodic`]);
//! - wandering-rate bounds computed from an admissible-word tree
//!   ([`wandering`]).
//!
//! Everything that feeds the tree or an exactness audit runs in
//! arbitrary-precision rational arithmetic; simulations run in `f64`.

pub mod cli;
pub mod dynamics;
pub mod ergodic;
pub mod error;
pub mod exact;
pub mod projective;
pub mod quadrature;
pub mod scalar;
pub mod tree;
pub mod wandering;

pub use error::{Error, Result};
pub use exact::RationalPair;
pub use scalar::{Point2, Scalar, StripPoint};
