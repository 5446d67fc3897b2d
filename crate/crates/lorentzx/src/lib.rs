//! Verification toolkit for the extended Lorentz cones
//!
//! ```text
//! L(p,q) = { (x,u) in R^p x R^q : x_k >= ||u||  for every k }
//! M(p,q) = { (x,u) in R^p x R^q : <x,e> >= ||u||,  x >= 0 }
//! ```
//!
//! The two cones are mutually dual. The crate answers three kinds of question:
//!
//! * membership of a point in `L` or `M`, including the quadratic-form route
//!   through the characteristic matrix `J = [[E, 0], [0, -I]]`;
//! * whether a linear operator `A` maps `M(p,q)` into itself (a *positive
//!   operator* of the cone), decided exactly through the extreme-ray
//!   reduction in [`posop`], with supporting necessary and sufficient
//!   condition batteries that produce checkable certificates;
//! * evidence for the Lyapunov-like property of an operator on the
//!   complementarity set of the cone pair.
//!
//! All randomness flows through [`rng::RngStream`], a counter-based generator
//! whose substreams are indexed explicitly, so every sampling routine is
//! reproducible for a given seed and independent of worker count when the
//! `parallel` feature is enabled.

pub mod cone;
pub mod error;
pub mod gen;
pub mod linalg;
pub mod posop;
pub mod rng;
pub mod tol;

mod exec;

pub use cone::{ConeDims, PointPQ};
pub use error::{Error, Result};
pub use tol::Tolerances;
