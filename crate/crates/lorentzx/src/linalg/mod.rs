//! Self-contained dense numerical kernels.
//!
//! Everything here is sized for the small matrices this crate works with
//! (ambient dimension `p + q`, rarely above a few dozen): a row-major dense
//! matrix, a cyclic Jacobi symmetric eigensolver, a fixed-order Pade matrix
//! exponential, and an exact minimizer of quadratics over the unit sphere.
//! All routines are deterministic for fixed input; no iteration order or
//! threshold depends on the environment.

mod expm;
mod mat;
mod sym;
mod trs;

pub use expm::expm;
pub use mat::{solve, Mat};
pub use sym::{is_psd, min_eigenvalue, sym_eigen, Eigen, SymMatrix};
pub use trs::{trs_min_on_sphere, TrsProblem, TrsSolution};
