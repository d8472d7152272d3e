//! Exact rational matrices and the subspace lattice.

mod elim;
mod mat;
mod subspace;

pub use mat::{frac, int, Mat, Rational};
pub use subspace::{complement, complement_from, Subspace};
