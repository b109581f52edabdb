//! Arithmetic foundation: MPFR reals and complexes, exact rationals,
//! real quadratic fields, special functions and small linear algebra.

pub mod complex;
pub mod intmat;
pub mod linalg;
pub mod quadfield;
pub mod rational;
pub mod special;

pub use complex::Complex;
pub use quadfield::QuadElem;
pub use rational::{rational_reconstruct, Reconstruction};
pub use special::{upper_incomplete_gamma_half, GaussLegendre};

/// Default working precision in bits.
pub const DEFAULT_PREC: u32 = 256;
