//! Cycle integrals of theta functions and meromorphic modular forms
//! along closed geodesics of the modular curve.

pub mod error;
pub mod numerics;
pub mod lattice;
pub mod qforms;
pub mod qseries;
pub mod theta;
pub mod cycles;
pub mod maass;

pub use error::{Error, Result};
