//! Fine-scale local statistics of sequences on the torus [0,1) — fractional
//! parts of √n, arithmetic families, seeded uniform baselines, and directions
//! in affine lattices — together with the SL(2,R)⋉R² lattice machinery whose
//! counting bounds control them, Poisson reference laws, and Diophantine-type
//! estimation.

pub mod constants;
pub mod diophantine;
pub mod error;
pub mod io;
pub mod lattice_space;
pub mod reference_laws;
pub mod sequences;
pub mod statistics;
pub mod verify;

pub use error::{Error, Result};
