//! Numerical harmonic analysis for Dirichlet polynomials and trigonometric
//! polynomials on the polytorus.

pub mod bohr;
pub mod cli;
pub mod compare;
pub mod dirichlet;
pub mod error;
pub mod io;
pub mod lift;
pub mod numeric;
pub mod plot;
pub mod polytope;
pub mod randomseries;
pub mod rng;
pub mod transference;
pub mod torus;

pub use error::{Error, Result, DEFAULT_BUDGET};
