//! Exact computer algebra for invariants of truncated current Lie algebras
//! acting on jet rings, and for the βγ–bc free-field vertex algebra with its
//! N=4 superconformal sections.

pub mod algebra;
pub mod config;
pub mod error;
pub mod fock;
pub mod lie;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod presets;
pub mod rational;
pub mod sampling;
pub mod suites;
pub mod report;
pub mod vertex;

pub use error::{Error, Result};
pub use rational::Rational;
