//! Graded super-commutative differential polynomial rings over the rationals.
//!
//! A ring is described by an [`Alphabet`] of variable families. Each family
//! has a parity, a number of indices and a range of jet levels; a variable is
//! a triple `(family, index, level)`. Odd variables anticommute and square to
//! zero. Everything is graded by per-family degree and by weight.

mod alphabet;
mod basis;
mod derivation;
mod poly;
mod text;

pub use alphabet::{Alphabet, FamilySpec, Parity, RepLabel, Variable};
pub use basis::{graded_basis, grade_pieces, variables_up_to};
pub use derivation::{apply_derivation, Derivation, DerivationSpec, JetDerivative};
pub use poly::{grade_of, Grade, GradeOf, Monomial, Poly};
pub use text::parse_poly;
