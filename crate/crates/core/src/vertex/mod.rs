//! The βγ–bc free-field vertex superalgebra and its distinguished sections.

mod engine;
mod sections;
mod state;

pub use engine::{canonical, derivative, divided_derivative, Engine};
pub use sections::*;
pub use state::{parse_state, word_twice_tilde_weight, word_weight, Kind, Letter, State, Word};
