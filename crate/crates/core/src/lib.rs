//! Cellular automata over monoids: finite and built-in infinite monoids,
//! congruences, shift spaces, and surjunctivity analysis.

pub mod analysis;
pub mod cli;
pub mod ca;
pub mod congruence;
pub mod error;
pub mod monoid;
pub mod report;
pub mod shift;
mod text;

pub use ca::CellularAutomaton;
pub use congruence::Congruence;
pub use error::{Error, Result};
pub use monoid::{Element, FiniteMonoid, MonoidHandle};
pub use report::Report;
pub use shift::{Configuration, WindowConfiguration};
