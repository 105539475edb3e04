//! Word calculus for layered HNN extensions, the two tower constructions
//! built from it, bounded oracles for their structural lemmas, and exact
//! verification kernels for the field-extension matrices and the ordered
//! exponent-2 group.

pub mod construction;
pub mod error;
pub mod field;
pub mod minstruct;
pub mod oracles;
pub mod par;
pub mod tower;
pub mod words;

pub use error::{ParseError, TowerError};
pub use tower::{ExtensionStep, ExtensionTower, NormalForm, StepKind, Strategy};
pub use words::{Letter, Symbol, Word};
