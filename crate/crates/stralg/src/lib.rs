//! Order types of one-sided hammocks over string algebras.
//!
//! Strings are words of syllables read right to left. Index 0 of
//! [`strings::Str::syl`] is the first (rightmost) syllable, so extending a
//! string on the left pushes onto the end of the vector.

pub mod automaton;
pub mod bands;
pub mod completion;
pub mod condensation;
pub mod error;
pub mod hammock;
pub mod ordertype;
pub mod par;
pub mod presentation;
pub mod strings;

pub use automaton::{Algebra, ExtState, Extensions, StateId};
pub use condensation::{BContext, Workspace};
pub use error::{Error, Result};
pub use hammock::{compare_l, HammockKey};
pub use ordertype::{hammock_order_type, normalize, parse_expr, LinExpr};
pub use presentation::{AlgebraSpec, Letter, Side};
pub use strings::Str;
