//! Decision procedures for structures presented by finite automata.
//!
//! The crate has three layers:
//!
//! * an automaton kernel ([`automaton`], [`alphabet`], [`relation`]) with the
//!   calculus of regular relations over padded convolutions;
//! * a compiler ([`formula`], [`compiler`]) from extended first-order logic
//!   (with the "infinitely many" and "m mod n many" quantifiers) to automata,
//!   evaluated against a structure presentation ([`presentation`],
//!   [`builtins`], [`machine`]);
//! * analyzers for automatic linear orders ([`order`]), partial-order trees
//!   ([`tree`]), and Boolean algebras ([`boolalg`]).
//!
//! File formats and DOT export live in [`io`].

pub mod alphabet;
pub mod automaton;
pub mod boolalg;
pub mod builtins;
pub mod compiler;
pub mod error;
pub mod formula;
pub mod growth;
pub mod io;
pub mod machine;
pub mod order;
pub mod presentation;
pub mod relation;
pub mod tree;

pub use alphabet::{Alphabet, Component, SymbolId, TrackAlphabet};
pub use automaton::{Automaton, Limits, ProductMode};
pub use error::{Error, Result};
