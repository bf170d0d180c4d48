//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors produced by automaton operations, the compiler, and the analyzers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("symbol {symbol:?} is not in the alphabet")]
    UnknownSymbol { symbol: String },

    #[error("track index {index} out of range for arity {arity}")]
    TrackIndex { index: usize, arity: usize },

    #[error("not a permutation of 1..={arity}")]
    NotAPermutation { arity: usize },

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("linkage arity constraint violated: {0}")]
    LinkArity(String),

    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("unknown relation {name}")]
    UnknownRelation { name: String },

    #[error("relation name {name} already in use")]
    NameClash { name: String },

    #[error("constant {constant:?} is outside the domain")]
    ConstantOutsideDomain { constant: String },

    #[error("sentence expected, but formula has free variables: {vars:?}")]
    FreeVariables { vars: Vec<String> },

    #[error("formula has no free variables; use decide instead")]
    NotASentence,

    #[error("signature does not match: {0}")]
    WrongSignature(String),

    #[error("not an equivalence relation: {axiom} fails")]
    NotEquivalence { axiom: String },

    #[error("not a congruence for relation {relation}")]
    NotCongruence { relation: String },

    #[error("relation {name} is not functional: {reason}")]
    NotFunctional { name: String, reason: String },

    #[error("order is not linear: {axiom} fails")]
    NotLinear { axiom: String },

    #[error("not an ordinal")]
    NotOrdinal,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("axiom {axiom} does not hold")]
    AxiomFailed { axiom: String },

    #[error("state cap exceeded ({states} states, cap {cap}) while {context}")]
    StateCap { states: usize, cap: usize, context: String },

    #[error("iteration cap exceeded ({cap}) during {context}")]
    IterationCap { cap: usize, context: String },

    #[error("unknown builtin structure {name}")]
    UnknownBuiltin { name: String },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
