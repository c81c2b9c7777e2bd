//! Crate-wide error type.
//!
//! Errors cover malformed inputs (wrong table shapes, dangling references)
//! and violated preconditions (acting on a non-free action, applying a
//! functor outside its domain). Violated *axioms* are not errors: checkers
//! return a [`ValidationReport`](crate::report::ValidationReport) instead,
//! so a broken Cayley table is data, not a panic.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("table arity mismatch in {context}: expected {expected}, got {got}")]
    TableArity {
        context: String,
        expected: usize,
        got: usize,
    },

    #[error("index {index} out of range in {context} (size {size})")]
    IndexRange {
        context: String,
        index: usize,
        size: usize,
    },

    #[error("carrier of {0} is empty")]
    EmptyCarrier(String),

    #[error("composition table defined off the composable set: {0}")]
    CompositionDomain(String),

    #[error("arrows {after} and {before} are not composable")]
    NotComposable { after: String, before: String },

    #[error("no unit arrow found at object {0}")]
    MissingUnit(String),

    #[error("no inverse found for arrow {0}")]
    MissingInverse(String),

    #[error("map is not surjective: {0} has no preimage")]
    NotSurjective(String),

    #[error("action of {elem} is not an automorphism of {group}")]
    NotByAutomorphisms { elem: String, group: String },

    #[error("invalid crossed module: {0}")]
    InvalidCrossedModule(String),

    #[error("structure map {map} is not a group homomorphism: {witness}")]
    StructureMapNotHom { map: String, witness: String },

    #[error("map {map} is not bijective: {witness}")]
    NotBijective { map: String, witness: String },

    #[error("action is not free: {0} is a nontrivial stabiliser witness")]
    NotFree(String),

    #[error("quotient composition is ill-defined: representatives {0} disagree")]
    IllDefinedComposition(String),

    #[error("base groupoid is not a fiber product groupoid: {0}")]
    BaseNotFiberProduct(String),

    #[error("bundle gerbe input is invalid: {0}")]
    InvalidGerbe(String),

    #[error("principal bundle groupoid is not base trivial: {0}")]
    NotBaseTrivial(String),

    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),

    #[error("carrier too large: {size} exceeds bound {bound}")]
    CarrierTooLarge { size: usize, bound: usize },

    #[error("level {level} would exceed the tuple cap ({size} > {cap})")]
    LevelTooLarge {
        level: usize,
        size: usize,
        cap: usize,
    },

    #[error("no group element carries {from} to {to}: input is not equivariant")]
    NoGroupElement { from: String, to: String },

    #[error("map is ill-defined on classes: {0}")]
    IllDefinedOnClasses(String),

    #[error("action is not free at nerve level {0}")]
    NotFreeAtLevel(usize),

    #[error("isomorphism search exhausted: {0}")]
    SearchExhausted(String),

    #[error("functor is not a fibration: no lift of {arrow} at {point}")]
    NotAFibration { arrow: String, point: String },

    #[error("quotient is ill-defined: {0}")]
    QuotientIllDefined(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("dangling reference: stanza `{0}` is not defined in this document")]
    DanglingReference(String),

    #[error("unknown stanza kind `{0}`")]
    UnknownKind(String),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
