use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("state space must contain at least one state")]
    EmptySpace,
    #[error("duplicate state identifier {0:?}")]
    DuplicateState(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("atoms do not partition the state set: {0}")]
    NotAPartition(String),
    #[error("set {0} is not measurable")]
    NonMeasurable(String),
    #[error("negative weight {weight} for label {label:?} at state {state:?}")]
    NegativeWeight { label: String, state: String, weight: Rational },
    #[error("kernel for label {label:?} at state {state:?} has total mass {total} > 1")]
    MassExceedsOne { label: String, state: String, total: Rational },
    #[error("measure has total mass {0} > 1")]
    MeasureExceedsOne(Rational),
    #[error("kernel for label {label:?} differs between {first:?} and {second:?}, which share an atom")]
    NonMeasurableKernel { label: String, first: String, second: String },
    #[error("transition sets for label {label:?} differ between {first:?} and {second:?}, which share an atom")]
    NonMeasurableTransition { label: String, first: String, second: String },
    #[error("label sets differ: {left:?} vs {right:?}")]
    LabelMismatch { left: Vec<String>, right: Vec<String> },
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("comparator {0} is not allowed in LMP formulas")]
    UnsupportedComparator(String),
    #[error("family is not stable: label {label:?} maps {set} above {threshold} to a non-member")]
    NotStable { label: String, set: String, threshold: Rational },
    #[error("state {state:?} leaks mass outside the sub-process under label {label:?}")]
    LeakageOutsideB { state: String, label: String },
    #[error("relation is not an equivalence")]
    NotEquivalence,
    #[error("relation is not symmetric")]
    NotSymmetric,
    #[error("map is not injective")]
    NotInjective,
    #[error("map is not surjective")]
    NotSurjective,
    #[error("map is not a zigzag morphism: {0}")]
    NotZigzag(String),
    #[error("map is not total or points outside its target")]
    BadMap,
    #[error("relation is not an external hit bisimulation")]
    NotHitBisim,
    #[error("states are bisimilar, nothing separates them")]
    PairNotSeparable,
    #[error("{what}: size {size} exceeds limit {limit}")]
    TooLarge { what: String, size: usize, limit: usize },
    #[error("malformed model: {0}")]
    Model(String),
}

impl Error {
    pub fn too_large(what: impl Into<String>, size: usize, limit: usize) -> Self {
        Error::TooLarge { what: what.into(), size, limit }
    }
}
