use serde::Serialize;

use crate::lmp::ZigzagFailure;
use crate::rational::Rational;

pub type NamedPair = (String, String);

/// Evidence attached to a verdict: a violation when it fails, a certifying
/// structure when it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Related states give different mass to a closed set.
    ClosedSet { label: String, pair: NamedPair, set: Vec<String>, masses: (Rational, Rational) },
    /// Related states give different mass to the two sides of a closed pair.
    ClosedPair { label: String, pair: NamedPair, sets: (Vec<String>, Vec<String>), masses: (Rational, Rational) },
    NotEquivalence,
    /// A class of the relation is not measurable.
    NonMeasurableClass { class: Vec<String> },
    /// The only candidate σ-algebra is not stable.
    NotStable { algebra: Vec<Vec<String>>, label: String, set: Vec<String>, threshold: Rational },
    Zigzag { map: String, failure: ZigzagFailure },
    /// The two maps disagree on the distinguished states.
    Unidentified { left: String, right: String },
    /// No coupling exists for this block of related pairs.
    NoCoupling { label: String, block: Vec<NamedPair> },
    Couplings { assumption: String, couplings: Vec<Coupling> },
    Relation { pairs: Vec<NamedPair> },
    Algebra { atoms: Vec<Vec<String>> },
    /// States fall in different classes of the given partition.
    Separated { classes: Vec<Vec<String>> },
    /// Every candidate in the search space was rejected.
    Exhausted { candidates: usize },
    /// A measure on `side` with no related measure on the other side.
    Unmatched { label: String, pair: NamedPair, side: usize, measure: String },
    /// One transition set hits a class of measures and the other does not.
    MissedHit { label: String, pair: NamedPair, classes: (Vec<String>, Vec<String>) },
    Cospan { apex: Vec<String>, f: Vec<NamedPair>, g: Vec<NamedPair> },
    AuxiliarySum { auxiliary: Vec<Vec<String>>, classes: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coupling {
    pub label: String,
    pub block: Vec<NamedPair>,
    /// Mass on each block of the relation, listed by its pairs.
    pub weights: Vec<(Vec<NamedPair>, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BisimVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl BisimVerdict {
    pub fn yes(witness: Option<Witness>) -> Self {
        BisimVerdict { holds: true, witness }
    }

    pub fn no(witness: Witness) -> Self {
        BisimVerdict { holds: false, witness: Some(witness) }
    }
}
