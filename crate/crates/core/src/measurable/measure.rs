use std::fmt;

use serde::{Deserialize, Serialize};

use super::space::{members, FinSpace, StateSet};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A subprobability measure given by its weight on each atom of a space.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::Model(format!("negative weight {w}")));
        }
        let total: Rational = weights.iter().sum();
        if total > Rational::one() {
            return Err(Error::MeasureExceedsOne(total));
        }
        Ok(Measure { weights })
    }

    pub fn zero(num_atoms: usize) -> Self {
        Measure { weights: vec![Rational::zero(); num_atoms] }
    }

    /// Point mass on one atom.
    pub fn dirac(num_atoms: usize, atom: usize) -> Self {
        let mut m = Self::zero(num_atoms);
        m.weights[atom] = Rational::one();
        m
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> &Rational {
        &self.weights[atom]
    }

    pub fn num_atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Rational::is_zero)
    }

    /// Mass of the atoms selected by `atom_mask`.
    pub fn mass_atoms(&self, atom_mask: u64) -> Rational {
        members(atom_mask).map(|k| &self.weights[k]).sum()
    }

    /// Mass of a measurable set of `space`.
    pub fn mass(&self, space: &FinSpace, set: StateSet) -> Result<Rational> {
        debug_assert_eq!(space.num_atoms(), self.num_atoms());
        Ok(self.mass_atoms(space.atom_mask(set)?))
    }

    /// Push forward along a grouping of atoms: new atom `j` collects the
    /// old atoms `k` with `group[k] == j`.
    pub fn push(&self, group: &[usize], new_atoms: usize) -> Measure {
        let mut w = vec![Rational::zero(); new_atoms];
        for (k, x) in self.weights.iter().enumerate() {
            w[group[k]] += x;
        }
        Measure { weights: w }
    }

    /// Concatenate with zero weights on the right or left, for direct sums.
    pub fn pad(&self, before: usize, after: usize) -> Measure {
        let mut w = vec![Rational::zero(); before];
        w.extend(self.weights.iter().cloned());
        w.extend(std::iter::repeat_n(Rational::zero(), after));
        Measure { weights: w }
    }

    pub fn display(&self, space: &FinSpace) -> String {
        let parts: Vec<String> = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(k, w)| format!("{}:{}", space.fmt_set(space.atom(k)), w))
            .collect();
        format!("[{}]", parts.join(" "))
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.weights)
    }
}
