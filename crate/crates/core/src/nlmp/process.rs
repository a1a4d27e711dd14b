use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lmp::logic::Formula;
use crate::lmp::Lmp;
use crate::measurable::space::{bit, members};
use crate::measurable::{measure_classes, FinSpace, Measure, StateSet};
use crate::rational::Rational;

/// An image-finite nondeterministic LMP: each state and label has a finite
/// set of measures, kept sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nlmp {
    space: FinSpace,
    labels: Vec<String>,
    trans: Vec<Vec<Vec<Measure>>>,
}

/// One authored transition set: the measures available at `state` under
/// `label`, each keyed by target state.
#[derive(Clone, Debug, Default)]
pub struct TransitionRow {
    pub label: String,
    pub state: String,
    pub measures: Vec<Vec<(String, Rational)>>,
}

impl TransitionRow {
    pub fn new(label: &str, state: &str, measures: &[&[(&str, Rational)]]) -> Self {
        TransitionRow {
            label: label.to_string(),
            state: state.to_string(),
            measures: measures
                .iter()
                .map(|m| m.iter().map(|(t, w)| (t.to_string(), w.clone())).collect())
                .collect(),
        }
    }
}

fn sorted_labels<S: AsRef<str>>(labels: &[S]) -> Result<Vec<String>> {
    let set: BTreeSet<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
    if set.len() != labels.len() {
        return Err(Error::Model("duplicate label".into()));
    }
    Ok(set.into_iter().collect())
}

pub fn validate_nlmp<S: AsRef<str>>(space: FinSpace, labels: &[S], rows: &[TransitionRow]) -> Result<Nlmp> {
    let labels = sorted_labels(labels)?;
    let mut sets: Vec<Vec<BTreeSet<Measure>>> = vec![vec![BTreeSet::new(); space.len()]; labels.len()];
    for row in rows {
        let a = labels.binary_search(&row.label).map_err(|_| Error::UnknownLabel(row.label.clone()))?;
        let s = space.index_of(&row.state)?;
        for m in &row.measures {
            let mut w = vec![Rational::zero(); space.num_atoms()];
            for (t, x) in m {
                if x.is_negative() {
                    return Err(Error::NegativeWeight { label: row.label.clone(), state: row.state.clone(), weight: x.clone() });
                }
                w[space.atom_of(space.index_of(t)?)] += x;
            }
            let total: Rational = w.iter().sum();
            if total > Rational::one() {
                return Err(Error::MassExceedsOne { label: row.label.clone(), state: row.state.clone(), total });
            }
            sets[a][s].insert(Measure::new(w)?);
        }
    }
    let trans = sets.into_iter().map(|per| per.into_iter().map(|s| s.into_iter().collect()).collect()).collect();
    Nlmp::new(space, labels, trans)
}

impl Nlmp {
    /// Build from canonical transition lists and check hit-measurability.
    pub fn new(space: FinSpace, labels: Vec<String>, trans: Vec<Vec<Vec<Measure>>>) -> Result<Self> {
        if trans.len() != labels.len() || trans.iter().any(|t| t.len() != space.len()) {
            return Err(Error::Model("transition table shape does not match".into()));
        }
        let mut trans = trans;
        for per in trans.iter_mut() {
            for set in per.iter_mut() {
                set.sort();
                set.dedup();
            }
        }
        let n = Nlmp { space, labels, trans };
        n.check_measurable()?;
        Ok(n)
    }

    /// States in one atom must hit exactly the same classes of the
    /// occurring measures under Σ.
    fn check_measurable(&self) -> Result<()> {
        let universe = self.universe();
        // agreement on every atom is agreement on Σ
        let classes = measure_classes(&self.space, &universe, self.space.atoms().blocks())?;
        let class_of = classes.labels();
        for (a, per) in self.trans.iter().enumerate() {
            let hit = |s: usize| -> BTreeSet<usize> {
                per[s].iter().map(|m| class_of[universe.binary_search(m).expect("in universe")]).collect()
            };
            for &atom in self.space.atoms().blocks() {
                let mut it = members(atom);
                let first = it.next().expect("atoms are nonempty");
                let h = hit(first);
                for other in it {
                    if hit(other) != h {
                        return Err(Error::NonMeasurableTransition {
                            label: self.labels[a].clone(),
                            first: self.space.name(first).to_string(),
                            second: self.space.name(other).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .map_err(|_| Error::UnknownLabel(label.to_string()))
    }

    /// T_a(s).
    pub fn transitions(&self, a: usize, s: usize) -> &[Measure] {
        &self.trans[a][s]
    }

    pub fn table(&self) -> &[Vec<Vec<Measure>>] {
        &self.trans
    }

    /// Every measure occurring in some transition set, sorted.
    pub fn universe(&self) -> Vec<Measure> {
        let set: BTreeSet<Measure> = self.trans.iter().flatten().flatten().cloned().collect();
        set.into_iter().collect()
    }

    /// Indices into [`Nlmp::universe`] of the measures in T_a(s), as a mask.
    pub fn transition_mask(&self, universe: &[Measure], a: usize, s: usize) -> u64 {
        self.trans[a][s]
            .iter()
            .map(|m| universe.binary_search(m).expect("measure in universe"))
            .fold(0, |acc, i| acc | bit(i))
    }

    pub fn same_labels(&self, other: &Nlmp) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch { left: self.labels.clone(), right: other.labels.clone() });
        }
        Ok(())
    }

    /// Per-state rows keyed by the first state of each target atom.
    pub fn rows(&self) -> Vec<TransitionRow> {
        let mut out = Vec::new();
        for (a, label) in self.labels.iter().enumerate() {
            for s in 0..self.len() {
                let set = &self.trans[a][s];
                if set.is_empty() {
                    continue;
                }
                let measures = set
                    .iter()
                    .map(|m| {
                        m.weights()
                            .iter()
                            .enumerate()
                            .filter(|(_, w)| !w.is_zero())
                            .map(|(k, w)| (self.space.name(self.space.atom(k).trailing_zeros() as usize).to_string(), w.clone()))
                            .collect()
                    })
                    .collect();
                out.push(TransitionRow { label: label.clone(), state: self.space.name(s).to_string(), measures });
            }
        }
        out
    }
}

/// An LMP as an NLMP with singleton transition sets, zero rows included.
pub fn embed_lmp(lmp: &Lmp) -> Nlmp {
    let trans = (0..lmp.num_labels())
        .map(|a| (0..lmp.len()).map(|s| vec![lmp.measure(a, s).clone()]).collect())
        .collect();
    Nlmp::new(lmp.space().clone(), lmp.labels().to_vec(), trans).expect("embedding of a valid LMP")
}

/// ⟦φ⟧ with ⟨a⟩_{⋈q}φ read as "some measure in T_a(s) gives ⟦φ⟧ mass ⋈ q".
pub fn nlmp_semantics(n: &Nlmp, phi: &Formula) -> Result<StateSet> {
    match phi {
        Formula::True => Ok(n.space.full()),
        Formula::And(a, b) => Ok(nlmp_semantics(n, a)? & nlmp_semantics(n, b)?),
        Formula::Diamond { label, cmp, q, body } => {
            let a = n.label_index(label)?;
            let inner = nlmp_semantics(n, body)?;
            let mask = n.space.atom_mask(inner)?;
            Ok((0..n.len())
                .filter(|&s| n.trans[a][s].iter().any(|m| cmp.holds(&m.mass_atoms(mask), q)))
                .fold(0, |acc, s| acc | bit(s)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lmp::logic::{parse_formula, semantics};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn validation() {
        let atoms = vec![vec!["a", "b"]];
        let space = FinSpace::new(&["a", "b"], Some(&atoms)).unwrap();
        let rows = [TransitionRow::new("a", "a", &[&[("a", r(1, 2))]])];
        assert!(matches!(validate_nlmp(space, &["a"], &rows), Err(Error::NonMeasurableTransition { .. })));
        let nd = fixtures::nd_branch();
        assert!(nd.space().is_powerset());
        assert!((0..nd.len()).any(|s| nd.transitions(0, s).len() == 2));
    }

    #[test]
    fn duplicates_removed() {
        let space = FinSpace::powerset(&["a"]).unwrap();
        let rows = [TransitionRow::new("a", "a", &[&[("a", r(1, 2))], &[("a", r(2, 4))]])];
        let n = validate_nlmp(space, &["a"], &rows).unwrap();
        assert_eq!(n.transitions(0, 0).len(), 1);
    }

    #[test]
    fn embed_keeps_zero_rows() {
        let n = embed_lmp(&fixtures::two_chain());
        assert_eq!(n.transitions(0, 1), &[Measure::zero(2)]);
        assert_eq!(n.transitions(0, 0).len(), 1);
    }

    #[test]
    fn semantics_examples() {
        let tc = fixtures::two_chain();
        let n = embed_lmp(&tc);
        for text in ["tt", "<a>{>1/2} tt", "<a>{>0} <a>{>0} tt", "(<a>{>0} tt & tt)"] {
            let phi = parse_formula(text).unwrap();
            assert_eq!(nlmp_semantics(&n, &phi).unwrap(), semantics(&tc, &phi).unwrap());
        }
        let space = FinSpace::powerset(&["e", "f"]).unwrap();
        let rows = [TransitionRow::new("a", "e", &[&[("e", r(1, 4))], &[("e", r(3, 4))]])];
        let n = validate_nlmp(space, &["a"], &rows).unwrap();
        let phi = parse_formula("<a>{>1/2} tt").unwrap();
        assert_eq!(nlmp_semantics(&n, &phi).unwrap(), 0b01);
    }
}
