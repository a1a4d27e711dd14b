use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measurable::space::{bit, members};
use crate::measurable::{sum_space, FinSpace, Measure, Partition, StateSet, TaggedSpace};
use crate::rational::Rational;

/// A labelled Markov process on a finite measurable space.
///
/// Kernels are stored per atom: `kernel[a][k]` is the measure of every state
/// in atom `k` under label `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lmp {
    space: FinSpace,
    labels: Vec<String>,
    kernel: Vec<Vec<Measure>>,
}

/// One authored kernel row: weights from `state` under `label`, keyed by
/// target state. Weight on a target goes to the atom containing it.
#[derive(Clone, Debug, Default)]
pub struct KernelRow {
    pub label: String,
    pub state: String,
    pub targets: Vec<(String, Rational)>,
}

impl KernelRow {
    pub fn new(label: &str, state: &str, targets: &[(&str, Rational)]) -> Self {
        KernelRow {
            label: label.to_string(),
            state: state.to_string(),
            targets: targets.iter().map(|(t, w)| (t.to_string(), w.clone())).collect(),
        }
    }
}

fn canonical_labels<S: AsRef<str>>(labels: &[S]) -> Result<Vec<String>> {
    let mut out: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
    out.sort();
    for w in out.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Model(format!("duplicate label {:?}", w[0])));
        }
    }
    Ok(out)
}

/// Build an LMP from per-state rows, checking subprobability and that
/// states sharing an atom carry the same kernel.
pub fn validate_lmp<S: AsRef<str>>(space: FinSpace, labels: &[S], rows: &[KernelRow]) -> Result<Lmp> {
    let labels = canonical_labels(labels)?;
    let n = space.len();
    let k = space.num_atoms();
    // per label, per state: weight per atom
    let mut per_state = vec![vec![vec![Rational::zero(); k]; n]; labels.len()];
    for row in rows {
        let a = labels
            .binary_search(&row.label)
            .map_err(|_| Error::UnknownLabel(row.label.clone()))?;
        let s = space.index_of(&row.state)?;
        for (t, w) in &row.targets {
            if w.is_negative() {
                return Err(Error::NegativeWeight { label: row.label.clone(), state: row.state.clone(), weight: w.clone() });
            }
            let j = space.index_of(t)?;
            per_state[a][s][space.atom_of(j)] += w;
        }
    }
    let mut kernel = Vec::with_capacity(labels.len());
    for (a, rows) in per_state.into_iter().enumerate() {
        for (s, w) in rows.iter().enumerate() {
            let total: Rational = w.iter().sum();
            if total > Rational::one() {
                return Err(Error::MassExceedsOne { label: labels[a].clone(), state: space.name(s).to_string(), total });
            }
        }
        let mut per_atom = Vec::with_capacity(k);
        for &atom in space.atoms().blocks() {
            let mut it = members(atom);
            let first = it.next().expect("atoms are nonempty");
            for other in it {
                if rows[other] != rows[first] {
                    return Err(Error::NonMeasurableKernel {
                        label: labels[a].clone(),
                        first: space.name(first).to_string(),
                        second: space.name(other).to_string(),
                    });
                }
            }
            per_atom.push(Measure::new(rows[first].clone())?);
        }
        kernel.push(per_atom);
    }
    Ok(Lmp { space, labels, kernel })
}

impl Lmp {
    /// Build directly from per-atom kernels.
    pub fn from_atom_kernels(space: FinSpace, labels: Vec<String>, kernel: Vec<Vec<Measure>>) -> Result<Self> {
        let sorted = canonical_labels(&labels)?;
        if sorted != labels {
            return Err(Error::Model("labels must be sorted and distinct".into()));
        }
        if kernel.len() != labels.len() {
            return Err(Error::Model("one kernel per label required".into()));
        }
        for row in &kernel {
            if row.len() != space.num_atoms() || row.iter().any(|m| m.num_atoms() != space.num_atoms()) {
                return Err(Error::Model("kernel shape does not match the atoms".into()));
            }
        }
        Ok(Lmp { space, labels, kernel })
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

    /// τ_a(s, ·).
    pub fn measure(&self, a: usize, s: usize) -> &Measure {
        &self.kernel[a][self.space.atom_of(s)]
    }

    pub fn atom_kernels(&self) -> &[Vec<Measure>] {
        &self.kernel
    }

    /// τ_a(s, A) for a measurable A.
    pub fn tau(&self, a: usize, s: usize, set: StateSet) -> Result<Rational> {
        self.measure(a, s).mass(&self.space, set)
    }

    /// τ_a(s, A) where A is given by an atom mask.
    pub fn tau_atoms(&self, a: usize, s: usize, atom_mask: u64) -> Rational {
        self.measure(a, s).mass_atoms(atom_mask)
    }

    pub fn same_labels(&self, other: &Lmp) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch { left: self.labels.clone(), right: other.labels.clone() });
        }
        Ok(())
    }

    /// Per-state kernel rows, keyed by target atoms named by their first state.
    pub fn rows(&self) -> Vec<KernelRow> {
        let mut out = Vec::new();
        for (a, label) in self.labels.iter().enumerate() {
            for s in 0..self.len() {
                let m = self.measure(a, s);
                let targets: Vec<(String, Rational)> = m
                    .weights()
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| !w.is_zero())
                    .map(|(k, w)| (self.space.name(self.space.atom(k).trailing_zeros() as usize).to_string(), w.clone()))
                    .collect();
                if !targets.is_empty() {
                    out.push(KernelRow { label: label.clone(), state: self.space.name(s).to_string(), targets });
                }
            }
        }
        out
    }

    /// Same states and kernels over a coarser σ-algebra.
    ///
    /// The caller guarantees that every kernel is constant on the new atoms.
    pub fn coarsened(&self, atoms: Partition) -> Result<Lmp> {
        assert!(self.space.atoms().refines(&atoms));
        let group: Vec<usize> = self.space.atoms().blocks().iter().map(|&b| atoms.block_index_of(b.trailing_zeros() as usize)).collect();
        let space = self.space.with_atoms(atoms)?;
        let mut kernel = Vec::with_capacity(self.labels.len());
        for a in 0..self.labels.len() {
            let mut row = Vec::with_capacity(space.num_atoms());
            for &block in space.atoms().blocks() {
                let rep = block.trailing_zeros() as usize;
                for s in members(block) {
                    if self.measure(a, s).push(&group, space.num_atoms()) != self.measure(a, rep).push(&group, space.num_atoms()) {
                        return Err(Error::NonMeasurableKernel {
                            label: self.labels[a].clone(),
                            first: self.space.name(rep).to_string(),
                            second: self.space.name(s).to_string(),
                        });
                    }
                }
                row.push(self.measure(a, rep).push(&group, space.num_atoms()));
            }
            kernel.push(row);
        }
        Ok(Lmp { space, labels: self.labels.clone(), kernel })
    }
}

/// The direct sum S ⊕ S'.
pub fn direct_sum(left: &Lmp, right: &Lmp) -> Result<(Lmp, TaggedSpace)> {
    left.same_labels(right)?;
    let sum = sum_space(&left.space, &right.space)?;
    let (kl, kr) = (left.space.num_atoms(), right.space.num_atoms());
    let kernel = (0..left.labels.len())
        .map(|a| {
            left.kernel[a]
                .iter()
                .map(|m| m.pad(0, kr))
                .chain(right.kernel[a].iter().map(|m| m.pad(kl, 0)))
                .collect()
        })
        .collect();
    let lmp = Lmp { space: sum.space.clone(), labels: left.labels.clone(), kernel };
    Ok((lmp, sum))
}

/// Why a map fails to be a zigzag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZigzagFailure {
    /// The preimage of this target set is not measurable.
    NotMeasurable { set: Vec<String> },
    /// τ_a(s, f⁻¹B) ≠ τ'_a(f(s), B).
    Kernel { label: String, state: String, set: Vec<String>, source_mass: Rational, target_mass: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagReport {
    pub holds: bool,
    pub counterexample: Option<ZigzagFailure>,
}

pub fn check_map(source: &Lmp, target: &Lmp, map: &[usize]) -> Result<()> {
    if map.len() != source.len() || map.iter().any(|&t| t >= target.len()) {
        return Err(Error::BadMap);
    }
    Ok(())
}

pub fn preimage(map: &[usize], set: StateSet) -> StateSet {
    map.iter().enumerate().filter(|(_, &t)| set >> t & 1 == 1).fold(0, |acc, (s, _)| acc | bit(s))
}

pub fn image(map: &[usize], set: StateSet) -> StateSet {
    members(set).fold(0, |acc, s| acc | bit(map[s]))
}

/// Check measurability and the kernel identity for every label, state and
/// measurable target set.
pub fn check_zigzag(source: &Lmp, target: &Lmp, map: &[usize]) -> Result<ZigzagReport> {
    check_map(source, target, map)?;
    source.same_labels(target)?;
    let tspace = target.space();
    for &b in tspace.atoms().blocks() {
        let pre = preimage(map, b);
        if !source.space.is_measurable(pre) {
            return Ok(ZigzagReport {
                holds: false,
                counterexample: Some(ZigzagFailure::NotMeasurable { set: tspace.names_of(b) }),
            });
        }
    }
    let sets = if tspace.num_atoms() <= 12 {
        tspace.atoms().members()?
    } else {
        // additivity: atoms suffice
        tspace.atoms().blocks().to_vec()
    };
    for (a, label) in source.labels.iter().enumerate() {
        for s in 0..source.len() {
            for &b in &sets {
                let lhs = source.tau(a, s, preimage(map, b))?;
                let rhs = target.tau(a, map[s], b)?;
                if lhs != rhs {
                    return Ok(ZigzagReport {
                        holds: false,
                        counterexample: Some(ZigzagFailure::Kernel {
                            label: label.clone(),
                            state: source.space.name(s).to_string(),
                            set: tspace.names_of(b),
                            source_mass: lhs,
                            target_mass: rhs,
                        }),
                    });
                }
            }
        }
    }
    Ok(ZigzagReport { holds: true, counterexample: None })
}

/// The sub-process on a measurable set B that leaks no mass outside B.
pub fn restrict_sublmp(lmp: &Lmp, b: StateSet) -> Result<Lmp> {
    let space = &lmp.space;
    space.atom_mask(b)?;
    let outside = space.full() & !b;
    for r in members(b) {
        for (a, label) in lmp.labels.iter().enumerate() {
            if !lmp.tau(a, r, outside)?.is_zero() {
                return Err(Error::LeakageOutsideB { state: space.name(r).to_string(), label: label.clone() });
            }
        }
    }
    let sub = space.subspace(b)?;
    let kept: Vec<usize> = (0..space.num_atoms()).filter(|&k| space.atom(k) & b != 0).collect();
    let kernel = lmp
        .kernel
        .iter()
        .map(|row| {
            kept.iter()
                .map(|&k| Measure::new(kept.iter().map(|&j| row[k].weight(j).clone()).collect()).expect("restriction of a subprobability"))
                .collect()
        })
        .collect();
    Ok(Lmp { space: sub, labels: lmp.labels.clone(), kernel })
}

/// Name of a quotient class: sorted member names joined by "+".
pub fn class_name(space: &FinSpace, class: StateSet) -> String {
    let mut names = space.names_of(class);
    names.sort();
    names.join("+")
}

/// Map every state to the index of its block among sorted class names.
pub(crate) fn quotient_layout(space: &FinSpace, blocks: &Partition) -> (Vec<String>, Vec<usize>, Vec<StateSet>) {
    let mut named: BTreeMap<String, StateSet> = BTreeMap::new();
    for &c in blocks.blocks() {
        named.insert(class_name(space, c), c);
    }
    let names: Vec<String> = named.keys().cloned().collect();
    let classes: Vec<StateSet> = named.values().copied().collect();
    let mut map = vec![0; space.len()];
    for (i, &c) in classes.iter().enumerate() {
        for s in members(c) {
            map[s] = i;
        }
    }
    (names, map, classes)
}

/// Powerset space on `n` classes with given names.
pub(crate) fn discrete_space(names: Vec<String>) -> Result<FinSpace> {
    let n = names.len();
    FinSpace::from_parts(names, Partition::discrete(n))
}
