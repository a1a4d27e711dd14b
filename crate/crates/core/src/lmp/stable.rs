//! Stable sub-σ-algebras, quotients and event companions.

use std::collections::BTreeSet;

use super::process::{discrete_space, quotient_layout, Lmp};
use crate::error::{Error, Result};
use crate::measurable::relation::critical_thresholds;
use crate::measurable::space::{bit, members};
use crate::measurable::{Measure, Partition, StateSet};
use crate::rational::Rational;

/// {s : τ_a(s, A) > r}.
pub fn threshold_set(lmp: &Lmp, a: usize, set: StateSet, r: &Rational) -> Result<StateSet> {
    let mask = lmp.space().atom_mask(set)?;
    Ok((0..lmp.len()).filter(|&s| lmp.tau_atoms(a, s, mask) > *r).fold(0, |acc, s| acc | bit(s)))
}

/// Every threshold set of `set` that can arise, with its threshold.
fn threshold_sets(lmp: &Lmp, a: usize, set: StateSet) -> Result<Vec<(Rational, StateSet)>> {
    let mask = lmp.space().atom_mask(set)?;
    let values: Vec<Rational> = (0..lmp.len()).map(|s| lmp.tau_atoms(a, s, mask)).collect();
    Ok(critical_thresholds(values.iter())
        .into_iter()
        .map(|r| {
            let t = values.iter().enumerate().filter(|(_, v)| **v > r).fold(0, |acc, (s, _)| acc | bit(s));
            (r, t)
        })
        .collect())
}

/// First violation of stability for an explicit family: (label, set, threshold).
pub fn stability_violation(lmp: &Lmp, family: &[StateSet]) -> Result<Option<(usize, StateSet, Rational)>> {
    let members: BTreeSet<StateSet> = family.iter().copied().collect();
    for &set in family {
        for a in 0..lmp.num_labels() {
            for (r, t) in threshold_sets(lmp, a, set)? {
                if !members.contains(&t) {
                    return Ok(Some((a, set, r)));
                }
            }
        }
    }
    Ok(None)
}

/// `true` if every threshold set of every member is a member.
pub fn is_stable(lmp: &Lmp, family: &[StateSet]) -> Result<bool> {
    for &set in family {
        lmp.space().atom_mask(set)?;
    }
    Ok(stability_violation(lmp, family)?.is_none())
}

/// Stability of the σ-algebra with the given atoms, by enumerating its members.
pub fn is_stable_partition(lmp: &Lmp, p: &Partition) -> Result<bool> {
    if !lmp.space().atoms().refines(p) {
        return Err(Error::NonMeasurable("σ-algebra is not contained in Σ".into()));
    }
    for set in p.members()? {
        for a in 0..lmp.num_labels() {
            for (_, t) in threshold_sets(lmp, a, set)? {
                if !p.is_measurable(t) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn not_stable(lmp: &Lmp, p: &Partition) -> Result<Error> {
    let fam = p.members()?;
    Ok(match stability_violation(lmp, &fam)? {
        Some((a, set, r)) => Error::NotStable {
            label: lmp.labels()[a].clone(),
            set: lmp.space().fmt_set(set),
            threshold: r,
        },
        None => Error::NotStable { label: String::new(), set: String::new(), threshold: Rational::zero() },
    })
}

/// Kernel signature of a state against the blocks of `p`.
pub fn signature(lmp: &Lmp, p: &Partition, s: usize) -> Vec<Rational> {
    let space = lmp.space();
    let masks: Vec<u64> = p.blocks().iter().map(|&b| space.atom_mask(b).expect("blocks are measurable")).collect();
    (0..lmp.num_labels())
        .flat_map(|a| masks.iter().map(move |&m| lmp.tau_atoms(a, s, m)))
        .collect()
}

/// The smallest stable sub-σ-algebra, as its atoms.
pub fn smallest_stable(lmp: &Lmp) -> Partition {
    let n = lmp.len();
    let mut p = Partition::trivial(n);
    loop {
        let sigs: Vec<Vec<Rational>> = (0..n).map(|s| signature(lmp, &p, s)).collect();
        let next = p.meet(&Partition::from_keys(n, |s| sigs[s].clone()));
        if next == p {
            return p;
        }
        p = next;
    }
}

/// Quotient by a stable sub-σ-algebra, with the projection.
pub fn quotient(lmp: &Lmp, lambda: &Partition) -> Result<(Lmp, Vec<usize>)> {
    if !is_stable_partition(lmp, lambda)? {
        return Err(not_stable(lmp, lambda)?);
    }
    let space = lmp.space();
    let (names, map, classes) = quotient_layout(space, lambda);
    let qspace = discrete_space(names)?;
    let k = classes.len();
    let masks: Vec<u64> = classes.iter().map(|&c| space.atom_mask(c)).collect::<Result<_>>()?;
    let mut kernel = Vec::with_capacity(lmp.num_labels());
    for a in 0..lmp.num_labels() {
        let mut row = Vec::with_capacity(k);
        for &c in &classes {
            let rep = c.trailing_zeros() as usize;
            let w: Vec<Rational> = masks.iter().map(|&m| lmp.tau_atoms(a, rep, m)).collect();
            for s in members(c) {
                let ws: Vec<Rational> = masks.iter().map(|&m| lmp.tau_atoms(a, s, m)).collect();
                assert_eq!(ws, w, "kernel not constant on a class of a stable algebra");
            }
            row.push(Measure::new(w)?);
        }
        kernel.push(row);
    }
    let q = Lmp::from_atom_kernels(qspace, lmp.labels().to_vec(), kernel)?;
    Ok((q, map))
}

/// Same process with Σ replaced by the smallest stable sub-σ-algebra.
pub fn event_companion(lmp: &Lmp) -> Lmp {
    lmp.coarsened(smallest_stable(lmp)).expect("kernels are constant on stable atoms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lmp::process::{check_zigzag, direct_sum};
    use crate::measurable::space::set_partitions;

    fn names(lmp: &Lmp, p: &Partition) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = p.blocks().iter().map(|&b| lmp.space().names_of(b)).collect();
        v.sort();
        v
    }

    fn fan_sum() -> Lmp {
        direct_sum(&fixtures::fan(), &fixtures::fan_loop()).unwrap().0
    }

    #[test]
    fn fan_sum_smallest_stable() {
        let s = fan_sum();
        let p = smallest_stable(&s);
        assert_eq!(
            names(&s, &p),
            vec![vec!["L.s1", "L.s2", "R.s1'"], vec!["L.s3", "R.s3'"], vec!["R.s4'"]]
        );
        assert!(is_stable(&s, &p.members().unwrap()).unwrap());
    }

    #[test]
    fn stable_examples() {
        let tc = fixtures::two_chain();
        assert_eq!(smallest_stable(&tc), Partition::discrete(2));
        assert!(is_stable_partition(&tc, tc.space().atoms()).unwrap());
        let idle = fixtures::dirac_pair();
        assert!(is_stable(&idle, &[0, 0b11]).unwrap() == (smallest_stable(&idle).len() == 1));
        let (none, _) = direct_sum(&fixtures::three_sink(), &fixtures::three_sink()).unwrap();
        assert!(is_stable_partition(&none, none.space().atoms()).unwrap());
    }

    #[test]
    fn smallest_is_least_among_all_stable() {
        let s = fan_sum();
        let atoms = s.space().atoms().clone();
        let least = smallest_stable(&s);
        for grouping in set_partitions(atoms.len()) {
            let p = atoms.coarsen(&grouping);
            if is_stable_partition(&s, &p).unwrap() {
                assert!(p.refines(&least));
            }
        }
    }

    #[test]
    fn fan_quotient() {
        let s = fan_sum();
        let (q, pi) = quotient(&s, &smallest_stable(&s)).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.space().names(), &["L.s1+L.s2+R.s1'", "L.s3+R.s3'", "R.s4'"]);
        let absorbing = q.space().index_of("L.s3+R.s3'").unwrap();
        assert!(q.measure(0, absorbing).is_zero());
        assert!(check_zigzag(&s, &q, &pi).unwrap().holds);
        let (copy, _) = quotient(&s, s.space().atoms()).unwrap();
        assert_eq!(copy.len(), s.len());
    }

    #[test]
    fn quotient_rejects_unstable() {
        let tc = fixtures::two_chain();
        assert!(matches!(quotient(&tc, &Partition::trivial(2)), Err(Error::NotStable { .. })));
    }

    #[test]
    fn companions() {
        let tc = fixtures::two_chain();
        assert_eq!(event_companion(&tc), tc);
        assert_eq!(event_companion(&fan_sum()).space().num_atoms(), 3);
    }
}
