//! Internal state and event bisimulations on a single LMP.

use super::verdict::{BisimVerdict, Witness};
use crate::error::{Error, Result};
use crate::lmp::stable::{is_stable_partition, smallest_stable, stability_violation};
use crate::lmp::Lmp;
use crate::measurable::space::set_partitions;
use crate::measurable::{r_closed_atoms, Partition, Rel, StateSet};

/// Sets to test: every member when there are few atoms, the atoms otherwise.
pub(crate) fn test_sets(p: &Partition) -> Vec<StateSet> {
    if p.len() <= 12 {
        p.members().expect("small partition")
    } else {
        p.blocks().to_vec()
    }
}

pub(crate) fn pair_names(lmp: &Lmp, s: usize, t: usize) -> (String, String) {
    (lmp.space().name(s).to_string(), lmp.space().name(t).to_string())
}

pub(crate) fn partition_names(lmp: &Lmp, p: &Partition) -> Vec<Vec<String>> {
    p.blocks().iter().map(|&b| lmp.space().names_of(b)).collect()
}

/// Related states agree on every R-closed measurable set.
pub fn is_state_bisim(lmp: &Lmp, r: &Rel) -> Result<BisimVerdict> {
    assert_eq!((r.left_len(), r.right_len()), (lmp.len(), lmp.len()));
    let sets = test_sets(&r_closed_atoms(lmp.space(), r));
    for (s, t) in r.pairs() {
        for &c in &sets {
            for a in 0..lmp.num_labels() {
                let (x, y) = (lmp.tau(a, s, c)?, lmp.tau(a, t, c)?);
                if x != y {
                    return Ok(BisimVerdict::no(Witness::ClosedSet {
                        label: lmp.labels()[a].clone(),
                        pair: pair_names(lmp, s, t),
                        set: lmp.space().names_of(c),
                        masses: (x, y),
                    }));
                }
            }
        }
    }
    Ok(BisimVerdict::yes(None))
}

/// ~s as a greatest fixpoint from the total relation.
pub fn state_bisimilarity(lmp: &Lmp) -> Rel {
    let n = lmp.len();
    let mut r = Rel::total(n, n);
    loop {
        let sets = test_sets(&r_closed_atoms(lmp.space(), &r));
        let mut next = r.clone();
        next.retain(|&(s, t)| {
            sets.iter().all(|&c| {
                (0..lmp.num_labels()).all(|a| lmp.tau(a, s, c).expect("closed sets are measurable") == lmp.tau(a, t, c).expect("closed sets are measurable"))
            })
        });
        if next == r {
            return r;
        }
        r = next;
    }
}

pub const ORACLE_STATE_LIMIT: usize = 6;

/// Union of every equivalence relation that is a state bisimulation.
pub fn brute_oracle_state_bisimilarity(lmp: &Lmp) -> Result<Rel> {
    let n = lmp.len();
    if n > ORACLE_STATE_LIMIT {
        return Err(Error::too_large("oracle state count", n, ORACLE_STATE_LIMIT));
    }
    let mut out = Rel::new(n, n);
    for p in set_partitions(n) {
        let r = Rel::from_partition(&p);
        if is_state_bisim(lmp, &r)?.holds {
            out = out.union(&r);
        }
    }
    Ok(out)
}

/// ~e: the relation of the smallest stable σ-algebra.
pub fn event_bisimilarity(lmp: &Lmp) -> Rel {
    Rel::from_partition(&smallest_stable(lmp))
}

/// R is an event bisimulation iff its classes form a stable sub-σ-algebra
/// of Σ; on a finite space that algebra is the only candidate.
pub fn is_event_bisim(lmp: &Lmp, r: &Rel) -> Result<BisimVerdict> {
    let Some(classes) = r.classes() else {
        return Ok(BisimVerdict::no(Witness::NotEquivalence));
    };
    for &c in classes.blocks() {
        if !lmp.space().is_measurable(c) {
            return Ok(BisimVerdict::no(Witness::NonMeasurableClass { class: lmp.space().names_of(c) }));
        }
    }
    if is_stable_partition(lmp, &classes)? {
        return Ok(BisimVerdict::yes(Some(Witness::Algebra { atoms: partition_names(lmp, &classes) })));
    }
    let (a, set, threshold) = stability_violation(lmp, &classes.members()?)?.expect("unstable algebra has a violation");
    Ok(BisimVerdict::no(Witness::NotStable {
        algebra: partition_names(lmp, &classes),
        label: lmp.labels()[a].clone(),
        set: lmp.space().names_of(set),
        threshold,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lmp::direct_sum;
    use crate::lmp::validate_lmp;
    use crate::lmp::KernelRow;
    use crate::measurable::FinSpace;
    use crate::rational::Rational;

    fn restr_sum() -> Lmp {
        direct_sum(&fixtures::two_chain(), &fixtures::three_sink()).unwrap().0
    }

    fn rel(lmp: &Lmp, pairs: &[(&str, &str)]) -> Rel {
        Rel::from_names(lmp.space(), lmp.space(), pairs).unwrap()
    }

    #[test]
    fn sum_relation_is_internal_bisimulation() {
        let s = restr_sum();
        let r = rel(&s, &[("L.x", "R.x'"), ("L.y", "R.z'"), ("R.y'", "R.z'")]);
        assert!(is_state_bisim(&s, &r).unwrap().holds);
        let mut worse = r.clone();
        worse.insert(s.space().index_of("L.x").unwrap(), s.space().index_of("L.y").unwrap());
        let v = is_state_bisim(&s, &worse).unwrap();
        assert!(!v.holds);
        match v.witness.unwrap() {
            Witness::ClosedSet { pair, masses, .. } => {
                assert_eq!(pair, ("L.x".to_string(), "L.y".to_string()));
                assert_ne!(masses.0, masses.1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn identity_always_bisim() {
        for l in [fixtures::two_chain(), fixtures::fan(), restr_sum()] {
            assert!(is_state_bisim(&l, &Rel::identity(l.len())).unwrap().holds);
        }
    }

    #[test]
    fn half_to_w_example() {
        let space = FinSpace::powerset(&["u", "v", "w"]).unwrap();
        let h = Rational::new(1, 2);
        let rows = [KernelRow::new("a", "u", &[("w", h.clone())]), KernelRow::new("a", "v", &[("w", h)])];
        let l = validate_lmp(space, &["a"], &rows).unwrap();
        let sb = state_bisimilarity(&l);
        assert_eq!(sb.classes().unwrap(), Partition::new(3, vec![0b011, 0b100]).unwrap());
        assert_eq!(sb, brute_oracle_state_bisimilarity(&l).unwrap());
    }

    #[test]
    fn sum_bisimilarity_matches_oracle() {
        let s = restr_sum();
        let sb = state_bisimilarity(&s);
        assert_eq!(sb, brute_oracle_state_bisimilarity(&s).unwrap());
        let names: Vec<Vec<String>> = partition_names(&s, &sb.classes().unwrap());
        assert_eq!(names, vec![vec!["L.x", "R.x'"], vec!["L.y", "R.y'", "R.z'"]]);
    }

    #[test]
    fn single_state_and_dirac() {
        let space = FinSpace::powerset(&["s"]).unwrap();
        let l = validate_lmp(space, &["a"], &[]).unwrap();
        assert_eq!(state_bisimilarity(&l), Rel::identity(1));
        assert_eq!(brute_oracle_state_bisimilarity(&l).unwrap(), Rel::identity(1));
        let space = FinSpace::powerset(&["p", "q"]).unwrap();
        let rows = [KernelRow::new("a", "p", &[("p", Rational::one())]), KernelRow::new("a", "q", &[("q", Rational::one())])];
        let l = validate_lmp(space, &["a"], &rows).unwrap();
        assert_eq!(brute_oracle_state_bisimilarity(&l).unwrap(), Rel::total(2, 2));
    }

    #[test]
    fn event_examples() {
        let space = FinSpace::powerset(&["p", "q"]).unwrap();
        let idle = validate_lmp(space, &["a"], &[]).unwrap();
        assert_eq!(event_bisimilarity(&idle), Rel::total(2, 2));
        let fs = direct_sum(&fixtures::fan(), &fixtures::fan_loop()).unwrap().0;
        let e = event_bisimilarity(&fs);
        let v = is_event_bisim(&fs, &e).unwrap();
        assert!(v.holds);
        assert_eq!(e, state_bisimilarity(&fs));
        let tc = fixtures::two_chain();
        assert!(is_event_bisim(&tc, &Rel::identity(2)).unwrap().holds);
        assert!(matches!(is_event_bisim(&tc, &Rel::total(2, 2)).unwrap().witness, Some(Witness::NotStable { .. })));
        assert_eq!(is_event_bisim(&tc, &Rel::from_pairs(2, 2, [(0, 1)])).unwrap().witness, Some(Witness::NotEquivalence));
    }

    #[test]
    fn event_check_agrees_with_search_over_coarsenings() {
        let fs = direct_sum(&fixtures::fan(), &fixtures::fan_loop()).unwrap().0;
        let atoms = fs.space().atoms().clone();
        for grouping in set_partitions(atoms.len()) {
            let p = atoms.coarsen(&grouping);
            let r = Rel::from_partition(&p);
            let search = set_partitions(atoms.len())
                .map(|g| atoms.coarsen(&g))
                .any(|q| Rel::from_partition(&q) == r && is_stable_partition(&fs, &q).unwrap());
            assert_eq!(is_event_bisim(&fs, &r).unwrap().holds, search);
        }
    }
}
