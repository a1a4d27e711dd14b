//! External (×) bisimulations between two LMPs.

use super::verdict::{BisimVerdict, Witness};
use crate::error::Result;
use crate::lmp::Lmp;
use crate::measurable::space::UnionFind;
use crate::measurable::{closed_pair_atoms, PairAlgebra, Rel, StateSet};

/// Closed pairs to test, sorted by (left, right): every member of a small
/// algebra, the atoms of a large one.
pub(crate) fn pair_test_sets(alg: &PairAlgebra) -> Vec<(StateSet, StateSet)> {
    let mut sets = if alg.len() <= 12 { alg.members().expect("small algebra") } else { alg.atoms.clone() };
    sets.sort();
    sets
}

/// Related states agree on every measurable R-closed pair.
pub fn is_ext_bisim(left: &Lmp, right: &Lmp, r: &Rel) -> Result<BisimVerdict> {
    left.same_labels(right)?;
    let sets = pair_test_sets(&closed_pair_atoms(left.space(), right.space(), r)?);
    for (s, t) in r.pairs() {
        for &(a, a2) in &sets {
            for l in 0..left.num_labels() {
                let (x, y) = (left.tau(l, s, a)?, right.tau(l, t, a2)?);
                if x != y {
                    return Ok(BisimVerdict::no(Witness::ClosedPair {
                        label: left.labels()[l].clone(),
                        pair: (left.space().name(s).to_string(), right.space().name(t).to_string()),
                        sets: (left.space().names_of(a), right.space().names_of(a2)),
                        masses: (x, y),
                    }));
                }
            }
        }
    }
    Ok(BisimVerdict::yes(None))
}

/// ~× as a greatest fixpoint from the total cross relation.
pub fn ext_bisimilarity(left: &Lmp, right: &Lmp) -> Result<Rel> {
    left.same_labels(right)?;
    let mut r = Rel::total(left.len(), right.len());
    loop {
        let sets = pair_test_sets(&closed_pair_atoms(left.space(), right.space(), &r)?);
        let mut next = r.clone();
        next.retain(|&(s, t)| {
            sets.iter().all(|&(a, a2)| {
                (0..left.num_labels()).all(|l| left.tau(l, s, a).expect("closed pair") == right.tau(l, t, a2).expect("closed pair"))
            })
        });
        if next == r {
            return Ok(r);
        }
        r = next;
    }
}

/// Least superset with (x,x'),(y,x'),(y,y') ⇒ (x,y').
pub fn z_closure(r: &Rel) -> Rel {
    let (n, m) = (r.left_len(), r.right_len());
    let mut uf = UnionFind::new(n + m);
    for (s, t) in r.pairs() {
        uf.union(s, n + t);
    }
    let mut out = Rel::new(n, m);
    for s in 0..n {
        for t in 0..m {
            if uf.find(s) == uf.find(n + t) {
                out.insert(s, t);
            }
        }
    }
    out
}
