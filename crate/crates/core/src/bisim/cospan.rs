//! Cospans of zigzags, ∨-bisimilarity and V-finality of quotient maps.

use serde::Serialize;

use super::state::{event_bisimilarity, partition_names};
use super::verdict::{BisimVerdict, Witness};
use crate::error::{Error, Result};
use crate::lmp::process::{check_map, image, preimage};
use crate::lmp::{check_zigzag, direct_sum, is_stable, is_stable_partition, quotient, smallest_stable, Lmp};
use crate::measurable::space::set_partitions;
use crate::measurable::{descend, r_closed_atoms, Partition, Rel, StateSet};

/// Two maps into a common apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cospan {
    pub apex: Lmp,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CospanVerdict {
    pub verdict: BisimVerdict,
    /// Whether both maps are onto the apex; reported but not required.
    pub surjective: bool,
}

/// ~∨: ~e on the direct sum, descended to the cross pairs.
pub fn vee_bisimilarity(left: &Lmp, right: &Lmp) -> Result<Rel> {
    let (sum, tags) = direct_sum(left, right)?;
    Ok(descend(&tags, &event_bisimilarity(&sum)))
}

/// The quotient of the sum by its smallest stable algebra, with the two
/// injections composed with the projection; `None` when s and s' fall in
/// different classes.
pub fn make_cospan_witness(left: &Lmp, right: &Lmp, s: usize, s2: usize) -> Result<Option<Cospan>> {
    let (sum, tags) = direct_sum(left, right)?;
    let lambda = smallest_stable(&sum);
    if lambda.block_index_of(tags.inl(s)) != lambda.block_index_of(tags.inr(s2)) {
        return Ok(None);
    }
    let (apex, pi) = quotient(&sum, &lambda)?;
    let f = (0..left.len()).map(|i| pi[tags.inl(i)]).collect();
    let g = (0..right.len()).map(|j| pi[tags.inr(j)]).collect();
    Ok(Some(Cospan { apex, f, g }))
}

fn named_map(source: &Lmp, target: &Lmp, map: &[usize]) -> Vec<(String, String)> {
    map.iter()
        .enumerate()
        .map(|(s, &t)| (source.space().name(s).to_string(), target.space().name(t).to_string()))
        .collect()
}

/// Both maps are zigzags and identify s with s'.
pub fn is_cospan(left: &Lmp, right: &Lmp, c: &Cospan, s: usize, s2: usize) -> Result<CospanVerdict> {
    let full = c.apex.space().full();
    let surjective = image(&c.f, left.space().full()) == full && image(&c.g, right.space().full()) == full;
    for (name, source, map) in [("f", left, &c.f), ("g", right, &c.g)] {
        let report = check_zigzag(source, &c.apex, map)?;
        if let Some(failure) = report.counterexample {
            return Ok(CospanVerdict { verdict: BisimVerdict::no(Witness::Zigzag { map: name.into(), failure }), surjective });
        }
    }
    let verdict = if c.f[s] == c.g[s2] {
        BisimVerdict::yes(Some(Witness::Cospan {
            apex: c.apex.space().names().to_vec(),
            f: named_map(left, &c.apex, &c.f),
            g: named_map(right, &c.apex, &c.g),
        }))
    } else {
        BisimVerdict::no(Witness::Unidentified {
            left: c.apex.space().name(c.f[s]).to_string(),
            right: c.apex.space().name(c.g[s2]).to_string(),
        })
    };
    Ok(CospanVerdict { verdict, surjective })
}

/// {f⁻¹A ⊕ g⁻¹A : A measurable in the apex}, as sets of the direct sum.
pub fn cospan_family(left: &Lmp, right: &Lmp, c: &Cospan) -> Result<Vec<StateSet>> {
    check_map(left, &c.apex, &c.f)?;
    check_map(right, &c.apex, &c.g)?;
    let n = left.len();
    Ok(c.apex.space().atoms().members()?.into_iter().map(|a| preimage(&c.f, a) | preimage(&c.g, a) << n).collect())
}

/// Whether the cospan family is stable on the direct sum.
pub fn cospan_family_is_stable(left: &Lmp, right: &Lmp, c: &Cospan) -> Result<bool> {
    let (sum, _) = direct_sum(left, right)?;
    is_stable(&sum, &cospan_family(left, right, c)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableWithin {
    /// Inclusion-maximal stable sub-σ-algebras, as atom partitions.
    pub maximal: Vec<Partition>,
    pub greatest: Option<Partition>,
}

pub const STABLE_WITHIN_ATOM_LIMIT: usize = 10;

/// Stable sub-σ-algebras of Σ₀, by enumerating the coarsenings of its atoms.
pub fn greatest_stable_within(lmp: &Lmp, sigma0: &Partition) -> Result<StableWithin> {
    if sigma0.len() > STABLE_WITHIN_ATOM_LIMIT {
        return Err(Error::too_large("atoms of the ambient algebra", sigma0.len(), STABLE_WITHIN_ATOM_LIMIT));
    }
    if sigma0.universe_len() != lmp.len() || !lmp.space().atoms().refines(sigma0) {
        return Err(Error::NonMeasurable("the ambient family is not a sub-σ-algebra of Σ".into()));
    }
    let mut stable = Vec::new();
    for grouping in set_partitions(sigma0.len()) {
        let p = sigma0.coarsen(&grouping);
        if is_stable_partition(lmp, &p)? {
            stable.push(p);
        }
    }
    // a finer partition is a larger algebra
    let maximal: Vec<Partition> = stable
        .iter()
        .filter(|p| !stable.iter().any(|q| q != *p && q.refines(p)))
        .cloned()
        .collect();
    let greatest = (maximal.len() == 1).then(|| maximal[0].clone());
    Ok(StableWithin { maximal, greatest })
}

/// π is V-final iff {π⁻¹Q} is the greatest stable sub-σ-algebra of Σ(ker π).
pub fn v_final_check(source: &Lmp, target: &Lmp, pi: &[usize]) -> Result<bool> {
    check_map(source, target, pi)?;
    if image(pi, source.space().full()) != target.space().full() {
        return Err(Error::NotSurjective);
    }
    if let Some(failure) = check_zigzag(source, target, pi)?.counterexample {
        return Err(Error::NotZigzag(serde_json::to_string(&failure).expect("failure serializes")));
    }
    let n = source.len();
    let kernel = Rel::from_pairs(n, n, (0..n).flat_map(|s| (0..n).filter(move |&t| pi[s] == pi[t]).map(move |t| (s, t))));
    let lambda = Partition::from_keys(n, |s| target.space().atom_of(pi[s]));
    let within = greatest_stable_within(source, &r_closed_atoms(source.space(), &kernel))?;
    Ok(within.greatest == Some(lambda))
}

/// Witness names for a partition of a process's states.
pub fn algebra_witness(lmp: &Lmp, p: &Partition) -> Witness {
    Witness::Algebra { atoms: partition_names(lmp, p) }
}
