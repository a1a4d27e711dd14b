//! Spans of zigzags and coalgebraic (Δ) bisimulations.

use std::collections::BTreeMap;

use serde::Serialize;

use super::verdict::{BisimVerdict, Coupling, NamedPair, Witness};
use crate::error::{Error, Result};
use crate::lmp::process::check_map;
use crate::lmp::{check_zigzag, validate_lmp, KernelRow, Lmp};
use crate::lp::{feasible, LinSystem};
use crate::measurable::{FinSpace, Rel};
use crate::rational::Rational;

pub const DELTA_ASSUMPTION: &str = "relation carries the trace of the product σ-algebra";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub verdict: BisimVerdict,
    /// (f×g)[W].
    #[serde(skip)]
    pub image: Rel,
}

/// Both legs are zigzags; also returns the image relation.
pub fn is_span(left: &Lmp, right: &Lmp, apex: &Lmp, f: &[usize], g: &[usize]) -> Result<SpanReport> {
    check_map(apex, left, f)?;
    check_map(apex, right, g)?;
    let image = Rel::from_pairs(left.len(), right.len(), (0..apex.len()).map(|w| (f[w], g[w])));
    for (name, target, map) in [("f", left, f), ("g", right, g)] {
        if let Some(failure) = check_zigzag(apex, target, map)?.counterexample {
            return Ok(SpanReport { verdict: BisimVerdict::no(Witness::Zigzag { map: name.into(), failure }), image });
        }
    }
    let pairs = image.to_names(left.space(), right.space());
    Ok(SpanReport { verdict: BisimVerdict::yes(Some(Witness::Relation { pairs })), image })
}

/// Blocks of the trace σ-algebra on R: pairs grouped by their atom rectangle.
fn trace_atoms(left: &Lmp, right: &Lmp, r: &Rel) -> Vec<((usize, usize), Vec<(usize, usize)>)> {
    let mut groups: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (s, t) in r.pairs() {
        groups.entry((left.space().atom_of(s), right.space().atom_of(t))).or_default().push((s, t));
    }
    let mut out: Vec<_> = groups.into_iter().collect();
    out.sort_by_key(|(_, pairs)| pairs[0]);
    out
}

/// A coupling of the label-`a` kernels at atom rectangle `rect`, supported
/// on the trace atoms of R.
fn coupling(left: &Lmp, right: &Lmp, a: usize, rect: (usize, usize), atoms: &[((usize, usize), Vec<(usize, usize)>)]) -> Result<Option<Vec<Rational>>> {
    let (mu, nu) = (left.atom_kernels()[a][rect.0].clone(), right.atom_kernels()[a][rect.1].clone());
    let mut sys = LinSystem::new(atoms.len());
    for (i, w) in mu.weights().iter().enumerate() {
        sys.push_sum(atoms.iter().enumerate().filter(|(_, (r, _))| r.0 == i).map(|(j, _)| j), w.clone());
    }
    for (k, w) in nu.weights().iter().enumerate() {
        sys.push_sum(atoms.iter().enumerate().filter(|(_, (r, _))| r.1 == k).map(|(j, _)| j), w.clone());
    }
    feasible(&sys)
}

fn names(left: &Lmp, right: &Lmp, pairs: &[(usize, usize)]) -> Vec<NamedPair> {
    pairs.iter().map(|&(s, t)| (left.space().name(s).to_string(), right.space().name(t).to_string())).collect()
}

/// Every trace atom and label admits a coupling with the prescribed marginals.
pub fn is_delta_bisim(left: &Lmp, right: &Lmp, r: &Rel) -> Result<BisimVerdict> {
    left.same_labels(right)?;
    let atoms = trace_atoms(left, right, r);
    let mut couplings = Vec::new();
    for (rect, block) in &atoms {
        for a in 0..left.num_labels() {
            let label = left.labels()[a].clone();
            let Some(gamma) = coupling(left, right, a, *rect, &atoms)? else {
                return Ok(BisimVerdict::no(Witness::NoCoupling { label, block: names(left, right, block) }));
            };
            let weights = gamma
                .into_iter()
                .zip(&atoms)
                .filter(|(w, _)| !w.is_zero())
                .map(|(w, (_, b))| (names(left, right, b), w))
                .collect();
            couplings.push(Coupling { label, block: names(left, right, block), weights });
        }
    }
    Ok(BisimVerdict::yes(Some(Witness::Couplings { assumption: DELTA_ASSUMPTION.into(), couplings })))
}

/// Greatest Δ-bisimulation: prune trace atoms without a coupling until none
/// is left to prune.
pub fn delta_bisimilarity(left: &Lmp, right: &Lmp) -> Result<Rel> {
    left.same_labels(right)?;
    let mut r = Rel::total(left.len(), right.len());
    loop {
        let atoms = trace_atoms(left, right, &r);
        let mut next = r.clone();
        for (rect, block) in &atoms {
            for a in 0..left.num_labels() {
                if coupling(left, right, a, *rect, &atoms)?.is_none() {
                    next.retain(|p| !block.contains(p));
                    break;
                }
            }
        }
        if next == r {
            return Ok(r);
        }
        r = next;
    }
}

/// A span with apex R built from the couplings of a Δ-bisimulation: the
/// apex kernel at each trace atom is the coupling, credited to the first
/// pair of every target atom. `None` when R is not a Δ-bisimulation.
pub fn delta_span(left: &Lmp, right: &Lmp, r: &Rel) -> Result<Option<(Lmp, Vec<usize>, Vec<usize>)>> {
    left.same_labels(right)?;
    if r.is_empty() {
        return Ok(None);
    }
    let atoms = trace_atoms(left, right, r);
    let pair_name = |(s, t): (usize, usize)| format!("({},{})", left.space().name(s), right.space().name(t));
    let names: Vec<String> = r.pairs().map(pair_name).collect();
    let groups: Vec<Vec<String>> = atoms.iter().map(|(_, b)| b.iter().map(|&p| pair_name(p)).collect()).collect();
    let space = FinSpace::new(&names, Some(&groups))?;
    let mut rows = Vec::new();
    for (rect, block) in &atoms {
        for a in 0..left.num_labels() {
            let Some(gamma) = coupling(left, right, a, *rect, &atoms)? else { return Ok(None) };
            let targets: Vec<(String, Rational)> = gamma
                .into_iter()
                .zip(&atoms)
                .filter(|(w, _)| !w.is_zero())
                .map(|(w, (_, b))| (pair_name(b[0]), w))
                .collect();
            for &p in block {
                rows.push(KernelRow { label: left.labels()[a].clone(), state: pair_name(p), targets: targets.clone() });
            }
        }
    }
    let apex = validate_lmp(space, left.labels(), &rows)?;
    let mut f = vec![0; apex.len()];
    let mut g = vec![0; apex.len()];
    for p in r.pairs() {
        let w = apex.space().index_of(&pair_name(p))?;
        (f[w], g[w]) = p;
    }
    Ok(Some((apex, f, g)))
}

/// The LMP carried by (f×g)[W] for a span with injective f×g, with the map
/// from W onto it.
pub fn monic_span_lmp(apex: &Lmp, left: &Lmp, right: &Lmp, f: &[usize], g: &[usize]) -> Result<(Lmp, Vec<usize>)> {
    check_map(apex, left, f)?;
    check_map(apex, right, g)?;
    for (target, map) in [(left, f), (right, g)] {
        if let Some(failure) = check_zigzag(apex, target, map)?.counterexample {
            return Err(Error::NotZigzag(serde_json::to_string(&failure).expect("failure serializes")));
        }
    }
    let pair_name = |w: usize| format!("({},{})", left.space().name(f[w]), right.space().name(g[w]));
    let names: Vec<String> = (0..apex.len()).map(pair_name).collect();
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != names.len() {
        return Err(Error::NotInjective);
    }
    let by_name: BTreeMap<&str, &str> = apex.space().names().iter().map(String::as_str).zip(names.iter().map(String::as_str)).collect();
    let atoms: Vec<Vec<String>> = apex.space().atom_names().iter().map(|a| a.iter().map(|s| by_name[s.as_str()].to_string()).collect()).collect();
    let space = FinSpace::new(&names, Some(&atoms))?;
    let rows: Vec<KernelRow> = apex
        .rows()
        .into_iter()
        .map(|row| KernelRow {
            label: row.label,
            state: by_name[row.state.as_str()].to_string(),
            targets: row.targets.into_iter().map(|(t, w)| (by_name[t.as_str()].to_string(), w)).collect(),
        })
        .collect();
    let lmp = validate_lmp(space, apex.labels(), &rows)?;
    let map = names.iter().map(|n| lmp.space().index_of(n).expect("named state")).collect();
    Ok((lmp, map))
}
