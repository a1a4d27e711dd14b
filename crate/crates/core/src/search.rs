//! Search for a pair of states related by one notion and not another.

use serde::Serialize;

use crate::bisim::{is_cospan, is_delta_bisim, is_ext_bisim, is_state_bisim, make_cospan_witness, oplus_bisimilar, state_bisimilarity};
use crate::error::{Error, Result};
use crate::lmp::{direct_sum, Lmp};
use crate::measurable::{FinSpace, Measure, Partition};
use crate::model::ModelFile;
use crate::random::{random_lmp_pair, RandomSpec, SigmaMode};
use crate::rational::Rational;
use crate::report::{notion_relation, Notion};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_states: usize,
    pub labels: usize,
    pub max_denominator: u64,
    pub sigma: SigmaMode,
    /// Random pairs to try after the exhaustive phase.
    pub budget: usize,
    /// Try every one-label process with at most two states and weights in
    /// halves first.
    pub exhaustive: bool,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_states: 3, labels: 1, max_denominator: 4, sigma: SigmaMode::Mixed, budget: 200, exhaustive: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub left: ModelFile,
    pub right: ModelFile,
    pub pair: (String, String),
    /// `exhaustive` or the seed of the random pair.
    pub origin: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub related_by: Notion,
    pub not_related_by: Notion,
    pub found: Option<Separation>,
    pub examined: usize,
    /// Instances beyond a checker's size limit.
    pub skipped: usize,
}

/// Decide one pair through the notion's certificate: the computed relation
/// must pass its checker, or the witness object must verify.
pub fn confirm(notion: Notion, left: &Lmp, right: &Lmp, s: usize, t: usize) -> Result<bool> {
    Ok(match notion {
        Notion::Delta => {
            let d = notion_relation(notion, left, right)?;
            d.contains(s, t) && is_delta_bisim(left, right, &d)?.holds
        }
        Notion::Span => notion_relation(notion, left, right)?.contains(s, t),
        Notion::Ext => {
            let e = notion_relation(notion, left, right)?;
            e.contains(s, t) && is_ext_bisim(left, right, &e)?.holds
        }
        Notion::State => {
            let (sum, tags) = direct_sum(left, right)?;
            let r = state_bisimilarity(&sum);
            r.contains(tags.inl(s), tags.inr(t)) && is_state_bisim(&sum, &r)?.holds
        }
        Notion::Vee => match make_cospan_witness(left, right, s, t)? {
            Some(c) => is_cospan(left, right, &c, s, t)?.verdict.holds,
            None => false,
        },
        Notion::Oplus => oplus_bisimilar(left, right, s, t)?.holds,
    })
}

fn examine(a: Notion, b: Notion, left: &Lmp, right: &Lmp) -> Result<Option<(usize, usize)>> {
    let ra = notion_relation(a, left, right)?;
    let rb = notion_relation(b, left, right)?;
    for (s, t) in ra.pairs().filter(|&(s, t)| !rb.contains(s, t)) {
        if confirm(a, left, right, s, t)? && !confirm(b, left, right, s, t)? {
            return Ok(Some((s, t)));
        }
    }
    Ok(None)
}

fn halves(atoms: usize) -> Vec<Measure> {
    let mut out = Vec::new();
    let mut units = vec![0i64; atoms];
    loop {
        if units.iter().sum::<i64>() <= 2 {
            out.push(Measure::new(units.iter().map(|&u| Rational::new(u, 2)).collect()).expect("at most one"));
        }
        let Some(i) = units.iter().position(|&u| u < 2) else { break };
        units[i] += 1;
        units[..i].iter_mut().for_each(|u| *u = 0);
    }
    out
}

/// Every one-label process on at most two states with weights in halves.
pub fn small_processes(prefix: &str) -> Vec<Lmp> {
    let labels = vec!["a".to_string()];
    let mut spaces = vec![FinSpace::powerset(&[format!("{prefix}0")]).expect("one state")];
    let two = vec![format!("{prefix}0"), format!("{prefix}1")];
    spaces.push(FinSpace::powerset(&two).expect("two states"));
    spaces.push(FinSpace::from_parts(two, Partition::trivial(2)).expect("one atom"));
    let mut out = Vec::new();
    for space in spaces {
        let k = space.num_atoms();
        let ms = halves(k);
        let mut idx = vec![0usize; k];
        loop {
            let row = idx.iter().map(|&i| ms[i].clone()).collect();
            out.push(Lmp::from_atom_kernels(space.clone(), labels.clone(), vec![row]).expect("well-formed"));
            let Some(i) = idx.iter().position(|&i| i + 1 < ms.len()) else { break };
            idx[i] += 1;
            idx[..i].iter_mut().for_each(|x| *x = 0);
        }
    }
    out
}

fn separation(left: &Lmp, right: &Lmp, (s, t): (usize, usize), origin: String) -> Separation {
    Separation {
        left: ModelFile::from_lmp(left, None),
        right: ModelFile::from_lmp(right, None),
        pair: (left.space().name(s).to_string(), right.space().name(t).to_string()),
        origin,
    }
}

pub fn search_separation(a: Notion, b: Notion, bounds: &SearchBounds, seed: u64) -> Result<SearchReport> {
    let mut report = SearchReport { related_by: a, not_related_by: b, found: None, examined: 0, skipped: 0 };
    let mut attempt = |left: &Lmp, right: &Lmp, origin: &dyn Fn() -> String| -> Result<bool> {
        report.examined += 1;
        match examine(a, b, left, right) {
            Ok(Some(hit)) => {
                report.found = Some(separation(left, right, hit, origin()));
                Ok(true)
            }
            Ok(None) => Ok(false),
            Err(Error::TooLarge { .. }) => {
                report.skipped += 1;
                Ok(false)
            }
            Err(e) => Err(e),
        }
    };
    if bounds.exhaustive {
        let lefts = small_processes("p");
        let rights = small_processes("q");
        for l in lefts.iter().filter(|l| l.len() <= bounds.max_states) {
            for r in rights.iter().filter(|r| r.len() <= bounds.max_states) {
                if attempt(l, r, &|| "exhaustive".into())? {
                    return Ok(report);
                }
            }
        }
    }
    let spec = RandomSpec {
        max_states: bounds.max_states,
        max_denominator: bounds.max_denominator,
        labels: bounds.labels,
        sigma: bounds.sigma,
        ..RandomSpec::default()
    };
    for i in 0..bounds.budget as u64 {
        let s = seed.wrapping_add(i);
        let (l, r) = random_lmp_pair(&spec, s);
        if attempt(&l, &r, &|| format!("seed {s}"))? {
            return Ok(report);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SearchBounds {
        SearchBounds { max_states: 3, budget: 20, ..SearchBounds::default() }
    }

    #[test]
    fn small_process_count() {
        // one atom: 3 measures, two atoms: 6
        assert_eq!(small_processes("p").len(), 3 + 36 + 3);
    }

    #[test]
    fn collapses_are_exhausted() {
        for (a, b) in [(Notion::Ext, Notion::State), (Notion::State, Notion::Ext), (Notion::Vee, Notion::State)] {
            let r = search_separation(a, b, &quick(), 1).unwrap();
            assert!(r.found.is_none(), "{a} vs {b}");
            assert!(r.examined > 0);
        }
    }

    #[test]
    fn exhaustive_phase_covers_all_pairs() {
        let bounds = SearchBounds { budget: 0, ..SearchBounds::default() };
        let r = search_separation(Notion::Delta, Notion::Ext, &bounds, 0).unwrap();
        assert!(r.found.is_none());
        assert_eq!(r.examined, 42 * 42);
    }

    #[test]
    fn confirm_matches_relations() {
        let (l, r) = (crate::fixtures::fan(), crate::fixtures::fan_loop());
        for n in Notion::ALL {
            let rel = notion_relation(n, &l, &r).unwrap();
            for s in 0..l.len() {
                for t in 0..r.len() {
                    assert_eq!(confirm(n, &l, &r, s, t).unwrap(), rel.contains(s, t), "{n}");
                }
            }
        }
    }
}
