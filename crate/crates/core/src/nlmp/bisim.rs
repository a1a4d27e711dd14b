//! Internal and external state, hit and event bisimulations on NLMPs.

use crate::bisim::external::pair_test_sets;
use crate::bisim::state::test_sets;
use crate::bisim::{BisimVerdict, Witness};
use crate::error::{Error, Result};
use crate::measurable::space::{full_set, members, set_partitions};
use crate::measurable::{
    closed_pair_atoms, delta_times_atoms, measure_classes, r_closed_atoms, Cmp, FinSpace, Measure, PairAlgebra,
    PairFamily, Partition, Rel, StateSet,
};
use crate::nlmp::Nlmp;
use crate::rational::Rational;

fn hit_set(n: &Nlmp, universe: &[Measure], a: usize, theta: u64) -> StateSet {
    (0..n.len()).filter(|&s| n.transition_mask(universe, a, s) & theta != 0).fold(0, |acc, s| acc | 1 << s)
}

fn names(sp: &FinSpace, sp2: &FinSpace, s: usize, t: usize) -> (String, String) {
    (sp.name(s).to_string(), sp2.name(t).to_string())
}

fn masses(mu: &Measure, sp: &FinSpace, sets: &[StateSet]) -> Vec<Rational> {
    sets.iter().map(|&q| mu.mass(sp, q).expect("closed sets are measurable")).collect()
}

fn display_class(sp: &FinSpace, universe: &[Measure], class: u64) -> Vec<String> {
    members(class).map(|i| universe[i].display(sp)).collect()
}

fn check_symmetric(r: &Rel) -> Result<()> {
    if !r.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(())
}

/// Zig for every pair of a symmetric R: each measure of T_a(s) has a lifted
/// partner in T_a(t).
pub fn is_int_state_bisim(n: &Nlmp, r: &Rel) -> Result<BisimVerdict> {
    check_symmetric(r)?;
    let sets = r_closed_atoms(n.space(), r).blocks().to_vec();
    for (s, t) in r.pairs() {
        for a in 0..n.num_labels() {
            let theirs: Vec<Vec<Rational>> = n.transitions(a, t).iter().map(|m| masses(m, n.space(), &sets)).collect();
            for mu in n.transitions(a, s) {
                if !theirs.contains(&masses(mu, n.space(), &sets)) {
                    return Ok(BisimVerdict::no(Witness::Unmatched {
                        label: n.labels()[a].clone(),
                        pair: names(n.space(), n.space(), s, t),
                        side: 0,
                        measure: mu.display(n.space()),
                    }));
                }
            }
        }
    }
    Ok(BisimVerdict::yes(None))
}

/// Per label, the set of lifted classes a state's transitions reach.
fn reach_keys(n: &Nlmp, sets: &[StateSet], s: usize) -> Vec<Vec<Vec<Rational>>> {
    (0..n.num_labels())
        .map(|a| {
            let mut keys: Vec<Vec<Rational>> = n.transitions(a, s).iter().map(|m| masses(m, n.space(), sets)).collect();
            keys.sort();
            keys.dedup();
            keys
        })
        .collect()
}

pub fn int_state_bisimilarity(n: &Nlmp) -> Rel {
    let k = n.len();
    let mut r = Rel::total(k, k);
    loop {
        let sets = r_closed_atoms(n.space(), &r).blocks().to_vec();
        let keys: Vec<_> = (0..k).map(|s| reach_keys(n, &sets, s)).collect();
        let mut next = r.clone();
        next.retain(|&(s, t)| keys[s] == keys[t]);
        if next == r {
            return r;
        }
        r = next;
    }
}

/// Atoms of the trace of Δ(Σ(R)) on the occurring measures, computed from
/// threshold sets and cross-checked against agreement classes.
pub fn int_hit_classes(n: &Nlmp, universe: &[Measure], sigma_r: &Partition) -> Result<Partition> {
    let diag: Vec<(StateSet, StateSet)> = test_sets(sigma_r).into_iter().map(|q| (q, q)).collect();
    let alg = delta_times_atoms(n.space(), n.space(), universe, universe, &diag)?.expect("diagonal family is nonempty");
    let left = alg.partition().restrict(full_set(universe.len()));
    assert_eq!(left, measure_classes(n.space(), universe, sigma_r.blocks())?, "threshold trace differs from agreement classes");
    Ok(left)
}

pub fn is_int_hit_bisim(n: &Nlmp, r: &Rel) -> Result<BisimVerdict> {
    check_symmetric(r)?;
    let u = n.universe();
    let classes = int_hit_classes(n, &u, &r_closed_atoms(n.space(), r))?;
    for (s, t) in r.pairs() {
        for a in 0..n.num_labels() {
            let (ms, mt) = (n.transition_mask(&u, a, s), n.transition_mask(&u, a, t));
            for &c in classes.blocks() {
                if (ms & c != 0) != (mt & c != 0) {
                    let shown = display_class(n.space(), &u, c);
                    return Ok(BisimVerdict::no(Witness::MissedHit {
                        label: n.labels()[a].clone(),
                        pair: names(n.space(), n.space(), s, t),
                        classes: (shown.clone(), shown),
                    }));
                }
            }
        }
    }
    Ok(BisimVerdict::yes(None))
}

fn hit_pattern(n: &Nlmp, u: &[Measure], classes: &Partition, s: usize) -> Vec<u64> {
    (0..n.num_labels())
        .map(|a| {
            let m = n.transition_mask(u, a, s);
            classes.blocks().iter().enumerate().filter(|(_, &c)| c & m != 0).fold(0, |acc, (i, _)| acc | 1 << i)
        })
        .collect()
}

pub fn int_hit_bisimilarity(n: &Nlmp) -> Result<Rel> {
    let k = n.len();
    let u = n.universe();
    let mut r = Rel::total(k, k);
    loop {
        let classes = int_hit_classes(n, &u, &r_closed_atoms(n.space(), &r))?;
        let pats: Vec<_> = (0..k).map(|s| hit_pattern(n, &u, &classes, s)).collect();
        let mut next = r.clone();
        next.retain(|&(s, t)| pats[s] == pats[t]);
        if next == r {
            return Ok(r);
        }
        r = next;
    }
}

/// Hit preimages of the Δ(Λ) classes, for every label.
fn hit_generators(n: &Nlmp, u: &[Measure], lambda: &Partition) -> Result<Vec<StateSet>> {
    let classes = measure_classes(n.space(), u, lambda.blocks())?;
    Ok((0..n.num_labels()).flat_map(|a| classes.blocks().iter().map(move |&c| hit_set(n, u, a, c))).collect())
}

/// T_a is measurable from (S,Λ) into the hit σ-algebra over Δ(Λ).
pub fn is_int_event(n: &Nlmp, lambda: &Partition) -> Result<bool> {
    if lambda.universe_len() != n.len() || !n.space().atoms().refines(lambda) {
        return Ok(false);
    }
    let u = n.universe();
    Ok(hit_generators(n, &u, lambda)?.into_iter().all(|g| lambda.is_measurable(g)))
}

/// The least Λ closed under hit preimages of its own Δ(Λ) classes.
pub fn int_event_smallest(n: &Nlmp) -> Result<Partition> {
    let u = n.universe();
    let mut lambda = Partition::trivial(n.len());
    loop {
        let mut next = lambda.clone();
        for g in hit_generators(n, &u, &lambda)? {
            next = next.split(g);
        }
        if next == lambda {
            return Ok(lambda);
        }
        lambda = next;
    }
}

pub fn int_event_bisimilarity(n: &Nlmp) -> Result<Rel> {
    Ok(Rel::from_partition(&int_event_smallest(n)?))
}

/// Masses of a measure on the left or right parts of the closed-pair atoms.
fn pair_keys(left: &Nlmp, right: &Nlmp, alg: &PairAlgebra) -> (impl Fn(&Measure) -> Vec<Rational>, impl Fn(&Measure) -> Vec<Rational>) {
    let (ls, rs): (Vec<StateSet>, Vec<StateSet>) = alg.atoms.iter().copied().unzip();
    let (lsp, rsp) = (left.space().clone(), right.space().clone());
    (move |m: &Measure| masses(m, &lsp, &ls), move |m: &Measure| masses(m, &rsp, &rs))
}

pub fn is_ext_state_bisim(left: &Nlmp, right: &Nlmp, r: &Rel) -> Result<BisimVerdict> {
    left.same_labels(right)?;
    let alg = closed_pair_atoms(left.space(), right.space(), r)?;
    let (lk, rk) = pair_keys(left, right, &alg);
    for (s, t) in r.pairs() {
        for a in 0..left.num_labels() {
            let mine: Vec<_> = left.transitions(a, s).iter().map(&lk).collect();
            let theirs: Vec<_> = right.transitions(a, t).iter().map(&rk).collect();
            let unmatched = |side: usize, ms: &[Measure], own: &[Vec<Rational>], other: &[Vec<Rational>], sp: &FinSpace| {
                own.iter().position(|k| !other.contains(k)).map(|i| Witness::Unmatched {
                    label: left.labels()[a].clone(),
                    pair: names(left.space(), right.space(), s, t),
                    side,
                    measure: ms[i].display(sp),
                })
            };
            if let Some(w) = unmatched(0, left.transitions(a, s), &mine, &theirs, left.space())
                .or_else(|| unmatched(1, right.transitions(a, t), &theirs, &mine, right.space()))
            {
                return Ok(BisimVerdict::no(w));
            }
        }
    }
    Ok(BisimVerdict::yes(None))
}

pub fn ext_state_bisimilarity(left: &Nlmp, right: &Nlmp) -> Result<Rel> {
    left.same_labels(right)?;
    let mut r = Rel::total(left.len(), right.len());
    loop {
        let alg = closed_pair_atoms(left.space(), right.space(), &r)?;
        let (lk, rk) = pair_keys(left, right, &alg);
        let key_sets = |n: &Nlmp, s: usize, k: &dyn Fn(&Measure) -> Vec<Rational>| -> Vec<Vec<Vec<Rational>>> {
            (0..n.num_labels())
                .map(|a| {
                    let mut v: Vec<_> = n.transitions(a, s).iter().map(k).collect();
                    v.sort();
                    v.dedup();
                    v
                })
                .collect()
        };
        let lkeys: Vec<_> = (0..left.len()).map(|s| key_sets(left, s, &lk)).collect();
        let rkeys: Vec<_> = (0..right.len()).map(|t| key_sets(right, t, &rk)).collect();
        let mut next = r.clone();
        next.retain(|&(s, t)| lkeys[s] == rkeys[t]);
        if next == r {
            return Ok(r);
        }
        r = next;
    }
}

/// Atoms of the trace of Δ^×(Σ^×(R)) on the two occurring universes.
fn ext_hit_atoms(left: &Nlmp, right: &Nlmp, ul: &[Measure], ur: &[Measure], alg: &PairAlgebra) -> Result<PairAlgebra> {
    let gens = pair_test_sets(alg);
    Ok(delta_times_atoms(left.space(), right.space(), ul, ur, &gens)?.expect("closed pairs are nonempty"))
}

pub fn is_ext_hit_bisim(left: &Nlmp, right: &Nlmp, r: &Rel) -> Result<BisimVerdict> {
    left.same_labels(right)?;
    let (ul, ur) = (left.universe(), right.universe());
    let trace = ext_hit_atoms(left, right, &ul, &ur, &closed_pair_atoms(left.space(), right.space(), r)?)?;
    for (s, t) in r.pairs() {
        for a in 0..left.num_labels() {
            let (ms, mt) = (left.transition_mask(&ul, a, s), right.transition_mask(&ur, a, t));
            for &(th, th2) in &trace.atoms {
                if (ms & th != 0) != (mt & th2 != 0) {
                    return Ok(BisimVerdict::no(Witness::MissedHit {
                        label: left.labels()[a].clone(),
                        pair: names(left.space(), right.space(), s, t),
                        classes: (display_class(left.space(), &ul, th), display_class(right.space(), &ur, th2)),
                    }));
                }
            }
        }
    }
    Ok(BisimVerdict::yes(None))
}

pub fn ext_hit_bisimilarity(left: &Nlmp, right: &Nlmp) -> Result<Rel> {
    left.same_labels(right)?;
    let (ul, ur) = (left.universe(), right.universe());
    let mut r = Rel::total(left.len(), right.len());
    loop {
        let trace = ext_hit_atoms(left, right, &ul, &ur, &closed_pair_atoms(left.space(), right.space(), &r)?)?;
        let pattern = |n: &Nlmp, u: &[Measure], s: usize, side: bool| -> Vec<u64> {
            (0..n.num_labels())
                .map(|a| {
                    let m = n.transition_mask(u, a, s);
                    trace
                        .atoms
                        .iter()
                        .enumerate()
                        .filter(|(_, &(x, y))| (if side { y } else { x }) & m != 0)
                        .fold(0, |acc, (i, _)| acc | 1 << i)
                })
                .collect()
        };
        let lp: Vec<_> = (0..left.len()).map(|s| pattern(left, &ul, s, false)).collect();
        let rp: Vec<_> = (0..right.len()).map(|t| pattern(right, &ur, t, true)).collect();
        let mut next = r.clone();
        next.retain(|&(s, t)| lp[s] == rp[t]);
        if next == r {
            return Ok(r);
        }
        r = next;
    }
}

/// One threshold conjunct: measures whose mass on the pair's side is `cmp q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjunct {
    pub pair: (StateSet, StateSet),
    pub cmp: Cmp,
    pub q: Rational,
}

/// A hit test telling two states apart: one of them has a transition in Θ
/// (resp. Θ') and the other has none in Θ' (resp. Θ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub label: usize,
    /// Side whose transition set hits its trace.
    pub side: usize,
    pub conjuncts: Vec<Conjunct>,
    /// Θ and Θ' as masks over the left and right universes.
    pub theta: (u64, u64),
    /// The hit preimages (C, C').
    pub sets: (StateSet, StateSet),
}

fn threshold_trace(sp: &FinSpace, u: &[Measure], conj: &[Conjunct], side: usize) -> u64 {
    u.iter()
        .enumerate()
        .filter(|(_, m)| {
            conj.iter().all(|c| {
                let q = if side == 0 { c.pair.0 } else { c.pair.1 };
                c.cmp.holds(&m.mass(sp, q).expect("closed pair"), &c.q)
            })
        })
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Θ, Θ' separating s and t, built as an intersection of threshold sets with
/// one conjunct per measure on the opposing side.
pub fn separating_theta(left: &Nlmp, right: &Nlmp, r: &Rel, s: usize, t: usize) -> Result<Separation> {
    left.same_labels(right)?;
    let alg = closed_pair_atoms(left.space(), right.space(), r)?;
    let mut pairs = pair_test_sets(&alg);
    let full = (left.space().full(), right.space().full());
    pairs.retain(|&p| p != full);
    pairs.insert(0, full);
    let (lsp, rsp) = (left.space(), right.space());
    let (ul, ur) = (left.universe(), right.universe());
    for a in 0..left.num_labels() {
        for side in 0..2 {
            let (own, opp) = if side == 0 { (left.transitions(a, s), right.transitions(a, t)) } else { (right.transitions(a, t), left.transitions(a, s)) };
            // mass of an own-side / opposing measure on a pair
            let own_mass = |m: &Measure, p: (StateSet, StateSet)| if side == 0 { m.mass(lsp, p.0) } else { m.mass(rsp, p.1) };
            let opp_mass = |m: &Measure, p: (StateSet, StateSet)| if side == 0 { m.mass(rsp, p.1) } else { m.mass(lsp, p.0) };
            'mu: for mu in own {
                let mut conjuncts = Vec::new();
                for nu in opp {
                    let mut found = None;
                    for &p in &pairs {
                        let (x, y) = (own_mass(mu, p)?, opp_mass(nu, p)?);
                        if x != y {
                            found = Some((p, x, y));
                            break;
                        }
                    }
                    let Some((pair, x, y)) = found else { continue 'mu };
                    let cmp = if x > y { Cmp::Gt } else { Cmp::Lt };
                    conjuncts.push(Conjunct { pair, cmp, q: x.midpoint(&y) });
                }
                let theta = (threshold_trace(lsp, &ul, &conjuncts, 0), threshold_trace(rsp, &ur, &conjuncts, 1));
                let sets = (hit_set(left, &ul, a, theta.0), hit_set(right, &ur, a, theta.1));
                return Ok(Separation { label: a, side, conjuncts, theta, sets });
            }
        }
    }
    Err(Error::PairNotSeparable)
}

/// Every hit-preimage pair of the Δ^× trace of C lies in C.
pub fn is_times_stable(left: &Nlmp, right: &Nlmp, c: &PairFamily) -> Result<bool> {
    left.same_labels(right)?;
    let (ul, ur) = (left.universe(), right.universe());
    let gens: Vec<_> = c.iter().collect();
    let Some(trace) = delta_times_atoms(left.space(), right.space(), &ul, &ur, &gens)? else {
        return Ok(true);
    };
    let tests = if c.bi_sigma { trace.atoms.clone() } else { trace.members()? };
    for (th, th2) in tests {
        for a in 0..left.num_labels() {
            if !c.contains(hit_set(left, &ul, a, th), hit_set(right, &ur, a, th2)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A bi-σ-algebra given by its atoms, with its ×-stability verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiStableFamily {
    pub algebra: PairAlgebra,
    pub times_stable: bool,
}

impl BiStableFamily {
    pub fn family(&self) -> Result<PairFamily> {
        self.algebra.to_family()
    }
}

fn algebra_is_times_stable(left: &Nlmp, right: &Nlmp, alg: &PairAlgebra) -> Result<bool> {
    let (ul, ur) = (left.universe(), right.universe());
    let trace = delta_times_atoms(left.space(), right.space(), &ul, &ur, &alg.atoms)?.expect("algebra has atoms");
    for &(th, th2) in &trace.atoms {
        for a in 0..left.num_labels() {
            if !alg.contains(hit_set(left, &ul, a, th), hit_set(right, &ur, a, th2)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// 𝓡^×(Σ^×(R)) for an external hit bisimulation R, with its family.
pub fn ext_event_from_hit(left: &Nlmp, right: &Nlmp, r: &Rel) -> Result<(Rel, BiStableFamily)> {
    if !is_ext_hit_bisim(left, right, r)?.holds {
        return Err(Error::NotHitBisim);
    }
    let alg = closed_pair_atoms(left.space(), right.space(), r)?;
    let rel = alg.relation();
    assert!(r.is_subset(&rel), "R must lie inside the relation of its closed pairs");
    assert_eq!(closed_pair_atoms(left.space(), right.space(), &rel)?, alg, "closed pairs must be a fixpoint");
    let times_stable = algebra_is_times_stable(left, right, &alg)?;
    Ok((rel, BiStableFamily { algebra: alg, times_stable }))
}

pub const EXT_EVENT_ATOM_LIMIT: usize = 10;

fn algebra_names(left: &Nlmp, right: &Nlmp, alg: &PairAlgebra) -> Vec<Vec<String>> {
    alg.atoms
        .iter()
        .map(|&(a, b)| {
            members(a)
                .map(|s| format!("L.{}", left.space().name(s)))
                .chain(members(b).map(|t| format!("R.{}", right.space().name(t))))
                .collect()
        })
        .collect()
}

/// Search the coarsenings of Σ^×(R) for a ×-stable bi-σ-algebra whose
/// relation is R. Every candidate must consist of R-closed pairs, so the
/// search is exhaustive once within the atom bound.
pub fn is_ext_event_bisim(left: &Nlmp, right: &Nlmp, r: &Rel) -> Result<BisimVerdict> {
    left.same_labels(right)?;
    let alg = closed_pair_atoms(left.space(), right.space(), r)?;
    if alg.len() > EXT_EVENT_ATOM_LIMIT {
        return Err(Error::too_large("closed-pair atoms", alg.len(), EXT_EVENT_ATOM_LIMIT));
    }
    let base = alg.partition();
    let mut candidates = 0;
    let finest = std::iter::once(Partition::discrete(alg.len()));
    for grouping in finest.chain(set_partitions(alg.len()).filter(|g| g.len() != alg.len())) {
        let cand = PairAlgebra::from_partition(alg.left_len, alg.right_len, &base.coarsen(&grouping));
        if cand.relation() != *r {
            continue;
        }
        candidates += 1;
        if algebra_is_times_stable(left, right, &cand)? {
            return Ok(BisimVerdict::yes(Some(Witness::Algebra { atoms: algebra_names(left, right, &cand) })));
        }
    }
    Ok(BisimVerdict::no(Witness::Exhausted { candidates }))
}

/// Greatest relation whose closed pairs form a ×-stable bi-σ-algebra
/// certifying it, read off the external hit bisimilarity.
pub fn ext_event_bisimilarity(left: &Nlmp, right: &Nlmp) -> Result<Rel> {
    let hit = ext_hit_bisimilarity(left, right)?;
    Ok(ext_event_from_hit(left, right, &hit)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisim::state_bisimilarity;
    use crate::fixtures;
    use crate::nlmp::{embed_lmp, validate_nlmp, TransitionRow};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn chains() -> (Nlmp, Nlmp) {
        (embed_lmp(&fixtures::two_chain()), embed_lmp(&fixtures::three_sink()))
    }

    /// Union of all symmetric relations passing the checker.
    fn int_state_oracle(n: &Nlmp) -> Rel {
        let k = n.len();
        let cells: Vec<(usize, usize)> = (0..k).flat_map(|s| (s..k).map(move |t| (s, t))).collect();
        let mut out = Rel::new(k, k);
        for mask in 0u64..1 << cells.len() {
            let r = Rel::from_pairs(k, k, members(mask).flat_map(|i| [cells[i], (cells[i].1, cells[i].0)]));
            if is_int_state_bisim(n, &r).unwrap().holds {
                out = out.union(&r);
            }
        }
        out
    }

    fn ext_state_oracle(l: &Nlmp, rt: &Nlmp) -> Rel {
        let cells: Vec<(usize, usize)> = (0..l.len()).flat_map(|s| (0..rt.len()).map(move |t| (s, t))).collect();
        let mut out = Rel::new(l.len(), rt.len());
        for mask in 0u64..1 << cells.len() {
            let r = Rel::from_pairs(l.len(), rt.len(), members(mask).map(|i| cells[i]));
            if is_ext_state_bisim(l, rt, &r).unwrap().holds {
                out = out.union(&r);
            }
        }
        out
    }

    fn branching() -> Nlmp {
        // p offers a fair split or a quarter step to q; s offers only the split
        let space = FinSpace::powerset(&["p", "q", "r", "s"]).unwrap();
        let h = r(1, 2);
        let rows = [
            TransitionRow::new("a", "p", &[&[("q", h.clone()), ("r", h.clone())], &[("q", r(1, 4))]]),
            TransitionRow::new("a", "s", &[&[("q", h.clone()), ("r", h)]]),
        ];
        validate_nlmp(space, &["a"], &rows).unwrap()
    }

    #[test]
    fn internal_notions_on_branching() {
        let n = branching();
        let st = int_state_bisimilarity(&n);
        assert_eq!(st, int_state_oracle(&n));
        assert!(!st.contains(0, 3));
        assert!(st.contains(1, 2));
        assert_eq!(int_hit_bisimilarity(&n).unwrap(), st);
        assert!(st.is_subset(&int_event_bisimilarity(&n).unwrap()));
        assert!(is_int_state_bisim(&n, &Rel::identity(4)).unwrap().holds);
        assert!(is_int_hit_bisim(&n, &Rel::identity(4)).unwrap().holds);
        assert_eq!(is_int_state_bisim(&n, &Rel::from_pairs(4, 4, [(0, 1)])).unwrap_err(), Error::NotSymmetric);
        let v = is_int_state_bisim(&n, &Rel::total(4, 4)).unwrap();
        assert!(matches!(v.witness, Some(Witness::Unmatched { .. })));
    }

    #[test]
    fn embeds_agree_with_lmp() {
        for l in [fixtures::two_chain(), fixtures::fan(), fixtures::fan_loop(), fixtures::dirac_pair()] {
            let n = embed_lmp(&l);
            assert_eq!(int_state_bisimilarity(&n), state_bisimilarity(&l));
            assert_eq!(int_event_smallest(&n).unwrap(), crate::lmp::smallest_stable(&l));
            assert!(is_int_event(&n, n.space().atoms()).unwrap());
        }
        let nd = fixtures::nd_branch();
        assert_eq!(int_state_bisimilarity(&nd), int_state_oracle(&nd));
    }

    #[test]
    fn idle_event_algebra_is_trivial() {
        let n = validate_nlmp(FinSpace::powerset(&["p", "q"]).unwrap(), &["a"], &[]).unwrap();
        assert_eq!(int_event_smallest(&n).unwrap(), Partition::trivial(2));
    }

    #[test]
    fn external_on_chains() {
        let (x, y) = chains();
        let e = ext_state_bisimilarity(&x, &y).unwrap();
        assert_eq!(e, Rel::from_names(x.space(), y.space(), &[("x", "x'"), ("y", "y'"), ("y", "z'")]).unwrap());
        assert_eq!(e, ext_state_oracle(&x, &y));
        assert_eq!(ext_hit_bisimilarity(&x, &y).unwrap(), e);
        assert!(is_ext_hit_bisim(&x, &y, &e).unwrap().holds);
        let (ev, fam) = ext_event_from_hit(&x, &y, &e).unwrap();
        assert!(e.is_subset(&ev));
        assert!(fam.times_stable);
        assert!(is_times_stable(&x, &y, &fam.family().unwrap()).unwrap());
        assert!(is_ext_event_bisim(&x, &y, &ev).unwrap().holds);
    }

    #[test]
    fn same_process_external_matches_internal() {
        let nd = fixtures::nd_branch();
        assert_eq!(ext_state_bisimilarity(&nd, &nd).unwrap(), int_state_bisimilarity(&nd));
        let n = branching();
        assert_eq!(ext_state_bisimilarity(&n, &n).unwrap(), int_state_bisimilarity(&n));
    }

    #[test]
    fn one_sided_refusal_excluded() {
        let a = validate_nlmp(
            FinSpace::powerset(&["p"]).unwrap(),
            &["a"],
            &[TransitionRow::new("a", "p", &[&[("p", r(1, 1))]])],
        )
        .unwrap();
        let b = validate_nlmp(FinSpace::powerset(&["q"]).unwrap(), &["a"], &[]).unwrap();
        assert!(ext_state_bisimilarity(&a, &b).unwrap().is_empty());
        let sep = separating_theta(&a, &b, &Rel::new(1, 1), 0, 0).unwrap();
        assert_eq!(sep.sets, (1, 0));
    }

    #[test]
    fn dirac_vs_zero_separation() {
        let d = embed_lmp(&fixtures::dirac_pair());
        let (s, t) = (d.space().index_of("s").unwrap(), d.space().index_of("t").unwrap());
        let e = ext_state_bisimilarity(&d, &d).unwrap();
        let sep = separating_theta(&d, &d, &e, s, t).unwrap();
        assert_eq!(sep.conjuncts, vec![Conjunct { pair: (d.space().full(), d.space().full()), cmp: Cmp::Gt, q: r(1, 2) }]);
        let (c, c2) = sep.sets;
        assert_eq!(c >> s & 1 == 1, c2 >> t & 1 == 0);
        let alg = closed_pair_atoms(d.space(), d.space(), &e).unwrap();
        assert!(alg.contains(c, c2));
        assert_eq!(separating_theta(&d, &d, &e, s, s).unwrap_err(), Error::PairNotSeparable);
    }

    #[test]
    fn times_stability_examples() {
        let n = branching();
        let all = PairAlgebra::from_partition(4, 4, &Partition::discrete(8));
        assert!(is_times_stable(&n, &n, &all.to_family().unwrap()).unwrap());
        let idle = validate_nlmp(FinSpace::powerset(&["p"]).unwrap(), &["a"], &[]).unwrap();
        let fam = PairFamily::new(1, 1, [(0, 0), (1, 1)]);
        assert!(is_ext_event_bisim(&idle, &idle, &Rel::total(1, 1)).unwrap().holds);
        assert!(is_times_stable(&idle, &idle, &fam).unwrap());
    }

    #[test]
    fn forced_pattern_rejected() {
        let (x, y) = chains();
        let bad = Rel::from_names(x.space(), y.space(), &[("x", "x'"), ("y", "z'")]).unwrap();
        assert!(!is_ext_event_bisim(&x, &y, &bad).unwrap().holds);
        assert_eq!(ext_event_from_hit(&x, &y, &bad).unwrap_err(), Error::NotHitBisim);
    }
}
