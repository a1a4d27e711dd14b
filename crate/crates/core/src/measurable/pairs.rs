//! Direct sums, closed pairs and bi-σ-algebras.

use std::collections::BTreeSet;

use super::measure::Measure;
use super::relation::{critical_thresholds, delta_bowtie, Cmp, Rel};
use super::space::{bit, contains, full_set, generate_partition, members, FinSpace, Partition, StateSet, UnionFind, MAX_STATES};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const LEFT_TAG: &str = "L.";
pub const RIGHT_TAG: &str = "R.";

/// The direct sum of two spaces. Left states keep their indices, right state
/// `j` becomes `left_len + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedSpace {
    pub space: FinSpace,
    pub left_len: usize,
    pub right_len: usize,
}

impl TaggedSpace {
    pub fn inl(&self, i: usize) -> usize {
        assert!(i < self.left_len);
        i
    }

    pub fn inr(&self, j: usize) -> usize {
        assert!(j < self.right_len);
        self.left_len + j
    }

    pub fn is_left(&self, u: usize) -> bool {
        u < self.left_len
    }

    /// Untag a sum index: `Ok(i)` for left, `Err(j)` for right.
    pub fn untag(&self, u: usize) -> std::result::Result<usize, usize> {
        if u < self.left_len {
            Ok(u)
        } else {
            Err(u - self.left_len)
        }
    }

    /// Q ⊕ Q'.
    pub fn join_sets(&self, q: StateSet, q2: StateSet) -> StateSet {
        q | (q2 << self.left_len)
    }

    pub fn left_part(&self, set: StateSet) -> StateSet {
        set & full_set(self.left_len)
    }

    pub fn right_part(&self, set: StateSet) -> StateSet {
        set >> self.left_len
    }

    pub fn left_mask(&self) -> StateSet {
        full_set(self.left_len)
    }

    pub fn right_mask(&self) -> StateSet {
        full_set(self.left_len + self.right_len) & !full_set(self.left_len)
    }
}

pub fn sum_space(left: &FinSpace, right: &FinSpace) -> Result<TaggedSpace> {
    let n = left.len();
    let total = n + right.len();
    if total > MAX_STATES {
        return Err(Error::too_large("sum state count", total, MAX_STATES));
    }
    let names: Vec<String> = left
        .names()
        .iter()
        .map(|s| format!("{LEFT_TAG}{s}"))
        .chain(right.names().iter().map(|s| format!("{RIGHT_TAG}{s}")))
        .collect();
    let blocks: Vec<StateSet> = left
        .atoms()
        .blocks()
        .iter()
        .copied()
        .chain(right.atoms().blocks().iter().map(|b| b << n))
        .collect();
    let space = FinSpace::from_parts(names, Partition::new(total, blocks)?)?;
    Ok(TaggedSpace { space, left_len: n, right_len: right.len() })
}

/// R_×: the cross pairs of a relation on a sum, untagged.
pub fn descend(sum: &TaggedSpace, r: &Rel) -> Rel {
    Rel::from_pairs(
        sum.left_len,
        sum.right_len,
        r.pairs().filter_map(|(u, v)| match (sum.untag(u), sum.untag(v)) {
            (Ok(i), Err(j)) => Some((i, j)),
            _ => None,
        }),
    )
}

/// ⇑R: cross pairs tagged into the sum.
pub fn lift_cross(sum: &TaggedSpace, r: &Rel) -> Rel {
    let n = sum.left_len + sum.right_len;
    Rel::from_pairs(n, n, r.pairs().map(|(i, j)| (sum.inl(i), sum.inr(j))))
}

/// R⁺ on S ⊕ S: every tagging of every pair.
pub fn lift_complete(sum: &TaggedSpace, r: &Rel) -> Rel {
    assert_eq!(sum.left_len, sum.right_len);
    let n = sum.left_len;
    let mut out = Rel::new(2 * n, 2 * n);
    for (s, t) in r.pairs() {
        for u in [s, n + s] {
            for v in [t, n + t] {
                out.insert(u, v);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// R_l or R_r: both coordinates tagged with one side.
pub fn lift_side(sum: &TaggedSpace, r: &Rel, side: Side) -> Rel {
    let n = sum.left_len + sum.right_len;
    let off = match side {
        Side::Left => 0,
        Side::Right => sum.left_len,
    };
    Rel::from_pairs(n, n, r.pairs().map(|(a, b)| (a + off, b + off)))
}

/// Restriction of a relation on a sum to one summand.
pub fn restrict_side(sum: &TaggedSpace, r: &Rel, side: Side) -> Rel {
    let (off, len) = match side {
        Side::Left => (0, sum.left_len),
        Side::Right => (sum.left_len, sum.right_len),
    };
    Rel::from_pairs(
        len,
        len,
        r.pairs()
            .filter(|&(a, b)| a >= off && a < off + len && b >= off && b < off + len)
            .map(|(a, b)| (a - off, b - off)),
    )
}

/// ∀(s,s')∈R: s∈A ⇔ s'∈A'.
pub fn is_r_closed_pair(r: &Rel, a: StateSet, a2: StateSet) -> bool {
    r.pairs().all(|(s, t)| contains(a, s) == contains(a2, t))
}

/// An explicit family of set pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFamily {
    pub left_len: usize,
    pub right_len: usize,
    pub pairs: BTreeSet<(StateSet, StateSet)>,
    /// Set when the family is closed under coordinatewise complement and union.
    pub bi_sigma: bool,
}

impl PairFamily {
    pub fn new(left_len: usize, right_len: usize, pairs: impl IntoIterator<Item = (StateSet, StateSet)>) -> Self {
        PairFamily { left_len, right_len, pairs: pairs.into_iter().collect(), bi_sigma: false }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, a: StateSet, a2: StateSet) -> bool {
        self.pairs.contains(&(a, a2))
    }

    pub fn iter(&self) -> impl Iterator<Item = (StateSet, StateSet)> + '_ {
        self.pairs.iter().copied()
    }

    /// Closed under coordinatewise complement and binary union, and nonempty.
    pub fn check_bi_sigma(&self) -> bool {
        let (fl, fr) = (full_set(self.left_len), full_set(self.right_len));
        !self.pairs.is_empty()
            && self.pairs.iter().all(|&(a, b)| self.contains(fl & !a, fr & !b))
            && self
                .pairs
                .iter()
                .all(|&(a, b)| self.pairs.iter().all(|&(c, d)| self.contains(a | c, b | d)))
    }

    /// First and second projections.
    pub fn projections(&self) -> (BTreeSet<StateSet>, BTreeSet<StateSet>) {
        (self.pairs.iter().map(|p| p.0).collect(), self.pairs.iter().map(|p| p.1).collect())
    }

    /// 𝓡^×(𝒟): pairs whose membership agrees in every member.
    pub fn relation(&self) -> Rel {
        let mut r = Rel::new(self.left_len, self.right_len);
        for s in 0..self.left_len {
            for t in 0..self.right_len {
                if self.pairs.iter().all(|&(a, b)| contains(a, s) == contains(b, t)) {
                    r.insert(s, t);
                }
            }
        }
        r
    }
}

/// A bi-σ-algebra given by its atoms, i.e. a σ-algebra on the disjoint
/// union of `0..left_len` and `0..right_len`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairAlgebra {
    pub left_len: usize,
    pub right_len: usize,
    pub atoms: Vec<(StateSet, StateSet)>,
}

pub const PAIR_ENUM_LIMIT: usize = 20;

impl PairAlgebra {
    pub fn from_partition(left_len: usize, right_len: usize, p: &Partition) -> Self {
        let atoms = p
            .blocks()
            .iter()
            .map(|&b| (b & full_set(left_len), b >> left_len))
            .collect();
        PairAlgebra { left_len, right_len, atoms }
    }

    /// The partition of the disjoint union.
    pub fn partition(&self) -> Partition {
        let blocks = self.atoms.iter().map(|&(a, b)| a | (b << self.left_len)).collect();
        Partition::new(self.left_len + self.right_len, blocks).expect("pair atoms partition the union")
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn union_of(&self, mask: u64) -> (StateSet, StateSet) {
        members(mask).fold((0, 0), |(a, b), k| (a | self.atoms[k].0, b | self.atoms[k].1))
    }

    /// Membership: both coordinates are unions of the same atoms.
    pub fn contains(&self, a: StateSet, a2: StateSet) -> bool {
        self.atom_mask(a, a2).is_some()
    }

    pub fn atom_mask(&self, a: StateSet, a2: StateSet) -> Option<u64> {
        if a & !full_set(self.left_len) != 0 || a2 & !full_set(self.right_len) != 0 {
            return None;
        }
        let mut mask = 0;
        let (mut ca, mut cb) = (0, 0);
        for (k, &(x, y)) in self.atoms.iter().enumerate() {
            let inside = x & a == x && y & a2 == y;
            let outside = x & a == 0 && y & a2 == 0;
            if inside {
                mask |= bit(k);
                ca |= x;
                cb |= y;
            } else if !outside {
                return None;
            }
        }
        (ca == a && cb == a2).then_some(mask)
    }

    /// All members, in increasing atom-mask order.
    pub fn members(&self) -> Result<Vec<(StateSet, StateSet)>> {
        if self.len() > PAIR_ENUM_LIMIT {
            return Err(Error::too_large("bi-σ-algebra atoms to enumerate", self.len(), PAIR_ENUM_LIMIT));
        }
        Ok((0..1u64 << self.len()).map(|m| self.union_of(m)).collect())
    }

    pub fn to_family(&self) -> Result<PairFamily> {
        let mut f = PairFamily::new(self.left_len, self.right_len, self.members()?);
        f.bi_sigma = true;
        Ok(f)
    }

    /// 𝓡^×: s and s' lie in the same atom.
    pub fn relation(&self) -> Rel {
        let mut r = Rel::new(self.left_len, self.right_len);
        for &(a, b) in &self.atoms {
            for s in members(a) {
                for t in members(b) {
                    r.insert(s, t);
                }
            }
        }
        r
    }
}

fn check_union_len(left_len: usize, right_len: usize) -> Result<()> {
    if left_len + right_len > MAX_STATES {
        return Err(Error::too_large("disjoint union size", left_len + right_len, MAX_STATES));
    }
    Ok(())
}

/// Atoms of Σ^×(R).
pub fn closed_pair_atoms(left: &FinSpace, right: &FinSpace, r: &Rel) -> Result<PairAlgebra> {
    let (n, m) = (left.len(), right.len());
    check_union_len(n, m)?;
    let mut uf = UnionFind::new(n + m);
    for &b in left.atoms().blocks() {
        uf.union_set(b);
    }
    for &b in right.atoms().blocks() {
        uf.union_set(b << n);
    }
    for (s, t) in r.pairs() {
        uf.union(s, n + t);
    }
    Ok(PairAlgebra::from_partition(n, m, &uf.partition()))
}

/// Σ^×(R): all measurable R-closed pairs.
pub fn closed_pairs(left: &FinSpace, right: &FinSpace, r: &Rel) -> Result<PairFamily> {
    closed_pair_atoms(left, right, r)?.to_family()
}

/// μ R̄ ν across two spaces: equal mass on every closed pair.
pub fn lift_measures_ext(left: &FinSpace, right: &FinSpace, r: &Rel, mu: &Measure, nu: &Measure) -> Result<bool> {
    for (a, b) in closed_pairs(left, right, r)?.iter() {
        if mu.mass(left, a)? != nu.mass(right, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Same as [`lift_measures_ext`], checked only on the atoms of Σ^×(R).
pub fn lift_measures_ext_atoms(left: &FinSpace, right: &FinSpace, alg: &PairAlgebra, mu: &Measure, nu: &Measure) -> Result<bool> {
    for &(a, b) in &alg.atoms {
        if mu.mass(left, a)? != nu.mass(right, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// σ^×(D) as atoms; `None` for the empty family.
pub fn bi_sigma_atoms(left_len: usize, right_len: usize, d: &[(StateSet, StateSet)]) -> Result<Option<PairAlgebra>> {
    check_union_len(left_len, right_len)?;
    if d.is_empty() {
        return Ok(None);
    }
    let gens: Vec<StateSet> = d.iter().map(|&(a, b)| a | (b << left_len)).collect();
    let p = generate_partition(left_len + right_len, &gens);
    Ok(Some(PairAlgebra::from_partition(left_len, right_len, &p)))
}

/// σ^×(D). The closure of the empty family is empty with the flag unset.
pub fn bi_sigma_close(left_len: usize, right_len: usize, d: &PairFamily) -> Result<PairFamily> {
    let pairs: Vec<_> = d.iter().collect();
    match bi_sigma_atoms(left_len, right_len, &pairs)? {
        None => Ok(PairFamily::new(left_len, right_len, [])),
        Some(alg) => alg.to_family(),
    }
}

/// Generators of the Δ^× trace for one pair (Q,Q'): a threshold pair per critical q.
pub fn delta_times_generators(
    left: &FinSpace,
    right: &FinSpace,
    u_left: &[Measure],
    u_right: &[Measure],
    q: StateSet,
    q2: StateSet,
) -> Result<Vec<(u64, u64)>> {
    let ml = left.atom_mask(q)?;
    let mr = right.atom_mask(q2)?;
    let values: Vec<Rational> = u_left
        .iter()
        .map(|mu| mu.mass_atoms(ml))
        .chain(u_right.iter().map(|nu| nu.mass_atoms(mr)))
        .collect();
    let mut out = Vec::new();
    for t in critical_thresholds(values.iter()) {
        out.push((
            delta_bowtie(left, u_left, q, Cmp::Lt, &t)?,
            delta_bowtie(right, u_right, q2, Cmp::Lt, &t)?,
        ));
    }
    Ok(out)
}

/// Atoms of the trace of Δ^×(D) on the two universes; `None` when D is empty.
pub fn delta_times_atoms(
    left: &FinSpace,
    right: &FinSpace,
    u_left: &[Measure],
    u_right: &[Measure],
    d: &[(StateSet, StateSet)],
) -> Result<Option<PairAlgebra>> {
    let mut gens = Vec::new();
    for &(q, q2) in d {
        gens.extend(delta_times_generators(left, right, u_left, u_right, q, q2)?);
    }
    bi_sigma_atoms(u_left.len(), u_right.len(), &gens)
}

/// The trace of Δ^×(D) on `u_left × u_right`, as an explicit family over
/// universe indices.
pub fn delta_times_trace(
    left: &FinSpace,
    right: &FinSpace,
    u_left: &[Measure],
    u_right: &[Measure],
    d: &PairFamily,
) -> Result<PairFamily> {
    let pairs: Vec<_> = d.iter().collect();
    match delta_times_atoms(left, right, u_left, u_right, &pairs)? {
        None => Ok(PairFamily::new(u_left.len(), u_right.len(), [])),
        Some(alg) => alg.to_family(),
    }
}
