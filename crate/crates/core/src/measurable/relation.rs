use std::collections::BTreeSet;
use std::fmt;

use super::measure::Measure;
use super::space::{bit, contains, full_set, members, FinSpace, Partition, StateSet, UnionFind};
use crate::error::Result;
use crate::rational::Rational;

/// A binary relation between `0..left` and `0..right`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rel {
    left: usize,
    right: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl Rel {
    pub fn new(left: usize, right: usize) -> Self {
        Rel { left, right, pairs: BTreeSet::new() }
    }

    pub fn from_pairs(left: usize, right: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        assert!(pairs.iter().all(|&(a, b)| a < left && b < right), "pair outside relation domain");
        Rel { left, right, pairs }
    }

    /// Pairs given by state names of the two spaces.
    pub fn from_names<S: AsRef<str>>(left: &FinSpace, right: &FinSpace, pairs: &[(S, S)]) -> Result<Self> {
        let mut rel = Rel::new(left.len(), right.len());
        for (a, b) in pairs {
            rel.insert(left.index_of(a.as_ref())?, right.index_of(b.as_ref())?);
        }
        Ok(rel)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_pairs(n, n, (0..n).map(|i| (i, i)))
    }

    pub fn total(left: usize, right: usize) -> Self {
        Self::from_pairs(left, right, (0..left).flat_map(|i| (0..right).map(move |j| (i, j))))
    }

    /// Equivalence whose classes are the blocks of `p`.
    pub fn from_partition(p: &Partition) -> Self {
        let n = p.universe_len();
        let mut rel = Rel::new(n, n);
        for &b in p.blocks() {
            for i in members(b) {
                for j in members(b) {
                    rel.pairs.insert((i, j));
                }
            }
        }
        rel
    }

    pub fn left_len(&self) -> usize {
        self.left
    }

    pub fn right_len(&self) -> usize {
        self.right
    }

    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        assert!(a < self.left && b < self.right);
        self.pairs.insert((a, b))
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a, b))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn inverse(&self) -> Rel {
        Rel::from_pairs(self.right, self.left, self.pairs.iter().map(|&(a, b)| (b, a)))
    }

    pub fn union(&self, other: &Rel) -> Rel {
        assert_eq!((self.left, self.right), (other.left, other.right));
        let mut out = self.clone();
        out.pairs.extend(other.pairs.iter().copied());
        out
    }

    pub fn intersection(&self, other: &Rel) -> Rel {
        Rel {
            left: self.left,
            right: self.right,
            pairs: self.pairs.intersection(&other.pairs).copied().collect(),
        }
    }

    pub fn is_subset(&self, other: &Rel) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    pub fn retain(&mut self, f: impl FnMut(&(usize, usize)) -> bool) {
        self.pairs.retain(f);
    }

    pub fn compose(&self, other: &Rel) -> Rel {
        assert_eq!(self.right, other.left);
        let mut out = Rel::new(self.left, other.right);
        for &(a, b) in &self.pairs {
            for &(c, d) in other.pairs.range((b, 0)..(b + 1, 0)) {
                debug_assert_eq!(b, c);
                out.pairs.insert((a, d));
            }
        }
        out
    }

    /// States related to some member of `set`.
    pub fn image(&self, set: StateSet) -> StateSet {
        self.pairs.iter().filter(|&&(a, _)| contains(set, a)).fold(0, |acc, &(_, b)| acc | bit(b))
    }

    pub fn preimage(&self, set: StateSet) -> StateSet {
        self.pairs.iter().filter(|&&(_, b)| contains(set, b)).fold(0, |acc, &(a, _)| acc | bit(a))
    }

    pub fn domain(&self) -> StateSet {
        self.pairs.iter().fold(0, |acc, &(a, _)| acc | bit(a))
    }

    pub fn range(&self) -> StateSet {
        self.pairs.iter().fold(0, |acc, &(_, b)| acc | bit(b))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.left == self.right
    }

    pub fn is_reflexive(&self) -> bool {
        self.is_homogeneous() && (0..self.left).all(|i| self.contains(i, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_homogeneous() && self.pairs.iter().all(|&(a, b)| self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        self.is_homogeneous() && self.compose(self).is_subset(self)
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// Classes of an equivalence relation.
    pub fn classes(&self) -> Option<Partition> {
        if !self.is_equivalence() {
            return None;
        }
        Some(self.components())
    }

    /// Connected components of the relation seen as an undirected graph.
    pub fn components(&self) -> Partition {
        assert!(self.is_homogeneous());
        let mut uf = UnionFind::new(self.left);
        for &(a, b) in &self.pairs {
            uf.union(a, b);
        }
        uf.partition()
    }

    /// Smallest equivalence containing the relation.
    pub fn equivalence_closure(&self) -> Rel {
        Rel::from_partition(&self.components())
    }

    pub fn to_names(&self, left: &FinSpace, right: &FinSpace) -> Vec<(String, String)> {
        self.pairs.iter().map(|&(a, b)| (left.name(a).to_string(), right.name(b).to_string())).collect()
    }
}

impl fmt::Debug for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rel{:?}", self.pairs)
    }
}

/// Atoms of Σ(R): the measurable sets closed under R in both directions.
pub fn r_closed_atoms(space: &FinSpace, r: &Rel) -> Partition {
    let mut uf = UnionFind::new(space.len());
    for &b in space.atoms().blocks() {
        uf.union_set(b);
    }
    for (a, b) in r.pairs() {
        uf.union(a, b);
    }
    uf.partition()
}

/// Σ(R), listed explicitly.
pub fn r_closed_sets(space: &FinSpace, r: &Rel) -> Result<Vec<StateSet>> {
    r_closed_atoms(space, r).members()
}

/// `true` if `set` is closed under R in both directions.
pub fn is_r_closed(r: &Rel, set: StateSet) -> bool {
    r.pairs().all(|(a, b)| contains(set, a) == contains(set, b))
}

/// 𝓡(Λ): states indistinguishable by every set in the family.
pub fn relation_of(space: &FinSpace, family: &[StateSet]) -> Rel {
    let n = space.len();
    let p = Partition::from_keys(n, |i| family.iter().map(|&a| contains(a, i)).collect::<Vec<_>>());
    Rel::from_partition(&p)
}

/// μ R̄ ν: equal mass on every R-closed measurable set.
pub fn lift_measures_int(space: &FinSpace, r: &Rel, mu: &Measure, nu: &Measure) -> Result<bool> {
    for c in r_closed_sets(space, r)? {
        if mu.mass(space, c)? != nu.mass(space, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Partition a list of measures on `space` by agreement on every set of `family`.
pub fn measure_classes(space: &FinSpace, universe: &[Measure], family: &[StateSet]) -> Result<Partition> {
    let mut keys = Vec::with_capacity(universe.len());
    for mu in universe {
        let mut k = Vec::with_capacity(family.len());
        for &a in family {
            k.push(mu.mass(space, a)?);
        }
        keys.push(k);
    }
    Ok(Partition::from_keys(universe.len(), |i| keys[i].clone()))
}

/// Comparators of the modal logic and of Δ threshold sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Cmp {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Cmp {
    pub fn holds(self, x: &Rational, q: &Rational) -> bool {
        match self {
            Cmp::Lt => x < q,
            Cmp::Le => x <= q,
            Cmp::Gt => x > q,
            Cmp::Ge => x >= q,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    pub fn all() -> [Cmp; 4] {
        [Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge]
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Δ^{⋈q}(E) traced on a universe of measures, as a bitmask over the universe.
pub fn delta_bowtie(space: &FinSpace, universe: &[Measure], e: StateSet, cmp: Cmp, q: &Rational) -> Result<u64> {
    let mask = space.atom_mask(e)?;
    Ok(universe
        .iter()
        .enumerate()
        .filter(|(_, mu)| cmp.holds(&mu.mass_atoms(mask), q))
        .fold(0, |acc, (i, _)| acc | bit(i)))
}

/// Candidate thresholds realizing every distinct threshold set over `values`:
/// the values themselves together with 0 and 1, plus a midpoint between each
/// consecutive pair.
pub fn critical_thresholds<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Vec<Rational> {
    let mut v: BTreeSet<Rational> = values.into_iter().cloned().collect();
    v.insert(Rational::zero());
    v.insert(Rational::one());
    let sorted: Vec<Rational> = v.into_iter().collect();
    let mut out = Vec::with_capacity(sorted.len() * 2);
    for (i, x) in sorted.iter().enumerate() {
        out.push(x.clone());
        if let Some(y) = sorted.get(i + 1) {
            out.push(x.midpoint(y));
        }
    }
    out
}

/// The full set of `0..n` as a bitmask.
pub fn universe_mask(n: usize) -> u64 {
    full_set(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> FinSpace {
        FinSpace::powerset(&["a", "b", "c"]).unwrap()
    }

    fn brute_closed(space: &FinSpace, r: &Rel) -> Vec<StateSet> {
        (0..1u64 << space.len())
            .filter(|&a| space.is_measurable(a))
            .filter(|&a| {
                // {s : ∃x∈A (x R s ∨ s R x)} ⊆ A
                let touched = r.image(a) | r.preimage(a);
                touched & !a == 0
            })
            .collect()
    }

    #[test]
    fn closed_sets_examples() {
        let s = abc();
        assert_eq!(r_closed_sets(&s, &Rel::new(3, 3)).unwrap().len(), 8);
        assert_eq!(r_closed_sets(&s, &Rel::total(3, 3)).unwrap(), vec![0, 0b111]);
        let r = Rel::from_pairs(3, 3, [(0, 1)]);
        assert_eq!(r_closed_atoms(&s, &r), Partition::new(3, vec![0b011, 0b100]).unwrap());
        let rel = relation_of(&s, &r_closed_sets(&s, &r).unwrap());
        assert_eq!(rel.classes().unwrap(), Partition::new(3, vec![0b011, 0b100]).unwrap());
    }

    #[test]
    fn closed_sets_match_brute_force() {
        let atoms = vec![vec!["a", "b"], vec!["c"], vec!["d"], vec!["e"]];
        let s = FinSpace::new(&["a", "b", "c", "d", "e"], Some(&atoms)).unwrap();
        for seed in 0u64..64 {
            let pairs = (0..5).flat_map(|i| (0..5).map(move |j| (i, j))).filter(|&(i, j)| (seed.wrapping_mul(2654435761) >> (i * 5 + j)) & 1 == 1 && i != j);
            let r = Rel::from_pairs(5, 5, pairs.take(3));
            let mut fast = r_closed_sets(&s, &r).unwrap();
            fast.sort();
            assert_eq!(fast, brute_closed(&s, &r));
        }
    }

    #[test]
    fn relation_of_examples() {
        let s = FinSpace::powerset(&["1", "2", "3"]).unwrap();
        assert_eq!(relation_of(&s, &[]), Rel::total(3, 3));
        let rel = relation_of(&s, &[0b011, 0b100]);
        assert!(rel.contains(0, 1) && !rel.contains(0, 2) && rel.is_equivalence());
    }

    #[test]
    fn lift_int_examples() {
        let s = abc();
        let r = Rel::from_pairs(3, 3, [(0, 1)]);
        let mu = Measure::new(vec![Rational::new(1, 2), Rational::zero(), Rational::new(1, 2)]).unwrap();
        let nu = Measure::new(vec![Rational::new(1, 4), Rational::new(1, 4), Rational::new(1, 2)]).unwrap();
        assert!(lift_measures_int(&s, &r, &mu, &nu).unwrap());
        assert!(!lift_measures_int(&s, &Rel::identity(3), &mu, &nu).unwrap());
        assert!(lift_measures_int(&s, &Rel::total(3, 3), &mu, &nu).unwrap());
    }

    #[test]
    fn measure_classes_example() {
        let s = FinSpace::powerset(&["p", "q"]).unwrap();
        let m = |a, b, c, d| Measure::new(vec![Rational::new(a, b), Rational::new(c, d)]).unwrap();
        let u = vec![m(1, 2, 1, 2), m(1, 2, 1, 4), m(1, 4, 3, 4)];
        let p = measure_classes(&s, &u, &[0b01]).unwrap();
        assert_eq!(p, Partition::new(3, vec![0b011, 0b100]).unwrap());
        assert_eq!(measure_classes(&s, &u[..1], &[0b01]).unwrap().len(), 1);
    }

    #[test]
    fn delta_bowtie_examples() {
        let s = FinSpace::powerset(&["p", "q"]).unwrap();
        let u = vec![
            Measure::new(vec![Rational::new(1, 4), Rational::zero()]).unwrap(),
            Measure::new(vec![Rational::new(1, 2), Rational::zero()]).unwrap(),
        ];
        assert_eq!(delta_bowtie(&s, &u, 0b01, Cmp::Ge, &Rational::zero()).unwrap(), 0b11);
        assert_eq!(delta_bowtie(&s, &u, 0b01, Cmp::Gt, &Rational::one()).unwrap(), 0);
        assert_eq!(delta_bowtie(&s, &u, 0b01, Cmp::Gt, &Rational::new(1, 3)).unwrap(), 0b10);
    }

    #[test]
    fn criticals_include_midpoints() {
        let v = [Rational::new(1, 2)];
        let c = critical_thresholds(v.iter());
        assert_eq!(
            c,
            vec![Rational::zero(), Rational::new(1, 4), Rational::new(1, 2), Rational::new(3, 4), Rational::one()]
        );
    }
}
