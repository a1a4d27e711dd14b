//! Finite measurable spaces presented by atom partitions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A set of states, as a bitmask over state indices.
pub type StateSet = u64;

pub const MAX_STATES: usize = 64;

/// Iterate over the indices set in `set`, lowest first.
pub fn members(set: StateSet) -> impl Iterator<Item = usize> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

pub fn bit(i: usize) -> StateSet {
    1u64 << i
}

pub fn full_set(n: usize) -> StateSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn contains(set: StateSet, i: usize) -> bool {
    set >> i & 1 == 1
}

/// A partition of `0..n` into nonempty blocks.
///
/// Blocks are kept sorted by their lowest element, so two partitions with the
/// same blocks compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<StateSet>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<StateSet>) -> Result<Self> {
        if n > MAX_STATES {
            return Err(Error::too_large("state count", n, MAX_STATES));
        }
        let mut seen = 0;
        for &b in &blocks {
            if b == 0 {
                return Err(Error::NotAPartition("empty block".into()));
            }
            if b & seen != 0 {
                return Err(Error::NotAPartition("overlapping blocks".into()));
            }
            seen |= b;
        }
        if seen != full_set(n) {
            return Err(Error::NotAPartition("blocks do not cover every state".into()));
        }
        Ok(Self::canonical(n, blocks))
    }

    fn canonical(n: usize, mut blocks: Vec<StateSet>) -> Self {
        blocks.sort_by_key(|b| b.trailing_zeros());
        Partition { n, blocks }
    }

    pub fn discrete(n: usize) -> Self {
        Partition { n, blocks: (0..n).map(bit).collect() }
    }

    pub fn trivial(n: usize) -> Self {
        Partition { n, blocks: vec![full_set(n)] }
    }

    /// Group indices by a key; indices with equal keys share a block.
    pub fn from_keys<K: Ord>(n: usize, key: impl Fn(usize) -> K) -> Self {
        let mut groups: BTreeMap<K, StateSet> = BTreeMap::new();
        for i in 0..n {
            *groups.entry(key(i)).or_default() |= bit(i);
        }
        Self::canonical(n, groups.into_values().collect())
    }

    /// Blocks given by a block index per element.
    pub fn from_labels(labels: &[usize]) -> Self {
        Self::from_keys(labels.len(), |i| labels[i])
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[StateSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_index_of(&self, i: usize) -> usize {
        self.blocks
            .iter()
            .position(|&b| contains(b, i))
            .expect("index outside partition")
    }

    pub fn block_of(&self, i: usize) -> StateSet {
        self.blocks[self.block_index_of(i)]
    }

    /// Block index per element.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (k, &b) in self.blocks.iter().enumerate() {
            for i in members(b) {
                out[i] = k;
            }
        }
        out
    }

    /// `true` if `set` is a union of blocks.
    pub fn is_measurable(&self, set: StateSet) -> bool {
        set & !full_set(self.n) == 0 && self.blocks.iter().all(|&b| b & set == 0 || b & set == b)
    }

    /// The indices of the blocks contained in `set`, or `None` if `set` cuts a block.
    pub fn block_mask(&self, set: StateSet) -> Option<u64> {
        if set & !full_set(self.n) != 0 {
            return None;
        }
        let mut mask = 0;
        for (k, &b) in self.blocks.iter().enumerate() {
            if b & set == b {
                mask |= bit(k);
            } else if b & set != 0 {
                return None;
            }
        }
        Some(mask)
    }

    /// Union of the blocks selected by `mask`.
    pub fn union_of(&self, mask: u64) -> StateSet {
        members(mask).map(|k| self.blocks[k]).fold(0, |a, b| a | b)
    }

    /// Every union of blocks, in increasing block-mask order.
    pub fn members(&self) -> Result<Vec<StateSet>> {
        const LIMIT: usize = 20;
        if self.len() > LIMIT {
            return Err(Error::too_large("σ-algebra atoms to enumerate", self.len(), LIMIT));
        }
        Ok((0..1u64 << self.len()).map(|m| self.union_of(m)).collect())
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        assert_eq!(self.n, other.n);
        let mut blocks = Vec::new();
        for &a in &self.blocks {
            for &b in &other.blocks {
                if a & b != 0 {
                    blocks.push(a & b);
                }
            }
        }
        Self::canonical(self.n, blocks)
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &Partition) -> Partition {
        assert_eq!(self.n, other.n);
        let mut uf = UnionFind::new(self.n);
        for b in self.blocks.iter().chain(&other.blocks) {
            uf.union_set(*b);
        }
        uf.partition()
    }

    /// `true` if every block of `self` lies inside a block of `coarser`,
    /// i.e. the σ-algebra of `coarser` is contained in that of `self`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n == coarser.n
            && self.blocks.iter().all(|&b| coarser.blocks.iter().any(|&c| b & c == b))
    }

    /// Split every block by membership in `set`.
    pub fn split(&self, set: StateSet) -> Partition {
        let mut blocks = Vec::with_capacity(self.blocks.len() + 1);
        for &b in &self.blocks {
            if b & set != 0 {
                blocks.push(b & set);
            }
            if b & !set != 0 {
                blocks.push(b & !set);
            }
        }
        Self::canonical(self.n, blocks)
    }

    /// Merge blocks according to a partition of the block indices.
    pub fn coarsen(&self, grouping: &Partition) -> Partition {
        assert_eq!(grouping.n, self.len());
        let blocks = grouping.blocks.iter().map(|&g| self.union_of(g)).collect();
        Self::canonical(self.n, blocks)
    }

    /// Trace of the partition on a subset, reindexed onto `0..|subset|`.
    pub fn restrict(&self, subset: StateSet) -> Partition {
        let idx: Vec<usize> = members(subset).collect();
        let labels: Vec<usize> = idx.iter().map(|&i| self.block_index_of(i)).collect();
        Self::from_labels(&labels)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<Vec<usize>> = self.blocks.iter().map(|&b| members(b).collect()).collect();
        write!(f, "Partition{blocks:?}")
    }
}

/// Enumerate all set partitions of `0..k` by restricted-growth strings.
pub fn set_partitions(k: usize) -> SetPartitions {
    SetPartitions { rgs: vec![0; k], max: vec![0; k], done: false }
}

pub struct SetPartitions {
    rgs: Vec<usize>,
    max: Vec<usize>,
    done: bool,
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_labels(&self.rgs);
        let k = self.rgs.len();
        // advance: rgs[i] <= 1 + max(rgs[..i])
        let mut i = k;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.max[i - 1] {
                self.rgs[i] += 1;
                self.max[i] = self.max[i - 1].max(self.rgs[i]);
                for j in i + 1..k {
                    self.rgs[j] = 0;
                    self.max[j] = self.max[i];
                }
                break;
            }
        }
        Some(out)
    }
}

/// Bell number, saturating.
pub fn bell(k: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..k {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = next.last().unwrap().saturating_add(x);
            next.push(v);
        }
        row = next;
    }
    row[0]
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut j = i;
        while self.parent[j] != r {
            let next = self.parent[j];
            self.parent[j] = r;
            j = next;
        }
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    pub fn union_set(&mut self, set: StateSet) {
        let mut it = members(set);
        if let Some(first) = it.next() {
            for j in it {
                self.union(first, j);
            }
        }
    }

    pub fn partition(&mut self) -> Partition {
        let n = self.parent.len();
        let roots: Vec<usize> = (0..n).map(|i| self.find(i)).collect();
        Partition::from_labels(&roots)
    }
}

/// A finite set of named states with a σ-algebra given by its atoms.
///
/// States are stored in lexicographic order of their identifiers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSpace {
    names: Vec<String>,
    atoms: Partition,
}

impl FinSpace {
    /// Build a space; `atoms = None` means the powerset σ-algebra.
    pub fn new<S: AsRef<str>>(states: &[S], atoms: Option<&[Vec<S>]>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::EmptySpace);
        }
        if states.len() > MAX_STATES {
            return Err(Error::too_large("state count", states.len(), MAX_STATES));
        }
        let mut names: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        for w in names.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateState(w[0].clone()));
            }
        }
        let n = names.len();
        let atoms = match atoms {
            None => Partition::discrete(n),
            Some(list) => {
                let mut blocks = Vec::with_capacity(list.len());
                for atom in list {
                    let mut b = 0;
                    for s in atom {
                        let i = names
                            .binary_search_by(|x| x.as_str().cmp(s.as_ref()))
                            .map_err(|_| Error::UnknownState(s.as_ref().to_string()))?;
                        if contains(b, i) {
                            return Err(Error::NotAPartition(format!(
                                "state {:?} repeated in an atom",
                                s.as_ref()
                            )));
                        }
                        b |= bit(i);
                    }
                    blocks.push(b);
                }
                Partition::new(n, blocks)?
            }
        };
        Ok(FinSpace { names, atoms })
    }

    pub fn powerset<S: AsRef<str>>(states: &[S]) -> Result<Self> {
        Self::new(states, None)
    }

    /// Build from already sorted names and a partition over their indices.
    pub fn from_parts(names: Vec<String>, atoms: Partition) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptySpace);
        }
        for w in names.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::DuplicateState(w[1].clone()));
            }
        }
        if atoms.universe_len() != names.len() {
            return Err(Error::NotAPartition("partition size differs from state count".into()));
        }
        Ok(FinSpace { names, atoms })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .binary_search_by(|x| x.as_str().cmp(name))
            .map_err(|_| Error::UnknownState(name.to_string()))
    }

    pub fn atoms(&self) -> &Partition {
        &self.atoms
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, k: usize) -> StateSet {
        self.atoms.blocks()[k]
    }

    pub fn atom_of(&self, i: usize) -> usize {
        self.atoms.block_index_of(i)
    }

    pub fn full(&self) -> StateSet {
        full_set(self.len())
    }

    pub fn is_powerset(&self) -> bool {
        self.atoms.len() == self.len()
    }

    pub fn is_measurable(&self, set: StateSet) -> bool {
        self.atoms.is_measurable(set)
    }

    /// Atom mask of a measurable set; error if it is not measurable.
    pub fn atom_mask(&self, set: StateSet) -> Result<u64> {
        self.atoms
            .block_mask(set)
            .ok_or_else(|| Error::NonMeasurable(self.fmt_set(set)))
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<StateSet> {
        let mut set = 0;
        for s in names {
            set |= bit(self.index_of(s.as_ref())?);
        }
        Ok(set)
    }

    pub fn names_of(&self, set: StateSet) -> Vec<String> {
        members(set).map(|i| self.names[i].clone()).collect()
    }

    pub fn fmt_set(&self, set: StateSet) -> String {
        format!("{{{}}}", self.names_of(set).join(","))
    }

    /// Atoms as lists of names.
    pub fn atom_names(&self) -> Vec<Vec<String>> {
        self.atoms.blocks().iter().map(|&b| self.names_of(b)).collect()
    }

    /// The same states with another σ-algebra.
    pub fn with_atoms(&self, atoms: Partition) -> Result<FinSpace> {
        FinSpace::from_parts(self.names.clone(), atoms)
    }

    /// The subspace on `subset` with the trace σ-algebra.
    pub fn subspace(&self, subset: StateSet) -> Result<FinSpace> {
        let names = self.names_of(subset);
        FinSpace::from_parts(names, self.atoms.restrict(subset))
    }
}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinSpace{:?}", self.atom_names())
    }
}

/// The smallest σ-algebra on `states` containing every generator.
pub fn sigma_generate<S: AsRef<str>>(states: &[S], generators: &[Vec<S>]) -> Result<FinSpace> {
    let base = FinSpace::powerset(states)?;
    let mut sets = Vec::with_capacity(generators.len());
    for g in generators {
        sets.push(base.set_of(g)?);
    }
    let n = base.len();
    let atoms = generate_partition(n, &sets);
    base.with_atoms(atoms)
}

/// Atoms of σ(generators) on `0..n`: classes of equal membership pattern.
pub fn generate_partition(n: usize, generators: &[StateSet]) -> Partition {
    let mut p = Partition::trivial(n);
    for &g in generators {
        p = p.split(g & full_set(n));
    }
    p
}
