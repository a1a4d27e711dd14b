//! Seeded random processes. Kernels are drawn per atom, so every sample
//! validates.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lmp::Lmp;
use crate::measurable::{FinSpace, Measure, Partition};
use crate::model::{Kind, ModelFile};
use crate::nlmp::Nlmp;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaMode {
    Powerset,
    Coarse,
    /// Powerset or coarse with equal odds.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomSpec {
    pub kind: Kind,
    pub max_states: usize,
    /// Upper bound on the number of atoms; `None` leaves it at the state count.
    pub max_atoms: Option<usize>,
    pub max_denominator: u64,
    pub labels: usize,
    pub sigma: SigmaMode,
    /// NLMPs only.
    pub max_measures: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            kind: Kind::Lmp,
            max_states: 6,
            max_atoms: None,
            max_denominator: 8,
            labels: 2,
            sigma: SigmaMode::Mixed,
            max_measures: 2,
        }
    }
}

impl RandomSpec {
    pub fn nlmp() -> Self {
        RandomSpec { kind: Kind::Nlmp, max_states: 5, ..Self::default() }
    }
}

fn label_names(k: usize) -> Vec<String> {
    (0..k.max(1)).map(|i| char::from(b'a' + i as u8).to_string()).collect()
}

/// State names sort in index order up to 10 states.
fn state_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn random_space<R: Rng>(spec: &RandomSpec, prefix: &str, rng: &mut R) -> FinSpace {
    let coarse = match spec.sigma {
        SigmaMode::Powerset => false,
        SigmaMode::Coarse => true,
        SigmaMode::Mixed => rng.gen_bool(0.5),
    };
    let lo = if coarse { 2 } else { 1 };
    let n = rng.gen_range(lo..=spec.max_states.max(lo));
    let max_atoms = spec.max_atoms.unwrap_or(n).clamp(1, n);
    let names = state_names(prefix, n);
    if !coarse && max_atoms == n {
        return FinSpace::powerset(&names).expect("distinct names");
    }
    // at least one shared atom in coarse mode
    let upper = if coarse { max_atoms.min(n - 1) } else { max_atoms };
    let k = rng.gen_range(1..=upper.max(1));
    let mut labels: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect();
    labels.shuffle(rng);
    let atoms = Partition::from_labels(&labels);
    FinSpace::from_parts(names, atoms).expect("valid partition")
}

/// A subprobability measure on `atoms` with a common denominator at most
/// `max_den`; often sparse, sometimes zero.
fn random_measure<R: Rng>(atoms: usize, max_den: u64, rng: &mut R) -> Measure {
    let den = rng.gen_range(1..=max_den.max(1));
    let mut units = if rng.gen_bool(0.15) { 0 } else { rng.gen_range(1..=den) };
    let mut weights = vec![0u64; atoms];
    while units > 0 {
        let take = rng.gen_range(1..=units);
        weights[rng.gen_range(0..atoms)] += take;
        units -= take;
    }
    Measure::new(weights.into_iter().map(|w| Rational::new(w as i64, den as i64)).collect()).expect("total at most one")
}

fn lmp_on<R: Rng>(space: FinSpace, spec: &RandomSpec, rng: &mut R) -> Lmp {
    let k = space.num_atoms();
    let kernel = (0..spec.labels.max(1)).map(|_| (0..k).map(|_| random_measure(k, spec.max_denominator, rng)).collect()).collect();
    Lmp::from_atom_kernels(space, label_names(spec.labels), kernel).expect("well-formed kernel")
}

pub fn random_lmp<R: Rng>(spec: &RandomSpec, rng: &mut R) -> Lmp {
    let space = random_space(spec, "s", rng);
    lmp_on(space, spec, rng)
}

fn nlmp_on<R: Rng>(space: FinSpace, spec: &RandomSpec, rng: &mut R) -> Nlmp {
    let k = space.num_atoms();
    // a small pool makes shared measures, and so nontrivial relations, likely
    let pool: Vec<Measure> = (0..k + 1).map(|_| random_measure(k, spec.max_denominator, rng)).collect();
    let mut trans = Vec::new();
    for _ in 0..spec.labels.max(1) {
        let per_atom: Vec<Vec<Measure>> = (0..k)
            .map(|_| {
                let count = rng.gen_range(0..=spec.max_measures);
                (0..count).map(|_| pool.choose(rng).expect("nonempty pool").clone()).collect()
            })
            .collect();
        trans.push((0..space.len()).map(|s| per_atom[space.atom_of(s)].clone()).collect());
    }
    Nlmp::new(space, label_names(spec.labels), trans).expect("per-atom transitions are measurable")
}

pub fn random_nlmp<R: Rng>(spec: &RandomSpec, rng: &mut R) -> Nlmp {
    let space = random_space(spec, "s", rng);
    nlmp_on(space, spec, rng)
}

/// A second process related to `left`: an independent sample, a renamed
/// copy, or a copy with one state duplicated.
pub fn random_partner<R: Rng>(left: &Lmp, spec: &RandomSpec, rng: &mut R) -> Lmp {
    match rng.gen_range(0..3) {
        0 => {
            let space = random_space(spec, "t", rng);
            lmp_on(space, spec, rng)
        }
        1 => renamed(left, None),
        _ => renamed(left, Some(rng.gen_range(0..left.len()))),
    }
}

/// Copy of `lmp` with states named t0.. and optionally one extra state
/// duplicating `dup`; a new atom's mass is split off the duplicated atom.
fn renamed(lmp: &Lmp, dup: Option<usize>) -> Lmp {
    let n = lmp.len() + dup.is_some() as usize;
    let names = state_names("t", n);
    let mut labels = lmp.space().atoms().labels();
    let Some(d) = dup else {
        let space = FinSpace::from_parts(names, Partition::from_labels(&labels)).expect("valid");
        return Lmp::from_atom_kernels(space, lmp.labels().to_vec(), lmp.atom_kernels().to_vec()).expect("same shape");
    };
    let k = lmp.space().num_atoms();
    let home = lmp.space().atom_of(d);
    let powerset = lmp.space().is_powerset();
    labels.push(if powerset { k } else { home });
    let atoms = Partition::from_labels(&labels);
    let space = FinSpace::from_parts(names, atoms.clone()).expect("valid");
    // atom indices follow the lowest member, so map old atoms through a member
    let old_atom_new_index: Vec<usize> = (0..k)
        .map(|i| atoms.block_index_of(lmp.space().atom(i).trailing_zeros() as usize))
        .collect();
    let new_k = atoms.len();
    let extra = if powerset { Some(atoms.block_index_of(n - 1)) } else { None };
    let kernel = lmp
        .atom_kernels()
        .iter()
        .map(|row| {
            let mut per_new = vec![Measure::zero(new_k); new_k];
            for (i, m) in row.iter().enumerate() {
                let mut w = vec![Rational::zero(); new_k];
                for (j, x) in m.weights().iter().enumerate() {
                    w[old_atom_new_index[j]] = x.clone();
                }
                if let Some(e) = extra {
                    let half = &w[old_atom_new_index[home]] / &Rational::from_int(2);
                    w[old_atom_new_index[home]] = half.clone();
                    w[e] = half;
                }
                per_new[old_atom_new_index[i]] = Measure::new(w).expect("same total");
            }
            if let Some(e) = extra {
                per_new[e] = per_new[old_atom_new_index[home]].clone();
            }
            per_new
        })
        .collect();
    Lmp::from_atom_kernels(space, lmp.labels().to_vec(), kernel).expect("same shape")
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A model file determined by the spec and seed.
pub fn gen_random(spec: &RandomSpec, seed: u64) -> ModelFile {
    let mut rng = rng_for(seed);
    let note = Some(format!("random sample, seed {seed}"));
    match spec.kind {
        Kind::Lmp => ModelFile::from_lmp(&random_lmp(spec, &mut rng), note),
        Kind::Nlmp => ModelFile::from_nlmp(&random_nlmp(spec, &mut rng), note),
    }
}

/// A pair of processes over the same labels.
pub fn random_lmp_pair(spec: &RandomSpec, seed: u64) -> (Lmp, Lmp) {
    let mut rng = rng_for(seed);
    let left = random_lmp(spec, &mut rng);
    let right = random_partner(&left, spec, &mut rng);
    (left, right)
}

pub fn random_nlmp_pair(spec: &RandomSpec, seed: u64) -> (Nlmp, Nlmp) {
    let mut rng = rng_for(seed);
    let left = random_nlmp(spec, &mut rng);
    let right = if rng.gen_bool(0.5) {
        left.clone()
    } else {
        let space = random_space(spec, "t", &mut rng);
        nlmp_on(space, spec, &mut rng)
    };
    (left, right)
}
