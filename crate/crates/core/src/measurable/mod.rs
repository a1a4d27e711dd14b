//! Finite measurable spaces and the relation and pair machinery built on them.

pub mod measure;
pub mod pairs;
pub mod relation;
pub mod space;

pub use measure::Measure;
pub use pairs::{
    bi_sigma_atoms, bi_sigma_close, closed_pair_atoms, closed_pairs, delta_times_atoms, delta_times_trace, descend,
    is_r_closed_pair, lift_complete, lift_cross, lift_measures_ext, lift_side, restrict_side, sum_space, PairAlgebra,
    PairFamily, Side, TaggedSpace,
};
pub use relation::{
    critical_thresholds, delta_bowtie, is_r_closed, lift_measures_int, measure_classes, r_closed_atoms, r_closed_sets,
    relation_of, Cmp, Rel,
};
pub use space::{sigma_generate, FinSpace, Partition, StateSet};
