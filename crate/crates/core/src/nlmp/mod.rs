//! Nondeterministic labelled Markov processes and their bisimulations.

pub mod bisim;
pub mod process;

pub use bisim::{
    ext_event_bisimilarity, ext_event_from_hit, ext_hit_bisimilarity, ext_state_bisimilarity, int_event_bisimilarity,
    int_event_smallest, int_hit_bisimilarity, int_state_bisimilarity, is_ext_event_bisim, is_ext_hit_bisim,
    is_ext_state_bisim, is_int_event, is_int_hit_bisim, is_int_state_bisim, is_times_stable, separating_theta,
    BiStableFamily, Separation,
};
pub use process::{embed_lmp, nlmp_semantics, validate_nlmp, Nlmp, TransitionRow};
