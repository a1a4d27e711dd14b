//! Bisimulation checkers and bisimilarity computations for LMPs.

pub mod cospan;
pub mod external;
pub mod oplus;
pub mod span;
pub mod state;
pub mod verdict;

pub use cospan::{
    cospan_family, cospan_family_is_stable, greatest_stable_within, is_cospan, make_cospan_witness, v_final_check,
    vee_bisimilarity, Cospan, CospanVerdict, StableWithin,
};
pub use external::{ext_bisimilarity, is_ext_bisim, z_closure};
pub use oplus::{is_oplus_bisim, oplus_bisimilar, oplus_bisimilarity, oplus_p_bisimilar, OplusPReport, OplusPWitness};
pub use span::{delta_bisimilarity, delta_span, is_delta_bisim, is_span, monic_span_lmp, SpanReport};
pub use state::{brute_oracle_state_bisimilarity, event_bisimilarity, is_event_bisim, is_state_bisim, state_bisimilarity};
pub use verdict::{BisimVerdict, Coupling, Witness};
