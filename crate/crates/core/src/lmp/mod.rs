//! Labelled Markov processes, the modal logic and stable σ-algebras.

pub mod logic;
pub mod process;
pub mod stable;

pub use logic::{parse_formula, semantics, semantics_any, Formula};
pub use process::{check_zigzag, direct_sum, restrict_sublmp, validate_lmp, KernelRow, Lmp, ZigzagFailure, ZigzagReport};
pub use stable::{event_companion, is_stable, is_stable_partition, quotient, smallest_stable};
