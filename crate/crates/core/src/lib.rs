//! Labelled Markov processes over finite measurable spaces, with checkers
//! for internal, external and categorical bisimulations, their
//! nondeterministic counterparts, and the Spoiler/Duplicator game.

pub mod bisim;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod lp;
pub mod lmp;
pub mod measurable;
pub mod model;
pub mod nlmp;
pub mod random;
pub mod report;
pub mod search;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
