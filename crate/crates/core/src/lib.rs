//! Engine, exact solver and experiment harness for the card game Peer
//! Pressure.
//!
//! * [`game`]: positions, the battle rule, canonical forms and the referee.
//! * [`solver`]: bottom-up win tables, strategy extraction, best responses.
//! * [`lemma`]: exact golden-ratio arithmetic, the hand-size classifier and
//!   its constructive strategy, improvement steps, interval certificates.
//! * [`experiments`]: dealing models, census, Monte Carlo estimators.
//! * [`cli`]: the `peer-pressure` command line.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod game;
pub mod lemma;
pub mod solver;
pub mod strategy;

pub use error::{Error, Result};
pub use game::{CanonicalPosition, Hand, Player, Position, Rank, Transcript};
pub use solver::{Outcome, SolverTable};
