//! Weighted voting protocols, coalitional manipulation solvers, PARTITION
//! reduction gadgets and winning probabilities under vote uncertainty.

pub mod ballots;
pub mod cli;
pub mod error;
pub mod gadgets;
pub mod manipulate;
pub mod protocols;
pub mod scalar;
pub mod uncertain;

pub use ballots::{
    parse_election, serialize_election, Candidate, ElectionFile, ManipulationInstance, Mode, PairwiseMatrix, Profile,
    Protocol, VoteOrder, Weight, WeightedVote,
};
pub use error::{Error, Result};
pub use manipulate::{Decision, ManipulationAnswer, SearchConfig};
pub use protocols::{CupSchedule, Rule, ScoreProtocol, ScoreTable, WinnerSet};
pub use scalar::Probability;

/// Exact probabilities.
pub type ExactProbability = num_rational::BigRational;
/// Fast approximate probabilities.
pub type FloatProbability = f64;
pub type ExactCupDistribution = protocols::CupDistribution<ExactProbability>;
pub type FloatCupDistribution = protocols::CupDistribution<FloatProbability>;
