//! Exact solver for coalitional task-allocation games in which each player
//! privately knows the distribution of its task duration.
//!
//! The crate computes the stochastic characteristic function, Shapley
//! values, the execution-verified reward mechanisms (SEV, SEVB, VCGEV) and
//! equal split, and checks incentive compatibility by searching over
//! misreports. All arithmetic is exact.

pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod io;
pub mod mechanisms;
pub mod model;
pub mod pmf;
pub mod rational;
pub mod shapley;
pub mod table;
pub mod valuation;

pub use error::{Error, Result};
pub use mechanisms::{
    equal_split_rewards, expected_rewards, sev_rewards, sevb_rewards, vcgev_rewards, Evaluator, MechanismKind,
};
pub use model::{Assignment, Coalition, Instance, PlayerId, Realization, ReportProfile, RewardVector};
pub use pmf::{degenerate_pmf, Duration, Pmf};
pub use rational::Rational;
pub use shapley::{shapley_by_permutations, shapley_values};
pub use valuation::{
    adaptive_upper_bound, assignment_value, coalition_value, deadline_probability, optimal_assignment,
};
