//! Exact elections with tied and irrational votes.
//!
//! * [`prefs`] and [`parse`]: weak orders, pairwise relations, profiles, and
//!   their text forms.
//! * [`rules`]: scoring rules under the min, max, round-down and average tie
//!   extensions, majority graphs, Copeland^α, and approval.
//! * [`solvers`]: manipulation, control by adding voters, and bribery, both
//!   by exhaustive search and by the polynomial-time special cases.
//! * [`reductions`]: generators for the hardness constructions together with
//!   brute-force deciders for their source problems.
//! * [`tournament`]: turning two weak orders into two total orders with the
//!   same majority graph.

pub mod format;
pub mod par;
pub mod parse;
pub mod prefs;
pub mod reductions;
pub mod rules;
pub mod solvers;
pub mod tally;
pub mod tournament;

pub use parse::{parse_order, parse_profile, ParseError};
pub use prefs::{Axis, Candidates, Order, OrderKind, PairRelation, PrefError, Ranking, Voter, WeightedProfile};
pub use rules::{RuleError, RuleKind, RuleSpec, Score, ScoreTable, ScoringExtension, ScoringVector, WinnerModel};
pub use solvers::{Decision, SolveError, SolverConfig, VoteDomain, Witness};
