//! Decision procedures for coalitional weighted manipulation (CWCM),
//! constructive control by adding voters (CCAV), and bribery.
//!
//! Each problem has an exhaustive oracle for desk-scale instances and, where
//! one exists, a polynomial-time algorithm. Every `YES` carries a witness
//! that [`ManipulationInstance::replay`] (and friends) can check by
//! re-running the election.

use std::fmt;

use thiserror::Error;

use crate::parse::ParseError;
use crate::prefs::{
    enumerate_total_orders, enumerate_weak_orders, ranking_single_peaked_lackner, Axis, Order, PairRelation, PrefError,
    WeightedProfile,
};
use crate::rules::{RuleError, RuleSpec};
use crate::tally::Tallier;

mod bribery;
mod ccav;
mod cwcm;
pub mod flow;

pub use bribery::{bribery_exact, weighted_bribery_t_approval};
pub use ccav::ccav_exact;
pub use cwcm::{
    copeland_3cand_regime, cwcm_3cand_dp, cwcm_copeland_3cand_p, cwcm_enumerate, cwcm_exact, cwcm_min_extension,
    llull_irrational_cwcm_flow, Regime,
};
pub use flow::{max_flow, FlowNetwork, FlowResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Pref(#[from] PrefError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{what} is {size}, above the cap of {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

impl SolveError {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        SolveError::Precondition(msg.into())
    }
}

/// Enumeration limits. Exceeding one is an error, never a silent truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Manipulators in an exhaustive CWCM search.
    pub max_manipulators: usize,
    /// Vote assignments visited by an exhaustive CWCM or bribery search.
    pub max_assignments: u128,
    /// Votes in a manipulator or replacement vote domain.
    pub max_domain: usize,
    /// Candidates for weak-order enumeration.
    pub max_enumeration_candidates: usize,
    /// Reachable states per layer of the three-candidate dynamic program.
    pub max_dp_states: usize,
    /// Unregistered voters in exhaustive CCAV.
    pub max_unregistered: usize,
    /// Add limit in exhaustive CCAV.
    pub max_add_limit: usize,
    /// Voters in exhaustive bribery.
    pub max_bribery_voters: usize,
    /// Bribe limit in exhaustive bribery.
    pub max_bribe_limit: usize,
    /// Candidate bound treated as "constant m" by the t-approval bribery algorithm.
    pub max_constant_candidates: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_manipulators: 6,
            max_assignments: 20_000_000,
            max_domain: 100_000,
            max_enumeration_candidates: crate::prefs::DEFAULT_ENUMERATION_CAP,
            max_dp_states: 2_000_000,
            max_unregistered: 20,
            max_add_limit: 6,
            max_bribery_voters: 12,
            max_bribe_limit: 4,
            max_constant_candidates: 6,
        }
    }
}

/// Caps plus the choice between the rayon and sequential paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub caps: Caps,
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            caps: Caps::default(),
            parallel: crate::par::parallel_available(),
        }
    }
}

impl SolverConfig {
    pub fn sequential() -> Self {
        SolverConfig {
            parallel: false,
            ..Default::default()
        }
    }
}

pub(crate) fn check_cap(what: &'static str, size: u128, cap: u128) -> Result<(), SolveError> {
    if size > cap {
        Err(SolveError::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

/// Which votes a strategic voter may cast.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Total,
    Top,
    Bottom,
    Weak,
    /// Any pairwise relation, ties allowed.
    Pairwise,
    /// Any pairwise relation with a strict preference on every pair.
    PairwiseStrict,
}

impl DomainKind {
    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Total => "total",
            DomainKind::Top => "top",
            DomainKind::Bottom => "bottom",
            DomainKind::Weak => "weak",
            DomainKind::Pairwise => "pairwise",
            DomainKind::PairwiseStrict => "pairwise-strict",
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DomainKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "total" => DomainKind::Total,
            "top" => DomainKind::Top,
            "bottom" => DomainKind::Bottom,
            "weak" => DomainKind::Weak,
            "pairwise" | "irrational" => DomainKind::Pairwise,
            "pairwise-strict" | "irrational-strict" => DomainKind::PairwiseStrict,
            other => return Err(format!("unknown vote domain `{other}`")),
        })
    }
}

/// A vote kind plus an optional single-peakedness axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VoteDomain {
    pub kind: DomainKind,
    pub axis: Option<Axis>,
}

impl VoteDomain {
    pub fn new(kind: DomainKind) -> Self {
        VoteDomain { kind, axis: None }
    }

    pub fn single_peaked(kind: DomainKind, axis: Axis) -> Self {
        VoteDomain { kind, axis: Some(axis) }
    }

    pub fn allows_irrational(&self) -> bool {
        matches!(self.kind, DomainKind::Pairwise | DomainKind::PairwiseStrict)
    }

    fn check(&self, m: usize) -> Result<(), SolveError> {
        if let Some(axis) = &self.axis {
            if self.allows_irrational() {
                return Err(SolveError::Invalid(
                    "single-peakedness is undefined for irrational votes".into(),
                ));
            }
            if axis.len() != m {
                return Err(PrefError::SizeMismatch {
                    expected: m,
                    found: axis.len(),
                }
                .into());
            }
        }
        Ok(())
    }

    /// Whether `order` may be cast under this domain.
    pub fn admits(&self, order: &Order) -> bool {
        let kind_ok = match self.kind {
            DomainKind::Total => order.is_total(),
            DomainKind::Top => order.is_top(),
            DomainKind::Bottom => order.is_bottom(),
            DomainKind::Weak => order.is_weak(),
            DomainKind::Pairwise => true,
            DomainKind::PairwiseStrict => {
                let m = order.num_candidates();
                (0..m).all(|a| (a + 1..m).all(|b| order.compare(a, b).is_ne()))
            }
        };
        kind_ok
            && match &self.axis {
                None => true,
                Some(axis) => order
                    .as_ranking()
                    .is_some_and(|r| ranking_single_peaked_lackner(&r, axis)),
            }
    }

    /// Number of votes in the domain, before any axis filter, as a cheap
    /// bound used for cap checks.
    fn raw_size(&self, m: usize) -> u128 {
        let pairs = (m * m.saturating_sub(1) / 2) as u32;
        match self.kind {
            DomainKind::Pairwise => 3u128.saturating_pow(pairs),
            DomainKind::PairwiseStrict => 2u128.saturating_pow(pairs),
            DomainKind::Total => (1..=m as u128).product(),
            _ => ordered_bell(m),
        }
    }

    /// All votes of the domain over `m` candidates, in a fixed order.
    pub fn enumerate(&self, m: usize, caps: &Caps) -> Result<Vec<Order>, SolveError> {
        self.check(m)?;
        check_cap("vote domain size", self.raw_size(m), caps.max_domain as u128)?;
        let cap = caps.max_enumeration_candidates;
        let votes: Vec<Order> = match self.kind {
            DomainKind::Pairwise | DomainKind::PairwiseStrict => {
                let choices: &[std::cmp::Ordering] = if self.kind == DomainKind::Pairwise {
                    &[
                        std::cmp::Ordering::Greater,
                        std::cmp::Ordering::Equal,
                        std::cmp::Ordering::Less,
                    ]
                } else {
                    &[std::cmp::Ordering::Greater, std::cmp::Ordering::Less]
                };
                let pairs = m * m.saturating_sub(1) / 2;
                let total = choices.len().pow(pairs as u32);
                (0..total)
                    .map(|mut code| {
                        // most significant pair first, so the order is lexicographic
                        let mut digits = vec![0; pairs];
                        for d in digits.iter_mut().rev() {
                            *d = code % choices.len();
                            code /= choices.len();
                        }
                        let mut it = digits.into_iter();
                        Order::Pairwise(PairRelation::from_fn(m, |_, _| choices[it.next().unwrap()]))
                    })
                    .collect()
            }
            DomainKind::Total => enumerate_total_orders(m, cap)?.into_iter().map(Order::Ranked).collect(),
            _ => enumerate_weak_orders(m, cap)?.into_iter().map(Order::Ranked).collect(),
        };
        Ok(votes.into_iter().filter(|o| self.admits(o)).collect())
    }
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r = 1u128;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn ordered_bell(m: usize) -> u128 {
    // a(n) = sum_{k=1}^{n} C(n, k) a(n - k)
    let mut a = vec![1u128];
    for n in 1..=m {
        let mut binom = 1u128;
        let mut sum = 0u128;
        for k in 1..=n {
            binom = binom * (n - k + 1) as u128 / k as u128;
            sum = sum.saturating_add(binom.saturating_mul(a[n - k]));
        }
        a.push(sum);
    }
    a[m]
}

/// Constructive coalitional weighted manipulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationInstance {
    pub nonmanipulators: WeightedProfile,
    pub manipulator_weights: Vec<u64>,
    pub preferred: usize,
    pub rule: RuleSpec,
    pub domain: VoteDomain,
}

impl ManipulationInstance {
    pub fn num_candidates(&self) -> usize {
        self.nonmanipulators.num_candidates()
    }

    /// Irrational manipulator votes are permitted.
    pub fn irrational_allowed(&self) -> bool {
        self.domain.allows_irrational()
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let m = self.num_candidates();
        if self.preferred >= m {
            return Err(SolveError::Invalid("preferred candidate out of range".into()));
        }
        if self.manipulator_weights.contains(&0) {
            return Err(PrefError::ZeroWeight.into());
        }
        self.rule.validate(m)?;
        self.domain.check(m)?;
        if let Some(axis) = &self.domain.axis {
            if !crate::prefs::is_single_peaked_lackner(&self.nonmanipulators, axis)? {
                return Err(SolveError::Invalid(
                    "nonmanipulators are not single-peaked on the axis".into(),
                ));
            }
        }
        Ok(())
    }

    /// The full election with the given manipulator votes.
    pub fn with_votes(&self, votes: &[Order]) -> Result<WeightedProfile, SolveError> {
        if votes.len() != self.manipulator_weights.len() {
            return Err(SolveError::Invalid(format!(
                "{} manipulator votes for {} manipulators",
                votes.len(),
                self.manipulator_weights.len()
            )));
        }
        let mut profile = self.nonmanipulators.clone();
        for (v, &w) in votes.iter().zip(&self.manipulator_weights) {
            profile.push(v.clone(), w)?;
        }
        Ok(profile)
    }

    /// Re-runs the election with `votes` through the rules module.
    pub fn replay(&self, votes: &[Order]) -> Result<bool, SolveError> {
        if let Some(bad) = votes.iter().find(|v| !self.domain.admits(v)) {
            return Err(SolveError::Invalid(format!(
                "witness vote {bad:?} is outside the {} domain",
                self.domain.kind
            )));
        }
        let profile = self.with_votes(votes)?;
        is_winner_under_model(&profile, &self.rule, self.preferred)
    }

    pub(crate) fn tallier(&self) -> Result<Tallier, SolveError> {
        Ok(Tallier::new(&self.rule, self.num_candidates())?)
    }
}

fn is_winner_under_model(profile: &WeightedProfile, rule: &RuleSpec, p: usize) -> Result<bool, SolveError> {
    Ok(crate::rules::winners(profile, rule)?.contains(&p))
}

/// Constructive control by adding voters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlAvInstance {
    pub registered: WeightedProfile,
    pub unregistered: WeightedProfile,
    pub preferred: usize,
    pub add_limit: usize,
    pub rule: RuleSpec,
}

impl ControlAvInstance {
    pub fn num_candidates(&self) -> usize {
        self.registered.num_candidates()
    }

    /// The add limit, clamped to the number of unregistered voters.
    pub fn effective_limit(&self) -> usize {
        self.add_limit.min(self.unregistered.len())
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if self.registered.candidates() != self.unregistered.candidates() {
            return Err(SolveError::Invalid(
                "registered and unregistered voters use different candidates".into(),
            ));
        }
        if self.preferred >= self.num_candidates() {
            return Err(SolveError::Invalid("preferred candidate out of range".into()));
        }
        self.rule.validate(self.num_candidates())?;
        Ok(())
    }

    pub fn replay(&self, added: &[usize]) -> Result<bool, SolveError> {
        if added.len() > self.add_limit {
            return Ok(false);
        }
        let mut seen = vec![false; self.unregistered.len()];
        let mut profile = self.registered.clone();
        for &i in added {
            let v = self
                .unregistered
                .voters()
                .get(i)
                .ok_or_else(|| SolveError::Invalid(format!("no unregistered voter {i}")))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(SolveError::Invalid(format!("voter {i} added twice")));
            }
            profile.push(v.order.clone(), v.weight)?;
        }
        is_winner_under_model(&profile, &self.rule, self.preferred)
    }
}

/// Bribery: change the votes (never the weights) of at most `bribe_limit`
/// voters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BriberyInstance {
    pub voters: WeightedProfile,
    pub preferred: usize,
    pub bribe_limit: usize,
    pub rule: RuleSpec,
    pub domain: VoteDomain,
}

impl BriberyInstance {
    pub fn num_candidates(&self) -> usize {
        self.voters.num_candidates()
    }

    pub fn effective_limit(&self) -> usize {
        self.bribe_limit.min(self.voters.len())
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if self.preferred >= self.num_candidates() {
            return Err(SolveError::Invalid("preferred candidate out of range".into()));
        }
        self.rule.validate(self.num_candidates())?;
        self.domain.check(self.num_candidates())?;
        Ok(())
    }

    pub fn replay(&self, bribed: &[usize], votes: &[Order]) -> Result<bool, SolveError> {
        if bribed.len() != votes.len() {
            return Err(SolveError::Invalid("bribed voters and votes differ in length".into()));
        }
        if bribed.len() > self.bribe_limit {
            return Ok(false);
        }
        if let Some(bad) = votes.iter().find(|v| !self.domain.admits(v)) {
            return Err(SolveError::Invalid(format!(
                "replacement vote {bad:?} is outside the {} domain",
                self.domain.kind
            )));
        }
        let mut replaced: Vec<Option<&Order>> = vec![None; self.voters.len()];
        for (&i, v) in bribed.iter().zip(votes) {
            let slot = replaced
                .get_mut(i)
                .ok_or_else(|| SolveError::Invalid(format!("no voter {i}")))?;
            if slot.replace(v).is_some() {
                return Err(SolveError::Invalid(format!("voter {i} bribed twice")));
            }
        }
        let mut profile = WeightedProfile::empty(self.voters.candidates().clone());
        for (v, r) in self.voters.voters().iter().zip(replaced) {
            profile.push(r.unwrap_or(&v.order).clone(), v.weight)?;
        }
        is_winner_under_model(&profile, &self.rule, self.preferred)
    }
}

/// The procedure that produced a decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Exact,
    Dp,
    MinFast,
    CopelandP,
    LlullFlow,
    TApprovalBribery,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Dp => "dp",
            Algorithm::MinFast => "min-fast",
            Algorithm::CopelandP => "copeland-p",
            Algorithm::LlullFlow => "llull-flow",
            Algorithm::TApprovalBribery => "t-approval-bribery",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// One vote per manipulator, aligned with the manipulator weights.
    Manipulation(Vec<Order>),
    /// Indices of the unregistered voters to add.
    AddedVoters(Vec<usize>),
    /// Bribed voter indices and their replacement votes.
    Bribery { voters: Vec<usize>, votes: Vec<Order> },
}

/// A yes/no answer, with a witness exactly when the answer is yes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub answer: bool,
    pub algorithm: Algorithm,
    pub witness: Option<Witness>,
}

impl Decision {
    pub(crate) fn yes(algorithm: Algorithm, witness: Witness) -> Self {
        Decision {
            answer: true,
            algorithm,
            witness: Some(witness),
        }
    }

    pub(crate) fn no(algorithm: Algorithm) -> Self {
        Decision {
            answer: false,
            algorithm,
            witness: None,
        }
    }

    pub fn manipulation_votes(&self) -> Option<&[Order]> {
        match &self.witness {
            Some(Witness::Manipulation(v)) => Some(v),
            _ => None,
        }
    }
}
