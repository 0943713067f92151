//! Hardness constructions as instance generators, with brute-force deciders
//! for the source problems and an equivalence checker.
//!
//! Generators are deterministic. In [`Mode::Strict`] they reject sources that
//! violate a construction's normalization (`K̂ ≤ 2K`, `k ≡ 0 mod 4`). In
//! [`Mode::Permissive`] they handle such sources with an answer-preserving
//! shortcut instead:
//!
//! * `K̂ > 2K` makes the Partition′ source a NO instance, so the target is a
//!   fixed NO instance with the same manipulator weights.
//! * An X3C source whose `k` is not a multiple of 4 is padded with fresh
//!   triples, each covered by exactly one new set.

use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use thiserror::Error;

use crate::prefs::{Axis, Candidates, Order, PrefError, Ranking, WeightedProfile};
use crate::rules::{RuleSpec, Score, ScoringExtension, ScoringVector, WinnerModel};
use crate::solvers::{
    ccav_exact, cwcm_3cand_dp, ControlAvInstance, Decision, DomainKind, ManipulationInstance, SolveError, SolverConfig,
    VoteDomain,
};

/// Source size caps for the brute-force deciders.
pub const PARTITION_MAX_VALUES: usize = 24;
pub const PARTITION_PRIME_MAX_VALUES: usize = 15;
pub const X3C_MAX_SETS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid source instance: {0}")]
    InvalidSource(String),
    #[error("source violates the construction's normalization: {0}")]
    Normalization(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("{what} is {size}, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("arithmetic overflow while building the target")]
    Overflow,
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Pref(#[from] PrefError),
}

fn cap(what: &'static str, size: usize, cap: usize) -> Result<(), ReductionError> {
    if size > cap {
        Err(ReductionError::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

/// Positive integers with an even sum `2K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionInstance {
    values: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(values: Vec<u64>) -> Result<Self, ReductionError> {
        if values.is_empty() || values.contains(&0) {
            return Err(ReductionError::InvalidSource(
                "values must be a nonempty list of positive integers".into(),
            ));
        }
        if values.iter().sum::<u64>() % 2 != 0 {
            return Err(ReductionError::InvalidSource("values must have an even sum".into()));
        }
        Ok(PartitionInstance { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// `K`, half the sum.
    pub fn half(&self) -> u64 {
        self.values.iter().sum::<u64>() / 2
    }
}

/// Positive even integers and a positive even target `K̂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionPrimeInstance {
    values: Vec<u64>,
    target: u64,
}

impl PartitionPrimeInstance {
    pub fn new(values: Vec<u64>, target: u64) -> Result<Self, ReductionError> {
        if values.is_empty() || values.iter().any(|&v| v == 0 || v % 2 != 0) {
            return Err(ReductionError::InvalidSource(
                "values must be a nonempty list of positive even integers".into(),
            ));
        }
        if target == 0 || !target.is_multiple_of(2) {
            return Err(ReductionError::InvalidSource(
                "the target must be a positive even integer".into(),
            ));
        }
        Ok(PartitionPrimeInstance { values, target })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    /// `K`, half the sum.
    pub fn half(&self) -> u64 {
        self.values.iter().sum::<u64>() / 2
    }
}

/// Base `{b_1, …, b_3k}` (0-based here) and a family of 3-element subsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct X3CInstance {
    k: usize,
    sets: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(k: usize, sets: Vec<[usize; 3]>) -> Result<Self, ReductionError> {
        if k == 0 {
            return Err(ReductionError::InvalidSource("the base must be nonempty".into()));
        }
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                if s[2] >= 3 * k || s[0] == s[1] || s[1] == s[2] {
                    Err(ReductionError::InvalidSource(format!(
                        "set {s:?} is not a 3-element subset of a {}-element base",
                        3 * k
                    )))
                } else {
                    Ok(s)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(X3CInstance { k, sets })
    }

    /// Cover size; the base has `3k` elements.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn base_size(&self) -> usize {
        3 * self.k
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    #[default]
    Strict,
    Permissive,
}

/// Indices of a subset summing to `K`.
pub fn partition_brute(src: &PartitionInstance) -> Result<Option<Vec<usize>>, ReductionError> {
    let t = src.values.len();
    cap("partition values", t, PARTITION_MAX_VALUES)?;
    let half = src.half();
    Ok((0u32..1 << t)
        .find(|mask| {
            (0..t)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| src.values[i])
                .sum::<u64>()
                == half
        })
        .map(|mask| (0..t).filter(|i| mask >> i & 1 == 1).collect()))
}

/// Part labels in a Partition′ witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    A,
    B,
    C,
}

/// A labelling `(A, B, C)` with `ΣA = ΣB + K̂`.
pub fn partition_prime_brute(src: &PartitionPrimeInstance) -> Result<Option<Vec<Part>>, ReductionError> {
    let t = src.values.len();
    cap("partition' values", t, PARTITION_PRIME_MAX_VALUES)?;
    let target = src.target as i64;
    for code in 0..3u64.pow(t as u32) {
        let mut c = code;
        let mut diff = 0i64;
        let mut parts = Vec::with_capacity(t);
        for &v in &src.values {
            let part = match c % 3 {
                0 => Part::A,
                1 => Part::B,
                _ => Part::C,
            };
            c /= 3;
            diff += match part {
                Part::A => v as i64,
                Part::B => -(v as i64),
                Part::C => 0,
            };
            parts.push(part);
        }
        if diff == target {
            return Ok(Some(parts));
        }
    }
    Ok(None)
}

/// Indices of `k` pairwise disjoint sets covering the base.
pub fn x3c_brute(src: &X3CInstance) -> Result<Option<Vec<usize>>, ReductionError> {
    cap("x3c sets", src.sets.len(), X3C_MAX_SETS)?;
    Ok((0..src.sets.len()).combinations(src.k).find(|chosen| {
        let mut covered = vec![false; src.base_size()];
        chosen
            .iter()
            .flat_map(|&j| src.sets[j])
            .all(|e| !std::mem::replace(&mut covered[e], true))
    }))
}

/// `k'_i = 4^i + 4^{t+1} k_i`, `ℓ'_i = 4^i`, `K̂ = 4^{t+1} K + Σ 4^i`, with
/// `i` running from 1. Outputs are `k'_1…k'_t` then `ℓ'_1…ℓ'_t`.
pub fn partition_to_partition_prime(src: &PartitionInstance) -> Result<PartitionPrimeInstance, ReductionError> {
    let t = src.values.len() as u32;
    let pow4 = |e: u32| 4u64.checked_pow(e).ok_or(ReductionError::Overflow);
    let high = pow4(t + 1)?;
    let mut primed = Vec::with_capacity(2 * src.values.len());
    for (i, &k) in (1..).zip(&src.values) {
        let v = high
            .checked_mul(k)
            .and_then(|x| x.checked_add(pow4(i).ok()?))
            .ok_or(ReductionError::Overflow)?;
        primed.push(v);
    }
    let mut low_sum = 0u64;
    for i in 1..=t {
        primed.push(pow4(i)?);
        low_sum += pow4(i)?;
    }
    let target = high
        .checked_mul(src.half())
        .and_then(|x| x.checked_add(low_sum))
        .ok_or(ReductionError::Overflow)?;
    PartitionPrimeInstance::new(primed, target)
}

fn abp() -> Candidates {
    Candidates::new(["a", "b", "p"]).expect("valid names")
}

const A: usize = 0;
const B: usize = 1;
const P: usize = 2;

fn ranked(groups: &[&[usize]]) -> Order {
    Order::Ranked(Ranking::new(3, groups.iter().map(|g| g.to_vec()).collect()).expect("valid ranking"))
}

fn profile_of(candidates: Candidates, voters: &[(Order, u64)]) -> Result<WeightedProfile, ReductionError> {
    let mut profile = WeightedProfile::empty(candidates);
    for (o, w) in voters {
        if *w > 0 {
            profile.push(o.clone(), *w)?;
        }
    }
    Ok(profile)
}

fn borda_axis() -> Axis {
    Axis::new(vec![A, P, B]).expect("valid axis")
}

/// Borda CWCM on single-peaked top orders for the Max or RoundDown
/// extension. Two weight-`3K` nonmanipulators vote `a > p ~ b` and
/// `b > p ~ a`; the manipulator weights are the Partition values.
pub fn gen_borda_cwcm(
    src: &PartitionInstance,
    extension: ScoringExtension,
) -> Result<ManipulationInstance, ReductionError> {
    if !matches!(extension, ScoringExtension::Max | ScoringExtension::RoundDown) {
        return Err(ReductionError::Unsupported(format!(
            "this construction uses the max or round-down extension, not {extension}"
        )));
    }
    let k3 = 3 * src.half();
    Ok(ManipulationInstance {
        nonmanipulators: profile_of(abp(), &[(ranked(&[&[A], &[B, P]]), k3), (ranked(&[&[B], &[A, P]]), k3)])?,
        manipulator_weights: src.values.clone(),
        preferred: P,
        rule: RuleSpec::scoring(ScoringVector::borda(3), extension, WinnerModel::Nonunique),
        domain: VoteDomain::single_peaked(DomainKind::Top, borda_axis()),
    })
}

/// Borda-Average CWCM on single-peaked top orders. Nonmanipulators weigh
/// `6K + K̂` voting `a > p ~ b` and `6K − K̂` voting `b > p ~ a`; manipulator
/// weights are `3k_i`.
pub fn gen_borda_avg_cwcm(src: &PartitionPrimeInstance, mode: Mode) -> Result<ManipulationInstance, ReductionError> {
    let (k, khat) = (src.half(), src.target);
    let manipulator_weights: Vec<u64> = src.values.iter().map(|v| 3 * v).collect();
    let nonmanipulators = if khat <= 2 * k {
        profile_of(
            abp(),
            &[
                (ranked(&[&[A], &[B, P]]), 6 * k + khat),
                (ranked(&[&[B], &[A, P]]), 6 * k - khat),
            ],
        )?
    } else if mode == Mode::Permissive {
        // a leads p by 2W + 1 and each manipulator unit narrows that by at most 2
        let w: u64 = manipulator_weights.iter().sum();
        profile_of(abp(), &[(ranked(&[&[A], &[P], &[B]]), 2 * w + 1)])?
    } else {
        return Err(ReductionError::Normalization(format!(
            "K̂ = {khat} exceeds 2K = {}",
            2 * k
        )));
    };
    Ok(ManipulationInstance {
        nonmanipulators,
        manipulator_weights,
        preferred: P,
        rule: RuleSpec::scoring(
            ScoringVector::borda(3),
            ScoringExtension::Average,
            WinnerModel::Nonunique,
        ),
        domain: VoteDomain::single_peaked(DomainKind::Top, borda_axis()),
    })
}

/// Copeland CWCM on weak orders.
///
/// For `alpha < 1` in the nonunique model the nonmanipulators vote
/// `a > b > p` (weight `K + K̂/2`) and `b > a > p` (weight `K − K̂/2`). For
/// `alpha = 0` in the unique model the first voter instead votes
/// `a > p > b`. A zero-weight nonmanipulator is left out.
pub fn gen_copeland_cwcm(
    src: &PartitionPrimeInstance,
    alpha: Score,
    winner_model: WinnerModel,
    mode: Mode,
) -> Result<ManipulationInstance, ReductionError> {
    let first = match winner_model {
        WinnerModel::Nonunique if alpha >= Score::zero() && alpha < Score::from(1) => ranked(&[&[A], &[B], &[P]]),
        WinnerModel::Unique if alpha.is_zero() => ranked(&[&[A], &[P], &[B]]),
        _ => {
            return Err(ReductionError::Unsupported(format!(
                "no construction for alpha = {alpha} with the {winner_model} winner model"
            )))
        }
    };
    let (k, khat) = (src.half(), src.target);
    let nonmanipulators = if khat <= 2 * k {
        profile_of(
            abp(),
            &[(first, k + khat / 2), (ranked(&[&[B], &[A], &[P]]), k - khat / 2)],
        )?
    } else if mode == Mode::Permissive {
        // a and b each beat p by W + 1, so p scores 0 and a scores at least 1
        let w: u64 = src.values.iter().sum();
        profile_of(abp(), &[(ranked(&[&[A], &[B], &[P]]), w + 1)])?
    } else {
        return Err(ReductionError::Normalization(format!(
            "K̂ = {khat} exceeds 2K = {}",
            2 * k
        )));
    };
    Ok(ManipulationInstance {
        nonmanipulators,
        manipulator_weights: src.values.clone(),
        preferred: P,
        rule: RuleSpec::copeland(alpha, winner_model),
        domain: VoteDomain::new(DomainKind::Weak),
    })
}

/// Pads an X3C instance with fresh triples, each covered by one new set,
/// until `k` is a multiple of 4. Answers are unchanged.
pub fn pad_x3c(src: &X3CInstance) -> X3CInstance {
    let mut k = src.k;
    let mut sets = src.sets.clone();
    while !k.is_multiple_of(4) {
        sets.push([3 * k, 3 * k + 1, 3 * k + 2]);
        k += 1;
    }
    X3CInstance { k, sets }
}

/// Names `b01…` for the X3C base, zero-padded so that name order is
/// numeric order.
pub fn x3c_element_names(base: usize) -> Vec<String> {
    let width = base.to_string().len();
    (1..=base).map(|i| format!("b{i:0width$}")).collect()
}

/// Plurality-Average CCAV from X3C. With `ℓ = 3k/4`, block `i` holds `k + 3`
/// registered voters ranking `b_i ~ b_{i+ℓ} ~ b_{i+2ℓ} ~ b_{i+3ℓ}` first, and
/// one more registered voter ranks `p` first. Each set `S_j` becomes an
/// unregistered voter ranking `p ~ S_j` first. Candidates below the top group
/// follow in name order. The add limit is `k`.
pub fn gen_x3c_plurality_ccav(src: &X3CInstance, mode: Mode) -> Result<ControlAvInstance, ReductionError> {
    let src = if src.k.is_multiple_of(4) {
        src.clone()
    } else if mode == Mode::Permissive {
        pad_x3c(src)
    } else {
        return Err(ReductionError::Normalization(format!(
            "k = {} is not a multiple of 4",
            src.k
        )));
    };
    let base = src.base_size();
    let mut names = x3c_element_names(base);
    names.push("p".into());
    let candidates = Candidates::new(names)?;
    let m = base + 1;
    let p = base;
    let top_then_rest = |top: Vec<usize>| -> Order {
        let mut groups = vec![top.clone()];
        groups.extend((0..m).filter(|c| !top.contains(c)).map(|c| vec![c]));
        Order::Ranked(Ranking::new(m, groups).expect("valid ranking"))
    };

    let ell = 3 * src.k / 4;
    let mut registered = WeightedProfile::empty(candidates.clone());
    for i in 0..ell {
        let block = top_then_rest(vec![i, i + ell, i + 2 * ell, i + 3 * ell]);
        for _ in 0..src.k + 3 {
            registered.push(block.clone(), 1)?;
        }
    }
    registered.push(top_then_rest(vec![p]), 1)?;

    let mut unregistered = WeightedProfile::empty(candidates);
    for s in &src.sets {
        let mut top = vec![p];
        top.extend_from_slice(s);
        unregistered.push(top_then_rest(top), 1)?;
    }
    Ok(ControlAvInstance {
        registered,
        unregistered,
        preferred: p,
        add_limit: src.k,
        rule: RuleSpec::scoring(
            ScoringVector::plurality(m),
            ScoringExtension::Average,
            WinnerModel::Nonunique,
        ),
    })
}

/// Which construction to check.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    /// Partition to Partition′.
    PartitionPrime,
    BordaMax,
    BordaRoundDown,
    BordaAverage,
    Copeland {
        alpha: Score,
        winner_model: WinnerModel,
    },
    X3cCcav,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionKind::PartitionPrime => f.write_str("partition-prime"),
            ReductionKind::BordaMax => f.write_str("borda-max"),
            ReductionKind::BordaRoundDown => f.write_str("borda-round-down"),
            ReductionKind::BordaAverage => f.write_str("borda-avg"),
            ReductionKind::Copeland { alpha, winner_model } => write!(f, "copeland({alpha}, {winner_model})"),
            ReductionKind::X3cCcav => f.write_str("x3c-ccav"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceInstance {
    Partition(PartitionInstance),
    PartitionPrime(PartitionPrimeInstance),
    X3c(X3CInstance),
}

impl fmt::Display for SourceInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceInstance::Partition(s) => write!(f, "partition values={:?}", s.values),
            SourceInstance::PartitionPrime(s) => write!(f, "partition' values={:?} target={}", s.values, s.target),
            SourceInstance::X3c(s) => {
                let sets = s
                    .sets
                    .iter()
                    .map(|t| format!("{{{},{},{}}}", t[0] + 1, t[1] + 1, t[2] + 1));
                write!(f, "x3c k={} sets=[{}]", s.k, sets.format(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetInstance {
    PartitionPrime(PartitionPrimeInstance),
    Manipulation(ManipulationInstance),
    ControlAv(ControlAvInstance),
}

/// A source-side certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceWitness {
    /// Indices of one half of a Partition instance.
    Subset(Vec<usize>),
    /// Part of each Partition′ value.
    Parts(Vec<Part>),
    /// Indices of the sets in an exact cover.
    Cover(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetWitness {
    Parts(Vec<Part>),
    Decision(Decision),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub kind: ReductionKind,
    pub source: SourceInstance,
    pub target: TargetInstance,
    pub source_answer: bool,
    pub target_answer: bool,
    pub agree: bool,
    pub source_witness: Option<SourceWitness>,
    pub target_witness: Option<TargetWitness>,
}

/// Builds the target and decides both sides: source by brute force, CWCM
/// targets by the three-candidate dynamic program, CCAV targets by
/// exhaustive search, Partition′ targets by brute force.
pub fn verify_reduction(
    kind: &ReductionKind,
    source: &SourceInstance,
    mode: Mode,
    config: &SolverConfig,
) -> Result<ReductionReport, ReductionError> {
    let mismatch = || ReductionError::Unsupported(format!("{kind} does not take a source of this form"));
    let (source_witness, target, target_witness) = match (kind, source) {
        (ReductionKind::PartitionPrime, SourceInstance::Partition(s)) => {
            let target = partition_to_partition_prime(s)?;
            let tw = partition_prime_brute(&target)?;
            (
                partition_brute(s)?.map(SourceWitness::Subset),
                TargetInstance::PartitionPrime(target),
                tw.map(TargetWitness::Parts),
            )
        }
        (ReductionKind::BordaMax | ReductionKind::BordaRoundDown, SourceInstance::Partition(s)) => {
            let ext = if *kind == ReductionKind::BordaMax {
                ScoringExtension::Max
            } else {
                ScoringExtension::RoundDown
            };
            let target = gen_borda_cwcm(s, ext)?;
            let d = cwcm_3cand_dp(&target, config)?;
            (
                partition_brute(s)?.map(SourceWitness::Subset),
                TargetInstance::Manipulation(target),
                d.answer.then_some(TargetWitness::Decision(d)),
            )
        }
        (ReductionKind::BordaAverage, SourceInstance::PartitionPrime(s)) => {
            let target = gen_borda_avg_cwcm(s, mode)?;
            let d = cwcm_3cand_dp(&target, config)?;
            (
                partition_prime_brute(s)?.map(SourceWitness::Parts),
                TargetInstance::Manipulation(target),
                d.answer.then_some(TargetWitness::Decision(d)),
            )
        }
        (ReductionKind::Copeland { alpha, winner_model }, SourceInstance::PartitionPrime(s)) => {
            let target = gen_copeland_cwcm(s, *alpha, *winner_model, mode)?;
            let d = cwcm_3cand_dp(&target, config)?;
            (
                partition_prime_brute(s)?.map(SourceWitness::Parts),
                TargetInstance::Manipulation(target),
                d.answer.then_some(TargetWitness::Decision(d)),
            )
        }
        (ReductionKind::X3cCcav, SourceInstance::X3c(s)) => {
            let target = gen_x3c_plurality_ccav(s, mode)?;
            let d = ccav_exact(&target, config)?;
            (
                x3c_brute(s)?.map(SourceWitness::Cover),
                TargetInstance::ControlAv(target),
                d.answer.then_some(TargetWitness::Decision(d)),
            )
        }
        _ => return Err(mismatch()),
    };
    let source_answer = source_witness.is_some();
    let target_answer = target_witness.is_some();
    Ok(ReductionReport {
        kind: kind.clone(),
        source: source.clone(),
        target,
        source_answer,
        target_answer,
        agree: source_answer == target_answer,
        source_witness,
        target_witness,
    })
}

/// Every ordered tuple of length `1..=t_max` over `values`.
fn tuples(t_max: usize, values: &[u64]) -> impl Iterator<Item = Vec<u64>> + '_ {
    (1..=t_max).flat_map(move |t| std::iter::repeat_n(values.iter().copied(), t).multi_cartesian_product())
}

/// All Partition instances with at most `t_max` values in `1..=val_max`.
pub fn partition_sweep(t_max: usize, val_max: u64) -> Vec<PartitionInstance> {
    let values: Vec<u64> = (1..=val_max).collect();
    tuples(t_max, &values)
        .filter_map(|v| PartitionInstance::new(v).ok())
        .collect()
}

/// All Partition′ instances with at most `t_max` even values up to
/// `val_max` and every even target up to `2K + extra`.
pub fn partition_prime_sweep(t_max: usize, val_max: u64, extra: u64) -> Vec<PartitionPrimeInstance> {
    let values: Vec<u64> = (2..=val_max).step_by(2).collect();
    tuples(t_max, &values)
        .flat_map(|v| {
            let top = v.iter().sum::<u64>() + extra;
            (2..=top)
                .step_by(2)
                .map(move |target| PartitionPrimeInstance::new(v.clone(), target).expect("even values"))
        })
        .collect()
}
