use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::{One, Zero};

use super::flow::{max_flow, FlowNetwork};
use super::{binomial, check_cap, Algorithm, Decision, ManipulationInstance, SolveError, SolverConfig, Witness};
use crate::prefs::{Order, PairRelation, Ranking, WeightedProfile};
use crate::rules::{RuleKind, ScoringExtension, WinnerModel};
use crate::tally::Tallier;

/// Manipulators sorted by weight, heaviest first; ties keep input order.
fn sorted_manipulators(weights: &[u64]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..weights.len()).collect();
    perm.sort_by(|&a, &b| weights[b].cmp(&weights[a]));
    perm
}

/// Assignments visited when equal-weight manipulators pick nondecreasing
/// vote indices.
fn symmetric_assignments(weights: &[u64], domain: usize) -> u128 {
    let mut counts: HashMap<u64, u128> = HashMap::new();
    for &w in weights {
        *counts.entry(w).or_default() += 1;
    }
    counts
        .values()
        .fold(1u128, |acc, &r| acc.saturating_mul(binomial(domain as u128 + r - 1, r)))
}

struct Search<'a> {
    tallier: &'a Tallier,
    contributions: &'a [Vec<i64>],
    weights: Vec<i64>,
    // equal to the previous manipulator's weight
    same_as_prev: Vec<bool>,
    preferred: usize,
}

impl Search<'_> {
    fn dfs(&self, depth: usize, acc: &mut Vec<i64>, choice: &mut Vec<usize>) -> bool {
        if depth == self.weights.len() {
            return self.tallier.is_winner(acc, self.preferred);
        }
        let start = if self.same_as_prev[depth] { choice[depth - 1] } else { 0 };
        for v in start..self.contributions.len() {
            let c = &self.contributions[v];
            Tallier::add(acc, c, self.weights[depth]);
            choice.push(v);
            if self.dfs(depth + 1, acc, choice) {
                return true;
            }
            choice.pop();
            Tallier::add(acc, c, -self.weights[depth]);
        }
        false
    }
}

fn empty_coalition(inst: &ManipulationInstance, algorithm: Algorithm) -> Result<Decision, SolveError> {
    Ok(if inst.replay(&[])? {
        Decision::yes(algorithm, Witness::Manipulation(Vec::new()))
    } else {
        Decision::no(algorithm)
    })
}

/// Exhaustive CWCM search over the instance's vote domain.
///
/// Equal-weight manipulators are interchangeable, so each run of them
/// enumerates vote multisets only. Falls back to [`cwcm_3cand_dp`] for
/// three candidates when the search would exceed the caps.
pub fn cwcm_exact(inst: &ManipulationInstance, config: &SolverConfig) -> Result<Decision, SolveError> {
    inst.validate()?;
    let caps = &config.caps;
    let n = inst.manipulator_weights.len();
    if n == 0 {
        return empty_coalition(inst, Algorithm::Exact);
    }
    let m = inst.num_candidates();
    let domain = match inst.domain.enumerate(m, caps) {
        Ok(d) => d,
        Err(SolveError::CapExceeded { .. }) if m == 3 => return cwcm_3cand_dp(inst, config),
        Err(e) => return Err(e),
    };
    let assignments = symmetric_assignments(&inst.manipulator_weights, domain.len());
    let over = check_cap("manipulators", n as u128, caps.max_manipulators as u128)
        .and_then(|_| check_cap("vote assignments", assignments, caps.max_assignments));
    if let Err(e) = over {
        return if m == 3 { cwcm_3cand_dp(inst, config) } else { Err(e) };
    }
    if domain.is_empty() {
        return Ok(Decision::no(Algorithm::Exact));
    }

    let tallier = inst.tallier()?;
    let contributions = domain
        .iter()
        .map(|o| tallier.contribution(o))
        .collect::<Result<Vec<_>, _>>()?;
    let base = tallier.profile_tally(&inst.nonmanipulators)?;
    let perm = sorted_manipulators(&inst.manipulator_weights);
    let weights: Vec<i64> = perm.iter().map(|&i| inst.manipulator_weights[i] as i64).collect();
    let same_as_prev = (0..n).map(|j| j > 0 && weights[j] == weights[j - 1]).collect();
    let search = Search {
        tallier: &tallier,
        contributions: &contributions,
        weights,
        same_as_prev,
        preferred: inst.preferred,
    };

    let found = crate::par::find_first(domain.len(), config.parallel, |first| {
        let mut acc = base.clone();
        Tallier::add(&mut acc, &contributions[first], search.weights[0]);
        let mut choice = vec![first];
        search.dfs(1, &mut acc, &mut choice).then_some(choice)
    });
    Ok(match found {
        Some(choice) => {
            let mut votes = vec![domain[0].clone(); n];
            for (j, &v) in choice.iter().enumerate() {
                votes[perm[j]] = domain[v].clone();
            }
            Decision::yes(Algorithm::Exact, Witness::Manipulation(votes))
        }
        None => Decision::no(Algorithm::Exact),
    })
}

/// Plain Cartesian-product search, scored through the rational rules
/// module. Slow; kept as an oracle independent of the tallies and the
/// symmetry reduction.
pub fn cwcm_enumerate(inst: &ManipulationInstance, config: &SolverConfig) -> Result<Decision, SolveError> {
    inst.validate()?;
    let domain = inst.domain.enumerate(inst.num_candidates(), &config.caps)?;
    let n = inst.manipulator_weights.len();
    let total = (domain.len() as u128).saturating_pow(n as u32);
    check_cap("vote assignments", total, config.caps.max_assignments)?;
    let mut digits = vec![0usize; n];
    for _ in 0..total {
        let votes: Vec<Order> = digits.iter().map(|&d| domain[d].clone()).collect();
        let profile = inst.with_votes(&votes)?;
        if crate::rules::winners(&profile, &inst.rule)?.contains(&inst.preferred) {
            return Ok(Decision::yes(Algorithm::Exact, Witness::Manipulation(votes)));
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < domain.len() {
                break;
            }
            *d = 0;
        }
    }
    Ok(Decision::no(Algorithm::Exact))
}

/// Reachable-set dynamic program for three candidates. Each layer holds the
/// distinct manipulator tallies reachable by the first `i` manipulators.
pub fn cwcm_3cand_dp(inst: &ManipulationInstance, config: &SolverConfig) -> Result<Decision, SolveError> {
    inst.validate()?;
    let m = inst.num_candidates();
    if m != 3 {
        return Err(SolveError::precondition(format!(
            "the dynamic program needs 3 candidates, got {m}"
        )));
    }
    let caps = &config.caps;
    let domain = inst.domain.enumerate(m, caps)?;
    let tallier = inst.tallier()?;
    let contributions = domain
        .iter()
        .map(|o| tallier.contribution(o))
        .collect::<Result<Vec<_>, _>>()?;
    let base = tallier.profile_tally(&inst.nonmanipulators)?;
    let p = inst.preferred;

    // layers[i][j] = (tally, index in layers[i-1], vote)
    let mut layers: Vec<Vec<(Vec<i64>, usize, usize)>> = vec![vec![(tallier.zero(), 0, 0)]];
    for &w in &inst.manipulator_weights {
        let prev = layers.last().expect("nonempty");
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut next = Vec::new();
        for (j, (state, _, _)) in prev.iter().enumerate() {
            for (v, c) in contributions.iter().enumerate() {
                let mut s = state.clone();
                Tallier::add(&mut s, c, w as i64);
                tallier.normalize(&mut s, p);
                if seen.insert(s.clone()) {
                    next.push((s, j, v));
                }
            }
            check_cap("dynamic program states", next.len() as u128, caps.max_dp_states as u128)?;
        }
        layers.push(next);
    }

    let last = layers.last().expect("nonempty");
    let hit = last.iter().position(|(s, _, _)| {
        let mut total = base.clone();
        Tallier::add(&mut total, s, 1);
        tallier.is_winner(&total, p)
    });
    let Some(mut j) = hit else {
        return Ok(Decision::no(Algorithm::Dp));
    };
    let mut votes = Vec::with_capacity(inst.manipulator_weights.len());
    for layer in layers[1..].iter().rev() {
        let (_, parent, v) = &layer[j];
        votes.push(domain[*v].clone());
        j = *parent;
    }
    votes.reverse();
    Ok(Decision::yes(Algorithm::Dp, Witness::Manipulation(votes)))
}

/// Under the Min extension every manipulator votes `p` first with all other
/// candidates tied last.
pub fn cwcm_min_extension(inst: &ManipulationInstance, _config: &SolverConfig) -> Result<Decision, SolveError> {
    inst.validate()?;
    match &inst.rule.kind {
        RuleKind::Scoring {
            extension: ScoringExtension::Min,
            ..
        } => {}
        _ => {
            return Err(SolveError::precondition(
                "the Min shortcut needs a scoring rule with the Min extension",
            ))
        }
    }
    let vote = Order::Ranked(Ranking::first_then_tied(inst.num_candidates(), inst.preferred)?);
    if !inst.domain.admits(&vote) {
        return Err(SolveError::precondition(format!(
            "the {} vote domain does not admit p > (rest tied)",
            inst.domain.kind
        )));
    }
    let votes = vec![vote; inst.manipulator_weights.len()];
    Ok(if inst.replay(&votes)? {
        Decision::yes(Algorithm::MinFast, Witness::Manipulation(votes))
    } else {
        Decision::no(Algorithm::MinFast)
    })
}

/// Complexity of three-candidate Copeland CWCM for a parameter choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Polynomial,
    NpComplete,
    Unclassified,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Polynomial => "polynomial",
            Regime::NpComplete => "np-complete",
            Regime::Unclassified => "no stated classification",
        })
    }
}

/// Classification of Copeland CWCM for `inst`; anything other than three
/// candidates, a Copeland rule and an unrestricted domain is unclassified.
pub fn copeland_3cand_regime(inst: &ManipulationInstance) -> Regime {
    let RuleKind::Copeland { alpha } = &inst.rule.kind else {
        return Regime::Unclassified;
    };
    if inst.num_candidates() != 3 || inst.domain.axis.is_some() {
        return Regime::Unclassified;
    }
    let polynomial = match inst.rule.winner_model {
        WinnerModel::Nonunique => alpha.is_one(),
        WinnerModel::Unique => !alpha.is_zero(),
    };
    if polynomial {
        Regime::Polynomial
    } else {
        Regime::NpComplete
    }
}

/// Copeland CWCM for three candidates in the polynomial regime: all
/// manipulators cast the same `p`-first vote, one of `p > a > b`,
/// `p > b > a` and `p > a ~ b`.
pub fn cwcm_copeland_3cand_p(inst: &ManipulationInstance, _config: &SolverConfig) -> Result<Decision, SolveError> {
    inst.validate()?;
    if copeland_3cand_regime(inst) != Regime::Polynomial {
        return Err(SolveError::precondition(
            "canonical strategies need 3 candidates, no axis, and Copeland with alpha = 1 (nonunique) or alpha > 0 (unique)",
        ));
    }
    let p = inst.preferred;
    let others: Vec<usize> = (0..3).filter(|&c| c != p).collect();
    let (a, b) = (others[0], others[1]);
    let candidates = [
        Ranking::new(3, vec![vec![p], vec![a], vec![b]])?,
        Ranking::new(3, vec![vec![p], vec![b], vec![a]])?,
        Ranking::new(3, vec![vec![p], vec![a, b]])?,
    ];
    for r in candidates {
        let vote = if inst.domain.allows_irrational() {
            Order::Pairwise(r.to_relation())
        } else {
            Order::Ranked(r)
        };
        if !inst.domain.admits(&vote) {
            continue;
        }
        let votes = vec![vote; inst.manipulator_weights.len()];
        if inst.replay(&votes)? {
            return Ok(Decision::yes(Algorithm::CopelandP, Witness::Manipulation(votes)));
        }
    }
    Ok(Decision::no(Algorithm::CopelandP))
}

/// Llull (Copeland with alpha = 1) CWCM for irrational manipulators, any
/// number of candidates, via max-flow.
///
/// Manipulators put `p` above everyone; among the rest they start on the
/// majority side of the nonmanipulators (lower index on ties). One unit of
/// flow on `a -> b` means all manipulators flip to `b > a`, which moves one
/// point from `a` to `b`.
pub fn llull_irrational_cwcm_flow(inst: &ManipulationInstance, _config: &SolverConfig) -> Result<Decision, SolveError> {
    inst.validate()?;
    match &inst.rule.kind {
        RuleKind::Copeland { alpha } if alpha.is_one() => {}
        _ => {
            return Err(SolveError::precondition(
                "the flow algorithm needs Copeland with alpha = 1",
            ))
        }
    }
    if !inst.irrational_allowed() {
        return Err(SolveError::precondition(
            "the flow algorithm needs an irrational vote domain",
        ));
    }
    let m = inst.num_candidates();
    let p = inst.preferred;
    let k = inst.manipulator_weights.len();
    let w: i64 = inst.manipulator_weights.iter().map(|&x| x as i64).sum();
    let margins = margin_matrix(&inst.nonmanipulators);

    // manipulator preference: true when a is set above b
    let mut above = vec![vec![false; m]; m];
    for a in 0..m {
        for b in 0..m {
            if a != b {
                above[a][b] = if a == p {
                    true
                } else if b == p {
                    false
                } else {
                    margins[a][b] > 0 || (margins[a][b] == 0 && a < b)
                };
            }
        }
    }
    let final_margin = |a: usize, b: usize, above: &[Vec<bool>]| {
        if k == 0 {
            margins[a][b]
        } else if above[a][b] {
            margins[a][b] + w
        } else {
            margins[a][b] - w
        }
    };
    let score = |c: usize, above: &[Vec<bool>]| -> i64 {
        (0..m).filter(|&d| d != c && final_margin(c, d, above) >= 0).count() as i64
    };
    let score_p = score(p, &above);
    let unique = inst.rule.winner_model == WinnerModel::Unique;
    let sink_cap = if unique { score_p - 1 } else { score_p };

    let others: Vec<usize> = (0..m).filter(|&c| c != p).collect();
    if sink_cap < 0 && !others.is_empty() {
        return Ok(Decision::no(Algorithm::LlullFlow));
    }
    let node = |c: usize| 2 + others.iter().position(|&o| o == c).expect("candidate other than p");
    let mut net = FlowNetwork::new(2 + others.len(), 0, 1);
    let mut demand = 0u64;
    for &a in &others {
        let s0 = score(a, &above) as u64;
        demand += s0;
        net.add_edge(0, node(a), s0);
        net.add_edge(node(a), 1, sink_cap as u64);
    }
    let mut flips = Vec::new();
    for &a in &others {
        for &b in &others {
            if a != b && above[a][b] && k > 0 && margins[a][b] - w < 0 {
                flips.push((a, b, net.add_edge(node(a), node(b), 1)));
            }
        }
    }
    let flow = max_flow(&net)?;
    if flow.value < demand {
        return Ok(Decision::no(Algorithm::LlullFlow));
    }
    for &(a, b, e) in &flips {
        if flow.edge_flow[e] == 1 {
            above[a][b] = false;
            above[b][a] = true;
        }
    }
    let relation = PairRelation::from_fn(m, |a, b| {
        if above[a][b] {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Less
        }
    });
    let votes = vec![Order::Pairwise(relation); k];
    Ok(Decision::yes(Algorithm::LlullFlow, Witness::Manipulation(votes)))
}

fn margin_matrix(profile: &WeightedProfile) -> Vec<Vec<i64>> {
    let m = profile.num_candidates();
    let mut margins = vec![vec![0i64; m]; m];
    for v in profile.voters() {
        for (a, row) in margins.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                match v.order.compare(a, b) {
                    std::cmp::Ordering::Greater => *cell += v.weight as i64,
                    std::cmp::Ordering::Less => *cell -= v.weight as i64,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
    }
    margins
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_axis, parse_order, parse_profile};
    use crate::rules::{RuleSpec, Score, ScoringVector};
    use crate::solvers::{DomainKind, VoteDomain};

    fn borda_max_partition_11() -> ManipulationInstance {
        let profile = parse_profile("candidates: a,b,p\n3: a > {b,p}\n3: b > {a,p}\n").unwrap();
        let axis = parse_axis("a < p < b", profile.candidates()).unwrap();
        ManipulationInstance {
            nonmanipulators: profile,
            manipulator_weights: vec![1, 1],
            preferred: 2,
            rule: RuleSpec::scoring(ScoringVector::borda(3), ScoringExtension::Max, WinnerModel::Nonunique),
            domain: VoteDomain::single_peaked(DomainKind::Top, axis),
        }
    }

    #[test]
    fn borda_max_yes_with_split_witness() {
        let inst = borda_max_partition_11();
        for parallel in [false, true] {
            let config = SolverConfig {
                parallel,
                ..Default::default()
            };
            let d = cwcm_exact(&inst, &config).unwrap();
            assert!(d.answer);
            let votes = d.manipulation_votes().unwrap();
            assert!(inst.replay(votes).unwrap());
            let profile = inst.with_votes(votes).unwrap();
            let scores = crate::rules::rule_scores(&profile, &inst.rule).unwrap();
            assert_eq!(scores.scores(), &[Score::from(10), Score::from(10), Score::from(10)]);
        }
        assert!(cwcm_3cand_dp(&inst, &SolverConfig::default()).unwrap().answer);
        assert!(cwcm_enumerate(&inst, &SolverConfig::default()).unwrap().answer);
    }

    #[test]
    fn borda_max_no_instance() {
        let mut inst = borda_max_partition_11();
        let c = inst.nonmanipulators.candidates().clone();
        inst.nonmanipulators = parse_profile("candidates: a,b,p\n9: a > {b,p}\n9: b > {a,p}\n").unwrap();
        assert_eq!(inst.nonmanipulators.candidates(), &c);
        inst.manipulator_weights = vec![1, 1, 4];
        let config = SolverConfig::default();
        assert!(!cwcm_exact(&inst, &config).unwrap().answer);
        assert!(!cwcm_3cand_dp(&inst, &config).unwrap().answer);
    }

    #[test]
    fn zero_manipulators_is_a_winner_check() {
        let mut inst = borda_max_partition_11();
        inst.manipulator_weights.clear();
        let d = cwcm_exact(&inst, &SolverConfig::default()).unwrap();
        assert!(!d.answer);
        inst.nonmanipulators = parse_profile("candidates: a,b,p\np > {a,b}\n").unwrap();
        let d = cwcm_exact(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(d.witness, Some(Witness::Manipulation(vec![])));
    }

    #[test]
    fn copeland_zero_tie_witness() {
        let profile = parse_profile("candidates: a,b,p\na > b > p\nb > a > p\n").unwrap();
        let inst = ManipulationInstance {
            nonmanipulators: profile,
            manipulator_weights: vec![2, 2],
            preferred: 2,
            rule: RuleSpec::copeland(Score::zero(), WinnerModel::Nonunique),
            domain: VoteDomain::new(DomainKind::Weak),
        };
        let d = cwcm_3cand_dp(&inst, &SolverConfig::default()).unwrap();
        assert!(d.answer);
        assert!(inst.replay(d.manipulation_votes().unwrap()).unwrap());
        assert_eq!(copeland_3cand_regime(&inst), Regime::NpComplete);
    }

    #[test]
    fn min_shortcut() {
        let mut inst = borda_max_partition_11();
        inst.rule = RuleSpec::scoring(ScoringVector::borda(3), ScoringExtension::Min, WinnerModel::Nonunique);
        inst.manipulator_weights = vec![1, 2];
        let d = cwcm_min_extension(&inst, &SolverConfig::default()).unwrap();
        assert!(d.answer);
        let c = inst.nonmanipulators.candidates();
        assert_eq!(d.manipulation_votes().unwrap()[0], parse_order("p > {a,b}", c).unwrap());
        assert_eq!(d.answer, cwcm_exact(&inst, &SolverConfig::default()).unwrap().answer);
    }

    #[test]
    fn copeland_p_empty_electorate() {
        let inst = ManipulationInstance {
            nonmanipulators: parse_profile("candidates: a,b,p\n").unwrap(),
            manipulator_weights: vec![1],
            preferred: 2,
            rule: RuleSpec::copeland(Score::one(), WinnerModel::Nonunique),
            domain: VoteDomain::new(DomainKind::Weak),
        };
        assert!(cwcm_copeland_3cand_p(&inst, &SolverConfig::default()).unwrap().answer);
    }

    #[test]
    fn llull_flow_single_manipulator() {
        let inst = ManipulationInstance {
            nonmanipulators: parse_profile("candidates: a,b,p\n").unwrap(),
            manipulator_weights: vec![1],
            preferred: 2,
            rule: RuleSpec::copeland(Score::one(), WinnerModel::Nonunique),
            domain: VoteDomain::new(DomainKind::Pairwise),
        };
        let d = llull_irrational_cwcm_flow(&inst, &SolverConfig::default()).unwrap();
        assert!(d.answer);
        assert!(inst.replay(d.manipulation_votes().unwrap()).unwrap());
    }
}
