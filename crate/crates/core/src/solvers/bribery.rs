use itertools::Itertools;

use super::{binomial, check_cap, Algorithm, BriberyInstance, Decision, DomainKind, SolveError, SolverConfig, Witness};
use crate::prefs::{Order, Ranking};
use crate::rules::{RuleKind, ScoringExtension};
use crate::tally::Tallier;

fn weighted_contributions(tallier: &Tallier, inst: &BriberyInstance) -> Result<Vec<Vec<i64>>, SolveError> {
    inst.voters
        .voters()
        .iter()
        .map(|v| {
            let mut c = tallier.contribution(&v.order)?;
            c.iter_mut().for_each(|x| *x *= v.weight as i64);
            Ok(c)
        })
        .collect()
}

/// Exhaustive bribery: voter subsets by size, then lexicographically, each
/// with every tuple of replacement votes from the domain.
pub fn bribery_exact(inst: &BriberyInstance, config: &SolverConfig) -> Result<Decision, SolveError> {
    inst.validate()?;
    let caps = &config.caps;
    let n = inst.voters.len();
    let limit = inst.effective_limit();
    check_cap("voters", n as u128, caps.max_bribery_voters as u128)?;
    check_cap("bribe limit", limit as u128, caps.max_bribe_limit as u128)?;
    let domain = inst.domain.enumerate(inst.num_candidates(), caps)?;
    let d = domain.len() as u128;
    let mut total = 0u128;
    for s in 0..=limit {
        let subsets = binomial(n as u128, s as u128);
        total = total.saturating_add(subsets.saturating_mul(d.saturating_pow(s as u32)));
    }
    check_cap("bribery assignments", total, caps.max_assignments)?;

    let tallier = Tallier::new(&inst.rule, inst.num_candidates())?;
    let current = weighted_contributions(&tallier, inst)?;
    let replacements = domain
        .iter()
        .map(|o| tallier.contribution(o))
        .collect::<Result<Vec<_>, _>>()?;
    let mut base = tallier.zero();
    for c in &current {
        Tallier::add(&mut base, c, 1);
    }
    let weights: Vec<i64> = inst.voters.voters().iter().map(|v| v.weight as i64).collect();

    for size in 0..=limit {
        let subsets: Vec<Vec<usize>> = (0..n).combinations(size).collect();
        let hit = crate::par::find_first(subsets.len(), config.parallel, |i| {
            let bribed = &subsets[i];
            let mut acc = base.clone();
            for &j in bribed {
                Tallier::add(&mut acc, &current[j], -1);
            }
            let mut choice = vec![0usize; size];
            loop {
                let mut t = acc.clone();
                for (&j, &v) in bribed.iter().zip(&choice) {
                    Tallier::add(&mut t, &replacements[v], weights[j]);
                }
                if tallier.is_winner(&t, inst.preferred) {
                    return Some((i, choice));
                }
                // odometer over replacement votes; empty choice runs once
                let mut pos = size;
                loop {
                    if pos == 0 {
                        return None;
                    }
                    pos -= 1;
                    choice[pos] += 1;
                    if choice[pos] < domain.len() {
                        break;
                    }
                    choice[pos] = 0;
                }
            }
        });
        if let Some((i, choice)) = hit {
            return Ok(Decision::yes(
                Algorithm::Exact,
                Witness::Bribery {
                    voters: subsets[i].clone(),
                    votes: choice.iter().map(|&v| domain[v].clone()).collect(),
                },
            ));
        }
    }
    Ok(Decision::no(Algorithm::Exact))
}

/// Weighted bribery for t-approval under the Min extension with a bounded
/// number of candidates.
///
/// Voters with identical votes form a type. Within a type only the heaviest
/// voters are worth bribing, and each bribed voter votes `p` first with the
/// rest tied last, which scores zero for everyone but `p`. Every split of the
/// budget over types is tried.
pub fn weighted_bribery_t_approval(inst: &BriberyInstance, config: &SolverConfig) -> Result<Decision, SolveError> {
    inst.validate()?;
    let m = inst.num_candidates();
    let t = match &inst.rule.kind {
        RuleKind::Scoring {
            vector,
            extension: ScoringExtension::Min,
        } => vector.approval_count(),
        _ => None,
    };
    match t {
        Some(t) if 2 <= t && t < m => {}
        _ => {
            return Err(SolveError::precondition(
                "needs t-approval with 2 <= t < m and the Min extension",
            ))
        }
    }
    if !matches!(inst.domain.kind, DomainKind::Weak | DomainKind::Top) || inst.domain.axis.is_some() {
        return Err(SolveError::precondition(
            "needs the weak or top order domain without an axis",
        ));
    }
    check_cap("candidates", m as u128, config.caps.max_constant_candidates as u128)?;

    let vote = Order::Ranked(Ranking::first_then_tied(m, inst.preferred)?);
    let tallier = Tallier::new(&inst.rule, m)?;
    let current = weighted_contributions(&tallier, inst)?;
    let mut base = tallier.zero();
    for c in &current {
        Tallier::add(&mut base, c, 1);
    }
    let gain = tallier.contribution(&vote)?;

    // types in order of first appearance; members heaviest first
    let voters = inst.voters.voters();
    let mut types: Vec<(Order, Vec<usize>)> = Vec::new();
    for (i, v) in voters.iter().enumerate() {
        let key = v.order.clone().normalized();
        match types.iter_mut().find(|(o, _)| *o == key) {
            Some((_, members)) => members.push(i),
            None => types.push((key, vec![i])),
        }
    }
    for (_, members) in &mut types {
        members.sort_by(|&a, &b| voters[b].weight.cmp(&voters[a].weight));
    }

    let limit = inst.effective_limit();
    let mut alloc = vec![0usize; types.len()];
    let found = allocate(&types, 0, limit, &mut alloc, &mut |alloc| {
        let mut acc = base.clone();
        for ((_, members), &k) in types.iter().zip(alloc) {
            for &j in &members[..k] {
                Tallier::add(&mut acc, &current[j], -1);
                Tallier::add(&mut acc, &gain, voters[j].weight as i64);
            }
        }
        tallier.is_winner(&acc, inst.preferred)
    });
    Ok(if found {
        let bribed: Vec<usize> = types
            .iter()
            .zip(&alloc)
            .flat_map(|((_, members), &k)| members[..k].iter().copied())
            .sorted()
            .collect();
        let votes = vec![vote; bribed.len()];
        Decision::yes(Algorithm::TApprovalBribery, Witness::Bribery { voters: bribed, votes })
    } else {
        Decision::no(Algorithm::TApprovalBribery)
    })
}

/// Tries every `alloc` with `alloc[i] <= |type i|` and total at most
/// `budget`; leaves the first accepted allocation in `alloc`.
fn allocate(
    types: &[(Order, Vec<usize>)],
    i: usize,
    budget: usize,
    alloc: &mut [usize],
    accept: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if i == types.len() {
        return accept(alloc);
    }
    for k in 0..=budget.min(types[i].1.len()) {
        alloc[i] = k;
        if allocate(types, i + 1, budget - k, alloc, accept) {
            return true;
        }
    }
    alloc[i] = 0;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_profile;
    use crate::rules::{RuleSpec, ScoringVector, WinnerModel};
    use crate::solvers::VoteDomain;

    fn instance(limit: usize) -> BriberyInstance {
        BriberyInstance {
            voters: parse_profile("candidates: a,b,p\n5: a > b > p\n2: p > a > b\n").unwrap(),
            preferred: 2,
            bribe_limit: limit,
            rule: RuleSpec::scoring(
                ScoringVector::t_approval(3, 2).unwrap(),
                ScoringExtension::Min,
                WinnerModel::Nonunique,
            ),
            domain: VoteDomain::new(DomainKind::Weak),
        }
    }

    #[test]
    fn bribe_the_heavy_voter() {
        let inst = instance(1);
        let d = weighted_bribery_t_approval(&inst, &SolverConfig::default()).unwrap();
        let Some(Witness::Bribery { voters, votes }) = &d.witness else {
            panic!("expected a bribery witness");
        };
        assert_eq!(voters, &vec![0]);
        assert!(inst.replay(voters, votes).unwrap());
        let profile = parse_profile("candidates: a,b,p\n5: p > {a,b}\n2: p > a > b\n").unwrap();
        let scores = crate::rules::rule_scores(&profile, &inst.rule).unwrap();
        assert_eq!(scores.render(profile.candidates()), "a:2 b:0 p:7");
        assert!(bribery_exact(&inst, &SolverConfig::default()).unwrap().answer);
    }

    #[test]
    fn zero_budget() {
        let inst = instance(0);
        assert!(!bribery_exact(&inst, &SolverConfig::default()).unwrap().answer);
        assert!(
            !weighted_bribery_t_approval(&inst, &SolverConfig::default())
                .unwrap()
                .answer
        );
    }
}
