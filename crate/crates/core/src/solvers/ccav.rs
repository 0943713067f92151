use itertools::Itertools;

use super::{check_cap, Algorithm, ControlAvInstance, Decision, SolveError, SolverConfig, Witness};
use crate::tally::Tallier;

/// Exhaustive CCAV: subsets of the unregistered voters by size, then
/// lexicographically, so the witness is a smallest one.
pub fn ccav_exact(inst: &ControlAvInstance, config: &SolverConfig) -> Result<Decision, SolveError> {
    inst.validate()?;
    let caps = &config.caps;
    let u = inst.unregistered.len();
    let limit = inst.effective_limit();
    check_cap("unregistered voters", u as u128, caps.max_unregistered as u128)?;
    check_cap("add limit", limit as u128, caps.max_add_limit as u128)?;

    let tallier = Tallier::new(&inst.rule, inst.num_candidates())?;
    let base = tallier.profile_tally(&inst.registered)?;
    let added = inst
        .unregistered
        .voters()
        .iter()
        .map(|v| {
            let mut c = tallier.contribution(&v.order)?;
            c.iter_mut().for_each(|x| *x *= v.weight as i64);
            Ok(c)
        })
        .collect::<Result<Vec<_>, SolveError>>()?;

    for size in 0..=limit {
        let subsets: Vec<Vec<usize>> = (0..u).combinations(size).collect();
        let hit = crate::par::find_first(subsets.len(), config.parallel, |i| {
            let mut acc = base.clone();
            for &j in &subsets[i] {
                Tallier::add(&mut acc, &added[j], 1);
            }
            tallier.is_winner(&acc, inst.preferred).then_some(i)
        });
        if let Some(i) = hit {
            return Ok(Decision::yes(
                Algorithm::Exact,
                Witness::AddedVoters(subsets[i].clone()),
            ));
        }
    }
    Ok(Decision::no(Algorithm::Exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_profile;
    use crate::rules::{RuleSpec, ScoringExtension, ScoringVector, WinnerModel};

    fn instance(limit: usize) -> ControlAvInstance {
        ControlAvInstance {
            registered: parse_profile("candidates: a,b,p\n2: a > b > p\nb > a > p\n").unwrap(),
            unregistered: parse_profile("candidates: a,b,p\np > a > b\n{p,b} > a\np > b > a\n").unwrap(),
            preferred: 2,
            add_limit: limit,
            rule: RuleSpec::scoring(
                ScoringVector::plurality(3),
                ScoringExtension::Average,
                WinnerModel::Nonunique,
            ),
        }
    }

    #[test]
    fn limit_zero_is_winner_check() {
        assert!(!ccav_exact(&instance(0), &SolverConfig::default()).unwrap().answer);
    }

    #[test]
    fn smallest_witness_and_monotone_in_limit() {
        let d1 = ccav_exact(&instance(1), &SolverConfig::default()).unwrap();
        assert!(!d1.answer);
        for k in 2..=5 {
            let inst = instance(k);
            let d = ccav_exact(&inst, &SolverConfig::sequential()).unwrap();
            assert_eq!(d.witness, Some(Witness::AddedVoters(vec![0, 2])));
            assert!(inst.replay(&[0, 2]).unwrap());
        }
    }
}
