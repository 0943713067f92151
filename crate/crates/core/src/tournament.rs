//! Two weak orders to two total orders with the same majority graph.

use std::cmp::Ordering;

use thiserror::Error;

use crate::prefs::{Candidates, Order, PairRelation, PrefError, Ranking, WeightedProfile};
use crate::rules::{induced_majority_graph, MajorityGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TournamentError {
    #[error("voter {0} is not a weak order")]
    NotWeak(usize),
    #[error("the orders cover {0} and {1} candidates")]
    SizeMismatch(usize, usize),
    #[error("the constructed relation for voter {0} is not transitive")]
    Cycle(usize),
    #[error(transparent)]
    Pref(#[from] PrefError),
}

/// Total orders `(v1', v2')` with the same majority graph as `(v1, v2)`.
///
/// Per pair: a strict preference in `v_i` is copied into `v_i'`; a tie in
/// `v_i` facing a strict preference in the other vote copies that
/// preference, so the edge survives; a tie in both becomes `lower > higher`
/// index in `v1'` and the reverse in `v2'`, so no edge appears.
pub fn realize_two_total_orders(v1: &Order, v2: &Order) -> Result<(Ranking, Ranking), TournamentError> {
    let m = v1.num_candidates();
    if v2.num_candidates() != m {
        return Err(TournamentError::SizeMismatch(m, v2.num_candidates()));
    }
    for (i, v) in [v1, v2].into_iter().enumerate() {
        if !v.is_weak() {
            return Err(TournamentError::NotWeak(i + 1));
        }
    }
    let build = |own: &Order, other: &Order, both_tied: Ordering| {
        PairRelation::from_fn(m, |a, b| match (own.compare(a, b), other.compare(a, b)) {
            (Ordering::Equal, Ordering::Equal) => both_tied,
            (Ordering::Equal, o) => o,
            (o, _) => o,
        })
    };
    let r1 = build(v1, v2, Ordering::Greater);
    let r2 = build(v2, v1, Ordering::Less);
    let t1 = r1
        .to_ranking()
        .filter(Ranking::is_total)
        .ok_or(TournamentError::Cycle(1))?;
    let t2 = r2
        .to_ranking()
        .filter(Ranking::is_total)
        .ok_or(TournamentError::Cycle(2))?;
    Ok((t1, t2))
}

/// Majority graph of two unit-weight voters.
pub fn pair_majority_graph(candidates: &Candidates, v1: &Order, v2: &Order) -> Result<MajorityGraph, TournamentError> {
    let mut profile = WeightedProfile::empty(candidates.clone());
    profile.push(v1.clone(), 1)?;
    profile.push(v2.clone(), 1)?;
    Ok(induced_majority_graph(&profile))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{order_to_string, parse_candidates, parse_order};

    fn run(v1: &str, v2: &str) -> (String, String) {
        let c = parse_candidates("a,b,c").unwrap();
        let (o1, o2) = (parse_order(v1, &c).unwrap(), parse_order(v2, &c).unwrap());
        let (t1, t2) = realize_two_total_orders(&o1, &o2).unwrap();
        let (t1, t2) = (Order::Ranked(t1), Order::Ranked(t2));
        assert_eq!(
            pair_majority_graph(&c, &o1, &o2).unwrap().edge_set(),
            pair_majority_graph(&c, &t1, &t2).unwrap().edge_set()
        );
        (order_to_string(&t1, &c), order_to_string(&t2, &c))
    }

    #[test]
    fn mixed_ties() {
        assert_eq!(run("a > {b,c}", "b > {a,c}"), ("a > b > c".into(), "b > a > c".into()));
    }

    #[test]
    fn total_inputs_unchanged() {
        assert_eq!(run("a > b > c", "a > b > c"), ("a > b > c".into(), "a > b > c".into()));
    }

    #[test]
    fn full_ties_split_both_ways() {
        assert_eq!(run("{a,b,c}", "{a,b,c}"), ("a > b > c".into(), "c > b > a".into()));
    }

    #[test]
    fn irrational_rejected() {
        let c = parse_candidates("a,b,c").unwrap();
        let cyc = parse_order("(a>b, b>c, c>a)", &c).unwrap();
        let ok = parse_order("a > b > c", &c).unwrap();
        assert_eq!(realize_two_total_orders(&ok, &cyc), Err(TournamentError::NotWeak(2)));
    }
}
