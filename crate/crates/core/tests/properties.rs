mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::Rng;
use tievote::parse::{order_to_string, parse_order, parse_profile, profile_to_string};
use tievote::prefs::Order;
use tievote::reductions::{
    gen_borda_avg_cwcm, gen_x3c_plurality_ccav, partition_to_partition_prime, Mode, PartitionInstance, X3CInstance,
};
use tievote::rules::{
    copeland_scores, rule_scores, winners, RuleSpec, Score, ScoringExtension, ScoringVector, WinnerModel,
};
use tievote::tally::Tallier;
use tievote::tournament::{pair_majority_graph, realize_two_total_orders};

fn random_order(rng: &mut impl Rng, m: usize) -> Order {
    match rng.random_range(0..4) {
        0 => Order::Ranked(common::top_order(rng, m)),
        1 => Order::Ranked(common::bottom_order(rng, m)),
        2 => Order::Pairwise(common::pairwise(rng, m)),
        _ => Order::Ranked(common::weak_order(rng, m)),
    }
}

proptest! {
    #[test]
    fn orders_survive_display_and_parse(seed: u64, m in 1usize..7) {
        let mut rng = common::rng(seed);
        let c = common::candidates(m);
        let order = random_order(&mut rng, m);
        let text = order_to_string(&order, &c);
        let back = parse_order(&text, &c).unwrap();
        for a in 0..m {
            for b in 0..m {
                prop_assert_eq!(back.compare(a, b), order.compare(a, b));
            }
        }
        prop_assert_eq!(order_to_string(&back, &c), text);
    }

    #[test]
    fn profiles_survive_display_and_parse(seed: u64, m in 1usize..6, n in 0usize..6) {
        let mut rng = common::rng(seed);
        let c = common::candidates(m);
        let profile = common::profile(&mut rng, &c, n, 9, |r| random_order(r, m));
        let text = profile_to_string(&profile);
        prop_assert_eq!(profile_to_string(&parse_profile(&text).unwrap()), text);
    }

    #[test]
    fn copeland_scores_count_pairwise_contests(seed: u64, m in 2usize..6, n in 0usize..6, q in 1i64..4) {
        let mut rng = common::rng(seed);
        let c = common::candidates(m);
        let profile = common::profile(&mut rng, &c, n, 5, |r| random_order(r, m));
        let alpha = Score::new(rng.random_range(0..=q), q);
        let table = copeland_scores(&profile, alpha).unwrap();
        for a in 0..m {
            let mut expected = Score::from(0);
            for b in (0..m).filter(|&b| b != a) {
                let margin: i64 = profile
                    .voters()
                    .iter()
                    .map(|v| match v.order.compare(a, b) {
                        Ordering::Greater => v.weight as i64,
                        Ordering::Less => -(v.weight as i64),
                        Ordering::Equal => 0,
                    })
                    .sum();
                expected += match margin.cmp(&0) {
                    Ordering::Greater => Score::from(1),
                    Ordering::Equal => alpha,
                    Ordering::Less => Score::from(0),
                };
            }
            prop_assert_eq!(table.get(a), expected);
        }
    }

    #[test]
    fn integer_tallies_pick_the_rational_winners(seed: u64, m in 2usize..6, n in 0usize..6, ext in 0usize..4) {
        let mut rng = common::rng(seed);
        let c = common::candidates(m);
        let profile = common::profile(&mut rng, &c, n, 7, |r| Order::Ranked(common::weak_order(r, m)));
        let model = if rng.random_bool(0.5) { WinnerModel::Unique } else { WinnerModel::Nonunique };
        let rule = if rng.random_bool(0.3) {
            RuleSpec::copeland(Score::new(rng.random_range(0..=2), 2), model)
        } else {
            RuleSpec::scoring(common::scoring_vector(&mut rng, m, 6), ScoringExtension::ALL[ext], model)
        };
        let tallier = Tallier::new(&rule, m).unwrap();
        let tally = tallier.profile_tally(&profile).unwrap();
        prop_assert_eq!(tallier.winners(&tally), winners(&profile, &rule).unwrap());
        if tallier.is_scoring() {
            let scaled = tallier.scores(&tally);
            let table = rule_scores(&profile, &rule).unwrap();
            for (a, &s) in scaled.iter().enumerate() {
                prop_assert_eq!(Score::from(s), table.get(a) * Score::from(tallier.scale()));
            }
        }
    }

    #[test]
    fn realized_orders_are_total_extensions_with_the_same_graph(seed: u64, m in 1usize..7) {
        let mut rng = common::rng(seed);
        let c = common::candidates(m);
        let v1 = Order::Ranked(common::weak_order(&mut rng, m));
        let v2 = Order::Ranked(common::weak_order(&mut rng, m));
        let (t1, t2) = realize_two_total_orders(&v1, &v2).unwrap();
        prop_assert!(t1.is_total() && t2.is_total());
        let (t1, t2) = (Order::Ranked(t1), Order::Ranked(t2));
        for a in 0..m {
            for b in 0..m {
                for (v, t) in [(&v1, &t1), (&v2, &t2)] {
                    if v.compare(a, b) != Ordering::Equal {
                        prop_assert_eq!(t.compare(a, b), v.compare(a, b));
                    }
                }
            }
        }
        prop_assert_eq!(
            pair_majority_graph(&c, &v1, &v2).unwrap().edge_set(),
            pair_majority_graph(&c, &t1, &t2).unwrap().edge_set()
        );
    }

    #[test]
    fn primed_subset_sums_never_carry(values in prop::collection::vec(1u64..50, 1..6)) {
        prop_assume!(values.iter().sum::<u64>() % 2 == 0);
        let src = PartitionInstance::new(values.clone()).unwrap();
        let primed = partition_to_partition_prime(&src).unwrap();
        let t = values.len();
        prop_assert_eq!(primed.values().len(), 2 * t);
        for mask in 0u32..1 << (2 * t) {
            let sum: u64 = (0..2 * t).filter(|i| mask >> i & 1 == 1).map(|i| primed.values()[i]).sum();
            prop_assert_eq!(sum % 4, 0);
            for i in 1..=t {
                let chosen = (mask >> (i - 1) & 1) + (mask >> (t + i - 1) & 1);
                prop_assert_eq!(sum >> (2 * i) & 3, chosen as u64);
            }
        }
    }

    #[test]
    fn reductions_are_deterministic(values in prop::collection::vec(1u64..20, 1..6)) {
        prop_assume!(values.iter().sum::<u64>() % 2 == 0);
        let src = PartitionInstance::new(values).unwrap();
        let a = gen_borda_avg_cwcm(&partition_to_partition_prime(&src).unwrap(), Mode::Strict).unwrap();
        let b = gen_borda_avg_cwcm(&partition_to_partition_prime(&src).unwrap(), Mode::Strict).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn borda_average_gadget_identities(values in prop::collection::vec(1u64..20, 1..5)) {
        prop_assume!(values.iter().sum::<u64>() % 2 == 0);
        let src = partition_to_partition_prime(&PartitionInstance::new(values).unwrap()).unwrap();
        let (k, khat) = (src.half(), src.target());
        prop_assume!(khat <= 2 * k);
        let inst = gen_borda_avg_cwcm(&src, Mode::Strict).unwrap();
        let scores = rule_scores(&inst.nonmanipulators, &inst.rule).unwrap();
        let (a, b) = (scores.get(0), scores.get(1));
        prop_assert_eq!(a + b, Score::from(30 * k as i64));
        prop_assert_eq!(a - b, Score::from(3 * khat as i64));
        prop_assert_eq!(scores.get(2), Score::from(6 * k as i64));
    }
}

#[test]
fn x3c_blocks_partition_the_base() {
    let mut rng = common::rng(21);
    for k in [4, 8] {
        let base = 3 * k;
        let sets: Vec<[usize; 3]> = (0..6)
            .map(|_| {
                let s = common::total_order(&mut rng, base);
                [s[0], s[1], s[2]]
            })
            .collect();
        let inst = gen_x3c_plurality_ccav(&X3CInstance::new(k, sets).unwrap(), Mode::Strict).unwrap();
        let mut count = vec![0usize; base + 1];
        for v in inst.registered.voters() {
            let top: Vec<usize> = (0..=base)
                .filter(|&x| (0..=base).all(|y| v.order.compare(x, y) != Ordering::Less))
                .collect();
            for x in top {
                count[x] += 1;
            }
        }
        assert!(count[..base].iter().all(|&n| n == k + 3));
        assert_eq!(count[base], 1);
        assert_eq!(inst.registered.len(), 3 * k / 4 * (k + 3) + 1);
    }
}

#[test]
fn borda_scores_of_a_single_tied_vote() {
    let c = common::abp();
    let vote = parse_order("a > {b,p}", &c).unwrap();
    let mut profile = tievote::WeightedProfile::empty(c);
    profile.push(vote, 2).unwrap();
    let expect = [(ScoringExtension::Max, [4, 2, 2]), (ScoringExtension::Min, [4, 0, 0])];
    for (ext, want) in expect {
        let rule = RuleSpec::scoring(ScoringVector::borda(3), ext, WinnerModel::Nonunique);
        let scores = rule_scores(&profile, &rule).unwrap();
        for (i, w) in want.into_iter().enumerate() {
            assert_eq!(scores.get(i), Score::from(w));
        }
    }
}
