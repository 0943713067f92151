//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use tievote::prefs::{Candidates, Order, PairRelation, Ranking, WeightedProfile};
use tievote::rules::{Score, ScoringVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn candidates(m: usize) -> Candidates {
    Candidates::new((0..m).map(|i| format!("c{i}"))).unwrap()
}

pub fn abp() -> Candidates {
    Candidates::new(["a", "b", "p"]).unwrap()
}

pub fn weak_order(rng: &mut impl Rng, m: usize) -> Ranking {
    let levels: Vec<usize> = (0..m).map(|_| rng.random_range(0..m)).collect();
    let groups: Vec<Vec<usize>> = (0..m)
        .map(|l| (0..m).filter(|&c| levels[c] == l).collect::<Vec<_>>())
        .filter(|g| !g.is_empty())
        .collect();
    Ranking::new(m, groups).unwrap()
}

pub fn total_order(rng: &mut impl Rng, m: usize) -> Vec<usize> {
    let mut seq: Vec<usize> = (0..m).collect();
    seq.shuffle(rng);
    seq
}

/// Total prefix, then the last `j` candidates tied.
pub fn top_order(rng: &mut impl Rng, m: usize) -> Ranking {
    let seq = total_order(rng, m);
    let tied = rng.random_range(1..=m);
    let mut groups: Vec<Vec<usize>> = seq[..m - tied].iter().map(|&c| vec![c]).collect();
    groups.push(seq[m - tied..].to_vec());
    Ranking::new(m, groups).unwrap()
}

/// The first `j` candidates tied, then a total suffix.
pub fn bottom_order(rng: &mut impl Rng, m: usize) -> Ranking {
    let seq = total_order(rng, m);
    let tied = rng.random_range(1..=m);
    let mut groups = vec![seq[..tied].to_vec()];
    groups.extend(seq[tied..].iter().map(|&c| vec![c]));
    Ranking::new(m, groups).unwrap()
}

pub fn pairwise(rng: &mut impl Rng, m: usize) -> PairRelation {
    PairRelation::from_fn(m, |_, _| {
        [Ordering::Greater, Ordering::Equal, Ordering::Less][rng.random_range(0..3)]
    })
}

pub fn profile<R: Rng>(
    rng: &mut R,
    c: &Candidates,
    voters: usize,
    max_weight: u64,
    mut order: impl FnMut(&mut R) -> Order,
) -> WeightedProfile {
    let mut p = WeightedProfile::empty(c.clone());
    for _ in 0..voters {
        let o = order(rng);
        let w = rng.random_range(1..=max_weight);
        p.push(o, w).unwrap();
    }
    p
}

/// Nonincreasing nonnegative integer vector ending anywhere in `0..=max`.
pub fn scoring_vector(rng: &mut impl Rng, m: usize, max: i64) -> ScoringVector {
    let mut v: Vec<i64> = (0..m).map(|_| rng.random_range(0..=max)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    ScoringVector::from_integers(&v).unwrap()
}

/// Rational vector with small denominators.
pub fn rational_vector(rng: &mut impl Rng, m: usize) -> ScoringVector {
    let mut v: Vec<Score> = (0..m)
        .map(|_| Score::new(rng.random_range(0..=12), rng.random_range(1..=4)))
        .collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    ScoringVector::new(v).unwrap()
}
