//! Preference orders with ties, weighted profiles, order kinds, and
//! single-peakedness.
//!
//! Candidates are referred to by their index into a [`Candidates`] list. The
//! list is kept sorted by name, so index order is lexicographic order over
//! identifiers; every "lexicographically smaller" rule in the crate is an
//! index comparison.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Errors raised while building or inspecting preference data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefError {
    #[error("candidate set is empty")]
    NoCandidates,
    #[error("invalid candidate name `{0}`")]
    InvalidName(String),
    #[error("candidate `{0}` listed twice")]
    DuplicateCandidate(String),
    #[error("order ranges over {found} candidates, expected {expected}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("malformed ranking: {0}")]
    MalformedRanking(String),
    #[error("voter weight must be a positive integer")]
    ZeroWeight,
    #[error("irrational order where a weak order is required")]
    Irrational,
    #[error("order is not a total order")]
    NotTotal,
    #[error("order kind {0:?} is not supported here")]
    UnsupportedKind(OrderKind),
    #[error("{count} candidates exceed the enumeration cap of {cap}")]
    CapExceeded { count: usize, cap: usize },
    #[error("axis is not a permutation of the candidates")]
    BadAxis,
}

/// Default cap on the number of candidates for exhaustive weak-order
/// enumeration (ordered Bell number 4683 at six candidates).
pub const DEFAULT_ENUMERATION_CAP: usize = 6;

pub(crate) fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

/// A finite set of candidate identifiers, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Candidates {
    names: Vec<String>,
}

impl Candidates {
    pub fn new<I, S>(names: I) -> Result<Self, PrefError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(PrefError::NoCandidates);
        }
        if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
            return Err(PrefError::InvalidName(bad.clone()));
        }
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(PrefError::DuplicateCandidate(w[0].clone()));
        }
        Ok(Candidates { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }
}

/// The most specific kind of a preference order. Along the hierarchy
/// `Total ⇒ Top ∧ Bottom ⇒ Weak`, classification reports the first label that
/// applies; an order that is both top and bottom without being total (a
/// single tied group) is reported as `Top`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrderKind {
    Total,
    Top,
    Bottom,
    Weak,
    Irrational,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrderKind::Total => "total",
            OrderKind::Top => "top",
            OrderKind::Bottom => "bottom",
            OrderKind::Weak => "weak",
            OrderKind::Irrational => "irrational",
        };
        f.write_str(s)
    }
}

/// A weak order `G_1 > G_2 > … > G_r` over candidates `0..m`.
///
/// Groups are nonempty, pairwise disjoint, cover every candidate, and are
/// stored with their members sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ranking {
    groups: Vec<Vec<usize>>,
    m: usize,
}

impl Ranking {
    pub fn new(m: usize, groups: Vec<Vec<usize>>) -> Result<Self, PrefError> {
        let mut seen = vec![false; m];
        let mut groups = groups;
        for g in &mut groups {
            if g.is_empty() {
                return Err(PrefError::MalformedRanking("empty group".into()));
            }
            g.sort_unstable();
            for &c in g.iter() {
                if c >= m {
                    return Err(PrefError::MalformedRanking(format!("candidate index {c} out of range")));
                }
                if std::mem::replace(&mut seen[c], true) {
                    return Err(PrefError::MalformedRanking(format!(
                        "candidate index {c} appears twice"
                    )));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(PrefError::MalformedRanking(
                "groups do not cover every candidate".into(),
            ));
        }
        Ok(Ranking { groups, m })
    }

    /// A total order from a most-to-least preferred sequence.
    pub fn total(sequence: &[usize]) -> Result<Self, PrefError> {
        Ranking::new(sequence.len(), sequence.iter().map(|&c| vec![c]).collect())
    }

    /// `first > (everyone else tied)`.
    pub fn first_then_tied(m: usize, first: usize) -> Result<Self, PrefError> {
        let rest: Vec<usize> = (0..m).filter(|&c| c != first).collect();
        if rest.is_empty() {
            Ranking::new(m, vec![vec![first]])
        } else {
            Ranking::new(m, vec![vec![first], rest])
        }
    }

    /// Every candidate tied.
    pub fn indifferent(m: usize) -> Self {
        Ranking {
            groups: vec![(0..m).collect()],
            m,
        }
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Number of candidates strictly preferred to every member of each group.
    pub fn offsets(&self) -> Vec<usize> {
        let mut k = 0;
        self.groups
            .iter()
            .map(|g| {
                let here = k;
                k += g.len();
                here
            })
            .collect()
    }

    /// Group index of each candidate (0 = most preferred).
    pub fn levels(&self) -> Vec<usize> {
        let mut level = vec![0; self.m];
        for (i, g) in self.groups.iter().enumerate() {
            for &c in g {
                level[c] = i;
            }
        }
        level
    }

    pub fn is_total(&self) -> bool {
        self.groups.len() == self.m
    }

    /// Only the last group may be tied.
    pub fn is_top(&self) -> bool {
        let r = self.groups.len();
        self.groups[..r - 1].iter().all(|g| g.len() == 1)
    }

    /// Only the first group may be tied.
    pub fn is_bottom(&self) -> bool {
        self.groups[1..].iter().all(|g| g.len() == 1)
    }

    pub fn kind(&self) -> OrderKind {
        if self.is_total() {
            OrderKind::Total
        } else if self.is_top() {
            OrderKind::Top
        } else if self.is_bottom() {
            OrderKind::Bottom
        } else {
            OrderKind::Weak
        }
    }

    pub fn to_relation(&self) -> PairRelation {
        let level = self.levels();
        PairRelation::from_fn(self.m, |a, b| level[b].cmp(&level[a]))
    }
}

fn pair_index(m: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < m);
    a * m - a * (a + 1) / 2 + (b - a - 1)
}

/// An arbitrary pairwise preference relation: one of `a > b`, `b > a`, or
/// `a ~ b` for every unordered pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairRelation {
    m: usize,
    // For a < b: Greater means a is preferred to b.
    rel: Vec<Ordering>,
}

impl PairRelation {
    /// `f(a, b)` for `a < b`; `Greater` means `a` is preferred.
    pub fn from_fn(m: usize, mut f: impl FnMut(usize, usize) -> Ordering) -> Self {
        let mut rel = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for a in 0..m {
            for b in a + 1..m {
                rel.push(f(a, b));
            }
        }
        PairRelation { m, rel }
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    /// How `a` compares to `b` for this voter (`Greater` = `a` preferred).
    pub fn compare(&self, a: usize, b: usize) -> Ordering {
        match a.cmp(&b) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Less => self.rel[pair_index(self.m, a, b)],
            Ordering::Greater => self.rel[pair_index(self.m, b, a)].reverse(),
        }
    }

    pub fn set(&mut self, a: usize, b: usize, ord: Ordering) {
        match a.cmp(&b) {
            Ordering::Equal => {}
            Ordering::Less => self.rel[pair_index(self.m, a, b)] = ord,
            Ordering::Greater => self.rel[pair_index(self.m, b, a)] = ord.reverse(),
        }
    }

    /// The weak order this relation denotes, if it is one.
    pub fn to_ranking(&self) -> Option<Ranking> {
        let m = self.m;
        let mut wins: Vec<(usize, usize)> = (0..m)
            .map(|a| {
                let w = (0..m).filter(|&b| self.compare(a, b) == Ordering::Greater).count();
                (w, a)
            })
            .collect();
        wins.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut last = None;
        for (w, a) in wins {
            if last == Some(w) {
                groups.last_mut().unwrap().push(a);
            } else {
                groups.push(vec![a]);
                last = Some(w);
            }
        }
        let ranking = Ranking::new(m, groups).ok()?;
        (ranking.to_relation() == *self).then_some(ranking)
    }
}

/// One voter's preferences.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Ranked(Ranking),
    Pairwise(PairRelation),
}

impl Order {
    pub fn num_candidates(&self) -> usize {
        match self {
            Order::Ranked(r) => r.num_candidates(),
            Order::Pairwise(p) => p.num_candidates(),
        }
    }

    pub fn compare(&self, a: usize, b: usize) -> Ordering {
        match self {
            Order::Ranked(r) => {
                let level = r.levels();
                level[b].cmp(&level[a])
            }
            Order::Pairwise(p) => p.compare(a, b),
        }
    }

    pub fn to_relation(&self) -> PairRelation {
        match self {
            Order::Ranked(r) => r.to_relation(),
            Order::Pairwise(p) => p.clone(),
        }
    }

    /// The weak-order view, if the order is rational.
    pub fn to_ranking(&self) -> Option<Ranking> {
        match self {
            Order::Ranked(r) => Some(r.clone()),
            Order::Pairwise(p) => p.to_ranking(),
        }
    }

    /// Borrowing weak-order view for orders already stored ranked.
    pub fn as_ranking(&self) -> Option<std::borrow::Cow<'_, Ranking>> {
        match self {
            Order::Ranked(r) => Some(std::borrow::Cow::Borrowed(r)),
            Order::Pairwise(p) => p.to_ranking().map(std::borrow::Cow::Owned),
        }
    }

    /// Converts a transitive pairwise order to its ranked form.
    pub fn normalized(self) -> Order {
        match self {
            Order::Pairwise(p) => match p.to_ranking() {
                Some(r) => Order::Ranked(r),
                None => Order::Pairwise(p),
            },
            ranked => ranked,
        }
    }

    pub fn classify(&self) -> OrderKind {
        match self.as_ranking() {
            Some(r) => r.kind(),
            None => OrderKind::Irrational,
        }
    }

    pub fn is_total(&self) -> bool {
        self.as_ranking().is_some_and(|r| r.is_total())
    }

    pub fn is_top(&self) -> bool {
        self.as_ranking().is_some_and(|r| r.is_top())
    }

    pub fn is_bottom(&self) -> bool {
        self.as_ranking().is_some_and(|r| r.is_bottom())
    }

    pub fn is_weak(&self) -> bool {
        self.as_ranking().is_some()
    }
}

impl From<Ranking> for Order {
    fn from(r: Ranking) -> Self {
        Order::Ranked(r)
    }
}

impl From<PairRelation> for Order {
    fn from(p: PairRelation) -> Self {
        Order::Pairwise(p)
    }
}

/// A voter: an order and a positive integer weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Voter {
    pub order: Order,
    pub weight: u64,
}

/// Candidates plus a list of weighted voters. A voter of weight `w` counts as
/// `w` unweighted voters; voters are never expanded into copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedProfile {
    candidates: Candidates,
    voters: Vec<Voter>,
}

impl WeightedProfile {
    pub fn new(candidates: Candidates, voters: Vec<Voter>) -> Result<Self, PrefError> {
        let mut profile = WeightedProfile {
            candidates,
            voters: Vec::with_capacity(voters.len()),
        };
        for v in voters {
            profile.push(v.order, v.weight)?;
        }
        Ok(profile)
    }

    pub fn empty(candidates: Candidates) -> Self {
        WeightedProfile {
            candidates,
            voters: Vec::new(),
        }
    }

    pub fn push(&mut self, order: impl Into<Order>, weight: u64) -> Result<(), PrefError> {
        let order = order.into();
        if order.num_candidates() != self.candidates.len() {
            return Err(PrefError::SizeMismatch {
                expected: self.candidates.len(),
                found: order.num_candidates(),
            });
        }
        if weight == 0 {
            return Err(PrefError::ZeroWeight);
        }
        self.voters.push(Voter { order, weight });
        Ok(())
    }

    pub fn candidates(&self) -> &Candidates {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn voters(&self) -> &[Voter] {
        &self.voters
    }

    pub fn len(&self) -> usize {
        self.voters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.voters.is_empty()
    }

    pub fn total_weight(&self) -> u64 {
        self.voters.iter().map(|v| v.weight).sum()
    }
}

/// A total order of the candidates used as the left-to-right axis for
/// single-peakedness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Axis {
    sequence: Vec<usize>,
    position: Vec<usize>,
}

impl Axis {
    pub fn new(sequence: Vec<usize>) -> Result<Self, PrefError> {
        let m = sequence.len();
        let mut position = vec![usize::MAX; m];
        for (i, &c) in sequence.iter().enumerate() {
            if c >= m || position[c] != usize::MAX {
                return Err(PrefError::BadAxis);
            }
            position[c] = i;
        }
        if m == 0 {
            return Err(PrefError::BadAxis);
        }
        Ok(Axis { sequence, position })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn position(&self, candidate: usize) -> usize {
        self.position[candidate]
    }

    fn utilities(&self, ranking: &Ranking) -> Vec<usize> {
        let level = ranking.levels();
        let r = ranking.groups().len();
        self.sequence.iter().map(|&c| r - level[c]).collect()
    }
}

/// No strict decrease followed (possibly after a plateau) by a strict increase
/// when utilities are read along the axis.
pub fn ranking_single_peaked_lackner(ranking: &Ranking, axis: &Axis) -> bool {
    let u = axis.utilities(ranking);
    let n = u.len();
    let mut suffix_max = vec![0; n + 1];
    for i in (0..n).rev() {
        suffix_max[i] = suffix_max[i + 1].max(u[i]);
    }
    let mut prefix_max = 0;
    for j in 0..n {
        if prefix_max > u[j] && suffix_max[j + 1] > u[j] {
            return false;
        }
        prefix_max = prefix_max.max(u[j]);
    }
    true
}

/// Strictly increasing up to a unique peak, strictly decreasing after it.
pub fn ranking_single_peaked_black(ranking: &Ranking, axis: &Axis) -> bool {
    let u = axis.utilities(ranking);
    let peak = (0..u.len()).max_by_key(|&i| u[i]).unwrap_or(0);
    u[..=peak].windows(2).all(|w| w[0] < w[1]) && u[peak..].windows(2).all(|w| w[0] > w[1])
}

fn check_axis(profile: &WeightedProfile, axis: &Axis) -> Result<(), PrefError> {
    if axis.len() != profile.num_candidates() {
        return Err(PrefError::SizeMismatch {
            expected: profile.num_candidates(),
            found: axis.len(),
        });
    }
    Ok(())
}

/// Lackner single-peakedness of every voter. Irrational voters are rejected.
pub fn is_single_peaked_lackner(profile: &WeightedProfile, axis: &Axis) -> Result<bool, PrefError> {
    check_axis(profile, axis)?;
    let mut ok = true;
    for v in profile.voters() {
        let r = v.order.as_ranking().ok_or(PrefError::Irrational)?;
        ok &= ranking_single_peaked_lackner(&r, axis);
    }
    Ok(ok)
}

/// Black single-peakedness; every voter must cast a total order.
pub fn is_single_peaked_black(profile: &WeightedProfile, axis: &Axis) -> Result<bool, PrefError> {
    check_axis(profile, axis)?;
    let mut ok = true;
    for v in profile.voters() {
        let r = v.order.as_ranking().ok_or(PrefError::Irrational)?;
        if !r.is_total() {
            return Err(PrefError::NotTotal);
        }
        ok &= ranking_single_peaked_black(&r, axis);
    }
    Ok(ok)
}

/// All weak orders (ordered set partitions) over `m` candidates, sorted.
/// Their number is the ordered Bell number of `m`.
pub fn enumerate_weak_orders(m: usize, cap: usize) -> Result<Vec<Ranking>, PrefError> {
    if m == 0 {
        return Err(PrefError::NoCandidates);
    }
    if m > cap {
        return Err(PrefError::CapExceeded { count: m, cap });
    }
    fn rec(m: usize, remaining: u32, groups: &mut Vec<Vec<usize>>, out: &mut Vec<Ranking>) {
        if remaining == 0 {
            out.push(Ranking {
                groups: groups.clone(),
                m,
            });
            return;
        }
        // nonempty submasks of `remaining`
        let mut sub = remaining;
        while sub != 0 {
            groups.push((0..m).filter(|&c| sub & (1 << c) != 0).collect());
            rec(m, remaining & !sub, groups, out);
            groups.pop();
            sub = (sub - 1) & remaining;
        }
    }
    let mut out = Vec::new();
    rec(m, (1u32 << m) - 1, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

/// All total orders over `m` candidates, sorted.
pub fn enumerate_total_orders(m: usize, cap: usize) -> Result<Vec<Ranking>, PrefError> {
    if m == 0 {
        return Err(PrefError::NoCandidates);
    }
    if m > cap {
        return Err(PrefError::CapExceeded { count: m, cap });
    }
    let mut out: Vec<Ranking> = itertools::Itertools::permutations(0..m, m)
        .map(|p| Ranking::total(&p).expect("permutation"))
        .collect();
    out.sort();
    Ok(out)
}

/// Every order of `kind` (Total, Top, or Weak) that is Lackner single-peaked
/// with respect to `axis`, sorted.
pub fn enumerate_single_peaked_votes(axis: &Axis, kind: OrderKind, cap: usize) -> Result<Vec<Order>, PrefError> {
    let keep: fn(&Ranking) -> bool = match kind {
        OrderKind::Total => Ranking::is_total,
        OrderKind::Top => Ranking::is_top,
        OrderKind::Weak => |_| true,
        other => return Err(PrefError::UnsupportedKind(other)),
    };
    Ok(enumerate_weak_orders(axis.len(), cap)?
        .into_iter()
        .filter(|r| keep(r) && ranking_single_peaked_lackner(r, axis))
        .map(Order::Ranked)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> Candidates {
        Candidates::new(["a", "b", "c", "d"]).unwrap()
    }

    fn r(m: usize, groups: &[&[usize]]) -> Ranking {
        Ranking::new(m, groups.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    #[test]
    fn candidates_sorted_and_checked() {
        let c = Candidates::new(["p", "b", "a"]).unwrap();
        assert_eq!(c.names(), &["a", "b", "p"]);
        assert_eq!(c.index("p"), Some(2));
        assert_eq!(c.index("q"), None);
        assert_eq!(
            Candidates::new(["a", "a"]),
            Err(PrefError::DuplicateCandidate("a".into()))
        );
        assert_eq!(Candidates::new(Vec::<String>::new()), Err(PrefError::NoCandidates));
        assert!(matches!(Candidates::new(["a>b"]), Err(PrefError::InvalidName(_))));
    }

    #[test]
    fn classify_example_orders() {
        let _ = abcd();
        // a > b~c > d
        assert_eq!(r(4, &[&[0], &[1, 2], &[3]]).kind(), OrderKind::Weak);
        // a~b > c > d
        assert_eq!(r(4, &[&[0, 1], &[2], &[3]]).kind(), OrderKind::Bottom);
        // a > b > c~d
        assert_eq!(r(4, &[&[0], &[1], &[2, 3]]).kind(), OrderKind::Top);
        assert_eq!(r(4, &[&[0], &[1], &[2], &[3]]).kind(), OrderKind::Total);
        assert_eq!(Ranking::indifferent(4).kind(), OrderKind::Top);
        assert!(Ranking::indifferent(4).is_bottom());
    }

    #[test]
    fn cyclic_relation_is_irrational() {
        // a>b, b>c, c>a
        let rel = PairRelation::from_fn(3, |a, b| match (a, b) {
            (0, 1) => Ordering::Greater,
            (1, 2) => Ordering::Greater,
            (0, 2) => Ordering::Less,
            _ => unreachable!(),
        });
        assert_eq!(rel.compare(2, 0), Ordering::Greater);
        let order = Order::Pairwise(rel);
        assert_eq!(order.classify(), OrderKind::Irrational);
        assert!(!order.is_weak());
    }

    #[test]
    fn intransitive_indifference_is_irrational() {
        // a~b, b~c, a>c
        let rel = PairRelation::from_fn(3, |a, b| match (a, b) {
            (0, 2) => Ordering::Greater,
            _ => Ordering::Equal,
        });
        assert_eq!(rel.to_ranking(), None);
    }

    #[test]
    fn transitive_relation_reclassified() {
        let ranking = r(4, &[&[0], &[1, 2], &[3]]);
        let order = Order::Pairwise(ranking.to_relation());
        assert_eq!(order.classify(), OrderKind::Weak);
        assert_eq!(order.normalized(), Order::Ranked(ranking));
    }

    #[test]
    fn offsets_sum_to_m() {
        let ranking = r(4, &[&[0], &[1, 2], &[3]]);
        assert_eq!(ranking.offsets(), vec![0, 1, 3]);
    }

    #[test]
    fn malformed_rankings_rejected() {
        assert!(Ranking::new(3, vec![vec![0], vec![]]).is_err());
        assert!(Ranking::new(3, vec![vec![0, 1]]).is_err());
        assert!(Ranking::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Ranking::new(3, vec![vec![0, 1, 5]]).is_err());
    }

    #[test]
    fn profile_rejects_zero_weight_and_wrong_size() {
        let mut p = WeightedProfile::empty(abcd());
        assert_eq!(p.push(Ranking::indifferent(4), 0), Err(PrefError::ZeroWeight));
        assert!(matches!(
            p.push(Ranking::indifferent(3), 1),
            Err(PrefError::SizeMismatch { .. })
        ));
        p.push(Ranking::indifferent(4), 3).unwrap();
        assert_eq!(p.total_weight(), 3);
    }

    // candidates a=0, b=1, p=2; axis a < p < b
    fn apb() -> Axis {
        Axis::new(vec![0, 2, 1]).unwrap()
    }

    fn profile_of(rankings: &[Ranking]) -> WeightedProfile {
        let c = Candidates::new(["a", "b", "p"]).unwrap();
        let mut p = WeightedProfile::empty(c);
        for x in rankings {
            p.push(x.clone(), 1).unwrap();
        }
        p
    }

    #[test]
    fn lackner_examples() {
        // a > p~b
        let ok = profile_of(&[r(3, &[&[0], &[1, 2]])]);
        assert!(is_single_peaked_lackner(&ok, &apb()).unwrap());
        // a > b > p
        let bad = profile_of(&[Ranking::total(&[0, 1, 2]).unwrap()]);
        assert!(!is_single_peaked_lackner(&bad, &apb()).unwrap());
        assert!(is_single_peaked_lackner(&profile_of(&[]), &apb()).unwrap());
    }

    #[test]
    fn black_examples() {
        let check =
            |seq: &[usize]| is_single_peaked_black(&profile_of(&[Ranking::total(seq).unwrap()]), &apb()).unwrap();
        assert!(check(&[2, 0, 1])); // p > a > b
        assert!(!check(&[0, 1, 2])); // a > b > p
        assert!(check(&[0, 2, 1])); // a > p > b
        let tied = profile_of(&[r(3, &[&[0], &[1, 2]])]);
        assert_eq!(is_single_peaked_black(&tied, &apb()), Err(PrefError::NotTotal));
    }

    #[test]
    fn irrational_rejected_by_single_peakedness() {
        let c = Candidates::new(["a", "b", "p"]).unwrap();
        let mut p = WeightedProfile::empty(c);
        let cyc = PairRelation::from_fn(3, |a, b| {
            if (a, b) == (0, 2) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        });
        p.push(cyc, 1).unwrap();
        assert_eq!(is_single_peaked_lackner(&p, &apb()), Err(PrefError::Irrational));
    }

    #[test]
    fn single_peaked_top_votes_on_three() {
        let votes = enumerate_single_peaked_votes(&apb(), OrderKind::Top, 6).unwrap();
        let expected: Vec<Order> = {
            let mut v = vec![
                Ranking::total(&[0, 2, 1]).unwrap(), // a>p>b
                Ranking::indifferent(3),             // a~p~b
                r(3, &[&[0], &[1, 2]]),              // a>p~b
                Ranking::total(&[2, 0, 1]).unwrap(), // p>a>b
                Ranking::total(&[2, 1, 0]).unwrap(), // p>b>a
                r(3, &[&[2], &[0, 1]]),              // p>a~b
                Ranking::total(&[1, 2, 0]).unwrap(), // b>p>a
                r(3, &[&[1], &[0, 2]]),              // b>p~a
            ]
            .into_iter()
            .map(Order::Ranked)
            .collect::<Vec<_>>();
            v.sort();
            v
        };
        assert_eq!(votes, expected);

        let total = enumerate_single_peaked_votes(&apb(), OrderKind::Total, 6).unwrap();
        assert_eq!(total.len(), 4);
        assert!(total.iter().all(|o| votes.contains(o)));
        assert!(matches!(
            enumerate_single_peaked_votes(&apb(), OrderKind::Bottom, 6),
            Err(PrefError::UnsupportedKind(OrderKind::Bottom))
        ));
        let one = Axis::new(vec![0]).unwrap();
        assert_eq!(
            enumerate_single_peaked_votes(&one, OrderKind::Weak, 6).unwrap().len(),
            1
        );
    }

    #[test]
    fn weak_order_counts() {
        let counts: Vec<usize> = (1..=5).map(|m| enumerate_weak_orders(m, 6).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 3, 13, 75, 541]);
        assert_eq!(
            enumerate_weak_orders(7, 6),
            Err(PrefError::CapExceeded { count: 7, cap: 6 })
        );
        assert_eq!(enumerate_total_orders(4, 6).unwrap().len(), 24);
    }
}
