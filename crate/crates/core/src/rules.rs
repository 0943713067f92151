//! Winner determination: positional scoring under the four tie extensions,
//! induced majority graphs, Copeland^α, and approval.
//!
//! Every score is an exact rational.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::prefs::{Candidates, Order, Ranking, WeightedProfile};

/// Exact score arithmetic.
pub type Score = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("scoring vector has {found} entries but there are {expected} candidates")]
    VectorLength { expected: usize, found: usize },
    #[error("scoring vector is empty")]
    EmptyVector,
    #[error("scoring vector is not nonincreasing")]
    NotNonincreasing,
    #[error("scoring vector has a negative entry")]
    Negative,
    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(Score),
    #[error("scoring rules are undefined for irrational votes")]
    IrrationalOrder,
    #[error("operation needs a scoring rule")]
    NotScoring,
    #[error("t-approval needs 1 <= t <= m (got t = {t}, m = {m})")]
    BadApproval { t: usize, m: usize },
    #[error("candidate index {0} out of range")]
    UnknownCandidate(usize),
}

/// How tied groups are scored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScoringExtension {
    Min,
    Max,
    RoundDown,
    Average,
}

impl ScoringExtension {
    pub const ALL: [ScoringExtension; 4] = [
        ScoringExtension::Min,
        ScoringExtension::Max,
        ScoringExtension::RoundDown,
        ScoringExtension::Average,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScoringExtension::Min => "min",
            ScoringExtension::Max => "max",
            ScoringExtension::RoundDown => "round-down",
            ScoringExtension::Average => "average",
        }
    }
}

impl fmt::Display for ScoringExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ScoringExtension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" => Ok(ScoringExtension::Min),
            "max" => Ok(ScoringExtension::Max),
            "round-down" | "rounddown" => Ok(ScoringExtension::RoundDown),
            "average" | "avg" => Ok(ScoringExtension::Average),
            other => Err(format!("unknown scoring extension `{other}`")),
        }
    }
}

/// A nonincreasing, nonnegative scoring vector `⟨s_1, …, s_m⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScoringVector(Vec<Score>);

impl ScoringVector {
    pub fn new(values: Vec<Score>) -> Result<Self, RuleError> {
        if values.is_empty() {
            return Err(RuleError::EmptyVector);
        }
        if values.iter().any(|s| *s < Score::zero()) {
            return Err(RuleError::Negative);
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(RuleError::NotNonincreasing);
        }
        Ok(ScoringVector(values))
    }

    pub fn from_integers(values: &[i64]) -> Result<Self, RuleError> {
        ScoringVector::new(values.iter().map(|&v| Score::from_integer(v)).collect())
    }

    pub fn plurality(m: usize) -> Self {
        ScoringVector::t_approval(m, 1).expect("m >= 1")
    }

    pub fn borda(m: usize) -> Self {
        ScoringVector((0..m).rev().map(|i| Score::from_integer(i as i64)).collect())
    }

    pub fn t_approval(m: usize, t: usize) -> Result<Self, RuleError> {
        if t == 0 || t > m {
            return Err(RuleError::BadApproval { t, m });
        }
        Ok(ScoringVector(
            (0..m)
                .map(|i| if i < t { Score::one() } else { Score::zero() })
                .collect(),
        ))
    }

    /// `Some(t)` when the vector is `t` ones followed by zeros.
    pub fn approval_count(&self) -> Option<usize> {
        let t = self.0.iter().take_while(|s| s.is_one()).count();
        self.0[t..].iter().all(Zero::is_zero).then_some(t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Score] {
        &self.0
    }
}

/// Nonunique: every candidate with the top score wins. Unique: only a strict
/// maximum wins; otherwise the winner set is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum WinnerModel {
    #[default]
    Nonunique,
    Unique,
}

impl fmt::Display for WinnerModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WinnerModel::Nonunique => "nonunique",
            WinnerModel::Unique => "unique",
        })
    }
}

impl std::str::FromStr for WinnerModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nonunique" | "co-winner" => Ok(WinnerModel::Nonunique),
            "unique" => Ok(WinnerModel::Unique),
            other => Err(format!("unknown winner model `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Scoring {
        vector: ScoringVector,
        extension: ScoringExtension,
    },
    Copeland {
        alpha: Score,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleSpec {
    pub kind: RuleKind,
    pub winner_model: WinnerModel,
}

impl RuleSpec {
    pub fn scoring(vector: ScoringVector, extension: ScoringExtension, winner_model: WinnerModel) -> Self {
        RuleSpec {
            kind: RuleKind::Scoring { vector, extension },
            winner_model,
        }
    }

    pub fn copeland(alpha: Score, winner_model: WinnerModel) -> Self {
        RuleSpec {
            kind: RuleKind::Copeland { alpha },
            winner_model,
        }
    }

    /// Checks the rule against a candidate count.
    pub fn validate(&self, m: usize) -> Result<(), RuleError> {
        match &self.kind {
            RuleKind::Scoring { vector, .. } if vector.len() != m => Err(RuleError::VectorLength {
                expected: m,
                found: vector.len(),
            }),
            RuleKind::Copeland { alpha } => check_alpha(*alpha),
            _ => Ok(()),
        }
    }
}

fn check_alpha(alpha: Score) -> Result<(), RuleError> {
    if alpha < Score::zero() || alpha > Score::one() {
        Err(RuleError::AlphaOutOfRange(alpha))
    } else {
        Ok(())
    }
}

/// Exact score per candidate, indexed like the candidate list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScoreTable(pub Vec<Score>);

impl ScoreTable {
    pub fn zeros(m: usize) -> Self {
        ScoreTable(vec![Score::zero(); m])
    }

    pub fn get(&self, candidate: usize) -> Score {
        self.0[candidate]
    }

    pub fn scores(&self) -> &[Score] {
        &self.0
    }

    pub fn add_weighted(&mut self, other: &ScoreTable, weight: u64) {
        let w = Score::from_integer(weight as i64);
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += *b * w;
        }
    }

    /// `a:3 b:3/2 c:3/2 d:0`, in candidate order.
    pub fn render(&self, candidates: &Candidates) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{}:{}", candidates.name(i), s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Winners of a score table under a winner model.
pub fn select_winners(table: &ScoreTable, model: WinnerModel) -> Vec<usize> {
    let Some(best) = table.0.iter().max().copied() else {
        return Vec::new();
    };
    let top: Vec<usize> = (0..table.0.len()).filter(|&i| table.0[i] == best).collect();
    match model {
        WinnerModel::Nonunique => top,
        WinnerModel::Unique if top.len() == 1 => top,
        WinnerModel::Unique => Vec::new(),
    }
}

fn ranking_of(order: &Order) -> Result<std::borrow::Cow<'_, Ranking>, RuleError> {
    order.as_ranking().ok_or(RuleError::IrrationalOrder)
}

/// Scores one voter's order under a scoring vector and tie extension.
pub fn positional_scores(
    order: &Order,
    vector: &ScoringVector,
    extension: ScoringExtension,
) -> Result<ScoreTable, RuleError> {
    let ranking = ranking_of(order)?;
    let m = ranking.num_candidates();
    if vector.len() != m {
        return Err(RuleError::VectorLength {
            expected: m,
            found: vector.len(),
        });
    }
    let s = vector.values();
    let r = ranking.groups().len();
    let mut table = ScoreTable::zeros(m);
    for ((i, group), k) in ranking.groups().iter().enumerate().zip(ranking.offsets()) {
        let size = group.len();
        // positions are 1-based in the usual notation; s[j - 1] is s_j
        let value = match extension {
            ScoringExtension::Min => s[k + size - 1],
            ScoringExtension::Max => s[k],
            ScoringExtension::RoundDown => s[m - r + i],
            ScoringExtension::Average => s[k..k + size].iter().sum::<Score>() / Score::from_integer(size as i64),
        };
        for &c in group {
            table.0[c] = value;
        }
    }
    Ok(table)
}

/// Weighted score totals of a profile under a scoring rule.
pub fn scoring_totals(
    profile: &WeightedProfile,
    vector: &ScoringVector,
    extension: ScoringExtension,
) -> Result<ScoreTable, RuleError> {
    let mut total = ScoreTable::zeros(profile.num_candidates());
    for v in profile.voters() {
        total.add_weighted(&positional_scores(&v.order, vector, extension)?, v.weight);
    }
    Ok(total)
}

/// Winners of a scoring-rule election.
pub fn scoring_winners(profile: &WeightedProfile, rule: &RuleSpec) -> Result<Vec<usize>, RuleError> {
    match &rule.kind {
        RuleKind::Scoring { vector, extension } => Ok(select_winners(
            &scoring_totals(profile, vector, *extension)?,
            rule.winner_model,
        )),
        RuleKind::Copeland { .. } => Err(RuleError::NotScoring),
    }
}

/// Pairwise margins: `margin(a, b)` is the weight preferring `a` to `b`
/// minus the weight preferring `b` to `a`. Edges are derived from margins.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MajorityGraph {
    m: usize,
    margins: Vec<i64>,
}

impl MajorityGraph {
    pub fn from_margins(m: usize, margin: impl Fn(usize, usize) -> i64) -> Self {
        let mut margins = vec![0; m * m];
        for a in 0..m {
            for b in a + 1..m {
                let x = margin(a, b);
                margins[a * m + b] = x;
                margins[b * m + a] = -x;
            }
        }
        MajorityGraph { m, margins }
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn margin(&self, a: usize, b: usize) -> i64 {
        self.margins[a * self.m + b]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.margin(a, b) > 0
    }

    /// Edges `a → b` with their (positive) margins, in index order.
    pub fn edges(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for a in 0..self.m {
            for b in 0..self.m {
                if self.has_edge(a, b) {
                    out.push((a, b, self.margin(a, b)));
                }
            }
        }
        out
    }

    /// Edge set without weights.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        self.edges().into_iter().map(|(a, b, _)| (a, b)).collect()
    }

    pub fn render_edges(&self, candidates: &Candidates) -> String {
        self.edges()
            .iter()
            .map(|&(a, b, w)| format!("{}->{}:{}", candidates.name(a), candidates.name(b), w))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// The majority graph induced by a profile; irrational voters allowed.
pub fn induced_majority_graph(profile: &WeightedProfile) -> MajorityGraph {
    let m = profile.num_candidates();
    let mut margins = vec![0i64; m * m];
    for v in profile.voters() {
        let rel = v.order.to_relation();
        let w = v.weight as i64;
        for a in 0..m {
            for b in a + 1..m {
                margins[a * m + b] += match rel.compare(a, b) {
                    std::cmp::Ordering::Greater => w,
                    std::cmp::Ordering::Less => -w,
                    std::cmp::Ordering::Equal => 0,
                };
            }
        }
    }
    MajorityGraph::from_margins(m, |a, b| margins[a * m + b])
}

/// Copeland^α scores read off a majority graph.
pub fn copeland_scores_from_graph(graph: &MajorityGraph, alpha: Score) -> Result<ScoreTable, RuleError> {
    check_alpha(alpha)?;
    let m = graph.num_candidates();
    let mut table = ScoreTable::zeros(m);
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            match graph.margin(a, b) {
                x if x > 0 => table.0[a] += Score::one(),
                0 => table.0[a] += alpha,
                _ => {}
            }
        }
    }
    Ok(table)
}

pub fn copeland_scores(profile: &WeightedProfile, alpha: Score) -> Result<ScoreTable, RuleError> {
    copeland_scores_from_graph(&induced_majority_graph(profile), alpha)
}

/// Score table for any rule.
pub fn rule_scores(profile: &WeightedProfile, rule: &RuleSpec) -> Result<ScoreTable, RuleError> {
    rule.validate(profile.num_candidates())?;
    match &rule.kind {
        RuleKind::Scoring { vector, extension } => scoring_totals(profile, vector, *extension),
        RuleKind::Copeland { alpha } => copeland_scores(profile, *alpha),
    }
}

/// Winner set for any rule.
pub fn winners(profile: &WeightedProfile, rule: &RuleSpec) -> Result<Vec<usize>, RuleError> {
    Ok(select_winners(&rule_scores(profile, rule)?, rule.winner_model))
}

/// Approval scores: each ballot is an approved set with a weight.
pub fn approval_scores(m: usize, ballots: &[(Vec<usize>, u64)]) -> Result<ScoreTable, RuleError> {
    let mut table = ScoreTable::zeros(m);
    for (approved, weight) in ballots {
        for &c in approved {
            if c >= m {
                return Err(RuleError::UnknownCandidate(c));
            }
            table.0[c] += Score::from_integer(*weight as i64);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_order, parse_profile};

    fn q(n: i64, d: i64) -> Score {
        Score::new(n, d)
    }

    fn ints(v: &[i64]) -> ScoreTable {
        ScoreTable(v.iter().map(|&x| Score::from_integer(x)).collect())
    }

    #[test]
    fn extension_table_for_borda() {
        let c = Candidates::new(["a", "b", "c", "d"]).unwrap();
        let order = parse_order("a > {b,c} > d", &c).unwrap();
        let borda = ScoringVector::borda(4);
        let get = |ext| positional_scores(&order, &borda, ext).unwrap();
        assert_eq!(get(ScoringExtension::Min), ints(&[3, 1, 1, 0]));
        assert_eq!(get(ScoringExtension::Max), ints(&[3, 2, 2, 0]));
        assert_eq!(get(ScoringExtension::RoundDown), ints(&[2, 1, 1, 0]));
        let avg = get(ScoringExtension::Average);
        assert_eq!(avg, ScoreTable(vec![q(3, 1), q(3, 2), q(3, 2), q(0, 1)]));
        assert_eq!(avg.render(&c), "a:3 b:3/2 c:3/2 d:0");
    }

    #[test]
    fn vector_validation() {
        assert_eq!(ScoringVector::from_integers(&[1, 2]), Err(RuleError::NotNonincreasing));
        assert_eq!(ScoringVector::from_integers(&[1, -1]), Err(RuleError::Negative));
        assert_eq!(ScoringVector::from_integers(&[]), Err(RuleError::EmptyVector));
        assert_eq!(ScoringVector::t_approval(3, 2).unwrap().approval_count(), Some(2));
        assert_eq!(ScoringVector::borda(3).approval_count(), None);
        assert_eq!(ScoringVector::plurality(4).values()[0], Score::one());
    }

    #[test]
    fn length_mismatch_and_irrational_rejected() {
        let c = Candidates::new(["a", "b", "c"]).unwrap();
        let o = parse_order("a > b > c", &c).unwrap();
        assert_eq!(
            positional_scores(&o, &ScoringVector::borda(4), ScoringExtension::Max),
            Err(RuleError::VectorLength { expected: 3, found: 4 })
        );
        let cyc = parse_order("(a>b, b>c, c>a)", &c).unwrap();
        assert_eq!(
            positional_scores(&cyc, &ScoringVector::borda(3), ScoringExtension::Max),
            Err(RuleError::IrrationalOrder)
        );
    }

    #[test]
    fn borda_max_single_peaked_gadget() {
        // nonmanipulators of the Borda-max construction with K = 1
        let p = parse_profile("candidates: a,b,p\n3: a > {p,b}\n3: b > {p,a}\n").unwrap();
        let t = scoring_totals(&p, &ScoringVector::borda(3), ScoringExtension::Max).unwrap();
        assert_eq!(t, ints(&[9, 9, 6]));
        let rule = RuleSpec::scoring(ScoringVector::borda(3), ScoringExtension::Max, WinnerModel::Nonunique);
        assert_eq!(scoring_winners(&p, &rule).unwrap(), vec![0, 1]);
        let unique = RuleSpec {
            winner_model: WinnerModel::Unique,
            ..rule
        };
        assert_eq!(scoring_winners(&p, &unique).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn plurality_max_single_voter() {
        let p = parse_profile("candidates: a,b,p\np > {a,b}\n").unwrap();
        let rule = RuleSpec::scoring(
            ScoringVector::plurality(3),
            ScoringExtension::Max,
            WinnerModel::Nonunique,
        );
        assert_eq!(scoring_winners(&p, &rule).unwrap(), vec![2]);
    }

    #[test]
    fn borda_average_gadget() {
        // K = 2, K̂ = 2: weights 6K + K̂ = 14 and 6K - K̂ = 10
        let p = parse_profile("candidates: a,b,p\n14: a > {p,b}\n10: b > {p,a}\n").unwrap();
        let t = scoring_totals(&p, &ScoringVector::borda(3), ScoringExtension::Average).unwrap();
        assert_eq!(t, ints(&[33, 27, 12]));
        assert_eq!(t.get(0) + t.get(1), Score::from_integer(30 * 2));
        assert_eq!(t.get(0) - t.get(1), Score::from_integer(3 * 2));
    }

    #[test]
    fn copeland_gadget_graphs() {
        // K = 3, K̂ = 2
        let p = parse_profile("candidates: a,b,p\n4: a > b > p\n2: b > a > p\n").unwrap();
        let g = induced_majority_graph(&p);
        assert_eq!(g.edges(), vec![(0, 1, 2), (0, 2, 6), (1, 2, 6)]);
        assert_eq!(copeland_scores(&p, Score::zero()).unwrap(), ints(&[2, 1, 0]));

        let p = parse_profile("candidates: a,b,p\n4: a > p > b\n2: b > a > p\n").unwrap();
        assert_eq!(copeland_scores(&p, q(1, 2)).unwrap(), ints(&[2, 0, 1]));
    }

    #[test]
    fn opposite_votes_cancel() {
        let p = parse_profile("candidates: a,b,c\na > b > c\nc > b > a\n").unwrap();
        assert!(induced_majority_graph(&p).edges().is_empty());
        let alpha = q(1, 3);
        assert_eq!(
            copeland_scores(&p, alpha).unwrap(),
            ScoreTable(vec![alpha * 2, alpha * 2, alpha * 2])
        );
    }

    #[test]
    fn cyclic_vote_graph() {
        let p = parse_profile("candidates: a,b,c\n(a>b, b>c, c>a)\n").unwrap();
        assert_eq!(induced_majority_graph(&p).edge_set(), vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn alpha_checked() {
        let p = parse_profile("candidates: a,b\na > b\n").unwrap();
        assert!(matches!(
            copeland_scores(&p, q(3, 2)),
            Err(RuleError::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            copeland_scores(&p, q(-1, 2)),
            Err(RuleError::AlphaOutOfRange(_))
        ));
    }

    #[test]
    fn approval_matches_plurality_max_on_bottom_order() {
        let c = Candidates::new(["a", "b", "c", "d"]).unwrap();
        let order = parse_order("{a,c} > b > d", &c).unwrap();
        let pm = positional_scores(&order, &ScoringVector::plurality(4), ScoringExtension::Max).unwrap();
        assert_eq!(approval_scores(4, &[(vec![0, 2], 1)]).unwrap(), pm);
        assert_eq!(approval_scores(3, &[(vec![], 4)]).unwrap(), ScoreTable::zeros(3));
        assert_eq!(
            approval_scores(2, &[(vec![0, 1], 2), (vec![0, 1], 5)]).unwrap(),
            ints(&[7, 7])
        );
        assert_eq!(approval_scores(2, &[(vec![2], 1)]), Err(RuleError::UnknownCandidate(2)));
    }

    #[test]
    fn empty_profile_all_tie() {
        let p = parse_profile("candidates: a,b,c\n").unwrap();
        let rule = RuleSpec::scoring(ScoringVector::borda(3), ScoringExtension::Min, WinnerModel::Nonunique);
        assert_eq!(winners(&p, &rule).unwrap(), vec![0, 1, 2]);
    }
}
