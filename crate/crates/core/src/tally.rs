//! Integer tallies used inside the search procedures.
//!
//! A scoring tally is the per-candidate score scaled by a common denominator,
//! so Average scores and rational vectors stay exact in `i64`. A Copeland
//! tally is the upper triangle of the pairwise margin matrix. Both are
//! additive over voters, which is what the enumerators and the dynamic
//! program rely on.

use std::cmp::Ordering;

use num_integer::Integer;

use crate::prefs::{Order, WeightedProfile};
use crate::rules::{RuleError, RuleKind, RuleSpec, ScoringExtension, WinnerModel};

#[derive(Clone, Debug)]
enum Kind {
    Scoring {
        scaled: Vec<i64>,
        scale: i64,
        extension: ScoringExtension,
    },
    Copeland {
        win: i64,
        tie: i64,
    },
}

/// Evaluates votes of one rule over `m` candidates as integer vectors.
#[derive(Clone, Debug)]
pub struct Tallier {
    m: usize,
    kind: Kind,
    model: WinnerModel,
}

fn pair_slot(m: usize, a: usize, b: usize) -> usize {
    a * m - a * (a + 1) / 2 + (b - a - 1)
}

impl Tallier {
    pub fn new(rule: &RuleSpec, m: usize) -> Result<Self, RuleError> {
        rule.validate(m)?;
        let kind = match &rule.kind {
            RuleKind::Scoring { vector, extension } => {
                let den = vector.values().iter().fold(1i64, |acc, s| acc.lcm(s.denom()));
                let sizes = (1..=m as i64).fold(1i64, |acc, k| acc.lcm(&k));
                let scale = den * sizes;
                let scaled = vector
                    .values()
                    .iter()
                    .map(|s| s.numer() * (scale / s.denom()))
                    .collect();
                Kind::Scoring {
                    scaled,
                    scale,
                    extension: *extension,
                }
            }
            RuleKind::Copeland { alpha } => Kind::Copeland {
                win: *alpha.denom(),
                tie: *alpha.numer(),
            },
        };
        Ok(Tallier {
            m,
            kind,
            model: rule.winner_model,
        })
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn winner_model(&self) -> WinnerModel {
        self.model
    }

    pub fn is_scoring(&self) -> bool {
        matches!(self.kind, Kind::Scoring { .. })
    }

    /// Length of a tally vector.
    pub fn width(&self) -> usize {
        match self.kind {
            Kind::Scoring { .. } => self.m,
            Kind::Copeland { .. } => self.m * (self.m - 1) / 2,
        }
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.width()]
    }

    /// Tally of one unit-weight vote.
    pub fn contribution(&self, order: &Order) -> Result<Vec<i64>, RuleError> {
        let m = self.m;
        match &self.kind {
            Kind::Scoring { scaled, extension, .. } => {
                let ranking = order.as_ranking().ok_or(RuleError::IrrationalOrder)?;
                if ranking.num_candidates() != m {
                    return Err(RuleError::VectorLength {
                        expected: m,
                        found: ranking.num_candidates(),
                    });
                }
                let r = ranking.groups().len();
                let mut out = vec![0; m];
                for ((i, g), k) in ranking.groups().iter().enumerate().zip(ranking.offsets()) {
                    let size = g.len();
                    let v = match extension {
                        ScoringExtension::Min => scaled[k + size - 1],
                        ScoringExtension::Max => scaled[k],
                        ScoringExtension::RoundDown => scaled[m - r + i],
                        ScoringExtension::Average => scaled[k..k + size].iter().sum::<i64>() / size as i64,
                    };
                    for &c in g {
                        out[c] = v;
                    }
                }
                Ok(out)
            }
            Kind::Copeland { .. } => {
                let mut out = Vec::with_capacity(self.width());
                for a in 0..m {
                    for b in a + 1..m {
                        out.push(match order.compare(a, b) {
                            Ordering::Greater => 1,
                            Ordering::Less => -1,
                            Ordering::Equal => 0,
                        });
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn add(acc: &mut [i64], contribution: &[i64], weight: i64) {
        for (a, c) in acc.iter_mut().zip(contribution) {
            *a += c * weight;
        }
    }

    pub fn profile_tally(&self, profile: &WeightedProfile) -> Result<Vec<i64>, RuleError> {
        let mut acc = self.zero();
        for v in profile.voters() {
            Tallier::add(&mut acc, &self.contribution(&v.order)?, v.weight as i64);
        }
        Ok(acc)
    }

    /// Per-candidate scores, scaled by a rule-dependent positive constant.
    pub fn scores(&self, tally: &[i64]) -> Vec<i64> {
        match self.kind {
            Kind::Scoring { .. } => tally.to_vec(),
            Kind::Copeland { win, tie } => {
                let m = self.m;
                let mut s = vec![0; m];
                for a in 0..m {
                    for b in a + 1..m {
                        match tally[pair_slot(m, a, b)].cmp(&0) {
                            Ordering::Greater => s[a] += win,
                            Ordering::Less => s[b] += win,
                            Ordering::Equal => {
                                s[a] += tie;
                                s[b] += tie;
                            }
                        }
                    }
                }
                s
            }
        }
    }

    /// The scale factor applied by [`Tallier::scores`].
    pub fn scale(&self) -> i64 {
        match self.kind {
            Kind::Scoring { scale, .. } => scale,
            Kind::Copeland { win, .. } => win,
        }
    }

    pub fn winners(&self, tally: &[i64]) -> Vec<usize> {
        let s = self.scores(tally);
        let best = *s.iter().max().expect("m >= 1");
        let top: Vec<usize> = (0..self.m).filter(|&c| s[c] == best).collect();
        match self.model {
            WinnerModel::Nonunique => top,
            WinnerModel::Unique if top.len() == 1 => top,
            WinnerModel::Unique => Vec::new(),
        }
    }

    pub fn is_winner(&self, tally: &[i64], p: usize) -> bool {
        let s = self.scores(tally);
        let sp = s[p];
        match self.model {
            WinnerModel::Nonunique => s.iter().all(|&x| x <= sp),
            WinnerModel::Unique => s.iter().enumerate().all(|(c, &x)| c == p || x < sp),
        }
    }

    /// Shifts a manipulator-side tally so that equivalent states coincide.
    /// Adding the same amount to every score never changes a scoring
    /// election, so scoring tallies are stored relative to `p`.
    pub fn normalize(&self, tally: &mut [i64], p: usize) {
        if self.is_scoring() {
            let base = tally[p];
            for x in tally.iter_mut() {
                *x -= base;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_profile;
    use crate::rules::{rule_scores, winners, Score, ScoringVector};

    #[test]
    fn agrees_with_rational_scores() {
        let p = parse_profile("candidates: a,b,c,d\n2: a > {b,c} > d\n1: {a,b,c} > d\n3: d > {a,b} > c\n").unwrap();
        for ext in ScoringExtension::ALL {
            for vector in [ScoringVector::borda(4), ScoringVector::plurality(4)] {
                let rule = RuleSpec::scoring(vector, ext, WinnerModel::Nonunique);
                let t = Tallier::new(&rule, 4).unwrap();
                let tally = t.profile_tally(&p).unwrap();
                let exact = rule_scores(&p, &rule).unwrap();
                for c in 0..4 {
                    assert_eq!(
                        Score::new(t.scores(&tally)[c], t.scale()),
                        exact.get(c),
                        "{ext} candidate {c}"
                    );
                }
                assert_eq!(t.winners(&tally), winners(&p, &rule).unwrap());
            }
        }
    }

    #[test]
    fn copeland_scores_scaled_by_alpha_denominator() {
        let p = parse_profile("candidates: a,b,c\na > b > c\nc > b > a\n2: a > {b,c}\n").unwrap();
        let rule = RuleSpec::copeland(Score::new(1, 3), WinnerModel::Unique);
        let t = Tallier::new(&rule, 3).unwrap();
        let tally = t.profile_tally(&p).unwrap();
        let exact = rule_scores(&p, &rule).unwrap();
        for c in 0..3 {
            assert_eq!(Score::new(t.scores(&tally)[c], t.scale()), exact.get(c));
        }
        assert_eq!(t.winners(&tally), winners(&p, &rule).unwrap());
    }
}
