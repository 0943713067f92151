//! Text forms for solver instances and decisions.
//!
//! An instance is a profile document with extra headers:
//!
//! ```text
//! candidates: a,b,p
//! rule: borda            # plurality | approval-T | scoring(3,1,0) | copeland(1/2)
//! ext: max               # scoring rules only
//! winner-model: nonunique
//! preferred: p
//! weights: 1,1           # manipulation: manipulator weights
//! domain: top            # manipulation and bribery
//! axis: a < p < b        # optional
//! limit: 2               # control and bribery
//! 3: a > {b,p}
//! unregistered:          # control only; voters below are unregistered
//! 1: p > a > b
//! ```

use std::collections::HashMap;
use std::fmt::Write;

use crate::parse::{
    axis_to_string, display_order, lines, parse_axis, parse_candidates, parse_voter_line, write_voters, Line,
    ParseError,
};
use crate::prefs::{Candidates, WeightedProfile};
use crate::rules::{RuleKind, RuleSpec, Score, ScoringExtension, ScoringVector, WinnerModel};
use crate::solvers::{
    BriberyInstance, ControlAvInstance, Decision, DomainKind, ManipulationInstance, VoteDomain, Witness,
};

fn malformed(message: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        column: 1,
        message: message.into(),
    }
}

/// Parses `3`, `-2` or `1/2`.
pub fn parse_score(text: &str) -> Result<Score, String> {
    let text = text.trim();
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| format!("bad number `{text}`"));
    match text.split_once('/') {
        Some((n, d)) => {
            let d = parse(d)?;
            if d == 0 {
                return Err(format!("zero denominator in `{text}`"));
            }
            Ok(Score::new(parse(n)?, d))
        }
        None => Ok(Score::from_integer(parse(text)?)),
    }
}

/// A rule as written in a `rule:` header, before the candidate count is
/// known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleName {
    Borda,
    Plurality,
    Approval(usize),
    Scoring(Vec<Score>),
    Copeland(Score),
}

impl std::str::FromStr for RuleName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let inner = |prefix: &str| {
            s.strip_prefix(prefix)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if s == "borda" {
            Ok(RuleName::Borda)
        } else if s == "plurality" {
            Ok(RuleName::Plurality)
        } else if s == "llull" {
            Ok(RuleName::Copeland(Score::from_integer(1)))
        } else if let Some(t) = s.strip_prefix("approval-") {
            t.parse()
                .map(RuleName::Approval)
                .map_err(|_| format!("bad approval count in `{s}`"))
        } else if let Some(values) = inner("scoring") {
            values
                .split(',')
                .map(parse_score)
                .collect::<Result<_, _>>()
                .map(RuleName::Scoring)
        } else if let Some(alpha) = inner("copeland") {
            parse_score(alpha).map(RuleName::Copeland)
        } else {
            Err(format!("unknown rule `{s}`"))
        }
    }
}

impl RuleName {
    pub fn is_scoring(&self) -> bool {
        !matches!(self, RuleName::Copeland(_))
    }

    /// The rule over `m` candidates; scoring rules need an extension.
    pub fn build(&self, m: usize, extension: Option<ScoringExtension>, model: WinnerModel) -> Result<RuleSpec, String> {
        let vector = match self {
            RuleName::Copeland(alpha) => {
                let rule = RuleSpec::copeland(*alpha, model);
                rule.validate(m).map_err(|e| e.to_string())?;
                return Ok(rule);
            }
            RuleName::Borda => ScoringVector::borda(m),
            RuleName::Plurality => ScoringVector::plurality(m),
            RuleName::Approval(t) => ScoringVector::t_approval(m, *t).map_err(|e| e.to_string())?,
            RuleName::Scoring(v) => ScoringVector::new(v.clone()).map_err(|e| e.to_string())?,
        };
        let extension = extension.ok_or("scoring rules need a tie extension")?;
        let rule = RuleSpec::scoring(vector, extension, model);
        rule.validate(m).map_err(|e| e.to_string())?;
        Ok(rule)
    }

    /// Shortest name for `rule` over `m` candidates.
    pub fn of(rule: &RuleSpec, m: usize) -> RuleName {
        match &rule.kind {
            RuleKind::Copeland { alpha } => RuleName::Copeland(*alpha),
            RuleKind::Scoring { vector, .. } => {
                if *vector == ScoringVector::borda(m) {
                    RuleName::Borda
                } else if *vector == ScoringVector::plurality(m) {
                    RuleName::Plurality
                } else if let Some(t) = vector.approval_count() {
                    RuleName::Approval(t)
                } else {
                    RuleName::Scoring(vector.values().to_vec())
                }
            }
        }
    }
}

impl std::fmt::Display for RuleName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RuleName::Borda => f.write_str("borda"),
            RuleName::Plurality => f.write_str("plurality"),
            RuleName::Approval(t) => write!(f, "approval-{t}"),
            RuleName::Scoring(v) => {
                let v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
                write!(f, "scoring({})", v.join(","))
            }
            RuleName::Copeland(alpha) => write!(f, "copeland({alpha})"),
        }
    }
}

struct Document {
    headers: HashMap<String, (usize, String)>,
    voters: WeightedProfile,
    unregistered: Option<WeightedProfile>,
}

impl Document {
    fn parse(text: &str, allowed: &[&str]) -> Result<Self, ParseError> {
        let mut headers: HashMap<String, (usize, String)> = HashMap::new();
        let mut voters: Option<WeightedProfile> = None;
        let mut unregistered: Option<WeightedProfile> = None;
        for (n, line) in lines(text) {
            match line.map_err(|e| e.at_line(n))? {
                Line::Header {
                    key: "candidates",
                    value,
                } => {
                    if voters.is_some() {
                        return Err(malformed("second `candidates:` line").at_line(n));
                    }
                    voters = Some(WeightedProfile::empty(
                        parse_candidates(value).map_err(|e| e.at_line(n))?,
                    ));
                }
                Line::Header {
                    key: "unregistered",
                    value,
                } if allowed.contains(&"unregistered") => {
                    let c = voters
                        .as_ref()
                        .ok_or_else(|| malformed("`unregistered:` before `candidates:`").at_line(n))?;
                    if !value.is_empty() || unregistered.is_some() {
                        return Err(malformed("`unregistered:` must appear once, on its own").at_line(n));
                    }
                    unregistered = Some(WeightedProfile::empty(c.candidates().clone()));
                }
                Line::Header { key, value } => {
                    if !allowed.contains(&key) {
                        return Err(malformed(format!("unknown header `{key}`")).at_line(n));
                    }
                    if headers.insert(key.to_string(), (n, value.to_string())).is_some() {
                        return Err(malformed(format!("header `{key}` given twice")).at_line(n));
                    }
                }
                Line::Voter { weight, order } => {
                    let target = match unregistered.as_mut() {
                        Some(u) => u,
                        None => voters
                            .as_mut()
                            .ok_or_else(|| malformed("voter before `candidates:` line").at_line(n))?,
                    };
                    parse_voter_line(target, weight, order).map_err(|e| e.at_line(n))?;
                }
            }
        }
        let voters = voters.ok_or_else(|| malformed("missing `candidates:` line").at_line(1))?;
        Ok(Document {
            headers,
            voters,
            unregistered,
        })
    }

    fn candidates(&self) -> &Candidates {
        self.voters.candidates()
    }

    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.headers.get(key).map(|(n, v)| (*n, v.as_str()))
    }

    fn require(&self, key: &str) -> Result<(usize, &str), ParseError> {
        self.get(key)
            .ok_or_else(|| malformed(format!("missing `{key}:` header")).at_line(1))
    }

    fn with<T>(&self, key: &str, f: impl FnOnce(&str) -> Result<T, String>) -> Result<Option<T>, ParseError> {
        self.get(key)
            .map(|(n, v)| f(v).map_err(|e| malformed(e).at_line(n)))
            .transpose()
    }

    fn rule(&self) -> Result<RuleSpec, ParseError> {
        let (n, name) = self.require("rule")?;
        let name: RuleName = name.parse().map_err(|e: String| malformed(e).at_line(n))?;
        let ext = self.with("ext", |v| v.parse::<ScoringExtension>())?;
        let model = self
            .with("winner-model", |v| v.parse::<WinnerModel>())?
            .unwrap_or_default();
        if !name.is_scoring() && ext.is_some() {
            return Err(malformed("`ext:` applies to scoring rules only").at_line(self.get("ext").unwrap().0));
        }
        name.build(self.candidates().len(), ext, model)
            .map_err(|e| malformed(e).at_line(n))
    }

    fn preferred(&self) -> Result<usize, ParseError> {
        let (n, name) = self.require("preferred")?;
        self.candidates()
            .index(name)
            .ok_or_else(|| malformed(format!("unknown candidate `{name}`")).at_line(n))
    }

    fn limit(&self) -> Result<usize, ParseError> {
        let (n, v) = self.require("limit")?;
        v.parse().map_err(|_| malformed(format!("bad limit `{v}`")).at_line(n))
    }

    fn domain(&self) -> Result<VoteDomain, ParseError> {
        let kind = self
            .with("domain", |v| v.parse::<DomainKind>())?
            .unwrap_or(DomainKind::Weak);
        let axis = match self.get("axis") {
            Some((n, v)) => Some(parse_axis(v, self.candidates()).map_err(|e| e.at_line(n))?),
            None => None,
        };
        Ok(VoteDomain { kind, axis })
    }
}

fn write_rule(out: &mut String, rule: &RuleSpec, m: usize) {
    let _ = writeln!(out, "rule: {}", RuleName::of(rule, m));
    if let RuleKind::Scoring { extension, .. } = &rule.kind {
        let _ = writeln!(out, "ext: {extension}");
    }
    let _ = writeln!(out, "winner-model: {}", rule.winner_model);
}

fn write_domain(out: &mut String, domain: &VoteDomain, candidates: &Candidates) {
    let _ = writeln!(out, "domain: {}", domain.kind);
    if let Some(axis) = &domain.axis {
        let _ = writeln!(out, "axis: {}", axis_to_string(axis, candidates));
    }
}

const MANIPULATION_KEYS: &[&str] = &["rule", "ext", "winner-model", "preferred", "weights", "domain", "axis"];
const CONTROL_KEYS: &[&str] = &["rule", "ext", "winner-model", "preferred", "limit", "unregistered"];
const BRIBERY_KEYS: &[&str] = &["rule", "ext", "winner-model", "preferred", "limit", "domain", "axis"];

pub fn parse_manipulation(text: &str) -> Result<ManipulationInstance, ParseError> {
    let doc = Document::parse(text, MANIPULATION_KEYS)?;
    let weights = doc
        .with("weights", |v| {
            v.split(',')
                .map(str::trim)
                .filter(|w| !w.is_empty())
                .map(|w| match w.parse::<u64>() {
                    Ok(0) | Err(_) => Err(format!("bad manipulator weight `{w}`")),
                    Ok(x) => Ok(x),
                })
                .collect::<Result<Vec<_>, _>>()
        })?
        .unwrap_or_default();
    Ok(ManipulationInstance {
        rule: doc.rule()?,
        preferred: doc.preferred()?,
        domain: doc.domain()?,
        manipulator_weights: weights,
        nonmanipulators: doc.voters,
    })
}

pub fn manipulation_to_string(inst: &ManipulationInstance) -> String {
    let c = inst.nonmanipulators.candidates();
    let mut out = format!("candidates: {}\n", c.names().join(","));
    write_rule(&mut out, &inst.rule, c.len());
    let _ = writeln!(out, "preferred: {}", c.name(inst.preferred));
    let weights: Vec<String> = inst.manipulator_weights.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "weights: {}", weights.join(","));
    write_domain(&mut out, &inst.domain, c);
    write_voters(&mut out, &inst.nonmanipulators);
    out
}

pub fn parse_control_av(text: &str) -> Result<ControlAvInstance, ParseError> {
    let doc = Document::parse(text, CONTROL_KEYS)?;
    let rule = doc.rule()?;
    let preferred = doc.preferred()?;
    let add_limit = doc.limit()?;
    let unregistered = doc
        .unregistered
        .unwrap_or_else(|| WeightedProfile::empty(doc.voters.candidates().clone()));
    Ok(ControlAvInstance {
        registered: doc.voters,
        unregistered,
        preferred,
        add_limit,
        rule,
    })
}

pub fn control_av_to_string(inst: &ControlAvInstance) -> String {
    let c = inst.registered.candidates();
    let mut out = format!("candidates: {}\n", c.names().join(","));
    write_rule(&mut out, &inst.rule, c.len());
    let _ = writeln!(out, "preferred: {}", c.name(inst.preferred));
    let _ = writeln!(out, "limit: {}", inst.add_limit);
    write_voters(&mut out, &inst.registered);
    out.push_str("unregistered:\n");
    write_voters(&mut out, &inst.unregistered);
    out
}

pub fn parse_bribery(text: &str) -> Result<BriberyInstance, ParseError> {
    let doc = Document::parse(text, BRIBERY_KEYS)?;
    Ok(BriberyInstance {
        rule: doc.rule()?,
        preferred: doc.preferred()?,
        bribe_limit: doc.limit()?,
        domain: doc.domain()?,
        voters: doc.voters,
    })
}

pub fn bribery_to_string(inst: &BriberyInstance) -> String {
    let c = inst.voters.candidates();
    let mut out = format!("candidates: {}\n", c.names().join(","));
    write_rule(&mut out, &inst.rule, c.len());
    let _ = writeln!(out, "preferred: {}", c.name(inst.preferred));
    let _ = writeln!(out, "limit: {}", inst.bribe_limit);
    write_domain(&mut out, &inst.domain, c);
    write_voters(&mut out, &inst.voters);
    out
}

/// Witness lines for a decision, one vote or voter per line.
pub fn witness_lines(witness: &Witness, candidates: &Candidates) -> Vec<String> {
    match witness {
        Witness::Manipulation(votes) => votes
            .iter()
            .enumerate()
            .map(|(i, v)| format!("manipulator {}: {}", i + 1, display_order(v, candidates)))
            .collect(),
        Witness::AddedVoters(added) => added
            .iter()
            .map(|i| format!("add unregistered voter {}", i + 1))
            .collect(),
        Witness::Bribery { voters, votes } => voters
            .iter()
            .zip(votes)
            .map(|(i, v)| format!("bribe voter {}: {}", i + 1, display_order(v, candidates)))
            .collect(),
    }
}

/// `YES`/`NO`, the algorithm, and the witness lines.
pub fn decision_to_string(decision: &Decision, candidates: &Candidates) -> String {
    let mut out = format!(
        "{} ({})\n",
        if decision.answer { "YES" } else { "NO" },
        decision.algorithm
    );
    if let Some(w) = &decision.witness {
        for line in witness_lines(w, candidates) {
            let _ = writeln!(out, "  {line}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const BORDA: &str = "candidates: a,b,p\nrule: borda\next: max\npreferred: p\nweights: 1,1\ndomain: top\naxis: a < p < b\n3: a > {b,p}\n3: b > {a,p}\n";

    #[test]
    fn manipulation_round_trip() {
        let inst = parse_manipulation(BORDA).unwrap();
        assert_eq!(inst.manipulator_weights, vec![1, 1]);
        assert_eq!(inst.preferred, 2);
        let text = manipulation_to_string(&inst);
        assert_eq!(parse_manipulation(&text).unwrap(), inst);
        assert_eq!(manipulation_to_string(&parse_manipulation(&text).unwrap()), text);
    }

    #[test]
    fn control_round_trip() {
        let text = "candidates: a,p\nrule: plurality\next: average\npreferred: p\nlimit: 1\n2: a > p\nunregistered:\n3: p > a\n";
        let inst = parse_control_av(text).unwrap();
        assert_eq!(inst.unregistered.len(), 1);
        assert_eq!(parse_control_av(&control_av_to_string(&inst)).unwrap(), inst);
    }

    #[test]
    fn rule_names() {
        for s in ["borda", "plurality", "approval-2", "scoring(3,1/2,0)", "copeland(1/2)"] {
            assert_eq!(s.parse::<RuleName>().unwrap().to_string(), s);
        }
        assert!("copeland(2)"
            .parse::<RuleName>()
            .unwrap()
            .build(3, None, WinnerModel::Nonunique)
            .is_err());
    }

    #[test]
    fn errors_carry_lines() {
        let bad = BORDA.replace("preferred: p", "preferred: q");
        let err = parse_manipulation(&bad).unwrap_err();
        assert!(err.to_string().starts_with("line 4:"), "{err}");
        assert!(parse_manipulation(&BORDA.replace("ext: max\n", "")).is_err());
        assert!(parse_manipulation(&format!("{BORDA}limit: 2\n")).is_err());
    }
}
