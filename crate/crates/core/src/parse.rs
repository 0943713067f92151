//! Text forms for orders, axes, and profiles.
//!
//! Order grammar (whitespace is insignificant):
//!
//! ```text
//! order    := ranked | pairwise
//! ranked   := group ('>' group)*
//! group    := name | '{' name (',' name)* '}'
//! pairwise := '(' [pair (',' pair)*] ')'
//! pair     := name ('>' | '<' | '~') name
//! ```
//!
//! A pairwise order must mention every unordered pair exactly once, so `()`
//! only parses over fewer than two candidates. Profile files carry `#`
//! comments, a `candidates: a,b,c` line, and one voter per line as
//! `WEIGHT: ORDER` (the weight defaults to 1).

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::prefs::{valid_name, Axis, Candidates, Order, PairRelation, PrefError, Ranking, WeightedProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown candidate `{name}` at column {column}")]
    UnknownCandidate { name: String, column: usize },
    #[error("candidate `{name}` appears twice (column {column})")]
    DuplicateCandidate { name: String, column: usize },
    #[error("empty group at column {column}")]
    EmptyGroup { column: usize },
    #[error("malformed input at column {column}: {message}")]
    Malformed { column: usize, message: String },
    #[error("order does not mention {}", missing.join(", "))]
    Incomplete { missing: Vec<String> },
    #[error("pair {first}/{second} is given twice")]
    DuplicatePair { first: String, second: String },
    #[error("invalid candidate list: {0}")]
    Candidates(#[from] PrefError),
    // the message already includes the inner error, so it is not a `source`
    #[error("line {line}: {error}")]
    AtLine { line: usize, error: Box<ParseError> },
}

impl ParseError {
    pub(crate) fn at_line(self, line: usize) -> ParseError {
        match self {
            e @ ParseError::AtLine { .. } => e,
            e => ParseError::AtLine {
                line,
                error: Box::new(e),
            },
        }
    }

    fn malformed(column: usize, message: impl Into<String>) -> Self {
        ParseError::Malformed {
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Gt,
    Lt,
    Tilde,
    Comma,
    LBrace,
    RBrace,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let column = i + 1;
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '>' => Tok::Gt,
            '<' => Tok::Lt,
            '~' => Tok::Tilde,
            ',' => Tok::Comma,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if valid_name(c.encode_utf8(&mut [0; 4])) => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if valid_name(c.encode_utf8(&mut [0; 4])) {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push((column, Tok::Name(name)));
                continue;
            }
            other => return Err(ParseError::malformed(column, format!("unexpected `{other}`"))),
        };
        chars.next();
        out.push((column, tok));
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end_column: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |(c, _)| *c)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn name(&mut self, candidates: &Candidates) -> Result<(usize, usize), ParseError> {
        match self.next() {
            Some((column, Tok::Name(name))) => candidates
                .index(&name)
                .map(|i| (column, i))
                .ok_or(ParseError::UnknownCandidate { name, column }),
            Some((column, t)) => Err(ParseError::malformed(
                column,
                format!("expected a candidate name, found {t:?}"),
            )),
            None => Err(ParseError::malformed(self.end_column, "unexpected end of input")),
        }
    }
}

fn missing_names(candidates: &Candidates, seen: &[bool]) -> Vec<String> {
    seen.iter()
        .enumerate()
        .filter(|(_, s)| !**s)
        .map(|(i, _)| candidates.name(i).to_string())
        .collect()
}

/// Parses an order over `candidates`.
pub fn parse_order(text: &str, candidates: &Candidates) -> Result<Order, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor {
        toks: &toks,
        pos: 0,
        end_column: text.chars().count() + 1,
    };
    match cur.peek() {
        None => Err(ParseError::malformed(1, "empty order")),
        Some(Tok::LParen) => parse_pairwise(&mut cur, candidates),
        Some(_) => parse_ranked(&mut cur, candidates).map(Order::Ranked),
    }
}

fn parse_ranked(cur: &mut Cursor<'_>, candidates: &Candidates) -> Result<Ranking, ParseError> {
    let m = candidates.len();
    let mut seen = vec![false; m];
    let mut groups = Vec::new();
    loop {
        let mut group = Vec::new();
        let mut claim = |column: usize, c: usize, group: &mut Vec<usize>| {
            if std::mem::replace(&mut seen[c], true) {
                return Err(ParseError::DuplicateCandidate {
                    name: candidates.name(c).to_string(),
                    column,
                });
            }
            group.push(c);
            Ok(())
        };
        if cur.peek() == Some(&Tok::LBrace) {
            let open = cur.column();
            cur.next();
            if cur.peek() == Some(&Tok::RBrace) {
                return Err(ParseError::EmptyGroup { column: open });
            }
            loop {
                let (column, c) = cur.name(candidates)?;
                claim(column, c, &mut group)?;
                match cur.next() {
                    Some((_, Tok::Comma)) => continue,
                    Some((_, Tok::RBrace)) => break,
                    Some((column, t)) => {
                        return Err(ParseError::malformed(
                            column,
                            format!("expected `,` or `}}`, found {t:?}"),
                        ))
                    }
                    None => return Err(ParseError::malformed(cur.end_column, "unclosed `{`")),
                }
            }
        } else {
            if cur.peek().is_none() {
                return Err(ParseError::EmptyGroup { column: cur.column() });
            }
            let (column, c) = cur.name(candidates)?;
            claim(column, c, &mut group)?;
        }
        groups.push(group);
        match cur.next() {
            None => break,
            Some((_, Tok::Gt)) => continue,
            Some((column, t)) => return Err(ParseError::malformed(column, format!("expected `>`, found {t:?}"))),
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(ParseError::Incomplete {
            missing: missing_names(candidates, &seen),
        });
    }
    Ok(Ranking::new(m, groups).expect("validated during parsing"))
}

fn parse_pairwise(cur: &mut Cursor<'_>, candidates: &Candidates) -> Result<Order, ParseError> {
    let m = candidates.len();
    cur.next(); // '('
    let mut given: Vec<Option<Ordering>> = vec![None; m * m];
    // `()` lists no pairs; the completeness check below still applies
    let mut open = cur.peek() != Some(&Tok::RParen);
    if !open {
        cur.next();
    }
    while open {
        let (column, a) = cur.name(candidates)?;
        let ord = match cur.next() {
            Some((_, Tok::Gt)) => Ordering::Greater,
            Some((_, Tok::Lt)) => Ordering::Less,
            Some((_, Tok::Tilde)) => Ordering::Equal,
            Some((column, t)) => {
                return Err(ParseError::malformed(
                    column,
                    format!("expected `>`, `<` or `~`, found {t:?}"),
                ))
            }
            None => return Err(ParseError::malformed(cur.end_column, "unexpected end of input")),
        };
        let (_, b) = cur.name(candidates)?;
        if a == b {
            return Err(ParseError::malformed(column, "a candidate compared with itself"));
        }
        if given[a * m + b].is_some() {
            let (lo, hi) = (a.min(b), a.max(b));
            return Err(ParseError::DuplicatePair {
                first: candidates.name(lo).to_string(),
                second: candidates.name(hi).to_string(),
            });
        }
        given[a * m + b] = Some(ord);
        given[b * m + a] = Some(ord.reverse());
        match cur.next() {
            Some((_, Tok::Comma)) => {}
            Some((_, Tok::RParen)) => open = false,
            Some((column, t)) => {
                return Err(ParseError::malformed(
                    column,
                    format!("expected `,` or `)`, found {t:?}"),
                ))
            }
            None => return Err(ParseError::malformed(cur.end_column, "unclosed `(`")),
        }
    }
    if let Some((column, t)) = cur.next() {
        return Err(ParseError::malformed(column, format!("trailing {t:?}")));
    }
    let mut missing = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            if given[a * m + b].is_none() {
                missing.push(format!("{}/{}", candidates.name(a), candidates.name(b)));
            }
        }
    }
    if !missing.is_empty() {
        return Err(ParseError::Incomplete { missing });
    }
    Ok(Order::Pairwise(PairRelation::from_fn(m, |a, b| {
        given[a * m + b].expect("checked complete")
    })))
}

/// Renders an order in the canonical grammar.
pub struct DisplayOrder<'a> {
    order: &'a Order,
    candidates: &'a Candidates,
}

pub fn display_order<'a>(order: &'a Order, candidates: &'a Candidates) -> DisplayOrder<'a> {
    DisplayOrder { order, candidates }
}

impl fmt::Display for DisplayOrder<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |c: usize| self.candidates.name(c);
        match self.order {
            Order::Ranked(r) => {
                for (i, g) in r.groups().iter().enumerate() {
                    if i > 0 {
                        f.write_str(" > ")?;
                    }
                    if g.len() == 1 {
                        f.write_str(name(g[0]))?;
                    } else {
                        f.write_str("{")?;
                        for (j, &c) in g.iter().enumerate() {
                            if j > 0 {
                                f.write_str(",")?;
                            }
                            f.write_str(name(c))?;
                        }
                        f.write_str("}")?;
                    }
                }
                Ok(())
            }
            Order::Pairwise(p) => {
                let m = p.num_candidates();
                f.write_str("(")?;
                let mut first = true;
                for a in 0..m {
                    for b in a + 1..m {
                        if !first {
                            f.write_str(", ")?;
                        }
                        first = false;
                        match p.compare(a, b) {
                            Ordering::Greater => write!(f, "{}>{}", name(a), name(b))?,
                            Ordering::Less => write!(f, "{}>{}", name(b), name(a))?,
                            Ordering::Equal => write!(f, "{}~{}", name(a), name(b))?,
                        }
                    }
                }
                f.write_str(")")
            }
        }
    }
}

pub fn order_to_string(order: &Order, candidates: &Candidates) -> String {
    display_order(order, candidates).to_string()
}

/// Parses `a < p < b`.
pub fn parse_axis(text: &str, candidates: &Candidates) -> Result<Axis, ParseError> {
    let mut seq = Vec::new();
    let mut seen = vec![false; candidates.len()];
    let mut column = 1;
    for part in text.split('<') {
        let name = part.trim();
        let col = column + part.len() - part.trim_start().len();
        column += part.chars().count() + 1;
        let c = candidates.index(name).ok_or_else(|| {
            if name.is_empty() {
                ParseError::malformed(col, "empty axis position")
            } else {
                ParseError::UnknownCandidate {
                    name: name.to_string(),
                    column: col,
                }
            }
        })?;
        if std::mem::replace(&mut seen[c], true) {
            return Err(ParseError::DuplicateCandidate {
                name: name.to_string(),
                column: col,
            });
        }
        seq.push(c);
    }
    if seen.iter().any(|s| !s) {
        return Err(ParseError::Incomplete {
            missing: missing_names(candidates, &seen),
        });
    }
    Ok(Axis::new(seq).expect("validated"))
}

pub fn axis_to_string(axis: &Axis, candidates: &Candidates) -> String {
    axis.sequence()
        .iter()
        .map(|&c| candidates.name(c))
        .collect::<Vec<_>>()
        .join(" < ")
}

pub fn parse_candidates(list: &str) -> Result<Candidates, ParseError> {
    Ok(Candidates::new(list.split(',').map(|s| s.trim().to_string()))?)
}

/// A classified input line.
#[derive(Debug)]
pub(crate) enum Line<'a> {
    /// `key: value`; `key` starts with a letter.
    Header { key: &'a str, value: &'a str },
    /// `[WEIGHT:] ORDER`
    Voter { weight: u64, order: &'a str },
}

/// Splits a document into numbered lines, dropping comments and blanks.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, Result<Line<'_>, ParseError>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        Some((i + 1, classify_line(line)))
    })
}

fn classify_line(line: &str) -> Result<Line<'_>, ParseError> {
    match line.split_once(':') {
        None => Ok(Line::Voter { weight: 1, order: line }),
        Some((head, rest)) => {
            let head = head.trim();
            if head.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                let weight: u64 = head
                    .parse()
                    .map_err(|_| ParseError::malformed(1, format!("bad weight `{head}`")))?;
                if weight == 0 {
                    return Err(ParseError::malformed(1, "voter weight must be positive"));
                }
                Ok(Line::Voter {
                    weight,
                    order: rest.trim(),
                })
            } else {
                Ok(Line::Header {
                    key: head,
                    value: rest.trim(),
                })
            }
        }
    }
}

pub(crate) fn parse_voter_line(profile: &mut WeightedProfile, weight: u64, order: &str) -> Result<(), ParseError> {
    let order = parse_order(order, profile.candidates())?;
    profile.push(order, weight).map_err(ParseError::Candidates)
}

/// Parses a profile file.
pub fn parse_profile(text: &str) -> Result<WeightedProfile, ParseError> {
    let mut profile: Option<WeightedProfile> = None;
    for (n, line) in lines(text) {
        match line.map_err(|e| e.at_line(n))? {
            Line::Header {
                key: "candidates",
                value,
            } => {
                if profile.is_some() {
                    return Err(ParseError::malformed(1, "second `candidates:` line").at_line(n));
                }
                let c = parse_candidates(value).map_err(|e| e.at_line(n))?;
                profile = Some(WeightedProfile::empty(c));
            }
            Line::Header { key, .. } => {
                return Err(ParseError::malformed(1, format!("unknown header `{key}`")).at_line(n))
            }
            Line::Voter { weight, order } => {
                let p = profile
                    .as_mut()
                    .ok_or_else(|| ParseError::malformed(1, "voter before `candidates:` line").at_line(n))?;
                parse_voter_line(p, weight, order).map_err(|e| e.at_line(n))?;
            }
        }
    }
    profile.ok_or_else(|| ParseError::malformed(1, "missing `candidates:` line").at_line(1))
}

pub(crate) fn write_voters(out: &mut String, profile: &WeightedProfile) {
    use std::fmt::Write;
    for v in profile.voters() {
        let _ = writeln!(out, "{}: {}", v.weight, display_order(&v.order, profile.candidates()));
    }
}

/// Canonical profile text; `parse_profile` inverts it exactly.
pub fn profile_to_string(profile: &WeightedProfile) -> String {
    let mut out = format!("candidates: {}\n", profile.candidates().names().join(","));
    write_voters(&mut out, profile);
    out
}
