//! Plain-text reaction format.
//!
//! ```text
//! # comment
//! 2 X1 -> X1 + X2
//! X1 + X2 <-> 2 X2
//! 0 -> X3
//! ```
//!
//! `<->` expands to the forward reaction followed by the reverse one.
//! Species are numbered by first appearance.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::model::{Complex, ModelError, ReactionNetwork};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Line and column (1-based) where a reaction starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone)]
pub struct CrnDocument {
    pub source: String,
    pub network: ReactionNetwork,
    /// Source location per reaction index.
    pub locations: Vec<Location>,
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

type Terms = Vec<(String, u64)>;

impl<'a> Cursor<'a> {
    fn err(&self, at: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.text[..at].chars().count() + 1,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.text[start..self.pos]
    }

    fn complex(&mut self) -> Result<Terms, ParseError> {
        self.skip_ws();
        let mut terms = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            if self.text[self.pos..].starts_with('-') {
                let rest = &self.text[self.pos + 1..];
                if rest.starts_with(|c: char| c.is_ascii_digit()) {
                    return Err(self.err(start, "negative coefficient"));
                }
                return Err(self.err(start, "expected a complex"));
            }
            let digits = self.take_while(|c| c.is_ascii_digit());
            self.skip_ws();
            let ident_start = self.pos;
            let ident = if self.peek().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
                self.take_while(|c| c.is_ascii_alphanumeric() || c == '_')
            } else {
                ""
            };
            match (digits.is_empty(), ident.is_empty()) {
                (true, true) => return Err(self.err(start, "expected a complex")),
                (false, true) => {
                    if digits.bytes().all(|b| b == b'0') && terms.is_empty() {
                        self.skip_ws();
                        if self.peek() == Some('+') {
                            return Err(self.err(self.pos, "the empty complex 0 cannot be added to"));
                        }
                        return Ok(terms);
                    }
                    return Err(self.err(ident_start, "expected a species name"));
                }
                (_, false) => {
                    let coeff = if digits.is_empty() {
                        1
                    } else {
                        let v: u64 = digits
                            .parse()
                            .map_err(|_| self.err(start, "coefficient too large"))?;
                        if v == 0 {
                            return Err(self.err(start, "zero coefficient"));
                        }
                        v
                    };
                    terms.push((ident.to_string(), coeff));
                }
            }
            self.skip_ws();
            if self.peek() == Some('+') {
                self.pos += 1;
                continue;
            }
            return Ok(terms);
        }
    }

    /// Returns true for a reversible arrow.
    fn arrow(&mut self) -> Result<bool, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        if rest.starts_with("<->") {
            self.pos += 3;
            Ok(true)
        } else if rest.starts_with("->") {
            self.pos += 2;
            Ok(false)
        } else if rest.starts_with(['<', '-', '=', '>']) {
            let tok = self.take_while(|c| matches!(c, '<' | '-' | '=' | '>'));
            let at = self.pos - tok.len();
            Err(self.err(at, format!("unknown arrow token `{tok}`")))
        } else if rest.is_empty() {
            Err(self.err(self.pos, "expected `->` or `<->`"))
        } else {
            Err(self.err(self.pos, format!("unexpected `{}`, expected `->` or `<->`", self.peek().unwrap())))
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn to_complex(terms: &Terms, index: &HashMap<String, usize>, m: usize) -> Result<Complex, ModelError> {
    let mut v = vec![0u64; m];
    for (name, c) in terms {
        let slot = &mut v[index[name]];
        *slot = slot.checked_add(*c).ok_or(ModelError::Overflow)?;
    }
    Ok(Complex::new(v))
}

pub fn parse_crn(text: &str) -> Result<CrnDocument, ParseError> {
    let mut species: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut raw: Vec<(Terms, Terms, Location)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = strip_comment(line);
        if body.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor {
            text: body,
            pos: 0,
            line: ln + 1,
        };
        cur.skip_ws();
        let loc = Location {
            line: ln + 1,
            column: body[..cur.pos].chars().count() + 1,
        };
        let lhs = cur.complex()?;
        let reversible = cur.arrow()?;
        let rhs = cur.complex()?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.err(cur.pos, "trailing input after reaction"));
        }
        for (name, _) in lhs.iter().chain(&rhs) {
            if !index.contains_key(name) {
                index.insert(name.clone(), species.len());
                species.push(name.clone());
            }
        }
        if reversible {
            raw.push((lhs.clone(), rhs.clone(), loc));
            raw.push((rhs, lhs, loc));
        } else {
            raw.push((lhs, rhs, loc));
        }
    }
    let m = species.len();
    let mut reactions = Vec::with_capacity(raw.len());
    let mut locations = Vec::with_capacity(raw.len());
    for (l, r, loc) in &raw {
        let wrap = |e: ModelError| ParseError {
            line: loc.line,
            column: loc.column,
            message: e.to_string(),
        };
        reactions.push((to_complex(l, &index, m).map_err(wrap)?, to_complex(r, &index, m).map_err(wrap)?));
        locations.push(*loc);
    }
    let network = ReactionNetwork::from_complexes(&species, reactions).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })?;
    Ok(CrnDocument {
        source: text.to_string(),
        network,
        locations,
    })
}

/// Parses a single complex such as `2 X1 + X2` or `2X1` over the species of
/// `net`.
pub fn parse_complex(text: &str, net: &ReactionNetwork) -> Result<Complex, ParseError> {
    let mut cur = Cursor { text, pos: 0, line: 1 };
    let terms = cur.complex()?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.err(cur.pos, "trailing input after complex"));
    }
    let mut v = vec![0u64; net.species_count()];
    for (name, c) in terms {
        let i = net.species_index(&name).ok_or_else(|| ParseError {
            line: 1,
            column: 1,
            message: format!("unknown species `{name}`"),
        })?;
        v[i] += c;
    }
    Ok(Complex::new(v))
}

/// One `source -> target` line per reaction, terms in species order.
pub fn print_crn(net: &ReactionNetwork) -> String {
    let mut out = String::new();
    for r in net.reactions() {
        out.push_str(&net.complex_name(r.source));
        out.push_str(" -> ");
        out.push_str(&net.complex_name(r.target));
        out.push('\n');
    }
    out
}
