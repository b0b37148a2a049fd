//! The group description language.
//!
//! ```text
//! group   := product ( "/" mu )?
//! product := factor ( "*" factor )*
//! factor  := atom ( "^" int )*
//! atom    := "Spin(" int ")" | "Sp(" int ")" | "SL(" int ")" | "E6"
//! mu      := "[" ( tuple ( "," tuple )* )? "]"
//! tuple   := "(" entry ( "," entry )* ")"
//! entry   := int | "(" int "," int ")"
//! ```
//!
//! A tuple has one entry per factor; `Spin(4k)` entries are pairs. Center
//! coordinates are additive: for `Spin(4k+2)` the generator `i` of the
//! center is `1`, `-1` is `2` and `-i` is `3`. `Sp(2n)` is written by its
//! matrix size and `SL(q)` needs a prime power `q`.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::abelian::GroupElement;
use crate::catalog::{prime_power, GroupSpec, SimpleFactor};

/// Largest exponent accepted after `^`.
pub const MAX_REPEAT: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("column {}: expected {expected}, found {found}", .pos + 1)]
    SyntaxError {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("column {}: {detail}", .pos + 1)]
    ArityMismatch { pos: usize, detail: String },
    #[error("column {}: {detail}", .pos + 1)]
    ValueOutOfRange { pos: usize, detail: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::SyntaxError { pos, .. }
            | ParseError::ArityMismatch { pos, .. }
            | ParseError::ValueOutOfRange { pos, .. } => *pos,
        }
    }
}

/// A tuple entry with the column it started at.
enum Entry {
    Scalar(usize, i128),
    Pair(usize, i128, i128),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_char()
    }

    fn found(&mut self) -> String {
        match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        }
    }

    fn syntax(&mut self, expected: &str) -> ParseError {
        let found = self.found();
        ParseError::SyntaxError {
            pos: self.pos,
            expected: expected.into(),
            found,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("'{c}'")))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    /// Signed integer; callers decide which values are in range.
    fn int(&mut self) -> Result<(usize, i128), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat('-');
        self.skip_ws();
        let digits_start = self.pos;
        while matches!(self.peek_char(), Some('0'..='9')) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.syntax("an integer"));
        }
        let text = &self.src[digits_start..self.pos];
        let v: i128 = text.parse().map_err(|_| ParseError::ValueOutOfRange {
            pos: start,
            detail: format!("integer {text} is too large"),
        })?;
        Ok((start, if neg { -v } else { v }))
    }

    fn unsigned(&mut self, what: &str) -> Result<(usize, u64), ParseError> {
        let (pos, v) = self.int()?;
        u64::try_from(v).map(|v| (pos, v)).map_err(|_| ParseError::ValueOutOfRange {
            pos,
            detail: format!("{what} must be a nonnegative integer, got {v}"),
        })
    }

    fn atom(&mut self) -> Result<(usize, SimpleFactor), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let out_of_range = |detail: String| ParseError::ValueOutOfRange { pos: start, detail };
        let factor = if self.eat_word("Spin") {
            self.expect('(')?;
            let (_, n) = self.unsigned("Spin parameter")?;
            self.expect(')')?;
            let n = u32::try_from(n).map_err(|_| out_of_range(format!("Spin({n}) is too large")))?;
            SimpleFactor::Spin(n)
        } else if self.eat_word("Sp") {
            self.expect('(')?;
            let (_, m) = self.unsigned("Sp parameter")?;
            self.expect(')')?;
            if m % 2 == 1 {
                return Err(out_of_range(format!("Sp({m}) needs an even matrix size")));
            }
            let n = u32::try_from(m / 2).map_err(|_| out_of_range(format!("Sp({m}) is too large")))?;
            SimpleFactor::Sp(n)
        } else if self.eat_word("SL") {
            self.expect('(')?;
            let (_, q) = self.unsigned("SL parameter")?;
            self.expect(')')?;
            let (p, k) = prime_power(q).ok_or_else(|| out_of_range(format!("SL({q}) needs a prime power")))?;
            SimpleFactor::SL { p, k }
        } else if self.eat_word("E6") {
            SimpleFactor::E6
        } else {
            return Err(self.syntax("a factor (Spin, Sp, SL or E6)"));
        };
        factor.validate().map_err(|e| out_of_range(e.to_string()))?;
        Ok((start, factor))
    }

    fn factor(&mut self, out: &mut Vec<SimpleFactor>) -> Result<(), ParseError> {
        let (_, f) = self.atom()?;
        let mut count: u64 = 1;
        while self.eat('^') {
            let (pos, e) = self.unsigned("exponent")?;
            count = count.saturating_mul(e);
            if count == 0 || count > MAX_REPEAT {
                return Err(ParseError::ValueOutOfRange {
                    pos,
                    detail: format!("repeat count must lie in 1..={MAX_REPEAT}"),
                });
            }
        }
        out.extend(std::iter::repeat_n(f, count as usize));
        Ok(())
    }

    fn entry(&mut self) -> Result<Entry, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat('(') {
            let (_, a) = self.int()?;
            self.expect(',')?;
            let (_, b) = self.int()?;
            self.expect(')')?;
            Ok(Entry::Pair(start, a, b))
        } else {
            let (pos, v) = self.int()?;
            Ok(Entry::Scalar(pos, v))
        }
    }

    fn tuple(&mut self, factors: &[SimpleFactor]) -> Result<GroupElement, ParseError> {
        self.skip_ws();
        let start = self.pos;
        self.expect('(')?;
        let mut entries = vec![self.entry()?];
        while self.eat(',') {
            entries.push(self.entry()?);
        }
        self.expect(')')?;
        if entries.len() != factors.len() {
            return Err(ParseError::ArityMismatch {
                pos: start,
                detail: format!(
                    "tuple has {} entries but the product has {} factors",
                    entries.len(),
                    factors.len()
                ),
            });
        }
        let mut coords = Vec::new();
        for (entry, f) in entries.iter().zip(factors) {
            let orders = f.center_orders();
            let (pos, values) = match (entry, orders.len()) {
                (Entry::Scalar(pos, v), 1) => (*pos, vec![*v]),
                (Entry::Pair(pos, a, b), 2) => (*pos, vec![*a, *b]),
                (Entry::Scalar(pos, _), _) => {
                    return Err(ParseError::ArityMismatch {
                        pos: *pos,
                        detail: format!("{f} has a center of rank 2 and needs a pair (a,b)"),
                    })
                }
                (Entry::Pair(pos, ..), _) => {
                    return Err(ParseError::ArityMismatch {
                        pos: *pos,
                        detail: format!("{f} has a cyclic center and needs a single integer"),
                    })
                }
            };
            for (v, o) in values.into_iter().zip(&orders) {
                let v = BigInt::from(v);
                if v.sign() == num_bigint::Sign::Minus || &v >= o {
                    return Err(ParseError::ValueOutOfRange {
                        pos,
                        detail: format!("coordinate {v} for {f} must lie in [0, {o})"),
                    });
                }
                coords.push(v);
            }
        }
        Ok(GroupElement::new(coords))
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            Err(self.syntax("end of input"))
        } else {
            Ok(())
        }
    }
}

/// Parses a group description.
pub fn parse(src: &str) -> Result<GroupSpec, ParseError> {
    let mut p = Parser::new(src);
    let mut factors = Vec::new();
    p.factor(&mut factors)?;
    while p.eat('*') {
        p.factor(&mut factors)?;
    }
    let mut mu = Vec::new();
    if p.eat('/') {
        p.expect('[')?;
        if !p.eat(']') {
            mu.push(p.tuple(&factors)?);
            while p.eat(',') {
                mu.push(p.tuple(&factors)?);
            }
            p.expect(']')?;
        }
    }
    p.end()?;
    let spec = GroupSpec { factors, mu };
    if let Err(e) = spec.validate() {
        return Err(ParseError::ValueOutOfRange {
            pos: 0,
            detail: e.to_string(),
        });
    }
    Ok(spec)
}

/// Parses one center element, e.g. the `--nu` argument, against `factors`.
pub fn parse_element(src: &str, factors: &[SimpleFactor]) -> Result<GroupElement, ParseError> {
    let mut p = Parser::new(src);
    let el = p.tuple(factors)?;
    p.end()?;
    Ok(el)
}

/// Renders a center element in tuple syntax.
pub fn render_element(factors: &[SimpleFactor], g: &GroupElement) -> String {
    let mut out = String::from("(");
    let mut k = 0;
    for (i, f) in factors.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let len = f.center_orders().len();
        let c = &g.coords()[k..k + len];
        if len == 2 {
            out.push_str(&format!("({},{})", c[0], c[1]));
        } else {
            out.push_str(&c[0].to_string());
        }
        k += len;
    }
    out.push(')');
    out
}

/// Canonical text of a spec; [`parse`] inverts it.
pub fn render(spec: &GroupSpec) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < spec.factors.len() {
        let f = spec.factors[i];
        let run = spec.factors[i..].iter().take_while(|&&g| g == f).count();
        parts.push(if run > 1 { format!("{f}^{run}") } else { f.to_string() });
        i += run;
    }
    let mut out = parts.join(" * ");
    if !spec.mu.is_empty() {
        let tuples: Vec<String> = spec.mu.iter().map(|g| render_element(&spec.factors, g)).collect();
        out.push_str(&format!(" / [{}]", tuples.join(", ")));
    }
    out
}

/// Displays a spec in canonical syntax.
pub struct Rendered<'a>(pub &'a GroupSpec);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self.0))
    }
}
