//! Poset expressions: the AST, its text grammar and construction.
//!
//! ```text
//! expr  := term ('+' term)*                    left-associative
//! term  := 'C(' int ')' | 'A(' int ')' | 'Q(' int ')'
//!        | 'K(' ints ')' | 'CC(' ints ')' | 'SD(' int ',' int ')'
//!        | 'V' | 'L' | 'N' | 'J'
//!        | 'glue(' expr ',' expr ')' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. Every integer must be at least 1, except the
//! dimension of `Q`.

use std::fmt;

use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedPoset {
    V,
    Lambda,
    N,
    J,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PosetExpression {
    Chain(usize),
    Antichain(usize),
    Parallel(Box<PosetExpression>, Box<PosetExpression>),
    /// Chain lengths, kept non-increasing.
    ChainComposition(Vec<usize>),
    Multipartite(Vec<usize>),
    SubdividedDiamond(usize, usize),
    BooleanCube(u32),
    /// Minimum of the left operand identified with the maximum of the right.
    Glue(Box<PosetExpression>, Box<PosetExpression>),
    Named(NamedPoset),
}

impl PosetExpression {
    pub fn chain_composition(mut lengths: Vec<usize>) -> Self {
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        PosetExpression::ChainComposition(lengths)
    }

    /// Parallel composition; two chain-only operands collapse into a single
    /// chain composition.
    pub fn parallel(left: PosetExpression, right: PosetExpression) -> Self {
        match (left.chain_lengths(), right.chain_lengths()) {
            (Some(mut a), Some(b)) => {
                a.extend(b);
                Self::chain_composition(a)
            }
            _ => PosetExpression::Parallel(Box::new(left), Box::new(right)),
        }
    }

    pub fn glue(left: PosetExpression, right: PosetExpression) -> Self {
        PosetExpression::Glue(Box::new(left), Box::new(right))
    }

    fn chain_lengths(&self) -> Option<Vec<usize>> {
        match self {
            PosetExpression::Chain(t) => Some(vec![*t]),
            PosetExpression::ChainComposition(ts) => Some(ts.clone()),
            _ => None,
        }
    }

    pub fn construct(&self) -> Result<Poset> {
        use PosetExpression::*;
        let positive = |what: &str, xs: &[usize]| -> Result<()> {
            if xs.is_empty() || xs.contains(&0) {
                Err(Error::Parameter(format!("{what}: parameters must be >= 1")))
            } else {
                Ok(())
            }
        };
        Ok(match self {
            Chain(t) => {
                positive("chain", &[*t])?;
                Poset::chain(*t)
            }
            Antichain(l) => {
                positive("antichain", &[*l])?;
                Poset::antichain(*l)
            }
            Parallel(a, b) => a.construct()?.parallel(&b.construct()?),
            ChainComposition(ts) => {
                positive("chain composition", ts)?;
                Poset::chain_composition(ts)
            }
            Multipartite(ts) => {
                positive("multipartite", ts)?;
                Poset::multipartite(ts)
            }
            SubdividedDiamond(s, t) => {
                positive("subdivided diamond", &[*s, *t])?;
                Poset::subdivided_diamond(*s, *t)
            }
            BooleanCube(n) => {
                if *n > 10 {
                    return Err(crate::error::budget(format!("Q({n}) is too large to build")));
                }
                Poset::boolean_cube(*n)
            }
            Glue(a, b) => a.construct()?.glue(&b.construct()?)?,
            Named(NamedPoset::V) => Poset::v_shape(),
            Named(NamedPoset::Lambda) => Poset::lambda_shape(),
            Named(NamedPoset::N) => Poset::n_shape(),
            Named(NamedPoset::J) => Poset::j_shape(),
        })
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[usize]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for PosetExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PosetExpression::*;
        match self {
            Chain(t) => write!(f, "C({t})"),
            Antichain(l) => write!(f, "A({l})"),
            Parallel(a, b) => match **b {
                Parallel(..) => write!(f, "{a}+({b})"),
                _ => write!(f, "{a}+{b}"),
            },
            ChainComposition(ts) => {
                f.write_str("CC(")?;
                write_list(f, ts)?;
                f.write_str(")")
            }
            Multipartite(ts) => {
                f.write_str("K(")?;
                write_list(f, ts)?;
                f.write_str(")")
            }
            SubdividedDiamond(s, t) => write!(f, "SD({s},{t})"),
            BooleanCube(n) => write!(f, "Q({n})"),
            Glue(a, b) => write!(f, "glue({a},{b})"),
            Named(NamedPoset::V) => f.write_str("V"),
            Named(NamedPoset::Lambda) => f.write_str("L"),
            Named(NamedPoset::N) => f.write_str("N"),
            Named(NamedPoset::J) => f.write_str("J"),
        }
    }
}

/// Parses a poset expression.
pub fn parse_poset_expression(text: &str) -> Result<PosetExpression> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("'+' or end of input"));
    }
    Ok(e)
}

impl std::str::FromStr for PosetExpression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_poset_expression(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, expected: &str) -> Error {
        Error::Parse {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", byte as char)))
        }
    }

    fn expr(&mut self) -> Result<PosetExpression> {
        let mut left = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            let right = self.term()?;
            left = PosetExpression::parallel(left, right);
        }
        Ok(left)
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn int(&mut self, min: usize) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("an integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let value: usize = text.parse().map_err(|_| Error::Parse {
            offset: start,
            expected: "an integer that fits in 64 bits".into(),
        })?;
        if value < min {
            return Err(Error::Parse {
                offset: start,
                expected: format!("an integer >= {min}"),
            });
        }
        Ok(value)
    }

    fn int_list(&mut self) -> Result<Vec<usize>> {
        self.expect(b'(')?;
        let mut out = vec![self.int(1)?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            out.push(self.int(1)?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn single(&mut self, min: usize) -> Result<usize> {
        self.expect(b'(')?;
        let v = self.int(min)?;
        self.expect(b')')?;
        Ok(v)
    }

    fn term(&mut self) -> Result<PosetExpression> {
        use PosetExpression as E;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        let start = self.pos;
        let name = self.ident().to_string();
        Ok(match name.as_str() {
            "C" => E::Chain(self.single(1)?),
            "A" => E::Antichain(self.single(1)?),
            "Q" => {
                let n = self.single(0)?;
                E::BooleanCube(u32::try_from(n).map_err(|_| Error::Parse {
                    offset: start,
                    expected: "a small cube dimension".into(),
                })?)
            }
            "K" => E::Multipartite(self.int_list()?),
            "CC" => E::chain_composition(self.int_list()?),
            "SD" => {
                self.expect(b'(')?;
                let s = self.int(1)?;
                self.expect(b',')?;
                let t = self.int(1)?;
                self.expect(b')')?;
                E::SubdividedDiamond(s, t)
            }
            "V" => E::Named(NamedPoset::V),
            "L" => E::Named(NamedPoset::Lambda),
            "N" => E::Named(NamedPoset::N),
            "J" => E::Named(NamedPoset::J),
            "glue" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                E::glue(a, b)
            }
            _ => {
                self.pos = start;
                self.skip_ws();
                return Err(self.error(
                    "a poset term (C, A, K, CC, SD, Q, V, L, N, J, glue or '(')",
                ));
            }
        })
    }
}
