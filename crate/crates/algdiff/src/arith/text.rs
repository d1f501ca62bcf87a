//! Text and JSON encodings for polynomials.
//!
//! Text grammar: integer coefficients, variables `X` and `Y`, operators
//! `+ - * ^`, parentheses; e.g. `Y^2 - X*(1+X)`. JSON carries scalars as
//! decimal strings (`"num/den"` for rationals) so no integer-width
//! assumptions leak into the format.

use crate::arith::{BiPoly, FieldSpec, Scalar, UniPoly};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// JSON forms

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiPolyJson {
    pub field: FieldJson,
    pub coeffs: Vec<Vec<String>>,
}

pub fn field_to_json(field: FieldSpec) -> FieldJson {
    match field {
        FieldSpec::Prime { modulus } => FieldJson {
            kind: "prime".to_string(),
            modulus: Some(modulus),
        },
        FieldSpec::Rational => FieldJson {
            kind: "rational".to_string(),
            modulus: None,
        },
    }
}

pub fn field_from_json(j: &FieldJson) -> Result<FieldSpec> {
    match j.kind.as_str() {
        "prime" => {
            let m = j
                .modulus
                .ok_or_else(|| Error::Parse("prime field needs a modulus".to_string()))?;
            FieldSpec::prime(m)
        }
        "rational" => Ok(FieldSpec::rational()),
        other => Err(Error::Parse(format!("unknown field kind {other:?}"))),
    }
}

pub fn bipoly_to_json(p: &BiPoly) -> BiPolyJson {
    BiPolyJson {
        field: field_to_json(p.field),
        coeffs: p
            .rows()
            .iter()
            .map(|row| row.iter().map(|c| p.field.format_scalar(c)).collect())
            .collect(),
    }
}

pub fn bipoly_from_json(j: &BiPolyJson) -> Result<BiPoly> {
    let field = field_from_json(&j.field)?;
    let rows = j
        .coeffs
        .iter()
        .map(|row| row.iter().map(|s| field.parse_scalar(s)).collect())
        .collect::<Result<Vec<Vec<Scalar>>>>()?;
    Ok(BiPoly::new(field, rows))
}

pub fn unipoly_to_json(p: &UniPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| p.field.format_scalar(c)).collect()
}

pub fn unipoly_from_json(field: FieldSpec, coeffs: &[String]) -> Result<UniPoly> {
    Ok(UniPoly::new(
        field,
        coeffs
            .iter()
            .map(|s| field.parse_scalar(s))
            .collect::<Result<Vec<_>>>()?,
    ))
}

// ---------------------------------------------------------------------------
// Expression parser

/// Parses the polynomial text grammar into a bivariate polynomial over
/// `field`. Univariate input is the special case that never mentions `Y`.
pub fn parse_bipoly(field: FieldSpec, input: &str) -> Result<BiPoly> {
    let mut p = Parser {
        field,
        tokens: tokenize(input)?,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input at token {:?}",
            p.tokens[p.pos]
        )));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Int(s));
            }
            'X' | 'x' => {
                chars.next();
                toks.push(Tok::X);
            }
            'Y' | 'y' => {
                chars.next();
                toks.push(Tok::Y);
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        }
    }
    Ok(toks)
}

struct Parser {
    field: FieldSpec,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negate = true;
        } else if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(op) = self.peek() {
            match op {
                Tok::Plus => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Tok::Minus => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let exp = match self.peek() {
                Some(Tok::Int(s)) => {
                    let e: u32 = s
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent {s:?}")))?;
                    self.pos += 1;
                    e
                }
                other => return Err(Error::Parse(format!("expected exponent, got {other:?}"))),
            };
            let mut acc = BiPoly::constant(self.field, self.field.one());
            for _ in 0..exp {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly> {
        match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                self.pos += 1;
                Ok(BiPoly::constant(self.field, self.field.parse_scalar(&s)?))
            }
            Some(Tok::X) => {
                self.pos += 1;
                Ok(BiPoly::monomial(self.field, self.field.one(), 1, 0))
            }
            Some(Tok::Y) => {
                self.pos += 1;
                Ok(BiPoly::monomial(self.field, self.field.one(), 0, 1))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::Parse("unbalanced parentheses".to_string()));
                }
                self.pos += 1;
                Ok(e)
            }
            other => Err(Error::Parse(format!("expected an atom, got {other:?}"))),
        }
    }
}
