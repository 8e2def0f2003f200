//! Recursive-descent parser for polynomial / rational-function expressions
//! and integer triples.
//!
//! Grammar (whitespace is stripped before tokenizing, so it is insignificant
//! everywhere):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := ('-' | '+') factor | power
//! power   := atom ('^' INT)*          -- INT is a nonnegative integer literal
//! atom    := literal | 'z' | '(' expr ')'
//! literal := INT | INT 'i' | INT '/' INT 'i' | 'i'
//! ```
//!
//! `i` is a literal suffix, not a variable, and `^` binds tighter than unary
//! minus, so `-z^2` is `-(z^2)`. A digit string directly followed by `i` is
//! one imaginary literal, and `p/qi` is the rational imaginary literal
//! `(p/q)i` (so `1+3/4i` means 1 + (3/4)i); a power applied to it applies to
//! the whole literal. Plain `p/q` is ordinary division, which has the same
//! value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::ntabc::IntTriple;
use crate::ratfun::RationalFunction;
use crate::triple::MeroTriple;

/// Upper bound on `^` exponents; keeps degree growth at desk scale.
const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    /// An imaginary literal from digits, e.g. `2i`. The rational form
    /// `p/qi` is assembled by the parser.
    Imag(BigRational),
    /// The bare literal `i` (kept distinct: `3/i` is division, `3/4i` is not).
    IUnit,
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let stripped: Vec<(char, usize)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (c, i))
        .collect();
    let mut toks = Vec::new();
    let mut k = 0;
    while k < stripped.len() {
        let (c, orig) = stripped[k];
        match c {
            '0'..='9' => {
                let start = k;
                while k < stripped.len() && stripped[k].0.is_ascii_digit() {
                    k += 1;
                }
                let digits: String = stripped[start..k].iter().map(|&(c, _)| c).collect();
                let n: BigInt = digits.parse().expect("digit string");
                if k < stripped.len() && stripped[k].0 == 'i' {
                    k += 1;
                    toks.push((Tok::Imag(BigRational::from_integer(n)), orig));
                } else {
                    toks.push((Tok::Int(n), orig));
                }
            }
            'i' => {
                toks.push((Tok::IUnit, orig));
                k += 1;
            }
            'z' => {
                toks.push((Tok::Z, orig));
                k += 1;
            }
            '+' => {
                toks.push((Tok::Plus, orig));
                k += 1;
            }
            '-' => {
                toks.push((Tok::Minus, orig));
                k += 1;
            }
            '*' => {
                toks.push((Tok::Star, orig));
                k += 1;
            }
            '/' => {
                toks.push((Tok::Slash, orig));
                k += 1;
            }
            '^' => {
                toks.push((Tok::Caret, orig));
                k += 1;
            }
            '(' => {
                toks.push((Tok::LParen, orig));
                k += 1;
            }
            ')' => {
                toks.push((Tok::RParen, orig));
                k += 1;
            }
            other => {
                return Err(Error::Syntax {
                    position: orig,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(toks)
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let toks = tokenize(text)?;
        Ok(Parser {
            toks,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            position: self.here(),
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc + &rhs;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    if rhs.is_zero() {
                        return Err(Error::DivisionByZeroPolynomial);
                    }
                    acc = &acc / &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                let f = self.factor()?;
                Ok(-&f)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let mut base = self.atom()?;
        while matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let e = match self.bump() {
                Some(Tok::Int(n)) => n,
                _ => return Err(self.err("expected a nonnegative integer exponent after '^'")),
            };
            if e.is_negative() {
                return Err(self.err("expected a nonnegative integer exponent after '^'"));
            }
            let e = e
                .to_u32()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| self.err(format!("exponent exceeds {MAX_EXPONENT}")))?;
            base = pow_rf(&base, e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let n = match self.bump() {
                    Some(Tok::Int(n)) => n,
                    _ => unreachable!(),
                };
                // `p/qi` is the single literal (p/q)i
                if matches!(self.peek(), Some(Tok::Slash)) {
                    if let Some(Tok::Imag(q)) = self.peek_at(1) {
                        if !q.is_zero() {
                            let q = q.clone();
                            self.bump();
                            self.bump();
                            let value = GaussianRational::new(
                                BigRational::zero(),
                                BigRational::from_integer(n) / q,
                            );
                            return Ok(RationalFunction::constant(value));
                        }
                    }
                }
                Ok(RationalFunction::constant(GaussianRational::from_rational(
                    BigRational::from_integer(n),
                )))
            }
            Some(Tok::Imag(_)) => {
                let q = match self.bump() {
                    Some(Tok::Imag(q)) => q,
                    _ => unreachable!(),
                };
                Ok(RationalFunction::constant(GaussianRational::new(
                    BigRational::zero(),
                    q,
                )))
            }
            Some(Tok::IUnit) => {
                self.bump();
                Ok(RationalFunction::constant(GaussianRational::i()))
            }
            Some(Tok::Z) => {
                self.bump();
                Ok(RationalFunction::var())
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(self.err("expected ')'")),
                }
            }
            Some(_) => Err(self.err("expected a literal, 'z' or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn pow_rf(base: &RationalFunction, e: u32) -> RationalFunction {
    let num = base.num().pow(e);
    let den = base.den().pow(e);
    RationalFunction::new(num, den).expect("nonzero denominator power")
}

/// Parses an expression into an exact rational function in lowest terms.
pub fn parse_rational(text: &str) -> Result<RationalFunction> {
    let mut p = Parser::new(text)?;
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

/// Parses three expressions into a point on the line a + b + c = 0,
/// rejecting zero coordinates, nonzero sums and constant points.
pub fn parse_mero_triple(a: &str, b: &str, c: &str) -> Result<MeroTriple> {
    let fa = parse_rational(a)?;
    let fb = parse_rational(b)?;
    let fc = parse_rational(c)?;
    let triple = MeroTriple::from_rationals(fa, fb, fc)?;
    if !triple.is_nonconstant() {
        return Err(Error::ConstantPoint);
    }
    Ok(triple)
}

/// Parses a comma-separated list of three nonzero integers with a+b+c = 0.
pub fn parse_int_triple(text: &str) -> Result<IntTriple> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::MalformedInteger(text.to_string()));
    }
    let mut values = Vec::with_capacity(3);
    for part in parts {
        let trimmed = part.trim();
        let n: BigInt = trimmed
            .parse()
            .map_err(|_| Error::MalformedInteger(trimmed.to_string()))?;
        values.push(n);
    }
    IntTriple::new(values[0].clone(), values[1].clone(), values[2].clone())
}
