//! Polynomial expressions over named cohomology classes, e.g.
//! `c1*x1*x2`, `(c1^2 + c2)/12` or `2*c2 - c1^2`.
//!
//! ```text
//! sum    := ["-"] term { ("+" | "-") term }
//! term   := power { ("*" | "/") power }      (divisors must be constants)
//! power  := atom [ "^" integer ]
//! atom   := integer | identifier | "(" sum ")"
//! ```

use num::{BigInt, Zero};

use crate::algebra::{AlgebraElement, GradedAlgebra};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum PolyExpr {
    Number(Rational),
    Var(String),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Div(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

impl PolyExpr {
    /// Value of an expression with no variables.
    pub fn constant(&self) -> Option<Rational> {
        Some(match self {
            PolyExpr::Number(q) => q.clone(),
            PolyExpr::Var(_) => return None,
            PolyExpr::Neg(a) => -a.constant()?,
            PolyExpr::Add(a, b) => a.constant()? + b.constant()?,
            PolyExpr::Sub(a, b) => a.constant()? - b.constant()?,
            PolyExpr::Mul(a, b) => a.constant()? * b.constant()?,
            PolyExpr::Div(a, b) => {
                let d = b.constant()?;
                if d.is_zero() {
                    return None;
                }
                a.constant()? / d
            }
            PolyExpr::Pow(a, e) => num::pow(a.constant()?, *e as usize),
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, what: &str) -> Error {
        Error::ExprError(format!("{what} at offset {}", self.pos))
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<PolyExpr> {
        let mut lhs = if self.eat(b'-') {
            PolyExpr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.power()?;
        loop {
            if self.eat(b'*') {
                lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else if self.eat(b'/') {
                let rhs = self.power()?;
                match rhs.constant() {
                    Some(d) if !d.is_zero() => {}
                    Some(_) => return Err(self.error("division by zero")),
                    None => return Err(self.error("divisor must be a constant")),
                }
                lhs = PolyExpr::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<PolyExpr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected exponent"));
            }
            let e: u32 = digits
                .parse()
                .map_err(|_| self.error("exponent too large"))?;
            return Ok(PolyExpr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<PolyExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(b')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                let n: BigInt = digits.parse().map_err(|_| self.error("bad number"))?;
                Ok(PolyExpr::Number(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric()
                        || matches!(self.src[self.pos], b'_' | b'\''))
                {
                    self.pos += 1;
                }
                Ok(PolyExpr::Var(
                    String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                ))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

pub fn parse(text: &str) -> Result<PolyExpr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.sum()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

/// Evaluates in `algebra`, resolving identifiers through `resolve`.
pub fn evaluate(
    expr: &PolyExpr,
    algebra: &GradedAlgebra,
    resolve: &mut dyn FnMut(&str) -> Result<AlgebraElement>,
) -> Result<AlgebraElement> {
    Ok(match expr {
        PolyExpr::Number(q) => algebra.unit().scale(q),
        PolyExpr::Var(name) => resolve(name)?,
        PolyExpr::Neg(a) => evaluate(a, algebra, resolve)?.neg(),
        PolyExpr::Add(a, b) => {
            evaluate(a, algebra, resolve)?.add(&evaluate(b, algebra, resolve)?)?
        }
        PolyExpr::Sub(a, b) => {
            evaluate(a, algebra, resolve)?.sub(&evaluate(b, algebra, resolve)?)?
        }
        PolyExpr::Mul(a, b) => {
            evaluate(a, algebra, resolve)?.mul(&evaluate(b, algebra, resolve)?)?
        }
        PolyExpr::Div(a, b) => {
            let d = b
                .constant()
                .ok_or_else(|| Error::ExprError("divisor must be a constant".into()))?;
            evaluate(a, algebra, resolve)?.scale(&d.recip())
        }
        PolyExpr::Pow(a, e) => evaluate(a, algebra, resolve)?.pow(*e),
    })
}
