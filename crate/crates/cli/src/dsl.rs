//! Variety expressions.
//!
//! ```text
//! expr := term { "x" term }
//! term := "P(" int ")" | "A(" int ")" | "E" | "blowup(" expr ")" | "(" expr ")"
//! ```
//!
//! Whitespace is ignored; `x` is left associative.

use std::fmt;

use toddkit::algebra::DEFAULT_BASIS_LIMIT;
use toddkit::varieties::{
    abelian_variety_named, blow_up_point, product_with_limit, projective_space_named, BlowupPair,
    VarietyModel,
};

/// Optional override of the basis size limit.
pub const BASIS_LIMIT_VAR: &str = "TODDKIT_BASIS_LIMIT";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyExpr {
    Projective(u32),
    Abelian(u32),
    /// `E`, an elliptic curve.
    Named(String),
    Product(Box<VarietyExpr>, Box<VarietyExpr>),
    Blowup(Box<VarietyExpr>),
}

impl fmt::Display for VarietyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyExpr::Projective(n) => write!(f, "P({n})"),
            VarietyExpr::Abelian(g) => write!(f, "A({g})"),
            VarietyExpr::Named(name) => f.write_str(name),
            VarietyExpr::Product(a, b) => {
                if matches!(**b, VarietyExpr::Product(..)) {
                    write!(f, "{a} x ({b})")
                } else {
                    write!(f, "{a} x {b}")
                }
            }
            VarietyExpr::Blowup(a) => write!(f, "blowup({a})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    IntegerOverflow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at line {}, column {}",
            self.message, self.line, self.column
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    P,
    A,
    E,
    Blowup,
    Times,
    Open,
    Close,
    Int(String),
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(src: &str, offset: usize, kind: ParseErrorKind, message: String) -> ParseError {
    let (line, column) = position(src, offset);
    ParseError {
        kind,
        message,
        line,
        column,
    }
}

fn lex(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let mut tokens = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let token = if c.is_ascii_whitespace() {
            i += 1;
            continue;
        } else if src[i..].starts_with("blowup") {
            i += "blowup".len();
            Token::Blowup
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Token::Int(src[start..i].to_string())
        } else {
            i += 1;
            match c {
                b'P' => Token::P,
                b'A' => Token::A,
                b'E' => Token::E,
                b'x' => Token::Times,
                b'(' => Token::Open,
                b')' => Token::Close,
                _ => {
                    let ch = src[start..].chars().next().unwrap();
                    return Err(error_at(
                        src,
                        start,
                        ParseErrorKind::Syntax,
                        format!("unexpected `{ch}`"),
                    ));
                }
            }
        };
        tokens.push((token, start));
    }
    Ok(tokens)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.src.len(), |t| t.1)
    }

    fn fail(&self, message: &str) -> ParseError {
        error_at(
            self.src,
            self.offset(),
            ParseErrorKind::Syntax,
            message.to_string(),
        )
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.fail(&format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<VarietyExpr, ParseError> {
        let mut lhs = self.term()?;
        while self.peek() == Some(&Token::Times) {
            self.pos += 1;
            lhs = VarietyExpr::Product(Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn int_arg(&mut self) -> Result<u32, ParseError> {
        self.expect(Token::Open, "`(`")?;
        let offset = self.offset();
        let Some(Token::Int(digits)) = self.peek().cloned() else {
            return Err(self.fail("expected an integer"));
        };
        self.pos += 1;
        let n = digits.parse::<u32>().map_err(|_| {
            error_at(
                self.src,
                offset,
                ParseErrorKind::IntegerOverflow,
                format!("integer `{digits}` is too large"),
            )
        })?;
        self.expect(Token::Close, "`)`")?;
        Ok(n)
    }

    fn term(&mut self) -> Result<VarietyExpr, ParseError> {
        match self.peek() {
            Some(Token::P) => {
                self.pos += 1;
                Ok(VarietyExpr::Projective(self.int_arg()?))
            }
            Some(Token::A) => {
                self.pos += 1;
                Ok(VarietyExpr::Abelian(self.int_arg()?))
            }
            Some(Token::E) => {
                self.pos += 1;
                Ok(VarietyExpr::Named("E".into()))
            }
            Some(Token::Blowup) => {
                self.pos += 1;
                self.expect(Token::Open, "`(`")?;
                let inner = self.expr()?;
                self.expect(Token::Close, "`)`")?;
                Ok(VarietyExpr::Blowup(Box::new(inner)))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Token::Close, "`)`")?;
                Ok(inner)
            }
            Some(_) => Err(self.fail("expected P(n), A(g), E, blowup(...) or `(`")),
            None => Err(self.fail("unexpected end of input")),
        }
    }
}

pub fn parse(source: &str) -> Result<VarietyExpr, ParseError> {
    let tokens = lex(source)?;
    let mut p = Parser {
        src: source,
        tokens,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(p.fail("trailing input"));
    }
    Ok(e)
}

/// Basis size limit, from the environment when set.
pub fn basis_limit() -> usize {
    std::env::var(BASIS_LIMIT_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BASIS_LIMIT)
}

enum Leaf {
    P(u32),
    A(u32),
}

fn leaves(e: &VarietyExpr, out: &mut Vec<Leaf>) {
    match e {
        VarietyExpr::Projective(n) => out.push(Leaf::P(*n)),
        VarietyExpr::Abelian(g) => out.push(Leaf::A(*g)),
        VarietyExpr::Named(_) => out.push(Leaf::A(1)),
        VarietyExpr::Product(a, b) => {
            leaves(a, out);
            leaves(b, out);
        }
        VarietyExpr::Blowup(a) => leaves(a, out),
    }
}

/// Generator names per leaf: `x1, x2, ...` running across abelian factors,
/// `y` for a line inside a product and `h` for other projective spaces,
/// numbered when a name would repeat.
fn leaf_names(e: &VarietyExpr) -> Vec<Vec<String>> {
    let mut ls = Vec::new();
    leaves(e, &mut ls);
    let in_product = ls.len() > 1;
    let p_name = |n: u32| if n == 1 && in_product { "y" } else { "h" };
    let count = |name: &str| {
        ls.iter()
            .filter(|l| matches!(l, Leaf::P(n) if *n > 0 && p_name(*n) == name))
            .count()
    };
    let (ys, hs) = (count("y"), count("h"));
    let (mut x, mut y, mut h) = (0, 0, 0);
    ls.iter()
        .map(|l| match *l {
            Leaf::A(g) => (0..2 * g)
                .map(|_| {
                    x += 1;
                    format!("x{x}")
                })
                .collect(),
            Leaf::P(0) => Vec::new(),
            Leaf::P(n) => {
                let (base, total, k) = if p_name(n) == "y" {
                    y += 1;
                    ("y", ys, y)
                } else {
                    h += 1;
                    ("h", hs, h)
                };
                vec![if total > 1 {
                    format!("{base}{k}")
                } else {
                    base.to_string()
                }]
            }
        })
        .collect()
}

struct Builder {
    names: std::vec::IntoIter<Vec<String>>,
    limit: usize,
}

impl Builder {
    fn build(&mut self, e: &VarietyExpr) -> toddkit::Result<VarietyModel> {
        Ok(match e {
            VarietyExpr::Projective(n) => {
                let names = self.names.next().unwrap();
                let name = names.first().map_or("h", String::as_str);
                projective_space_named(*n, name)
            }
            VarietyExpr::Abelian(_) | VarietyExpr::Named(_) => {
                let names = self.names.next().unwrap();
                abelian_variety_named(&names, self.limit)?
            }
            VarietyExpr::Product(a, b) => {
                let a = self.build(a)?;
                let b = self.build(b)?;
                product_with_limit(&a, &b, self.limit)?
            }
            VarietyExpr::Blowup(a) => {
                let base = self.build(a)?;
                blow_up_point(&base)?.blown
            }
        }
        .renamed(&e.to_string()))
    }
}

pub fn elaborate(e: &VarietyExpr) -> toddkit::Result<VarietyModel> {
    elaborate_with_limit(e, basis_limit())
}

pub fn elaborate_with_limit(e: &VarietyExpr, limit: usize) -> toddkit::Result<VarietyModel> {
    Builder {
        names: leaf_names(e).into_iter(),
        limit,
    }
    .build(e)
}

/// For a blow-up node, the base and blown-up models with their label
/// correspondence. `None` for any other node.
pub fn elaborate_blowup(e: &VarietyExpr) -> Option<toddkit::Result<BlowupPair>> {
    let VarietyExpr::Blowup(inner) = e else {
        return None;
    };
    let mut b = Builder {
        names: leaf_names(e).into_iter(),
        limit: basis_limit(),
    };
    Some(b.build(inner).and_then(|base| {
        let pair = blow_up_point(&base)?;
        Ok(BlowupPair {
            blown: pair.blown.renamed(&e.to_string()),
            ..pair
        })
    }))
}
