//! Recursive descent parser for polynomial and rational-function
//! expressions.
//!
//! ```text
//! ratfn    := expr ('/' expr)?
//! expr     := '-'? term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' nat)?
//! atom     := rational | ident | '(' expr ')'
//! rational := int ('/' nat)?        -- the '/' form only inside parentheses
//! ident    := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! At the top level a `/` always separates numerator from denominator, so
//! `3/4*x` is `3 / (4x)`; the coefficient `3/4` is written `(3/4)*x`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::polyring::{Poly, RatFn};

#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Poly(Poly),
    RatFn(RatFn),
}

impl Parsed {
    pub fn into_ratfn(self) -> RatFn {
        match self {
            Parsed::Poly(p) => RatFn::from_poly(p),
            Parsed::RatFn(f) => f,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {}", n),
        Tok::Ident(s) => format!("identifier '{}'", s),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::Slash => "'/'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().expect("digits")), start));
                continue;
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'/' => Tok::Slash,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character '{}'", ch),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Poly> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(k) => {
                let Some(k) = k.to_u32() else {
                    return self.error("exponent too large");
                };
                self.bump();
                Ok(base.pow(k))
            }
            _ => self.error("exponent must be a nonnegative integer literal"),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let mut q = BigRational::from_integer(n);
                if self.depth > 0 && *self.peek() == Tok::Slash {
                    self.bump();
                    match self.peek().clone() {
                        Tok::Int(d) if !d.is_zero() => {
                            self.bump();
                            q /= BigRational::from_integer(d);
                        }
                        Tok::Int(_) => return self.error("zero denominator in rational literal"),
                        _ => return self.error("expected a natural number after '/'"),
                    }
                }
                Ok(Poly::constant(self.nvars(), q))
            }
            Tok::Ident(name) => {
                self.bump();
                match self.names.iter().position(|n| *n == name) {
                    Some(j) => Ok(Poly::var(self.nvars(), j)),
                    None => Err(Error::UnknownIdent { offset, name }),
                }
            }
            Tok::LParen => {
                self.bump();
                self.depth += 1;
                let inner = self.expr()?;
                self.depth -= 1;
                if *self.peek() != Tok::RParen {
                    return self.error(format!("expected ')', found {}", describe(self.peek())));
                }
                self.bump();
                Ok(inner)
            }
            t => self.error(format!("expected an operand, found {}", describe(&t))),
        }
    }
}

/// Parses `text` over the variables `names`, declared order.
pub fn parse_expr(text: &str, names: &[String]) -> Result<Parsed> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        depth: 0,
        names,
    };
    let num = p.expr()?;
    let parsed = if *p.peek() == Tok::Slash {
        p.bump();
        let den_offset = p.offset();
        let den = p.expr()?;
        if den.is_zero() {
            return Err(Error::Syntax {
                offset: den_offset,
                message: "denominator is zero".into(),
            });
        }
        Parsed::RatFn(RatFn::new(num, den)?)
    } else {
        Parsed::Poly(num)
    };
    match p.peek() {
        Tok::End => Ok(parsed),
        Tok::Slash => p.error("at most one top-level '/' is allowed"),
        t => p.error(format!("unexpected {}", describe(t))),
    }
}

/// `[A-Za-z][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
