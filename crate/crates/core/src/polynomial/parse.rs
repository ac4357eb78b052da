//! Text grammar for polynomials: identifiers `[a-z][a-z0-9_]*`, integer and
//! `p/q` literals, `+ - * ^`, parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Polynomial, VarOrder};
use crate::error::{CadError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Dot,
    Rel(&'static str),
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push(Token { tok: Tok::Int(n), pos: start });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            if !super::is_identifier(word) {
                return Err(CadError::Parse { pos: start, msg: format!("invalid identifier `{word}`") });
            }
            out.push(Token { tok: Tok::Ident(word.to_string()), pos: start });
            continue;
        }
        let two = if i + 1 < bytes.len() { &text[i..i + 2] } else { "" };
        let (tok, len) = match two {
            "<=" => (Tok::Rel("<="), 2),
            ">=" => (Tok::Rel(">="), 2),
            "!=" => (Tok::Rel("!="), 2),
            "==" => (Tok::Rel("="), 2),
            _ => match c {
                '+' => (Tok::Plus, 1),
                '-' => (Tok::Minus, 1),
                '*' => (Tok::Star, 1),
                '/' => (Tok::Slash, 1),
                '^' => (Tok::Caret, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '.' => (Tok::Dot, 1),
                '=' => (Tok::Rel("="), 1),
                '<' => (Tok::Rel("<"), 1),
                '>' => (Tok::Rel(">"), 1),
                _ => return Err(CadError::Parse { pos: start, msg: format!("unexpected character `{c}`") }),
            },
        };
        out.push(Token { tok, pos: start });
        i += len;
    }
    Ok(out)
}

/// Recursive-descent parser over a token slice. Shared with the formula
/// parser, which embeds polynomial expressions in atoms.
pub(crate) struct PolyParser<'a> {
    pub toks: &'a [Token],
    pub pos: usize,
    pub order: &'a VarOrder,
    pub end: usize,
}

impl<'a> PolyParser<'a> {
    pub fn new(toks: &'a [Token], order: &'a VarOrder, end: usize) -> Self {
        PolyParser { toks, pos: 0, order, end }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.pos).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(CadError::Parse { pos: self.here(), msg: msg.into() })
    }

    pub fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| CadError::Parse { pos: self.here(), msg: "exponent too large".into() })?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Polynomial> {
        let n = self.order.len();
        match self.peek().cloned() {
            Some(Tok::Int(a)) => {
                self.pos += 1;
                if let Some(Tok::Slash) = self.peek() {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(b)) => {
                            self.pos += 1;
                            if b.is_zero() {
                                return self.err("zero denominator");
                            }
                            Ok(Polynomial::constant(n, BigRational::new(a, b)))
                        }
                        _ => self.err("expected an integer denominator"),
                    }
                } else {
                    Ok(Polynomial::constant(n, BigRational::from_integer(a)))
                }
            }
            Some(Tok::Ident(name)) => {
                let v = match self.order.index_of(&name) {
                    Ok(v) => v,
                    Err(_) => return self.err(format!("unknown variable `{name}`")),
                };
                self.pos += 1;
                Ok(Polynomial::var(n, v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a polynomial over `order`.
pub fn parse_polynomial(text: &str, order: &VarOrder) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    let mut parser = PolyParser::new(&toks, order, text.len());
    let p = parser.expr()?;
    if parser.pos != toks.len() {
        return Err(CadError::Parse { pos: parser.here(), msg: "trailing input".into() });
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_literals() {
        let o = VarOrder::new(&["y", "x"]).unwrap();
        let a = parse_polynomial("-x^2 + 3/4*y - (x - y)*2", &o).unwrap();
        let b = parse_polynomial("-1*x*x + 3/4*y - 2*x + 2*y", &o).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        let o = VarOrder::new(&["x"]).unwrap();
        match parse_polynomial("x + w", &o) {
            Err(CadError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_polynomial("x^", &o).is_err());
        assert!(parse_polynomial("1/0", &o).is_err());
        assert!(parse_polynomial("(x", &o).is_err());
        assert!(parse_polynomial("x x", &o).is_err());
    }
}
