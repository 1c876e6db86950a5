//! Recursive-descent parser for scalar expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? integer)?
//! atom    := number | ident | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-y^2` is `-(y^2)`.

use super::{Expr, Func, Node};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, i));
            i += 1;
            continue;
        }
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' | b'.' => {
                let start = i;
                let mut integral = true;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    integral = false;
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        integral = false;
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let tok = if integral {
                    text.parse::<i64>()
                        .map(Tok::Int)
                        .or_else(|_| text.parse::<f64>().map(Tok::Num))
                        .map_err(|_| err(start, format!("malformed number `{text}`")))?
                } else {
                    Tok::Num(text.parse::<f64>().map_err(|_| err(start, format!("malformed number `{text}`")))?)
                };
                out.push((tok, start));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(err(i, format!("unexpected character `{ch}`")));
            }
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
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
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Node::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Node::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => {
                let n = i32::try_from(n).map_err(|_| err(at, "exponent out of range"))?;
                Ok(Node::Pow(Box::new(base), if negative { -n } else { n }))
            }
            Tok::End => Err(err(at, "expected integer exponent after `^`")),
            _ => Err(err(at, "exponent must be an integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Node> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(v) => Ok(Node::Const(v)),
            Tok::Int(v) => Ok(Node::Const(v as f64)),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    let lp = self.offset();
                    if self.bump() != Tok::LParen {
                        return Err(err(lp, format!("expected `(` after `{name}`")));
                    }
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(Node::Func(func, Box::new(arg)))
                } else if let Some(k) = self.vars.iter().position(|v| *v == name) {
                    Ok(Node::Var(k))
                } else {
                    Err(err(at, format!("unknown identifier `{name}`")))
                }
            }
            Tok::End => Err(err(at, "unexpected end of input, expected an operand")),
            Tok::RParen => Err(err(at, "unexpected `)`")),
            _ => Err(err(at, "expected an operand")),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        let at = self.offset();
        match self.bump() {
            Tok::RParen => Ok(()),
            _ => Err(err(at, "expected `)`")),
        }
    }
}

pub(super) fn parse(src: &str, vars: &[String]) -> Result<Expr> {
    if src.trim().is_empty() {
        return Err(err(0, "empty expression"));
    }
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, vars };
    let root = p.expr()?;
    if *p.peek() != Tok::End {
        let at = p.offset();
        let msg = match p.peek() {
            Tok::RParen => "unbalanced `)`".to_string(),
            t => format!("unexpected token {t:?}"),
        };
        return Err(err(at, msg));
    }
    Ok(Expr {
        vars: vars.to_vec(),
        root,
    })
}
