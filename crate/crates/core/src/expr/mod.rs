//! User-supplied scalar functions.
//!
//! Univariate analytic expressions are differentiated to any order with
//! truncated Taylor arithmetic ([`Jet`]); multivariate inputs are restricted
//! to polynomials ([`Poly`]) and differentiated symbolically.

mod jet;
mod parse;
mod poly;

use std::fmt;

pub use jet::Jet;
pub use poly::Poly;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        match name {
            "exp" => Some(Func::Exp),
            "log" => Some(Func::Log),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Func(Func, Box<Node>),
}

/// Parsed expression together with its variable names.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    vars: Vec<String>,
    root: Node,
}

impl Expr {
    /// Parses a univariate expression in the variable `var`.
    pub fn parse(src: &str, var: &str) -> Result<Self> {
        parse::parse(src, &[var.to_string()])
    }

    pub fn parse_multi(src: &str, vars: &[&str]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        parse::parse(src, &vars)
    }

    pub fn constant(var: &str, c: f64) -> Self {
        Self {
            vars: vec![var.to_string()],
            root: Node::Const(c),
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Taylor coefficients through `order` at `x0`.
    pub fn jet(&self, x0: f64, order: usize) -> Result<Jet> {
        if self.vars.len() != 1 {
            return Err(Error::Config(format!(
                "jets need a univariate expression, `{self}` has {} variables",
                self.vars.len()
            )));
        }
        let seed = Jet::variable(x0, order);
        self.eval_jet(&self.root, &seed)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.jet(x, 0)?.value())
    }

    fn eval_jet(&self, n: &Node, seed: &Jet) -> Result<Jet> {
        let order = seed.order();
        let x0 = seed.basepoint;
        let out = match n {
            Node::Const(c) => Jet::constant(x0, *c, order),
            Node::Var(_) => seed.clone(),
            Node::Neg(a) => self.eval_jet(a, seed)?.map(|v| -v),
            Node::Add(a, b) => self.eval_jet(a, seed)?.zip(&self.eval_jet(b, seed)?, |x, y| x + y),
            Node::Sub(a, b) => self.eval_jet(a, seed)?.zip(&self.eval_jet(b, seed)?, |x, y| x - y),
            Node::Mul(a, b) => self.eval_jet(a, seed)?.mul(&self.eval_jet(b, seed)?),
            Node::Div(a, b) => {
                let den = self.eval_jet(b, seed)?;
                if den.value() == 0.0 {
                    return Err(self.domain(n, "division by zero"));
                }
                self.eval_jet(a, seed)?.div(&den)
            }
            Node::Pow(a, k) => {
                let base = self.eval_jet(a, seed)?;
                if *k >= 0 {
                    base.powi(*k as u32)
                } else {
                    if base.value() == 0.0 {
                        return Err(self.domain(n, "negative power of zero"));
                    }
                    Jet::constant(x0, 1.0, order).div(&base.powi(k.unsigned_abs()))
                }
            }
            Node::Func(func, a) => {
                let arg = self.eval_jet(a, seed)?;
                match func {
                    Func::Exp => arg.exp(),
                    Func::Log => {
                        if arg.value() <= 0.0 {
                            return Err(self.domain(n, "logarithm of a non-positive value"));
                        }
                        arg.ln()
                    }
                    Func::Sin => arg.sin_cos().0,
                    Func::Cos => arg.sin_cos().1,
                }
            }
        };
        if out.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(self.domain(n, "non-finite value"));
        }
        Ok(out)
    }

    fn domain(&self, n: &Node, message: &str) -> Error {
        Error::Eval {
            node: NodeDisplay { node: n, vars: &self.vars }.to_string(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        NodeDisplay {
            node: &self.root,
            vars: &self.vars,
        }
        .fmt(f)
    }
}

struct NodeDisplay<'a> {
    node: &'a Node,
    vars: &'a [String],
}

fn precedence(n: &Node) -> u8 {
    match n {
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) => 2,
        Node::Neg(..) => 3,
        Node::Pow(..) => 4,
        Node::Const(c) if *c < 0.0 => 3,
        _ => 5,
    }
}

impl NodeDisplay<'_> {
    fn child(&self, n: &Node, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = NodeDisplay { node: n, vars: self.vars };
        if precedence(n) < min {
            write!(f, "({d})")
        } else {
            write!(f, "{d}")
        }
    }
}

impl fmt::Display for NodeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Node::Const(c) => write!(f, "{c:?}"),
            Node::Var(k) => write!(f, "{}", self.vars[*k]),
            Node::Neg(a) => {
                write!(f, "-")?;
                self.child(a, 3, f)
            }
            Node::Add(a, b) => {
                self.child(a, 1, f)?;
                write!(f, " + ")?;
                self.child(b, 2, f)
            }
            Node::Sub(a, b) => {
                self.child(a, 1, f)?;
                write!(f, " - ")?;
                self.child(b, 2, f)
            }
            Node::Mul(a, b) => {
                self.child(a, 2, f)?;
                write!(f, "*")?;
                self.child(b, 3, f)
            }
            Node::Div(a, b) => {
                self.child(a, 2, f)?;
                write!(f, "/")?;
                self.child(b, 3, f)
            }
            Node::Pow(a, k) => {
                self.child(a, 5, f)?;
                write!(f, "^{k}")
            }
            Node::Func(func, a) => write!(f, "{}({})", func.name(), NodeDisplay { node: a, vars: self.vars }),
        }
    }
}
