//! Exact multivariate polynomials.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use super::{Expr, Node};
use crate::error::{Error, Result};

/// Polynomial in `nvars` variables: exponent multi-index to coefficient.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.insert(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.insert(e, 1.0);
        p
    }

    pub fn monomial(coeff: f64, exponents: Vec<u32>) -> Self {
        let mut p = Self::zero(exponents.len());
        p.insert(exponents, coeff);
        p
    }

    /// Parses a polynomial written in the expression grammar over `vars`.
    pub fn parse(src: &str, vars: &[&str]) -> Result<Self> {
        let e = Expr::parse_multi(src, vars)?;
        Self::from_expr(&e)
    }

    pub fn from_expr(e: &Expr) -> Result<Self> {
        from_node(&e.root, e.vars.len()).map_err(|msg| Error::Config(format!("`{e}` is not a polynomial: {msg}")))
    }

    fn insert(&mut self, e: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, f64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), *c);
        }
        out
    }

    pub fn scale(&self, a: f64) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.insert(e.clone(), c * a);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(e, c1 * c2);
            }
        }
        out
    }

    pub fn powi(&self, n: u32) -> Poly {
        (0..n).fold(Poly::constant(self.nvars, 1.0), |acc, _| acc.mul(self))
    }

    /// Exact partial derivative in variable `var`.
    pub fn partial(&self, var: usize) -> Poly {
        assert!(var < self.nvars, "variable index {var} out of range");
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut d = e.clone();
                d[var] -= 1;
                out.insert(d, c * e[var] as f64);
            }
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(k, xi)| xi.powi(*k as i32)).product::<f64>())
            .sum()
    }

    /// Hessian matrix of second partials as polynomials.
    pub fn hessian(&self) -> Vec<Vec<Poly>> {
        (0..self.nvars)
            .map(|i| {
                let di = self.partial(i);
                (0..self.nvars).map(|j| di.partial(j)).collect()
            })
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}")?;
            for (i, k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    k => write!(f, "*x{}^{k}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

fn from_node(n: &Node, nvars: usize) -> std::result::Result<Poly, String> {
    Ok(match n {
        Node::Const(c) => Poly::constant(nvars, *c),
        Node::Var(k) => Poly::var(nvars, *k),
        Node::Neg(a) => from_node(a, nvars)?.scale(-1.0),
        Node::Add(a, b) => from_node(a, nvars)?.add(&from_node(b, nvars)?),
        Node::Sub(a, b) => from_node(a, nvars)?.sub(&from_node(b, nvars)?),
        Node::Mul(a, b) => from_node(a, nvars)?.mul(&from_node(b, nvars)?),
        Node::Div(a, b) => {
            let den = from_node(b, nvars)?;
            if den.degree() > 0 || den.is_zero() {
                return Err("division by a non-constant or zero".into());
            }
            let c = den.terms.values().next().copied().unwrap_or(0.0);
            from_node(a, nvars)?.scale(1.0 / c)
        }
        Node::Pow(a, k) => {
            if *k < 0 {
                return Err("negative exponent".into());
            }
            from_node(a, nvars)?.powi(*k as u32)
        }
        Node::Func(func, _) => return Err(format!("transcendental function `{}`", func.name())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn partial_of_monomial() {
        let q = Poly::parse("x1^2*x2", &["x1", "x2"]).unwrap();
        let d = q.partial(0);
        assert_eq!(d, Poly::monomial(2.0, vec![1, 1]));
    }

    #[test]
    fn partial_of_constant_is_zero() {
        let q = Poly::constant(3, 4.5);
        assert!(q.partial(1).is_zero());
    }

    #[test]
    fn hessian_at_origin() {
        let f = Poly::parse("x1^2+x2^2+x1^3", &["x1", "x2"]).unwrap();
        let h = f.hessian();
        let at = |i: usize, j: usize| h[i][j].eval(&[0.0, 0.0]);
        assert_eq!([at(0, 0), at(0, 1), at(1, 0), at(1, 1)], [2.0, 0.0, 0.0, 2.0]);
        // Second differences of f agree.
        let e = |x: f64, y: f64| f.eval(&[x, y]);
        let h_step = 1e-3;
        let fd = (e(h_step, 0.0) - 2.0 * e(0.0, 0.0) + e(-h_step, 0.0)) / (h_step * h_step);
        assert!((fd - 2.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_transcendental() {
        assert!(Poly::parse("exp(x1)", &["x1"]).is_err());
        assert!(Poly::parse("1/x1", &["x1"]).is_err());
        assert_eq!(Poly::parse("x1/2", &["x1"]).unwrap(), Poly::monomial(0.5, vec![1]));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u32..4, 3), -5i32..5), 0..6).prop_map(|ts| {
            let mut p = Poly::zero(3);
            for (e, c) in ts {
                p.insert(e, c as f64);
            }
            p
        })
    }

    proptest! {
        #[test]
        fn mixed_partials_commute(q in arb_poly(), i in 0usize..3, j in 0usize..3) {
            prop_assert_eq!(q.partial(i).partial(j), q.partial(j).partial(i));
        }
    }
}
