//! Term algebra for scalar fields on coordinate space.
//!
//! A [`Field`] is a finite sum of terms
//! `c * x^a * f_{i1}^{(d1)}(x_{k1}) * ... ` where each `f_i` is a univariate
//! user function. Sums, products and coordinate partials stay inside the
//! algebra, so Christoffel symbols can be differentiated exactly to any order.

use std::cell::RefCell;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::expr::{Expr, Poly};

/// `f_func^{(order)}` evaluated at coordinate `coord`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncFactor {
    pub func: u16,
    pub order: u16,
    pub coord: u16,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub powers: Vec<u16>,
    /// Sorted; repeated factors encode powers of the same derivative.
    pub factors: Vec<FuncFactor>,
}

impl Monomial {
    fn one(dim: usize) -> Self {
        Self {
            powers: vec![0; dim],
            factors: Vec::new(),
        }
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let powers = self.powers.iter().zip(&other.powers).map(|(a, b)| a + b).collect();
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        factors.sort_unstable();
        Monomial { powers, factors }
    }

    /// Coordinates this monomial depends on.
    pub fn coords(&self) -> impl Iterator<Item = usize> + '_ {
        self.powers
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0)
            .map(|(k, _)| k)
            .chain(self.factors.iter().map(|f| f.coord as usize))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    dim: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl Field {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut f = Self::zero(dim);
        f.push(Monomial::one(dim), c);
        f
    }

    /// The coordinate function `x_k`.
    pub fn coord(dim: usize, k: usize) -> Self {
        Self::coord_pow(dim, k, 1)
    }

    pub fn coord_pow(dim: usize, k: usize, n: u16) -> Self {
        let mut m = Monomial::one(dim);
        m.powers[k] = n;
        let mut f = Self::zero(dim);
        f.push(m, 1.0);
        f
    }

    /// `f_func^{(order)}(x_coord)`.
    pub fn func(dim: usize, func: usize, order: usize, coord: usize) -> Self {
        let mut m = Monomial::one(dim);
        m.factors.push(FuncFactor {
            func: func as u16,
            order: order as u16,
            coord: coord as u16,
        });
        let mut f = Self::zero(dim);
        f.push(m, 1.0);
        f
    }

    /// Polynomial in the first `q.nvars()` coordinates.
    pub fn from_poly(dim: usize, q: &Poly) -> Self {
        let mut f = Self::zero(dim);
        for (e, c) in q.terms() {
            let mut m = Monomial::one(dim);
            for (k, p) in e.iter().enumerate() {
                m.powers[k] = *p as u16;
            }
            f.push(m, c);
        }
        f
    }

    fn push(&mut self, m: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn add_assign(&mut self, other: &Field) {
        for (m, c) in &other.terms {
            self.push(m.clone(), *c);
        }
    }

    pub fn add_scaled(&mut self, a: f64, other: &Field) {
        for (m, c) in &other.terms {
            self.push(m.clone(), a * c);
        }
    }

    pub fn add(&self, other: &Field) -> Field {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Field) -> Field {
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        out
    }

    pub fn scale(&self, a: f64) -> Field {
        let mut out = Field::zero(self.dim);
        out.add_scaled(a, self);
        out
    }

    pub fn mul(&self, other: &Field) -> Field {
        let mut out = Field::zero(self.dim);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.push(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Exact partial derivative in coordinate `l`.
    pub fn partial(&self, l: usize) -> Field {
        let mut out = Field::zero(self.dim);
        for (m, c) in &self.terms {
            let p = m.powers[l];
            if p > 0 {
                let mut d = m.clone();
                d.powers[l] -= 1;
                out.push(d, c * p as f64);
            }
            for (k, f) in m.factors.iter().enumerate() {
                if f.coord as usize == l {
                    let mut d = m.clone();
                    d.factors[k].order += 1;
                    d.factors.sort_unstable();
                    out.push(d, *c);
                }
            }
        }
        out
    }

    /// Whether any term involves coordinate `l`.
    pub fn depends_on(&self, l: usize) -> bool {
        self.terms.keys().any(|m| m.coords().any(|k| k == l))
    }

    /// Largest coordinate index appearing in any term.
    pub fn max_coord(&self) -> Option<usize> {
        self.terms.keys().flat_map(|m| m.coords().collect::<Vec<_>>()).max()
    }

    pub fn eval(&self, ev: &Evaluator<'_>) -> Result<f64> {
        let mut sum = 0.0;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (k, p) in m.powers.iter().enumerate() {
                if *p > 0 {
                    v *= ev.point[k].powi(*p as i32);
                }
            }
            for f in &m.factors {
                v *= ev.derivative(f)?;
            }
            sum += v;
        }
        Ok(sum)
    }
}

/// Evaluates fields at a point, caching derivatives of the user functions.
pub struct Evaluator<'a> {
    funcs: &'a [Expr],
    point: &'a [f64],
    cache: RefCell<HashMap<(u16, u16), Vec<f64>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(funcs: &'a [Expr], point: &'a [f64]) -> Self {
        Self {
            funcs,
            point,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn point(&self) -> &[f64] {
        self.point
    }

    fn derivative(&self, f: &FuncFactor) -> Result<f64> {
        let key = (f.func, f.coord);
        let order = f.order as usize;
        if let Some(d) = self.cache.borrow().get(&key) {
            if order < d.len() {
                return Ok(d[order]);
            }
        }
        let want = (order + 4).max(8);
        let jet = self.funcs[f.func as usize].jet(self.point[f.coord as usize], want)?;
        let d = jet.derivatives();
        let v = d[order];
        self.cache.borrow_mut().insert(key, d);
        Ok(v)
    }
}
