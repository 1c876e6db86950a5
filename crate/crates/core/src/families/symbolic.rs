//! Sparse symbolic tensors over [`Field`] entries: Christoffel symbols and
//! the mixed curvature tensors `R_{ijk}^l_{;j_1...j_ν}` derived from them.

use std::collections::BTreeMap;

use super::field::{Evaluator, Field};
use crate::error::Result;
use crate::tensor::{Tensor, Variance};

/// `Γ_ij^k` as exact term lists, keyed `(i, j, k)`; both `(i, j)` orders are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TermChristoffel {
    dim: usize,
    entries: BTreeMap<(usize, usize, usize), Field>,
}

impl TermChristoffel {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub(crate) fn add(&mut self, i: usize, j: usize, k: usize, f: &Field) {
        let e = self.entries.entry((i, j, k)).or_insert_with(|| Field::zero(self.dim));
        e.add_assign(f);
        if e.is_zero() {
            self.entries.remove(&(i, j, k));
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Field)> {
        self.entries.iter()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<&Field> {
        self.entries.get(&(i, j, k))
    }

    /// Entries grouped by their upper index: `k -> [(i, j, Γ_ij^k)]`.
    fn by_upper(&self) -> Vec<Vec<(usize, usize, &Field)>> {
        let mut out = vec![Vec::new(); self.dim];
        for (&(i, j, k), f) in &self.entries {
            out[k].push((i, j, f));
        }
        out
    }

    /// Entries grouped by their second lower index: `j -> [(i, k, Γ_ij^k)]`.
    fn by_second(&self) -> Vec<Vec<(usize, usize, &Field)>> {
        let mut out = vec![Vec::new(); self.dim];
        for (&(i, j, k), f) in &self.entries {
            out[j].push((i, k, f));
        }
        out
    }
}

/// Sparse tensor of fields with one contravariant slot at `upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    dim: usize,
    rank: usize,
    upper: usize,
    entries: BTreeMap<Vec<u8>, Field>,
}

impl SymTensor {
    fn new(dim: usize, rank: usize, upper: usize) -> Self {
        Self {
            dim,
            rank,
            upper,
            entries: BTreeMap::new(),
        }
    }

    fn accumulate(&mut self, idx: Vec<u8>, scale: f64, f: &Field) {
        self.entries.entry(idx).or_insert_with(|| Field::zero(self.dim)).add_scaled(scale, f);
    }

    fn prune(&mut self) {
        self.entries.retain(|_, f| !f.is_zero());
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Position of the contravariant slot.
    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[u8], &Field)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `R_{ijk}^l = ∂_iΓ_jk^l − ∂_jΓ_ik^l + Γ_in^l Γ_jk^n − Γ_jn^l Γ_ik^n`.
    pub fn curvature(gamma: &TermChristoffel) -> SymTensor {
        let m = gamma.dim();
        let mut r = SymTensor::new(m, 4, 3);
        for (&(a, k, l), f) in gamma.entries() {
            for i in 0..m {
                let d = f.partial(i);
                if d.is_zero() {
                    continue;
                }
                r.accumulate(idx(&[i, a, k, l]), 1.0, &d);
                r.accumulate(idx(&[a, i, k, l]), -1.0, &d);
            }
        }
        let by_upper = gamma.by_upper();
        for (&(i, n, l), a) in gamma.entries() {
            for &(j, k, b) in &by_upper[n] {
                let ab = a.mul(b);
                r.accumulate(idx(&[i, j, k, l]), 1.0, &ab);
                r.accumulate(idx(&[j, i, k, l]), -1.0, &ab);
            }
        }
        r.prune();
        r
    }

    /// Covariant derivative with the new lowered slot appended last:
    /// `T_{...;l} = ∂_l T_{...} − Σ_lower Γ_{l a}^r T(..r..) + Γ_{l r}^{b} T(..r..)`
    /// where the last term acts on the contravariant slot.
    pub fn covariant_derivative(&self, gamma: &TermChristoffel) -> SymTensor {
        let m = self.dim;
        let mut out = SymTensor::new(m, self.rank + 1, self.upper);
        let by_upper = gamma.by_upper();
        let by_second = gamma.by_second();
        for (b, t) in &self.entries {
            let mut key = b.clone();
            key.push(0);
            for l in 0..m {
                let d = t.partial(l);
                if !d.is_zero() {
                    key[self.rank] = l as u8;
                    out.accumulate(key.clone(), 1.0, &d);
                }
            }
            for s in 0..self.rank {
                let r = b[s] as usize;
                if s == self.upper {
                    for &(l, n, g) in &by_second[r] {
                        let mut k = key.clone();
                        k[s] = n as u8;
                        k[self.rank] = l as u8;
                        out.accumulate(k, 1.0, &g.mul(t));
                    }
                } else {
                    for &(l, a, g) in &by_upper[r] {
                        let mut k = key.clone();
                        k[s] = a as u8;
                        k[self.rank] = l as u8;
                        out.accumulate(k, -1.0, &g.mul(t));
                    }
                }
            }
        }
        out.prune();
        out
    }

    /// Dense mixed tensor at the evaluator's point.
    pub fn eval(&self, ev: &Evaluator<'_>) -> Result<Tensor> {
        let mut t = Tensor::zeros(self.dim, self.rank);
        let mut ix = vec![0usize; self.rank];
        for (k, f) in &self.entries {
            for (a, b) in ix.iter_mut().zip(k) {
                *a = *b as usize;
            }
            t.set(&ix, f.eval(ev)?);
        }
        let mut var = vec![Variance::Covariant; self.rank];
        var[self.upper] = Variance::Contravariant;
        t.with_variance(var)
    }
}

fn idx(i: &[usize]) -> Vec<u8> {
    i.iter().map(|&x| x as u8).collect()
}
