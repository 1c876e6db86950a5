//! The seven metric families with exact metrics and closed-form Christoffel
//! symbols.
//!
//! Every family lives on `R^m` with a fixed coordinate order in which the
//! Christoffel symbols are triangular: `Γ_ij^k` vanishes unless
//! `k > max(i, j)` and only depends on `x_1..x_{k-1}`.

mod field;
mod symbolic;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use field::{Evaluator, Field, FuncFactor, Monomial};
pub use symbolic::{SymTensor, TermChristoffel};

use crate::error::{Error, Result};
use crate::expr::{Expr, Poly};
use crate::tensor::{MetricAtPoint, Tensor, Variance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    M0,
    M1,
    M2,
    M3,
    M4,
    M5,
    M6,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Unparsed family parameters, as read from a JSON config.
///
/// ```json
/// {"family": "M6", "s": 3, "f": ["-(u^4)/6", "-(u^4)/6", "-(u^4)/6"]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Params {
    /// `f = [f0, f1, ..., fk]` in the variable `y`.
    M0 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
        f: Vec<String>,
    },
    M1 { f: String },
    /// Upper triangle of `ψ`, row-major, polynomials in `x1..xp`.
    M2 { p: usize, psi: Vec<String> },
    /// Polynomial in `x1..xp`.
    M3 { p: usize, f: String },
    /// `f(y)` where `y` names the coordinate `x2`.
    M4 { f: String },
    M5 { p: usize, f: String },
    /// `f_1..f_s` in the variable `u`.
    M6 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<usize>,
        f: Vec<String>,
    },
}

impl Params {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn family(&self) -> Family {
        match self {
            Params::M0 { .. } => Family::M0,
            Params::M1 { .. } => Family::M1,
            Params::M2 { .. } => Family::M2,
            Params::M3 { .. } => Family::M3,
            Params::M4 { .. } => Family::M4,
            Params::M5 { .. } => Family::M5,
            Params::M6 { .. } => Family::M6,
        }
    }
}

/// Parsed family data.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyData {
    M0 { f: Vec<Expr> },
    M1 { f: Expr },
    M2 { p: usize, psi: Vec<Vec<Poly>> },
    M3 { p: usize, f: Poly },
    M4 { f: Expr },
    M5 { p: usize, f: Expr },
    M6 { f: Vec<Expr> },
}

/// A family instance: metric components and Christoffel symbols as exact
/// term lists over the coordinates.
pub struct ManifoldSpec {
    params: Params,
    data: FamilyData,
    dim: usize,
    signature: (usize, usize),
    coord_names: Vec<String>,
    funcs: Vec<Expr>,
    metric: BTreeMap<(usize, usize), Field>,
    christoffel: TermChristoffel,
    warnings: Vec<String>,
    // Symbolic mixed curvature tensors R, ∇R, ... built on demand.
    curvature_cache: Mutex<Vec<Arc<SymTensor>>>,
}

impl fmt::Debug for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ManifoldSpec")
            .field("family", &self.family())
            .field("dim", &self.dim)
            .field("signature", &self.signature)
            .field("coords", &self.coord_names)
            .field("warnings", &self.warnings)
            .finish()
    }
}

impl Clone for ManifoldSpec {
    fn clone(&self) -> Self {
        Self {
            params: self.params.clone(),
            data: self.data.clone(),
            dim: self.dim,
            signature: self.signature,
            coord_names: self.coord_names.clone(),
            funcs: self.funcs.clone(),
            metric: self.metric.clone(),
            christoffel: self.christoffel.clone(),
            warnings: self.warnings.clone(),
            curvature_cache: Mutex::new(self.curvature_cache.lock().map(|c| c.clone()).unwrap_or_default()),
        }
    }
}

/// Accumulates metric and Christoffel entries during a build.
struct Builder {
    dim: usize,
    metric: BTreeMap<(usize, usize), Field>,
    gamma: TermChristoffel,
}

impl Builder {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            metric: BTreeMap::new(),
            gamma: TermChristoffel::new(dim),
        }
    }

    fn g(&mut self, i: usize, j: usize, f: Field) {
        let key = (i.min(j), i.max(j));
        self.metric.entry(key).or_insert_with(|| Field::zero(self.dim)).add_assign(&f);
    }

    fn gc(&mut self, i: usize, j: usize, c: f64) {
        let f = Field::constant(self.dim, c);
        self.g(i, j, f);
    }

    /// Adds `f` to `Γ_ij^k`, and to `Γ_ji^k` when `i != j`.
    fn gamma(&mut self, i: usize, j: usize, k: usize, f: &Field) {
        self.gamma.add(i, j, k, f);
        if i != j {
            self.gamma.add(j, i, k, f);
        }
    }
}

fn parse_all(srcs: &[String], var: &str) -> Result<Vec<Expr>> {
    srcs.iter().map(|s| Expr::parse(s, var)).collect()
}

fn x_vars(p: usize) -> Vec<String> {
    (1..=p).map(|i| format!("x{i}")).collect()
}

fn parse_poly(src: &str, p: usize) -> Result<Poly> {
    let names = x_vars(p);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Poly::parse(src, &refs)
}

fn sample_grid() -> impl Iterator<Item = f64> {
    (0..=16).map(|i| -2.0 + 0.25 * i as f64)
}

/// Checks that the `order`-th derivative of `f` has the requested sign
/// (or merely does not vanish) on a sample grid.
fn sampled_sign(f: &Expr, order: usize, positive: bool) -> std::result::Result<(), String> {
    for y in sample_grid() {
        let d = match f.jet(y, order) {
            Ok(j) => j.derivative(order),
            Err(e) => return Err(format!("cannot evaluate `{f}` at {y}: {e}")),
        };
        let ok = if positive { d > 0.0 } else { d != 0.0 };
        if !ok {
            let what = if positive { "positive" } else { "nonzero" };
            return Err(format!("derivative {order} of `{f}` is not {what} at {y} (value {d})"));
        }
    }
    Ok(())
}

impl ManifoldSpec {
    pub fn from_json(src: &str) -> Result<Self> {
        Self::build(Params::from_json(src)?)
    }

    pub fn build(params: Params) -> Result<Self> {
        let mut warnings = Vec::new();
        let (data, funcs, names, b) = match &params {
            Params::M0 { k, f } => {
                if f.len() < 2 {
                    return Err(Error::Config("M0 needs f0 and at least one f_i".into()));
                }
                if let Some(k) = k {
                    if *k + 1 != f.len() {
                        return Err(Error::Config(format!("M0 with k={k} needs {} functions, got {}", k + 1, f.len())));
                    }
                }
                let exprs = parse_all(f, "y")?;
                let (names, b) = build_m0(exprs.len() - 1);
                (FamilyData::M0 { f: exprs.clone() }, exprs, names, b)
            }
            Params::M1 { f } => {
                let fe = Expr::parse(f, "y")?;
                if let Err(w) = sampled_sign(&fe, 2, true) {
                    warnings.push(format!("f'' > 0 fails: {w}"));
                }
                let funcs = vec![Expr::constant("y", 0.0), Expr::parse("y", "y")?, fe.clone()];
                let (names, b) = build_m0(2);
                (FamilyData::M1 { f: fe }, funcs, names, b)
            }
            Params::M2 { p, psi } => {
                let p = *p;
                if p < 2 {
                    return Err(Error::Config(format!("M2 needs p >= 2, got {p}")));
                }
                if psi.len() != p * (p + 1) / 2 {
                    return Err(Error::Config(format!(
                        "M2 with p={p} needs {} upper-triangle entries of psi, got {}",
                        p * (p + 1) / 2,
                        psi.len()
                    )));
                }
                let mut full = vec![vec![Poly::zero(p); p]; p];
                let mut it = psi.iter();
                for i in 0..p {
                    for j in i..p {
                        let q = parse_poly(it.next().expect("length checked"), p)?;
                        full[i][j] = q.clone();
                        full[j][i] = q;
                    }
                }
                let dim = 2 * p;
                let fields: Vec<Vec<Field>> = full.iter().map(|r| r.iter().map(|q| Field::from_poly(dim, q)).collect()).collect();
                let b = build_walker(p, &fields);
                let names = x_vars(p).into_iter().chain((1..=p).map(|i| format!("y{i}"))).collect();
                (FamilyData::M2 { p, psi: full }, Vec::new(), names, b)
            }
            Params::M3 { p, f } => {
                let p = *p;
                if p < 2 {
                    return Err(Error::Config(format!("M3 needs p >= 2, got {p}")));
                }
                let q = parse_poly(f, p)?;
                let h = q.hessian();
                let h0 = DMatrix::from_fn(p, p, |i, j| h[i][j].eval(&vec![0.0; p]));
                let eig = h0.clone().symmetric_eigen().eigenvalues;
                if eig.iter().any(|e| e.abs() < 1e-12) {
                    warnings.push("Hessian of f is degenerate at the origin".into());
                } else if !(eig.iter().all(|e| *e > 0.0) || eig.iter().all(|e| *e < 0.0)) {
                    warnings.push("Hessian of f is indefinite at the origin".into());
                }
                let dim = 2 * p;
                let grad: Vec<Field> = (0..p).map(|i| Field::from_poly(dim, &q.partial(i))).collect();
                let fields: Vec<Vec<Field>> = (0..p).map(|i| (0..p).map(|j| grad[i].mul(&grad[j])).collect()).collect();
                let b = build_walker(p, &fields);
                let names = x_vars(p).into_iter().chain((1..=p).map(|i| format!("y{i}"))).collect();
                (FamilyData::M3 { p, f: q }, Vec::new(), names, b)
            }
            Params::M4 { f } => {
                let fe = Expr::parse(f, "y")?;
                for order in [2, 3] {
                    if let Err(w) = sampled_sign(&fe, order, false) {
                        warnings.push(w);
                    }
                }
                let dim = 4;
                let mut psi = vec![vec![Field::zero(dim); 2]; 2];
                psi[0][0] = Field::func(dim, 0, 0, 1).scale(-2.0);
                let b = build_walker(2, &psi);
                let names = ["x1", "x2", "y1", "y2"].map(String::from).to_vec();
                (FamilyData::M4 { f: fe.clone() }, vec![fe], names, b)
            }
            Params::M5 { p, f } => {
                let p = *p;
                let fe = Expr::parse(f, "y")?;
                for order in [p + 3, p + 4] {
                    if let Err(w) = sampled_sign(&fe, order, true) {
                        warnings.push(w);
                    }
                }
                let half = p + 3;
                let dim = 2 * half;
                let mut psi_xx = Field::func(dim, 0, 0, 1);
                for i in 0..=p {
                    psi_xx.add_assign(&Field::coord_pow(dim, 1, (i + 1) as u16).mul(&Field::coord(dim, 2 + i)));
                }
                let mut psi = vec![vec![Field::zero(dim); half]; half];
                psi[0][0] = psi_xx.scale(-2.0);
                let b = build_walker(half, &psi);
                let mut names: Vec<String> = vec!["x".into(), "y".into()];
                names.extend((0..=p).map(|i| format!("z{i}")));
                names.push("xbar".into());
                names.push("ybar".into());
                names.extend((0..=p).map(|i| format!("zbar{i}")));
                (FamilyData::M5 { p, f: fe.clone() }, vec![fe], names, b)
            }
            Params::M6 { s, f } => {
                if let Some(s) = s {
                    if *s != f.len() {
                        return Err(Error::Config(format!("M6 with s={s} needs {s} functions, got {}", f.len())));
                    }
                }
                if f.len() < 2 {
                    return Err(Error::Config(format!("M6 needs s >= 2, got {}", f.len())));
                }
                let exprs = parse_all(f, "u")?;
                let s = exprs.len();
                let mut names: Vec<String> = (1..=s).map(|i| format!("u{i}")).collect();
                names.extend((1..=s).map(|i| format!("t{i}")));
                names.extend((1..=s).map(|i| format!("v{i}")));
                (FamilyData::M6 { f: exprs.clone() }, exprs, names, build_m6(s))
            }
        };
        let dim = b.dim;
        let mut spec = Self {
            signature: expected_signature(&data),
            params,
            data,
            dim,
            coord_names: names,
            funcs,
            metric: b.metric,
            christoffel: b.gamma,
            warnings,
            curvature_cache: Mutex::new(Vec::new()),
        };
        spec.metric.retain(|_, f| !f.is_zero());
        Ok(spec)
    }

    pub fn family(&self) -> Family {
        self.params.family()
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn data(&self) -> &FamilyData {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Signature `(negative, positive)` predicted for the family.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn coord_names(&self) -> &[String] {
        &self.coord_names
    }

    /// Univariate functions referenced by [`FuncFactor::func`].
    pub fn funcs(&self) -> &[Expr] {
        &self.funcs
    }

    /// Family hypotheses that failed a sampled check at build time.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn christoffel(&self) -> &TermChristoffel {
        &self.christoffel
    }

    /// Metric component fields, upper triangle `(i <= j)`.
    pub fn metric_fields(&self) -> &BTreeMap<(usize, usize), Field> {
        &self.metric
    }

    pub fn evaluator<'a>(&'a self, point: &'a [f64]) -> Evaluator<'a> {
        Evaluator::new(&self.funcs, point)
    }

    pub(crate) fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::Dim(format!("point has {} coordinates, {} expects {}", point.len(), self.family(), self.dim)));
        }
        if point.iter().any(|x| !x.is_finite()) {
            return Err(Error::Dim("point has non-finite coordinates".into()));
        }
        Ok(())
    }

    /// Metric matrix at a point without the nondegeneracy check.
    pub fn metric_matrix(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        self.check_point(point)?;
        let ev = self.evaluator(point);
        let mut g = DMatrix::zeros(self.dim, self.dim);
        for ((i, j), f) in &self.metric {
            let v = f.eval(&ev)?;
            g[(*i, *j)] = v;
            g[(*j, *i)] = v;
        }
        Ok(g)
    }

    pub fn metric_at(&self, point: &[f64]) -> Result<MetricAtPoint> {
        MetricAtPoint::new(self.metric_matrix(point)?)
    }

    /// `Γ_ij^k` as a rank-3 tensor indexed `[i][j][k]`, last slot contravariant.
    pub fn christoffel_at(&self, point: &[f64]) -> Result<Tensor> {
        self.check_point(point)?;
        let ev = self.evaluator(point);
        let mut t = Tensor::zeros(self.dim, 3);
        for (&(i, j, k), f) in self.christoffel.entries() {
            t.set(&[i, j, k], f.eval(&ev)?);
        }
        t.with_variance(vec![Variance::Covariant, Variance::Covariant, Variance::Contravariant])
    }

    /// Symbolic mixed tensors `R_{ijk}^l`, `∇R`, ..., `∇^order R`, built once per
    /// spec and shared afterwards.
    pub fn symbolic_curvature(&self, order: usize) -> Vec<Arc<SymTensor>> {
        let mut cache = self.curvature_cache.lock().unwrap_or_else(|e| e.into_inner());
        if cache.is_empty() {
            cache.push(Arc::new(SymTensor::curvature(&self.christoffel)));
        }
        while cache.len() <= order {
            let next = cache.last().expect("nonempty").covariant_derivative(&self.christoffel);
            cache.push(Arc::new(next));
        }
        cache[..=order].to_vec()
    }
}

fn expected_signature(data: &FamilyData) -> (usize, usize) {
    match data {
        FamilyData::M0 { f } => (2, 2 + f.len() - 1),
        FamilyData::M1 { .. } => (2, 4),
        FamilyData::M2 { p, .. } | FamilyData::M3 { p, .. } => (*p, *p),
        FamilyData::M4 { .. } => (2, 2),
        FamilyData::M5 { p, .. } => (p + 3, p + 3),
        FamilyData::M6 { f } => (2 * f.len(), f.len()),
    }
}

/// Coordinates `(x, y, z_1..z_k, ỹ, x̃)` with `F = f_0(y) + Σ f_i(y) z_i` and
/// `g(∂x,∂x) = -2F`; function `i` of the manifold is `f_i`.
fn build_m0(k: usize) -> (Vec<String>, Builder) {
    let dim = 4 + k;
    let (x, y, yt, xt) = (0, 1, 2 + k, 3 + k);
    let z = |i: usize| 1 + i;
    let mut b = Builder::new(dim);
    let mut big_f = Field::func(dim, 0, 0, y);
    let mut f_y = Field::func(dim, 0, 1, y);
    for i in 1..=k {
        big_f.add_assign(&Field::func(dim, i, 0, y).mul(&Field::coord(dim, z(i))));
        f_y.add_assign(&Field::func(dim, i, 1, y).mul(&Field::coord(dim, z(i))));
    }
    b.g(x, x, big_f.scale(-2.0));
    b.gc(x, xt, 1.0);
    b.gc(y, yt, 1.0);
    for i in 1..=k {
        b.gc(z(i), z(i), 1.0);
    }
    b.gamma(x, x, yt, &f_y);
    b.gamma(x, y, xt, &f_y.scale(-1.0));
    for i in 1..=k {
        let fi = Field::func(dim, i, 0, y);
        b.gamma(x, x, z(i), &fi);
        b.gamma(x, z(i), xt, &fi.scale(-1.0));
    }
    let mut names = vec!["x".to_string(), "y".to_string()];
    names.extend((1..=k).map(|i| format!("z{i}")));
    names.push("ytilde".into());
    names.push("xtilde".into());
    (names, b)
}

/// Coordinates `(x_1..x_q, y_1..y_q)` with `g(∂x_i,∂x_j) = ψ_ij` and
/// `g(∂x_i,∂y_j) = δ_ij`.
fn build_walker(q: usize, psi: &[Vec<Field>]) -> Builder {
    let dim = 2 * q;
    let mut b = Builder::new(dim);
    for i in 0..q {
        b.gc(i, q + i, 1.0);
        for j in i..q {
            if !psi[i][j].is_zero() {
                b.g(i, j, psi[i][j].clone());
            }
        }
    }
    for i in 0..q {
        for j in i..q {
            for k in 0..q {
                let mut f = psi[i][k].partial(j);
                f.add_assign(&psi[j][k].partial(i));
                f.add_scaled(-1.0, &psi[i][j].partial(k));
                let f = f.scale(0.5);
                if !f.is_zero() {
                    b.gamma(i, j, q + k, &f);
                }
            }
        }
    }
    b
}

/// Coordinates `(u_1..u_s, t_1..t_s, v_1..v_s)` with
/// `g(∂u_i,∂u_i) = -2(Σ f_j(u_j) - Σ u_j t_j)`, `g(∂u_i,∂v_i) = 1`,
/// `g(∂t_i,∂t_i) = -1`.
fn build_m6(s: usize) -> Builder {
    let dim = 3 * s;
    let (u, t, v) = (|i: usize| i, |i: usize| s + i, |i: usize| 2 * s + i);
    let mut b = Builder::new(dim);
    let mut phi = Field::zero(dim);
    for j in 0..s {
        phi.add_assign(&Field::func(dim, j, 0, u(j)));
        phi.add_scaled(-1.0, &Field::coord(dim, u(j)).mul(&Field::coord(dim, t(j))));
    }
    let phi = phi.scale(-2.0);
    for i in 0..s {
        b.g(u(i), u(i), phi.clone());
        b.gc(u(i), v(i), 1.0);
        b.gc(t(i), t(i), -1.0);
    }
    // h_j = f_j'(u_j) - t_j, so that ∂_{u_j} Φ = -2 h_j.
    let h: Vec<Field> = (0..s)
        .map(|j| Field::func(dim, j, 1, u(j)).sub(&Field::coord(dim, t(j))))
        .collect();
    for i in 0..s {
        b.gamma(u(i), u(i), v(i), &h[i].scale(-1.0));
        for j in 0..s {
            if j != i {
                b.gamma(u(j), u(j), v(i), &h[i]);
                b.gamma(u(i), u(j), v(i), &h[j].scale(-1.0));
            }
            b.gamma(u(i), t(j), v(i), &Field::coord(dim, u(j)));
            b.gamma(u(j), u(j), t(i), &Field::coord(dim, u(i)));
        }
    }
    b
}
