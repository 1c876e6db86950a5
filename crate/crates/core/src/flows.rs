//! Geodesics, parallel transport and holonomy by coordinate-triangular
//! quadrature.
//!
//! Because `Γ_ij^k` only involves coordinates below `k`, the geodesic and
//! transport equations can be solved one coordinate at a time, each stage a
//! plain integral of already known data. Classical RK4 on the full systems is
//! provided as an independent check.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::families::{Field, ManifoldSpec};
use crate::tensor::MetricAtPoint;

/// Sampled curve on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub times: Vec<f64>,
    pub positions: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
}

impl Curve {
    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.positions.first().map_or(0, Vec::len)
    }

    pub fn start(&self) -> &[f64] {
        &self.positions[0]
    }

    pub fn end(&self) -> &[f64] {
        &self.positions[self.len() - 1]
    }

    fn step(&self) -> f64 {
        (self.times[self.len() - 1] - self.times[0]) / (self.len() - 1) as f64
    }

    /// The same path traversed backwards on the same time grid.
    pub fn reversed(&self) -> Curve {
        Curve {
            times: self.times.clone(),
            positions: self.positions.iter().rev().cloned().collect(),
            velocities: self.velocities.iter().rev().map(|v| v.iter().map(|x| -x).collect()).collect(),
        }
    }

    /// Largest deviation between centered differences of positions and the
    /// stored velocities over interior nodes.
    pub fn velocity_consistency(&self) -> f64 {
        let h = self.step();
        let mut worst = 0.0f64;
        for i in 1..self.len().saturating_sub(1) {
            for k in 0..self.dim() {
                let d = (self.positions[i + 1][k] - self.positions[i - 1][k]) / (2.0 * h);
                worst = worst.max((d - self.velocities[i][k]).abs());
            }
        }
        worst
    }

    /// CSV with header `t,x1,...,xm,v1,...,vm`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let m = self.dim();
        let mut out = String::from("t");
        for k in 1..=m {
            write!(out, ",x{k}").expect("write to String");
        }
        for k in 1..=m {
            write!(out, ",v{k}").expect("write to String");
        }
        out.push('\n');
        for i in 0..self.len() {
            write!(out, "{:.16e}", self.times[i]).expect("write to String");
            for v in self.positions[i].iter().chain(&self.velocities[i]) {
                write!(out, ",{v:.16e}").expect("write to String");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(src: &str) -> Result<Curve> {
        let mut lines = src.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Config("empty curve file".into()))?;
        let cols = header.split(',').count();
        if cols < 3 || (cols - 1) % 2 != 0 || !header.starts_with('t') {
            return Err(Error::Config(format!("bad curve header `{header}`")));
        }
        let m = (cols - 1) / 2;
        let mut curve = Curve {
            times: Vec::new(),
            positions: Vec::new(),
            velocities: Vec::new(),
        };
        for (row, line) in lines.enumerate() {
            let vals: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Config(format!("curve row {}: {e}", row + 1)))?;
            if vals.len() != cols {
                return Err(Error::Config(format!("curve row {} has {} columns, expected {cols}", row + 1, vals.len())));
            }
            curve.times.push(vals[0]);
            curve.positions.push(vals[1..=m].to_vec());
            curve.velocities.push(vals[m + 1..].to_vec());
        }
        if curve.len() < 2 {
            return Err(Error::Config("curve needs at least two rows".into()));
        }
        Ok(curve)
    }
}

/// Cumulative integral of samples `f` on a uniform grid of spacing `h`:
/// composite Simpson at even nodes, the matching three-point rule at odd ones.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    let mut i = 0;
    while i + 2 < n {
        out[i + 1] = out[i] + h / 12.0 * (5.0 * f[i] + 8.0 * f[i + 1] - f[i + 2]);
        out[i + 2] = out[i] + h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        out[i + 1] = out[i] + h / 12.0 * (-f[i - 1] + 8.0 * f[i] + 5.0 * f[i + 1]);
    }
    out
}

fn grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t_end * i as f64 / n as f64).collect()
}

/// Christoffel entries grouped by upper index.
fn gamma_by_upper(spec: &ManifoldSpec) -> Vec<Vec<(usize, usize, &Field)>> {
    let mut out = vec![Vec::new(); spec.dim()];
    for (&(i, j, k), f) in spec.christoffel().entries() {
        out[k].push((i, j, f));
    }
    out
}

/// `G_k(t) = Σ_{i,j<k} Γ_ij^k(x(t)) ẋ_i ẋ_j` along the partially known curve.
fn forcing(spec: &ManifoldSpec, entries: &[(usize, usize, &Field)], curve: &Curve) -> Result<Vec<f64>> {
    (0..curve.len())
        .map(|n| {
            let ev = spec.evaluator(&curve.positions[n]);
            let v = &curve.velocities[n];
            entries.iter().try_fold(0.0, |acc, (i, j, f)| Ok(acc + f.eval(&ev)? * v[*i] * v[*j]))
        })
        .collect()
}

fn check_len(spec: &ManifoldSpec, v: &[f64], what: &str) -> Result<()> {
    if v.len() != spec.dim() {
        return Err(Error::Dim(format!("{what} has {} components, expected {}", v.len(), spec.dim())));
    }
    Ok(())
}

/// Solves the coordinates in increasing order. `initial_velocity` receives
/// the stage index and `W_k(T) = ∫∫ G_k` and returns `ẋ_k(0)`.
fn triangular_geodesic(
    spec: &ManifoldSpec,
    x0: &[f64],
    t_end: f64,
    n: usize,
    mut initial_velocity: impl FnMut(usize, f64) -> f64,
) -> Result<Curve> {
    if n == 0 {
        return Err(Error::Config("geodesic needs at least one step".into()));
    }
    let m = spec.dim();
    let times = grid(t_end, n);
    let h = t_end / n as f64;
    let mut curve = Curve {
        positions: vec![x0.to_vec(); n + 1],
        velocities: vec![vec![0.0; m]; n + 1],
        times,
    };
    let by_upper = gamma_by_upper(spec);
    for (k, entries) in by_upper.iter().enumerate() {
        let (vint, wint) = if entries.is_empty() {
            (vec![0.0; n + 1], vec![0.0; n + 1])
        } else {
            let g = forcing(spec, entries, &curve)?;
            let vint = cumulative_simpson(&g, h);
            let wint = cumulative_simpson(&vint, h);
            (vint, wint)
        };
        let v0 = initial_velocity(k, wint[n]);
        for i in 0..=n {
            curve.positions[i][k] = x0[k] + v0 * curve.times[i] - wint[i];
            curve.velocities[i][k] = v0 - vint[i];
        }
    }
    Ok(curve)
}

/// Geodesic with `γ(0) = x0`, `γ'(0) = v0` on `[0, t_end]` with `n` steps.
pub fn geodesic_ivp(spec: &ManifoldSpec, x0: &[f64], v0: &[f64], t_end: f64, n: usize) -> Result<Curve> {
    check_len(spec, x0, "x0")?;
    check_len(spec, v0, "v0")?;
    triangular_geodesic(spec, x0, t_end, n, |k, _| v0[k])
}

/// The unique geodesic on `[0, 1]` from `p` to `q`, with its initial velocity.
pub fn geodesic_bvp(spec: &ManifoldSpec, p: &[f64], q: &[f64], n: usize) -> Result<(Vec<f64>, Curve)> {
    check_len(spec, p, "P")?;
    check_len(spec, q, "Q")?;
    let mut v0 = vec![0.0; spec.dim()];
    let curve = triangular_geodesic(spec, p, 1.0, n, |k, w| {
        v0[k] = q[k] - p[k] + w;
        v0[k]
    })?;
    Ok((v0, curve))
}

/// `ẍ_k = −Σ Γ_ij^k ẋ_i ẋ_j` for every `k`.
fn geodesic_accel(spec: &ManifoldSpec, x: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let ev = spec.evaluator(x);
    let mut a = vec![0.0; x.len()];
    for (&(i, j, k), f) in spec.christoffel().entries() {
        a[k] -= f.eval(&ev)? * v[i] * v[j];
    }
    Ok(a)
}

/// Largest `|ẍ_k + Σ Γ_ij^k ẋ_i ẋ_j|` over interior nodes, with `ẍ` from
/// centered differences of the velocities.
pub fn geodesic_residual(spec: &ManifoldSpec, curve: &Curve) -> Result<f64> {
    let h = curve.step();
    let mut worst = 0.0f64;
    for i in 1..curve.len().saturating_sub(1) {
        let a = geodesic_accel(spec, &curve.positions[i], &curve.velocities[i])?;
        for k in 0..curve.dim() {
            let d = (curve.velocities[i + 1][k] - curve.velocities[i - 1][k]) / (2.0 * h);
            worst = worst.max((d - a[k]).abs());
        }
    }
    Ok(worst)
}

/// Classical RK4 on the first-order geodesic system, same grid as
/// [`geodesic_ivp`].
pub fn geodesic_rk4(spec: &ManifoldSpec, x0: &[f64], v0: &[f64], t_end: f64, n: usize) -> Result<Curve> {
    check_len(spec, x0, "x0")?;
    check_len(spec, v0, "v0")?;
    if n == 0 {
        return Err(Error::Config("geodesic needs at least one step".into()));
    }
    let h = t_end / n as f64;
    let m = spec.dim();
    let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + s * y).collect() };
    let mut curve = Curve {
        times: grid(t_end, n),
        positions: vec![x0.to_vec()],
        velocities: vec![v0.to_vec()],
    };
    let (mut x, mut v) = (x0.to_vec(), v0.to_vec());
    for _ in 0..n {
        let k1x = v.clone();
        let k1v = geodesic_accel(spec, &x, &v)?;
        let (x2, v2) = (axpy(&x, h / 2.0, &k1x), axpy(&v, h / 2.0, &k1v));
        let k2v = geodesic_accel(spec, &x2, &v2)?;
        let k2x = v2;
        let (x3, v3) = (axpy(&x, h / 2.0, &k2x), axpy(&v, h / 2.0, &k2v));
        let k3v = geodesic_accel(spec, &x3, &v3)?;
        let k3x = v3;
        let (x4, v4) = (axpy(&x, h, &k3x), axpy(&v, h, &k3v));
        let k4v = geodesic_accel(spec, &x4, &v4)?;
        let k4x = v4;
        for c in 0..m {
            x[c] += h / 6.0 * (k1x[c] + 2.0 * k2x[c] + 2.0 * k3x[c] + k4x[c]);
            v[c] += h / 6.0 * (k1v[c] + 2.0 * k2v[c] + 2.0 * k3v[c] + k4v[c]);
        }
        curve.positions.push(x.clone());
        curve.velocities.push(v.clone());
    }
    Ok(curve)
}

/// Christoffel values `(i, j, k, Γ_ij^k)` at every node of the curve.
fn gamma_along(spec: &ManifoldSpec, curve: &Curve) -> Result<Vec<Vec<(usize, usize, usize, f64)>>> {
    check_len(spec, curve.start(), "curve point")?;
    curve
        .positions
        .iter()
        .map(|x| {
            let ev = spec.evaluator(x);
            spec.christoffel()
                .entries()
                .map(|(&(i, j, k), f)| Ok((i, j, k, f.eval(&ev)?)))
                .collect()
        })
        .collect()
}

/// Parallel transport of the columns of `frame` along `curve`:
/// `a_k(t) = a_k(0) − ∫ Σ_{i,j<k} Γ_ij^k(γ) a_i γ̇_j`, solved for increasing `k`.
/// Returns the transported frame at every node.
pub fn transport_frame(spec: &ManifoldSpec, curve: &Curve, frame: &DMatrix<f64>) -> Result<Vec<DMatrix<f64>>> {
    let m = spec.dim();
    if frame.nrows() != m {
        return Err(Error::Dim(format!("frame vectors have {} components, expected {m}", frame.nrows())));
    }
    let gam = gamma_along(spec, curve)?;
    let nodes = curve.len();
    let h = curve.step();
    let cols = frame.ncols();
    let mut out = vec![frame.clone(); nodes];
    let mut by_k: Vec<Vec<Vec<(usize, usize, f64)>>> = vec![vec![Vec::new(); nodes]; m];
    for (n, entries) in gam.iter().enumerate() {
        for &(i, j, k, v) in entries {
            by_k[k][n].push((i, j, v));
        }
    }
    for k in 0..m {
        if by_k[k].iter().all(Vec::is_empty) {
            continue;
        }
        for c in 0..cols {
            let integrand: Vec<f64> = (0..nodes)
                .map(|n| {
                    let g = &curve.velocities[n];
                    by_k[k][n].iter().map(|&(i, j, v)| v * out[n][(i, c)] * g[j]).sum()
                })
                .collect();
            let acc = cumulative_simpson(&integrand, h);
            for n in 0..nodes {
                out[n][(k, c)] = frame[(k, c)] - acc[n];
            }
        }
    }
    Ok(out)
}

/// Transports one vector; returns its components at every node.
pub fn parallel_transport(spec: &ManifoldSpec, curve: &Curve, x0: &[f64]) -> Result<Vec<DVector<f64>>> {
    let frame = DMatrix::from_column_slice(x0.len(), 1, x0);
    Ok(transport_frame(spec, curve, &frame)?.into_iter().map(|f| f.column(0).into_owned()).collect())
}

/// RK4 transport oracle on the full system `ȧ^k = −Γ_ij^k γ̇^i a^j`, stepping
/// over node pairs with the odd node as midpoint. Needs an even number of
/// intervals; returns the frame at even nodes.
pub fn transport_frame_rk4(spec: &ManifoldSpec, curve: &Curve, frame: &DMatrix<f64>) -> Result<Vec<DMatrix<f64>>> {
    let intervals = curve.len() - 1;
    if intervals % 2 != 0 {
        return Err(Error::Config("RK4 transport needs an even number of intervals".into()));
    }
    let gam = gamma_along(spec, curve)?;
    let h2 = 2.0 * curve.step();
    let rhs = |n: usize, a: &DMatrix<f64>| -> DMatrix<f64> {
        let mut d = DMatrix::zeros(a.nrows(), a.ncols());
        let g = &curve.velocities[n];
        for &(i, j, k, v) in &gam[n] {
            for c in 0..a.ncols() {
                d[(k, c)] -= v * g[i] * a[(j, c)];
            }
        }
        d
    };
    let mut a = frame.clone();
    let mut out = vec![a.clone()];
    for s in 0..intervals / 2 {
        let (n0, n1, n2) = (2 * s, 2 * s + 1, 2 * s + 2);
        let k1 = rhs(n0, &a);
        let k2 = rhs(n1, &(&a + &k1 * (h2 / 2.0)));
        let k3 = rhs(n1, &(&a + &k2 * (h2 / 2.0)));
        let k4 = rhs(n2, &(&a + &k3 * h2));
        a += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h2 / 6.0);
        out.push(a.clone());
    }
    Ok(out)
}

/// Parallel transport around a closed loop.
///
/// Row `i` of `matrix` holds the coordinate components of `P_γ ∂_i`, so the
/// plane-wave structure shows up as a unipotent upper-triangular matrix and
/// metric preservation reads `H g Hᵀ = g`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyElement {
    pub matrix: DMatrix<f64>,
    pub descriptor: String,
}

impl HolonomyElement {
    /// `(max |H_ii − 1|, max |H_ij| for i > j)`.
    pub fn triangularity(&self) -> (f64, f64) {
        let h = &self.matrix;
        let mut diag = 0.0f64;
        let mut below = 0.0f64;
        for i in 0..h.nrows() {
            diag = diag.max((h[(i, i)] - 1.0).abs());
            for j in 0..i {
                below = below.max(h[(i, j)].abs());
            }
        }
        (diag, below)
    }

    pub fn is_unipotent_upper(&self, tol: f64) -> bool {
        let (d, b) = self.triangularity();
        d < tol && b < tol
    }

    /// `max |H g Hᵀ − g|`.
    pub fn metric_residual(&self, metric: &MetricAtPoint) -> f64 {
        (&self.matrix * &metric.g * self.matrix.transpose() - &metric.g).amax()
    }
}

/// Transports the coordinate frame around `lp`; fails with
/// [`Error::Loop`] unless `|γ(0) − γ(1)|∞ < 1e-12`.
pub fn holonomy_loop(spec: &ManifoldSpec, lp: &Curve, descriptor: &str) -> Result<HolonomyElement> {
    let gap = lp.start().iter().zip(lp.end()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if !(gap < 1e-12) {
        return Err(Error::Loop(gap));
    }
    let m = spec.dim();
    let frames = transport_frame(spec, lp, &DMatrix::identity(m, m))?;
    Ok(HolonomyElement {
        matrix: frames.last().expect("nonempty curve").transpose(),
        descriptor: descriptor.to_string(),
    })
}

/// Eased coordinate rectangle based at `base` in the `(x_i, x_j)` plane with
/// sides `a` and `b`, traversed in time 1. Each side uses the profile
/// `σ(τ) = τ − sin(2πτ)/2π`, so the loop is smooth at the corners. `n` is
/// rounded up to a multiple of 8.
pub fn rectangle_loop(base: &[f64], i: usize, j: usize, a: f64, b: f64, n: usize) -> Curve {
    let n = n.div_ceil(8).max(1) * 8;
    let m = base.len();
    let e = |k: usize, s: f64| {
        let mut v = vec![0.0; m];
        v[k] = s;
        v
    };
    let sides = [e(i, a), e(j, b), e(i, -a), e(j, -b)];
    let corners = {
        let mut c = vec![base.to_vec()];
        for s in &sides[..3] {
            let last = c.last().expect("nonempty").clone();
            c.push(last.iter().zip(s).map(|(x, d)| x + d).collect());
        }
        c
    };
    let per = n / 4;
    let mut curve = Curve {
        times: grid(1.0, n),
        positions: Vec::with_capacity(n + 1),
        velocities: Vec::with_capacity(n + 1),
    };
    for node in 0..=n {
        let (side, step) = if node == n { (3, per) } else { (node / per, node % per) };
        let tau = step as f64 / per as f64;
        let sigma = tau - (2.0 * PI * tau).sin() / (2.0 * PI);
        let dsigma = 1.0 - (2.0 * PI * tau).cos();
        let pos: Vec<f64> = if node == n {
            base.to_vec()
        } else {
            corners[side].iter().zip(&sides[side]).map(|(c, d)| c + sigma * d).collect()
        };
        curve.positions.push(pos);
        curve.velocities.push(sides[side].iter().map(|d| 4.0 * dsigma * d).collect());
    }
    curve
}

/// Coefficients `γ(t) = base + Σ_h a_h (cos 2πht − 1) + b_h sin 2πht`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierLoop {
    pub base: Vec<f64>,
    pub cos: Vec<Vec<f64>>,
    pub sin: Vec<Vec<f64>>,
}

impl FourierLoop {
    /// Three harmonics with coefficients uniform in `[-amp/3, amp/3]`, so
    /// every coordinate moves by at most `2·amp` from the base point.
    pub fn random(rng: &mut impl Rng, base: &[f64], amp: f64) -> Self {
        let c = amp / 3.0;
        let mut draw = || (0..base.len()).map(|_| rng.random_range(-c..=c)).collect::<Vec<_>>();
        let cos = (0..3).map(|_| draw()).collect();
        let sin = (0..3).map(|_| draw()).collect();
        Self {
            base: base.to_vec(),
            cos,
            sin,
        }
    }

    pub fn sample(&self, n: usize) -> Curve {
        let m = self.base.len();
        let mut curve = Curve {
            times: grid(1.0, n),
            positions: Vec::with_capacity(n + 1),
            velocities: Vec::with_capacity(n + 1),
        };
        for node in 0..=n {
            let t = (node % n) as f64 / n as f64;
            let mut x = self.base.clone();
            let mut v = vec![0.0; m];
            for (h, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
                let w = 2.0 * PI * (h + 1) as f64;
                let (s, c) = (w * t).sin_cos();
                for k in 0..m {
                    x[k] += a[k] * (c - 1.0) + b[k] * s;
                    v[k] += w * (-a[k] * s + b[k] * c);
                }
            }
            curve.positions.push(x);
            curve.velocities.push(v);
        }
        curve
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> ManifoldSpec {
        ManifoldSpec::from_json(json).unwrap()
    }

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let h = 0.1;
        let cubic: Vec<f64> = (0..=8).map(|i| (i as f64 * h).powi(3)).collect();
        let got = cumulative_simpson(&cubic, h);
        for (i, v) in got.iter().enumerate().step_by(2) {
            let t = i as f64 * h;
            assert!((v - t.powi(4) / 4.0).abs() < 1e-15, "{i}");
        }
        // odd nodes and an odd tail are exact for quadratics
        let quad: Vec<f64> = (0..=7).map(|i| (i as f64 * h).powi(2)).collect();
        for (i, v) in cumulative_simpson(&quad, h).iter().enumerate() {
            let t = i as f64 * h;
            assert!((v - t.powi(3) / 3.0).abs() < 1e-15, "{i}");
        }
    }

    #[test]
    fn flat_geodesic_is_a_line() {
        let m = spec(r#"{"family":"M2","p":2,"psi":["0","0","0"]}"#);
        let c = geodesic_ivp(&m, &[1.0, 2.0, 3.0, 4.0], &[0.5, -1.0, 2.0, 0.0], 2.0, 10).unwrap();
        assert_eq!(c.end(), &[2.0, 0.0, 7.0, 4.0]);
        let (v0, _) = geodesic_bvp(&m, &[0.0; 4], &[1.0, 2.0, 3.0, 4.0], 10).unwrap();
        assert_eq!(v0, vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn m1_geodesic_matches_rk4() {
        let m = spec(r#"{"family":"M1","f":"y^2"}"#);
        let x0 = [0.0; 6];
        let v0 = [1.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        let c = geodesic_ivp(&m, &x0, &v0, 1.0, 2000).unwrap();
        let r = geodesic_rk4(&m, &x0, &v0, 1.0, 2000).unwrap();
        let err = c.end().iter().zip(r.end()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
        assert!(geodesic_residual(&m, &c).unwrap() < 1e-5);
        assert!(c.velocity_consistency() < 10.0 * 0.0005f64.powi(2));
    }

    #[test]
    fn bvp_hits_target() {
        let m = spec(r#"{"family":"M1","f":"y^2"}"#);
        let q = [1.0; 6];
        let (v0, c) = geodesic_bvp(&m, &[0.0; 6], &q, 4000).unwrap();
        let err = c.end().iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-8);
        let again = geodesic_ivp(&m, &[0.0; 6], &v0, 1.0, 4000).unwrap();
        let err = again.end().iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-7);
    }

    #[test]
    fn loops_are_closed() {
        let r = rectangle_loop(&[0.1, 0.2, 0.3], 0, 1, 1.0, 0.5, 798);
        assert_eq!(r.len(), 801);
        assert_eq!(r.start(), r.end());
        assert!(r.velocity_consistency() < 1e-3);
        let f = FourierLoop::random(&mut crate::sampling::rng(4), &[0.0, 1.0], 1.0).sample(64);
        assert_eq!(f.start(), f.end());
    }

    #[test]
    fn open_loop_is_rejected() {
        let m = spec(r#"{"family":"M2","p":2,"psi":["0","0","0"]}"#);
        let c = geodesic_ivp(&m, &[0.0; 4], &[1.0, 0.0, 0.0, 0.0], 1.0, 4).unwrap();
        assert!(matches!(holonomy_loop(&m, &c, "segment"), Err(Error::Loop(_))));
    }

    #[test]
    fn csv_round_trip() {
        let c = rectangle_loop(&[0.1, 0.2], 0, 1, 1.0 / 3.0, 0.5, 8);
        let back = Curve::from_csv(&c.to_csv()).unwrap();
        assert_eq!(c, back);
        assert!(c.to_csv().starts_with("t,x1,x2,v1,v2\n"));
    }
}
