//! Truncated Taylor series arithmetic.

/// Taylor coefficients `c_0..c_N` of a function at `basepoint`;
/// `f^{(k)}(basepoint) = k! c_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub basepoint: f64,
    pub coeffs: Vec<f64>,
}

impl Jet {
    pub fn constant(basepoint: f64, value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { basepoint, coeffs }
    }

    /// The identity function seeded at `basepoint`.
    pub fn variable(basepoint: f64, order: usize) -> Self {
        let mut j = Self::constant(basepoint, basepoint, order);
        if order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `k`-th derivative at the base point. Orders above the jet order read as 0.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeffs.get(k).map_or(0.0, |c| c * factorial(k))
    }

    pub fn derivatives(&self) -> Vec<f64> {
        (0..self.coeffs.len()).map(|k| self.derivative(k)).collect()
    }

    pub fn truncate(&self, order: usize) -> Jet {
        Jet {
            basepoint: self.basepoint,
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub(crate) fn zip(&self, other: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        Jet {
            basepoint: self.basepoint,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Jet {
        Jet {
            basepoint: self.basepoint,
            coeffs: self.coeffs.iter().map(|a| f(*a)).collect(),
        }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let n = self.coeffs.len();
        let mut c = vec![0.0; n];
        for (k, ck) in c.iter_mut().enumerate() {
            *ck = (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum();
        }
        Jet {
            basepoint: self.basepoint,
            coeffs: c,
        }
    }

    /// Quotient; the caller guarantees `other.value() != 0`.
    pub fn div(&self, other: &Jet) -> Jet {
        let n = self.coeffs.len();
        let b = &other.coeffs;
        let mut q = vec![0.0; n];
        for k in 0..n {
            let s: f64 = (1..=k).map(|j| b[j] * q[k - j]).sum();
            q[k] = (self.coeffs[k] - s) / b[0];
        }
        Jet {
            basepoint: self.basepoint,
            coeffs: q,
        }
    }

    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut e = vec![0.0; n];
        e[0] = a[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Jet {
            basepoint: self.basepoint,
            coeffs: e,
        }
    }

    /// Natural logarithm; the caller guarantees `self.value() > 0`.
    pub fn ln(&self) -> Jet {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut l = vec![0.0; n];
        l[0] = a[0].ln();
        for k in 1..n {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
            l[k] = (k as f64 * a[k] - s) / (k as f64 * a[0]);
        }
        Jet {
            basepoint: self.basepoint,
            coeffs: l,
        }
    }

    /// `(sin, cos)` of the series.
    pub fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.coeffs.len();
        let a = &self.coeffs;
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..n {
            let mut ss = 0.0;
            let mut cc = 0.0;
            for j in 1..=k {
                let w = j as f64 * a[j];
                ss += w * c[k - j];
                cc += w * s[k - j];
            }
            s[k] = ss / k as f64;
            c[k] = -cc / k as f64;
        }
        (
            Jet {
                basepoint: self.basepoint,
                coeffs: s,
            },
            Jet {
                basepoint: self.basepoint,
                coeffs: c,
            },
        )
    }

    pub fn powi(&self, n: u32) -> Jet {
        let mut acc = Jet::constant(self.basepoint, 1.0, self.order());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |a, i| a * i as f64)
}
