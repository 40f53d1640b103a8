//! Dense complex polynomials in ascending coefficient order.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative threshold below which a coefficient counts as zero.
pub const DEFAULT_EPS_REL: f64 = 1e-12;

/// Complex polynomial `a_0 + a_1 z + ... + a_n z^n` with `a_n != 0`.
///
/// Serialized as a JSON array of `[re, im]` pairs, lowest power first.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    /// Builds a polynomial, trimming trailing coefficients that are zero
    /// relative to the largest coefficient magnitude.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        Self::with_threshold(coeffs, DEFAULT_EPS_REL)
    }

    pub fn with_threshold(mut coeffs: Vec<Complex64>, eps_rel: f64) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(Error::ZeroPolynomial);
        }
        let cutoff = eps_rel * scale;
        while coeffs.last().is_some_and(|c| c.norm() <= cutoff) {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        Self::new(vec![c])
    }

    /// `a * z^n`.
    pub fn monomial(a: Complex64, n: usize) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = a;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn derivative(&self) -> Result<Self> {
        if self.degree() == 0 {
            return Err(Error::ConstantDerivative);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(v, &a)| a * v as f64)
            .collect();
        Self::new(coeffs)
    }

    /// Polar derivative `n p(z) + (alpha - z) p'(z)`, computed coefficientwise
    /// as `b_j = n a_j + alpha (j+1) a_{j+1} - j a_j`.
    ///
    /// The `z^n` coefficients cancel exactly, so the result has degree at
    /// most `n - 1`. Fails with [`Error::ZeroPolynomial`] when the polar
    /// derivative vanishes identically (e.g. `p = (z - alpha)^n`).
    pub fn polar_derivative(&self, alpha: Complex64) -> Result<Self> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::ConstantDerivative);
        }
        let nf = n as f64;
        let a = &self.coeffs;
        let mut b: Vec<Complex64> = (0..=n)
            .map(|j| {
                let next = if j < n { alpha * ((j + 1) as f64) * a[j + 1] } else { Complex64::new(0.0, 0.0) };
                a[j] * nf + next - a[j] * j as f64
            })
            .collect();
        let top = b.pop().unwrap_or_default();
        debug_assert!(top.norm() <= 1e-14 * a[n].norm(), "z^n terms must cancel");
        Self::new(b)
    }

    /// `q(z) = z^n * conj(p(1 / conj(z)))`: reversed, conjugated coefficients.
    pub fn conjugate_reciprocal(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        // the reversed constant term is conj(a_n) != 0
        Self::new(coeffs).expect("leading coefficient is nonzero")
    }

    /// Expands `leading * prod (z - r)^m`.
    pub fn from_roots(roots: &[(Complex64, usize)], leading: Complex64) -> Result<Self> {
        if leading.norm() == 0.0 {
            return Err(Error::InvalidParameter("leading coefficient must be nonzero".into()));
        }
        let mut coeffs = vec![leading];
        for &(r, m) in roots {
            for _ in 0..m {
                coeffs = mul_linear(&coeffs, r);
            }
        }
        Self::new(coeffs)
    }

    /// Smallest `v >= 1` with a nonzero coefficient, for polynomials of the
    /// lacunary form `a_0 + sum_{v >= mu} a_v z^v` with `a_0 != 0`.
    pub fn gap_index(&self, eps_rel: f64) -> Result<usize> {
        let cutoff = eps_rel * self.max_coeff_norm();
        if self.coeffs[0].norm() <= cutoff {
            return Err(Error::GapRequiresConstantTerm);
        }
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, a)| a.norm() > cutoff)
            .map(|(v, _)| v)
            .ok_or_else(|| Error::InvalidParameter("constant polynomial has no gap index".into()))
    }

    /// Synthetic division by `z - root`: returns the quotient and the
    /// remainder `p(root)`.
    pub fn deflate(&self, root: Complex64) -> Result<(Self, Complex64)> {
        let n = self.degree();
        if n == 0 {
            return Err(Error::InvalidParameter("cannot deflate a constant".into()));
        }
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        let mut acc = self.coeffs[n];
        for j in (0..n).rev() {
            q[j] = acc;
            acc = self.coeffs[j] + root * acc;
        }
        Ok((Self::with_threshold(q, 0.0)?, acc))
    }

    /// Division by `z - root` run from the constant term upward, which is the
    /// stable direction when `root` is larger than the remaining zeros.
    /// Returns the quotient and the leftover `a_n - q_{n-1}` (equal to
    /// `p(root) / root^n`).
    pub fn deflate_backward(&self, root: Complex64) -> Result<(Self, Complex64)> {
        let n = self.degree();
        if n == 0 || root.norm() == 0.0 {
            return Err(Error::InvalidParameter("backward deflation needs degree >= 1 and root != 0".into()));
        }
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        let mut prev = Complex64::new(0.0, 0.0);
        for (j, qj) in q.iter_mut().enumerate() {
            *qj = (prev - self.coeffs[j]) / root;
            prev = *qj;
        }
        Ok((Self::with_threshold(q, 0.0)?, self.coeffs[n] - prev))
    }

    /// `c * p(z)`.
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// `p(e^{i phi} z)`.
    pub fn rotated(&self, phi: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(v, &a)| a * Complex64::cis(phi * v as f64))
            .collect();
        Self::new(coeffs).expect("rotation preserves the leading coefficient modulus")
    }
}

fn mul_linear(coeffs: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
    for (i, &c) in coeffs.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        // a_n * b_m != 0 unless it underflows
        Polynomial::with_threshold(out, 0.0).expect("product of nonzero polynomials")
    }
}

impl TryFrom<Vec<[f64; 2]>> for Polynomial {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<Polynomial> for Vec<[f64; 2]> {
    fn from(p: Polynomial) -> Self {
        p.coeffs.into_iter().map(|c| [c.re, c.im]).collect()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Polynomial").field(&self.coeffs).finish()
    }
}

/// Polar parameter `alpha` of `D_alpha p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarParameter(pub Complex64);

impl PolarParameter {
    pub fn modulus(self) -> f64 {
        self.0.norm()
    }

    /// The polar bounds need `|alpha| >= 1`.
    pub fn require_admissible(self) -> Result<f64> {
        let m = self.modulus();
        if m >= 1.0 {
            Ok(m)
        } else {
            Err(Error::AlphaTooSmall(m))
        }
    }
}

impl From<Complex64> for PolarParameter {
    fn from(alpha: Complex64) -> Self {
        Self(alpha)
    }
}

impl From<f64> for PolarParameter {
    fn from(alpha: f64) -> Self {
        Self(Complex64::new(alpha, 0.0))
    }
}
