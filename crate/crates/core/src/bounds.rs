//! Closed-form bounds on `max_{|z|=1} |p'(z)|` and `max_{|z|=1} |D_alpha p(z)|`.
//!
//! Every bound has the shape `C_max * M1 -/+ C_min * mk`, where `M1` is
//! `max_{|z|=1} |p|` and `mk` is `min_{|z|=k} |p|` (for the Aziz–Dawood bounds,
//! `min_{|z|=1} |p|`). Upper bounds subtract the min term, lower bounds add it.
//! The circle extrema are inputs, so everything here is plain arithmetic.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundId {
    #[serde(rename = "bernstein")]
    Bernstein,
    #[serde(rename = "lax")]
    Lax,
    #[serde(rename = "aziz_dawood_upper")]
    AzizDawoodUpper,
    #[serde(rename = "aziz_dawood_lower")]
    AzizDawoodLower,
    #[serde(rename = "turan")]
    Turan,
    #[serde(rename = "govil_upper")]
    GovilUpper,
    #[serde(rename = "govil_lower")]
    GovilLower,
    #[serde(rename = "gap_1_1")]
    Gap,
    #[serde(rename = "thm1_1_2")]
    ZeroOutsideLower,
    #[serde(rename = "thm2_1_3")]
    ZeroInsideUpper,
    #[serde(rename = "thm3_2_3")]
    PolarUpper,
    #[serde(rename = "cor5_2_5")]
    PolarUpperOrigin,
    #[serde(rename = "cor6")]
    PolarUpperTwoZeros,
    #[serde(rename = "thm8_3_1")]
    PolarLower,
    #[serde(rename = "cor10")]
    PolarLowerTwoZeros,
    #[serde(rename = "composed_upper")]
    ComposedUpper,
    #[serde(rename = "composed_lower")]
    ComposedLower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
}

impl BoundId {
    pub const ALL: [BoundId; 17] = [
        BoundId::Bernstein,
        BoundId::Lax,
        BoundId::AzizDawoodUpper,
        BoundId::AzizDawoodLower,
        BoundId::Turan,
        BoundId::GovilUpper,
        BoundId::GovilLower,
        BoundId::Gap,
        BoundId::ZeroOutsideLower,
        BoundId::ZeroInsideUpper,
        BoundId::PolarUpper,
        BoundId::PolarUpperOrigin,
        BoundId::PolarUpperTwoZeros,
        BoundId::PolarLower,
        BoundId::PolarLowerTwoZeros,
        BoundId::ComposedUpper,
        BoundId::ComposedLower,
    ];

    /// Stable identifier used in reports.
    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Bernstein => "bernstein",
            BoundId::Lax => "lax",
            BoundId::AzizDawoodUpper => "aziz_dawood_upper",
            BoundId::AzizDawoodLower => "aziz_dawood_lower",
            BoundId::Turan => "turan",
            BoundId::GovilUpper => "govil_upper",
            BoundId::GovilLower => "govil_lower",
            BoundId::Gap => "gap_1_1",
            BoundId::ZeroOutsideLower => "thm1_1_2",
            BoundId::ZeroInsideUpper => "thm2_1_3",
            BoundId::PolarUpper => "thm3_2_3",
            BoundId::PolarUpperOrigin => "cor5_2_5",
            BoundId::PolarUpperTwoZeros => "cor6",
            BoundId::PolarLower => "thm8_3_1",
            BoundId::PolarLowerTwoZeros => "cor10",
            BoundId::ComposedUpper => "composed_upper",
            BoundId::ComposedLower => "composed_lower",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            BoundId::Bernstein
            | BoundId::Lax
            | BoundId::AzizDawoodUpper
            | BoundId::GovilUpper
            | BoundId::ZeroInsideUpper
            | BoundId::PolarUpper
            | BoundId::PolarUpperOrigin
            | BoundId::PolarUpperTwoZeros
            | BoundId::ComposedUpper => Direction::Upper,
            _ => Direction::Lower,
        }
    }

    /// Whether the bound is on `|D_alpha p|` rather than `|p'|`.
    pub fn is_polar(self) -> bool {
        matches!(
            self,
            BoundId::PolarUpper
                | BoundId::PolarUpperOrigin
                | BoundId::PolarUpperTwoZeros
                | BoundId::PolarLower
                | BoundId::PolarLowerTwoZeros
                | BoundId::ComposedUpper
                | BoundId::ComposedLower
        )
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown bound id {s:?}")))
    }
}

/// A bound value with its breakdown `value = max_term -/+ min_term`,
/// `max_term = max_coeff * M`, `min_term = min_coeff * m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub bound_id: BoundId,
    pub value: f64,
    pub constant_a: Option<f64>,
    pub max_coeff: f64,
    pub min_coeff: f64,
    pub max_term: f64,
    pub min_term: f64,
    pub hypotheses_ok: bool,
    pub vacuous: bool,
}

impl BoundResult {
    fn assemble(
        bound_id: BoundId,
        constant_a: Option<f64>,
        (max_coeff, max_val): (f64, f64),
        (min_coeff, min_val): (f64, f64),
        hypotheses_ok: bool,
    ) -> Self {
        let max_term = max_coeff * max_val;
        let min_term = min_coeff * min_val;
        let value = combine(bound_id.direction(), max_term, min_term);
        Self {
            bound_id,
            value,
            constant_a,
            max_coeff,
            min_coeff,
            max_term,
            min_term,
            hypotheses_ok,
            vacuous: bound_id.direction() == Direction::Lower && value <= 0.0,
        }
    }

    /// Recombines the recorded terms.
    pub fn recompute(&self) -> f64 {
        combine(self.bound_id.direction(), self.max_term, self.min_term)
    }
}

fn combine(direction: Direction, max_term: f64, min_term: f64) -> f64 {
    match direction {
        Direction::Upper => max_term - min_term,
        Direction::Lower => max_term + min_term,
    }
}

/// Degree, gap index and radius shared by the zero-structure bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    pub n: usize,
    pub mu: usize,
    pub k: f64,
}

/// `M1 = max_{|z|=1} |p|` and `mk = min_{|z|=k} |p|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleExtrema {
    pub max_unit: f64,
    pub min_k: f64,
}

fn check_extrema(e: CircleExtrema) -> Result<()> {
    for (name, v) in [("max", e.max_unit), ("min", e.min_k)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidParameter(format!("{name} modulus must be finite and >= 0, got {v}")));
        }
    }
    Ok(())
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("degree must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("k must be positive, got {k}")))
    }
}

fn powi(x: f64, e: usize) -> f64 {
    x.powi(e as i32)
}

/// `k^e` for a possibly negative integer exponent (hypothesis violations).
fn powi_signed(x: f64, e: i64) -> f64 {
    x.powi(e as i32)
}

pub fn bernstein_upper(n: usize, max_unit: f64) -> Result<BoundResult> {
    check_degree(n)?;
    let e = CircleExtrema { max_unit, min_k: 0.0 };
    check_extrema(e)?;
    Ok(BoundResult::assemble(BoundId::Bernstein, None, (n as f64, max_unit), (0.0, 0.0), true))
}

pub fn lax_upper(n: usize, max_unit: f64) -> Result<BoundResult> {
    check_degree(n)?;
    check_extrema(CircleExtrema { max_unit, min_k: 0.0 })?;
    Ok(BoundResult::assemble(BoundId::Lax, None, (n as f64 / 2.0, max_unit), (0.0, 0.0), true))
}

pub fn turan_lower(n: usize, max_unit: f64) -> Result<BoundResult> {
    check_degree(n)?;
    check_extrema(CircleExtrema { max_unit, min_k: 0.0 })?;
    Ok(BoundResult::assemble(BoundId::Turan, None, (n as f64 / 2.0, max_unit), (0.0, 0.0), true))
}

fn check_unit_min(max_unit: f64, min_unit: f64) -> Result<()> {
    check_extrema(CircleExtrema { max_unit, min_k: min_unit })?;
    if min_unit > max_unit {
        return Err(Error::InvalidParameter(format!(
            "min on |z| = 1 ({min_unit}) exceeds max ({max_unit})"
        )));
    }
    Ok(())
}

/// `n/2 (M1 - m1)` with `m1 = min_{|z|=1} |p|`.
pub fn aziz_dawood_upper(n: usize, max_unit: f64, min_unit: f64) -> Result<BoundResult> {
    check_degree(n)?;
    check_unit_min(max_unit, min_unit)?;
    let c = n as f64 / 2.0;
    Ok(BoundResult::assemble(BoundId::AzizDawoodUpper, None, (c, max_unit), (c, min_unit), true))
}

/// `n/2 (M1 + m1)` with `m1 = min_{|z|=1} |p|`.
pub fn aziz_dawood_lower(n: usize, max_unit: f64, min_unit: f64) -> Result<BoundResult> {
    check_degree(n)?;
    check_unit_min(max_unit, min_unit)?;
    let c = n as f64 / 2.0;
    Ok(BoundResult::assemble(BoundId::AzizDawoodLower, None, (c, max_unit), (c, min_unit), true))
}

/// `n/(1+k) (M1 - mk)`, for `k >= 1`.
pub fn govil_upper(n: usize, k: f64, e: CircleExtrema) -> Result<BoundResult> {
    check_degree(n)?;
    check_k(k)?;
    check_extrema(e)?;
    let c = n as f64 / (1.0 + k);
    Ok(BoundResult::assemble(BoundId::GovilUpper, None, (c, e.max_unit), (c, e.min_k), k >= 1.0))
}

/// `n/(1+k) (M1 + mk / k^{n-1})`, for `k <= 1`.
pub fn govil_lower(n: usize, k: f64, e: CircleExtrema) -> Result<BoundResult> {
    check_degree(n)?;
    check_k(k)?;
    check_extrema(e)?;
    let c = n as f64 / (1.0 + k);
    let cmin = c / powi(k, n - 1);
    Ok(BoundResult::assemble(BoundId::GovilLower, None, (c, e.max_unit), (cmin, e.min_k), k <= 1.0))
}

/// `n/(1+k^mu) (M1 + mk / k^{n-mu})` for lacunary `p` with zeros in `|z| <= k <= 1`.
pub fn gap_lower(shape: Shape, e: CircleExtrema) -> Result<BoundResult> {
    let Shape { n, mu, k } = shape;
    check_degree(n)?;
    check_k(k)?;
    check_extrema(e)?;
    let c = n as f64 / (1.0 + powi(k, mu));
    let cmin = c / powi_signed(k, n as i64 - mu as i64);
    let ok = k <= 1.0 && mu >= 1 && mu <= n;
    Ok(BoundResult::assemble(BoundId::Gap, None, (c, e.max_unit), (cmin, e.min_k), ok))
}

fn gap_ok(shape: Shape, s: usize) -> bool {
    shape.mu >= 1 && s < shape.n && shape.mu <= shape.n - s
}

fn check_inside_unit(z0_mod: f64) -> Result<()> {
    if z0_mod.is_finite() && (0.0..1.0).contains(&z0_mod) {
        Ok(())
    } else {
        Err(Error::Singular(format!("need 0 <= |z_0| < 1, got {z0_mod}")))
    }
}

fn check_alpha(alpha_mod: f64) -> Result<()> {
    if alpha_mod.is_finite() && alpha_mod >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("|alpha| must be finite, got {alpha_mod}")))
    }
}

/// Coefficients of the derivative bound for one zero `z_0` of multiplicity
/// `s` inside the unit disk: `(A, s/(1-r) + A/(1-r)^s, A/(k+r)^s)`.
fn inside_zero_terms(shape: Shape, s: usize, r: f64) -> (f64, f64, f64) {
    let Shape { n, mu, k } = shape;
    let a = powi(1.0 + r, s + 1) * (n - s.min(n)) as f64 / ((1.0 + powi(k, mu)) * (1.0 - r));
    let cmax = s as f64 / (1.0 - r) + a / powi(1.0 - r, s);
    let cmin = a / powi(k + r, s);
    (a, cmax, cmin)
}

/// Coefficients of the derivative bound for one zero `z_0` of multiplicity
/// `s` outside `|z| <= k`: `(A, A/(1+r)^s, A/(k^{n-s-mu}(k+r)^s))`.
fn outside_zero_terms(shape: Shape, s: usize, r: f64) -> (f64, f64, f64) {
    let Shape { n, mu, k } = shape;
    let a = powi((1.0 - r).abs(), s) * (n - s.min(n)) as f64 / (1.0 + powi(k, mu));
    let kpow = powi_signed(k, n as i64 - s as i64 - mu as i64);
    (a, a / powi(1.0 + r, s), a / (kpow * powi(k + r, s)))
}

/// Lower bound on `max |p'|` for `p = (z - z_0)^s phi`, `|z_0| > k`, zeros of
/// the lacunary factor `phi` in `|z| <= k`, `k <= 1`.
pub fn zero_outside_lower(shape: Shape, s: usize, z0_mod: f64, e: CircleExtrema) -> Result<BoundResult> {
    check_degree(shape.n)?;
    check_k(shape.k)?;
    check_extrema(e)?;
    let r = z0_mod;
    let (a, scaled_a, cmin) = outside_zero_terms(shape, s, r);
    let cmax = scaled_a - s as f64 / (1.0 + r);
    let ok = shape.k <= 1.0 && (s == 0 || r > shape.k) && gap_ok(shape, s);
    Ok(BoundResult::assemble(BoundId::ZeroOutsideLower, Some(a), (cmax, e.max_unit), (cmin, e.min_k), ok))
}

/// Upper bound on `max |p'|` for `p = (z - z_0)^s phi`, `|z_0| < 1`, zeros of
/// the lacunary factor `phi` in `|z| >= k`, `k >= 1`.
pub fn zero_inside_upper(shape: Shape, s: usize, z0_mod: f64, e: CircleExtrema) -> Result<BoundResult> {
    check_degree(shape.n)?;
    check_k(shape.k)?;
    check_extrema(e)?;
    check_inside_unit(z0_mod)?;
    let (a, cmax, cmin) = inside_zero_terms(shape, s, z0_mod);
    let ok = shape.k >= 1.0 && gap_ok(shape, s);
    Ok(BoundResult::assemble(BoundId::ZeroInsideUpper, Some(a), (cmax, e.max_unit), (cmin, e.min_k), ok))
}

/// Upper bound on `max |D_alpha p|`:
/// `[n + (|a|-1)(s/(1-r) + A/(1-r)^s)] M1 - [(|a|-1) A/(k+r)^s] mk`.
pub fn polar_upper(shape: Shape, s: usize, z0_mod: f64, alpha_mod: f64, e: CircleExtrema) -> Result<BoundResult> {
    check_degree(shape.n)?;
    check_k(shape.k)?;
    check_extrema(e)?;
    check_inside_unit(z0_mod)?;
    check_alpha(alpha_mod)?;
    let (a, d_max, d_min) = inside_zero_terms(shape, s, z0_mod);
    let cmax = shape.n as f64 + (alpha_mod - 1.0) * d_max;
    let cmin = (alpha_mod - 1.0) * d_min;
    let ok = shape.k >= 1.0 && alpha_mod >= 1.0 && gap_ok(shape, s);
    Ok(BoundResult::assemble(BoundId::PolarUpper, Some(a), (cmax, e.max_unit), (cmin, e.min_k), ok))
}

/// The polar upper bound specialized to a zero of multiplicity `s` at the origin:
/// `[|a|(n + s k^mu) + (n-s) k^mu]/(1+k^mu) M1 - [(|a|-1)(n-s)/(k^s (1+k^mu))] mk`.
pub fn polar_upper_origin(shape: Shape, s: usize, alpha_mod: f64, e: CircleExtrema) -> Result<BoundResult> {
    let Shape { n, mu, k } = shape;
    check_degree(n)?;
    check_k(k)?;
    check_extrema(e)?;
    check_alpha(alpha_mod)?;
    let km = powi(k, mu);
    let ns = (n - s.min(n)) as f64;
    let a = ns / (1.0 + km);
    let cmax = (alpha_mod * (n as f64 + s as f64 * km) + ns * km) / (1.0 + km);
    let cmin = (alpha_mod - 1.0) * ns / (powi(k, s) * (1.0 + km));
    let ok = k >= 1.0 && alpha_mod >= 1.0 && gap_ok(shape, s);
    Ok(BoundResult::assemble(BoundId::PolarUpperOrigin, Some(a), (cmax, e.max_unit), (cmin, e.min_k), ok))
}

/// Lower bound on `max |D_alpha p|`:
/// `[(|a|-1) A/(1+r)^s - (n + s(|a|+1)/(1+r))] M1 + [(|a|-1) A/(k^{n-s-mu}(k+r)^s)] mk`.
pub fn polar_lower(shape: Shape, s: usize, z0_mod: f64, alpha_mod: f64, e: CircleExtrema) -> Result<BoundResult> {
    check_degree(shape.n)?;
    check_k(shape.k)?;
    check_extrema(e)?;
    check_alpha(alpha_mod)?;
    let r = z0_mod;
    let (a, scaled_a, d_min) = outside_zero_terms(shape, s, r);
    let cmax = (alpha_mod - 1.0) * scaled_a - (shape.n as f64 + s as f64 * (alpha_mod + 1.0) / (1.0 + r));
    let cmin = (alpha_mod - 1.0) * d_min;
    let ok = shape.k <= 1.0 && (s == 0 || r > shape.k) && alpha_mod >= 1.0 && gap_ok(shape, s);
    Ok(BoundResult::assemble(BoundId::PolarLower, Some(a), (cmax, e.max_unit), (cmin, e.min_k), ok))
}

/// A distinguished zero reduced to `(|z_j|, t_j)`.
pub type ZeroModulus = (f64, usize);

/// Closed form for two distinguished zeros `z_0`, `z_1` in the unit disk.
pub fn polar_upper_two_zeros(
    shape: Shape,
    (r0, t0): ZeroModulus,
    (r1, t1): ZeroModulus,
    alpha_mod: f64,
    e: CircleExtrema,
) -> Result<BoundResult> {
    let Shape { n, mu, k } = shape;
    check_degree(n)?;
    check_k(k)?;
    check_extrema(e)?;
    check_alpha(alpha_mod)?;
    check_inside_unit(r0)?;
    check_inside_unit(r1)?;
    let al = alpha_mod;
    let rest = n.saturating_sub(t0 + t1) as f64;
    let a = powi(1.0 + r0, t0 + 1) * rest / ((1.0 + powi(k, mu)) * (1.0 - r0));
    let grow = powi(1.0 + r1, t1);
    let shrink = powi(1.0 - r1, t1);
    let cmax = t1 as f64 * (al + r1) * powi_signed(1.0 + r1, t1 as i64 - 1) / shrink
        + (n.saturating_sub(t1)) as f64 * grow / shrink
        + (al - 1.0) * grow / shrink * (t0 as f64 / (1.0 - r0) + a / powi(1.0 - r0, t0));
    let cmin = (al - 1.0) * grow * a / (powi(k + r0, t0) * powi(k + r1, t1));
    let ok = k >= 1.0 && al >= 1.0 && mu >= 1 && t0 + t1 < n && mu <= n - t0 - t1;
    Ok(BoundResult::assemble(BoundId::PolarUpperTwoZeros, Some(a), (cmax, e.max_unit), (cmin, e.min_k), ok))
}

/// Closed form for two distinguished zeros `z_0`, `z_1` outside `|z| <= k`.
pub fn polar_lower_two_zeros(
    shape: Shape,
    (r0, t0): ZeroModulus,
    (r1, t1): ZeroModulus,
    alpha_mod: f64,
    e: CircleExtrema,
) -> Result<BoundResult> {
    let Shape { n, mu, k } = shape;
    check_degree(n)?;
    check_k(k)?;
    check_extrema(e)?;
    check_alpha(alpha_mod)?;
    let al = alpha_mod;
    let rest = n.saturating_sub(t0 + t1);
    let a = powi((1.0 - r0).abs(), t0) * rest as f64 / (1.0 + powi(k, mu));
    let gap1 = powi((1.0 - r1).abs(), t1);
    let grow1 = powi(1.0 + r1, t1);
    let cmax = (al - 1.0) * gap1 * a / (powi(1.0 + r0, t0) * grow1)
        - ((n.saturating_sub(t1)) as f64 * gap1 / grow1
            + t0 as f64 * (al + 1.0) * gap1 / ((1.0 + r0) * grow1))
        - t1 as f64 * (al + r1) / (1.0 + r1);
    let kpow = powi_signed(k, rest as i64 - mu as i64);
    let cmin = (al - 1.0) * gap1 * a / (kpow * powi(k + r0, t0) * powi(k + r1, t1));
    let ok = k <= 1.0 && r0 > k && r1 > k && al >= 1.0 && mu >= 1 && t0 + t1 < n && mu <= rest;
    Ok(BoundResult::assemble(BoundId::PolarLowerTwoZeros, Some(a), (cmax, e.max_unit), (cmin, e.min_k), ok))
}

/// Peels distinguished zeros `zeros[1..]` off a base bound on
/// `p_0 = (z - z_0)^{t_0} phi`. Each step uses
/// `D_a p_j = (z - z_j)^{t_j} D_a p_{j-1} + t_j (a - z_j)(z - z_j)^{t_j - 1} p_{j-1}`
/// and replaces the extrema of `p_{j-1}` by those of `p_j`.
fn composed(
    shape: Shape,
    zeros: &[ZeroModulus],
    alpha_mod: f64,
    e: CircleExtrema,
    direction: Direction,
) -> Result<BoundResult> {
    let Shape { n, mu, k } = shape;
    check_degree(n)?;
    check_k(k)?;
    check_extrema(e)?;
    check_alpha(alpha_mod)?;
    for &(r, _) in zeros {
        match direction {
            Direction::Upper => check_inside_unit(r)?,
            Direction::Lower => {
                if !(r.is_finite() && r > k) {
                    return Err(Error::Hypotheses(format!("need |z_j| > k = {k}, got {r}")));
                }
            }
        }
    }
    let total: usize = zeros.iter().map(|z| z.1).sum();
    if zeros.iter().any(|z| z.1 == 0) || total >= n {
        return Err(Error::InvalidParameter(format!("need t_j >= 1 and sum t_j <= n - 1, got {total}")));
    }
    let (base_zero, peeled) = match zeros.split_first() {
        Some((first, rest)) => (*first, rest),
        None => ((0.0, 0), &[][..]),
    };
    let peeled_degree: usize = peeled.iter().map(|z| z.1).sum();
    let base_shape = Shape { n: n - peeled_degree, mu, k };
    // base coefficients, applied to the extrema of p_0
    let unit = CircleExtrema { max_unit: 1.0, min_k: 1.0 };
    let base = match direction {
        Direction::Upper => polar_upper(base_shape, base_zero.1, base_zero.0, alpha_mod, unit)?,
        Direction::Lower => polar_lower(base_shape, base_zero.1, base_zero.0, alpha_mod, unit)?,
    };
    let (mut cmax, mut cmin) = (base.max_coeff, base.min_coeff);
    for &(r, t) in peeled {
        let extra = t as f64 * (alpha_mod + r) * powi_signed(1.0 + r, t as i64 - 1);
        match direction {
            Direction::Upper => {
                let grow = powi(1.0 + r, t);
                cmax = (grow * cmax + extra) / powi(1.0 - r, t);
                cmin = grow * cmin / powi(k + r, t);
            }
            Direction::Lower => {
                let gap = powi((1.0 - r).abs(), t);
                cmax = (gap * cmax - extra) / powi(1.0 + r, t);
                cmin = gap * cmin / powi(k + r, t);
            }
        }
    }
    let id = match direction {
        Direction::Upper => BoundId::ComposedUpper,
        Direction::Lower => BoundId::ComposedLower,
    };
    let ok = base.hypotheses_ok;
    Ok(BoundResult::assemble(id, base.constant_a, (cmax, e.max_unit), (cmin, e.min_k), ok))
}

/// Upper bound for several distinguished zeros in the unit disk; `zeros[0]`
/// is the base zero `z_0`, the rest are peeled in list order.
pub fn composed_upper(shape: Shape, zeros: &[ZeroModulus], alpha_mod: f64, e: CircleExtrema) -> Result<BoundResult> {
    composed(shape, zeros, alpha_mod, e, Direction::Upper)
}

/// Lower bound for several distinguished zeros outside `|z| <= k`; `zeros[0]`
/// is the base zero `z_0`, the rest are peeled in list order.
pub fn composed_lower(shape: Shape, zeros: &[ZeroModulus], alpha_mod: f64, e: CircleExtrema) -> Result<BoundResult> {
    composed(shape, zeros, alpha_mod, e, Direction::Lower)
}

/// Largest zero list accepted by the exhaustive-order search.
pub const MAX_EXHAUSTIVE_ZEROS: usize = 7;

/// Tries every ordering of `zeros` and keeps the tightest composed bound
/// (smallest upper, largest lower). Returns the bound and the order used.
pub fn composed_best_order(
    shape: Shape,
    zeros: &[ZeroModulus],
    alpha_mod: f64,
    e: CircleExtrema,
    direction: Direction,
) -> Result<(BoundResult, Vec<usize>)> {
    if zeros.len() > MAX_EXHAUSTIVE_ZEROS {
        return Err(Error::InvalidParameter(format!(
            "exhaustive order search takes at most {MAX_EXHAUSTIVE_ZEROS} zeros, got {}",
            zeros.len()
        )));
    }
    let mut best: Option<(BoundResult, Vec<usize>)> = None;
    for order in (0..zeros.len()).permutations(zeros.len()) {
        let list: Vec<ZeroModulus> = order.iter().map(|&i| zeros[i]).collect();
        let res = composed(shape, &list, alpha_mod, e, direction)?;
        let better = best.as_ref().is_none_or(|(b, _)| match direction {
            Direction::Upper => res.value < b.value,
            Direction::Lower => res.value > b.value,
        });
        if better {
            best = Some((res, order));
        }
    }
    Ok(best.expect("at least the empty ordering"))
}
