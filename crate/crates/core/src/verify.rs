//! End-to-end checks of the bounds against certified circle extrema.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundId, BoundResult, CircleExtrema, Direction, Shape};
use crate::error::{Error, Result};
use crate::extrema::{max_modulus, min_modulus, ExtremumKind, ExtremumResult};
use crate::poly::Polynomial;
use crate::zeros::{
    classify, make_sharp_gap_family, make_sharp_monomial_family, DistinguishedZero, Regime, ZeroPattern,
    DEFAULT_MARGIN, PATTERN_ZERO_TOL,
};

/// Pass threshold `abs + rel * lhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs: 1e-8, rel: 1e-8 }
    }
}

impl Tolerance {
    pub const SHARP: Tolerance = Tolerance { abs: 1e-10, rel: 1e-10 };

    pub fn effective(&self, lhs: f64) -> f64 {
        self.abs + self.rel * lhs.abs()
    }

    /// Tolerance handed to the extremum engine.
    pub fn engine(&self) -> f64 {
        self.abs / 10.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    VacuousPass,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::VacuousPass => "vacuous_pass",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub instance_id: String,
    pub bound_id: BoundId,
    pub alpha: Complex64,
    pub lhs: f64,
    pub lhs_error: f64,
    pub rhs: f64,
    pub slack: f64,
    pub status: Status,
    pub tol: f64,
}

impl VerificationRecord {
    /// `rhs - lhs` for upper bounds, `lhs - rhs` for lower bounds.
    pub fn recompute_slack(&self) -> f64 {
        slack(self.bound_id.direction(), self.lhs, self.rhs)
    }
}

fn slack(direction: Direction, lhs: f64, rhs: f64) -> f64 {
    match direction {
        Direction::Upper => rhs - lhs,
        Direction::Lower => lhs - rhs,
    }
}

fn status(direction: Direction, slack: f64, rhs: f64, tol: f64, lhs_error: f64) -> Status {
    if slack < -(tol + lhs_error) {
        Status::Fail
    } else if direction == Direction::Lower && rhs <= 0.0 {
        Status::VacuousPass
    } else {
        Status::Pass
    }
}

/// `max|D_a p| <= n M1 + (|a| - 1) max|p'|` on `|z| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

/// A record together with the bound breakdown and, for upper polar bounds,
/// the intermediate chain inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub record: VerificationRecord,
    pub bound: BoundResult,
    pub chain: Option<ChainCheck>,
}

/// Classifies `p`, checks it against `pattern`, and verifies `bound_id`.
pub fn verify_instance(
    instance_id: &str,
    p: &Polynomial,
    pattern: &ZeroPattern,
    alpha: Complex64,
    bound_id: BoundId,
    tol: Tolerance,
) -> Result<Verification> {
    let classified = classify(p, pattern.k, pattern.regime, DEFAULT_MARGIN)?;
    pattern.check_matches(&classified, PATTERN_ZERO_TOL)?;
    pattern.check_base(p)?;
    evaluate(instance_id, p, pattern, alpha, bound_id, tol)
}

/// Like [`verify_instance`] but trusts `pattern` without classifying `p`.
/// Used for families with high-multiplicity zeros, whose computed roots
/// scatter too much to classify reliably.
pub fn evaluate(
    instance_id: &str,
    p: &Polynomial,
    pattern: &ZeroPattern,
    alpha: Complex64,
    bound_id: BoundId,
    tol: Tolerance,
) -> Result<Verification> {
    if p.degree() != pattern.n {
        return Err(Error::Mismatch(format!("degree {} vs pattern n = {}", p.degree(), pattern.n)));
    }
    let alpha_mod = alpha.norm();
    if bound_id.is_polar() && !(alpha_mod >= 1.0) {
        return Err(Error::AlphaTooSmall(alpha_mod));
    }
    check_applicable(bound_id, pattern)?;

    let engine = tol.engine();
    let m1 = max_modulus(p, 1.0, engine);
    let mk = min_modulus(p, pattern.k, engine);
    let unit_min = match bound_id {
        BoundId::AzizDawoodUpper | BoundId::AzizDawoodLower => Some(min_modulus(p, 1.0, engine).value),
        _ => None,
    };
    let bound = catalog_bound(bound_id, pattern, alpha_mod, m1.value, mk.value, unit_min)?;
    if !bound.hypotheses_ok {
        return Err(Error::Hypotheses(format!("{bound_id} hypotheses fail for this pattern")));
    }

    let deriv = p.derivative()?;
    let deriv_max = max_modulus(&deriv, 1.0, engine);
    let lhs = if bound_id.is_polar() { polar_max(p, alpha, engine)? } else { deriv_max };

    let direction = bound_id.direction();
    let eff = tol.effective(lhs.value);
    let s = slack(direction, lhs.value, bound.value);
    let record = VerificationRecord {
        instance_id: instance_id.to_string(),
        bound_id,
        alpha,
        lhs: lhs.value,
        lhs_error: lhs.error_radius,
        rhs: bound.value,
        slack: s,
        status: status(direction, s, bound.value, eff, lhs.error_radius),
        tol: eff,
    };

    let chain = (bound_id.is_polar() && direction == Direction::Upper).then(|| {
        let rhs = p.degree() as f64 * m1.certified_bound() + (alpha_mod - 1.0) * deriv_max.certified_bound();
        let slack = rhs - lhs.value;
        ChainCheck { lhs: lhs.value, rhs, slack, pass: slack >= -(eff + lhs.error_radius) }
    });
    Ok(Verification { record, bound, chain })
}

/// `max_{|z|=1} |D_a p|`, with an identically vanishing polar derivative
/// (`p = c (z - a)^n`) reported as an exact 0.
fn polar_max(p: &Polynomial, alpha: Complex64, tol: f64) -> Result<ExtremumResult> {
    match p.polar_derivative(alpha) {
        Ok(d) => Ok(max_modulus(&d, 1.0, tol)),
        Err(Error::ZeroPolynomial) => Ok(ExtremumResult {
            value: 0.0,
            witness_angle: 0.0,
            error_radius: 0.0,
            kind: ExtremumKind::Max,
        }),
        Err(e) => Err(e),
    }
}

fn not_applicable(bound: BoundId, reason: impl Into<String>) -> Error {
    Error::NotApplicable { bound: bound.as_str().to_string(), reason: reason.into() }
}

/// Checks that the pattern has the regime and number of distinguished zeros
/// that `bound_id` is stated for.
pub fn check_applicable(bound_id: BoundId, pattern: &ZeroPattern) -> Result<()> {
    use BoundId::*;
    let m = pattern.distinguished.len();
    let want_regime = match bound_id {
        Bernstein => None,
        Lax | AzizDawoodUpper | GovilUpper | ZeroInsideUpper | PolarUpper | PolarUpperOrigin
        | PolarUpperTwoZeros | ComposedUpper => Some(Regime::Upper),
        _ => Some(Regime::Lower),
    };
    if let Some(r) = want_regime {
        if pattern.regime != r {
            return Err(not_applicable(bound_id, format!("needs the {r} regime, pattern is {}", pattern.regime)));
        }
    }
    let ok = match bound_id {
        Bernstein | ComposedUpper | ComposedLower => true,
        Lax | AzizDawoodUpper | AzizDawoodLower | Turan | GovilUpper | GovilLower | Gap => m == 0,
        ZeroOutsideLower | ZeroInsideUpper | PolarUpper | PolarLower => m <= 1,
        PolarUpperOrigin => m == 0 || (m == 1 && pattern.distinguished[0].modulus() <= DEFAULT_MARGIN),
        PolarUpperTwoZeros | PolarLowerTwoZeros => m == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(not_applicable(bound_id, format!("unsupported distinguished zeros: {m}")))
    }
}

fn single_zero(pattern: &ZeroPattern) -> (usize, f64) {
    pattern.distinguished.first().map_or((0, 0.0), |d| (d.mult, d.modulus()))
}

fn zero_moduli(zs: &[DistinguishedZero]) -> Vec<(f64, usize)> {
    zs.iter().map(|d| (d.modulus(), d.mult)).collect()
}

/// Evaluates `bound_id` for `pattern` from the circle extrema.
/// `unit_min` (`min_{|z|=1}|p|`) is needed only by the Aziz–Dawood bounds.
pub fn catalog_bound(
    bound_id: BoundId,
    pattern: &ZeroPattern,
    alpha_mod: f64,
    max_unit: f64,
    min_k: f64,
    unit_min: Option<f64>,
) -> Result<BoundResult> {
    use BoundId::*;
    let n = pattern.n;
    let k = pattern.k;
    let shape = Shape { n, mu: pattern.mu, k };
    let e = CircleExtrema { max_unit, min_k };
    let (s, r) = single_zero(pattern);
    let need_unit_min = || unit_min.ok_or_else(|| Error::InvalidParameter("min on |z| = 1 required".into()));
    let two = |pattern: &ZeroPattern| {
        let z = zero_moduli(&pattern.distinguished);
        if z.len() == 2 {
            Ok((z[0], z[1]))
        } else {
            Err(not_applicable(bound_id, "needs exactly two distinguished zeros"))
        }
    };
    match bound_id {
        Bernstein => bounds::bernstein_upper(n, max_unit),
        Lax => bounds::lax_upper(n, max_unit),
        Turan => bounds::turan_lower(n, max_unit),
        AzizDawoodUpper => bounds::aziz_dawood_upper(n, max_unit, need_unit_min()?),
        AzizDawoodLower => bounds::aziz_dawood_lower(n, max_unit, need_unit_min()?),
        GovilUpper => bounds::govil_upper(n, k, e),
        GovilLower => bounds::govil_lower(n, k, e),
        Gap => bounds::gap_lower(shape, e),
        ZeroOutsideLower => bounds::zero_outside_lower(shape, s, r, e),
        ZeroInsideUpper => bounds::zero_inside_upper(shape, s, r, e),
        PolarUpper => bounds::polar_upper(shape, s, r, alpha_mod, e),
        PolarUpperOrigin => bounds::polar_upper_origin(shape, s, alpha_mod, e),
        PolarLower => bounds::polar_lower(shape, s, r, alpha_mod, e),
        PolarUpperTwoZeros => {
            let (z0, z1) = two(pattern)?;
            bounds::polar_upper_two_zeros(shape, z0, z1, alpha_mod, e)
        }
        PolarLowerTwoZeros => {
            let (z0, z1) = two(pattern)?;
            bounds::polar_lower_two_zeros(shape, z0, z1, alpha_mod, e)
        }
        ComposedUpper => bounds::composed_upper(shape, &zero_moduli(&pattern.distinguished), alpha_mod, e),
        ComposedLower => bounds::composed_lower(shape, &zero_moduli(&pattern.distinguished), alpha_mod, e),
    }
}

/// Extremal families with a designated bound they attain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SharpFamily {
    /// `z^s (z + k)^{n-s}` against the polar upper bound.
    Monomial { n: usize, s: usize, k: f64, alpha: f64 },
    /// `(z^mu + k^mu)^{n/mu}` against the gap lower bound.
    Gap { n: usize, mu: usize, k: f64 },
    /// `(z + k)^n` against the upper (`k >= 1`) or lower (`k <= 1`) Govil bound.
    Binomial { n: usize, k: f64, regime: Regime },
    /// `a z^n` against Bernstein's bound.
    Bernstein { n: usize, a: Complex64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub family: SharpFamily,
    pub bound_id: BoundId,
    pub lhs: f64,
    pub rhs: f64,
    /// Closed form of the extremal value, where one is known.
    pub closed_form: Option<f64>,
    /// `|lhs - rhs| / rhs`.
    pub gap: f64,
}

impl SharpFamily {
    pub fn polynomial(&self) -> Result<Polynomial> {
        match *self {
            SharpFamily::Monomial { n, s, k, .. } => make_sharp_monomial_family(n, s, k),
            SharpFamily::Gap { n, mu, k } => make_sharp_gap_family(n, mu, k),
            SharpFamily::Binomial { n, k, .. } => {
                Polynomial::from_roots(&[(Complex64::new(-k, 0.0), n)], Complex64::new(1.0, 0.0))
            }
            SharpFamily::Bernstein { n, a } => Polynomial::monomial(a, n),
        }
    }

    /// The zero pattern the family is built with.
    pub fn pattern(&self) -> Result<ZeroPattern> {
        match *self {
            SharpFamily::Monomial { n, s, k, .. } => {
                let zeros = if s > 0 { vec![DistinguishedZero::new(Complex64::new(0.0, 0.0), s)] } else { vec![] };
                ZeroPattern::new(n, k, Regime::Upper, 1, zeros)
            }
            SharpFamily::Gap { n, mu, k } => ZeroPattern::new(n, k, Regime::Lower, mu, vec![]),
            SharpFamily::Binomial { n, k, regime } => ZeroPattern::new(n, k, regime, 1, vec![]),
            SharpFamily::Bernstein { n, .. } => ZeroPattern::new(n, 1.0, Regime::Lower, 1, vec![]),
        }
    }

    pub fn bound_id(&self) -> BoundId {
        match self {
            SharpFamily::Monomial { .. } => BoundId::PolarUpper,
            SharpFamily::Gap { .. } => BoundId::Gap,
            SharpFamily::Binomial { regime: Regime::Upper, .. } => BoundId::GovilUpper,
            SharpFamily::Binomial { regime: Regime::Lower, .. } => BoundId::GovilLower,
            SharpFamily::Bernstein { .. } => BoundId::Bernstein,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        match *self {
            SharpFamily::Monomial { alpha, .. } => Complex64::new(alpha, 0.0),
            _ => Complex64::new(1.0, 0.0),
        }
    }

    /// Known extremal value of the left-hand side.
    pub fn closed_form(&self) -> Option<f64> {
        let pw = |x: f64, e: usize| x.powi(e as i32);
        match *self {
            SharpFamily::Monomial { n, s, k, alpha } => {
                let (nf, sf) = (n as f64, s as f64);
                Some(((nf - sf) * k + alpha * nf + alpha * sf * k) * pw(1.0 + k, n - s - 1))
            }
            SharpFamily::Gap { n, mu, k } => {
                Some(n as f64 * pw(1.0 + pw(k, mu), n / mu - 1))
            }
            SharpFamily::Binomial { n, k, .. } => Some(n as f64 * pw(1.0 + k, n - 1)),
            SharpFamily::Bernstein { n, a } => Some(n as f64 * a.norm()),
        }
    }
}

/// Relative gap between the certified left-hand side and the designated bound
/// for an extremal family, at the sharpness tolerance.
pub fn sharpness_gap(family: SharpFamily) -> Result<SharpnessReport> {
    let p = family.polynomial()?;
    let pattern = family.pattern()?;
    let bound_id = family.bound_id();
    let v = evaluate("sharpness", &p, &pattern, family.alpha(), bound_id, Tolerance::SHARP)?;
    let (lhs, rhs) = (v.record.lhs, v.record.rhs);
    Ok(SharpnessReport {
        family,
        bound_id,
        lhs,
        rhs,
        closed_form: family.closed_form(),
        gap: (lhs - rhs).abs() / rhs.abs(),
    })
}

/// For each `a` in `alpha_grid`, `|B_polar(a)/a - B_deriv|`, where the pair is
/// the polar upper bound and its derivative counterpart (upper regime) or the
/// polar lower bound and its derivative counterpart (lower regime).
pub fn limit_recovery(p: &Polynomial, pattern: &ZeroPattern, alpha_grid: &[f64]) -> Result<LimitRecovery> {
    let (polar_id, deriv_id) = match pattern.regime {
        Regime::Upper => (BoundId::PolarUpper, BoundId::ZeroInsideUpper),
        Regime::Lower => (BoundId::PolarLower, BoundId::ZeroOutsideLower),
    };
    check_applicable(polar_id, pattern)?;
    let tol = Tolerance::default().engine();
    let m1 = max_modulus(p, 1.0, tol).value;
    let mk = min_modulus(p, pattern.k, tol).value;
    let derivative = catalog_bound(deriv_id, pattern, 1.0, m1, mk, None)?.value;
    let gaps = alpha_grid
        .iter()
        .map(|&a| {
            let polar = catalog_bound(polar_id, pattern, a, m1, mk, None)?.value;
            Ok((polar / a - derivative).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(LimitRecovery { bound_derivative: derivative, gaps })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRecovery {
    pub bound_derivative: f64,
    pub gaps: Vec<f64>,
}

impl LimitRecovery {
    pub fn strictly_decreasing(&self) -> bool {
        self.gaps.windows(2).all(|w| w[1] < w[0])
    }
}

/// Residuals of `|p'| + |q'| <= n M1` and `|n p - z p'| = |q'|` at
/// `sample_count` equispaced points of the unit circle, `q` the conjugate
/// reciprocal of `p`. Returns `(max(|p'| + |q'| - n M1), max ||n p - z p'| - |q'||)`.
pub fn proof_identity_probe(p: &Polynomial, sample_count: usize) -> Result<(f64, f64)> {
    if sample_count == 0 {
        return Err(Error::InvalidParameter("sample_count must be >= 1".into()));
    }
    let n = p.degree() as f64;
    let q = p.conjugate_reciprocal();
    if p.degree() == 0 {
        return Ok((0.0, 0.0));
    }
    let dp = p.derivative()?;
    let dq = if q.degree() == 0 { None } else { Some(q.derivative()?) };
    let dq_at = |z: Complex64| dq.as_ref().map_or(Complex64::new(0.0, 0.0), |d| d.eval(z));
    let m1 = max_modulus(p, 1.0, Tolerance::default().engine()).value;
    let mut first = f64::NEG_INFINITY;
    let mut second: f64 = 0.0;
    for j in 0..sample_count {
        let z = Complex64::cis(TAU * j as f64 / sample_count as f64);
        let (pz, dpz, dqz) = (p.eval(z), dp.eval(z), dq_at(z));
        first = first.max(dpz.norm() + dqz.norm() - n * m1);
        second = second.max(((n * pz - z * dpz).norm() - dqz.norm()).abs());
    }
    Ok((first, second))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub vacuous_pass: usize,
    /// Most negative slack over all records, or 0 if none is negative.
    pub max_negative_slack: f64,
    pub chain_fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn add(&mut self, record: &VerificationRecord, chain: Option<&ChainCheck>) {
        self.total += 1;
        match record.status {
            Status::Pass => self.pass += 1,
            Status::Fail => self.fail += 1,
            Status::VacuousPass => self.vacuous_pass += 1,
        }
        self.max_negative_slack = self.max_negative_slack.min(record.slack);
        if chain.is_some_and(|c| !c.pass) {
            self.chain_fail += 1;
        }
    }

    pub fn from_verifications<'a>(items: impl IntoIterator<Item = &'a Verification>) -> Self {
        let mut s = Summary::default();
        for v in items {
            s.add(&v.record, v.chain.as_ref());
        }
        s
    }

    pub fn ok(&self) -> bool {
        self.fail == 0 && self.chain_fail == 0
    }
}
