//! Seeded standard suites: sharpness families, inequality fuzzing, limit
//! recovery and the proof identities.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::BoundId;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::sweep::{verify_sampled, Skipped, SweepOutput};
use crate::verify::{
    evaluate, limit_recovery, proof_identity_probe, sharpness_gap, LimitRecovery, SharpFamily, SharpnessReport,
    Tolerance,
};
use crate::zeros::{
    derive_seed, sample_instance, DistinguishedZero, Regime, SampledInstance, SamplingOptions, ZeroPattern,
    ZeroPlacement,
};

/// Extremal families run by [`sharpness_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SharpKind {
    Monomial,
    Gap,
    Binomial,
    Bernstein,
}

impl FromStr for SharpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monomial" => Ok(SharpKind::Monomial),
            "gap" => Ok(SharpKind::Gap),
            "binomial" => Ok(SharpKind::Binomial),
            "bernstein" => Ok(SharpKind::Bernstein),
            _ => Err(Error::InvalidParameter(format!("unknown family {s:?}"))),
        }
    }
}

/// Sharpness reports for a family over its standard parameter grid with
/// degree at most `n_max`:
/// - monomial: `2 <= n`, `1 <= s < n`, `k in {1, 2, 3}`, `alpha in {1, 2, 5}`,
///   against both polar upper forms;
/// - gap: `mu in {1, 2, 3}`, `n/mu in 1..=4`, `k in {1/4, 1/2, 1}`;
/// - binomial: `2 <= n`, `k in {1, 2, 3}` (upper) and `{1/4, 1/2, 1}` (lower);
/// - bernstein: `1 <= n`, `a = (n, 1 - n/2)`.
pub fn sharpness_suite(kind: SharpKind, n_max: usize) -> Result<Vec<SharpnessReport>> {
    let mut families = Vec::new();
    let mut with_origin = Vec::new();
    match kind {
        SharpKind::Monomial => {
            for n in 2..=n_max {
                for s in 1..n {
                    for k in [1.0, 2.0, 3.0] {
                        for alpha in [1.0, 2.0, 5.0] {
                            let f = SharpFamily::Monomial { n, s, k, alpha };
                            families.push(f);
                            with_origin.push(f);
                        }
                    }
                }
            }
        }
        SharpKind::Gap => {
            for mu in 1..=3 {
                for q in 1..=4 {
                    for k in [0.25, 0.5, 1.0] {
                        if mu * q <= n_max {
                            families.push(SharpFamily::Gap { n: mu * q, mu, k });
                        }
                    }
                }
            }
        }
        SharpKind::Binomial => {
            for n in 2..=n_max {
                for k in [1.0, 2.0, 3.0] {
                    families.push(SharpFamily::Binomial { n, k, regime: Regime::Upper });
                }
                for k in [0.25, 0.5, 1.0] {
                    families.push(SharpFamily::Binomial { n, k, regime: Regime::Lower });
                }
            }
        }
        SharpKind::Bernstein => {
            for n in 1..=n_max {
                families.push(SharpFamily::Bernstein { n, a: Complex64::new(n as f64, 1.0 - n as f64 / 2.0) });
            }
        }
    }
    let mut reports = families.into_par_iter().map(sharpness_gap).collect::<Result<Vec<_>>>()?;
    let origin = with_origin
        .into_par_iter()
        .map(|f| sharpness_against(f, BoundId::PolarUpperOrigin))
        .collect::<Result<Vec<_>>>()?;
    reports.extend(origin);
    Ok(reports)
}

/// Like [`sharpness_gap`] with an explicit bound.
pub fn sharpness_against(family: SharpFamily, bound_id: BoundId) -> Result<SharpnessReport> {
    let p = family.polynomial()?;
    let pattern = family.pattern()?;
    let v = evaluate("sharpness", &p, &pattern, family.alpha(), bound_id, Tolerance::SHARP)?;
    let (lhs, rhs) = (v.record.lhs, v.record.rhs);
    Ok(SharpnessReport { family, bound_id, lhs, rhs, closed_form: family.closed_form(), gap: (lhs - rhs).abs() / rhs.abs() })
}

/// Theorem families exercised by the fuzz suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FuzzFamily {
    Thm1,
    Thm2,
    Thm3,
    Cor5,
    Cor6,
    Thm8,
    Cor10,
}

impl FuzzFamily {
    pub const ALL: [FuzzFamily; 7] = [
        FuzzFamily::Thm1,
        FuzzFamily::Thm2,
        FuzzFamily::Thm3,
        FuzzFamily::Cor5,
        FuzzFamily::Cor6,
        FuzzFamily::Thm8,
        FuzzFamily::Cor10,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FuzzFamily::Thm1 => "thm1",
            FuzzFamily::Thm2 => "thm2",
            FuzzFamily::Thm3 => "thm3",
            FuzzFamily::Cor5 => "cor5",
            FuzzFamily::Cor6 => "cor6",
            FuzzFamily::Thm8 => "thm8",
            FuzzFamily::Cor10 => "cor10",
        }
    }

    pub fn regime(self) -> Regime {
        match self {
            FuzzFamily::Thm1 | FuzzFamily::Thm8 | FuzzFamily::Cor10 => Regime::Lower,
            _ => Regime::Upper,
        }
    }

    /// Bounds checked on each instance.
    pub fn bound_ids(self) -> &'static [BoundId] {
        match self {
            FuzzFamily::Thm1 => &[BoundId::ZeroOutsideLower],
            FuzzFamily::Thm2 => &[BoundId::ZeroInsideUpper],
            FuzzFamily::Thm3 => &[BoundId::PolarUpper],
            FuzzFamily::Cor5 => &[BoundId::PolarUpperOrigin],
            FuzzFamily::Cor6 => &[BoundId::PolarUpperTwoZeros, BoundId::ComposedUpper],
            FuzzFamily::Thm8 => &[BoundId::PolarLower],
            FuzzFamily::Cor10 => &[BoundId::PolarLowerTwoZeros, BoundId::ComposedLower],
        }
    }

    fn zero_count(self, rng: &mut ChaCha8Rng) -> usize {
        match self {
            FuzzFamily::Cor6 | FuzzFamily::Cor10 => 2,
            FuzzFamily::Cor5 => 1,
            _ => usize::from(rng.random_bool(0.75)),
        }
    }
}

impl fmt::Display for FuzzFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FuzzFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FuzzFamily::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown fuzz family {s:?}")))
    }
}

pub const FUZZ_MAX_DEGREE: usize = 12;
pub const FUZZ_MAX_MULT: usize = 3;
pub const FUZZ_MAX_ALPHA: f64 = 20.0;

/// Draws a random instance of `family`: degree `2..=12`, `mu in {1, 2}`,
/// distinguished multiplicities `1..=3`, `k` uniform in `[1, 3]` (upper) or
/// `[1/5, 1]` (lower), and `alpha` with uniform phase and `|alpha|` uniform
/// in `[1, 20]`.
pub fn fuzz_instance(family: FuzzFamily, seed: u64) -> Result<(SampledInstance, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let regime = family.regime();
    let k = match regime {
        Regime::Upper => rng.random_range(1.0..=3.0),
        Regime::Lower => rng.random_range(0.2..=1.0),
    };
    let m = family.zero_count(&mut rng);
    let (n, mu, mults) = loop {
        let n = rng.random_range(2..=FUZZ_MAX_DEGREE);
        let mu = rng.random_range(1..=2);
        let mults: Vec<usize> = (0..m).map(|_| rng.random_range(1..=FUZZ_MAX_MULT)).collect();
        let base = n as isize - mults.iter().sum::<usize>() as isize;
        if base >= mu as isize && base as usize % mu == 0 {
            break (n, mu, mults);
        }
    };
    let placeholder = match (family, regime) {
        (FuzzFamily::Cor5, _) => 0.0,
        (_, Regime::Upper) => 0.5,
        (_, Regime::Lower) => (k + 2.0) / 2.0,
    };
    let zeros = mults.iter().map(|&t| DistinguishedZero::new(Complex64::new(placeholder, 0.0), t)).collect();
    let pattern = ZeroPattern::new(n, k, regime, mu, zeros)?;
    let placement = if family == FuzzFamily::Cor5 { ZeroPlacement::Keep } else { ZeroPlacement::Resample };
    let inst = sample_instance(&pattern, rng.random(), SamplingOptions { placement, ..Default::default() })?;
    let alpha = Complex64::from_polar(rng.random_range(1.0..=FUZZ_MAX_ALPHA), TAU * rng.random::<f64>());
    Ok((inst, alpha))
}

/// Runs `count` seeded instances of `family`.
pub fn fuzz_suite(family: FuzzFamily, count: usize, base_seed: u64, tol: Tolerance) -> SweepOutput {
    let results: Vec<_> = (0..count)
        .into_par_iter()
        .map(|i| {
            let id = format!("{family}-{i:05}");
            match fuzz_instance(family, derive_seed(base_seed, i as u64)) {
                Ok((inst, alpha)) => verify_sampled(&id, &inst, &[alpha], family.bound_ids(), tol),
                Err(e) => (vec![], vec![Skipped { id, bound_id: None, reason: e.to_string() }]),
            }
        })
        .collect();
    let (mut done, mut skipped) = (Vec::new(), Vec::new());
    for (d, s) in results {
        done.extend(d);
        skipped.extend(s);
    }
    SweepOutput::from_parts(done, skipped)
}

/// Limit recovery on `count` seeded instances with at most one distinguished
/// zero, using the thm3/thm2 pair (upper) or the thm8/thm1 pair (lower).
pub fn limit_suite(regime: Regime, count: usize, base_seed: u64, alpha_grid: &[f64]) -> Result<Vec<LimitRecovery>> {
    let family = match regime {
        Regime::Upper => FuzzFamily::Thm3,
        Regime::Lower => FuzzFamily::Thm8,
    };
    (0..count)
        .into_par_iter()
        .map(|i| {
            let (inst, _) = fuzz_instance(family, derive_seed(base_seed, i as u64))?;
            limit_recovery(&inst.polynomial, &inst.pattern, alpha_grid)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityProbe {
    pub n: usize,
    /// `n * max_{|z|=1} |p|`, the scale of both residuals.
    pub scale: f64,
    pub inequality: f64,
    pub identity: f64,
}

/// Random polynomial of degree `1..=max_degree` with coefficients uniform in
/// the square `[-1, 1]^2` and a nonzero leading coefficient.
pub fn random_polynomial(seed: u64, max_degree: usize) -> Result<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_degree);
    let mut coeffs: Vec<Complex64> =
        (0..=n).map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))).collect();
    coeffs[n] = Complex64::from_polar(rng.random_range(0.5..=1.5), TAU * rng.random::<f64>());
    Polynomial::new(coeffs)
}

/// Proof-identity residuals on `count` random polynomials of degree `<= max_degree`.
pub fn identity_suite(count: usize, base_seed: u64, max_degree: usize, samples: usize) -> Result<Vec<IdentityProbe>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let p = random_polynomial(derive_seed(base_seed, i as u64), max_degree)?;
            let n = p.degree();
            let m1 = crate::extrema::max_modulus(&p, 1.0, Tolerance::default().engine()).value;
            let (inequality, identity) = proof_identity_probe(&p, samples)?;
            Ok(IdentityProbe { n, scale: n as f64 * m1, inequality, identity })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuzz_instances_match_family() {
        for family in FuzzFamily::ALL {
            for i in 0..20 {
                let (inst, alpha) = fuzz_instance(family, i).unwrap();
                let p = &inst.pattern;
                assert_eq!(p.regime, family.regime());
                assert!(p.n <= FUZZ_MAX_DEGREE && p.mu <= 2);
                assert!((1.0..=FUZZ_MAX_ALPHA + 1e-12).contains(&alpha.norm()));
                match family {
                    FuzzFamily::Cor5 => assert_eq!(p.distinguished[0].modulus(), 0.0),
                    FuzzFamily::Cor6 | FuzzFamily::Cor10 => assert_eq!(p.distinguished.len(), 2),
                    _ => assert!(p.distinguished.len() <= 1),
                }
            }
        }
    }

    #[test]
    fn small_fuzz_run_passes() {
        for family in FuzzFamily::ALL {
            let out = fuzz_suite(family, 10, 5, Tolerance::default());
            assert_eq!(out.summary.fail, 0, "{family}: {:?}", out.summary);
        }
    }

    #[test]
    fn sharpness_suites_small() {
        for kind in [SharpKind::Monomial, SharpKind::Gap, SharpKind::Binomial, SharpKind::Bernstein] {
            for r in sharpness_suite(kind, 4).unwrap() {
                assert!(r.gap <= 1e-8, "{r:?}");
            }
        }
    }
}
