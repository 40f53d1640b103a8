//! Zero structure: root finding, classification of zeros against the disk
//! hypotheses, extremal families and seeded instance generation.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Roots closer than `DEFAULT_CLUSTER_TOL * max(1, |z|)` are merged.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-4;
/// Numerically ambiguous distance to a disk boundary.
pub const DEFAULT_MARGIN: f64 = 1e-6;
/// Margin kept between sampled zeros and the disk boundaries.
pub const DEFAULT_SAMPLE_MARGIN: f64 = 1e-3;
/// Largest modulus for sampled distinguished zeros in the lower regime.
pub const DEFAULT_LOWER_CAP: f64 = 2.0;
/// Relative remainder accepted when dividing out a pattern's zeros.
pub const PATTERN_REMAINDER_TOL: f64 = 1e-8;
/// Relative size below which a base-factor coefficient counts as zero.
pub const PATTERN_GAP_EPS: f64 = 1e-9;
/// Relative radius for matching pattern zeros to computed ones.
pub const PATTERN_ZERO_TOL: f64 = 1e-2;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 10_000;

/// Which disk hypotheses a polynomial is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `k >= 1`; distinguished zeros in `|z| < 1`, the rest in `|z| >= k`.
    Upper,
    /// `k <= 1`; distinguished zeros in `|z| > k`, the rest in `|z| <= k`.
    Lower,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Upper => "upper",
            Regime::Lower => "lower",
        }
    }

    fn check_k(self, k: f64) -> Result<()> {
        let ok = k.is_finite()
            && match self {
                Regime::Upper => k >= 1.0,
                Regime::Lower => k > 0.0 && k <= 1.0,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("k = {k} is not admissible for the {self} regime")))
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(Regime::Upper),
            "lower" => Ok(Regime::Lower),
            other => Err(Error::InvalidParameter(format!("unknown regime {other:?}"))),
        }
    }
}

/// A distinguished zero `z_j` of multiplicity `t_j`; serialized as `[re, im, t]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64, usize)", into = "(f64, f64, usize)")]
pub struct DistinguishedZero {
    pub zero: Complex64,
    pub mult: usize,
}

impl DistinguishedZero {
    pub fn new(zero: Complex64, mult: usize) -> Self {
        Self { zero, mult }
    }

    pub fn modulus(&self) -> f64 {
        self.zero.norm()
    }
}

impl From<(f64, f64, usize)> for DistinguishedZero {
    fn from((re, im, mult): (f64, f64, usize)) -> Self {
        Self { zero: Complex64::new(re, im), mult }
    }
}

impl From<DistinguishedZero> for (f64, f64, usize) {
    fn from(d: DistinguishedZero) -> Self {
        (d.zero.re, d.zero.im, d.mult)
    }
}

/// Zero structure `p = (z - z_m)^{t_m} ... (z - z_0)^{t_0} (a_0 + sum_{v >= mu} a_v z^v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern")]
pub struct ZeroPattern {
    pub n: usize,
    pub k: f64,
    pub regime: Regime,
    pub mu: usize,
    pub distinguished: Vec<DistinguishedZero>,
}

#[derive(Deserialize)]
struct RawPattern {
    n: usize,
    k: f64,
    regime: Regime,
    mu: usize,
    #[serde(default)]
    distinguished: Vec<DistinguishedZero>,
}

impl TryFrom<RawPattern> for ZeroPattern {
    type Error = Error;

    fn try_from(raw: RawPattern) -> Result<Self> {
        ZeroPattern::new(raw.n, raw.k, raw.regime, raw.mu, raw.distinguished)
    }
}

impl ZeroPattern {
    pub fn new(
        n: usize,
        k: f64,
        regime: Regime,
        mu: usize,
        distinguished: Vec<DistinguishedZero>,
    ) -> Result<Self> {
        regime.check_k(k)?;
        let pattern = Self { n, k, regime, mu, distinguished };
        let s = pattern.distinguished_degree();
        if pattern.distinguished.iter().any(|d| d.mult == 0) {
            return Err(Error::InvalidParameter("multiplicities must be positive".into()));
        }
        if n == 0 || s + 1 > n {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= sum t_j <= n - 1, got sum t_j = {s}, n = {n}"
            )));
        }
        if mu < 1 || mu > n - s {
            return Err(Error::InvalidParameter(format!("need 1 <= mu <= n - sum t_j, got mu = {mu}")));
        }
        for d in &pattern.distinguished {
            let r = d.modulus();
            let inside = match regime {
                Regime::Upper => r < 1.0,
                Regime::Lower => r > k,
            };
            if !inside {
                return Err(Error::InvalidParameter(format!(
                    "distinguished zero of modulus {r} violates the {regime} regime"
                )));
            }
        }
        Ok(pattern)
    }

    /// `sum t_j`.
    pub fn distinguished_degree(&self) -> usize {
        self.distinguished.iter().map(|d| d.mult).sum()
    }

    /// Degree of the lacunary base factor.
    pub fn base_degree(&self) -> usize {
        self.n - self.distinguished_degree()
    }

    /// Checks that `other` (typically a classification of the same
    /// polynomial) has this pattern's regime, `k`, degree and distinguished
    /// zeros. Computed multiple roots scatter, so each classified zero is
    /// assigned to the nearest pattern zero, which must lie within
    /// `zero_tol * (1 + |z|)`, and assigned multiplicities must add up to `t`.
    /// Pattern zeros closer than that to each other are compared as one
    /// cluster, since the split between them is not observable.
    pub fn check_matches(&self, other: &ZeroPattern, zero_tol: f64) -> Result<()> {
        let mismatch = |what: String| Err(Error::Mismatch(what));
        if self.regime != other.regime || self.k != other.k {
            return mismatch(format!(
                "regime/k {}/{} vs {}/{}",
                self.regime, self.k, other.regime, other.k
            ));
        }
        if self.n != other.n {
            return mismatch(format!("degree {} vs {}", self.n, other.n));
        }
        if self.distinguished_degree() != other.distinguished_degree() {
            return mismatch(format!(
                "distinguished degree {} vs {}",
                self.distinguished_degree(),
                other.distinguished_degree()
            ));
        }
        let zs = &self.distinguished;
        let radius = |d: &DistinguishedZero| zero_tol * (1.0 + d.modulus());
        // cluster[i]: smallest index reachable from i through close pairs
        let mut cluster: Vec<usize> = (0..zs.len()).collect();
        loop {
            let mut changed = false;
            for i in 0..zs.len() {
                for j in 0..zs.len() {
                    let close = (zs[i].zero - zs[j].zero).norm() <= radius(&zs[i]).max(radius(&zs[j]));
                    if close && cluster[j] < cluster[i] {
                        cluster[i] = cluster[j];
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut assigned = vec![0usize; zs.len()];
        for e in &other.distinguished {
            let nearest = zs
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1.zero - e.zero).norm().total_cmp(&(b.1.zero - e.zero).norm()));
            match nearest {
                Some((i, d)) if (d.zero - e.zero).norm() <= radius(d) => assigned[cluster[i]] += e.mult,
                _ => return mismatch(format!("unexpected distinguished zero {} (t = {})", e.zero, e.mult)),
            }
        }
        for (i, d) in zs.iter().enumerate() {
            if cluster[i] != i {
                continue;
            }
            let expected: usize = (0..zs.len()).filter(|&j| cluster[j] == i).map(|j| zs[j].mult).sum();
            if assigned[i] != expected {
                return mismatch(format!("{} classified zeros near {} (t = {expected})", assigned[i], d.zero));
            }
        }
        Ok(())
    }

    /// Divides `p` by the distinguished factors and checks that they divide
    /// it (relative remainder at most `PATTERN_REMAINDER_TOL`) and that the
    /// quotient has gap index at least `mu`.
    pub fn check_base(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.degree() != self.n {
            return Err(Error::Mismatch(format!("degree {} vs pattern n = {}", p.degree(), self.n)));
        }
        let mut base = p.clone();
        for d in &self.distinguished {
            for _ in 0..d.mult {
                let r = d.modulus();
                let scale: f64 =
                    base.coeffs().iter().enumerate().map(|(j, a)| a.norm() * r.max(1.0).powi(j as i32)).sum();
                let residual = base.eval(d.zero).norm();
                // divide out the smaller zeros from the top, the larger ones from the bottom
                let (q, _) = match self.regime {
                    Regime::Upper => base.deflate(d.zero)?,
                    Regime::Lower => base.deflate_backward(d.zero)?,
                };
                if residual > PATTERN_REMAINDER_TOL * scale {
                    return Err(Error::Mismatch(format!("{} is not a zero of multiplicity {}", d.zero, d.mult)));
                }
                base = q;
            }
        }
        let mu = balanced_gap_index(&base);
        if mu < self.mu {
            return Err(Error::Mismatch(format!("base factor has gap index {mu} below {}", self.mu)));
        }
        Ok(base)
    }
}

/// All roots with multiplicity, from the eigenvalues of the companion matrix
/// of the monic normalization; roots closer than `cluster_tol * max(1, |z|)`
/// are merged into their centroid. Exact zero low-order coefficients give an
/// exact root at the origin.
pub fn roots(p: &Polynomial, cluster_tol: f64) -> Result<Vec<(Complex64, usize)>> {
    if p.degree() == 0 {
        return Err(Error::InvalidParameter("a constant has no roots".into()));
    }
    let coeffs = p.coeffs();
    let zero_mult = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let rest = &coeffs[zero_mult..];
    let d = rest.len() - 1;
    let lead = rest[d];
    let mut found: Vec<Complex64> = Vec::with_capacity(p.degree());
    found.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zero_mult));
    match d {
        0 => {}
        1 => found.push(-rest[0] / lead),
        _ => {
            let eig = companion_eigenvalues(rest)
                .ok_or_else(|| Error::RootFinding(format!("Schur iteration did not converge (degree {d})")))?;
            found.extend(eig);
        }
    }
    Ok(cluster(found, cluster_tol))
}

/// Eigenvalues of the companion matrix of `coeffs` (ascending, nonzero ends).
/// Highly symmetric inputs can stall the shifted QR iteration, so on failure
/// the variable is rotated, `z = w e^{i phi}`, and the roots rotated back.
fn companion_eigenvalues(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    for phi in [0.0, 0.29, 1.1, 2.3, 0.013] {
        let w = Complex64::cis(phi);
        let rotated: Vec<Complex64> = coeffs.iter().enumerate().map(|(j, &a)| a * w.powu(j as u32)).collect();
        let lead = rotated[d];
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for i in 1..d {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..d {
            m[(i, d - 1)] = -rotated[i] / lead;
        }
        let Some(eig) = m.try_schur(SCHUR_EPS, SCHUR_MAX_ITER).and_then(|s| s.eigenvalues()) else {
            continue;
        };
        if eig.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Some(eig.iter().map(|&z| z * w).collect());
        }
    }
    None
}

fn cluster(points: Vec<Complex64>, tol: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = points[i].norm().max(points[j].norm()).max(1.0);
            if (points[i] - points[j]).norm() <= tol * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == root) {
            Some(g) => {
                g.1 += points[i];
                g.2 += 1;
            }
            None => groups.push((root, points[i], 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> =
        groups.into_iter().map(|(_, sum, m)| (sum / m as f64, m)).collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}

/// Partitions the zeros of `p` into distinguished and remaining ones for the
/// given regime, and returns the resulting pattern.
///
/// Zeros within `margin` of `|z| = k` count as lying on that circle, which
/// both regimes allow for the remaining zeros. In the upper regime a zero
/// within `margin` of `|z| = 1` (and not of `|z| = k`) is ambiguous.
pub fn classify(p: &Polynomial, k: f64, regime: Regime, margin: f64) -> Result<ZeroPattern> {
    regime.check_k(k)?;
    let n = p.degree();
    if n == 0 {
        return Err(Error::Hypotheses("a constant has no zero structure".into()));
    }
    let mut distinguished = Vec::new();
    let mut remaining = Vec::new();
    for (z, t) in roots(p, DEFAULT_CLUSTER_TOL)? {
        let r = z.norm();
        match regime {
            Regime::Upper => {
                if r >= k - margin {
                    remaining.push((z, t));
                } else if r < 1.0 - margin {
                    distinguished.push(DistinguishedZero::new(z, t));
                } else if r <= 1.0 + margin {
                    return Err(Error::AmbiguousRoot(1.0));
                } else {
                    return Err(Error::Hypotheses(format!(
                        "zero of modulus {r} lies between |z| = 1 and |z| = {k}"
                    )));
                }
            }
            Regime::Lower => {
                if r <= k + margin {
                    remaining.push((z, t));
                } else {
                    distinguished.push(DistinguishedZero::new(z, t));
                }
            }
        }
    }
    if remaining.is_empty() {
        return Err(Error::Hypotheses("no zeros remain for the base factor".into()));
    }
    let base = Polynomial::from_roots(&remaining, p.leading())?;
    ZeroPattern::new(n, k, regime, balanced_gap_index(&base), distinguished)
}

/// Gap index of `p(rho z)` with `rho = |a_0 / a_d|^{1/d}`, which evens out
/// the coefficient sizes when all zeros are small or all large. A vanishing
/// constant term only admits `mu = 1`; a constant gets its degree, 0.
fn balanced_gap_index(p: &Polynomial) -> usize {
    let d = p.degree();
    let c = p.coeffs();
    if d == 0 {
        return 1;
    }
    let rho = (c[0].norm() / c[d].norm()).powf(1.0 / d as f64);
    if rho == 0.0 || !rho.is_finite() {
        return 1;
    }
    let balanced: Vec<Complex64> = c.iter().enumerate().map(|(j, &a)| a * rho.powi(j as i32)).collect();
    match Polynomial::with_threshold(balanced, 0.0).and_then(|b| b.gap_index(PATTERN_GAP_EPS)) {
        Ok(mu) => mu,
        Err(_) => 1,
    }
}

/// `z^s (z + k)^{n - s}`.
pub fn make_sharp_monomial_family(n: usize, s: usize, k: f64) -> Result<Polynomial> {
    if n == 0 || s >= n || !(k >= 1.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("need 0 <= s <= n - 1 and k >= 1, got n = {n}, s = {s}, k = {k}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    Polynomial::from_roots(&[(zero, s), (Complex64::new(-k, 0.0), n - s)], Complex64::new(1.0, 0.0))
}

/// `(z^mu + k^mu)^{n / mu}`.
pub fn make_sharp_gap_family(n: usize, mu: usize, k: f64) -> Result<Polynomial> {
    if mu == 0 || n == 0 || n % mu != 0 {
        return Err(Error::InvalidParameter(format!("mu = {mu} must divide n = {n}")));
    }
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < k <= 1, got {k}")));
    }
    let c = Complex64::new(k.powi(mu as i32), 0.0);
    make_gap_product(mu, &vec![c; n / mu])
}

/// `prod_i (z^mu + c_i)`, expanded as a polynomial in `z^mu`.
pub fn make_gap_product(mu: usize, cs: &[Complex64]) -> Result<Polynomial> {
    if mu == 0 {
        return Err(Error::InvalidParameter("mu must be positive".into()));
    }
    if cs.iter().any(|c| c.norm() == 0.0) {
        return Err(Error::InvalidParameter("gap factors need c_i != 0".into()));
    }
    // roots of the polynomial in w = z^mu are -c_i
    let roots: Vec<(Complex64, usize)> = cs.iter().map(|&c| (-c, 1)).collect();
    let in_w = Polynomial::from_roots(&roots, Complex64::new(1.0, 0.0))?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); in_w.degree() * mu + 1];
    for (j, &a) in in_w.coeffs().iter().enumerate() {
        coeffs[j * mu] = a;
    }
    Polynomial::new(coeffs)
}

/// How [`sample_instance`] treats the pattern's distinguished zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroPlacement {
    /// Draw fresh zeros uniformly in the regime's region.
    #[default]
    Resample,
    /// Keep the zeros stored in the pattern.
    Keep,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingOptions {
    pub placement: ZeroPlacement,
    pub margin: f64,
    pub lower_cap: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        Self {
            placement: ZeroPlacement::Resample,
            margin: DEFAULT_SAMPLE_MARGIN,
            lower_cap: DEFAULT_LOWER_CAP,
        }
    }
}

/// A sampled polynomial together with the pattern it realizes (the
/// distinguished zeros actually used).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledInstance {
    #[serde(rename = "poly")]
    pub polynomial: Polynomial,
    pub pattern: ZeroPattern,
}

/// Draws a polynomial with the given zero pattern, deterministically in `seed`.
///
/// Distinguished zeros have modulus uniform in `[0, 1 - margin]` (upper) or
/// `[k + margin, lower_cap]` (lower). Remaining zeros have modulus uniform
/// in `[k, 2k]` (upper) or `[k/20, k]` (lower). For `mu > 1` the base factor
/// is a gap product whose roots have those moduli.
pub fn sample_instance(pattern: &ZeroPattern, seed: u64, opts: SamplingOptions) -> Result<SampledInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = pattern.k;
    let mu = pattern.mu;
    let remaining = pattern.base_degree();
    if mu > 1 && remaining % mu != 0 {
        return Err(Error::Infeasible(format!(
            "base degree {remaining} is not a multiple of mu = {mu}"
        )));
    }
    let (d_lo, d_hi) = match pattern.regime {
        Regime::Upper => (0.0, 1.0 - opts.margin),
        Regime::Lower => (k + opts.margin, opts.lower_cap),
    };
    if d_lo > d_hi {
        return Err(Error::Infeasible(format!("empty distinguished region [{d_lo}, {d_hi}]")));
    }
    let (r_lo, r_hi) = match pattern.regime {
        Regime::Upper => (k, 2.0 * k),
        Regime::Lower => (k / 20.0, k),
    };

    let polar = |lo: f64, hi: f64, rng: &mut ChaCha8Rng| {
        let r = lo + (hi - lo) * rng.random::<f64>();
        Complex64::from_polar(r, TAU * rng.random::<f64>())
    };

    let distinguished: Vec<DistinguishedZero> = pattern
        .distinguished
        .iter()
        .map(|d| match opts.placement {
            ZeroPlacement::Keep => *d,
            ZeroPlacement::Resample => DistinguishedZero::new(polar(d_lo, d_hi, &mut rng), d.mult),
        })
        .collect();

    let lead = polar(0.5, 2.0, &mut rng);
    let base = if mu == 1 {
        let rs: Vec<(Complex64, usize)> = (0..remaining).map(|_| (polar(r_lo, r_hi, &mut rng), 1)).collect();
        Polynomial::from_roots(&rs, lead)?
    } else {
        let cs: Vec<Complex64> = (0..remaining / mu)
            .map(|_| {
                let w = polar(r_lo, r_hi, &mut rng);
                Complex64::from_polar(w.norm().powi(mu as i32), w.arg())
            })
            .collect();
        make_gap_product(mu, &cs)?.scaled(lead)?
    };
    let factors: Vec<(Complex64, usize)> = distinguished.iter().map(|d| (d.zero, d.mult)).collect();
    let polynomial = &base * &Polynomial::from_roots(&factors, Complex64::new(1.0, 0.0))?;
    let realized = ZeroPattern::new(pattern.n, k, pattern.regime, mu, distinguished)?;
    Ok(SampledInstance { polynomial, pattern: realized })
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Per-instance seed from a base seed and an instance index.
pub fn derive_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(index))
}
