//! Maximum and minimum of `|p(z)|` over a circle `|z| = r`.
//!
//! A uniform angular grid isolates candidate brackets, and each candidate is
//! refined by golden-section search until `bracket_width * L <= tol`, where
//! `L` is an angular Lipschitz constant for `theta -> |p(r e^{i theta})|`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;
use crate::zeros::{roots, DEFAULT_CLUSTER_TOL};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const SHARP_TOL: f64 = 1e-11;

const MIN_GRID: usize = 4096;
const GRID_PER_DEGREE: usize = 64;
const MAX_GOLDEN_STEPS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Max,
    Min,
}

/// A computed extremum of `|p|` on a circle.
///
/// For `Max`, the true maximum is at most `value + error_radius`; for `Min`,
/// the true minimum is at least `value - error_radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremumResult {
    pub value: f64,
    pub witness_angle: f64,
    pub error_radius: f64,
    pub kind: ExtremumKind,
}

impl ExtremumResult {
    /// Certified upper end for a max, certified lower end (clamped at 0) for a min.
    pub fn certified_bound(&self) -> f64 {
        match self.kind {
            ExtremumKind::Max => self.value + self.error_radius,
            ExtremumKind::Min => (self.value - self.error_radius).max(0.0),
        }
    }
}

/// `L = sum_v v |a_v| r^v`, which dominates `|d/dtheta p(r e^{i theta})|`.
pub fn angular_lipschitz_bound(p: &Polynomial, r: f64) -> f64 {
    p.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(v, a)| v as f64 * a.norm() * r.powi(v as i32))
        .sum()
}

pub fn max_modulus(p: &Polynomial, r: f64, tol: f64) -> ExtremumResult {
    search(p, r, tol, ExtremumKind::Max)
}

/// Like [`max_modulus`] on the negated objective. A root within
/// `tol / max(L, 1)` of the circle short-circuits to value 0.
pub fn min_modulus(p: &Polynomial, r: f64, tol: f64) -> ExtremumResult {
    assert!(tol > 0.0 && r > 0.0, "min_modulus needs tol > 0 and r > 0");
    let lip = angular_lipschitz_bound(p, r);
    let reach = tol / lip.max(1.0);
    if p.degree() > 0 {
        if let Ok(rts) = roots(p, DEFAULT_CLUSTER_TOL) {
            let hit = rts
                .iter()
                .filter(|(z, _)| (z.norm() - r).abs() <= reach)
                .min_by(|a, b| (a.0.norm() - r).abs().total_cmp(&(b.0.norm() - r).abs()));
            if let Some((z, _)) = hit {
                return ExtremumResult {
                    value: 0.0,
                    witness_angle: normalize_angle(z.arg()),
                    error_radius: tol,
                    kind: ExtremumKind::Min,
                };
            }
        }
    }
    search(p, r, tol, ExtremumKind::Min)
}

fn search(p: &Polynomial, r: f64, tol: f64, kind: ExtremumKind) -> ExtremumResult {
    assert!(tol > 0.0 && r > 0.0, "circle extrema need tol > 0 and r > 0");
    let sign = match kind {
        ExtremumKind::Max => 1.0,
        ExtremumKind::Min => -1.0,
    };
    let n = p.degree();
    let lip = angular_lipschitz_bound(p, r);
    let m = MIN_GRID.max(GRID_PER_DEGREE * n);
    let h = TAU / m as f64;
    let objective = |center: Complex64, t: f64| sign * p.eval(center * Complex64::cis(t)).norm();

    let grid: Vec<f64> = (0..m)
        .map(|i| sign * p.eval(Complex64::from_polar(r, i as f64 * h)).norm())
        .collect();

    // grid-local optima, best first; index order breaks ties
    let mut candidates: Vec<usize> = (0..m)
        .filter(|&i| grid[i] >= grid[(i + m - 1) % m] && grid[i] >= grid[(i + 1) % m])
        .collect();
    candidates.sort_by(|&a, &b| grid[b].total_cmp(&grid[a]).then(a.cmp(&b)));
    candidates.truncate(8.max(2 * n + 4));

    let mut best: Option<(f64, f64, f64)> = None; // (objective, angle, width)
    for &i in &candidates {
        let theta = i as f64 * h;
        let center = Complex64::from_polar(r, theta);
        let (t, val, width) = golden_refine(|t| objective(center, t), -h, h, grid[i], lip, tol);
        if best.is_none_or(|(b, _, _)| val > b) {
            best = Some((val, theta + t, width));
        }
    }
    let (_, angle, width) = best.expect("grid always has a local optimum");
    let witness_angle = normalize_angle(angle);
    ExtremumResult {
        value: p.eval(Complex64::from_polar(r, witness_angle)).norm(),
        witness_angle,
        error_radius: width * lip,
        kind,
    }
}

/// Golden-section maximization of `f` on `[lo, hi]`, starting from the known
/// value `f(0) = at_zero`. Returns the best point seen, its value, and the
/// final bracket width.
fn golden_refine(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    at_zero: f64,
    lip: f64,
    tol: f64,
) -> (f64, f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = (0.0, at_zero);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..MAX_GOLDEN_STEPS {
        if (hi - lo) * lip <= tol {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
        for (x, fx) in [(x1, f1), (x2, f2)] {
            if fx > best.1 {
                best = (x, fx);
            }
        }
    }
    (best.0, best.1, hi - lo)
}

fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Angular distance on the circle, in `[0, pi]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d).min(PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lipschitz_examples() {
        let z = Polynomial::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(angular_lipschitz_bound(&z, 1.0), 1.0);
        let zn = Polynomial::monomial(c(1.0, 0.0), 9).unwrap();
        assert_eq!(angular_lipschitz_bound(&zn, 1.0), 9.0);
        let p = Polynomial::from_real(&[4.0, 4.0, 1.0]).unwrap();
        assert_eq!(angular_lipschitz_bound(&p, 1.0), 6.0);
    }

    #[test]
    fn max_of_positive_coefficients_is_at_one() {
        let p = Polynomial::from_roots(&[(c(-2.0, 0.0), 3)], c(1.0, 0.0)).unwrap();
        let res = max_modulus(&p, 1.0, DEFAULT_TOL);
        assert!((res.value - 27.0).abs() < 1e-12);
        assert!(angle_distance(res.witness_angle, 0.0) < 1e-6);
        assert!(res.error_radius <= DEFAULT_TOL);
        assert!((0.0..TAU).contains(&res.witness_angle));

        let p = Polynomial::from_real(&[1.0, 1.0, 1.0]).unwrap();
        let res = max_modulus(&p, 0.5, DEFAULT_TOL);
        assert!((res.value - 1.75).abs() < 1e-12);
        assert!(angle_distance(res.witness_angle, 0.0) < 1e-6);
    }

    #[test]
    fn max_of_sharp_monomial_family() {
        // z^s (z + k)^(n - s) peaks at z = 1 with value (1 + k)^(n - s)
        for (n, s, k) in [(3usize, 1usize, 2.0f64), (5, 2, 1.0), (6, 0, 3.0)] {
            let p = Polynomial::from_roots(&[(c(0.0, 0.0), s), (c(-k, 0.0), n - s)], c(1.0, 0.0)).unwrap();
            let res = max_modulus(&p, 1.0, SHARP_TOL);
            let expected = (1.0 + k).powi((n - s) as i32);
            assert!((res.value - expected).abs() <= 1e-12 * expected);
        }
    }

    #[test]
    fn min_examples() {
        let p = Polynomial::from_roots(&[(c(-2.0, 0.0), 3)], c(1.0, 0.0)).unwrap();
        let res = min_modulus(&p, 2.0, DEFAULT_TOL);
        assert_eq!(res.value, 0.0);
        assert!(angle_distance(res.witness_angle, PI) < 1e-6);

        let p = Polynomial::from_real(&[1.0, 1.0, 1.0]).unwrap();
        // |p|^2 = 21/16 + 5/4 cos t + 1/2 cos 2t is smallest at cos t = -5/8
        let res = min_modulus(&p, 0.5, DEFAULT_TOL);
        assert!((res.value - 27f64.sqrt() / 8.0).abs() < 1e-12);
        let t = (-0.625f64).acos();
        assert!(angle_distance(res.witness_angle, t).min(angle_distance(res.witness_angle, -t)) < 1e-5);

        let p = Polynomial::from_real(&[0.0, -2.0, 1.0]).unwrap();
        let res = min_modulus(&p, 0.5, DEFAULT_TOL);
        assert!((res.value - 0.75).abs() < 1e-12);
        assert!(angle_distance(res.witness_angle, 0.0) < 1e-5);
    }

    #[test]
    fn constant_polynomial() {
        let p = Polynomial::constant(c(-3.0, 4.0)).unwrap();
        let hi = max_modulus(&p, 1.0, DEFAULT_TOL);
        let lo = min_modulus(&p, 2.0, DEFAULT_TOL);
        assert_eq!(hi.value, 5.0);
        assert_eq!(lo.value, 5.0);
        assert_eq!(hi.error_radius, 0.0);
    }

    #[test]
    fn witness_reproduces_value() {
        let p = Polynomial::new(vec![c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1), c(0.2, 0.9)]).unwrap();
        for r in [0.5, 1.0, 2.0] {
            for res in [max_modulus(&p, r, DEFAULT_TOL), min_modulus(&p, r, DEFAULT_TOL)] {
                let at = p.eval(Complex64::from_polar(r, res.witness_angle)).norm();
                assert!((at - res.value).abs() <= 1e-12 * (1.0 + res.value));
                assert!(res.error_radius <= DEFAULT_TOL);
            }
        }
    }
}
