//! Acceptance suite. Runs without the test harness so that every criterion
//! prints exactly one PASS/FAIL line; exits nonzero if any criterion fails.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use polarineq::bounds::{self, CircleExtrema, Shape};
use polarineq::extrema::{max_modulus, min_modulus, SHARP_TOL};
use polarineq::suite::{
    fuzz_suite, identity_suite, limit_suite, random_polynomial, sharpness_suite, FuzzFamily, SharpKind,
};
use polarineq::verify::{SharpFamily, Tolerance};
use polarineq::zeros::derive_seed;
use polarineq::{Polynomial, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 0x5eed_2024;

struct Outcome {
    ok: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c1_monomial_sharpness() -> Outcome {
    let reports = sharpness_suite(SharpKind::Monomial, 8).expect("monomial suite");
    let mut worst_closed: f64 = 0.0;
    let mut worst_rhs: f64 = 0.0;
    for r in &reports {
        let SharpFamily::Monomial { n, s, k, alpha } = r.family else { unreachable!() };
        // ((n-s)k + a n + a s k)(1+k)^{n-s-1}
        let expected = ((n - s) as f64 * k + alpha * n as f64 + alpha * s as f64 * k) * (1.0 + k).powi((n - s - 1) as i32);
        worst_closed = worst_closed.max(rel(r.lhs, expected));
        worst_rhs = worst_rhs.max(rel(r.lhs, r.rhs));
    }
    let cases = reports.len() / 2;
    Outcome {
        ok: worst_closed <= 1e-8 && worst_rhs <= 1e-8 && cases == 7 * 3 * 3 * 4,
        detail: format!(
            "{cases} cases x {{thm3, cor5}}; max rel |lhs - closed form| = {worst_closed:.2e}, max rel |lhs - rhs| = {worst_rhs:.2e}"
        ),
    }
}

fn c2_govil_sharpness() -> Outcome {
    let reports = sharpness_suite(SharpKind::Binomial, 8).expect("binomial suite");
    let mut worst: f64 = 0.0;
    let (mut upper, mut lower) = (0, 0);
    for r in &reports {
        let SharpFamily::Binomial { n, k, regime } = r.family else { unreachable!() };
        match regime {
            Regime::Upper => upper += 1,
            Regime::Lower => lower += 1,
        }
        let exact = n as f64 * (1.0 + k).powi(n as i32 - 1);
        worst = worst.max(rel(r.lhs, r.rhs)).max(rel(r.lhs, exact));
    }
    Outcome {
        ok: worst <= 1e-8 && upper == 21 && lower == 21,
        detail: format!("{upper} upper + {lower} lower cases; max rel gap = {worst:.2e}"),
    }
}

fn c3_gap_sharpness() -> Outcome {
    let reports = sharpness_suite(SharpKind::Gap, 12).expect("gap suite");
    let mut worst: f64 = 0.0;
    for r in &reports {
        let SharpFamily::Gap { n, mu, k } = r.family else { unreachable!() };
        let exact = n as f64 * (1.0 + k.powi(mu as i32)).powi((n / mu) as i32 - 1);
        worst = worst.max(rel(r.lhs, r.rhs)).max(rel(r.lhs, exact));
    }
    Outcome {
        ok: worst <= 1e-8 && reports.len() == 36,
        detail: format!("{} cases; max rel gap = {worst:.2e}", reports.len()),
    }
}

fn c4_fuzz() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for family in FuzzFamily::ALL {
        let out = fuzz_suite(family, 1000, derive_seed(SEED, 4), Tolerance::default());
        let s = out.summary;
        let violations = out
            .verifications
            .iter()
            .filter(|v| v.record.slack < -(1e-8 + v.record.lhs_error))
            .count();
        ok &= violations == 0 && s.fail == 0 && s.chain_fail == 0;
        parts.push(format!(
            "{family}: {} rec, {} fail, {} vacuous, {} skipped",
            s.total, violations, s.vacuous_pass, s.skipped
        ));
        for v in out.verifications.iter().filter(|v| v.record.slack < -(1e-8 + v.record.lhs_error)).take(3) {
            eprintln!("  violation: {:?}", v.record);
        }
        for sk in out.skipped.iter().take(3) {
            eprintln!("  skipped: {sk:?}");
        }
    }
    Outcome { ok, detail: parts.join("; ") }
}

/// Gaps must strictly decrease and shrink like `1/alpha` (successive ratio
/// `1e-2` within 10%). The size check `gap(1e6) <= 1e-4 B'` is applied where
/// the derivative bound `B'` is positive; for `B' <= 0` no nonnegative gap
/// can meet it.
fn c5_limit_recovery() -> Outcome {
    let grid = [1e2, 1e4, 1e6];
    let mut ok = true;
    let mut parts = Vec::new();
    for regime in [Regime::Upper, Regime::Lower] {
        let runs = limit_suite(regime, 50, derive_seed(SEED, 5), &grid).expect("limit suite");
        let not_decreasing = runs.iter().filter(|r| !r.strictly_decreasing()).count();
        let bad_rate = runs
            .iter()
            .filter(|r| r.gaps.windows(2).any(|w| ((w[1] / w[0]) / 1e-2 - 1.0).abs() > 0.1))
            .count();
        let positive: Vec<_> = runs.iter().filter(|r| r.bound_derivative > 0.0).collect();
        let too_far = positive.iter().filter(|r| r.gaps[2] > 1e-4 * r.bound_derivative).count();
        let worst = positive.iter().map(|r| r.gaps[2] / r.bound_derivative).fold(0.0f64, f64::max);
        ok &= runs.len() == 50 && not_decreasing == 0 && bad_rate == 0 && too_far == 0;
        parts.push(format!(
            "{regime}: {} instances, {not_decreasing} not decreasing, {bad_rate} off the 1/alpha rate, {too_far} of {} with B' > 0 above 1e-4 B' (worst {worst:.2e})",
            runs.len(),
            positive.len()
        ));
    }
    Outcome { ok, detail: parts.join("; ") }
}

fn c6_identities() -> Outcome {
    let probes = identity_suite(500, derive_seed(SEED, 6), 12, 256).expect("identity suite");
    let worst_ineq = probes.iter().map(|p| p.inequality / p.scale).fold(f64::NEG_INFINITY, f64::max);
    let worst_id = probes.iter().map(|p| p.identity / p.scale).fold(0.0f64, f64::max);
    Outcome {
        ok: probes.len() == 500 && worst_ineq <= 1e-9 && worst_id <= 1e-10,
        detail: format!(
            "500 polys x 256 points; max (|p'|+|q'| - n M1)/(n M1) = {worst_ineq:.2e}, max identity residual/(n M1) = {worst_id:.2e}"
        ),
    }
}

/// Cor 6 display transcribed independently of the library.
fn cor6_display(n: usize, mu: usize, k: f64, a: f64, (r0, t0): (f64, usize), (r1, t1): (f64, usize), m: f64, mk: f64) -> f64 {
    let (nf, t0f, t1f) = (n as f64, t0 as f64, t1 as f64);
    let big_a = (1.0 + r0).powf(t0f + 1.0) * (nf - t0f - t1f) / ((1.0 + k.powf(mu as f64)) * (1.0 - r0));
    let g = ((1.0 + r1) / (1.0 - r1)).powf(t1f);
    let first = t1f * (a + r1) * (1.0 + r1).powf(t1f - 1.0) / (1.0 - r1).powf(t1f)
        + (nf - t1f) * g
        + (a - 1.0) * g * (t0f / (1.0 - r0) + big_a / (1.0 - r0).powf(t0f));
    let second = (a - 1.0) * (1.0 + r1).powf(t1f) * big_a / ((k + r0).powf(t0f) * (k + r1).powf(t1f));
    first * m - second * mk
}

/// Cor 10 display transcribed independently of the library.
fn cor10_display(n: usize, mu: usize, k: f64, a: f64, (r0, t0): (f64, usize), (r1, t1): (f64, usize), m: f64, mk: f64) -> f64 {
    let (nf, t0f, t1f) = (n as f64, t0 as f64, t1 as f64);
    let big_a = (1.0 - r0).abs().powf(t0f) * (nf - t0f - t1f) / (1.0 + k.powf(mu as f64));
    let h = (1.0 - r1).abs().powf(t1f) / (1.0 + r1).powf(t1f);
    let first = (a - 1.0) * (1.0 - r1).abs().powf(t1f) * big_a / ((1.0 + r0).powf(t0f) * (1.0 + r1).powf(t1f))
        - ((nf - t1f) * h + t0f * (a + 1.0) * h / (1.0 + r0))
        - t1f * (a + r1) / (1.0 + r1);
    let second = (a - 1.0) * (1.0 - r1).abs().powf(t1f) * big_a
        / (k.powf(nf - t0f - t1f - mu as f64) * (k + r0).powf(t0f) * (k + r1).powf(t1f));
    first * m + second * mk
}

fn c7_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(SEED, 7));
    let mut worst = [0.0f64; 6];
    for _ in 0..1000 {
        let n = rng.random_range(4..=14usize);
        let t0 = rng.random_range(1..=(n - 2) / 2);
        let t1 = rng.random_range(1..=n - 1 - t0);
        let mu = rng.random_range(1..=n - t0 - t1);
        let alpha = rng.random_range(1.0..50.0);
        let e = CircleExtrema { max_unit: rng.random_range(0.5..100.0), min_k: rng.random_range(0.0..10.0) };
        let ku = rng.random_range(1.0..4.0);
        let kl = rng.random_range(0.1..1.0);
        let up = Shape { n, mu, k: ku };
        let lo = Shape { n, mu, k: kl };
        let (ru0, ru1) = (rng.random_range(0.0..0.99), rng.random_range(0.0..0.99));
        let (rl0, rl1) = (rng.random_range(kl + 1e-3..3.0), rng.random_range(kl + 1e-3..3.0));

        let cor5 = bounds::polar_upper_origin(up, t0, alpha, e).unwrap().value;
        let thm3 = bounds::polar_upper(up, t0, 0.0, alpha, e).unwrap().value;
        worst[0] = worst[0].max(rel(cor5, thm3));

        let g = bounds::gap_lower(Shape { n, mu: 1, k: kl }, e).unwrap().value;
        let gv = bounds::govil_lower(n, kl, e).unwrap().value;
        worst[1] = worst[1].max(rel(g, gv));

        let cu = bounds::composed_upper(up, &[(ru0, t0)], alpha, e).unwrap().value;
        let tu = bounds::polar_upper(up, t0, ru0, alpha, e).unwrap().value;
        let cl = bounds::composed_lower(lo, &[(rl0, t0)], alpha, e).unwrap().value;
        let tl = bounds::polar_lower(lo, t0, rl0, alpha, e).unwrap().value;
        worst[2] = worst[2].max(rel(cu, tu)).max(rel(cl, tl));

        let c6 = bounds::composed_upper(up, &[(ru0, t0), (ru1, t1)], alpha, e).unwrap().value;
        let d6 = cor6_display(n, mu, ku, alpha, (ru0, t0), (ru1, t1), e.max_unit, e.min_k);
        worst[3] = worst[3].max(rel(c6, d6));
        let c10 = bounds::composed_lower(lo, &[(rl0, t0), (rl1, t1)], alpha, e).unwrap().value;
        let d10 = cor10_display(n, mu, kl, alpha, (rl0, t0), (rl1, t1), e.max_unit, e.min_k);
        worst[4] = worst[4].max(rel(c10, d10));

        let closed6 = bounds::polar_upper_two_zeros(up, (ru0, t0), (ru1, t1), alpha, e).unwrap().value;
        let closed10 = bounds::polar_lower_two_zeros(lo, (rl0, t0), (rl1, t1), alpha, e).unwrap().value;
        worst[5] = worst[5].max(rel(closed6, d6)).max(rel(closed10, d10));
    }
    Outcome {
        ok: worst.iter().all(|&w| w <= 1e-12),
        detail: format!(
            "1000 points; cor5/thm3 {:.1e}, gap/govil {:.1e}, composed m=0 {:.1e}, composed m=1 vs cor6 {:.1e}, vs cor10 {:.1e}, closed forms {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5]
        ),
    }
}

/// Brute-force max and min of `|p|` on `|z| = r`: a uniform grid of `m`
/// angles, then three rounds of 2001-point zooms around the best grid angle.
fn grid_oracle(p: &Polynomial, r: f64, m: usize) -> (f64, f64) {
    let at = |t: f64| p.eval(Complex64::from_polar(r, t)).norm();
    let h = TAU / m as f64;
    let (mut imax, mut imin, mut vmax, mut vmin) = (0, 0, f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..m {
        let v = at(i as f64 * h);
        if v > vmax {
            (vmax, imax) = (v, i);
        }
        if v < vmin {
            (vmin, imin) = (v, i);
        }
    }
    let zoom = |center: f64, sign: f64| {
        let (mut c, mut w, mut best) = (center, h, sign * at(center));
        for _ in 0..3 {
            let step = 2.0 * w / 2000.0;
            let mut bc = c;
            for j in 0..=2000 {
                let t = c - w + j as f64 * step;
                let v = sign * at(t);
                if v > best {
                    (best, bc) = (v, t);
                }
            }
            c = bc;
            w = 2.0 * step;
        }
        sign * best
    };
    (zoom(imax as f64 * h, 1.0), zoom(imin as f64 * h, -1.0))
}

fn c8_oracle() -> Outcome {
    let cases: Vec<(usize, f64)> = (0..200).flat_map(|i| [0.5, 1.0, 2.0].map(|r| (i, r))).collect();
    let worst = cases
        .par_iter()
        .map(|&(i, r)| {
            let p = random_polynomial(derive_seed(SEED ^ 8, i as u64), 12).unwrap();
            let (omax, omin) = grid_oracle(&p, r, 1_000_000);
            let emax = max_modulus(&p, r, 1e-9).value;
            let emin = min_modulus(&p, r, 1e-9).value;
            let e1 = (emax - omax).abs() / (1e-8 + 1e-8 * omax);
            let e2 = (emin - omin).abs() / (1e-8 + 1e-8 * omin);
            e1.max(e2)
        })
        .reduce(|| 0.0, f64::max);
    Outcome {
        ok: worst <= 1.0,
        detail: format!("600 (poly, r) pairs; worst |engine - oracle| / (1e-8 + 1e-8 |oracle|) = {worst:.3}"),
    }
}

fn c9_bernstein() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(SEED, 9));
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.random_range(1..=12usize);
        let a = Complex64::from_polar(rng.random_range(0.1..10.0), TAU * rng.random::<f64>());
        let p = Polynomial::monomial(a, n).unwrap();
        let lhs = max_modulus(&p.derivative().unwrap(), 1.0, SHARP_TOL).value;
        let rhs = bounds::bernstein_upper(n, max_modulus(&p, 1.0, SHARP_TOL).value).unwrap();
        worst = worst.max(rel(lhs, n as f64 * a.norm())).max(rel(lhs, rhs.value));
    }
    Outcome { ok: worst <= 1e-10, detail: format!("20 cases; max rel gap = {worst:.2e}") }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 polar upper sharpness on z^s(z+k)^(n-s)", c1_monomial_sharpness),
        ("2 Govil sharpness on (z+k)^n", c2_govil_sharpness),
        ("3 gap sharpness on (z^mu+k^mu)^(n/mu)", c3_gap_sharpness),
        ("4 inequality fuzz suite", c4_fuzz),
        ("5 limit recovery", c5_limit_recovery),
        ("6 proof identities", c6_identities),
        ("7 collapse identities", c7_collapse),
        ("8 extremum oracle", c8_oracle),
        ("9 Bernstein equality", c9_bernstein),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let verdict = if out.ok { "PASS" } else { "FAIL" };
        println!("criterion {name}: {verdict} ({secs:.1} s) {}", out.detail);
        failed += usize::from(!out.ok);
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
