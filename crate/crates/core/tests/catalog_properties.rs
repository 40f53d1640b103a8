use num_complex::Complex64;
use polarineq::bounds::{self, BoundResult, CircleExtrema, Direction, Shape};
use polarineq::report::{read_csv, read_jsonl, to_json, write_csv, write_jsonl};
use polarineq::suite::{fuzz_instance, FuzzFamily};
use polarineq::verify::evaluate;
use polarineq::{BoundId, OutputFormat, Regime, Status, SweepConfig, Tolerance, VerificationRecord};
use proptest::prelude::*;

#[derive(Debug, Clone, Copy)]
struct Params {
    n: usize,
    s: usize,
    mu: usize,
    alpha: f64,
    e: CircleExtrema,
}

/// `n`, `s < n`, `mu <= n - s`, `alpha >= 1` and extrema.
fn params() -> impl Strategy<Value = Params> {
    (2usize..=14)
        .prop_flat_map(|n| (Just(n), 0..n))
        .prop_flat_map(|(n, s)| (Just(n), Just(s), 1..=n - s, 1.0..50.0f64, 0.1..100.0f64, 0.0..10.0f64))
        .prop_map(|(n, s, mu, alpha, max_unit, min_k)| Params { n, s, mu, alpha, e: CircleExtrema { max_unit, min_k } })
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn check_breakdown(b: &BoundResult, e: CircleExtrema) -> Result<(), TestCaseError> {
    let scale = b.max_term.abs() + b.min_term.abs();
    prop_assert!((b.value - b.recompute()).abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE), "{b:?}");
    prop_assert!(rel(b.max_term, b.max_coeff * e.max_unit) <= 1e-15);
    prop_assert!(rel(b.min_term, b.min_coeff * e.min_k) <= 1e-15);
    let lower = b.bound_id.direction() == Direction::Lower;
    prop_assert_eq!(b.vacuous, lower && b.value <= 0.0);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bounds_recompute_from_breakdown(p in params(), ku in 1.0..4.0f64, kl in 0.1..1.0f64, r in 0.0..0.99f64, ro in 0.0..3.0f64) {
        let Params { n, s, mu, alpha, e } = p;
        let up = Shape { n, mu, k: ku };
        let lo = Shape { n, mu, k: kl };
        let all = [
            bounds::bernstein_upper(n, e.max_unit).unwrap(),
            bounds::lax_upper(n, e.max_unit).unwrap(),
            bounds::turan_lower(n, e.max_unit).unwrap(),
            bounds::govil_upper(n, ku, e).unwrap(),
            bounds::govil_lower(n, kl, e).unwrap(),
            bounds::gap_lower(lo, e).unwrap(),
            bounds::zero_outside_lower(lo, s, kl + ro, e).unwrap(),
            bounds::zero_inside_upper(up, s, r, e).unwrap(),
            bounds::polar_upper(up, s, r, alpha, e).unwrap(),
            bounds::polar_upper_origin(up, s, alpha, e).unwrap(),
            bounds::polar_lower(lo, s, kl + ro, alpha, e).unwrap(),
        ];
        for b in &all {
            check_breakdown(b, e)?;
        }
        let m1 = e.max_unit;
        let m_unit = e.min_k.min(m1);
        for b in [bounds::aziz_dawood_upper(n, m1, m_unit).unwrap(), bounds::aziz_dawood_lower(n, m1, m_unit).unwrap()] {
            check_breakdown(&b, CircleExtrema { max_unit: m1, min_k: m_unit })?;
        }
    }

    #[test]
    fn collapse_identities(p in params(), ku in 1.0..4.0f64, kl in 0.1..1.0f64, ro in 0.0..3.0f64) {
        let Params { n, s, mu, alpha, e } = p;
        let up = Shape { n, mu, k: ku };
        let lo = Shape { n, mu, k: kl };
        // origin form is the general form at z_0 = 0
        let origin = bounds::polar_upper_origin(up, s, alpha, e).unwrap().value;
        let general = bounds::polar_upper(up, s, 0.0, alpha, e).unwrap().value;
        prop_assert!(rel(origin, general) <= 1e-12, "{origin} vs {general}");
        // without a distinguished zero (s = 0, |z_0| = 0) the derivative
        // bounds reduce to the gap forms
        let km = ku.powi(mu as i32);
        let thm2 = bounds::zero_inside_upper(up, 0, 0.0, e).unwrap().value;
        let gap_upper = n as f64 / (1.0 + km) * (e.max_unit - e.min_k);
        prop_assert!((thm2 - gap_upper).abs() <= 1e-12 * (n as f64 / (1.0 + km)) * (e.max_unit + e.min_k));
        let thm1 = bounds::zero_outside_lower(lo, 0, kl + ro, e).unwrap().value;
        let gap = bounds::gap_lower(lo, e).unwrap().value;
        prop_assert!(rel(thm1, gap) <= 1e-12);
        // mu = 1 gap bound is the Govil lower bound
        let g1 = bounds::gap_lower(Shape { n, mu: 1, k: kl }, e).unwrap().value;
        let gv = bounds::govil_lower(n, kl, e).unwrap().value;
        prop_assert!(rel(g1, gv) <= 1e-12);
        // a single zero is not peeled at all
        if s > 0 {
            let r = 0.9 * ro / 3.0;
            let cu = bounds::composed_upper(up, &[(r, s)], alpha, e).unwrap().value;
            prop_assert!(rel(cu, bounds::polar_upper(up, s, r, alpha, e).unwrap().value) <= 1e-12);
            let cl = bounds::composed_lower(lo, &[(kl + ro + 1e-3, s)], alpha, e).unwrap().value;
            prop_assert!(rel(cl, bounds::polar_lower(lo, s, kl + ro + 1e-3, alpha, e).unwrap().value) <= 1e-12);
        }
    }

    #[test]
    fn best_order_is_never_worse(
        n in 6usize..=14,
        mults in prop::collection::vec(1usize..=2, 2..=4),
        rs in prop::collection::vec(0.0..1.0f64, 4),
        alpha in 1.0..30.0f64,
        max_unit in 0.5..50.0f64,
        min_k in 0.0..5.0f64,
    ) {
        let total: usize = mults.iter().sum();
        prop_assume!(total < n);
        let e = CircleExtrema { max_unit, min_k };
        let up: Vec<(f64, usize)> = mults.iter().zip(&rs).map(|(&t, &r)| (0.95 * r, t)).collect();
        let lo: Vec<(f64, usize)> = mults.iter().zip(&rs).map(|(&t, &r)| (0.6 + 2.0 * r, t)).collect();
        let shape_u = Shape { n, mu: 1, k: 1.5 };
        let shape_l = Shape { n, mu: 1, k: 0.5 };
        let given_u = bounds::composed_upper(shape_u, &up, alpha, e).unwrap().value;
        let (best_u, order_u) = bounds::composed_best_order(shape_u, &up, alpha, e, Direction::Upper).unwrap();
        prop_assert!(best_u.value <= given_u);
        let reordered: Vec<(f64, usize)> = order_u.iter().map(|&i| up[i]).collect();
        prop_assert_eq!(bounds::composed_upper(shape_u, &reordered, alpha, e).unwrap().value, best_u.value);
        let given_l = bounds::composed_lower(shape_l, &lo, alpha, e).unwrap().value;
        let (best_l, _) = bounds::composed_best_order(shape_l, &lo, alpha, e, Direction::Lower).unwrap();
        prop_assert!(best_l.value >= given_l);
    }

    #[test]
    fn polar_upper_grows_with_alpha(p in params(), k in 1.0..4.0f64, r in 0.0..0.99f64, step in 0.0..20.0f64) {
        let Params { n, s, mu, alpha, e } = p;
        let shape = Shape { n, mu, k };
        let unit = CircleExtrema { max_unit: 1.0, min_k: 1.0 };
        // d/d|a| of the bound: (s/(1-r) + A/(1-r)^s) M1 - A/(k+r)^s mk
        let at2 = bounds::polar_upper(shape, s, r, 2.0, unit).unwrap();
        let at1 = bounds::polar_upper(shape, s, r, 1.0, unit).unwrap();
        let slope = (at2.max_coeff - at1.max_coeff) * e.max_unit - (at2.min_coeff - at1.min_coeff) * e.min_k;
        prop_assume!(slope >= 0.0);
        let lo = bounds::polar_upper(shape, s, r, alpha, e).unwrap().value;
        let hi = bounds::polar_upper(shape, s, r, alpha + step, e).unwrap().value;
        prop_assert!(hi >= lo - 1e-12 * lo.abs());
    }

    #[test]
    fn polar_bounds_over_alpha_approach_derivative_bounds(p in params(), ku in 1.0..4.0f64, kl in 0.1..1.0f64, r in 0.0..0.99f64, ro in 0.01..3.0f64) {
        let Params { n, s, mu, e, .. } = p;
        let up = Shape { n, mu, k: ku };
        let lo = Shape { n, mu, k: kl };
        let thm2 = bounds::zero_inside_upper(up, s, r, e).unwrap().value;
        let thm1 = bounds::zero_outside_lower(lo, s, kl + ro, e).unwrap().value;
        for (limit, f) in [
            (thm2, Box::new(|a| bounds::polar_upper(up, s, r, a, e).unwrap().value) as Box<dyn Fn(f64) -> f64>),
            (thm1, Box::new(|a| bounds::polar_lower(lo, s, kl + ro, a, e).unwrap().value)),
        ] {
            let gaps: Vec<f64> = [1e2, 1e4, 1e6].iter().map(|&a| (f(a) / a - limit).abs()).collect();
            let scale = f(1e2).abs() / 1e2 + limit.abs();
            if gaps[0] > 1e-9 * scale {
                prop_assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "{gaps:?}");
                prop_assert!((gaps[1] / gaps[0] / 1e-2 - 1.0).abs() <= 0.1, "{gaps:?}");
            }
        }
    }
}

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

fn record() -> impl Strategy<Value = VerificationRecord> {
    (
        "[a-z0-9,\"_ -]{0,12}",
        prop::sample::select(BoundId::ALL.to_vec()),
        (finite(), finite()),
        (finite(), finite(), finite(), finite()),
        prop::sample::select(vec![Status::Pass, Status::Fail, Status::VacuousPass]),
        finite(),
    )
        .prop_map(|(instance_id, bound_id, (re, im), (lhs, lhs_error, rhs, slack), status, tol)| VerificationRecord {
            instance_id,
            bound_id,
            alpha: Complex64::new(re, im),
            lhs,
            lhs_error,
            rhs,
            slack,
            status,
            tol,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_and_csv_round_trip_bit_for_bit(recs in prop::collection::vec(record(), 0..8)) {
        let mut j = Vec::new();
        write_jsonl(&mut j, &recs).unwrap();
        let from_json = read_jsonl(std::str::from_utf8(&j).unwrap()).unwrap();
        prop_assert_eq!(&from_json, &recs);
        let mut c = Vec::new();
        write_csv(&mut c, &recs).unwrap();
        let from_csv = read_csv(std::str::from_utf8(&c).unwrap()).unwrap();
        prop_assert_eq!(from_csv.len(), recs.len());
        for (a, b) in from_csv.iter().zip(&recs) {
            prop_assert_eq!(&a.instance_id, &b.instance_id);
            prop_assert_eq!((a.bound_id, a.status), (b.bound_id, b.status));
            let bits = |r: &VerificationRecord| [r.alpha.re, r.alpha.im, r.lhs, r.lhs_error, r.rhs, r.slack].map(f64::to_bits);
            prop_assert_eq!(bits(a), bits(b));
        }
    }

    #[test]
    fn records_are_self_consistent(family in prop::sample::select(FuzzFamily::ALL.to_vec()), seed in any::<u64>()) {
        let (inst, alpha) = fuzz_instance(family, seed).unwrap();
        for &id in family.bound_ids() {
            let v = evaluate("prop", &inst.polynomial, &inst.pattern, alpha, id, Tolerance::default()).unwrap();
            let r = &v.record;
            prop_assert_eq!(r.slack, r.recompute_slack());
            prop_assert_eq!(r.rhs, v.bound.value);
            prop_assert_eq!(r.tol, Tolerance::default().effective(r.lhs));
            let fail = r.slack < -(r.tol + r.lhs_error);
            prop_assert_eq!(r.status == Status::Fail, fail);
            prop_assert_eq!(r.status == Status::VacuousPass, !fail && v.bound.vacuous);
            prop_assert!(r.lhs_error <= Tolerance::default().engine());
            if let Some(chain) = v.chain {
                prop_assert!(chain.pass, "{chain:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn sweeps_are_deterministic(seed in any::<u64>(), upper in any::<bool>()) {
        let (regime, k, bounds) = if upper {
            (Regime::Upper, vec![1.5], vec![BoundId::PolarUpper, BoundId::ComposedUpper, BoundId::ZeroInsideUpper])
        } else {
            (Regime::Lower, vec![0.5], vec![BoundId::PolarLower, BoundId::ComposedLower, BoundId::ZeroOutsideLower])
        };
        let config = SweepConfig {
            regime,
            n: vec![4, 7],
            mults: vec![vec![], vec![1], vec![1, 2]],
            mu: vec![1, 2],
            k,
            alpha: vec![Complex64::new(3.0, 0.0), Complex64::new(-1.0, 2.0)],
            instances_per_cell: 2,
            base_seed: seed,
            bound_ids: bounds,
            tol: Tolerance::default(),
            output_path: None,
            format: OutputFormat::Json,
        };
        let render = |c: &SweepConfig| {
            let out = c.run().unwrap();
            let mut buf = Vec::new();
            write_jsonl(&mut buf, &out.records()).unwrap();
            (buf, to_json(&out.summary).unwrap(), out.summary)
        };
        let (a, sa, summary) = render(&config);
        let (b, sb, _) = render(&config);
        prop_assert_eq!(a, b);
        prop_assert_eq!(sa, sb);
        prop_assert_eq!(summary.fail, 0);
        prop_assert!(summary.total > 0);
    }
}
