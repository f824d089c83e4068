use cyclavg::classifier::{
    checks, classify, scan, verify_certificate, MonomialSystem, Property, TraceStep,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn system() -> impl Strategy<Value = MonomialSystem> {
    let coef = prop::sample::select(vec![-2.5, -1.0, 0.0, 0.5, 1.0, 3.0]);
    (coef.clone(), coef.clone(), coef, prop::array::uniform6(0u32..7)).prop_map(|(a, b, c, e)| {
        MonomialSystem::new(a, e[0], e[1], b, e[2], e[3], c, e[4], e[5])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn every_system_gets_a_verified_certificate(sys in system()) {
        let cert = classify(&sys).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(cert.all_passed());
        prop_assert!(verify_certificate(&sys, &cert).iter().all(|c| c.ok));
    }

    #[test]
    fn divergence_branch_has_even_exponents(sys in system()) {
        let cert = classify(&sys).unwrap();
        if cert.property == Property::P5 {
            let r = cert.reduced;
            // div = c l x^k y^{l-1}
            prop_assert!(r.k % 2 == 0 && r.l % 2 == 1);
            let div = checks::divergence(&r).terms();
            prop_assert_eq!(div.len(), 1);
            prop_assert!((div[0].0 - r.c * r.l as f64).abs() < 1e-12);
            prop_assert_eq!((div[0].1, div[0].2), (r.k as i32, r.l as i32 - 1));
        }
    }

    #[test]
    fn case_ii_preconditions_hold_after_reduction(sys in system()) {
        let cert = classify(&sys).unwrap();
        let r = cert.reduced;
        if cert.case_label.starts_with("(ii)-") && cert.case_label != "(ii)-integrable" {
            prop_assert!(r.i >= 1 && r.q >= 1 && r.l >= 1 && r.p == 0 && r.j == 0);
        }
        for step in &cert.reduction_trace {
            if let TraceStep::DivideX(s) | TraceStep::DivideY(s) = step {
                prop_assert!(*s > 0);
            }
        }
    }
}

#[test]
fn exhaustive_small_scan() {
    let summary = scan(3);
    assert!(summary.failures.is_empty(), "{:?}", summary.failures.first());
    assert_eq!(summary.total, 4096 * 27);
    for p in ["P1", "P2", "P3", "P4", "P5", "P6", "axis-sign"] {
        assert!(summary.by_property.get(p).copied().unwrap_or(0) > 0, "{p} never used");
    }
}

/// Fourth-order Runge–Kutta for the monomial field.
fn rk4(sys: &MonomialSystem, (x, y): (f64, f64), h: f64) -> (f64, f64) {
    let f = |x: f64, y: f64| sys.eval(x, y);
    let k1 = f(x, y);
    let k2 = f(x + 0.5 * h * k1.0, y + 0.5 * h * k1.1);
    let k3 = f(x + 0.5 * h * k2.0, y + 0.5 * h * k2.1);
    let k4 = f(x + h * k3.0, y + h * k3.1);
    (
        x + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        y + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

/// First return to the positive x-axis, following a clockwise orbit from `(r, 0)`.
fn return_to_x_axis(sys: &MonomialSystem, r: f64, h: f64, max_steps: usize) -> Option<f64> {
    let mut p = (r, 0.0);
    let mut above = false;
    for _ in 0..max_steps {
        let q = rk4(sys, p, h);
        if q.1 > 0.0 {
            above = true;
        }
        if above && p.1 > 0.0 && q.1 <= 0.0 && q.0 > 0.0 {
            // linear interpolation of the crossing
            let t = -p.1 / (q.1 - p.1);
            return Some(p.0 + t * (q.0 - p.0));
        }
        p = q;
    }
    None
}

#[test]
fn integrable_and_reversible_centers_have_closed_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let odd = [1u32, 3];
    let mut checked = 0;
    while checked < 20 {
        // (a y^q, b x^i + c x^k y^l), q and i odd, ab < 0: a center at the origin
        let a = rng.gen_range(0.5..2.0);
        let b = -rng.gen_range(0.5..2.0);
        let c = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(-0.5..0.5) };
        let (q, i) = (odd[rng.gen_range(0..2)], odd[rng.gen_range(0..2)]);
        let (k, l) = (rng.gen_range(i..4), rng.gen_range(0..3));
        if k == i && l == 0 {
            continue;
        }
        let sys = MonomialSystem::new(a, 0, q, b, i, 0, c, k, l);
        let cert = classify(&sys).unwrap();
        if !matches!(cert.property, Property::P4 | Property::P6) {
            continue;
        }
        let r = rng.gen_range(0.2..0.4);
        let back = return_to_x_axis(&sys, r, 2e-3, 200_000)
            .unwrap_or_else(|| panic!("{sys}: orbit from r = {r} did not return"));
        assert!((back - r).abs() < 1e-6, "{sys} ({}): P({r}) = {back}", cert.case_label);
        checked += 1;
    }
}
