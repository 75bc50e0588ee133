use eldershare_core::accumulation::{
    eta_star_simple, eta_star_unclamped, simulate_path, steady_state, GrowthParams, PathSetup,
    PathSolverOptions, Regime,
};
use eldershare_core::ethno::{build_index, correlate, load_trait_table, IndexSpec, MissingPolicy};
use eldershare_core::property_rights::{
    income_decomposition, income_ratio, income_ratio_closed_form, sigma_shares, LandEconomy,
    RightsParams,
};
use eldershare_core::static_economy::{
    cultural_market, delta_utility, inculcation_threshold, optimal_gift_simple, solve_static,
    PreferenceParams, StaticIncomes,
};
use proptest::prelude::*;

fn prefs() -> impl Strategy<Value = PreferenceParams> {
    (0.05..0.95f64, 0.2..4.0f64, 0.01..0.9f64)
        .prop_map(|(e, b, d)| PreferenceParams::new(e, b, d).unwrap())
}

fn economy() -> impl Strategy<Value = LandEconomy> {
    (
        0.1..0.95f64,
        0.2..5.0f64,
        0.0..2.0f64,
        0.1..10.0f64,
        0.2..4.0f64,
        0.2..4.0f64,
    )
        .prop_map(|(al, am, ae, t, nm, ne)| LandEconomy::new(al, am, ae, t, nm, ne).unwrap())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #[test]
    fn gift_equals_cultural_expenditure(p in prefs(), y_m in 0.01..50.0f64, y_e in 0.0..50.0f64, n in -0.5..1.5f64) {
        let inc = StaticIncomes::new(y_m, y_e, n).unwrap();
        let m = cultural_market(&p, &inc).unwrap();
        let g = optimal_gift_simple(&p, true, y_m, false).unwrap();
        prop_assert!(close(m.expenditure(), g, 1e-13));
    }

    #[test]
    fn threshold_agrees_with_utility_sign(p in prefs(), y_m in 0.1..10.0f64, scale in 0.02..5.0f64, n in 0.0..1.0f64) {
        let y_star = inculcation_threshold(&p, n).unwrap();
        let ratio = y_star * scale;
        prop_assume!((scale - 1.0).abs() > 1e-6);
        let inc = StaticIncomes::new(y_m, ratio * y_m, n).unwrap();
        let gain = delta_utility(&p, &inc).unwrap();
        prop_assert_eq!(gain.prefers_inculcation(), scale < 1.0);
        prop_assert_eq!(solve_static(&p, &inc).unwrap().inculcate, scale < 1.0);
    }

    #[test]
    fn static_outcome_homogeneous_in_income(p in prefs(), y_m in 0.1..10.0f64, y_e in 0.0..10.0f64, lambda in 0.1..10.0f64) {
        let a = solve_static(&p, &StaticIncomes::new(y_m, y_e, 0.0).unwrap()).unwrap();
        let b = solve_static(&p, &StaticIncomes::new(lambda * y_m, lambda * y_e, 0.0).unwrap()).unwrap();
        prop_assert_eq!(a.inculcate, b.inculcate);
        prop_assert!(close(b.gift, lambda * a.gift, 1e-12));
        prop_assert!(close(a.consumption_ratio, b.consumption_ratio, 1e-12));
    }

    #[test]
    fn threshold_rises_with_population_growth(p in prefs(), n in 0.0..1.0f64, dn in 0.01..1.0f64) {
        prop_assert!(inculcation_threshold(&p, n + dn).unwrap() > inculcation_threshold(&p, n).unwrap());
    }

    #[test]
    fn incomes_exhaust_output(econ in economy(), phi in 0.0..=1.0f64, rho in 0.2..4.0f64) {
        let r = RightsParams::new(phi, rho).unwrap();
        let d = income_decomposition(&econ, &r).unwrap();
        let (se, sm) = sigma_shares(&econ, &r).unwrap();
        prop_assert!(close(econ.n_m * sm + econ.n_e * se, 1.0, 1e-13));
        prop_assert!(close(econ.n_m * d.y_m + econ.n_e * d.y_e, d.euler.output, 1e-12));
        prop_assert!(d.y_m > 0.0 && d.y_e >= 0.0);
    }

    #[test]
    fn income_ratio_ignores_land_scale(econ in economy(), phi in 0.0..=1.0f64, rho in 0.2..4.0f64, lambda in 0.1..10.0f64) {
        let r = RightsParams::new(phi, rho).unwrap();
        let scaled = LandEconomy { land: econ.land * lambda, ..econ };
        prop_assert!(close(income_ratio(&econ, &r).unwrap(), income_ratio(&scaled, &r).unwrap(), 1e-12));
        prop_assert!(close(income_ratio(&econ, &r).unwrap(), income_ratio_closed_form(&econ, &r).unwrap(), 1e-12));
    }

    #[test]
    fn pearson_symmetric_and_affine_invariant(
        xs in prop::collection::vec(-100.0..100.0f64, 4..30),
        a in 0.1..10.0f64,
        b in -10.0..10.0f64,
        seed in any::<u64>(),
    ) {
        let ys: Vec<f64> = xs.iter().enumerate()
            .map(|(i, x)| x * 0.3 + ((i as u64).wrapping_mul(seed | 1) % 97) as f64)
            .collect();
        let (Ok(c), Ok(d)) = (correlate(&xs, &ys), correlate(&ys, &xs)) else {
            return Ok(());
        };
        prop_assert!((c.r - d.r).abs() < 1e-12);
        let moved: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        prop_assert!((correlate(&moved, &ys).unwrap().r - c.r).abs() < 1e-9);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        prop_assert!((correlate(&neg, &ys).unwrap().r + c.r).abs() < 1e-12);
        prop_assert!(c.r.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn index_additive_and_order_free(
        cells in prop::collection::vec(prop::collection::vec(prop::option::of(0u8..4), 4), 1..12),
    ) {
        let cols = ["a", "b", "c", "d"];
        let mut text = format!("society,{}\n", cols.join(","));
        for (i, row) in cells.iter().enumerate() {
            let fields: Vec<String> = row.iter().map(|c| c.map(|v| v.to_string()).unwrap_or_default()).collect();
            text.push_str(&format!("s{i},{}\n", fields.join(",")));
        }
        let table = load_trait_table(text.as_bytes()).unwrap();
        let spec = |pos: &[&str], neg: &[&str]| IndexSpec {
            name: "x".into(),
            positive_traits: pos.iter().map(|s| s.to_string()).collect(),
            negative_traits: neg.iter().map(|s| s.to_string()).collect(),
            missing_policy: MissingPolicy::AsZero,
        };
        let whole = build_index(&table, &spec(&["a", "b", "c"], &["d"])).unwrap();
        let reordered = build_index(&table, &spec(&["c", "a", "b"], &["d"])).unwrap();
        let left = build_index(&table, &spec(&["a"], &["d"])).unwrap();
        let right = build_index(&table, &spec(&["b", "c"], &[])).unwrap();
        prop_assert_eq!(&whole, &reordered);
        for i in 0..cells.len() {
            prop_assert_eq!(whole[i], left[i] + right[i]);
            let expected: f64 = cells[i][..3].iter().map(|c| c.unwrap_or(0) as f64).sum::<f64>()
                - cells[i][3].unwrap_or(0) as f64;
            prop_assert_eq!(whole[i], expected);
        }
    }

    #[test]
    fn steady_state_residuals_vanish(
        n in 0.0..0.5f64, a in 0.0..0.05f64, alpha in 0.3..0.7f64,
        beta in 0.5..2.0f64, delta in 0.05..0.5f64, tau_e in 0.0..0.6f64,
    ) {
        let p = GrowthParams::new(n, a, alpha, beta, delta, tau_e).unwrap();
        let Ok(s) = steady_state(&p) else { return Ok(()); };
        prop_assert!(s.residuals(&p).max_abs() < 1e-10);
        prop_assert!((0.0..1.0).contains(&s.eta));
        prop_assert_eq!(s.regime == Regime::Inculcation, s.eta > 0.0);
    }

    #[test]
    fn eta_star_comparative_statics(beta in 0.5..2.0f64, delta in 0.05..0.5f64, alpha in 0.3..0.8f64, bump in 0.01..0.1f64) {
        let base = eta_star_unclamped(beta, delta, alpha);
        prop_assert!(eta_star_unclamped(beta, delta + bump, alpha) < base);
        // Higher alpha means lower capital intensity x = (1-alpha)/alpha.
        prop_assert!(eta_star_unclamped(beta, delta, (alpha + bump).min(0.99)) > base);
        if let Ok(e) = eta_star_simple(beta, delta, alpha) {
            prop_assert!((0.0..1.0).contains(&e));
        }
    }

    #[test]
    fn elderly_labor_lowers_inculcation(tau in 0.01..0.5f64) {
        let base = GrowthParams::new(0.0, 0.0, 0.5, 1.0, 0.2, 0.0).unwrap();
        let with = GrowthParams { tau_e: tau, ..base };
        prop_assert!(steady_state(&with).unwrap().eta < steady_state(&base).unwrap().eta);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn path_accounting_holds(
        k_share in 0.2..1.8f64, n in 0.0..0.3f64, a in 0.0..0.04f64,
        tau_e in prop::sample::select(vec![0.0, 0.05, 0.1]),
    ) {
        let p = GrowthParams::new(n, a, 0.5, 1.0, 0.2, tau_e).unwrap();
        let ss = steady_state(&p).unwrap();
        let setup = PathSetup { k0: k_share * ss.k, horizon: 40, eta0: None };
        let path = simulate_path(&p, &setup, &PathSolverOptions::default()).unwrap();
        for t in 1..path.periods.len() - 1 {
            let (prev, cur) = (&path.periods[t - 1], &path.periods[t]);
            let lhs = cur.c_m + cur.c_e / (1.0 + n) + cur.s_m + p.delta * cur.y_m * cur.eta_next;
            let rhs = cur.y_m + (cur.y_e + cur.r * prev.s_m) / (1.0 + n);
            prop_assert!(close(lhs, rhs, 1e-12), "t = {}: {} vs {}", t, lhs, rhs);
            prop_assert!(cur.c_m > 0.0 && cur.c_e > 0.0);
            prop_assert!(close(path.consumption_ratio(t), cur.c_e / cur.c_m, 1e-7),
                "t = {}: {} vs {}", t, path.consumption_ratio(t), cur.c_e / cur.c_m);
        }
    }
}
