use std::f64::consts::{E, PI};

use proptest::prelude::*;
use qid_core::model::{abs_f1, f1_cf, ln_f1_closed, max_delta, q_scaled};
use qid_core::quadrature::evaluate_h;
use qid_core::spectral::{gm, Certificate, CertificateConfig, Check, Witness};
use qid_core::{defaults, ModelParams, QuadratureConfig};

fn params() -> impl Strategy<Value = ModelParams> {
    (1u32..=3, 0.01f64..=1.0).prop_map(|(n, frac)| ModelParams::new(n, frac * max_delta(n).unwrap()).unwrap())
}

proptest! {
    #[test]
    fn q_scaled_stays_in_its_band(x in -1e3f64..1e3) {
        let v = q_scaled(x);
        prop_assert!((1.0 - 1e-12..=2.0 * E + 2.0).contains(&v), "q scaled {v} at {x}");
    }

    #[test]
    fn f1_is_hermitian_with_known_modulus(p in params(), t in -8f64..8.0) {
        let a = f1_cf(&p, t);
        let b = f1_cf(&p, -t);
        prop_assert!((a - b.conj()).norm() <= 1e-15);
        prop_assert!((a.norm() - abs_f1(&p, t)).abs() <= 1e-15);
        prop_assert!(a.norm() <= 1.0);
    }

    #[test]
    fn closed_log_exponentiates_back(p in params(), t in -6f64..6.0) {
        let f = f1_cf(&p, t);
        let back = ln_f1_closed(&p, t).exp();
        prop_assert!((back - f).norm() <= 1e-12 * (1.0 + f.norm()));
    }

    #[test]
    fn gm_obeys_its_bound(frac in 0.05f64..=1.0, x in 0f64..200.0) {
        let d = frac * max_delta(1).unwrap();
        let v = gm(d, x, &QuadratureConfig::default()).unwrap();
        prop_assert!(v.abs() <= 1.0 / (2.0 * PI * d));
    }

    #[test]
    fn grid_covers_its_range(a in -50f64..50.0, len in 0.1f64..20.0, steps in 1usize..400) {
        let step = len / steps as f64;
        let g = defaults::grid((a, a + len, step));
        prop_assert_eq!(g.len(), steps + 1);
        prop_assert_eq!(g[0], a);
        prop_assert!((g[steps] - (a + len)).abs() <= 1e-9 * (1.0 + a.abs() + len));
    }

    #[test]
    fn check_pass_flag_matches_numbers(tol in -1f64..1.0, v in prop_oneof![
        -1e3f64..1e3,
        Just(f64::NAN),
        Just(f64::INFINITY),
        Just(f64::NEG_INFINITY),
    ]) {
        let c = Check::new("x", tol, v, Witness::Point(v));
        prop_assert!(c.max_violation.is_finite());
        prop_assert_eq!(c.pass, c.max_violation <= tol);
        if v.is_nan() {
            prop_assert!(!c.pass);
        }
    }

    #[test]
    fn certificate_json_round_trips(
        p in params(),
        values in proptest::collection::vec((-1e300f64..1e300, -1e-300f64..1e-300, any::<bool>()), 0..8),
        seed in any::<u64>(),
    ) {
        let checks = values
            .iter()
            .enumerate()
            .map(|(i, &(v, w, pair))| {
                let witness = if pair { Witness::Pair([w, v]) } else { Witness::Point(w) };
                Check::new(format!("c{i}.\"quoted\""), 1e-8, v, witness)
            })
            .collect();
        let cert = Certificate::new(&p, CertificateConfig { abs_tol: 1e-8, seed }, checks);
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        prop_assert_eq!(back, cert);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn h_is_real_and_bounded(n in 1u32..=2, x in -40f64..40.0) {
        let p = ModelParams::with_default_delta(n).unwrap();
        let h = evaluate_h(&p, x, &QuadratureConfig::default()).unwrap();
        prop_assert!(h.imag_residue.abs() <= defaults::H_IMAG_TOL);
        prop_assert!(h.value.abs() * E * PI * (1.0 + x * x) <= p.h_bound_numerator() + defaults::H_BOUND_SLACK);
    }
}
