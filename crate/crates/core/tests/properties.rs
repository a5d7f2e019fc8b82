mod common;

use std::f64::consts::TAU;

use common::CLASSES;
use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qw1d_core::canonical::{canonicalize, canonicalize_with_state, CanonicalState, WalkClass};
use qw1d_core::equivalence::{decide, equivalent_params, EquivalenceWitness};
use qw1d_core::evolve::evolve;
use qw1d_core::gauge::LinearGauge;
use qw1d_core::phase::wrap;
use qw1d_core::{
    build_window_operator, check_unitary, coeffs_from_vectors, C2Vector, CoeffSite, SiteVectors, Tolerances,
    WalkSpec,
};
use rand::Rng;

fn angle() -> impl Strategy<Value = f64> {
    0.0..TAU
}

prop_compose! {
    fn strict_site()(r in 0.05..0.95f64, a in angle(), b in angle(), c in angle()) -> CoeffSite {
        CoeffSite::from_abc(r, a, b, c).unwrap()
    }
}

prop_compose! {
    fn any_site()(r in prop_oneof![Just(0.0), Just(1.0), 0.0..1.0f64], a in angle(), b in angle(), c in angle()) -> CoeffSite {
        CoeffSite::from_abc(r, a, b, c).unwrap()
    }
}

prop_compose! {
    fn linear_gauge()(lambda in angle(), x in angle(), y in angle(), kappa in angle()) -> LinearGauge {
        LinearGauge { lambda, x, y, kappa }
    }
}

fn class() -> impl Strategy<Value = WalkClass> {
    prop::sample::select(CLASSES.to_vec())
}

prop_compose! {
    fn class_spec()(class in class(), seed in any::<u64>()) -> (WalkClass, WalkSpec) {
        let mut rng = common::rng(seed);
        (class, common::spec_of_class(&mut rng, class, 0.05, 0.95))
    }
}

prop_compose! {
    fn unit_state()(alpha in 0.0..=1.0f64, p in angle(), q in angle()) -> C2Vector {
        let beta = (1.0 - alpha * alpha).sqrt();
        C2Vector::new(C64::from_polar(alpha, p), C64::from_polar(beta, q))
    }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wrap_lands_in_range(x in -1e6..1e6f64) {
        let y = wrap(x);
        prop_assert!((0.0..TAU).contains(&y));
        prop_assert!((C64::cis(x) - C64::cis(y)).norm() < 1e-9);
    }

    #[test]
    fn windows_are_unitary(left in any_site(), right in any_site(), ex in prop::collection::btree_map(-4i64..=4, any_site(), 0..5)) {
        let spec = WalkSpec { left_tail: left, right_tail: right, exceptions: ex };
        prop_assert!(check_unitary(&build_window_operator(&spec, 6).unwrap()) < 1e-12);
    }

    #[test]
    fn site_vectors_round_trip(site in strict_site(), t in angle(), p in angle(), q in angle()) {
        let [[ea, eb], [ec, ed]] = [
            [C64::cis(site.a().value()), C64::cis(site.b().value())],
            [C64::cis(site.c().value()), C64::cis(site.d().value())],
        ];
        let (r, s) = (site.r(), site.s());
        // a common cell rotation leaves every inner product unchanged
        let v = Matrix2::new(C64::cis(p) * t.cos(), -C64::cis(q) * t.sin(), C64::cis(-q) * t.sin(), C64::cis(-p) * t.cos());
        let rot = |x: C2Vector| x.apply(&v);
        let sv = SiteVectors {
            xi_right: rot(C2Vector::e1()),
            xi_left: rot(C2Vector::e2()),
            zeta_to_left: rot(C2Vector::new(ea * r, eb * s)),
            zeta_to_right: rot(C2Vector::new(ec * s, ed * r)),
        };
        let back = coeffs_from_vectors(&sv, &tol()).unwrap();
        prop_assert!(back.approx_eq(&site, &tol().with_phase(1e-8)), "{back:?} vs {site:?}");
    }

    #[test]
    fn json_round_trip_is_exact((_, spec) in class_spec()) {
        let text = serde_json::to_string(&spec).unwrap();
        let back: WalkSpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn canonical_forms_are_fixed_points((class, spec) in class_spec()) {
        let (form, _) = canonicalize(&spec, Some(class), 6, &tol()).unwrap();
        let (again, _) = canonicalize(&form.to_spec().unwrap(), Some(class), 6, &tol()).unwrap();
        prop_assert!(equivalent_params(&form, &again, &tol()).unwrap(), "{form:?} vs {again:?}");
    }

    #[test]
    fn linear_gauges_preserve_class_and_parameters((class, spec) in class_spec(), g in linear_gauge()) {
        let copy = g.apply_to_spec(&spec);
        let (f1, _) = canonicalize(&spec, Some(class), 6, &tol()).unwrap();
        let (f2, _) = canonicalize(&copy, Some(class), 6, &tol()).unwrap();
        prop_assert!(equivalent_params(&f1, &f2, &tol()).unwrap());
        let verdict = decide(&spec, &copy, 6, false, &tol()).unwrap();
        prop_assert!(verdict.equivalent);
        let oracle = decide(&spec, &copy, 6, true, &tol()).unwrap();
        prop_assert!(oracle.equivalent);
    }

    #[test]
    fn found_witnesses_hold((class, spec) in class_spec(), g in linear_gauge()) {
        let copy = g.apply_to_spec(&spec);
        let w = decide(&spec, &copy, 5, true, &tol()).unwrap().witness.unwrap();
        prop_assert!(w.deviation(&spec, &copy).unwrap() < 1e-10, "{class}");
        prop_assert!(w.inverse().deviation(&copy, &spec).unwrap() < 1e-10);
        let id = w.compose(&w.inverse());
        prop_assert!(id.approx_eq(&EquivalenceWitness::identity(5), 1e-12));
    }

    #[test]
    fn canonical_state_ignores_global_phase((class, spec) in class_spec(), phi in unit_state(), p in angle()) {
        let (_, s1, _) = canonicalize_with_state(&spec, &phi, Some(class), 5, &tol()).unwrap();
        let (_, s2, _) = canonicalize_with_state(&spec, &phi.scale(C64::cis(p)), Some(class), 5, &tol()).unwrap();
        prop_assert!(s1.approx_eq(&s2, &tol()));
        prop_assert!((0.0..=1.0).contains(&s1.alpha));
        let v = s1.to_vector();
        prop_assert!((v.norm_sq() - 1.0).abs() < 1e-12);
        prop_assert!(CanonicalState::from_vector(&v, &tol()).approx_eq(&s1, &tol()));
    }

    #[test]
    fn evolution_conserves_norm((_, spec) in class_spec(), phi in unit_state(), t in 0usize..12) {
        let psi = evolve(&spec, &phi, t, &tol()).unwrap();
        prop_assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_gauges_keep_general_parameters((_, spec) in class_spec(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (copy, _) = common::gauged_copy(&mut rng, &spec, WalkClass::General, 6);
        let (f1, _) = canonicalize(&spec, Some(WalkClass::General), 6, &tol()).unwrap();
        let (f2, _) = canonicalize(&copy, Some(WalkClass::General), 6, &tol()).unwrap();
        prop_assert!(equivalent_params(&f1, &f2, &tol()).unwrap());
        // perturbing one radius inside the window breaks equivalence
        let n = rng.gen_range(-6i64..=6);
        let s = copy.site(n);
        let bumped = CoeffSite::from_abc((s.r() + 0.01).min(0.99), s.a().value(), s.b().value(), s.c().value()).unwrap();
        let (f3, _) = canonicalize(&copy.clone().with_site(n, bumped), Some(WalkClass::General), 6, &tol()).unwrap();
        prop_assert!(!equivalent_params(&f1, &f3, &tol()).unwrap());
    }
}
