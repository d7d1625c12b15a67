use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use heyting_core::enumerate::enumerate_models;
use heyting_core::formula::Formula;
use heyting_core::generate::random_formula;
use heyting_core::interp::{check_certificate, InterpOptions, Session};
use heyting_core::kripke::KripkeModel;
use heyting_core::typespace::{TypeSpace, TypeStore};
use heyting_core::witness::{build_witness_model, check_lemma, ProbeContext};
use heyting_core::Signature;

fn pq() -> Signature {
    Signature::new(["p", "q"]).unwrap()
}

fn small_models() -> &'static [KripkeModel] {
    static MODELS: OnceLock<Vec<KripkeModel>> = OnceLock::new();
    MODELS.get_or_init(|| enumerate_models(&pq(), 3).collect())
}

fn formula(max_degree: u32, max_size: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_formula(&mut rng, &pq(), max_degree, max_size)
    })
}

fn session() -> &'static Session {
    static SESSION: OnceLock<Session> = OnceLock::new();
    SESSION.get_or_init(Session::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entailment_is_a_preorder(a in formula(2, 9), b in formula(2, 9), c in formula(2, 9)) {
        let prover = &session().prover;
        prop_assert!(prover.proves(&a, &a));
        if prover.proves(&a, &b) && prover.proves(&b, &c) {
            prop_assert!(prover.proves(&a, &c));
        }
    }

    #[test]
    fn proofs_survive_substitution(a in formula(2, 7), c in formula(2, 7), s in formula(1, 5)) {
        let prover = &session().prover;
        if prover.proves(&a, &c) {
            prop_assert!(prover.proves(&a.substitute("p", &s), &c.substitute("p", &s)));
        }
    }

    #[test]
    fn provable_entailments_hold_on_small_models(a in formula(2, 9), c in formula(2, 9)) {
        if session().prover.proves(&a, &c) {
            for m in small_models() {
                prop_assert!(m.truth_set(&a).unwrap().is_subset(&m.truth_set(&c).unwrap()));
            }
        }
    }

    #[test]
    fn types_decide_forcing(i in 0usize..1000, chi in formula(1, 9)) {
        let store = &session().store;
        let models = small_models();
        let m = &models[i % models.len()];
        let types = store.types_of(m, 1);
        let truth = m.truth_set(&chi).unwrap();
        for (w, &t) in types.iter().enumerate() {
            prop_assert_eq!(store.forces_type(t, &chi).unwrap(), truth.contains(w));
        }
    }

    #[test]
    fn truth_is_upward_closed(i in 0usize..1000, f in formula(2, 9)) {
        let models = small_models();
        let m = &models[i % models.len()];
        let truth = m.truth_set(&f).unwrap();
        for w in truth.ones() {
            prop_assert!(m.up(w).ones().all(|v| truth.contains(v)));
        }
    }

    #[test]
    fn model_json_round_trips(i in 0usize..1000) {
        let models = small_models();
        let m = &models[i % models.len()];
        let back = KripkeModel::from_json(&m.to_json()).unwrap();
        prop_assert_eq!(back.to_spec(), m.to_spec());
    }

    #[test]
    fn formula_display_round_trips(f in formula(3, 15)) {
        prop_assert_eq!(Formula::parse(&f.to_string()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn distance_is_an_ultrametric(i in 0usize..1000, j in 0usize..1000, k in 0usize..1000) {
        let store = &session().store;
        let space = TypeSpace::build(store, &pq(), 1).unwrap();
        let e = space.elements();
        let (t, u, v) = (e[i % e.len()], e[j % e.len()], e[k % e.len()]);
        let d = |a, b| store.distance(a, b).unwrap().value();
        prop_assert_eq!(d(t, u) == 0.0, t == u);
        prop_assert_eq!(d(t, u), d(u, t));
        prop_assert!(d(t, v) <= d(t, u).max(d(u, v)));
        for n in 0..=1 {
            let same = store.truncate_to(t, n).unwrap() == store.truncate_to(u, n).unwrap();
            prop_assert_eq!(d(t, u) < 0.5f64.powi(n as i32), same);
        }
    }

    #[test]
    fn type_json_round_trips(i in 0usize..1000) {
        let store = &session().store;
        let space = TypeSpace::build(store, &pq(), 1).unwrap();
        let t = space.element(i % space.len());
        prop_assert_eq!(store.from_json(&pq(), &store.to_json(t)).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn interpolants_are_sound_and_pure(phi in formula(1, 7)) {
        let s = session();
        let opts = InterpOptions::default();
        let e = s.uniform_exists(&phi, "p", &opts).unwrap();
        let a = s.uniform_forall(&phi, "p", &opts).unwrap();
        prop_assert!(!e.formula.mentions("p") && !a.formula.mentions("p"));
        prop_assert!(e.formula.vars().is_subset(&phi.vars()));
        prop_assert!(s.prover.proves(&phi, &e.formula));
        prop_assert!(s.prover.proves(&a.formula, &phi));
        prop_assert!(s.prover.proves(&a.formula, &e.formula));
    }

    #[test]
    fn interpolation_is_deterministic(phi in formula(1, 7)) {
        let opts = InterpOptions::default();
        let first = Session::new().uniform_exists(&phi, "p", &opts).unwrap();
        let second = Session::new().uniform_exists(&phi, "p", &opts).unwrap();
        prop_assert_eq!(first.formula, second.formula);
        prop_assert_eq!(first.level_used, second.level_used);
    }

    #[test]
    fn interpolation_is_monotone(a in formula(1, 5), b in formula(1, 5)) {
        let s = session();
        let opts = InterpOptions::default();
        let phi = Formula::and(a.clone(), b);
        let small = s.uniform_exists(&phi, "p", &opts).unwrap();
        let large = s.uniform_exists(&a, "p", &opts).unwrap();
        prop_assert!(s.prover.proves(&small.formula, &large.formula));
    }

    #[test]
    fn certificates_check(phi in formula(1, 7)) {
        let s = session();
        let opts = InterpOptions::default();
        for result in [s.uniform_exists(&phi, "p", &opts).unwrap(), s.uniform_forall(&phi, "p", &opts).unwrap()] {
            let cert = result.to_certificate(&s.store);
            let confirmed = check_certificate(&cert).unwrap();
            let expected = result.classes.iter().filter(|c| c.witness.is_some()).count();
            prop_assert_eq!(confirmed, expected);
        }
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let s = Session::new();
    let phi = Formula::parse("q & p").unwrap();
    let result = s
        .uniform_exists(&phi, "p", &InterpOptions::default())
        .unwrap();
    let mut cert = result.to_certificate(&s.store);
    assert!(check_certificate(&cert).unwrap() > 0);
    cert["input"] = "~q & p".into();
    assert!(check_certificate(&cert).is_err());
}

#[test]
fn witness_model_is_a_model() {
    let store = TypeStore::new();
    let ctx = ProbeContext::from_realizers(&store, &Signature::new(["q"]).unwrap(), "p", 0, 7, 1)
        .unwrap();
    let wm = build_witness_model(&store, &ctx).unwrap();
    let m = &wm.model;
    for a in 0..m.len() {
        for b in m.up(a).ones() {
            assert_eq!(
                m.val(a) & !m.val(b),
                0,
                "valuation must grow along the order"
            );
        }
    }
    assert!(check_lemma(&store, &ctx, &wm).unwrap().passed());
}

#[test]
fn dropping_a_witnessed_pair_is_detected() {
    let store = TypeStore::new();
    let ctx = ProbeContext::from_realizers(&store, &Signature::new(["q"]).unwrap(), "p", 0, 7, 1)
        .unwrap();
    let wm = build_witness_model(&store, &ctx).unwrap();
    for i in 0..wm.len() {
        let damaged = wm.without(&store, i).unwrap();
        let report = check_lemma(&store, &ctx, &damaged).unwrap();
        assert!(!report.passed(), "removing element {i} went unnoticed");
    }
}
