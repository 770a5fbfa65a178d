use onevar_tl::embedding::{embed, gadget_model_kripke, witness_model_forward, Flavor};
use onevar_tl::gen::{self, random_formula, random_kripke};
use onevar_tl::kripke::{mc_ctl, mc_ctlstar, restrict_submodel, KripkeModel};
use onevar_tl::syntax::belongs_to;
use onevar_tl::syntax::derived::and;
use onevar_tl::verify::{self, Suite, VerifyConfig};
use onevar_tl::{AgentSet, Formula, LogicId, StateSet};
use proptest::prelude::*;
use rand::Rng;

const LOGICS: [LogicId; 4] = [LogicId::Ctl, LogicId::CtlStar, LogicId::Atl, LogicId::AtlStar];

fn agents_for(logic: LogicId) -> AgentSet {
    AgentSet::new(if logic.is_alternating() { 2 } else { 1 }).unwrap()
}

fn check(logic: LogicId, m: &KripkeModel, f: &Formula) -> StateSet {
    match logic {
        LogicId::Ctl => mc_ctl(m, f).unwrap(),
        _ => mc_ctlstar(m, f).unwrap(),
    }
}

fn small_config(seed: u64) -> VerifyConfig {
    VerifyConfig {
        seed,
        cases: 6,
        models_per_case: 4,
        max_m: 3,
        max_states: 4,
        ..VerifyConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_shape(seed in any::<u64>(), which in 0usize..4, depth in 0usize..5) {
        let logic = LOGICS[which];
        let agents = agents_for(logic);
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, logic, 4, depth, agents);
        let tr = embed(&f, logic, agents).unwrap();
        prop_assert_eq!(tr.n as usize, f.variables().len());
        prop_assert_eq!(tr.guard, tr.n + 1);
        prop_assert_eq!(tr.restore(&tr.renamed), f);
        prop_assert_eq!(&tr.hat, &and(tr.theta.clone(), tr.primed.clone()));
        prop_assert_eq!(tr.sigma.keys().copied().collect::<Vec<_>>(), (1..=tr.guard).collect::<Vec<_>>());
        prop_assert_eq!(tr.star.variables().into_iter().collect::<Vec<_>>(), vec![tr.out_var]);
        prop_assert!(tr.star.is_state() && belongs_to(&tr.star, logic));
        let flavor = if logic.is_alternating() { Flavor::Alternating } else { Flavor::Branching };
        prop_assert_eq!(tr.flavor(), flavor);
    }

    // whenever the guarded formula holds somewhere, the guarded part
    // reachable from there is serial and still satisfies it
    #[test]
    fn guarded_restriction_preserves_truth(seed in any::<u64>(), which in 0usize..2, states in 1usize..=6) {
        let logic = LOGICS[which];
        let agents = agents_for(logic);
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, logic, 2, 3, agents);
        let tr = embed(&f, logic, agents).unwrap();
        let m = random_kripke(&mut rng, states, tr.guard, 0.4);
        let holds = check(logic, &m, &tr.hat);
        for s in holds.iter() {
            let (sub, origin) = restrict_submodel(&m, s, tr.guard).unwrap();
            let at = origin.iter().position(|&o| o == s).unwrap();
            prop_assert!(check(logic, &sub, &tr.hat).contains(at), "{} at {}", tr.hat, s);
        }
    }

    #[test]
    fn forward_witness_is_serial_over_one_variable(seed in any::<u64>(), which in 0usize..2, states in 1usize..=5) {
        let logic = LOGICS[which];
        let agents = agents_for(logic);
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, logic, 3, 3, agents);
        let tr = embed(&f, logic, agents).unwrap();
        let mut m = random_kripke(&mut rng, states, tr.n, 0.4);
        m.set_valuation(tr.guard, StateSet::full(states));
        let root = rng.gen_range(0..states);
        let (w, r) = witness_model_forward(&m, &tr, root).unwrap();
        prop_assert!(w.validate().is_ok());
        prop_assert!(w.valuation().keys().all(|&v| v == tr.out_var));
        let original = m.reachable(root).len();
        prop_assert!(r < original);
        prop_assert!((0..original).all(|x| !w.holds(tr.out_var).contains(x)));
    }

    #[test]
    fn gadget_json_round_trip(index in 1usize..=6, var in 1u32..=4) {
        let g = gadget_model_kripke(index, var).unwrap();
        let (back, designated) = KripkeModel::from_json(&g.to_json(Some(0))).unwrap();
        prop_assert_eq!(designated, Some(0));
        prop_assert_eq!(back, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn suites_pass_for_any_seed(seed in any::<u64>()) {
        for suite in [Suite::E1, Suite::E2, Suite::E4, Suite::E5] {
            let report = verify::run(suite, &small_config(seed));
            prop_assert!(report.passed() && report.checked > 0, "{:?}", report);
        }
    }
}

#[test]
fn gadget_roots_suite() {
    let report = verify::run(Suite::E3, &small_config(verify::DEFAULT_SEED));
    assert!(report.passed(), "{report:?}");
    assert!(report.checked > 0);
}
