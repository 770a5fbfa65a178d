use onevar_tl::gen::{self, random_formula, random_kripke, random_path_formula};
use onevar_tl::kripke::lasso::lasso_exists;
use onevar_tl::kripke::{exists_path_states, mc_ctl, mc_ctlstar, restrict_submodel, KripkeModel};
use onevar_tl::syntax::derived::not;
use onevar_tl::syntax::substitute;
use onevar_tl::{AgentSet, LogicId};
use proptest::prelude::*;

fn agents() -> AgentSet {
    AgentSet::new(1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn path_checker_matches_lassos(seed in any::<u64>(), states in 1usize..=4) {
        let mut rng = gen::rng(seed);
        let m = random_kripke(&mut rng, states, 2, 0.4);
        let f = random_path_formula(&mut rng, 2, 3);
        let fast = exists_path_states(&m, &f).unwrap();
        // a practical cap; the complete bound is exponential in the formula
        let bound = 3 * states + 3;
        for s in 0..states {
            prop_assert_eq!(fast.contains(s), lasso_exists(&m, s, &f, bound).unwrap(),
                "formula {} state {} model {}", f, s, m.to_json(None));
        }
    }

    #[test]
    fn ctl_and_ctlstar_agree(seed in any::<u64>(), states in 1usize..=5) {
        let mut rng = gen::rng(seed);
        let m = random_kripke(&mut rng, states, 3, 0.4);
        let f = random_formula(&mut rng, LogicId::Ctl, 3, 4, agents());
        prop_assert_eq!(mc_ctl(&m, &f).unwrap(), mc_ctlstar(&m, &f).unwrap(), "{}", f);
    }

    #[test]
    fn negation_complements(seed in any::<u64>(), states in 1usize..=5) {
        let mut rng = gen::rng(seed);
        let m = random_kripke(&mut rng, states, 2, 0.4);
        let f = random_formula(&mut rng, LogicId::Ctl, 2, 3, agents());
        prop_assert_eq!(mc_ctl(&m, &not(f.clone())).unwrap(), mc_ctl(&m, &f).unwrap().complement());
        let g = random_formula(&mut rng, LogicId::CtlStar, 2, 3, agents());
        prop_assert_eq!(mc_ctlstar(&m, &not(g.clone())).unwrap(), mc_ctlstar(&m, &g).unwrap().complement());
    }

    #[test]
    fn restriction_keeps_guard(seed in any::<u64>(), states in 1usize..=6) {
        let mut rng = gen::rng(seed);
        let m = random_kripke(&mut rng, states, 2, 0.4);
        if let Ok((sub, _)) = restrict_submodel(&m, 0, 2) {
            prop_assert!(sub.validate().is_ok());
            // every state but the start is guarded
            prop_assert!((1..sub.len()).all(|s| sub.holds(2).contains(s)));
        }
    }

    // checking f[p3 := g] equals checking f with p3 read as the extension
    // of g; the exhaustive cross-check relies on this for both checkers
    #[test]
    fn checkers_are_compositional(seed in any::<u64>(), states in 1usize..=5) {
        let mut rng = gen::rng(seed);
        let m = random_kripke(&mut rng, states, 2, 0.4);
        for (logic, check) in [
            (LogicId::Ctl, mc_ctl as fn(&KripkeModel, &onevar_tl::Formula) -> _),
            (LogicId::CtlStar, mc_ctlstar),
        ] {
            let f = random_formula(&mut rng, logic, 3, 3, agents());
            let g = random_formula(&mut rng, logic, 2, 3, agents());
            let mut reread = m.clone();
            reread.set_valuation(3, check(&m, &g).unwrap());
            let image = substitute(&f, 3, &g).unwrap();
            prop_assert_eq!(check(&m, &image).unwrap(), check(&reread, &f).unwrap(), "{} / {}", f, g);
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), states in 1usize..=6) {
        let mut rng = gen::rng(seed);
        let m = random_kripke(&mut rng, states, 3, 0.4);
        let (back, designated) = KripkeModel::from_json(&m.to_json(None)).unwrap();
        prop_assert_eq!(designated, None);
        prop_assert_eq!(back, m);
    }
}
