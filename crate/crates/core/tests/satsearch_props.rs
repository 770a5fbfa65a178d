use onevar_tl::cgs::mc_atl;
use onevar_tl::embedding::{gadget_formula, Flavor};
use onevar_tl::gen::{self, random_formula};
use onevar_tl::kripke::{mc_ctl, mc_ctlstar};
use onevar_tl::satsearch::{bounded_sat, bounded_sat_cgs, bounded_sat_with, SatStatus, SearchOptions};
use onevar_tl::{AgentSet, LogicId};
use proptest::prelude::*;

fn one() -> AgentSet {
    AgentSet::new(1).unwrap()
}

fn opts(jobs: usize) -> SearchOptions {
    SearchOptions {
        max_models: Some(200_000),
        jobs,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn witnesses_recheck(seed in any::<u64>(), star in any::<bool>()) {
        let logic = if star { LogicId::CtlStar } else { LogicId::Ctl };
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, logic, 2, 3, one());
        let Ok(v) = bounded_sat_with(&f, logic, 2, opts(0)) else { return Ok(()) };
        if let Some(w) = v.witness {
            prop_assert_eq!(v.status, SatStatus::Sat);
            let set = if star { mc_ctlstar(&w.model, &f) } else { mc_ctl(&w.model, &f) }.unwrap();
            prop_assert!(set.contains(w.state), "{}", f);
        } else {
            prop_assert_eq!(v.status, SatStatus::Unknown);
        }
    }

    #[test]
    fn larger_bounds_keep_sat(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, LogicId::Ctl, 2, 3, one());
        let mut seen_sat = false;
        for bound in 1..=3 {
            match bounded_sat_with(&f, LogicId::Ctl, bound, opts(0)) {
                Ok(v) => {
                    prop_assert!(!seen_sat || v.is_sat(), "{} lost at bound {}", f, bound);
                    seen_sat |= v.is_sat();
                }
                Err(_) => break,
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_the_verdict(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, LogicId::Ctl, 2, 3, one());
        let a = bounded_sat_with(&f, LogicId::Ctl, 3, opts(1));
        let b = bounded_sat_with(&f, LogicId::Ctl, 3, opts(2));
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.status, b.status);
                prop_assert_eq!(a.models_examined, b.models_examined);
                prop_assert_eq!(a.witness.map(|w| (w.model, w.state)), b.witness.map(|w| (w.model, w.state)));
            }
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn game_witnesses_recheck(seed in any::<u64>()) {
        let agents = AgentSet::new(2).unwrap();
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, LogicId::Atl, 1, 2, agents);
        let Ok(v) = bounded_sat_cgs(&f, agents, 2, 2, opts(0)) else { return Ok(()) };
        if let Some(w) = v.witness {
            prop_assert!(mc_atl(&w.model, &f).unwrap().contains(w.state), "{}", f);
        }
    }
}

#[test]
fn first_gadget_formula_has_a_small_model() {
    let f = gadget_formula(1, Flavor::Branching, 1, one());
    let v = bounded_sat(&f, LogicId::Ctl, 4).unwrap();
    assert!(v.is_sat());
    assert!(v.witness.unwrap().model.len() <= 4);
}
