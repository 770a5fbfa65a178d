use std::collections::BTreeMap;

use onevar_tl::gen::{self, random_formula};
use onevar_tl::kripke::{mc_ctl, mc_ctlstar, KripkeModel};
use onevar_tl::satsearch::enumerate_kripke;
use onevar_tl::syntax::derived::*;
use onevar_tl::syntax::{expand_derived, parse, print, substitute, substitute_all, Derived};
use onevar_tl::{AgentSet, Formula, LogicId, StateSet};
use proptest::prelude::*;

const LOGICS: [LogicId; 4] = [LogicId::Ctl, LogicId::CtlStar, LogicId::Atl, LogicId::AtlStar];

fn agents_for(logic: LogicId) -> AgentSet {
    AgentSet::new(if logic.is_alternating() { 3 } else { 1 }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>(), which in 0usize..4, depth in 0usize..6) {
        let logic = LOGICS[which];
        let agents = agents_for(logic);
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, logic, 4, depth, agents);
        let text = print(&f);
        prop_assert_eq!(parse(&text, logic, agents).unwrap(), f, "{}", text);
    }

    #[test]
    fn sequential_substitution_is_simultaneous(seed in any::<u64>(), which in 0usize..4) {
        let logic = LOGICS[which];
        let agents = agents_for(logic);
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, logic, 3, 4, agents);
        // g avoids p1 and p2, h is arbitrary
        let g = random_formula(&mut rng, logic, 3, 2, agents).map_vars(&mut |i| Formula::var(i + 2));
        let h = random_formula(&mut rng, logic, 3, 2, agents);
        let sequential = substitute(&substitute(&f, 1, &g).unwrap(), 2, &h).unwrap();
        let table = BTreeMap::from([(1, g), (2, h)]);
        prop_assert_eq!(sequential, substitute_all(&f, &table).unwrap());
    }

    #[test]
    fn substituting_a_variable_for_itself_is_identity(seed in any::<u64>(), which in 0usize..4) {
        let logic = LOGICS[which];
        let mut rng = gen::rng(seed);
        let f = random_formula(&mut rng, logic, 3, 4, agents_for(logic));
        prop_assert_eq!(substitute(&f, 2, &Formula::var(2)).unwrap(), f);
    }
}

// Reference semantics straight from the path definitions, computed per
// state by forward search rather than by fixpoints.

fn reach_within(m: &KripkeModel, s: usize, region: &StateSet) -> StateSet {
    let mut seen = StateSet::empty(m.len());
    if !region.contains(s) {
        return seen;
    }
    seen.insert(s);
    let mut stack = vec![s];
    while let Some(x) = stack.pop() {
        for &y in m.successors(x) {
            if region.contains(y) && !seen.contains(y) {
                seen.insert(y);
                stack.push(y);
            }
        }
    }
    seen
}

// some path from s stays in region forever
fn infinite_within(m: &KripkeModel, s: usize, region: &StateSet) -> bool {
    let inside = reach_within(m, s, region);
    let on_cycle = inside.iter().any(|x| {
        m.successors(x)
            .iter()
            .any(|&y| region.contains(y) && reach_within(m, y, region).contains(x))
    });
    on_cycle
}

fn ref_ex(m: &KripkeModel, p: &StateSet) -> StateSet {
    StateSet::from_states(
        m.len(),
        (0..m.len()).filter(|&s| m.successors(s).iter().any(|&t| p.contains(t))),
    )
}

fn ref_eu(m: &KripkeModel, p: &StateSet, q: &StateSet) -> StateSet {
    // a p-path, possibly empty, followed by one step into q
    StateSet::from_states(
        m.len(),
        (0..m.len())
            .filter(|&s| q.contains(s) || reach_within(m, s, p).iter().any(|x| ref_ex(m, q).contains(x))),
    )
}

fn ref_eg(m: &KripkeModel, p: &StateSet) -> StateSet {
    StateSet::from_states(m.len(), (0..m.len()).filter(|&s| infinite_within(m, s, p)))
}

fn ref_au(m: &KripkeModel, p: &StateSet, q: &StateSet) -> StateSet {
    // a violating path stays in p ∧ ¬q and then either never leaves or
    // hits ¬p ∧ ¬q
    let waiting = p.difference(q);
    let stuck = p.union(q).complement();
    StateSet::from_states(
        m.len(),
        (0..m.len()).filter(|&s| {
            if q.contains(s) {
                return true;
            }
            if stuck.contains(s) {
                return false;
            }
            let region = reach_within(m, s, &waiting);
            let escapes = region
                .iter()
                .any(|x| m.successors(x).iter().any(|&y| stuck.contains(y)));
            !(escapes || infinite_within(m, s, &waiting))
        }),
    )
}

fn check_derived(m: &KripkeModel, binary: bool) {
    let n = m.len();
    let (p, q) = (m.holds(1), m.holds(2));
    let (fp, fq) = (Formula::var(1), Formula::var(2));
    let all = StateSet::full(n);
    let expand = |d: Derived, args: Vec<Formula>| expand_derived(d, args, LogicId::Ctl).unwrap();
    let mut cases: Vec<(Formula, StateSet)> = vec![
        (expand(Derived::Top, vec![]), all.clone()),
        (expand(Derived::Not, vec![fp.clone()]), p.complement()),
        (expand(Derived::Ex, vec![fp.clone()]), ref_ex(m, &p)),
        (ax(fp.clone()), ref_ex(m, &p.complement()).complement()),
        (expand(Derived::Ef, vec![fp.clone()]), ref_eu(m, &all, &p)),
        (expand(Derived::Af, vec![fp.clone()]), ref_au(m, &all, &p)),
        (expand(Derived::Eg, vec![fp.clone()]), ref_eg(m, &p)),
        (
            expand(Derived::Ag, vec![fp.clone()]),
            ref_eu(m, &all, &p.complement()).complement(),
        ),
    ];
    if binary {
        cases.extend([
            (
                expand(Derived::And, vec![fp.clone(), fq.clone()]),
                p.intersection(&q),
            ),
            (expand(Derived::Or, vec![fp.clone(), fq.clone()]), p.union(&q)),
            (
                expand(Derived::Iff, vec![fp.clone(), fq.clone()]),
                p.implies(&q).intersection(&q.implies(&p)),
            ),
            (
                expand(Derived::Eu, vec![fp.clone(), fq.clone()]),
                ref_eu(m, &p, &q),
            ),
            (
                expand(Derived::Au, vec![fp.clone(), fq.clone()]),
                ref_au(m, &p, &q),
            ),
        ]);
    }
    for (f, expected) in &cases {
        assert_eq!(&mc_ctl(m, f).unwrap(), expected, "{f} on {}", m.to_json(None));
    }
    // the CTL* spellings of the same connectives
    let star = [
        (exists(eventually(fp.clone())), ref_eu(m, &all, &p)),
        (
            Formula::for_all(globally_derived(fp.clone())),
            ref_eu(m, &all, &p.complement()).complement(),
        ),
        (exists(globally_derived(fp.clone())), ref_eg(m, &p)),
    ];
    for (f, expected) in &star {
        assert_eq!(&mc_ctlstar(m, f).unwrap(), expected, "{f} on {}", m.to_json(None));
    }
}

#[test]
fn derived_connectives_match_reference_semantics() {
    for n in 1..=3 {
        for m in enumerate_kripke(n, &[1, 2]) {
            check_derived(&m, true);
        }
    }
    // four states: all frames and all valuations of p1
    for m in enumerate_kripke(4, &[1]) {
        check_derived(&m, false);
    }
}
