//! Seeded random formulas and models for property checks.
//!
//! Depth counts operator layers as the generator builds them, so `AG p1`
//! has depth 1 although its core expansion is deeper.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cgs::ConcurrentGameModel;
use crate::kripke::KripkeModel;
use crate::syntax::derived::*;
use crate::{AgentSet, Coalition, Formula, LogicId, StateSet};

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A serial model on exactly `states` states; each edge is present with
/// probability `density`, and a state without successors gets one random
/// successor.
pub fn random_kripke(rng: &mut GenRng, states: usize, vars: u32, density: f64) -> KripkeModel {
    let mut succ = Vec::with_capacity(states);
    for _ in 0..states {
        let mut row: Vec<usize> = (0..states).filter(|_| rng.gen_bool(density)).collect();
        if row.is_empty() {
            row.push(rng.gen_range(0..states));
        }
        succ.push(row);
    }
    let valuation = (1..=vars)
        .map(|v| {
            let set = StateSet::from_states(states, (0..states).filter(|_| rng.gen_bool(0.5)));
            (v, set)
        })
        .collect();
    KripkeModel::from_parts(succ, valuation)
}

/// A model with `states` states where every agent has between one and
/// `max_actions` actions at each state (a prefix of `a0, a1, ...`) and
/// every transition target is uniform.
pub fn random_cgs(
    rng: &mut GenRng,
    states: usize,
    agents: AgentSet,
    max_actions: usize,
    vars: u32,
) -> ConcurrentGameModel {
    let actions: Vec<String> = (0..max_actions).map(|i| format!("a{i}")).collect();
    let available: Vec<Vec<Vec<usize>>> = (0..states)
        .map(|_| {
            agents
                .iter()
                .map(|_| (0..rng.gen_range(1..=max_actions)).collect())
                .collect()
        })
        .collect();
    let profiles: usize = available
        .iter()
        .map(|row| row.iter().map(Vec::len).product::<usize>())
        .sum();
    let targets: Vec<usize> = (0..profiles).map(|_| rng.gen_range(0..states)).collect();
    let mut next = targets.into_iter();
    let valuation: BTreeMap<u32, StateSet> = (1..=vars)
        .map(|v| {
            (
                v,
                StateSet::from_states(states, (0..states).filter(|_| rng.gen_bool(0.5))),
            )
        })
        .collect();
    ConcurrentGameModel::new(
        agents,
        actions,
        available,
        |_, _| next.next().expect("one target per profile"),
        valuation,
    )
    .expect("well-formed by construction")
}

fn leaf(rng: &mut GenRng, vars: u32) -> Formula {
    let roll: f64 = rng.gen();
    if vars == 0 || roll < 0.05 {
        Formula::Falsum
    } else if roll < 0.1 {
        top()
    } else {
        Formula::var(rng.gen_range(1..=vars))
    }
}

fn stop(rng: &mut GenRng, depth: usize) -> bool {
    depth == 0 || rng.gen_bool(0.15)
}

/// A random state formula of `logic` over `p1..p_vars`.
pub fn random_formula(
    rng: &mut GenRng,
    logic: LogicId,
    vars: u32,
    depth: usize,
    agents: AgentSet,
) -> Formula {
    match logic {
        LogicId::Ctl => ctl(rng, vars, depth),
        LogicId::CtlStar => ctlstar_state(rng, vars, depth),
        LogicId::Atl => atl(rng, vars, depth, agents),
        LogicId::AtlStar => atlstar_state(rng, vars, depth, agents),
    }
}

fn boolean(rng: &mut GenRng, depth: usize, sub: &mut dyn FnMut(&mut GenRng, usize) -> Formula) -> Formula {
    match rng.gen_range(0..4) {
        0 => not(sub(rng, depth - 1)),
        1 => {
            let a = sub(rng, depth - 1);
            Formula::implies(a, sub(rng, depth - 1))
        }
        2 => {
            let a = sub(rng, depth - 1);
            and(a, sub(rng, depth - 1))
        }
        _ => {
            let a = sub(rng, depth - 1);
            or(a, sub(rng, depth - 1))
        }
    }
}

pub fn ctl(rng: &mut GenRng, vars: u32, depth: usize) -> Formula {
    if stop(rng, depth) {
        return leaf(rng, vars);
    }
    let mut sub = |r: &mut GenRng, d: usize| ctl(r, vars, d);
    match rng.gen_range(0..12) {
        0..=3 => boolean(rng, depth, &mut sub),
        4 => ax(sub(rng, depth - 1)),
        5 => ex(sub(rng, depth - 1)),
        6 => {
            let a = sub(rng, depth - 1);
            au(a, sub(rng, depth - 1))
        }
        7 => {
            let a = sub(rng, depth - 1);
            eu(a, sub(rng, depth - 1))
        }
        8 => af(sub(rng, depth - 1)),
        9 => ef(sub(rng, depth - 1)),
        10 => ag(sub(rng, depth - 1)),
        _ => eg(sub(rng, depth - 1)),
    }
}

fn ctlstar_state(rng: &mut GenRng, vars: u32, depth: usize) -> Formula {
    if stop(rng, depth) {
        return leaf(rng, vars);
    }
    match rng.gen_range(0..4) {
        0 | 1 => boolean(rng, depth, &mut |r, d| ctlstar_state(r, vars, d)),
        2 => Formula::for_all(ltl(rng, depth - 1, &mut |r, d| ctlstar_state(r, vars, d), false)),
        _ => exists(ltl(rng, depth - 1, &mut |r, d| ctlstar_state(r, vars, d), false)),
    }
}

/// A quantifier-free path formula over `p1..p_vars`, with derived `G`.
pub fn random_path_formula(rng: &mut GenRng, vars: u32, depth: usize) -> Formula {
    ltl(rng, depth, &mut |r, _| leaf(r, vars), false)
}

// Path formulas whose state leaves come from `state`; `primitive_always`
// selects `Always` over the derived `¬◇¬`.
fn ltl(
    rng: &mut GenRng,
    depth: usize,
    state: &mut dyn FnMut(&mut GenRng, usize) -> Formula,
    primitive_always: bool,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.1) {
        return state(rng, depth);
    }
    match rng.gen_range(0..7) {
        0 => not(ltl(rng, depth - 1, state, primitive_always)),
        1 => {
            let a = ltl(rng, depth - 1, state, primitive_always);
            and(a, ltl(rng, depth - 1, state, primitive_always))
        }
        2 => {
            let a = ltl(rng, depth - 1, state, primitive_always);
            Formula::implies(a, ltl(rng, depth - 1, state, primitive_always))
        }
        3 => Formula::next(ltl(rng, depth - 1, state, primitive_always)),
        4 => {
            let a = ltl(rng, depth - 1, state, primitive_always);
            Formula::until(a, ltl(rng, depth - 1, state, primitive_always))
        }
        5 => {
            let a = ltl(rng, depth - 1, state, primitive_always);
            if primitive_always {
                Formula::always(a)
            } else {
                globally_derived(a)
            }
        }
        _ => eventually(ltl(rng, depth - 1, state, primitive_always)),
    }
}

pub fn random_coalition(rng: &mut GenRng, agents: AgentSet) -> Coalition {
    // bias toward the extremes, which the translation treats specially
    match rng.gen_range(0..4) {
        0 => Coalition::EMPTY,
        1 => agents.all(),
        _ => {
            let members: Vec<u32> = agents.iter().filter(|_| rng.gen_bool(0.5)).collect();
            Coalition::from_agents(members).expect("agents in range")
        }
    }
}

fn atl(rng: &mut GenRng, vars: u32, depth: usize, agents: AgentSet) -> Formula {
    if stop(rng, depth) {
        return leaf(rng, vars);
    }
    let mut sub = |r: &mut GenRng, d: usize| atl(r, vars, d, agents);
    match rng.gen_range(0..7) {
        0..=3 => boolean(rng, depth, &mut sub),
        4 => {
            let c = random_coalition(rng, agents);
            cx(c, sub(rng, depth - 1))
        }
        5 => {
            let c = random_coalition(rng, agents);
            cg(c, sub(rng, depth - 1))
        }
        _ => {
            let c = random_coalition(rng, agents);
            let a = sub(rng, depth - 1);
            cu(c, a, sub(rng, depth - 1))
        }
    }
}

fn atlstar_state(rng: &mut GenRng, vars: u32, depth: usize, agents: AgentSet) -> Formula {
    if stop(rng, depth) {
        return leaf(rng, vars);
    }
    if rng.gen_bool(0.5) {
        boolean(rng, depth, &mut |r, d| atlstar_state(r, vars, d, agents))
    } else {
        let c = random_coalition(rng, agents);
        let body = ltl(
            rng,
            depth - 1,
            &mut |r, d| atlstar_state(r, vars, d, agents),
            true,
        );
        Formula::coalition(c, body)
    }
}

/// An ATL* formula whose coalitions are all empty or grand.
pub fn random_extremal_atlstar(rng: &mut GenRng, vars: u32, depth: usize, agents: AgentSet) -> Formula {
    if stop(rng, depth) {
        return leaf(rng, vars);
    }
    if rng.gen_bool(0.5) {
        boolean(rng, depth, &mut |r, d| {
            random_extremal_atlstar(r, vars, d, agents)
        })
    } else {
        let c = *[Coalition::EMPTY, agents.all()].choose(rng).expect("non-empty");
        let body = ltl(
            rng,
            depth - 1,
            &mut |r, d| random_extremal_atlstar(r, vars, d, agents),
            true,
        );
        Formula::coalition(c, body)
    }
}
