//! Gadget models whose root is the only state satisfying a fixed
//! single-variable formula.

use serde::Serialize;

use super::EmbedError;
use crate::cgs::ConcurrentGameModel;
use crate::kripke::KripkeModel;
use crate::syntax::derived::*;
use crate::{AgentSet, Coalition, Formula, StateSet};

/// Branching-time (CTL) or alternating-time (ATL) gadget formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Branching,
    Alternating,
}

/// Index of `r_m`, `b^m` and `a_i^m` in a gadget.
pub const ROOT: usize = 0;
pub const SINK: usize = 1;

pub fn chain_state(i: usize) -> usize {
    1 + i
}

/// `χ_0 = ∀□p`, `χ_{k+1} = p ∧ EX(¬p ∧ EX χ_k)`; in the alternating
/// flavor `∀□` is `⟨⟨∅⟩⟩□` and `EX` is `⟨⟨𝔸𝔾⟩⟩◯`.
pub fn chi(k: usize, flavor: Flavor, var: u32, agents: AgentSet) -> Formula {
    let p = Formula::var(var);
    let (mut acc, step): (Formula, Box<dyn Fn(Formula) -> Formula>) = match flavor {
        Flavor::Branching => (ag(p.clone()), Box::new(ex)),
        Flavor::Alternating => (
            cg(Coalition::EMPTY, p.clone()),
            Box::new(move |x| cx(agents.all(), x)),
        ),
    };
    for _ in 0..k {
        acc = and(p.clone(), step(and(not(p.clone()), step(acc))));
    }
    acc
}

/// `A_m = χ_m ∧ EX AG ¬p`, or `χ′_m ∧ ⟨⟨𝔸𝔾⟩⟩◯⟨⟨∅⟩⟩□¬p`.
pub fn gadget_formula(m: usize, flavor: Flavor, var: u32, agents: AgentSet) -> Formula {
    let p = Formula::var(var);
    let tail = match flavor {
        Flavor::Branching => ex(ag(not(p))),
        Flavor::Alternating => cx(agents.all(), cg(Coalition::EMPTY, not(p))),
    };
    and(chi(m, flavor, var, agents), tail)
}

/// `B_m = EX A_m`, or `⟨⟨𝔸𝔾⟩⟩◯A′_m`.
pub fn b_formula(m: usize, flavor: Flavor, var: u32, agents: AgentSet) -> Formula {
    let a = gadget_formula(m, flavor, var, agents);
    match flavor {
        Flavor::Branching => ex(a),
        Flavor::Alternating => cx(agents.all(), a),
    }
}

pub(crate) fn gadget_names(m: usize) -> Vec<String> {
    let mut names = vec![format!("r_{m}"), format!("b_{m}")];
    names.extend((1..=2 * m).map(|i| format!("a{i}_{m}")));
    names
}

fn gadget_valuation(m: usize) -> StateSet {
    let n = 2 + 2 * m;
    let mut p = StateSet::empty(n);
    p.insert(ROOT);
    for k in 1..=m {
        p.insert(chain_state(2 * k));
    }
    p
}

/// The root-plus-sink-plus-chain model with a loop on every state; the
/// variable `var` holds at the root and at even chain states.
pub fn gadget_model_kripke(m: usize, var: u32) -> Result<KripkeModel, EmbedError> {
    gadget_kripke(m, var, true)
}

pub(crate) fn gadget_kripke(m: usize, var: u32, root_loop: bool) -> Result<KripkeModel, EmbedError> {
    if m == 0 {
        return Err(EmbedError::GadgetIndex);
    }
    let n = 2 + 2 * m;
    let mut succ: Vec<Vec<usize>> = (0..n).map(|s| vec![s]).collect();
    if !root_loop {
        succ[ROOT].clear();
    }
    succ[ROOT].extend([SINK, chain_state(1)]);
    for i in 1..2 * m {
        succ[chain_state(i)].push(chain_state(i + 1));
    }
    let valuation = [(var, gadget_valuation(m))].into_iter().collect();
    Ok(KripkeModel::from_parts(succ, valuation)
        .with_names(gadget_names(m))
        .expect("name count matches"))
}

/// Picks a name for the sink-selecting action that is not in `pool`.
pub(crate) fn fresh_action(pool: &[String], base: &str) -> String {
    let mut name = base.to_string();
    while pool.contains(&name) {
        name.push('\'');
    }
    name
}

/// The concurrent version: every agent may play any action of `pool` or
/// the extra action `d`. At the root, agent 1 playing `d` leads to the
/// sink and every other profile to the chain; chain states advance; the
/// sink and the last chain state loop.
pub fn gadget_model_cgs(
    m: usize,
    var: u32,
    agents: AgentSet,
    pool: &[String],
) -> Result<ConcurrentGameModel, EmbedError> {
    if m == 0 {
        return Err(EmbedError::GadgetIndex);
    }
    if pool.is_empty() {
        return Err(EmbedError::EmptyActionPool);
    }
    let mut actions: Vec<String> = Vec::new();
    for a in pool {
        if !actions.contains(a) {
            actions.push(a.clone());
        }
    }
    let d = actions.len();
    actions.push(fresh_action(&actions, "d"));
    gadget_cgs_over(m, var, agents, actions, d)
}

/// Gadget over an explicit alphabet; every action is available everywhere
/// and `d` is the sink-selecting action id.
pub(crate) fn gadget_cgs_over(
    m: usize,
    var: u32,
    agents: AgentSet,
    actions: Vec<String>,
    d: usize,
) -> Result<ConcurrentGameModel, EmbedError> {
    let n = 2 + 2 * m;
    let all: Vec<usize> = (0..actions.len()).collect();
    let available = vec![vec![all; agents.count() as usize]; n];
    let last = chain_state(2 * m);
    let delta = |s: usize, profile: &[usize]| match s {
        ROOT if profile[0] == d => SINK,
        ROOT => chain_state(1),
        SINK => SINK,
        s if s == last => last,
        s => s + 1,
    };
    let valuation = [(var, gadget_valuation(m))].into_iter().collect();
    let model = ConcurrentGameModel::new(agents, actions, available, delta, valuation)
        .map_err(|e| EmbedError::Model(e.to_string()))?;
    Ok(model.with_names(gadget_names(m)).expect("name count matches"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgs::mc_atl;
    use crate::kripke::mc_ctl;
    use crate::syntax::parse;
    use crate::LogicId;

    fn one() -> AgentSet {
        AgentSet::new(1).unwrap()
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(0, Flavor::Branching, 1, one()), ag(Formula::var(1)));
        assert_eq!(
            chi(1, Flavor::Branching, 1, one()),
            parse("p1 & EX (!p1 & EX AG p1)", LogicId::Ctl, one()).unwrap()
        );
        let two = AgentSet::new(2).unwrap();
        assert_eq!(
            chi(1, Flavor::Alternating, 1, two),
            parse("p1 & <<*>> X (!p1 & <<*>> X <<>> G p1)", LogicId::Atl, two).unwrap()
        );
        let sizes: Vec<usize> = (0..5)
            .map(|k| chi(k, Flavor::Branching, 1, one()).size())
            .collect();
        let steps: Vec<usize> = sizes.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps.windows(2).all(|w| w[0] == w[1]), "{sizes:?}");
    }

    #[test]
    fn gadget_one_shape() {
        let g = gadget_model_kripke(1, 1).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.edge_count(), 7);
        assert_eq!(g.holds(1).to_vec(), vec![ROOT, chain_state(2)]);
        assert!(gadget_model_kripke(3, 1).unwrap().validate().is_ok());
    }

    #[test]
    fn roots_are_characterized() {
        for k in 1..=3 {
            let model = gadget_model_kripke(k, 1).unwrap();
            for m in 1..=3 {
                let set = mc_ctl(&model, &gadget_formula(m, Flavor::Branching, 1, one())).unwrap();
                let expected: Vec<usize> = if k == m { vec![ROOT] } else { vec![] };
                assert_eq!(set.to_vec(), expected, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn cgs_roots_are_characterized() {
        let two = AgentSet::new(2).unwrap();
        let pool = vec!["x".to_string()];
        for k in 1..=3 {
            let model = gadget_model_cgs(k, 1, two, &pool).unwrap();
            let sink_safe = mc_atl(&model, &cg(Coalition::EMPTY, not(Formula::var(1)))).unwrap();
            assert!(sink_safe.contains(SINK));
            for m in 1..=3 {
                let set = mc_atl(&model, &gadget_formula(m, Flavor::Alternating, 1, two)).unwrap();
                let expected: Vec<usize> = if k == m { vec![ROOT] } else { vec![] };
                assert_eq!(set.to_vec(), expected, "k={k} m={m}");
            }
        }
    }

    #[test]
    fn cgs_gadget_errors() {
        assert_eq!(
            gadget_model_cgs(1, 1, one(), &[]).unwrap_err(),
            EmbedError::EmptyActionPool
        );
        assert_eq!(gadget_model_kripke(0, 1).unwrap_err(), EmbedError::GadgetIndex);
        assert_eq!(fresh_action(&["d".into()], "d"), "d'");
    }
}
