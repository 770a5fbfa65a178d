//! Single-variable witness models built from a model of the guarded
//! formula: gadget copies are attached so that `B_i` holds exactly where
//! `p_i` held.

use std::collections::BTreeMap;

use super::gadget::{chain_state, fresh_action, gadget_kripke, gadget_names, ROOT, SINK};
use super::{EmbedError, TranslationResult};
use crate::cgs::ConcurrentGameModel;
use crate::kripke::KripkeModel;
use crate::StateSet;

fn check_guard(holds: &StateSet, guard: u32) -> Result<(), EmbedError> {
    let missing: Vec<usize> = holds.complement().iter().collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(EmbedError::GuardNotGlobal {
            var: guard,
            states: missing,
        })
    }
}

fn check_root(root: usize, states: usize) -> Result<(), EmbedError> {
    if root < states {
        Ok(())
    } else {
        Err(EmbedError::StateOutOfRange { state: root, states })
    }
}

/// Restricts `m` to the states reachable from `root`, adds gadget copies
/// `1..=n+1` (without the root loop) and an edge from every state `x` to
/// the root of gadget `i` whenever `p_i` holds at `x`. Only the output
/// variable remains, false on the original states. Returns the model and
/// the new index of `root`.
pub fn witness_model_forward(
    m: &KripkeModel,
    tr: &TranslationResult,
    root: usize,
) -> Result<(KripkeModel, usize), EmbedError> {
    if tr.logic.is_alternating() {
        return Err(EmbedError::FlavorMismatch(tr.logic));
    }
    check_root(root, m.len())?;
    check_guard(&m.holds(tr.guard), tr.guard)?;
    attach_kripke(m, tr.guard, tr.out_var, root)
}

/// Gadget attachment without the guard precondition: gadgets `1..=gadgets`
/// are linked from wherever `p_i` holds in `m`.
pub(crate) fn attach_kripke(
    m: &KripkeModel,
    gadgets: u32,
    out_var: u32,
    root: usize,
) -> Result<(KripkeModel, usize), EmbedError> {
    let (sub, origin) = m.induced(&m.reachable(root));
    let new_root = origin.binary_search(&root).expect("root is reachable");
    let succ: Vec<Vec<usize>> = (0..sub.len()).map(|s| sub.successors(s).to_vec()).collect();
    let names = origin.iter().map(|o| format!("s{o}")).collect();
    let mut out = KripkeModel::from_parts(succ, BTreeMap::new())
        .with_names(names)
        .expect("name count matches");
    let mut roots = Vec::new();
    for i in 1..=gadgets as usize {
        roots.push(out.len());
        out = out.disjoint_union(&gadget_kripke(i, out_var, false)?);
    }
    for x in 0..sub.len() {
        for i in 1..=gadgets {
            if sub.holds(i).contains(x) {
                out.add_edge(x, roots[i as usize - 1]);
            }
        }
    }
    Ok((out, new_root))
}

/// The concurrent counterpart. Every agent at an original state `x` where
/// `p_i` holds gets an extra link action for gadget `i`; the profile where
/// all agents play that link action leads to the gadget root. Mixed
/// profiles treat each link action as the agent's first ordinary action.
pub fn witness_model_cgs(
    m: &ConcurrentGameModel,
    tr: &TranslationResult,
    root: usize,
) -> Result<(ConcurrentGameModel, usize), EmbedError> {
    if !tr.logic.is_alternating() {
        return Err(EmbedError::FlavorMismatch(tr.logic));
    }
    check_root(root, m.len())?;
    check_guard(&m.holds(tr.guard), tr.guard)?;
    let agents = m.agents();
    if agents != tr.agents {
        return Err(EmbedError::Model(format!(
            "model has {} agents, translation expects {}",
            agents.count(),
            tr.agents.count()
        )));
    }
    attach_cgs(m, tr.guard, tr.out_var, root)
}

pub(crate) fn attach_cgs(
    m: &ConcurrentGameModel,
    gadgets: u32,
    out_var: u32,
    root: usize,
) -> Result<(ConcurrentGameModel, usize), EmbedError> {
    let agents = m.agents();
    let reach = m.to_kripke().reachable(root);
    let origin: Vec<usize> = reach.iter().collect();
    let mut index = vec![usize::MAX; m.len()];
    for (new, &old) in origin.iter().enumerate() {
        index[old] = new;
    }
    let base = origin.len();
    let gadgets = gadgets as usize;

    // alphabet: original actions, the sink-selecting action, link actions
    let mut actions = m.actions().to_vec();
    let d = actions.len();
    actions.push(fresh_action(&actions, "d"));
    let mut link = Vec::new();
    for i in 1..=gadgets {
        link.push(actions.len());
        let name = fresh_action(&actions, &format!("link{i}"));
        actions.push(name);
    }
    let gadget_alphabet: Vec<usize> = (0..=d).collect();

    let mut offsets = Vec::new();
    let mut total = base;
    for i in 1..=gadgets {
        offsets.push(total);
        total += 2 + 2 * i;
    }
    let gadget_of = |s: usize| -> (usize, usize) {
        let g = offsets.iter().rposition(|&o| o <= s).expect("gadget state");
        (g + 1, s - offsets[g])
    };

    let links_at = |x: usize| -> Vec<usize> {
        (1..=gadgets)
            .filter(|&i| m.holds(i as u32).contains(origin[x]))
            .map(|i| link[i - 1])
            .collect()
    };
    let mut available = Vec::with_capacity(total);
    for (x, &old) in origin.iter().enumerate() {
        let extra = links_at(x);
        available.push(
            agents
                .iter()
                .map(|a| {
                    let mut acts = m.available(a, old).to_vec();
                    acts.extend(&extra);
                    acts
                })
                .collect(),
        );
    }
    for _ in base..total {
        available.push(vec![gadget_alphabet.clone(); agents.count() as usize]);
    }

    let delta = |s: usize, profile: &[usize]| -> usize {
        if s < base {
            let old = origin[s];
            if let Some(i) = link.iter().position(|&l| profile.iter().all(|&a| a == l)) {
                return offsets[i];
            }
            let ordinary: Vec<usize> = profile
                .iter()
                .enumerate()
                .map(|(a, &act)| {
                    if act > d {
                        m.available(a as u32 + 1, old)[0]
                    } else {
                        act
                    }
                })
                .collect();
            let p = m.profile_index(old, &ordinary).expect("ordinary profile");
            return index[m.delta(old, p)];
        }
        let (i, local) = gadget_of(s);
        let last = chain_state(2 * i);
        let next = match local {
            ROOT if profile[0] == d => SINK,
            ROOT => chain_state(1),
            SINK => SINK,
            l if l == last => last,
            l => l + 1,
        };
        offsets[i - 1] + next
    };

    let mut p = StateSet::empty(total);
    for (i, &o) in offsets.iter().enumerate() {
        p.insert(o + ROOT);
        for k in 1..=i + 1 {
            p.insert(o + chain_state(2 * k));
        }
    }
    let valuation = BTreeMap::from([(out_var, p)]);
    let mut names: Vec<String> = origin.iter().map(|o| format!("s{o}")).collect();
    for i in 1..=gadgets {
        names.extend(gadget_names(i));
    }
    let out = ConcurrentGameModel::new(agents, actions, available, delta, valuation)
        .map_err(|e| EmbedError::Model(e.to_string()))?
        .with_names(names)
        .expect("name count matches");
    Ok((out, index[root]))
}
