//! Memoryless strategy enumeration, an independent check on `mc_atl`.

use rayon::prelude::*;
use thiserror::Error;

use super::{mc_atl, ConcurrentGameModel};
use crate::kripke::CheckError;
use crate::{Formula, StateSet};

pub const DEFAULT_STRATEGY_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{needed} strategy profiles exceed the budget of {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error("`{0}` is not a coalition formula over a next, always or until objective")]
    Shape(String),
    #[error(transparent)]
    Check(#[from] CheckError),
}

enum Objective {
    Next(StateSet),
    Always(StateSet),
    Until(StateSet, StateSet),
}

/// Whether some memoryless strategy profile of the coalition forces the
/// objective of `f = ⟨⟨C⟩⟩ϑ` from `s` on every compatible path. Operands of
/// the objective are evaluated with `mc_atl`.
pub fn strategy_oracle(
    m: &ConcurrentGameModel,
    s: usize,
    f: &Formula,
    budget: u64,
) -> Result<bool, OracleError> {
    if s >= m.len() {
        return Err(CheckError::StateOutOfRange {
            state: s,
            states: m.len(),
        }
        .into());
    }
    let (coalition, body) = match f {
        Formula::Coalition(c, body) => (*c, &**body),
        _ => return Err(OracleError::Shape(f.to_string())),
    };
    if coalition.max_agent() > m.agents().count() {
        return Err(CheckError::AgentOutOfRange {
            agent: coalition.max_agent(),
            count: m.agents().count(),
        }
        .into());
    }
    let objective = match body {
        Formula::Next(a) => Objective::Next(mc_atl(m, a)?),
        Formula::Always(a) => Objective::Always(mc_atl(m, a)?),
        Formula::Until(a, b) => Objective::Until(mc_atl(m, a)?, mc_atl(m, b)?),
        _ => return Err(OracleError::Shape(f.to_string())),
    };

    // only states reachable under some profile can matter
    let reach = m.to_kripke().reachable(s);
    let slots: Vec<(usize, u32)> = reach
        .iter()
        .flat_map(|x| coalition.iter().map(move |a| (x, a)))
        .collect();
    let mut needed: u64 = 1;
    for &(x, a) in &slots {
        needed = needed.saturating_mul(m.available(a, x).len() as u64);
    }
    if needed > budget {
        return Err(OracleError::Budget { needed, budget });
    }
    Ok((0..needed)
        .into_par_iter()
        .any(|index| wins(m, s, &slots, index, &objective)))
}

fn wins(
    m: &ConcurrentGameModel,
    s: usize,
    slots: &[(usize, u32)],
    mut index: u64,
    objective: &Objective,
) -> bool {
    // decode the strategy: one action per (state, agent) slot
    let mut fixed: Vec<Vec<Option<usize>>> = vec![vec![None; m.agents().count() as usize]; m.len()];
    for &(x, a) in slots {
        let acts = m.available(a, x);
        fixed[x][a as usize - 1] = Some(acts[(index % acts.len() as u64) as usize]);
        index /= acts.len() as u64;
    }
    let succ = |x: usize| -> Vec<usize> {
        let mut out: Vec<usize> = (0..m.profile_count(x))
            .filter(|&p| {
                m.profile_actions(x, p)
                    .iter()
                    .zip(&fixed[x])
                    .all(|(act, want)| want.is_none_or(|w| w == *act))
            })
            .map(|p| m.delta(x, p))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    };
    match objective {
        Objective::Next(goal) => succ(s).iter().all(|&t| goal.contains(t)),
        Objective::Always(inv) => {
            // every state reachable in the pruned graph satisfies inv
            let mut seen = vec![false; m.len()];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                if !inv.contains(x) {
                    return false;
                }
                for t in succ(x) {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            true
        }
        Objective::Until(stay, goal) => {
            // explore states not yet at the goal; fail on a bad state or a cycle
            let mut region = vec![false; m.len()];
            let mut stack = vec![s];
            let mut order = Vec::new();
            if goal.contains(s) {
                return true;
            }
            region[s] = true;
            while let Some(x) = stack.pop() {
                if !stay.contains(x) {
                    return false;
                }
                order.push(x);
                for t in succ(x) {
                    if !goal.contains(t) && !region[t] {
                        region[t] = true;
                        stack.push(t);
                    }
                }
            }
            !has_cycle(&order, &region, |x| {
                succ(x).into_iter().filter(|&t| !goal.contains(t)).collect()
            })
        }
    }
}

fn has_cycle(nodes: &[usize], region: &[bool], succ: impl Fn(usize) -> Vec<usize>) -> bool {
    // 0 unvisited, 1 on stack, 2 done
    let mut color = vec![0u8; region.len()];
    for &start in nodes {
        if color[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, succ(start), 0usize)];
        color[start] = 1;
        while let Some((x, next, i)) = stack.last_mut() {
            if *i < next.len() {
                let t = next[*i];
                *i += 1;
                if !region[t] {
                    continue;
                }
                match color[t] {
                    1 => return true,
                    0 => {
                        color[t] = 1;
                        let ts = succ(t);
                        stack.push((t, ts, 0));
                    }
                    _ => {}
                }
            } else {
                color[*x] = 2;
                stack.pop();
            }
        }
    }
    false
}
