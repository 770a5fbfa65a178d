use super::{pre, ConcurrentGameModel};
use crate::kripke::{mc_ctlstar, CheckError};
use crate::syntax::derived::exists;
use crate::syntax::is_atl;
use crate::{Coalition, Formula, StateSet};

fn check_agents(m: &ConcurrentGameModel, f: &Formula) -> Result<(), CheckError> {
    let count = m.agents().count();
    for c in f.coalitions() {
        if c.max_agent() > count {
            return Err(CheckError::AgentOutOfRange {
                agent: c.max_agent(),
                count,
            });
        }
    }
    Ok(())
}

/// Global ATL model checking by fixpoints of the controllable predecessor.
pub fn mc_atl(m: &ConcurrentGameModel, f: &Formula) -> Result<StateSet, CheckError> {
    if !is_atl(f) {
        return Err(CheckError::NotAtl(f.to_string()));
    }
    check_agents(m, f)?;
    Ok(eval(m, f))
}

fn eval(m: &ConcurrentGameModel, f: &Formula) -> StateSet {
    match f {
        Formula::Var(i) => m.holds(*i),
        Formula::Falsum => StateSet::empty(m.len()),
        Formula::Implies(a, b) => eval(m, a).implies(&eval(m, b)),
        Formula::Coalition(c, body) => match &**body {
            Formula::Next(a) => pre(m, *c, &eval(m, a)),
            Formula::Always(a) => always(m, *c, &eval(m, a)),
            Formula::Until(a, b) => until(m, *c, &eval(m, a), &eval(m, b)),
            _ => unreachable!("checked by is_atl"),
        },
        _ => unreachable!("checked by is_atl"),
    }
}

// greatest fixpoint of Z = inv ∩ pre(C, Z)
pub(crate) fn always(m: &ConcurrentGameModel, c: Coalition, inv: &StateSet) -> StateSet {
    let mut z = inv.clone();
    loop {
        let next = inv.intersection(&pre(m, c, &z));
        if next == z {
            return z;
        }
        z = next;
    }
}

// least fixpoint of Z = goal ∪ (stay ∩ pre(C, Z))
pub(crate) fn until(m: &ConcurrentGameModel, c: Coalition, stay: &StateSet, goal: &StateSet) -> StateSet {
    let mut z = goal.clone();
    loop {
        let next = goal.union(&stay.intersection(&pre(m, c, &z)));
        if next == z {
            return z;
        }
        z = next;
    }
}

/// ATL* restricted to the empty and the grand coalition. On the induced
/// successor graph `⟨⟨∅⟩⟩` quantifies over all paths and `⟨⟨𝔸𝔾⟩⟩` over
/// some path, so the formula is checked as CTL*.
pub fn mc_atlstar_extremal(m: &ConcurrentGameModel, f: &Formula) -> Result<StateSet, CheckError> {
    if f.has_path_quantifier() {
        return Err(CheckError::NotAtl(f.to_string()));
    }
    if !f.is_state() {
        return Err(CheckError::PathFormula(f.to_string()));
    }
    check_agents(m, f)?;
    let grand = m.agents().all();
    let g = to_ctlstar(f, grand)?;
    mc_ctlstar(&m.to_kripke(), &g)
}

fn to_ctlstar(f: &Formula, grand: Coalition) -> Result<Formula, CheckError> {
    Ok(match f {
        Formula::Var(_) | Formula::Falsum => f.clone(),
        Formula::Implies(a, b) => Formula::implies(to_ctlstar(a, grand)?, to_ctlstar(b, grand)?),
        Formula::Next(a) => Formula::next(to_ctlstar(a, grand)?),
        Formula::Always(a) => Formula::always(to_ctlstar(a, grand)?),
        Formula::Until(a, b) => Formula::until(to_ctlstar(a, grand)?, to_ctlstar(b, grand)?),
        Formula::Coalition(c, body) => {
            let body = to_ctlstar(body, grand)?;
            if c.is_empty() {
                Formula::for_all(body)
            } else if *c == grand {
                exists(body)
            } else {
                return Err(CheckError::ProperCoalition(f.to_string()));
            }
        }
        Formula::ForAllPaths(_) => unreachable!("rejected above"),
    })
}
