use super::derived::not;
use super::{is_ctl, AgentSet, Coalition, Formula, LogicId, SyntaxError};

/// Decides a variable-free formula in one pass.
///
/// Models are serial and outcome sets non-empty, so a quantifier or
/// temporal connective over a constant operand evaluates to that operand;
/// `ϑ₁ U ϑ₂` is decided by `ϑ₂` alone.
pub fn fold_variable_free(f: &Formula) -> Result<bool, SyntaxError> {
    Ok(match f {
        Formula::Var(i) => return Err(SyntaxError::NotVariableFree(*i)),
        Formula::Falsum => false,
        Formula::Implies(a, b) => !fold_variable_free(a)? || fold_variable_free(b)?,
        Formula::ForAllPaths(a) | Formula::Coalition(_, a) | Formula::Next(a) | Formula::Always(a) => {
            fold_variable_free(a)?
        }
        Formula::Until(a, b) => {
            // the left operand is still checked for variables
            fold_variable_free(a)?;
            fold_variable_free(b)?
        }
    })
}

/// Replaces `∀` by `⟨⟨∅⟩⟩` and `∃` by `⟨⟨𝔸𝔾⟩⟩` in a CTL formula.
pub fn ctl_to_atl(f: &Formula, agents: AgentSet) -> Result<Formula, SyntaxError> {
    if !is_ctl(f) {
        return Err(SyntaxError::Fragment {
            logic: LogicId::Ctl,
            formula: f.to_string(),
            reason: "ctl_to_atl needs a CTL formula".into(),
        });
    }
    Ok(embed(f, agents.all()))
}

fn embed(f: &Formula, grand: Coalition) -> Formula {
    // ∃(φ U ψ) is stored as ¬∀¬(φ U ψ)
    if let Some(Formula::ForAllPaths(body)) = f.as_negation() {
        if let Some(Formula::Until(a, b)) = body.as_negation() {
            return Formula::coalition(grand, Formula::until(embed(a, grand), embed(b, grand)));
        }
    }
    match f {
        Formula::Var(_) | Formula::Falsum => f.clone(),
        Formula::Implies(a, b) => Formula::implies(embed(a, grand), embed(b, grand)),
        Formula::ForAllPaths(body) => match &**body {
            Formula::Next(a) => Formula::coalition(Coalition::EMPTY, Formula::next(embed(a, grand))),
            Formula::Until(a, b) => {
                Formula::coalition(Coalition::EMPTY, Formula::until(embed(a, grand), embed(b, grand)))
            }
            // ∀¬(φ U ψ) = ¬∃(φ U ψ)
            Formula::Implies(u, _) => match &**u {
                Formula::Until(a, b) => not(Formula::coalition(
                    grand,
                    Formula::until(embed(a, grand), embed(b, grand)),
                )),
                _ => unreachable!("checked by is_ctl"),
            },
            _ => unreachable!("checked by is_ctl"),
        },
        _ => unreachable!("checked by is_ctl"),
    }
}
