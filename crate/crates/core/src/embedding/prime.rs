use serde::Serialize;

use super::EmbedError;
use crate::syntax::belongs_to;
use crate::syntax::derived::*;
use crate::{AgentSet, Coalition, Formula, LogicId};

/// Which clause set the `′` translation uses.
///
/// `Literal` follows the published tables. For CTL `∀U`, for ATL and for
/// ATL* those clauses lose satisfiability on some inputs, so `Corrected`
/// (the default) replaces the affected clauses:
///
/// * CTL `(∀(φ U ψ))′ = ∀(φ′ U (ψ′ ∨ ¬g))`;
/// * ATL with `C = 𝔸𝔾`: `◯(g ∧ φ′)`, `□(g ∧ φ′)`, `φ′ U (g ∧ ψ′)`;
///   with `C ≠ 𝔸𝔾`: `◯(g → φ′)`, `□(g → φ′)`, `φ′ U (ψ′ ∨ ¬g)`;
/// * ATL* `⟨⟨C⟩⟩(□g → α′)` for `C ≠ 𝔸𝔾` and `⟨⟨C⟩⟩(□g ∧ α′)` for `C = 𝔸𝔾`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimeClauses {
    #[default]
    Corrected,
    Literal,
}

/// The `′` translation relativizing `f` to states (CTL, ATL) or paths
/// (CTL*, ATL*) where `p_guard` holds.
pub fn prime(f: &Formula, logic: LogicId, guard: u32, agents: AgentSet) -> Result<Formula, EmbedError> {
    prime_with(f, logic, guard, agents, PrimeClauses::Corrected)
}

pub fn prime_with(
    f: &Formula,
    logic: LogicId,
    guard: u32,
    agents: AgentSet,
    clauses: PrimeClauses,
) -> Result<Formula, EmbedError> {
    if f.contains_var(guard) {
        return Err(EmbedError::GuardOccurs(guard));
    }
    if !f.is_state() || !belongs_to(f, logic) {
        return Err(EmbedError::WrongLogic {
            logic,
            formula: f.to_string(),
        });
    }
    if logic.is_alternating() {
        if let Some(c) = f
            .coalitions()
            .into_iter()
            .find(|c| c.max_agent() > agents.count())
        {
            return Err(EmbedError::AgentOutOfRange {
                agent: c.max_agent(),
                count: agents.count(),
            });
        }
    }
    let ctx = Ctx {
        g: Formula::var(guard),
        grand: agents.all(),
        corrected: clauses == PrimeClauses::Corrected,
    };
    Ok(match logic {
        LogicId::Ctl => ctx.ctl(f),
        LogicId::CtlStar => ctx.ctlstar(f),
        LogicId::Atl => ctx.atl(f),
        LogicId::AtlStar => ctx.atlstar(f),
    })
}

struct Ctx {
    g: Formula,
    grand: Coalition,
    corrected: bool,
}

impl Ctx {
    fn g(&self) -> Formula {
        self.g.clone()
    }

    fn ctl(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(_) | Formula::Falsum => f.clone(),
            Formula::Implies(a, b) => Formula::implies(self.ctl(a), self.ctl(b)),
            Formula::ForAllPaths(body) => match &**body {
                Formula::Next(a) => ax(Formula::implies(self.g(), self.ctl(a))),
                Formula::Until(a, b) => {
                    let goal = if self.corrected {
                        or(self.ctl(b), not(self.g()))
                    } else {
                        and(self.g(), self.ctl(b))
                    };
                    au(self.ctl(a), goal)
                }
                // ∀¬(φ U ψ), the body of ∃(φ U ψ)
                Formula::Implies(u, _) => match &**u {
                    Formula::Until(a, b) => {
                        Formula::for_all(not(Formula::until(self.ctl(a), and(self.g(), self.ctl(b)))))
                    }
                    _ => unreachable!("CTL shape checked"),
                },
                _ => unreachable!("CTL shape checked"),
            },
            _ => unreachable!("CTL shape checked"),
        }
    }

    fn ctlstar(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(_) | Formula::Falsum => f.clone(),
            Formula::Implies(a, b) => Formula::implies(self.ctlstar(a), self.ctlstar(b)),
            Formula::ForAllPaths(a) => {
                Formula::for_all(Formula::implies(globally_derived(self.g()), self.ctlstar(a)))
            }
            Formula::Next(a) => Formula::next(self.ctlstar(a)),
            Formula::Until(a, b) => Formula::until(self.ctlstar(a), self.ctlstar(b)),
            Formula::Always(a) => Formula::always(self.ctlstar(a)),
            Formula::Coalition(..) => unreachable!("logic checked"),
        }
    }

    fn atl(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(_) | Formula::Falsum => f.clone(),
            Formula::Implies(a, b) => Formula::implies(self.atl(a), self.atl(b)),
            Formula::Coalition(c, body) => {
                let existential = self.corrected && *c == self.grand;
                let guard_step = |x: Formula| {
                    if existential {
                        and(self.g(), x)
                    } else {
                        Formula::implies(self.g(), x)
                    }
                };
                match &**body {
                    Formula::Next(a) => cx(*c, guard_step(self.atl(a))),
                    Formula::Always(a) => cg(*c, guard_step(self.atl(a))),
                    Formula::Until(a, b) => {
                        let goal = if self.corrected && *c != self.grand {
                            or(self.atl(b), not(self.g()))
                        } else {
                            and(self.g(), self.atl(b))
                        };
                        cu(*c, self.atl(a), goal)
                    }
                    _ => unreachable!("ATL shape checked"),
                }
            }
            _ => unreachable!("ATL shape checked"),
        }
    }

    fn atlstar(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(_) | Formula::Falsum => f.clone(),
            Formula::Implies(a, b) => Formula::implies(self.atlstar(a), self.atlstar(b)),
            Formula::Coalition(c, a) => {
                let on_guard = Formula::always(self.g());
                let body = if self.corrected && *c != self.grand {
                    Formula::implies(on_guard, self.atlstar(a))
                } else {
                    and(on_guard, self.atlstar(a))
                };
                Formula::coalition(*c, body)
            }
            Formula::Next(a) => Formula::next(self.atlstar(a)),
            Formula::Until(a, b) => Formula::until(self.atlstar(a), self.atlstar(b)),
            Formula::Always(a) => Formula::always(self.atlstar(a)),
            Formula::ForAllPaths(_) => unreachable!("logic checked"),
        }
    }
}

/// `Θ`: the guard holds now and, everywhere, has a guarded successor
/// exactly when it holds.
pub fn theta(logic: LogicId, guard: u32, agents: AgentSet) -> Formula {
    let g = Formula::var(guard);
    if logic.is_alternating() {
        and(
            g.clone(),
            cg(Coalition::EMPTY, iff(cx(agents.all(), g.clone()), g)),
        )
    } else {
        and(g.clone(), ag(iff(ex(g.clone()), g)))
    }
}
