//! Derived connectives, expanded into core constructors.
//!
//! Boolean: `¬A := A → ⊥`, `A ∧ B := ¬(A → ¬B)`, `A ∨ B := ¬A → B`,
//! `A ↔ B := (A → B) ∧ (B → A)`, `⊤ := ⊥ → ⊥`.
//! Temporal: `◇ϑ := ⊤ U ϑ`, `□ϑ := ¬◇¬ϑ` (CTL*; primitive in ATL*),
//! `∃ϑ := ¬∀¬ϑ`. CTL: `EX φ := ¬AX¬φ`, `EF φ := E(⊤ U φ)`,
//! `AG φ := ¬EF¬φ`.

use std::str::FromStr;

use super::{Coalition, Formula, LogicId, SyntaxError};

pub fn top() -> Formula {
    Formula::implies(Formula::Falsum, Formula::Falsum)
}

pub fn not(a: Formula) -> Formula {
    Formula::implies(a, Formula::Falsum)
}

pub fn and(a: Formula, b: Formula) -> Formula {
    not(Formula::implies(a, not(b)))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::implies(not(a), b)
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
}

pub fn eventually(a: Formula) -> Formula {
    Formula::until(top(), a)
}

/// `□ϑ := ¬◇¬ϑ`, the CTL* reading of "always".
pub fn globally_derived(a: Formula) -> Formula {
    not(eventually(not(a)))
}

pub fn exists(a: Formula) -> Formula {
    not(Formula::for_all(not(a)))
}

pub fn ax(a: Formula) -> Formula {
    Formula::for_all(Formula::next(a))
}

pub fn ex(a: Formula) -> Formula {
    not(ax(not(a)))
}

pub fn au(a: Formula, b: Formula) -> Formula {
    Formula::for_all(Formula::until(a, b))
}

pub fn eu(a: Formula, b: Formula) -> Formula {
    exists(Formula::until(a, b))
}

pub fn ef(a: Formula) -> Formula {
    eu(top(), a)
}

pub fn ag(a: Formula) -> Formula {
    not(ef(not(a)))
}

pub fn af(a: Formula) -> Formula {
    au(top(), a)
}

pub fn eg(a: Formula) -> Formula {
    not(af(not(a)))
}

/// `⟨⟨C⟩⟩◯φ`
pub fn cx(c: Coalition, a: Formula) -> Formula {
    Formula::coalition(c, Formula::next(a))
}

/// `⟨⟨C⟩⟩□φ`
pub fn cg(c: Coalition, a: Formula) -> Formula {
    Formula::coalition(c, Formula::always(a))
}

/// `⟨⟨C⟩⟩(φ U ψ)`
pub fn cu(c: Coalition, a: Formula, b: Formula) -> Formula {
    Formula::coalition(c, Formula::until(a, b))
}

/// Named derived connectives accepted by [`expand_derived`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Derived {
    Not,
    And,
    Or,
    Iff,
    Top,
    Eventually,
    Globally,
    Exists,
    Ex,
    Ef,
    Ag,
    Af,
    Eg,
    Eu,
    Au,
}

impl Derived {
    pub fn name(self) -> &'static str {
        match self {
            Derived::Not => "not",
            Derived::And => "and",
            Derived::Or => "or",
            Derived::Iff => "iff",
            Derived::Top => "top",
            Derived::Eventually => "eventually",
            Derived::Globally => "globally",
            Derived::Exists => "exists",
            Derived::Ex => "ex",
            Derived::Ef => "ef",
            Derived::Ag => "ag",
            Derived::Af => "af",
            Derived::Eg => "eg",
            Derived::Eu => "eu",
            Derived::Au => "au",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Derived::Top => 0,
            Derived::And | Derived::Or | Derived::Iff | Derived::Eu | Derived::Au => 2,
            _ => 1,
        }
    }
}

impl FromStr for Derived {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "not" => Derived::Not,
            "and" => Derived::And,
            "or" => Derived::Or,
            "iff" => Derived::Iff,
            "top" => Derived::Top,
            "eventually" => Derived::Eventually,
            "globally" => Derived::Globally,
            "exists" => Derived::Exists,
            "ex" => Derived::Ex,
            "ef" => Derived::Ef,
            "ag" => Derived::Ag,
            "af" => Derived::Af,
            "eg" => Derived::Eg,
            "eu" => Derived::Eu,
            "au" => Derived::Au,
            other => return Err(SyntaxError::UnknownDerived(other.to_string())),
        })
    }
}

/// Expands a derived connective applied to `args`.
///
/// In ATL/ATL* `globally` is the primitive [`Formula::Always`]; in CTL/CTL*
/// it is `¬◇¬`.
pub fn expand_derived(name: Derived, args: Vec<Formula>, logic: LogicId) -> Result<Formula, SyntaxError> {
    if args.len() != name.arity() {
        return Err(SyntaxError::Arity {
            name: name.name(),
            expected: name.arity(),
            got: args.len(),
        });
    }
    let mut it = args.into_iter();
    let mut arg = || it.next().expect("arity checked");
    Ok(match name {
        Derived::Not => not(arg()),
        Derived::And => {
            let a = arg();
            and(a, arg())
        }
        Derived::Or => {
            let a = arg();
            or(a, arg())
        }
        Derived::Iff => {
            let a = arg();
            iff(a, arg())
        }
        Derived::Top => top(),
        Derived::Eventually => eventually(arg()),
        Derived::Globally if logic.is_alternating() => Formula::always(arg()),
        Derived::Globally => globally_derived(arg()),
        Derived::Exists => exists(arg()),
        Derived::Ex => ex(arg()),
        Derived::Ef => ef(arg()),
        Derived::Ag => ag(arg()),
        Derived::Af => af(arg()),
        Derived::Eg => eg(arg()),
        Derived::Eu => {
            let a = arg();
            eu(a, arg())
        }
        Derived::Au => {
            let a = arg();
            au(a, arg())
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_examples() {
        let p1 = Formula::var(1);
        assert_eq!(
            expand_derived(Derived::Not, vec![p1.clone()], LogicId::Ctl).unwrap(),
            Formula::implies(p1.clone(), Formula::Falsum)
        );
        assert_eq!(
            expand_derived(Derived::Top, vec![], LogicId::Ctl).unwrap(),
            Formula::implies(Formula::Falsum, Formula::Falsum)
        );
        assert_eq!(
            expand_derived(Derived::Ex, vec![p1.clone()], LogicId::Ctl).unwrap(),
            not(ax(not(p1.clone())))
        );
        assert_eq!(
            expand_derived(Derived::Globally, vec![p1.clone()], LogicId::Atl).unwrap(),
            Formula::always(p1.clone())
        );
        assert_eq!(
            expand_derived(Derived::Globally, vec![p1.clone()], LogicId::CtlStar).unwrap(),
            not(Formula::until(top(), not(p1)))
        );
    }

    #[test]
    fn arity_and_names() {
        assert!(matches!(
            expand_derived(Derived::And, vec![top()], LogicId::Ctl),
            Err(SyntaxError::Arity { .. })
        ));
        assert!("xor".parse::<Derived>().is_err());
        assert_eq!("ag".parse::<Derived>().unwrap(), Derived::Ag);
    }
}
