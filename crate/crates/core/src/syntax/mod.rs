//! Formulas of CTL, CTL*, ATL and ATL*.
//!
//! The AST keeps only the eight core constructors (variables, falsum,
//! implication, the path quantifier, coalition quantifiers and the three
//! temporal connectives). Every other connective is expanded when it is
//! built, see [`derived`].

pub mod derived;
mod parse;
mod print;
mod transform;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use derived::{expand_derived, Derived};
pub use parse::parse;
pub use transform::{ctl_to_atl, fold_variable_free};

/// Largest supported number of agents; coalitions are stored as bitmasks.
pub const MAX_AGENTS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at offset {pos}: expected {expected}, found {found}")]
    Parse {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("agent {agent} is out of range (agents are 1..={count})")]
    AgentOutOfRange { agent: u32, count: u32 },
    #[error("agent set must contain between 1 and {MAX_AGENTS} agents, got {0}")]
    BadAgentCount(u32),
    #[error("formula `{formula}` is not in the {logic} fragment: {reason}")]
    Fragment {
        logic: LogicId,
        formula: String,
        reason: String,
    },
    #[error("formula contains variable p{0}")]
    NotVariableFree(u32),
    #[error("unknown derived connective `{0}`")]
    UnknownDerived(String),
    #[error("connective {name} takes {expected} argument(s), got {got}")]
    Arity {
        name: &'static str,
        expected: usize,
        got: usize,
    },
}

/// The four logics, ordered by expressiveness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogicId {
    Ctl,
    CtlStar,
    Atl,
    AtlStar,
}

impl LogicId {
    pub fn is_alternating(self) -> bool {
        matches!(self, LogicId::Atl | LogicId::AtlStar)
    }

    /// CTL and ATL pair every quantifier with a temporal connective.
    pub fn is_paired(self) -> bool {
        matches!(self, LogicId::Ctl | LogicId::Atl)
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogicId::Ctl => "CTL",
            LogicId::CtlStar => "CTL*",
            LogicId::Atl => "ATL",
            LogicId::AtlStar => "ATL*",
        })
    }
}

impl FromStr for LogicId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ctl" => Ok(LogicId::Ctl),
            "ctlstar" | "ctl*" => Ok(LogicId::CtlStar),
            "atl" => Ok(LogicId::Atl),
            "atlstar" | "atl*" => Ok(LogicId::AtlStar),
            other => Err(format!("unknown logic `{other}`")),
        }
    }
}

/// The fixed set of agents `1..=count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentSet {
    count: u32,
}

impl AgentSet {
    pub fn new(count: u32) -> Result<Self, SyntaxError> {
        if count == 0 || count > MAX_AGENTS {
            return Err(SyntaxError::BadAgentCount(count));
        }
        Ok(AgentSet { count })
    }

    pub fn count(self) -> u32 {
        self.count
    }

    /// The grand coalition.
    pub fn all(self) -> Coalition {
        if self.count == 64 {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << self.count) - 1)
        }
    }

    pub fn contains(self, agent: u32) -> bool {
        (1..=self.count).contains(&agent)
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        1..=self.count
    }
}

impl Default for AgentSet {
    fn default() -> Self {
        AgentSet { count: 1 }
    }
}

/// A set of agents, bit `i - 1` standing for agent `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_agents<I: IntoIterator<Item = u32>>(agents: I) -> Result<Self, SyntaxError> {
        let mut bits = 0u64;
        for a in agents {
            if a == 0 || a > MAX_AGENTS {
                return Err(SyntaxError::AgentOutOfRange {
                    agent: a,
                    count: MAX_AGENTS,
                });
            }
            bits |= 1 << (a - 1);
        }
        Ok(Coalition(bits))
    }

    pub fn contains(self, agent: u32) -> bool {
        (1..=MAX_AGENTS).contains(&agent) && self.0 & (1 << (agent - 1)) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        (1..=MAX_AGENTS).filter(move |&a| self.contains(a))
    }

    pub fn max_agent(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    pub fn bits(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Whether a formula is evaluated at states or along paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    State,
    Path,
}

/// Core formula AST shared by all four logics.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// `p_i`, with `i >= 1`.
    Var(u32),
    Falsum,
    Implies(Box<Formula>, Box<Formula>),
    /// `∀ϑ`
    ForAllPaths(Box<Formula>),
    /// `⟨⟨C⟩⟩ϑ`
    Coalition(Coalition, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    /// `□ϑ`; primitive in ATL/ATL*, derived in CTL/CTL*.
    Always(Box<Formula>),
}

/// Summary produced by [`classify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub variables: BTreeSet<u32>,
    pub is_ctl: bool,
    pub is_atl: bool,
    pub is_variable_free: bool,
    pub size: usize,
}

impl Formula {
    pub fn var(i: u32) -> Formula {
        assert!(i >= 1, "variables are indexed from 1");
        Formula::Var(i)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn for_all(body: Formula) -> Formula {
        Formula::ForAllPaths(Box::new(body))
    }

    pub fn coalition(c: Coalition, body: Formula) -> Formula {
        Formula::Coalition(c, Box::new(body))
    }

    pub fn next(body: Formula) -> Formula {
        Formula::Next(Box::new(body))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn always(body: Formula) -> Formula {
        Formula::Always(Box::new(body))
    }

    pub fn sort(&self) -> Sort {
        match self {
            Formula::Var(_) | Formula::Falsum => Sort::State,
            Formula::ForAllPaths(_) | Formula::Coalition(..) => Sort::State,
            Formula::Implies(a, b) => {
                if a.sort() == Sort::State && b.sort() == Sort::State {
                    Sort::State
                } else {
                    Sort::Path
                }
            }
            Formula::Next(_) | Formula::Until(..) | Formula::Always(_) => Sort::Path,
        }
    }

    pub fn is_state(&self) -> bool {
        self.sort() == Sort::State
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Falsum => 1,
            Formula::ForAllPaths(a) | Formula::Coalition(_, a) | Formula::Next(a) | Formula::Always(a) => {
                1 + a.size()
            }
            Formula::Implies(a, b) | Formula::Until(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Falsum => 0,
            Formula::ForAllPaths(a) | Formula::Coalition(_, a) | Formula::Next(a) | Formula::Always(a) => {
                1 + a.depth()
            }
            Formula::Implies(a, b) | Formula::Until(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Var(i) = f {
                out.insert(*i);
            }
        });
        out
    }

    pub fn max_var(&self) -> u32 {
        self.variables().last().copied().unwrap_or(0)
    }

    pub fn contains_var(&self, var: u32) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= *f == Formula::Var(var));
        found
    }

    /// Variables in order of first occurrence (pre-order, left to right).
    pub fn variables_in_order(&self) -> Vec<u32> {
        let mut seen = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Var(i) = f {
                if !seen.contains(i) {
                    seen.push(*i);
                }
            }
        });
        seen
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Formula)>(&self, f: &mut F) {
        f(self);
        match self {
            Formula::Var(_) | Formula::Falsum => {}
            Formula::ForAllPaths(a) | Formula::Coalition(_, a) | Formula::Next(a) | Formula::Always(a) => {
                a.visit(f)
            }
            Formula::Implies(a, b) | Formula::Until(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Rebuilds the formula bottom-up, replacing variables by `leaf(i)`.
    pub fn map_vars<F: FnMut(u32) -> Formula>(&self, leaf: &mut F) -> Formula {
        match self {
            Formula::Var(i) => leaf(*i),
            Formula::Falsum => Formula::Falsum,
            Formula::Implies(a, b) => Formula::implies(a.map_vars(leaf), b.map_vars(leaf)),
            Formula::ForAllPaths(a) => Formula::for_all(a.map_vars(leaf)),
            Formula::Coalition(c, a) => Formula::coalition(*c, a.map_vars(leaf)),
            Formula::Next(a) => Formula::next(a.map_vars(leaf)),
            Formula::Until(a, b) => Formula::until(a.map_vars(leaf), b.map_vars(leaf)),
            Formula::Always(a) => Formula::always(a.map_vars(leaf)),
        }
    }

    /// Structural recognizer for `¬a`, i.e. `a -> false`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Falsum => Some(a),
            _ => None,
        }
    }

    pub fn coalitions(&self) -> Vec<Coalition> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Coalition(c, _) = f {
                out.push(*c);
            }
        });
        out
    }

    pub fn has_coalition(&self) -> bool {
        !self.coalitions().is_empty()
    }

    pub fn has_path_quantifier(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::ForAllPaths(_)));
        found
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(self))
    }
}

pub use print::print;

/// Whether `f` is a CTL formula: every `∀` wraps `◯φ`, `φ U ψ` or
/// `¬(φ U ψ)` over CTL state formulas (the last shape is how `∃U` is
/// represented in the core AST).
pub fn is_ctl(f: &Formula) -> bool {
    match f {
        Formula::Var(_) | Formula::Falsum => true,
        Formula::Implies(a, b) => is_ctl(a) && is_ctl(b),
        Formula::ForAllPaths(body) => match &**body {
            Formula::Next(a) => is_ctl(a),
            Formula::Until(a, b) => is_ctl(a) && is_ctl(b),
            Formula::Implies(u, bot) if **bot == Formula::Falsum => {
                matches!(&**u, Formula::Until(a, b) if is_ctl(a) && is_ctl(b))
            }
            _ => false,
        },
        _ => false,
    }
}

/// Whether `f` is an ATL formula: every coalition quantifier wraps `◯φ`,
/// `□φ` or `φ U ψ` over ATL state formulas.
pub fn is_atl(f: &Formula) -> bool {
    match f {
        Formula::Var(_) | Formula::Falsum => true,
        Formula::Implies(a, b) => is_atl(a) && is_atl(b),
        Formula::Coalition(_, body) => match &**body {
            Formula::Next(a) | Formula::Always(a) => is_atl(a),
            Formula::Until(a, b) => is_atl(a) && is_atl(b),
            _ => false,
        },
        _ => false,
    }
}

/// Whether `f` is a well-sorted state formula of `logic`.
pub fn belongs_to(f: &Formula, logic: LogicId) -> bool {
    if !f.is_state() {
        return false;
    }
    match logic {
        LogicId::Ctl => is_ctl(f),
        LogicId::Atl => is_atl(f),
        LogicId::CtlStar => !f.has_coalition(),
        LogicId::AtlStar => !f.has_path_quantifier(),
    }
}

pub fn classify(f: &Formula) -> Classification {
    let variables = f.variables();
    Classification {
        is_variable_free: variables.is_empty(),
        variables,
        is_ctl: is_ctl(f),
        is_atl: is_atl(f),
        size: f.size(),
    }
}

/// Uniformly substitutes `replacement` for `p_var`.
pub fn substitute(f: &Formula, var: u32, replacement: &Formula) -> Result<Formula, SyntaxError> {
    if !replacement.is_state() {
        return Err(SyntaxError::Sort(format!(
            "cannot substitute path formula `{replacement}` for p{var}"
        )));
    }
    Ok(f.map_vars(&mut |i| {
        if i == var {
            replacement.clone()
        } else {
            Formula::Var(i)
        }
    }))
}

/// Simultaneous substitution; variables without an entry are kept.
pub fn substitute_all(f: &Formula, table: &BTreeMap<u32, Formula>) -> Result<Formula, SyntaxError> {
    if let Some((var, bad)) = table.iter().find(|(_, g)| !g.is_state()) {
        return Err(SyntaxError::Sort(format!(
            "cannot substitute path formula `{bad}` for p{var}"
        )));
    }
    Ok(f.map_vars(&mut |i| table.get(&i).cloned().unwrap_or(Formula::Var(i))))
}
