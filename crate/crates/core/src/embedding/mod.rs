//! Satisfiability-preserving translation of every formula into one over a
//! single variable: relativize to a fresh guard variable, then replace
//! each variable `p_i` by a formula `B_i` that pins down a gadget model.

mod gadget;
mod prime;
mod witness;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::derived::{and, top};
use crate::syntax::{belongs_to, substitute, substitute_all};
use crate::{AgentSet, Formula, LogicId};

pub use gadget::{
    b_formula, chain_state, chi, gadget_formula, gadget_model_cgs, gadget_model_kripke, Flavor, ROOT, SINK,
};
pub use prime::{prime, prime_with, theta, PrimeClauses};
pub(crate) use witness::{attach_cgs, attach_kripke};
pub use witness::{witness_model_cgs, witness_model_forward};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("guard variable p{0} already occurs in the formula")]
    GuardOccurs(u32),
    #[error("`{formula}` is not a {logic} state formula")]
    WrongLogic { logic: LogicId, formula: String },
    #[error("coalition mentions agent {agent}, but there are {count} agents")]
    AgentOutOfRange { agent: u32, count: u32 },
    #[error("gadget index must be at least 1")]
    GadgetIndex,
    #[error("gadget action pool is empty")]
    EmptyActionPool,
    #[error("guard p{var} is false at states {states:?}")]
    GuardNotGlobal { var: u32, states: Vec<usize> },
    #[error("state {state} is out of range (model has {states} states)")]
    StateOutOfRange { state: usize, states: usize },
    #[error("a {0} translation needs the other model kind")]
    FlavorMismatch(LogicId),
    #[error("model construction failed: {0}")]
    Model(String),
}

/// Everything produced by [`embed`]. Formulas other than `source` use the
/// canonical variables `p1..pn` (first-occurrence order); `renaming` maps
/// source indices to canonical ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationResult {
    pub logic: LogicId,
    pub agents: AgentSet,
    pub clauses: PrimeClauses,
    pub source: Formula,
    pub renaming: BTreeMap<u32, u32>,
    pub renamed: Formula,
    pub n: u32,
    pub guard: u32,
    pub out_var: u32,
    pub primed: Formula,
    pub theta: Formula,
    pub hat: Formula,
    pub sigma: BTreeMap<u32, Formula>,
    pub star: Formula,
}

/// Serializable summary of a [`TranslationResult`].
#[derive(Debug, Clone, Serialize)]
pub struct TranslationReport {
    pub logic: String,
    pub agents: u32,
    pub clauses: PrimeClauses,
    pub source: String,
    pub renaming: BTreeMap<String, String>,
    pub n: u32,
    pub guard: String,
    pub out_var: String,
    pub primed: String,
    pub theta: String,
    pub hat: String,
    pub sigma: BTreeMap<String, String>,
    pub star: String,
    pub sizes: Sizes,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sizes {
    pub source: usize,
    pub primed: usize,
    pub theta: usize,
    pub hat: usize,
    pub star: usize,
    /// `size(star) / size(source)^2`
    pub ratio: f64,
}

impl TranslationResult {
    pub fn report(&self) -> TranslationReport {
        let var = |i: u32| format!("p{i}");
        let source = self.source.size();
        TranslationReport {
            logic: self.logic.to_string(),
            agents: self.agents.count(),
            clauses: self.clauses,
            source: self.source.to_string(),
            renaming: self.renaming.iter().map(|(&a, &b)| (var(a), var(b))).collect(),
            n: self.n,
            guard: var(self.guard),
            out_var: var(self.out_var),
            primed: self.primed.to_string(),
            theta: self.theta.to_string(),
            hat: self.hat.to_string(),
            sigma: self.sigma.iter().map(|(&i, f)| (var(i), f.to_string())).collect(),
            star: self.star.to_string(),
            sizes: Sizes {
                source,
                primed: self.primed.size(),
                theta: self.theta.size(),
                hat: self.hat.size(),
                star: self.star.size(),
                ratio: self.star.size() as f64 / (source * source) as f64,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.report()).expect("serializable")
    }

    /// Maps canonical variables in `f` back to the source's indices.
    pub fn restore(&self, f: &Formula) -> Formula {
        let back: BTreeMap<u32, u32> = self.renaming.iter().map(|(&a, &b)| (b, a)).collect();
        f.map_vars(&mut |i| Formula::var(back.get(&i).copied().unwrap_or(i)))
    }

    pub fn flavor(&self) -> Flavor {
        if self.logic.is_alternating() {
            Flavor::Alternating
        } else {
            Flavor::Branching
        }
    }
}

/// Translates `f` with the default (corrected) clauses.
pub fn embed(f: &Formula, logic: LogicId, agents: AgentSet) -> Result<TranslationResult, EmbedError> {
    embed_with(f, logic, agents, PrimeClauses::Corrected)
}

pub fn embed_with(
    f: &Formula,
    logic: LogicId,
    agents: AgentSet,
    clauses: PrimeClauses,
) -> Result<TranslationResult, EmbedError> {
    if !f.is_state() || !belongs_to(f, logic) {
        return Err(EmbedError::WrongLogic {
            logic,
            formula: f.to_string(),
        });
    }
    let renaming: BTreeMap<u32, u32> = f.variables_in_order().into_iter().zip(1..).collect();
    let renamed = f.map_vars(&mut |i| Formula::var(renaming[&i]));
    let n = renaming.len() as u32;
    let guard = n + 1;
    let out_var = 1;
    let primed = prime_with(&renamed, logic, guard, agents, clauses)?;
    let theta = theta(logic, guard, agents);
    let hat = and(theta.clone(), primed.clone());
    let flavor = if logic.is_alternating() {
        Flavor::Alternating
    } else {
        Flavor::Branching
    };
    let sigma: BTreeMap<u32, Formula> = (1..=guard)
        .map(|i| (i, b_formula(i as usize, flavor, out_var, agents)))
        .collect();
    let star = substitute_all(&hat, &sigma).expect("gadget formulas are state formulas");
    Ok(TranslationResult {
        logic,
        agents,
        clauses,
        source: f.clone(),
        renaming,
        renamed,
        n,
        guard,
        out_var,
        primed,
        theta,
        hat,
        sigma,
        star,
    })
}

/// `φ̂[p_{n+1}/⊤]`, equivalent to the (renamed) source.
pub fn hat_top_collapse(tr: &TranslationResult) -> Formula {
    substitute(&tr.hat, tr.guard, &top()).expect("top is a state formula")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{mc_ctl, KripkeModel};
    use crate::syntax::{classify, parse};

    fn one() -> AgentSet {
        AgentSet::new(1).unwrap()
    }

    #[test]
    fn embed_single_variable() {
        let f = parse("p1", LogicId::Ctl, one()).unwrap();
        let tr = embed(&f, LogicId::Ctl, one()).unwrap();
        assert_eq!(tr.guard, 2);
        assert_eq!(tr.hat, and(theta(LogicId::Ctl, 2, one()), Formula::var(1)));
        assert_eq!(tr.sigma[&1], b_formula(1, Flavor::Branching, 1, one()));
        assert_eq!(tr.sigma[&2], b_formula(2, Flavor::Branching, 1, one()));
        assert_eq!(
            classify(&tr.star).variables.into_iter().collect::<Vec<_>>(),
            vec![1]
        );
        assert!(belongs_to(&tr.star, LogicId::Ctl));
    }

    #[test]
    fn renaming_is_first_occurrence() {
        let f = parse("p7 -> AX (p3 | p7)", LogicId::Ctl, one()).unwrap();
        let tr = embed(&f, LogicId::Ctl, one()).unwrap();
        assert_eq!(tr.renaming, BTreeMap::from([(7, 1), (3, 2)]));
        assert_eq!(tr.guard, 3);
        assert_eq!(tr.restore(&tr.renamed), f);
    }

    #[test]
    fn collapse_drops_guard() {
        let f = parse("p1", LogicId::Ctl, one()).unwrap();
        let tr = embed(&f, LogicId::Ctl, one()).unwrap();
        let c = hat_top_collapse(&tr);
        assert!(!c.contains_var(tr.guard));
        let m = KripkeModel::new(2, [(0, 1), (1, 1)], [(1, vec![0])]).unwrap();
        assert_eq!(mc_ctl(&m, &c).unwrap(), mc_ctl(&m, &f).unwrap());
    }

    #[test]
    fn variable_free_input() {
        let f = parse("true", LogicId::CtlStar, one()).unwrap();
        let tr = embed(&f, LogicId::CtlStar, one()).unwrap();
        assert_eq!(tr.n, 0);
        assert_eq!(tr.guard, 1);
        assert_eq!(tr.star.variables().into_iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn report_serializes() {
        let two = AgentSet::new(2).unwrap();
        let f = parse("<<1>> G p1", LogicId::AtlStar, two).unwrap();
        let tr = embed(&f, LogicId::AtlStar, two).unwrap();
        let json: serde_json::Value = serde_json::from_str(&tr.to_json()).unwrap();
        assert_eq!(json["guard"], "p2");
        assert_eq!(json["out_var"], "p1");
        assert!(json["star"].as_str().unwrap().contains("<<1,2>>"));
    }
}
