//! Concurrent game models and ATL model checking.

mod atl;
mod io;
mod oracle;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::kripke::KripkeModel;
use crate::{AgentSet, Coalition, StateSet};

pub use atl::{mc_atl, mc_atlstar_extremal};
pub use oracle::{strategy_oracle, OracleError, DEFAULT_STRATEGY_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CgsError {
    #[error("a model needs at least one state")]
    Empty,
    #[error("state {state} is out of range (model has {states} states)")]
    StateOutOfRange { state: usize, states: usize },
    #[error("agent {agent} is out of range (model has {count} agents)")]
    AgentOutOfRange { agent: u32, count: u32 },
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("agent {agent} has no available action at state {state}")]
    NoAvailable { agent: u32, state: usize },
    #[error("action `{action}` is not available to agent {agent} at state {state}")]
    Unavailable {
        agent: u32,
        state: usize,
        action: String,
    },
    #[error("transition for profile {profile} at state {state} is missing")]
    MissingTransition { state: usize, profile: String },
    #[error("variable indices start at 1")]
    ZeroVariable,
    #[error("expected {expected} state names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("malformed model file: {0}")]
    Format(String),
}

/// `(𝔸𝔾, S, Act, act, δ, V)`. Profiles at a state are numbered in mixed
/// radix over each agent's position in its available list, agent 1 most
/// significant, and `delta[s]` is indexed by that number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcurrentGameModel {
    agents: AgentSet,
    actions: Vec<String>,
    // [state][agent - 1] -> sorted action ids
    available: Vec<Vec<Vec<usize>>>,
    delta: Vec<Vec<usize>>,
    valuation: BTreeMap<u32, StateSet>,
    names: Option<Vec<String>>,
}

/// A choice of one action per agent of a coalition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CAction {
    pub coalition: Coalition,
    pub choice: BTreeMap<u32, usize>,
}

impl CAction {
    pub fn new(choice: BTreeMap<u32, usize>) -> Self {
        let coalition = Coalition::from_agents(choice.keys().copied()).expect("agents >= 1");
        CAction { coalition, choice }
    }

    pub fn empty() -> Self {
        CAction {
            coalition: Coalition::EMPTY,
            choice: BTreeMap::new(),
        }
    }
}

impl ConcurrentGameModel {
    /// Builds a model; `delta(s, profile)` receives action ids in agent
    /// order and must return a state.
    pub fn new<F>(
        agents: AgentSet,
        actions: Vec<String>,
        available: Vec<Vec<Vec<usize>>>,
        mut delta: F,
        valuation: BTreeMap<u32, StateSet>,
    ) -> Result<Self, CgsError>
    where
        F: FnMut(usize, &[usize]) -> usize,
    {
        let n = available.len();
        if n == 0 {
            return Err(CgsError::Empty);
        }
        let mut available = available;
        for (s, per_agent) in available.iter_mut().enumerate() {
            if per_agent.len() != agents.count() as usize {
                return Err(CgsError::Format(format!(
                    "state {s} lists {} agents, expected {}",
                    per_agent.len(),
                    agents.count()
                )));
            }
            for (a, acts) in per_agent.iter_mut().enumerate() {
                acts.sort_unstable();
                acts.dedup();
                if acts.is_empty() {
                    return Err(CgsError::NoAvailable {
                        agent: a as u32 + 1,
                        state: s,
                    });
                }
                if let Some(&bad) = acts.iter().find(|&&x| x >= actions.len()) {
                    return Err(CgsError::UnknownAction(format!("#{bad}")));
                }
            }
        }
        let mut model = ConcurrentGameModel {
            agents,
            actions,
            available,
            delta: Vec::new(),
            valuation: BTreeMap::new(),
            names: None,
        };
        let mut table = Vec::with_capacity(n);
        for s in 0..n {
            let mut row = Vec::with_capacity(model.profile_count(s));
            for p in 0..model.profile_count(s) {
                let t = delta(s, &model.profile_actions(s, p));
                if t >= n {
                    return Err(CgsError::StateOutOfRange { state: t, states: n });
                }
                row.push(t);
            }
            table.push(row);
        }
        model.delta = table;
        for (v, set) in valuation {
            if v == 0 {
                return Err(CgsError::ZeroVariable);
            }
            if set.universe() != n {
                return Err(CgsError::Format(format!("valuation of p{v} has wrong universe")));
            }
            if !set.is_empty() {
                model.valuation.insert(v, set);
            }
        }
        Ok(model)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, CgsError> {
        if names.len() != self.len() {
            return Err(CgsError::NameCount {
                expected: self.len(),
                got: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn agents(&self) -> AgentSet {
        self.agents
    }

    pub fn len(&self) -> usize {
        self.available.len()
    }

    pub fn is_empty(&self) -> bool {
        self.available.is_empty()
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn action_id(&self, name: &str) -> Option<usize> {
        self.actions.iter().position(|a| a == name)
    }

    pub fn available(&self, agent: u32, s: usize) -> &[usize] {
        &self.available[s][agent as usize - 1]
    }

    pub fn holds(&self, var: u32) -> StateSet {
        self.valuation
            .get(&var)
            .cloned()
            .unwrap_or_else(|| StateSet::empty(self.len()))
    }

    pub fn valuation(&self) -> &BTreeMap<u32, StateSet> {
        &self.valuation
    }

    pub fn replace_valuation(&mut self, valuation: BTreeMap<u32, StateSet>) {
        self.valuation = valuation.into_iter().filter(|(_, s)| !s.is_empty()).collect();
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn state_name(&self, s: usize) -> String {
        match &self.names {
            Some(names) => names[s].clone(),
            None => s.to_string(),
        }
    }

    pub fn label(&self, s: usize) -> Vec<u32> {
        self.valuation
            .iter()
            .filter(|(_, set)| set.contains(s))
            .map(|(v, _)| *v)
            .collect()
    }

    pub fn profile_count(&self, s: usize) -> usize {
        self.available[s].iter().map(Vec::len).product()
    }

    /// Positions in each agent's available list for profile `index`.
    pub fn profile_positions(&self, s: usize, mut index: usize) -> Vec<usize> {
        let mut pos = vec![0; self.available[s].len()];
        for (a, acts) in self.available[s].iter().enumerate().rev() {
            pos[a] = index % acts.len();
            index /= acts.len();
        }
        pos
    }

    pub fn profile_actions(&self, s: usize, index: usize) -> Vec<usize> {
        self.profile_positions(s, index)
            .into_iter()
            .enumerate()
            .map(|(a, p)| self.available[s][a][p])
            .collect()
    }

    /// Profile number of a full action profile, if every action is available.
    pub fn profile_index(&self, s: usize, actions: &[usize]) -> Option<usize> {
        let mut index = 0;
        for (a, acts) in self.available[s].iter().enumerate() {
            let pos = acts.binary_search(actions.get(a)?).ok()?;
            index = index * acts.len() + pos;
        }
        Some(index)
    }

    pub fn delta(&self, s: usize, profile: usize) -> usize {
        self.delta[s][profile]
    }

    pub fn delta_row(&self, s: usize) -> &[usize] {
        &self.delta[s]
    }

    /// Successors under some profile.
    pub fn successors(&self, s: usize) -> Vec<usize> {
        let mut out = self.delta[s].clone();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The induced successor graph as a Kripke model.
    pub fn to_kripke(&self) -> KripkeModel {
        let succ = (0..self.len()).map(|s| self.successors(s)).collect();
        let km = KripkeModel::from_parts(succ, self.valuation.clone());
        match &self.names {
            Some(names) => km.with_names(names.clone()).expect("same length"),
            None => km,
        }
    }

    fn check_caction(&self, s: usize, ca: &CAction) -> Result<(), CgsError> {
        if s >= self.len() {
            return Err(CgsError::StateOutOfRange {
                state: s,
                states: self.len(),
            });
        }
        for (&agent, &act) in &ca.choice {
            if !self.agents.contains(agent) {
                return Err(CgsError::AgentOutOfRange {
                    agent,
                    count: self.agents.count(),
                });
            }
            if self.available(agent, s).binary_search(&act).is_err() {
                return Err(CgsError::Unavailable {
                    agent,
                    state: s,
                    action: self
                        .actions
                        .get(act)
                        .cloned()
                        .unwrap_or_else(|| format!("#{act}")),
                });
            }
        }
        Ok(())
    }

    /// All C-actions available at `s`, in lexicographic order.
    pub fn cactions(&self, s: usize, coalition: Coalition) -> Vec<CAction> {
        let mut out = vec![CAction::empty()];
        for agent in coalition.iter() {
            let mut next = Vec::new();
            for ca in &out {
                for &act in self.available(agent, s) {
                    let mut choice = ca.choice.clone();
                    choice.insert(agent, act);
                    next.push(CAction {
                        coalition: Coalition::from_agents(choice.keys().copied()).expect("agents >= 1"),
                        choice,
                    });
                }
            }
            out = next;
        }
        out
    }
}

/// `out(s, α_C)`: the images of every completion of `ca`.
pub fn outcomes(m: &ConcurrentGameModel, s: usize, ca: &CAction) -> Result<StateSet, CgsError> {
    m.check_caction(s, ca)?;
    let mut out = StateSet::empty(m.len());
    for p in 0..m.profile_count(s) {
        let acts = m.profile_actions(s, p);
        if ca.choice.iter().all(|(&a, &x)| acts[a as usize - 1] == x) {
            out.insert(m.delta(s, p));
        }
    }
    Ok(out)
}

/// States where `coalition` has a one-step action forcing `target`.
pub fn pre(m: &ConcurrentGameModel, coalition: Coalition, target: &StateSet) -> StateSet {
    let members: Vec<usize> = coalition.iter().map(|a| a as usize - 1).collect();
    let mut out = StateSet::empty(m.len());
    let mut ok = Vec::new();
    for s in 0..m.len() {
        let avail = &m.available[s];
        let keys: usize = members.iter().map(|&a| avail[a].len()).product();
        ok.clear();
        ok.resize(keys, true);
        for p in 0..m.profile_count(s) {
            if target.contains(m.delta[s][p]) {
                continue;
            }
            let pos = m.profile_positions(s, p);
            let key = members.iter().fold(0, |k, &a| k * avail[a].len() + pos[a]);
            ok[key] = false;
        }
        if ok.iter().any(|&b| b) {
            out.insert(s);
        }
    }
    out
}

/// One agent whose actions pick a successor of the Kripke model.
pub fn cgs_from_kripke(m: &KripkeModel) -> ConcurrentGameModel {
    let agents = AgentSet::new(1).expect("one agent");
    let actions: Vec<String> = (0..m.len()).map(|t| format!("to{t}")).collect();
    let available = (0..m.len()).map(|s| vec![m.successors(s).to_vec()]).collect();
    let model = ConcurrentGameModel::new(
        agents,
        actions,
        available,
        |_, profile| profile[0],
        m.valuation().clone(),
    )
    .expect("serial Kripke model");
    match m.names() {
        Some(names) => model.with_names(names.to_vec()).expect("same length"),
        None => model,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // two states, two agents, actions {0,1}; next state is the XOR of the bits
    pub(crate) fn xor_model() -> ConcurrentGameModel {
        let agents = AgentSet::new(2).unwrap();
        ConcurrentGameModel::new(
            agents,
            vec!["0".into(), "1".into()],
            vec![vec![vec![0, 1], vec![0, 1]]; 2],
            |_, p| p[0] ^ p[1],
            BTreeMap::from([(1, StateSet::from_states(2, [1]))]),
        )
        .unwrap()
    }

    #[test]
    fn outcome_examples() {
        let m = xor_model();
        let full = CAction::new(BTreeMap::from([(1, 1), (2, 0)]));
        assert_eq!(outcomes(&m, 0, &full).unwrap().to_vec(), vec![1]);
        assert_eq!(outcomes(&m, 0, &CAction::empty()).unwrap().to_vec(), vec![0, 1]);
        let one = CAction::new(BTreeMap::from([(1, 0)]));
        assert_eq!(outcomes(&m, 0, &one).unwrap().to_vec(), vec![0, 1]);
        let bad = CAction::new(BTreeMap::from([(1, 5)]));
        assert!(outcomes(&m, 0, &bad).is_err());
    }

    #[test]
    fn pre_examples() {
        let m = xor_model();
        let all = StateSet::full(2);
        let agents = m.agents();
        assert_eq!(pre(&m, agents.all(), &all), all);
        assert!(pre(&m, Coalition::EMPTY, &StateSet::empty(2)).is_empty());
        let one = StateSet::from_states(2, [1]);
        assert_eq!(pre(&m, agents.all(), &one), all);
        assert!(pre(&m, Coalition::from_agents([1]).unwrap(), &one).is_empty());
    }

    #[test]
    fn from_kripke() {
        let km = KripkeModel::new(3, [(0, 0), (0, 1), (0, 2), (1, 1), (2, 2)], [(1, vec![1])]).unwrap();
        let g = cgs_from_kripke(&km);
        assert_eq!(g.available(1, 0).len(), 3);
        assert_eq!(g.available(1, 1).len(), 1);
        assert_eq!(g.to_kripke(), km);
    }

    #[test]
    fn profile_numbering_round_trips() {
        let m = xor_model();
        for p in 0..m.profile_count(0) {
            assert_eq!(m.profile_index(0, &m.profile_actions(0, p)), Some(p));
        }
    }
}
