//! Finite serial Kripke models and CTL / CTL* model checking.

mod ctl;
mod ctlstar;
pub(crate) mod io;
pub mod lasso;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::StateSet;

pub use ctl::mc_ctl;
pub use ctlstar::{exists_path_check, exists_path_states, mc_ctlstar, MAX_TEMPORAL_SUBFORMULAS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs at least one state")]
    Empty,
    #[error("state {state} is out of range (model has {states} states)")]
    StateOutOfRange { state: usize, states: usize },
    #[error("variable indices start at 1")]
    ZeroVariable,
    #[error("expected {expected} state names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("states without successors: {0:?}")]
    NotSerial(Vec<usize>),
    #[error("variable p{var} must be true at every state; false at {states:?}")]
    GuardNotGlobal { var: u32, states: Vec<usize> },
    #[error("malformed model file: {0}")]
    Format(String),
}

/// Errors raised by the model checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("`{0}` is not a CTL formula")]
    NotCtl(String),
    #[error("`{0}` is not an ATL formula")]
    NotAtl(String),
    #[error("`{0}` contains a coalition quantifier; use a concurrent game model")]
    Coalition(String),
    #[error("`{0}` is a path formula")]
    PathFormula(String),
    #[error("state subformula `{0}` is not labeled")]
    Unlabeled(String),
    #[error("path formula has {0} temporal subformulas; at most {MAX_TEMPORAL_SUBFORMULAS} are supported")]
    TooManyTemporal(usize),
    #[error("state {state} is out of range (model has {states} states)")]
    StateOutOfRange { state: usize, states: usize },
    #[error("coalition mentions agent {agent}, model has {count} agents")]
    AgentOutOfRange { agent: u32, count: u32 },
    #[error("`{0}` uses a coalition other than the empty or the grand one")]
    ProperCoalition(String),
    #[error("{0} formulas are checked on the other kind of model")]
    ModelKind(crate::LogicId),
}

/// `(S, →, V)` with states `0..n`. Successor lists are sorted and
/// deduplicated, and the valuation omits empty sets, so equal models
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    succ: Vec<Vec<usize>>,
    valuation: BTreeMap<u32, StateSet>,
    names: Option<Vec<String>>,
}

/// Outcome of [`KripkeModel::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violations {
    pub non_serial: Vec<usize>,
}

impl KripkeModel {
    pub fn new<E, V, I>(states: usize, edges: E, valuation: V) -> Result<Self, ModelError>
    where
        E: IntoIterator<Item = (usize, usize)>,
        V: IntoIterator<Item = (u32, I)>,
        I: IntoIterator<Item = usize>,
    {
        if states == 0 {
            return Err(ModelError::Empty);
        }
        let check = |s: usize| {
            if s < states {
                Ok(s)
            } else {
                Err(ModelError::StateOutOfRange { state: s, states })
            }
        };
        let mut succ = vec![Vec::new(); states];
        for (a, b) in edges {
            succ[check(a)?].push(check(b)?);
        }
        let mut val = BTreeMap::new();
        for (var, set) in valuation {
            if var == 0 {
                return Err(ModelError::ZeroVariable);
            }
            let entry = val.entry(var).or_insert_with(|| StateSet::empty(states));
            for s in set {
                entry.insert(check(s)?);
            }
        }
        Ok(Self::from_parts(succ, val))
    }

    /// Builds a model from successor lists and a valuation over `succ.len()`
    /// states.
    pub fn from_parts(mut succ: Vec<Vec<usize>>, valuation: BTreeMap<u32, StateSet>) -> Self {
        let n = succ.len();
        for row in &mut succ {
            row.sort_unstable();
            row.dedup();
            debug_assert!(row.iter().all(|&t| t < n));
        }
        let valuation = valuation
            .into_iter()
            .filter(|(v, set)| {
                debug_assert!(*v >= 1 && set.universe() == n);
                !set.is_empty()
            })
            .collect();
        KripkeModel {
            succ,
            valuation,
            names: None,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, ModelError> {
        if names.len() != self.len() {
            return Err(ModelError::NameCount {
                expected: self.len(),
                got: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().map(move |&t| (s, t)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (s, t) in self.edges() {
            pred[t].push(s);
        }
        pred
    }

    /// `V(p_var)`, empty when the variable is unassigned.
    pub fn holds(&self, var: u32) -> StateSet {
        self.valuation
            .get(&var)
            .cloned()
            .unwrap_or_else(|| StateSet::empty(self.len()))
    }

    pub fn valuation(&self) -> &BTreeMap<u32, StateSet> {
        &self.valuation
    }

    pub fn set_valuation(&mut self, var: u32, set: StateSet) {
        assert!(var >= 1 && set.universe() == self.len());
        if set.is_empty() {
            self.valuation.remove(&var);
        } else {
            self.valuation.insert(var, set);
        }
    }

    pub fn replace_valuation(&mut self, valuation: BTreeMap<u32, StateSet>) {
        self.valuation.clear();
        for (v, s) in valuation {
            self.set_valuation(v, s);
        }
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

    /// Variables true at `s`.
    pub fn label(&self, s: usize) -> Vec<u32> {
        self.valuation
            .iter()
            .filter(|(_, set)| set.contains(s))
            .map(|(v, _)| *v)
            .collect()
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.len())
    }

    /// Seriality check.
    pub fn validate(&self) -> Result<(), Violations> {
        let non_serial: Vec<usize> = (0..self.len()).filter(|&s| self.succ[s].is_empty()).collect();
        if non_serial.is_empty() {
            Ok(())
        } else {
            Err(Violations { non_serial })
        }
    }

    /// States reachable from `from` (including it).
    pub fn reachable(&self, from: usize) -> StateSet {
        let mut seen = StateSet::empty(self.len());
        let mut stack = vec![from];
        seen.insert(from);
        while let Some(s) = stack.pop() {
            for &t in &self.succ[s] {
                if !seen.contains(t) {
                    seen.insert(t);
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// The submodel on `keep`, renumbered in increasing order. Returns the
    /// model and the original index of every new state.
    pub fn induced(&self, keep: &StateSet) -> (KripkeModel, Vec<usize>) {
        let origin: Vec<usize> = keep.iter().collect();
        let mut index = vec![usize::MAX; self.len()];
        for (new, &old) in origin.iter().enumerate() {
            index[old] = new;
        }
        let succ = origin
            .iter()
            .map(|&old| {
                self.succ[old]
                    .iter()
                    .filter(|&&t| keep.contains(t))
                    .map(|&t| index[t])
                    .collect()
            })
            .collect();
        let valuation = self
            .valuation
            .iter()
            .map(|(&v, set)| {
                (
                    v,
                    StateSet::from_states(
                        origin.len(),
                        set.iter().filter_map(|s| keep.contains(s).then_some(index[s])),
                    ),
                )
            })
            .collect();
        let mut sub = KripkeModel::from_parts(succ, valuation);
        if let Some(names) = &self.names {
            sub.names = Some(origin.iter().map(|&o| names[o].clone()).collect());
        }
        (sub, origin)
    }

    /// Disjoint union; states of `other` are shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &KripkeModel) -> KripkeModel {
        let shift = self.len();
        let n = shift + other.len();
        let mut succ = self.succ.clone();
        succ.extend(
            other
                .succ
                .iter()
                .map(|row| row.iter().map(|t| t + shift).collect()),
        );
        let mut valuation: BTreeMap<u32, StateSet> = BTreeMap::new();
        for (&v, set) in &self.valuation {
            valuation.insert(v, StateSet::from_states(n, set.iter()));
        }
        for (&v, set) in &other.valuation {
            let entry = valuation.entry(v).or_insert_with(|| StateSet::empty(n));
            for s in set.iter() {
                entry.insert(s + shift);
            }
        }
        let mut out = KripkeModel::from_parts(succ, valuation);
        if self.names.is_some() || other.names.is_some() {
            let mut names: Vec<String> = (0..self.len()).map(|s| self.state_name(s)).collect();
            names.extend((0..other.len()).map(|s| other.state_name(s)));
            out.names = Some(names);
        }
        out
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        assert!(from < self.len() && to < self.len());
        let row = &mut self.succ[from];
        if let Err(pos) = row.binary_search(&to) {
            row.insert(pos, to);
        }
    }

    pub fn remove_edge(&mut self, from: usize, to: usize) {
        self.succ[from].retain(|&t| t != to);
    }
}

/// The smallest submodel containing `s0` and closed under successors that
/// satisfy `p_guard`. Fails with [`ModelError::NotSerial`] when the result
/// has a state without a guarded successor.
pub fn restrict_submodel(
    m: &KripkeModel,
    s0: usize,
    guard: u32,
) -> Result<(KripkeModel, Vec<usize>), ModelError> {
    if s0 >= m.len() {
        return Err(ModelError::StateOutOfRange {
            state: s0,
            states: m.len(),
        });
    }
    let guarded = m.holds(guard);
    let mut keep = StateSet::empty(m.len());
    keep.insert(s0);
    let mut stack = vec![s0];
    while let Some(x) = stack.pop() {
        for &y in m.successors(x) {
            if guarded.contains(y) && !keep.contains(y) {
                keep.insert(y);
                stack.push(y);
            }
        }
    }
    let (sub, origin) = m.induced(&keep);
    if let Err(v) = sub.validate() {
        return Err(ModelError::NotSerial(
            v.non_serial.into_iter().map(|s| origin[s]).collect(),
        ));
    }
    Ok((sub, origin))
}
