//! Bounded brute-force satisfiability search.
//!
//! Candidates are numbered in a fixed canonical order and decoded from
//! their number, so the search can be split across threads and still
//! report the first witness in that order. A model counts as a candidate
//! only when every state is reachable from state 0, and only state 0 is
//! checked; any satisfying pointed model has such a generated submodel of
//! no greater size, so this pruning never changes the verdict.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cgs::{mc_atl, ConcurrentGameModel};
use crate::kripke::{mc_ctl, mc_ctlstar, CheckError, KripkeModel};
use crate::syntax::belongs_to;
use crate::{AgentSet, Formula, LogicId, StateSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SatStatus {
    Sat,
    /// No model within the bound; says nothing about unsatisfiability.
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBound {
    pub max_states: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_actions: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<M> {
    pub model: M,
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatVerdict<M> {
    pub status: SatStatus,
    pub witness: Option<Witness<M>>,
    /// Candidates visited in canonical order, up to and including the
    /// witness (all of them when the status is `Unknown`).
    pub models_examined: u64,
    pub bound: SearchBound,
    pub elapsed: Duration,
}

impl<M> SatVerdict<M> {
    pub fn is_sat(&self) -> bool {
        self.status == SatStatus::Sat
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("search budget of {limit} candidates exhausted before the bound was covered")]
    Budget { limit: u64 },
    #[error("`{formula}` is not a {logic} formula")]
    WrongLogic { logic: LogicId, formula: String },
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchOptions {
    /// Give up with [`SatError::Budget`] after this many candidates.
    pub max_models: Option<u64>,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T, SatError> {
    if jobs == 0 {
        return Ok(work());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SatError::Pool(e.to_string()))?;
    Ok(pool.install(work))
}

// ---------------------------------------------------------------- Kripke

/// Every serial model on exactly `states` states over `vars`, adjacency
/// rows in lexicographic order with valuations innermost.
pub fn enumerate_kripke(states: usize, vars: &[u32]) -> impl Iterator<Item = KripkeModel> + '_ {
    let space = KripkeSpace::new(states, vars);
    (0..space.adjacency_count()).flat_map(move |adj| {
        let succ = space.rows(adj);
        let space = space.clone();
        (0..space.valuation_count()).map(move |v| space.model(succ.clone(), v))
    })
}

#[derive(Clone)]
struct KripkeSpace {
    states: usize,
    vars: Vec<u32>,
}

impl KripkeSpace {
    fn new(states: usize, vars: &[u32]) -> Self {
        assert!((1..=16).contains(&states), "state bound out of range");
        KripkeSpace {
            states,
            vars: vars.to_vec(),
        }
    }

    fn row_choices(&self) -> u64 {
        (1u64 << self.states) - 1
    }

    fn adjacency_count(&self) -> u64 {
        self.row_choices().pow(self.states as u32)
    }

    fn valuation_count(&self) -> u64 {
        1u64 << (self.states * self.vars.len())
    }

    // row 0 is the most significant digit; digit d is the subset mask d + 1
    fn rows(&self, mut adj: u64) -> Vec<Vec<usize>> {
        let mut masks = vec![0u64; self.states];
        for s in (0..self.states).rev() {
            masks[s] = adj % self.row_choices() + 1;
            adj /= self.row_choices();
        }
        masks
            .iter()
            .map(|&mask| (0..self.states).filter(|t| mask >> t & 1 == 1).collect())
            .collect()
    }

    fn model(&self, succ: Vec<Vec<usize>>, val: u64) -> KripkeModel {
        let n = self.states;
        let valuation: BTreeMap<u32, StateSet> = self
            .vars
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let bits = val >> (j * n);
                (v, StateSet::from_states(n, (0..n).filter(|s| bits >> s & 1 == 1)))
            })
            .collect();
        KripkeModel::from_parts(succ, valuation)
    }
}

fn reachable_from_zero(succ: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; succ.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(s) = stack.pop() {
        for &t in &succ[s] {
            if !seen[t] {
                seen[t] = true;
                count += 1;
                stack.push(t);
            }
        }
    }
    count == succ.len()
}

/// Searches models of up to `max_states` states over `vars` for one where
/// `holds` accepts state 0.
pub fn bounded_search_kripke<F>(
    vars: &[u32],
    max_states: usize,
    opts: SearchOptions,
    holds: F,
) -> Result<SatVerdict<KripkeModel>, SatError>
where
    F: Fn(&KripkeModel) -> Result<bool, CheckError> + Sync,
{
    let start = Instant::now();
    let bound = SearchBound {
        max_states,
        max_actions: None,
    };
    let mut examined: u64 = 0;
    for n in 1..=max_states {
        let space = KripkeSpace::new(n, vars);
        let per_adj = space.valuation_count();
        let mut adj_limit = space.adjacency_count();
        let mut truncated = false;
        if let Some(limit) = opts.max_models {
            let left = limit.saturating_sub(examined);
            if left / per_adj < adj_limit {
                adj_limit = left / per_adj;
                truncated = true;
            }
        }
        let found = with_pool(opts.jobs, || {
            (0..adj_limit).into_par_iter().find_map_first(|adj| {
                let succ = space.rows(adj);
                if !reachable_from_zero(&succ) {
                    return None;
                }
                for v in 0..per_adj {
                    let m = space.model(succ.clone(), v);
                    match holds(&m) {
                        Ok(true) => return Some(Ok((adj, v, m))),
                        Ok(false) => {}
                        Err(e) => return Some(Err(e)),
                    }
                }
                None
            })
        })?;
        match found {
            Some(Ok((adj, v, model))) => {
                return Ok(SatVerdict {
                    status: SatStatus::Sat,
                    witness: Some(Witness { model, state: 0 }),
                    models_examined: examined + adj * per_adj + v + 1,
                    bound,
                    elapsed: start.elapsed(),
                })
            }
            Some(Err(e)) => return Err(e.into()),
            None => {}
        }
        examined += adj_limit * per_adj;
        if truncated {
            return Err(SatError::Budget {
                limit: opts.max_models.unwrap_or(0),
            });
        }
    }
    Ok(SatVerdict {
        status: SatStatus::Unknown,
        witness: None,
        models_examined: examined,
        bound,
        elapsed: start.elapsed(),
    })
}

/// SAT with a witness if some model of at most `max_states` states
/// satisfies `f`; otherwise UNKNOWN.
pub fn bounded_sat(
    f: &Formula,
    logic: LogicId,
    max_states: usize,
) -> Result<SatVerdict<KripkeModel>, SatError> {
    bounded_sat_with(f, logic, max_states, SearchOptions::default())
}

pub fn bounded_sat_with(
    f: &Formula,
    logic: LogicId,
    max_states: usize,
    opts: SearchOptions,
) -> Result<SatVerdict<KripkeModel>, SatError> {
    if logic.is_alternating() || !belongs_to(f, logic) {
        return Err(SatError::WrongLogic {
            logic,
            formula: f.to_string(),
        });
    }
    let vars: Vec<u32> = f.variables().into_iter().collect();
    bounded_search_kripke(&vars, max_states, opts, |m| {
        let set = match logic {
            LogicId::Ctl => mc_ctl(m, f)?,
            _ => mc_ctlstar(m, f)?,
        };
        Ok(set.contains(0))
    })
}

// ------------------------------------------------------------------- CGS

#[derive(Clone)]
struct CgsSpace {
    states: usize,
    agents: AgentSet,
    max_actions: usize,
    vars: Vec<u32>,
}

impl CgsSpace {
    fn slots(&self) -> usize {
        self.states * self.agents.count() as usize
    }

    fn config_count(&self) -> u64 {
        (self.max_actions as u64).pow(self.slots() as u32)
    }

    // action counts per (state, agent), state-major, first slot most significant
    fn counts(&self, mut config: u64) -> Vec<Vec<usize>> {
        let k = self.agents.count() as usize;
        let mut flat = vec![0usize; self.slots()];
        for slot in (0..self.slots()).rev() {
            flat[slot] = (config % self.max_actions as u64) as usize + 1;
            config /= self.max_actions as u64;
        }
        flat.chunks(k).map(<[usize]>::to_vec).collect()
    }

    fn profile_total(counts: &[Vec<usize>]) -> u32 {
        counts.iter().map(|c| c.iter().product::<usize>() as u32).sum()
    }

    fn delta_count(&self, counts: &[Vec<usize>]) -> Option<u64> {
        (self.states as u64).checked_pow(Self::profile_total(counts))
    }

    fn valuation_count(&self) -> u64 {
        1u64 << (self.states * self.vars.len())
    }

    // targets listed state by state, profile by profile, first most significant
    fn targets(&self, counts: &[Vec<usize>], mut index: u64) -> Vec<usize> {
        let total = Self::profile_total(counts) as usize;
        let mut out = vec![0usize; total];
        for slot in (0..total).rev() {
            out[slot] = (index % self.states as u64) as usize;
            index /= self.states as u64;
        }
        out
    }

    fn model(&self, counts: &[Vec<usize>], targets: &[usize], val: u64) -> ConcurrentGameModel {
        let n = self.states;
        let actions: Vec<String> = (0..self.max_actions).map(|i| format!("a{i}")).collect();
        let available: Vec<Vec<Vec<usize>>> = counts
            .iter()
            .map(|row| row.iter().map(|&c| (0..c).collect()).collect())
            .collect();
        let mut offset = vec![0usize; n];
        for s in 1..n {
            offset[s] = offset[s - 1] + counts[s - 1].iter().product::<usize>();
        }
        let valuation: BTreeMap<u32, StateSet> = self
            .vars
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let bits = val >> (j * n);
                (v, StateSet::from_states(n, (0..n).filter(|s| bits >> s & 1 == 1)))
            })
            .collect();
        // action ids equal positions here, so the profile number is mixed radix
        ConcurrentGameModel::new(
            self.agents,
            actions,
            available,
            |s, profile| {
                let p = profile
                    .iter()
                    .zip(&counts[s])
                    .fold(0, |acc, (&a, &c)| acc * c + a);
                targets[offset[s] + p]
            },
            valuation,
        )
        .expect("well-formed by construction")
    }
}

fn targets_reach_all(states: usize, counts: &[Vec<usize>], targets: &[usize]) -> bool {
    let mut succ = vec![Vec::new(); states];
    let mut i = 0;
    for (s, row) in counts.iter().enumerate() {
        for _ in 0..row.iter().product::<usize>() {
            succ[s].push(targets[i]);
            i += 1;
        }
    }
    reachable_from_zero(&succ)
}

/// Searches concurrent game models with at most `max_states` states and
/// at most `max_actions` actions per agent and state.
pub fn bounded_search_cgs<F>(
    agents: AgentSet,
    vars: &[u32],
    max_states: usize,
    max_actions: usize,
    opts: SearchOptions,
    holds: F,
) -> Result<SatVerdict<ConcurrentGameModel>, SatError>
where
    F: Fn(&ConcurrentGameModel) -> Result<bool, CheckError> + Sync,
{
    assert!(max_actions >= 1, "at least one action");
    let start = Instant::now();
    let bound = SearchBound {
        max_states,
        max_actions: Some(max_actions),
    };
    let mut examined: u64 = 0;
    let over = |examined: u64| opts.max_models.is_some_and(|limit| examined > limit);
    for n in 1..=max_states {
        let space = CgsSpace {
            states: n,
            agents,
            max_actions,
            vars: vars.to_vec(),
        };
        let per_delta = space.valuation_count();
        for config in 0..space.config_count() {
            let counts = space.counts(config);
            let deltas = match space.delta_count(&counts) {
                Some(d) => d,
                None => {
                    return Err(SatError::Budget {
                        limit: opts.max_models.unwrap_or(u64::MAX),
                    })
                }
            };
            let mut limit = deltas;
            let mut truncated = false;
            if let Some(max) = opts.max_models {
                let left = max.saturating_sub(examined);
                if left / per_delta < limit {
                    limit = left / per_delta;
                    truncated = true;
                }
            }
            let found = with_pool(opts.jobs, || {
                (0..limit).into_par_iter().find_map_first(|d| {
                    let targets = space.targets(&counts, d);
                    if !targets_reach_all(n, &counts, &targets) {
                        return None;
                    }
                    for v in 0..per_delta {
                        let m = space.model(&counts, &targets, v);
                        match holds(&m) {
                            Ok(true) => return Some(Ok((d, v, m))),
                            Ok(false) => {}
                            Err(e) => return Some(Err(e)),
                        }
                    }
                    None
                })
            })?;
            match found {
                Some(Ok((d, v, model))) => {
                    return Ok(SatVerdict {
                        status: SatStatus::Sat,
                        witness: Some(Witness { model, state: 0 }),
                        models_examined: examined + d * per_delta + v + 1,
                        bound,
                        elapsed: start.elapsed(),
                    })
                }
                Some(Err(e)) => return Err(e.into()),
                None => {}
            }
            examined += limit * per_delta;
            if truncated || over(examined) {
                return Err(SatError::Budget {
                    limit: opts.max_models.unwrap_or(0),
                });
            }
        }
    }
    Ok(SatVerdict {
        status: SatStatus::Unknown,
        witness: None,
        models_examined: examined,
        bound,
        elapsed: start.elapsed(),
    })
}

/// ATL satisfiability over a fixed agent set within the given bounds.
pub fn bounded_sat_cgs(
    f: &Formula,
    agents: AgentSet,
    max_states: usize,
    max_actions: usize,
    opts: SearchOptions,
) -> Result<SatVerdict<ConcurrentGameModel>, SatError> {
    if !belongs_to(f, LogicId::Atl) {
        return Err(SatError::WrongLogic {
            logic: LogicId::Atl,
            formula: f.to_string(),
        });
    }
    let vars: Vec<u32> = f.variables().into_iter().collect();
    bounded_search_cgs(agents, &vars, max_states, max_actions, opts, |m| {
        Ok(mc_atl(m, f)?.contains(0))
    })
}
