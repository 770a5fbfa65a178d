//! Seeded property suites for the embedding. Each suite is deterministic
//! for a fixed seed and stops at the first counterexample, which is
//! reported in full (formula, model, state).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::cgs::{mc_atl, mc_atlstar_extremal, ConcurrentGameModel};
use crate::embedding::{
    attach_cgs, attach_kripke, b_formula, embed, gadget_formula, gadget_model_cgs, gadget_model_kripke,
    hat_top_collapse, prime_with, witness_model_cgs, witness_model_forward, Flavor, PrimeClauses,
    TranslationResult, ROOT,
};
use crate::gen::{self, GenRng};
use crate::kripke::{mc_ctl, mc_ctlstar, restrict_submodel, CheckError, KripkeModel};
use crate::satsearch::{bounded_sat_cgs, bounded_sat_with, SatError, SearchOptions};
use crate::syntax::{classify, parse, substitute_all};
use crate::{AgentSet, Formula, LogicId, StateSet};

pub const DEFAULT_SEED: u64 = 1729;

/// Corpus-wide bound on `size(star) / size(source)^2`.
pub const SIZE_CONSTANT: f64 = 640.0;

/// Largest accepted log-log slope of translation time against input size.
pub const MAX_TIME_EXPONENT: f64 = 3.0;

const LOGICS: [LogicId; 4] = [LogicId::Ctl, LogicId::CtlStar, LogicId::Atl, LogicId::AtlStar];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Suite {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::E1, Suite::E2, Suite::E3, Suite::E4, Suite::E5, Suite::E6];

    pub fn title(self) -> &'static str {
        match self {
            Suite::E1 => "top collapse equivalence",
            Suite::E2 => "guard transparency",
            Suite::E3 => "gadget roots",
            Suite::E4 => "gadget substitution",
            Suite::E5 => "forward preservation",
            Suite::E6 => "single variable, quadratic size",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown suite `{s}` (expected E1..E6 or all)"))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random formulas (or formula/model pairs) per suite.
    pub cases: usize,
    pub models_per_case: usize,
    pub max_m: usize,
    pub max_states: usize,
    pub sat_bound: usize,
    /// Candidate budget for each bounded search.
    pub budget: u64,
    pub jobs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            cases: 100,
            models_per_case: 20,
            max_m: 5,
            max_states: 6,
            sat_bound: 3,
            budget: 200_000,
            jobs: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Nothing could be checked within the search budget.
    Budget,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub logic: LogicId,
    pub formula: String,
    pub model: serde_json::Value,
    pub state: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "logic:   {}", self.logic)?;
        writeln!(f, "formula: {}", self.formula)?;
        if let Some(s) = self.state {
            writeln!(f, "state:   {s}")?;
        }
        writeln!(f, "detail:  {}", self.detail)?;
        write!(f, "model:   {}", self.model)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub title: &'static str,
    pub outcome: Outcome,
    pub checked: u64,
    pub skipped: u64,
    pub budget_hits: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

#[derive(Default)]
struct Tally {
    checked: u64,
    skipped: u64,
    budget_hits: u64,
    failure: Option<Counterexample>,
    note: Option<String>,
}

impl Tally {
    fn finish(self, suite: Suite, start: Instant) -> SuiteReport {
        let outcome = if self.failure.is_some() {
            Outcome::Fail
        } else if self.checked == 0 && self.budget_hits > 0 {
            Outcome::Budget
        } else {
            Outcome::Pass
        };
        SuiteReport {
            suite,
            title: suite.title(),
            outcome,
            checked: self.checked,
            skipped: self.skipped,
            budget_hits: self.budget_hits,
            counterexample: self.failure,
            note: self.note,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }
}

/// Either kind of model, so suites can treat all four logics alike.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyModel {
    Kripke(KripkeModel),
    Cgs(ConcurrentGameModel),
}

impl AnyModel {
    pub fn len(&self) -> usize {
        match self {
            AnyModel::Kripke(m) => m.len(),
            AnyModel::Cgs(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn holds(&self, var: u32) -> StateSet {
        match self {
            AnyModel::Kripke(m) => m.holds(var),
            AnyModel::Cgs(m) => m.holds(var),
        }
    }

    pub fn valuation(&self) -> &BTreeMap<u32, StateSet> {
        match self {
            AnyModel::Kripke(m) => m.valuation(),
            AnyModel::Cgs(m) => m.valuation(),
        }
    }

    pub fn replace_valuation(&mut self, valuation: BTreeMap<u32, StateSet>) {
        match self {
            AnyModel::Kripke(m) => m.replace_valuation(valuation),
            AnyModel::Cgs(m) => m.replace_valuation(valuation),
        }
    }

    pub fn state_name(&self, s: usize) -> String {
        match self {
            AnyModel::Kripke(m) => m.state_name(s),
            AnyModel::Cgs(m) => m.state_name(s),
        }
    }

    pub fn to_json(&self, designated: Option<usize>) -> String {
        match self {
            AnyModel::Kripke(m) => m.to_json(designated),
            AnyModel::Cgs(m) => m.to_json(designated),
        }
    }

    pub fn to_dot(&self, designated: Option<usize>) -> String {
        match self {
            AnyModel::Kripke(m) => m.to_dot(designated),
            AnyModel::Cgs(m) => m.to_dot(designated),
        }
    }

    fn json_value(&self, designated: Option<usize>) -> serde_json::Value {
        serde_json::from_str(&self.to_json(designated)).expect("model JSON is valid")
    }
}

/// Dispatches to the checker for `logic`: CTL and CTL* on Kripke models,
/// ATL and extremal ATL* on concurrent game models.
pub fn model_check(m: &AnyModel, f: &Formula, logic: LogicId) -> Result<StateSet, CheckError> {
    match (m, logic) {
        (AnyModel::Kripke(k), LogicId::Ctl) => mc_ctl(k, f),
        (AnyModel::Kripke(k), LogicId::CtlStar) => mc_ctlstar(k, f),
        (AnyModel::Cgs(c), LogicId::Atl) => mc_atl(c, f),
        (AnyModel::Cgs(c), LogicId::AtlStar) => mc_atlstar_extremal(c, f),
        _ => Err(CheckError::ModelKind(logic)),
    }
}

fn first_difference(a: &StateSet, b: &StateSet) -> Option<usize> {
    (0..a.universe()).find(|&s| a.contains(s) != b.contains(s))
}

fn agents_for(logic: LogicId) -> AgentSet {
    AgentSet::new(if logic.is_alternating() { 2 } else { 1 }).expect("valid agent count")
}

fn flavor_for(logic: LogicId) -> Flavor {
    if logic.is_alternating() {
        Flavor::Alternating
    } else {
        Flavor::Branching
    }
}

// ATL* formulas are drawn with extremal coalitions only, so every logic
// has a checker.
fn checkable_formula(rng: &mut GenRng, logic: LogicId, vars: u32, depth: usize) -> Formula {
    let agents = agents_for(logic);
    if logic == LogicId::AtlStar {
        gen::random_extremal_atlstar(rng, vars, depth, agents)
    } else {
        gen::random_formula(rng, logic, vars, depth, agents)
    }
}

fn random_model(rng: &mut GenRng, logic: LogicId, max_states: usize, vars: u32) -> AnyModel {
    if logic.is_alternating() {
        let states = rng.gen_range(1..=max_states.min(4));
        AnyModel::Cgs(gen::random_cgs(rng, states, agents_for(logic), 2, vars))
    } else {
        let states = rng.gen_range(1..=max_states);
        let density = rng.gen_range(0.15..0.6);
        AnyModel::Kripke(gen::random_kripke(rng, states, vars, density))
    }
}

fn counterexample(
    logic: LogicId,
    f: &Formula,
    m: &AnyModel,
    state: Option<usize>,
    detail: impl Into<String>,
) -> Counterexample {
    Counterexample {
        logic,
        formula: f.to_string(),
        model: m.json_value(state),
        state,
        detail: detail.into(),
    }
}

// ------------------------------------------------------------------- E1

#[derive(Debug, Clone)]
pub struct CollapseParams {
    pub logics: Vec<LogicId>,
    pub formulas: usize,
    pub models_per_formula: usize,
    pub max_vars: u32,
    pub max_depth: usize,
    pub max_states: usize,
}

/// The guarded formula with the guard replaced by `⊤` is equivalent to
/// the source on every model.
pub fn top_collapse(rng: &mut GenRng, p: &CollapseParams) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    'cases: for i in 0..p.formulas {
        let logic = p.logics[i % p.logics.len()];
        let vars = rng.gen_range(1..=p.max_vars);
        let depth = rng.gen_range(0..=p.max_depth);
        let f = checkable_formula(rng, logic, vars, depth);
        let tr = embed(&f, logic, agents_for(logic)).expect("generated formulas embed");
        let collapsed = tr.restore(&hat_top_collapse(&tr));
        for _ in 0..p.models_per_formula {
            let m = random_model(rng, logic, p.max_states, p.max_vars);
            let (a, b) = match (model_check(&m, &f, logic), model_check(&m, &collapsed, logic)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    tally.skipped += 1;
                    continue;
                }
            };
            tally.checked += 1;
            if let Some(s) = first_difference(&a, &b) {
                let detail = format!(
                    "source {} but collapsed `{collapsed}` {}",
                    verdict(a.contains(s)),
                    verdict(b.contains(s))
                );
                tally.failure = Some(counterexample(logic, &f, &m, Some(s), detail));
                break 'cases;
            }
        }
    }
    tally.finish(Suite::E1, start)
}

fn verdict(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

// ------------------------------------------------------------------- E2

#[derive(Debug, Clone)]
pub struct GuardParams {
    pub logics: Vec<LogicId>,
    pub formulas: usize,
    pub max_vars: u32,
    pub max_depth: usize,
    pub max_states: usize,
    pub clauses: Vec<PrimeClauses>,
}

/// With the guard true everywhere, relativizing changes nothing.
pub fn guard_transparency(rng: &mut GenRng, p: &GuardParams) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    let guard = p.max_vars + 1;
    'cases: for i in 0..p.formulas {
        let logic = p.logics[i % p.logics.len()];
        let vars = rng.gen_range(1..=p.max_vars);
        let depth = rng.gen_range(0..=p.max_depth);
        let f = checkable_formula(rng, logic, vars, depth);
        let mut m = random_model(rng, logic, p.max_states, p.max_vars);
        let mut val = m.valuation().clone();
        val.insert(guard, StateSet::full(m.len()));
        m.replace_valuation(val);
        let Ok(plain) = model_check(&m, &f, logic) else {
            tally.skipped += 1;
            continue;
        };
        for &clauses in &p.clauses {
            let primed = prime_with(&f, logic, guard, agents_for(logic), clauses).expect("guard is fresh");
            let Ok(relativized) = model_check(&m, &primed, logic) else {
                tally.skipped += 1;
                continue;
            };
            tally.checked += 1;
            if let Some(s) = first_difference(&plain, &relativized) {
                let detail = format!(
                    "source {} but primed ({clauses:?}) `{primed}` {}",
                    verdict(plain.contains(s)),
                    verdict(relativized.contains(s))
                );
                tally.failure = Some(counterexample(logic, &f, &m, Some(s), detail));
                break 'cases;
            }
        }
    }
    tally.finish(Suite::E2, start)
}

// ------------------------------------------------------------------- E3

/// `A_m` holds in gadget `k` exactly at the root when `k = m`, in both
/// flavors. A zero bound skips that flavor.
pub fn gadget_roots(max_m_kripke: usize, max_m_cgs: usize, agents: AgentSet) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    let one = AgentSet::new(1).expect("one agent");
    let expected = |k: usize, m: usize| if k == m { vec![ROOT] } else { vec![] };
    'kripke: for k in 1..=max_m_kripke {
        let model = AnyModel::Kripke(gadget_model_kripke(k, 1).expect("index ≥ 1"));
        for m in 1..=max_m_kripke {
            let f = gadget_formula(m, Flavor::Branching, 1, one);
            let set = model_check(&model, &f, LogicId::Ctl).expect("CTL formula");
            tally.checked += 1;
            if set.to_vec() != expected(k, m) {
                let detail = format!("A_{m} in gadget {k} holds at {:?}", set.to_vec());
                tally.failure = Some(counterexample(LogicId::Ctl, &f, &model, None, detail));
                break 'kripke;
            }
        }
    }
    if tally.failure.is_none() {
        let pool = vec!["x".to_string()];
        'cgs: for k in 1..=max_m_cgs {
            let model = AnyModel::Cgs(gadget_model_cgs(k, 1, agents, &pool).expect("index ≥ 1, pool"));
            for m in 1..=max_m_cgs {
                let f = gadget_formula(m, Flavor::Alternating, 1, agents);
                let set = model_check(&model, &f, LogicId::Atl).expect("ATL formula");
                tally.checked += 1;
                if set.to_vec() != expected(k, m) {
                    let detail = format!("A'_{m} in gadget {k} holds at {:?}", set.to_vec());
                    tally.failure = Some(counterexample(LogicId::Atl, &f, &model, None, detail));
                    break 'cgs;
                }
            }
        }
    }
    tally.finish(Suite::E3, start)
}

// ------------------------------------------------------------------- E4

#[derive(Debug, Clone)]
pub struct SubstitutionParams {
    pub logics: Vec<LogicId>,
    pub pairs: usize,
    pub max_n: u32,
    pub max_depth: usize,
    pub max_states: usize,
}

/// A model with gadgets attached to a random core, sometimes perturbed
/// (extra edges, flipped output variable) so that gadget formulas are
/// exercised both where they should hold and where they should not.
fn gadget_rich_model(rng: &mut GenRng, logic: LogicId, gadgets: u32, max_states: usize) -> AnyModel {
    let mut m = if logic.is_alternating() {
        let states = rng.gen_range(1..=max_states.min(3));
        let base = gen::random_cgs(rng, states, agents_for(logic), 2, gadgets);
        AnyModel::Cgs(attach_cgs(&base, gadgets, 1, 0).expect("well-formed base").0)
    } else {
        let states = rng.gen_range(1..=max_states);
        let density = rng.gen_range(0.15..0.6);
        let base = gen::random_kripke(rng, states, gadgets, density);
        let (mut k, _) = attach_kripke(&base, gadgets, 1, 0).expect("well-formed base");
        if rng.gen_bool(0.5) {
            for _ in 0..rng.gen_range(1..=3) {
                let (a, b) = (rng.gen_range(0..k.len()), rng.gen_range(0..k.len()));
                k.add_edge(a, b);
            }
        }
        AnyModel::Kripke(k)
    };
    if rng.gen_bool(0.5) {
        let mut out = m.holds(1);
        for s in 0..m.len() {
            if rng.gen_bool(0.15) {
                if out.contains(s) {
                    out.remove(s);
                } else {
                    out.insert(s);
                }
            }
        }
        m.replace_valuation(BTreeMap::from([(1, out)]));
    }
    m
}

/// Checking `σ(ψ)` in a model agrees with checking `ψ` where each `p_i`
/// is reinterpreted as the extension of `B_i`.
pub fn gadget_substitution(rng: &mut GenRng, p: &SubstitutionParams) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    let mut inhabited = 0;
    for i in 0..p.pairs {
        let logic = p.logics[i % p.logics.len()];
        let n = rng.gen_range(1..=p.max_n);
        let depth = rng.gen_range(0..=p.max_depth);
        let psi = checkable_formula(rng, logic, n + 1, depth);
        let sigma: BTreeMap<u32, Formula> = (1..=n + 1)
            .map(|j| (j, b_formula(j as usize, flavor_for(logic), 1, agents_for(logic))))
            .collect();
        let image = substitute_all(&psi, &sigma).expect("state formulas");
        let m = gadget_rich_model(rng, logic, n + 1, p.max_states);
        let mut reinterpreted = m.clone();
        let extensions: Result<BTreeMap<u32, StateSet>, CheckError> = sigma
            .iter()
            .map(|(&j, b)| model_check(&m, b, logic).map(|set| (j, set)))
            .collect();
        let Ok(extensions) = extensions else {
            tally.skipped += 1;
            continue;
        };
        if extensions.values().any(|set| !set.is_empty()) {
            inhabited += 1;
        }
        reinterpreted.replace_valuation(extensions);
        let (Ok(a), Ok(b)) = (
            model_check(&m, &image, logic),
            model_check(&reinterpreted, &psi, logic),
        ) else {
            tally.skipped += 1;
            continue;
        };
        tally.checked += 1;
        if let Some(s) = first_difference(&a, &b) {
            let detail = format!(
                "σ-image {} but ψ under the reinterpreted valuation {}",
                verdict(a.contains(s)),
                verdict(b.contains(s))
            );
            tally.failure = Some(counterexample(logic, &psi, &m, Some(s), detail));
            break;
        }
    }
    tally.note = Some(format!("{inhabited} models with some non-empty B_i"));
    tally.finish(Suite::E4, start)
}

// ------------------------------------------------------------------- E5

#[derive(Debug, Clone)]
pub struct ForwardParams {
    pub logics: Vec<LogicId>,
    pub formulas: usize,
    pub max_vars: u32,
    pub max_depth: usize,
    pub sat_bound: usize,
    pub budget: u64,
    pub jobs: usize,
}

/// Model-checks `tr.star` on the witness built from a guard-global model
/// of `tr.hat` at `root`, and checks that `B_i` recovers `p_i` on the
/// original states.
fn check_witness(tr: &TranslationResult, m: &AnyModel, root: usize) -> Result<(), Counterexample> {
    let logic = tr.logic;
    let (w, r) = match m {
        AnyModel::Kripke(k) => witness_model_forward(k, tr, root).map(|(w, r)| (AnyModel::Kripke(w), r)),
        AnyModel::Cgs(c) => witness_model_cgs(c, tr, root).map(|(w, r)| (AnyModel::Cgs(w), r)),
    }
    .map_err(|e| {
        counterexample(
            logic,
            &tr.source,
            m,
            Some(root),
            format!("witness construction: {e}"),
        )
    })?;
    let star = model_check(&w, &tr.star, logic)
        .map_err(|e| counterexample(logic, &tr.source, &w, Some(r), format!("checking star: {e}")))?;
    if !star.contains(r) {
        return Err(counterexample(
            logic,
            &tr.source,
            &w,
            Some(r),
            "star fails at the witness root",
        ));
    }
    let origin: Vec<usize> = match m {
        AnyModel::Kripke(k) => k.reachable(root).iter().collect(),
        AnyModel::Cgs(c) => c.to_kripke().reachable(root).iter().collect(),
    };
    for (&i, b) in &tr.sigma {
        let set = model_check(&w, b, logic).map_err(|e| counterexample(logic, b, &w, None, e.to_string()))?;
        let held = m.holds(i);
        if let Some(j) = (0..origin.len()).find(|&j| set.contains(j) != held.contains(origin[j])) {
            let detail = format!("B_{i} disagrees with p{i} at original state {}", origin[j]);
            return Err(counterexample(logic, b, &w, Some(j), detail));
        }
    }
    Ok(())
}

/// Searches for models of `tr.hat`, restricts each to its guarded part and
/// checks that the gadget witness satisfies `tr.star` (Kripke logics).
pub fn forward_from_hat(rng: &mut GenRng, p: &ForwardParams) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    let opts = SearchOptions {
        max_models: Some(p.budget),
        jobs: p.jobs,
    };
    for i in 0..p.formulas {
        let logic = p.logics[i % p.logics.len()];
        let vars = rng.gen_range(1..=p.max_vars);
        let depth = rng.gen_range(0..=p.max_depth);
        let f = checkable_formula(rng, logic, vars, depth);
        let tr = embed(&f, logic, agents_for(logic)).expect("generated formulas embed");
        let verdict = match bounded_sat_with(&tr.hat, logic, p.sat_bound, opts) {
            Ok(v) => v,
            Err(SatError::Budget { .. }) => {
                tally.budget_hits += 1;
                continue;
            }
            Err(_) => {
                tally.skipped += 1;
                continue;
            }
        };
        let Some(w) = verdict.witness else {
            tally.skipped += 1;
            continue;
        };
        let model = AnyModel::Kripke(w.model.clone());
        let (sub, origin) = match restrict_submodel(&w.model, w.state, tr.guard) {
            Ok(x) => x,
            Err(e) => {
                let detail = format!("guarded restriction of a model of hat: {e}");
                tally.failure = Some(counterexample(logic, &tr.hat, &model, Some(w.state), detail));
                break;
            }
        };
        let root = origin.iter().position(|&o| o == w.state).expect("root kept");
        tally.checked += 1;
        if let Err(cx) = check_witness(&tr, &AnyModel::Kripke(sub), root) {
            tally.failure = Some(cx);
            break;
        }
    }
    tally.finish(Suite::E5, start)
}

#[derive(Debug, Clone)]
pub struct SourceParams {
    pub logic: LogicId,
    pub agents: AgentSet,
    /// Satisfiable formulas to collect.
    pub target: usize,
    pub max_attempts: usize,
    pub max_vars: u32,
    pub max_depth: usize,
    pub max_states: usize,
    pub max_actions: usize,
    pub budget: u64,
    pub jobs: usize,
}

/// Finds models of random source formulas, adds a global guard, and checks
/// the witness built from it. Only formulas found satisfiable within the
/// bound count; the rest are tallied as skipped or budget hits.
pub fn forward_from_source(rng: &mut GenRng, p: &SourceParams) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    let opts = SearchOptions {
        max_models: Some(p.budget),
        jobs: p.jobs,
    };
    let mut attempts = 0;
    while (tally.checked as usize) < p.target && attempts < p.max_attempts {
        attempts += 1;
        let vars = rng.gen_range(1..=p.max_vars);
        let depth = rng.gen_range(0..=p.max_depth);
        let f = gen::random_formula(rng, p.logic, vars, depth, p.agents);
        let found = if p.logic.is_alternating() {
            bounded_sat_cgs(&f, p.agents, p.max_states, p.max_actions, opts)
                .map(|v| v.witness.map(|w| (AnyModel::Cgs(w.model), w.state)))
        } else {
            bounded_sat_with(&f, p.logic, p.max_states, opts)
                .map(|v| v.witness.map(|w| (AnyModel::Kripke(w.model), w.state)))
        };
        let (mut m, s) = match found {
            Ok(Some(x)) => x,
            Ok(None) => {
                tally.skipped += 1;
                continue;
            }
            Err(SatError::Budget { .. }) => {
                tally.budget_hits += 1;
                continue;
            }
            Err(e) => panic!("bounded search on a generated formula: {e}"),
        };
        let tr = embed(&f, p.logic, p.agents).expect("generated formulas embed");
        let mut val: BTreeMap<u32, StateSet> = tr
            .renaming
            .iter()
            .map(|(&orig, &canon)| (canon, m.holds(orig)))
            .collect();
        val.insert(tr.guard, StateSet::full(m.len()));
        m.replace_valuation(val);
        let hat_ok = model_check(&m, &tr.hat, p.logic).map(|set| set.contains(s));
        if hat_ok != Ok(true) {
            let detail = format!("guard-augmented witness does not satisfy hat: {hat_ok:?}");
            tally.failure = Some(counterexample(p.logic, &tr.hat, &m, Some(s), detail));
            break;
        }
        tally.checked += 1;
        if let Err(cx) = check_witness(&tr, &m, s) {
            tally.failure = Some(cx);
            break;
        }
    }
    if (tally.checked as usize) < p.target && tally.failure.is_none() {
        tally.note = Some(format!(
            "only {} of {} satisfiable formulas found in {attempts} attempts",
            tally.checked, p.target
        ));
        if tally.checked > 0 {
            tally.budget_hits = tally.budget_hits.max(1);
        }
    }
    let mut report = tally.finish(Suite::E5, start);
    if report.checked < p.target as u64 && report.outcome == Outcome::Pass {
        report.outcome = Outcome::Budget;
    }
    report
}

// ------------------------------------------------------------------- E6

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub logic: LogicId,
    pub agents: AgentSet,
    pub formula: Formula,
}

const HAND_WRITTEN: &[(LogicId, &str)] = &[
    (LogicId::Ctl, "p1"),
    (LogicId::Ctl, "true"),
    (LogicId::Ctl, "p1 & !p1"),
    (LogicId::Ctl, "AX p1"),
    (LogicId::Ctl, "EX p1"),
    (LogicId::Ctl, "A (p1 U p2)"),
    (LogicId::Ctl, "E (p1 U p2)"),
    (LogicId::Ctl, "AG p1 -> EF p2"),
    (LogicId::Ctl, "AG (p1 -> AF p2)"),
    (LogicId::Ctl, "AF p1 & !p1 & AX !p1"),
    (LogicId::Ctl, "EG p3 | A (p1 U (p2 & EX p4))"),
    (LogicId::Ctl, "AG (EX p1 & EX !p1) & EF AG p2"),
    (LogicId::CtlStar, "A G F p1"),
    (LogicId::CtlStar, "E (p1 U X p2)"),
    (LogicId::CtlStar, "A (G p1 -> F p2)"),
    (LogicId::CtlStar, "E G (p1 & X !p1)"),
    (LogicId::CtlStar, "A X X p1 | E F G p2"),
    (LogicId::CtlStar, "A (F G p1 | G F p2) & E X p3"),
    (LogicId::Atl, "<<1>> X p1"),
    (LogicId::Atl, "<<1,2>> G p1"),
    (LogicId::Atl, "<<>> (p1 U p2)"),
    (LogicId::Atl, "<<*>> X p1 & <<*>> X !p1"),
    (LogicId::Atl, "<<2>> G (p1 -> <<1>> X p2)"),
    (LogicId::Atl, "<<>> G <<1>> (p1 U p3)"),
    (LogicId::AtlStar, "<<1>> G p1"),
    (LogicId::AtlStar, "<<1>> G F p1"),
    (LogicId::AtlStar, "<<>> (p1 U X p2)"),
    (LogicId::AtlStar, "<<*>> F G p1"),
    (LogicId::AtlStar, "<<1,2>> X X p1 -> <<2>> (G p2 | F p3)"),
];

/// Hand-written formulas for every logic plus seeded random ones of depth
/// up to 6 over up to 4 variables.
pub fn corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = HAND_WRITTEN
        .iter()
        .map(|&(logic, text)| {
            let agents = agents_for(logic);
            CorpusEntry {
                logic,
                agents,
                formula: parse(text, logic, agents).expect("corpus formulas parse"),
            }
        })
        .collect();
    let mut rng = gen::rng(seed);
    for logic in LOGICS {
        let agents = agents_for(logic);
        for depth in 0..=6 {
            for vars in 1..=4 {
                for _ in 0..3 {
                    out.push(CorpusEntry {
                        logic,
                        agents,
                        formula: gen::random_formula(&mut rng, logic, vars, depth, agents),
                    });
                }
            }
        }
    }
    out
}

/// Every translated corpus formula uses only the output variable and has
/// size at most `constant · size(source)²`. The note records the largest
/// ratio seen.
pub fn fragment_and_size(entries: &[CorpusEntry], constant: f64) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    let mut worst = 0.0f64;
    for e in entries {
        let tr = embed(&e.formula, e.logic, e.agents).expect("corpus formulas embed");
        let vars = classify(&tr.star).variables;
        let source = e.formula.size() as f64;
        let ratio = tr.star.size() as f64 / (source * source);
        worst = worst.max(ratio);
        tally.checked += 1;
        let problem = if vars.len() != 1 || !vars.contains(&tr.out_var) {
            Some(format!("star uses variables {vars:?}"))
        } else if ratio > constant {
            Some(format!("size ratio {ratio:.2} exceeds {constant}"))
        } else {
            None
        };
        if let Some(detail) = problem {
            tally.failure = Some(Counterexample {
                logic: e.logic,
                formula: e.formula.to_string(),
                model: serde_json::Value::Null,
                state: None,
                detail,
            });
            break;
        }
    }
    tally.note = Some(format!(
        "max size(star)/size(source)^2 = {worst:.2} (bound {constant})"
    ));
    tally.finish(Suite::E6, start)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingPoint {
    pub input_size: usize,
    pub star_size: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub logic: LogicId,
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of log time against log input size.
    pub exponent: f64,
}

impl ScalingReport {
    /// Output size strictly increases, time does not shrink from the
    /// smallest to the largest input, and the fitted exponent is bounded.
    pub fn acceptable(&self, max_exponent: f64) -> bool {
        let sizes_grow = self.points.windows(2).all(|w| w[1].star_size > w[0].star_size);
        let first = self.points.first().map_or(0.0, |p| p.seconds);
        let last = self.points.last().map_or(0.0, |p| p.seconds);
        sizes_grow && last >= first && self.exponent.is_finite() && self.exponent <= max_exponent
    }
}

/// A family of formulas whose size and variable count grow with `k`:
/// nested next-step chains over fresh variables.
pub fn scaling_formula(logic: LogicId, k: usize) -> Formula {
    use crate::syntax::derived::{and, ex};
    let agents = agents_for(logic);
    let step = |f: Formula| match logic {
        LogicId::Atl | LogicId::AtlStar => crate::syntax::derived::cx(agents.all(), f),
        _ => ex(f),
    };
    let mut f = Formula::var(1);
    for i in 2..=k as u32 {
        f = and(Formula::var(i), step(f));
    }
    f
}

/// Times translation of [`scaling_formula`] for each `k` (best of `reps`).
pub fn translation_scaling(logic: LogicId, ks: &[usize], reps: usize) -> ScalingReport {
    let agents = agents_for(logic);
    let points: Vec<ScalingPoint> = ks
        .iter()
        .map(|&k| {
            let f = scaling_formula(logic, k);
            let mut best = f64::INFINITY;
            let mut star_size = 0;
            for _ in 0..reps.max(1) {
                let t = Instant::now();
                let tr = embed(&f, logic, agents).expect("family formulas embed");
                best = best.min(t.elapsed().as_secs_f64());
                star_size = tr.star.size();
            }
            ScalingPoint {
                input_size: f.size(),
                star_size,
                seconds: best,
            }
        })
        .collect();
    let xs: Vec<f64> = points.iter().map(|p| (p.input_size as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.seconds.max(1e-9).ln()).collect();
    ScalingReport {
        logic,
        exponent: slope(&xs, &ys),
        points,
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

// ------------------------------------------------------------------ driver

/// Runs one suite with parameters derived from `cfg`.
pub fn run(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    // each suite gets its own stream so results do not depend on order
    let mut rng = gen::rng(cfg.seed ^ (suite as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    match suite {
        Suite::E1 => top_collapse(
            &mut rng,
            &CollapseParams {
                logics: vec![LogicId::Ctl, LogicId::CtlStar],
                formulas: cfg.cases,
                models_per_formula: cfg.models_per_case,
                max_vars: 3,
                max_depth: 4,
                max_states: cfg.max_states,
            },
        ),
        Suite::E2 => guard_transparency(
            &mut rng,
            &GuardParams {
                logics: LOGICS.to_vec(),
                formulas: cfg.cases,
                max_vars: 3,
                max_depth: 3,
                max_states: cfg.max_states,
                clauses: vec![PrimeClauses::Corrected, PrimeClauses::Literal],
            },
        ),
        Suite::E3 => gadget_roots(cfg.max_m, cfg.max_m, AgentSet::new(2).expect("two agents")),
        Suite::E4 => gadget_substitution(
            &mut rng,
            &SubstitutionParams {
                logics: LOGICS.to_vec(),
                pairs: cfg.cases,
                max_n: 2,
                max_depth: 3,
                max_states: cfg.max_states.min(4),
            },
        ),
        Suite::E5 => forward_from_hat(
            &mut rng,
            &ForwardParams {
                logics: vec![LogicId::Ctl, LogicId::CtlStar],
                formulas: cfg.cases,
                max_vars: 2,
                max_depth: 3,
                sat_bound: cfg.sat_bound,
                budget: cfg.budget,
                jobs: cfg.jobs,
            },
        ),
        Suite::E6 => fragment_and_size(&corpus(cfg.seed), SIZE_CONSTANT),
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run(s, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            cases: 12,
            models_per_case: 4,
            max_m: 3,
            max_states: 4,
            budget: 50_000,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn suite_names() {
        assert_eq!("e3".parse::<Suite>(), Ok(Suite::E3));
        assert!("E7".parse::<Suite>().is_err());
        assert_eq!(Suite::E6.to_string(), "E6");
    }

    #[test]
    fn small_runs_pass() {
        for suite in Suite::ALL {
            let report = run(suite, &small());
            assert!(report.passed(), "{suite}: {report:?}");
            assert!(report.checked > 0, "{suite} checked nothing");
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let a = run(Suite::E4, &small());
        let b = run(Suite::E4, &small());
        assert_eq!((a.checked, a.skipped), (b.checked, b.skipped));
    }

    #[test]
    fn literal_clauses_fail_forward_preservation() {
        // AF p1 ∧ ¬p1 ∧ AX ¬p1 holds at the head of 0 → 1 → 2 ⟲ with p1 at 2,
        // but under the literal until clause every guard state can escape
        // into a gadget, so the witness does not satisfy the translation
        let one = AgentSet::new(1).unwrap();
        let f = parse("AF p1 & !p1 & AX !p1", LogicId::Ctl, one).unwrap();
        let m = KripkeModel::new(3, [(0, 1), (1, 2), (2, 2)], [(1, vec![2]), (2, vec![0, 1, 2])]).unwrap();
        assert!(mc_ctl(&m, &f).unwrap().contains(0));
        let literal = crate::embedding::embed_with(&f, LogicId::Ctl, one, PrimeClauses::Literal).unwrap();
        let (w, r) = witness_model_forward(&m, &literal, 0).unwrap();
        assert!(mc_ctl(&m, &literal.hat).unwrap().contains(0));
        assert!(!mc_ctl(&w, &literal.star).unwrap().contains(r));
        let corrected = embed(&f, LogicId::Ctl, one).unwrap();
        let (w, r) = witness_model_forward(&m, &corrected, 0).unwrap();
        assert!(mc_ctl(&w, &corrected.star).unwrap().contains(r));
    }

    #[test]
    fn scaling_family_grows() {
        let r = translation_scaling(LogicId::Ctl, &[2, 4, 8], 1);
        assert!(r.points.windows(2).all(|w| w[1].star_size > w[0].star_size));
        assert_eq!(scaling_formula(LogicId::Ctl, 3).variables().len(), 3);
    }
}
