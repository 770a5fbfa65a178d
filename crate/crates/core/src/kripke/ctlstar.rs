//! CTL* checking. Maximal state subformulas are labeled first and replaced
//! by atoms; each remaining path formula is decided by a tableau product
//! searched for fair strongly connected components.

use std::collections::HashMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::Direction;

use super::{CheckError, KripkeModel};
use crate::{Formula, StateSet};

/// Upper bound on `X` and `U` subformulas in one path formula; the product
/// has `states · 2^k` nodes.
pub const MAX_TEMPORAL_SUBFORMULAS: usize = 20;

pub fn mc_ctlstar(m: &KripkeModel, f: &Formula) -> Result<StateSet, CheckError> {
    if f.has_coalition() {
        return Err(CheckError::Coalition(f.to_string()));
    }
    if !f.is_state() {
        return Err(CheckError::PathFormula(f.to_string()));
    }
    eval_state(m, f)
}

fn eval_state(m: &KripkeModel, f: &Formula) -> Result<StateSet, CheckError> {
    Ok(match f {
        Formula::Var(i) => m.holds(*i),
        Formula::Falsum => StateSet::empty(m.len()),
        Formula::Implies(a, b) => eval_state(m, a)?.implies(&eval_state(m, b)?),
        Formula::ForAllPaths(body) => {
            let mut tab = Tableau::default();
            let inner = abstract_path(m, body, &mut tab, &mut |m, g| eval_state(m, g))?;
            let bot = tab.falsum();
            let negated = tab.implies(inner, bot);
            tab.exists(m, negated)?.complement()
        }
        _ => return Err(CheckError::PathFormula(f.to_string())),
    })
}

/// States from which some path satisfies `path`. State subformulas must be
/// Boolean combinations of variables.
pub fn exists_path_states(m: &KripkeModel, path: &Formula) -> Result<StateSet, CheckError> {
    if f_has_quantifier(path) {
        return Err(CheckError::Unlabeled(first_quantified(path).to_string()));
    }
    let mut tab = Tableau::default();
    let root = abstract_path(m, path, &mut tab, &mut |m, g| eval_state(m, g))?;
    tab.exists(m, root)
}

/// Whether some infinite path from `s` satisfies `path`.
pub fn exists_path_check(m: &KripkeModel, s: usize, path: &Formula) -> Result<bool, CheckError> {
    if s >= m.len() {
        return Err(CheckError::StateOutOfRange {
            state: s,
            states: m.len(),
        });
    }
    Ok(exists_path_states(m, path)?.contains(s))
}

fn f_has_quantifier(f: &Formula) -> bool {
    f.has_path_quantifier() || f.has_coalition()
}

fn first_quantified(f: &Formula) -> &Formula {
    match f {
        Formula::ForAllPaths(_) | Formula::Coalition(..) => f,
        Formula::Implies(a, b) | Formula::Until(a, b) => {
            if f_has_quantifier(a) {
                first_quantified(a)
            } else {
                first_quantified(b)
            }
        }
        Formula::Next(a) | Formula::Always(a) => first_quantified(a),
        _ => f,
    }
}

/// Replaces maximal state subformulas of a path formula by atoms.
fn abstract_path(
    m: &KripkeModel,
    f: &Formula,
    tab: &mut Tableau,
    label: &mut dyn FnMut(&KripkeModel, &Formula) -> Result<StateSet, CheckError>,
) -> Result<usize, CheckError> {
    if f.is_state() {
        if let Formula::Falsum = f {
            return Ok(tab.falsum());
        }
        let set = label(m, f)?;
        return Ok(tab.atom(set));
    }
    Ok(match f {
        Formula::Implies(a, b) => {
            let a = abstract_path(m, a, tab, label)?;
            let b = abstract_path(m, b, tab, label)?;
            tab.implies(a, b)
        }
        Formula::Next(a) => {
            let a = abstract_path(m, a, tab, label)?;
            tab.next(a)
        }
        Formula::Until(a, b) => {
            let a = abstract_path(m, a, tab, label)?;
            let b = abstract_path(m, b, tab, label)?;
            tab.until(a, b)
        }
        // □a = ¬(⊤ U ¬a)
        Formula::Always(a) => {
            let a = abstract_path(m, a, tab, label)?;
            let bot = tab.falsum();
            let top = tab.implies(bot, bot);
            let not_a = tab.implies(a, bot);
            let ev = tab.until(top, not_a);
            tab.implies(ev, bot)
        }
        _ => unreachable!("state formulas handled above"),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Atom(usize),
    Falsum,
    Implies(usize, usize),
    // (bit, operand)
    Next(usize, usize),
    // (bit, left, right)
    Until(usize, usize, usize),
}

/// Hash-consed path formula over atoms; children always precede parents.
#[derive(Default)]
pub(crate) struct Tableau {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
    atoms: Vec<StateSet>,
    bits: usize,
    untils: Vec<usize>,
}

impl Tableau {
    fn intern(&mut self, node: Node) -> usize {
        if let Some(&i) = self.index.get(&node) {
            return i;
        }
        self.nodes.push(node);
        self.index.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn falsum(&mut self) -> usize {
        self.intern(Node::Falsum)
    }

    fn atom(&mut self, set: StateSet) -> usize {
        let id = match self.atoms.iter().position(|a| *a == set) {
            Some(i) => i,
            None => {
                self.atoms.push(set);
                self.atoms.len() - 1
            }
        };
        self.intern(Node::Atom(id))
    }

    fn implies(&mut self, a: usize, b: usize) -> usize {
        self.intern(Node::Implies(a, b))
    }

    fn temporal(&mut self, make: impl Fn(usize) -> Node, probe: Node) -> usize {
        // the bit is irrelevant for lookup, so probe with a sentinel first
        if let Some(i) = self.nodes.iter().position(|n| same_shape(n, &probe)) {
            return i;
        }
        let bit = self.bits;
        self.bits += 1;
        self.intern(make(bit))
    }

    fn next(&mut self, a: usize) -> usize {
        self.temporal(|bit| Node::Next(bit, a), Node::Next(usize::MAX, a))
    }

    fn until(&mut self, a: usize, b: usize) -> usize {
        let i = self.temporal(|bit| Node::Until(bit, a, b), Node::Until(usize::MAX, a, b));
        if !self.untils.contains(&i) {
            self.untils.push(i);
        }
        i
    }

    /// Truth of every node at model state `s` under the obligation vector
    /// `k`: bit i holds the truth of `X g` for a next node, and of
    /// `X(g U h)` for an until node.
    fn evaluate(&self, s: usize, k: u64, vals: &mut Vec<bool>) {
        vals.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Atom(a) => self.atoms[a].contains(s),
                Node::Falsum => false,
                Node::Implies(a, b) => !vals[a] || vals[b],
                Node::Next(bit, _) => k >> bit & 1 == 1,
                Node::Until(bit, g, h) => vals[h] || (vals[g] && k >> bit & 1 == 1),
            };
            vals.push(v);
        }
    }

    /// The obligation vector a predecessor must carry to step here.
    fn signature(&self, vals: &[bool]) -> u64 {
        let mut sig = 0u64;
        for (i, node) in self.nodes.iter().enumerate() {
            match *node {
                Node::Next(bit, g) if vals[g] => sig |= 1 << bit,
                Node::Until(bit, _, _) if vals[i] => sig |= 1 << bit,
                _ => {}
            }
        }
        sig
    }

    fn fair_mask(&self, vals: &[bool]) -> u64 {
        let mut mask = 0u64;
        for (j, &u) in self.untils.iter().enumerate() {
            if let Node::Until(_, _, h) = self.nodes[u] {
                if !vals[u] || vals[h] {
                    mask |= 1 << j;
                }
            }
        }
        mask
    }

    /// States with a path satisfying node `root`.
    fn exists(&self, m: &KripkeModel, root: usize) -> Result<StateSet, CheckError> {
        if self.bits > MAX_TEMPORAL_SUBFORMULAS {
            return Err(CheckError::TooManyTemporal(self.bits));
        }
        let n = m.len();
        let width = 1u64 << self.bits;
        let all_fair = if self.untils.is_empty() {
            0
        } else {
            (1u64 << self.untils.len()) - 1
        };

        // product nodes: every (state, obligation vector) pair
        let mut graph: DiGraph<(), ()> = DiGraph::new();
        let mut info: Vec<(usize, bool, u64)> = Vec::new(); // state, root truth, fairness
        let mut by_sig: Vec<HashMap<u64, Vec<NodeIndex>>> = vec![HashMap::new(); n];
        let mut vals = Vec::with_capacity(self.nodes.len());
        for (s, sigs) in by_sig.iter_mut().enumerate() {
            for k in 0..width {
                self.evaluate(s, k, &mut vals);
                let id = graph.add_node(());
                info.push((s, vals[root], self.fair_mask(&vals)));
                sigs.entry(self.signature(&vals)).or_default().push(id);
            }
        }
        for id in graph.node_indices().collect::<Vec<_>>() {
            let s = info[id.index()].0;
            let k = (id.index() % width as usize) as u64;
            for &t in m.successors(s) {
                if let Some(targets) = by_sig[t].get(&k) {
                    for &target in targets {
                        graph.add_edge(id, target, ());
                    }
                }
            }
        }

        // fair non-trivial components, then everything that reaches them
        let mut good = vec![false; graph.node_count()];
        let mut stack = Vec::new();
        for scc in tarjan_scc(&graph) {
            let nontrivial = scc.len() > 1 || graph.find_edge(scc[0], scc[0]).is_some();
            if !nontrivial {
                continue;
            }
            let covered = scc.iter().fold(0u64, |acc, id| acc | info[id.index()].2);
            if covered & all_fair == all_fair {
                for id in scc {
                    good[id.index()] = true;
                    stack.push(id);
                }
            }
        }
        while let Some(id) = stack.pop() {
            for p in graph.neighbors_directed(id, Direction::Incoming) {
                if !good[p.index()] {
                    good[p.index()] = true;
                    stack.push(p);
                }
            }
        }
        let mut out = StateSet::empty(n);
        for (i, &(s, holds, _)) in info.iter().enumerate() {
            if holds && good[i] {
                out.insert(s);
            }
        }
        Ok(out)
    }
}

fn same_shape(a: &Node, b: &Node) -> bool {
    match (a, b) {
        (Node::Next(_, x), Node::Next(_, y)) => x == y,
        (Node::Until(_, x1, x2), Node::Until(_, y1, y2)) => x1 == y1 && x2 == y2,
        _ => false,
    }
}
