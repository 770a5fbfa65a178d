use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{CgsError, ConcurrentGameModel};
use crate::kripke::io::{parse_var_key, valuation_json};
use crate::{AgentSet, StateSet};

#[derive(Serialize, Deserialize)]
struct CgsFile {
    agents: u32,
    states: usize,
    actions: Vec<String>,
    available: BTreeMap<String, Vec<String>>,
    delta: BTreeMap<String, usize>,
    #[serde(default)]
    val: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    designated: Option<usize>,
}

fn format_err(msg: impl Into<String>) -> CgsError {
    CgsError::Format(msg.into())
}

impl ConcurrentGameModel {
    /// JSON with `"available"` keyed by `"agent,state"` and `"delta"` keyed
    /// by `"state|act1,act2,..."`.
    pub fn to_json(&self, designated: Option<usize>) -> String {
        let mut available = BTreeMap::new();
        let mut delta = BTreeMap::new();
        for s in 0..self.len() {
            for agent in self.agents.iter() {
                let names = self
                    .available(agent, s)
                    .iter()
                    .map(|&a| self.actions[a].clone())
                    .collect();
                available.insert(format!("{agent},{s}"), names);
            }
            for p in 0..self.profile_count(s) {
                let profile: Vec<&str> = self
                    .profile_actions(s, p)
                    .iter()
                    .map(|&a| self.actions[a].as_str())
                    .collect();
                delta.insert(format!("{s}|{}", profile.join(",")), self.delta(s, p));
            }
        }
        let file = CgsFile {
            agents: self.agents.count(),
            states: self.len(),
            actions: self.actions.clone(),
            available,
            delta,
            val: valuation_json(&self.valuation),
            names: self.names.clone(),
            designated,
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<(ConcurrentGameModel, Option<usize>), CgsError> {
        let file: CgsFile = serde_json::from_str(text).map_err(|e| format_err(e.to_string()))?;
        let agents = AgentSet::new(file.agents).map_err(|e| format_err(e.to_string()))?;
        if file.states == 0 {
            return Err(CgsError::Empty);
        }
        let id = |name: &str| {
            file.actions
                .iter()
                .position(|a| a == name)
                .ok_or_else(|| CgsError::UnknownAction(name.to_string()))
        };
        let mut available = vec![vec![Vec::new(); agents.count() as usize]; file.states];
        for (key, names) in &file.available {
            let (a, s) = key
                .split_once(',')
                .ok_or_else(|| format_err(format!("bad available key `{key}`")))?;
            let agent: u32 = a
                .trim()
                .parse()
                .map_err(|_| format_err(format!("bad agent in `{key}`")))?;
            let state: usize = s
                .trim()
                .parse()
                .map_err(|_| format_err(format!("bad state in `{key}`")))?;
            if !agents.contains(agent) {
                return Err(CgsError::AgentOutOfRange {
                    agent,
                    count: agents.count(),
                });
            }
            if state >= file.states {
                return Err(CgsError::StateOutOfRange {
                    state,
                    states: file.states,
                });
            }
            for n in names {
                available[state][agent as usize - 1].push(id(n)?);
            }
        }
        let mut table: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        for (key, &target) in &file.delta {
            let (s, profile) = key
                .split_once('|')
                .ok_or_else(|| format_err(format!("bad delta key `{key}`")))?;
            let state: usize = s
                .trim()
                .parse()
                .map_err(|_| format_err(format!("bad state in `{key}`")))?;
            let acts = profile
                .split(',')
                .map(|a| id(a.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            table.insert((state, acts), target);
        }
        let mut missing = None;
        let mut val = BTreeMap::new();
        for (key, states) in &file.val {
            let v = parse_var_key(key).map_err(|e| format_err(e.to_string()))?;
            if let Some(&bad) = states.iter().find(|&&s| s >= file.states) {
                return Err(CgsError::StateOutOfRange {
                    state: bad,
                    states: file.states,
                });
            }
            val.insert(v, StateSet::from_states(file.states, states.iter().copied()));
        }
        let actions = file.actions.clone();
        let model = ConcurrentGameModel::new(
            agents,
            file.actions,
            available,
            |s, profile| match table.get(&(s, profile.to_vec())) {
                Some(&t) => t,
                None => {
                    if missing.is_none() {
                        let names: Vec<&str> = profile.iter().map(|&a| actions[a].as_str()).collect();
                        missing = Some((s, names.join(",")));
                    }
                    0
                }
            },
            val,
        )?;
        if let Some((state, profile)) = missing {
            return Err(CgsError::MissingTransition { state, profile });
        }
        let model = match file.names {
            Some(names) => model.with_names(names)?,
            None => model,
        };
        if let Some(d) = file.designated {
            if d >= model.len() {
                return Err(CgsError::StateOutOfRange {
                    state: d,
                    states: model.len(),
                });
            }
        }
        Ok((model, file.designated))
    }

    /// Graphviz rendering of the induced successor graph.
    pub fn to_dot(&self, designated: Option<usize>) -> String {
        let mut out = String::from("digraph cgs {\n  node [shape=circle];\n");
        for s in 0..self.len() {
            let props: Vec<String> = self.label(s).iter().map(|v| format!("p{v}")).collect();
            let shape = if designated == Some(s) {
                ", shape=doublecircle"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  s{s} [label=\"{}\\n{}\"{shape}];",
                self.state_name(s),
                props.join(",")
            );
        }
        for s in 0..self.len() {
            for t in self.successors(s) {
                let _ = writeln!(out, "  s{s} -> s{t};");
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cgs::tests::xor_model;

    #[test]
    fn json_round_trip() {
        let m = xor_model();
        let text = m.to_json(Some(0));
        let (back, d) = ConcurrentGameModel::from_json(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(d, Some(0));
    }

    #[test]
    fn missing_transition_is_reported() {
        let text = r#"{"agents": 1, "states": 1, "actions": ["a", "b"],
            "available": {"1,0": ["a", "b"]}, "delta": {"0|a": 0}, "val": {}}"#;
        assert!(matches!(
            ConcurrentGameModel::from_json(text),
            Err(CgsError::MissingTransition { .. })
        ));
    }

    #[test]
    fn dot_lists_edges() {
        let dot = xor_model().to_dot(None);
        assert!(dot.contains("s0 -> s1"));
        assert!(!dot.contains("doublecircle"));
    }
}
