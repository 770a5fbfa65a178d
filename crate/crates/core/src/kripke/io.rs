use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{KripkeModel, ModelError};
use crate::StateSet;

#[derive(Serialize, Deserialize)]
struct KripkeFile {
    states: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    val: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    designated: Option<usize>,
}

pub(crate) fn parse_var_key(key: &str) -> Result<u32, ModelError> {
    let digits = key.strip_prefix('p').unwrap_or(key);
    match digits.parse::<u32>() {
        Ok(0) => Err(ModelError::ZeroVariable),
        Ok(v) => Ok(v),
        Err(_) => Err(ModelError::Format(format!("bad variable key `{key}`"))),
    }
}

pub(crate) fn valuation_json(val: &BTreeMap<u32, StateSet>) -> BTreeMap<String, Vec<usize>> {
    val.iter().map(|(v, set)| (v.to_string(), set.to_vec())).collect()
}

impl KripkeModel {
    /// JSON `{"states","edges","val"}` with optional `names` and `designated`.
    pub fn to_json(&self, designated: Option<usize>) -> String {
        let file = KripkeFile {
            states: self.len(),
            edges: self.edges().map(|(a, b)| [a, b]).collect(),
            val: valuation_json(&self.valuation),
            names: self.names.clone(),
            designated,
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    /// Parses the JSON format and checks seriality.
    pub fn from_json(text: &str) -> Result<(KripkeModel, Option<usize>), ModelError> {
        let file: KripkeFile = serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
        let mut val = Vec::new();
        for (key, states) in file.val {
            val.push((parse_var_key(&key)?, states));
        }
        let mut model = KripkeModel::new(file.states, file.edges.into_iter().map(|[a, b]| (a, b)), val)?;
        if let Some(names) = file.names {
            model = model.with_names(names)?;
        }
        if let Err(v) = model.validate() {
            return Err(ModelError::NotSerial(v.non_serial));
        }
        if let Some(d) = file.designated {
            if d >= model.len() {
                return Err(ModelError::StateOutOfRange {
                    state: d,
                    states: model.len(),
                });
            }
        }
        Ok((model, file.designated))
    }

    /// Graphviz rendering; nodes list their true variables.
    pub fn to_dot(&self, designated: Option<usize>) -> String {
        let mut out = String::from("digraph kripke {\n  node [shape=circle];\n");
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
        for (a, b) in self.edges() {
            let _ = writeln!(out, "  s{a} -> s{b};");
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let m = KripkeModel::new(2, [(0, 1), (1, 1), (0, 0)], [(1, vec![0]), (3, vec![0, 1])])
            .unwrap()
            .with_names(vec!["r".into(), "b".into()])
            .unwrap();
        let text = m.to_json(Some(1));
        let (back, d) = KripkeModel::from_json(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(d, Some(1));
    }

    #[test]
    fn json_rejects_non_serial() {
        let text = r#"{"states": 2, "edges": [[0, 1]], "val": {}}"#;
        assert_eq!(KripkeModel::from_json(text), Err(ModelError::NotSerial(vec![1])));
        let text = r#"{"states": 1, "edges": [[0, 0]], "val": {"x": [0]}}"#;
        assert!(matches!(KripkeModel::from_json(text), Err(ModelError::Format(_))));
    }

    #[test]
    fn dot_marks_designated() {
        let m = KripkeModel::new(1, [(0, 0)], [(1, vec![0])]).unwrap();
        let dot = m.to_dot(Some(0));
        assert!(dot.contains("doublecircle"));
        assert!(dot.contains("p1"));
        assert!(dot.contains("s0 -> s0"));
    }
}
