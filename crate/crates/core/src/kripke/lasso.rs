//! Brute-force oracle for path formulas: enumerates ultimately periodic
//! paths `u v^ω` and evaluates the formula on each one directly.

use super::{CheckError, KripkeModel};
use crate::Formula;

/// Whether some lasso of total length at most `max_len` starting at `s`
/// satisfies `path`. State subformulas must be quantifier-free.
pub fn lasso_exists(m: &KripkeModel, s: usize, path: &Formula, max_len: usize) -> Result<bool, CheckError> {
    if path.has_path_quantifier() || path.has_coalition() {
        return Err(CheckError::Unlabeled(path.to_string()));
    }
    let mut prefix = vec![s];
    Ok(search(m, path, &mut prefix, max_len))
}

fn search(m: &KripkeModel, f: &Formula, prefix: &mut Vec<usize>, max_len: usize) -> bool {
    let last = *prefix.last().expect("non-empty");
    // close the loop back to any earlier position
    for (j, &x) in prefix.iter().enumerate() {
        if m.successors(last).contains(&x) && holds_on_lasso(m, f, prefix, j) {
            return true;
        }
    }
    if prefix.len() == max_len {
        return false;
    }
    for &t in m.successors(last) {
        prefix.push(t);
        let found = search(m, f, prefix, max_len);
        prefix.pop();
        if found {
            return true;
        }
    }
    false
}

/// Truth of `f` at position 0 of `states[..loop_start] (states[loop_start..])^ω`.
pub fn holds_on_lasso(m: &KripkeModel, f: &Formula, states: &[usize], loop_start: usize) -> bool {
    eval(m, f, states, loop_start)[0]
}

fn eval(m: &KripkeModel, f: &Formula, states: &[usize], loop_start: usize) -> Vec<bool> {
    let len = states.len();
    let next = |i: usize| if i + 1 < len { i + 1 } else { loop_start };
    match f {
        Formula::Var(v) => {
            let set = m.holds(*v);
            states.iter().map(|&s| set.contains(s)).collect()
        }
        Formula::Falsum => vec![false; len],
        Formula::Implies(a, b) => {
            let a = eval(m, a, states, loop_start);
            let b = eval(m, b, states, loop_start);
            a.iter().zip(&b).map(|(x, y)| !x || *y).collect()
        }
        Formula::Next(a) => {
            let a = eval(m, a, states, loop_start);
            (0..len).map(|i| a[next(i)]).collect()
        }
        Formula::Until(a, b) => {
            let a = eval(m, a, states, loop_start);
            let b = eval(m, b, states, loop_start);
            // walk forward at most `len` steps; positions repeat after that
            (0..len)
                .map(|i| {
                    let mut j = i;
                    for _ in 0..=len {
                        if b[j] {
                            return true;
                        }
                        if !a[j] {
                            return false;
                        }
                        j = next(j);
                    }
                    false
                })
                .collect()
        }
        Formula::Always(a) => {
            let a = eval(m, a, states, loop_start);
            (0..len)
                .map(|i| {
                    let mut j = i;
                    for _ in 0..=len {
                        if !a[j] {
                            return false;
                        }
                        j = next(j);
                    }
                    true
                })
                .collect()
        }
        Formula::ForAllPaths(_) | Formula::Coalition(..) => {
            unreachable!("quantifiers rejected by lasso_exists")
        }
    }
}
