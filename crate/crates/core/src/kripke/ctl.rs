use super::{CheckError, KripkeModel};
use crate::syntax::is_ctl;
use crate::{Formula, StateSet};

/// Global CTL model checking by bottom-up labeling.
pub fn mc_ctl(m: &KripkeModel, f: &Formula) -> Result<StateSet, CheckError> {
    if f.has_coalition() {
        return Err(CheckError::Coalition(f.to_string()));
    }
    if !is_ctl(f) {
        return Err(CheckError::NotCtl(f.to_string()));
    }
    let pred = m.predecessors();
    Ok(Labeler { m, pred: &pred }.eval(f))
}

struct Labeler<'a> {
    m: &'a KripkeModel,
    pred: &'a [Vec<usize>],
}

impl Labeler<'_> {
    fn eval(&self, f: &Formula) -> StateSet {
        match f {
            Formula::Var(i) => self.m.holds(*i),
            Formula::Falsum => StateSet::empty(self.m.len()),
            Formula::Implies(a, b) => self.eval(a).implies(&self.eval(b)),
            Formula::ForAllPaths(body) => match &**body {
                Formula::Next(a) => self.all_next(&self.eval(a)),
                Formula::Until(a, b) => self.all_until(&self.eval(a), &self.eval(b)),
                Formula::Implies(u, _) => match &**u {
                    Formula::Until(a, b) => self.exists_until(&self.eval(a), &self.eval(b)).complement(),
                    _ => unreachable!("checked by is_ctl"),
                },
                _ => unreachable!("checked by is_ctl"),
            },
            _ => unreachable!("checked by is_ctl"),
        }
    }

    fn all_next(&self, target: &StateSet) -> StateSet {
        StateSet::from_states(
            self.m.len(),
            (0..self.m.len()).filter(|&s| self.m.successors(s).iter().all(|&t| target.contains(t))),
        )
    }

    // Backward search from the goal through states satisfying the left side.
    fn exists_until(&self, left: &StateSet, right: &StateSet) -> StateSet {
        let mut result = right.clone();
        let mut stack: Vec<usize> = right.iter().collect();
        while let Some(t) = stack.pop() {
            for &s in &self.pred[t] {
                if !result.contains(s) && left.contains(s) {
                    result.insert(s);
                    stack.push(s);
                }
            }
        }
        result
    }

    // Least fixpoint of Z = right ∪ (left ∩ AX Z), counting the successors
    // of each state still outside Z.
    fn all_until(&self, left: &StateSet, right: &StateSet) -> StateSet {
        let n = self.m.len();
        let mut pending: Vec<usize> = (0..n).map(|s| self.m.successors(s).len()).collect();
        let mut result = right.clone();
        let mut stack: Vec<usize> = right.iter().collect();
        while let Some(t) = stack.pop() {
            for &s in &self.pred[t] {
                pending[s] -= 1;
                if pending[s] == 0 && !result.contains(s) && left.contains(s) {
                    result.insert(s);
                    stack.push(s);
                }
            }
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::derived::*;

    fn no_val() -> Vec<(u32, Vec<usize>)> {
        Vec::new()
    }

    #[test]
    fn self_loop_always() {
        let m = KripkeModel::new(1, [(0, 0)], [(1, vec![0])]).unwrap();
        assert_eq!(mc_ctl(&m, &ag(Formula::var(1))).unwrap().to_vec(), vec![0]);
    }

    #[test]
    fn two_cycle_eventually() {
        let m = KripkeModel::new(2, [(0, 1), (1, 0)], [(1, vec![0])]).unwrap();
        assert_eq!(mc_ctl(&m, &ef(Formula::var(1))).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(mc_ctl(&m, &af(Formula::var(1))).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(mc_ctl(&m, &ax(Formula::var(1))).unwrap().to_vec(), vec![1]);
    }

    #[test]
    fn all_until_needs_every_branch() {
        // 0 -> {1, 2}, 1 loops with p1, 2 loops without
        let m = KripkeModel::new(3, [(0, 1), (0, 2), (1, 1), (2, 2)], [(1, vec![1])]).unwrap();
        assert_eq!(mc_ctl(&m, &af(Formula::var(1))).unwrap().to_vec(), vec![1]);
        assert_eq!(mc_ctl(&m, &ef(Formula::var(1))).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(
            mc_ctl(&m, &eg(not(Formula::var(1)))).unwrap().to_vec(),
            vec![0, 2]
        );
    }

    #[test]
    fn rejects_non_ctl() {
        let m = KripkeModel::new(1, [(0, 0)], no_val()).unwrap();
        let f = Formula::for_all(Formula::implies(Formula::next(Formula::var(1)), Formula::var(2)));
        assert!(matches!(mc_ctl(&m, &f), Err(CheckError::NotCtl(_))));
    }
}
