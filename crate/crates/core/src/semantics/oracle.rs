//! Brute-force know-how: try every strategy.
//!
//! Independent of the fixpoint in `kh`: it recomputes joint actions,
//! transitions and class successors from the model, enumerates every
//! partial assignment of executable actions to classes, and accepts when
//! one of them passes execution-graph verification.

use crate::actions::{canonical_actions, relation_executable_on, transition, ActionLimits};
use crate::formula::{Formula, Group};
use crate::model::Model;
use crate::states::{StateId, StateSet};

use super::strategy::verdict_from;
use super::{CheckError, Evaluate, ModelChecker};

/// Size limits under which exhaustive enumeration stays cheap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleGuard {
    pub max_classes: usize,
    pub max_actions: usize,
}

impl Default for OracleGuard {
    fn default() -> Self {
        OracleGuard {
            max_classes: 6,
            max_actions: 8,
        }
    }
}

impl OracleGuard {
    /// Whether `(m, g)` is small enough for the oracle.
    pub fn admits(&self, m: &Model, g: &Group) -> bool {
        m.group_in_range(g)
            && m.quotient(g).len() <= self.max_classes
            && canonical_actions(
                m,
                g,
                ActionLimits {
                    max_actions: self.max_actions,
                },
            )
            .is_ok_and(|a| a.len() <= self.max_actions)
    }
}

/// Whether some strategy of `g` witnesses `Kh_g goal` at `s`.
pub fn kh_bruteforce_goal(m: &Model, s: StateId, g: &Group, goal: &StateSet) -> Result<bool, CheckError> {
    kh_bruteforce_guarded(m, s, g, goal, OracleGuard::default())
}

/// [`kh_bruteforce_goal`] under a caller-chosen guard. Enumeration is over
/// executable actions only, so sparse models stay cheap past the default.
pub fn kh_bruteforce_guarded(
    m: &Model,
    s: StateId,
    g: &Group,
    goal: &StateSet,
    guard: OracleGuard,
) -> Result<bool, CheckError> {
    if !m.group_in_range(g) {
        return Err(CheckError::AgentOutOfRange(g.clone()));
    }
    let quotient = m.quotient(g);
    let over = |actions| CheckError::OracleGuard {
        classes: quotient.len(),
        actions,
    };
    let actions = canonical_actions(
        m,
        g,
        ActionLimits {
            max_actions: guard.max_actions,
        },
    )
    .map_err(|_| over(guard.max_actions + 1))?;
    if quotient.len() > guard.max_classes {
        return Err(over(actions.len()));
    }

    // options[c]: successor lists of the actions executable on class c
    let mut options: Vec<Vec<Vec<usize>>> = vec![Vec::new(); quotient.len()];
    for j in &actions {
        let rel = transition(m, j);
        for (c, x) in quotient.classes.iter().enumerate() {
            if relation_executable_on(&rel, x) {
                let mut ys: Vec<usize> = rel.image(x).iter().map(|t| quotient.index_of(t)).collect();
                ys.sort();
                ys.dedup();
                options[c].push(ys);
            }
        }
    }

    let start = quotient.index_of(s);
    // choice[c] == 0 leaves c unassigned, k > 0 picks options[c][k - 1]
    let mut choice = vec![0usize; quotient.len()];
    loop {
        let succ: Vec<Option<&[usize]>> = choice
            .iter()
            .enumerate()
            .map(|(c, &k)| (k > 0).then(|| options[c][k - 1].as_slice()))
            .collect();
        if verdict_from(&quotient, start, &succ, goal).success() {
            return Ok(true);
        }
        // odometer increment
        let mut c = 0;
        loop {
            if c == choice.len() {
                return Ok(false);
            }
            choice[c] += 1;
            if choice[c] <= options[c].len() {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
    }
}

/// `Kh_g f` at `s` by strategy enumeration. The goal `[[f]]` itself is
/// computed by the regular evaluator.
pub fn kh_bruteforce(m: &Model, s: StateId, g: &Group, f: &Formula) -> Result<bool, CheckError> {
    let goal = ModelChecker::new(m).eval(f)?;
    kh_bruteforce_goal(m, s, g, &goal)
}
