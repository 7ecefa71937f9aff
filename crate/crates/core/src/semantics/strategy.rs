//! Strategies and their verification by execution-graph analysis.
//!
//! Executions move between classes: from `X` with `σ(X) = d` to any class
//! `Y` such that some state of `X` has a `d`-successor in `Y`. On a finite
//! quotient every execution from `[s]_G` is finite exactly when no cycle
//! through domain classes is reachable, and the leaves of complete
//! executions are the reachable classes outside the domain.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::actions::{relation_executable_on, transition, JointAction};
use crate::formula::Group;
use crate::model::{EquivClass, Model, Quotient};
use crate::states::{StateId, StateSet};

use super::CheckError;

/// A uniform partial map from classes of `group` to joint actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub group: Group,
    pub assignment: BTreeMap<EquivClass, JointAction>,
}

/// On-disk strategy document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub group: Vec<usize>,
    pub map: Vec<StrategyEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyEntry {
    /// Lexicographically least state name of the class.
    pub class_rep: String,
    pub action: Vec<String>,
}

impl Strategy {
    pub fn empty(group: Group) -> Self {
        Strategy {
            group,
            assignment: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn to_doc(&self, m: &Model) -> StrategyDoc {
        StrategyDoc {
            group: self.group.members().map(|a| a.0).collect(),
            map: self
                .assignment
                .iter()
                .map(|(class, action)| StrategyEntry {
                    class_rep: m.representative(&class.states).unwrap_or_default().to_string(),
                    action: action.names(m).into_iter().map(String::from).collect(),
                })
                .collect(),
        }
    }

    /// Resolves a document against `m`. Only names are checked here;
    /// availability and executability are checked by [`verify_strategy`].
    pub fn from_doc(m: &Model, doc: &StrategyDoc) -> Result<Strategy, CheckError> {
        let group = Group::from_indices(doc.group.iter().copied());
        if !m.group_in_range(&group) {
            return Err(CheckError::AgentOutOfRange(group));
        }
        let mut strategy = Strategy::empty(group.clone());
        for entry in &doc.map {
            let s = m
                .state_id(&entry.class_rep)
                .ok_or_else(|| CheckError::UnknownState(entry.class_rep.clone()))?;
            let action = JointAction::from_names(m, &entry.action).map_err(CheckError::UnknownAction)?;
            if strategy.assignment.insert(m.class_of(&group, s), action).is_some() {
                return Err(CheckError::DuplicateAssignment(entry.class_rep.clone()));
            }
        }
        Ok(strategy)
    }

    pub fn to_json(&self, m: &Model) -> String {
        serde_json::to_string_pretty(&self.to_doc(m)).expect("strategy documents always serialize")
    }
}

/// Outcome of running a strategy from a start class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyVerdict {
    pub terminating: bool,
    /// Reachable classes outside the domain: the leaves of complete executions.
    pub leaves: BTreeSet<EquivClass>,
    /// Reachable classes inside the domain.
    pub inners: BTreeSet<EquivClass>,
    /// Some leaf not contained in the goal.
    pub bad_leaf: Option<EquivClass>,
    /// Classes along a reachable cycle, when there is one.
    pub cycle_witness: Option<Vec<EquivClass>>,
}

impl StrategyVerdict {
    pub fn success(&self) -> bool {
        self.terminating && self.bad_leaf.is_none()
    }
}

/// Index-level result of exploring the execution graph.
pub(crate) struct Exploration {
    pub reachable: Vec<usize>,
    pub cycle: Option<Vec<usize>>,
}

/// Explores classes reachable from `start`, where `succ[c]` is `Some` for
/// domain classes. Returns reachable classes in discovery order and one
/// cycle if any is reachable.
pub(crate) fn explore(start: usize, succ: &[Option<&[usize]>]) -> Exploration {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; succ.len()];
    let mut reachable = vec![start];
    let mut cycle = None;
    let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
    mark[start] = Mark::Open;
    while let Some(top) = stack.last_mut() {
        let (c, next) = *top;
        let edges = succ[c].unwrap_or(&[]);
        if next == edges.len() {
            mark[c] = Mark::Done;
            stack.pop();
            continue;
        }
        top.1 += 1;
        let y = edges[next];
        match mark[y] {
            Mark::New => {
                mark[y] = Mark::Open;
                reachable.push(y);
                stack.push((y, 0));
            }
            Mark::Open if cycle.is_none() => {
                let from = stack
                    .iter()
                    .position(|&(n, _)| n == y)
                    .expect("open nodes are on the stack");
                cycle = Some(stack[from..].iter().map(|&(n, _)| n).collect());
            }
            _ => {}
        }
    }
    Exploration { reachable, cycle }
}

/// Outcome for an index-level assignment; shared with the brute-force oracle.
pub(crate) fn verdict_from(
    quotient: &Quotient,
    start: usize,
    succ: &[Option<&[usize]>],
    goal: &StateSet,
) -> StrategyVerdict {
    let ex = explore(start, succ);
    let mut leaves = BTreeSet::new();
    let mut inners = BTreeSet::new();
    for &c in &ex.reachable {
        if succ[c].is_some() {
            inners.insert(quotient.class(c));
        } else {
            leaves.insert(quotient.class(c));
        }
    }
    let bad_leaf = leaves.iter().find(|l| !l.states.is_subset(goal)).cloned();
    StrategyVerdict {
        terminating: ex.cycle.is_none(),
        leaves,
        inners,
        bad_leaf,
        cycle_witness: ex.cycle.map(|cyc| cyc.into_iter().map(|c| quotient.class(c)).collect()),
    }
}

/// Runs `strategy` from `[s]_g` and checks termination and the goal at leaves.
pub fn verify_strategy(
    m: &Model,
    g: &Group,
    strategy: &Strategy,
    s: StateId,
    goal: &StateSet,
) -> Result<StrategyVerdict, CheckError> {
    if !m.group_in_range(g) {
        return Err(CheckError::AgentOutOfRange(g.clone()));
    }
    if strategy.group != *g {
        return Err(CheckError::WrongGroup {
            expected: g.clone(),
            found: strategy.group.clone(),
        });
    }
    let quotient = m.quotient(g);
    let mut succ: Vec<Option<Vec<usize>>> = vec![None; quotient.len()];
    for (class, action) in &strategy.assignment {
        let c = quotient
            .find(&class.states)
            .filter(|_| class.group == *g)
            .ok_or_else(|| CheckError::NotAClass(m.format_set(&class.states)))?;
        if !action.available_to(m, g) {
            return Err(CheckError::NotAvailable {
                action: action.display(m).to_string(),
                group: g.clone(),
            });
        }
        let rel = transition(m, action);
        if !relation_executable_on(&rel, &class.states) {
            return Err(CheckError::NotExecutable {
                action: action.display(m).to_string(),
                class: m.format_set(&class.states),
            });
        }
        let ys: BTreeSet<usize> = rel.image(&class.states).iter().map(|t| quotient.index_of(t)).collect();
        succ[c] = Some(ys.into_iter().collect());
    }
    let view: Vec<Option<&[usize]>> = succ.iter().map(|o| o.as_deref()).collect();
    Ok(verdict_from(&quotient, quotient.index_of(s), &view, goal))
}
