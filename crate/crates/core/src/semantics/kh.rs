//! Know-how as a least fixpoint on the quotient.
//!
//! Rank 0 classes lie inside the goal. A class gets rank `r + 1` when some
//! joint action is executable on it and every class it can reach in one
//! step already has rank at most `r`. Choosing that action at every ranked
//! class gives a strategy whose executions strictly decrease in rank, so
//! they terminate, and they can only stop at rank 0 classes.
//!
//! Conversely, a witnessing strategy on a finite model can never revisit a
//! class in its domain (that would pump an infinite execution), so the
//! classes it visits are well-founded and each one is ranked by induction.

use std::collections::{BTreeMap, BTreeSet};

use crate::actions::{canonical_actions, relation_executable_on, transition, ActionLimits, CapExceeded, JointAction};
use crate::formula::{Formula, Group};
use crate::model::{EquivClass, Model, Quotient};
use crate::states::{StateId, StateSet};

use super::{CheckError, Evaluate, ModelChecker, Strategy};

/// Per-group data shared by every `Kh_G` subformula.
#[derive(Debug)]
pub(crate) struct GroupContext {
    pub quotient: Quotient,
    /// Joint actions with a nonempty transition, in tie-break order.
    pub actions: Vec<JointAction>,
    /// `moves[class][k]`: successor classes of `actions[k]` from `class`, or
    /// `None` when the action is not executable there.
    pub moves: Vec<Vec<Option<Vec<usize>>>>,
}

pub(crate) struct Solution {
    pub rank: Vec<Option<usize>>,
    /// Index into `GroupContext::actions`, for ranked classes above 0.
    pub choice: Vec<Option<usize>>,
}

impl GroupContext {
    pub fn build(m: &Model, g: &Group, limits: ActionLimits) -> Result<Self, CapExceeded> {
        let quotient = m.quotient(g);
        let mut actions = Vec::new();
        let mut columns = Vec::new();
        for j in canonical_actions(m, g, limits)? {
            let rel = transition(m, &j);
            if rel.is_empty() {
                continue;
            }
            let column: Vec<Option<Vec<usize>>> = quotient
                .classes
                .iter()
                .map(|x| {
                    relation_executable_on(&rel, x).then(|| {
                        let succ: BTreeSet<usize> = rel.image(x).iter().map(|t| quotient.index_of(t)).collect();
                        succ.into_iter().collect()
                    })
                })
                .collect();
            actions.push(j);
            columns.push(column);
        }
        let moves = (0..quotient.len())
            .map(|c| columns.iter().map(|col| col[c].clone()).collect())
            .collect();
        Ok(GroupContext {
            quotient,
            actions,
            moves,
        })
    }

    pub fn solve(&self, goal: &StateSet) -> Solution {
        let n = self.quotient.len();
        let mut rank: Vec<Option<usize>> = self
            .quotient
            .classes
            .iter()
            .map(|x| x.is_subset(goal).then_some(0))
            .collect();
        let mut choice = vec![None; n];
        let mut round = 0;
        loop {
            let mut fresh = Vec::new();
            for c in (0..n).filter(|&c| rank[c].is_none()) {
                let winner = self.moves[c]
                    .iter()
                    .position(|succ| succ.as_ref().is_some_and(|ys| ys.iter().all(|&y| rank[y].is_some())));
                if let Some(k) = winner {
                    fresh.push((c, k));
                }
            }
            if fresh.is_empty() {
                break;
            }
            round += 1;
            for (c, k) in fresh {
                rank[c] = Some(round);
                choice[c] = Some(k);
            }
        }
        Solution { rank, choice }
    }
}

/// Winning classes, their ranks and the full witness strategy for `Kh_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KhWitness {
    pub winning: BTreeSet<EquivClass>,
    pub rank: BTreeMap<EquivClass, usize>,
    pub strategy: Strategy,
}

impl KhWitness {
    pub fn wins_at(&self, m: &Model, s: StateId) -> bool {
        self.winning.contains(&m.class_of(&self.strategy.group, s))
    }
}

fn witness(ctx: &GroupContext, sol: &Solution, g: &Group) -> KhWitness {
    let mut out = KhWitness {
        winning: BTreeSet::new(),
        rank: BTreeMap::new(),
        strategy: Strategy::empty(g.clone()),
    };
    for (i, r) in sol.rank.iter().enumerate() {
        let Some(r) = r else { continue };
        let class = ctx.quotient.class(i);
        out.winning.insert(class.clone());
        out.rank.insert(class.clone(), *r);
        if let Some(k) = sol.choice[i] {
            out.strategy.assignment.insert(class, ctx.actions[k].clone());
        }
    }
    out
}

impl ModelChecker<'_> {
    pub fn kh_winning(&mut self, g: &Group, goal: &StateSet) -> Result<KhWitness, CheckError> {
        let ctx = self.context(g)?;
        let sol = ctx.solve(goal);
        Ok(witness(ctx, &sol, g))
    }

    /// Witness strategy for `Kh_g f` at `s`, restricted to the classes its
    /// executions from `[s]_g` can visit.
    pub fn synthesize_strategy(&mut self, s: StateId, g: &Group, f: &Formula) -> Result<Option<Strategy>, CheckError> {
        let goal = self.eval(f)?;
        let ctx = self.context(g)?;
        let sol = ctx.solve(&goal);
        let start = ctx.quotient.index_of(s);
        if sol.rank[start].is_none() {
            return Ok(None);
        }
        let mut strategy = Strategy::empty(g.clone());
        let mut seen = vec![false; ctx.quotient.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(c) = stack.pop() {
            let Some(k) = sol.choice[c] else { continue };
            strategy
                .assignment
                .insert(ctx.quotient.class(c), ctx.actions[k].clone());
            for &y in ctx.moves[c][k].as_ref().expect("chosen actions are executable") {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        Ok(Some(strategy))
    }
}

pub fn kh_winning(m: &Model, g: &Group, goal: &StateSet) -> Result<KhWitness, CheckError> {
    ModelChecker::new(m).kh_winning(g, goal)
}

pub fn synthesize_strategy(m: &Model, s: StateId, g: &Group, f: &Formula) -> Result<Option<Strategy>, CheckError> {
    ModelChecker::new(m).synthesize_strategy(s, g, f)
}
