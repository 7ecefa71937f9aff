//! Model checking for the full language.
//!
//! `K_G phi` holds at `s` when `phi` holds throughout `[s]_G`. `Kh_G phi`
//! holds at `s` when some uniform strategy of `G` over `~G`-classes is
//! guaranteed to terminate from `[s]_G` in classes contained in `[[phi]]`.
//! On finite models this is a least fixpoint over the quotient (see
//! [`kh`]); [`oracle`] enumerates strategies literally for cross-checking.

mod kh;
pub mod oracle;
mod strategy;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::actions::{ActionLimits, CapExceeded};
use crate::formula::{Formula, Group};
use crate::model::Model;
use crate::states::{StateId, StateSet};

pub use kh::{kh_winning, synthesize_strategy, KhWitness};
pub use oracle::{kh_bruteforce, kh_bruteforce_goal, kh_bruteforce_guarded, OracleGuard};
pub use strategy::{verify_strategy, Strategy, StrategyDoc, StrategyEntry, StrategyVerdict};

pub(crate) use kh::GroupContext;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Cap(#[from] CapExceeded),
    #[error("group {0} mentions an agent the model does not have")]
    AgentOutOfRange(Group),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("strategy is for group {found}, expected {expected}")]
    WrongGroup { expected: Group, found: Group },
    #[error("strategy assigns twice to the class of `{0}`")]
    DuplicateAssignment(String),
    #[error("strategy key {0} is not a class of the group")]
    NotAClass(String),
    #[error("action {action} is not a distributed action of group {group}")]
    NotAvailable { action: String, group: Group },
    #[error("action {action} is not executable on class {class}")]
    NotExecutable { action: String, class: String },
    #[error("oracle guard exceeded: {classes} classes, {actions} joint actions")]
    OracleGuard { classes: usize, actions: usize },
}

/// Anything that can compute truth sets on a fixed model.
pub trait Evaluate {
    fn model(&self) -> &Model;
    fn eval(&mut self, f: &Formula) -> Result<StateSet, CheckError>;
}

/// Evaluator with per-group caches of quotients and joint-action successors.
pub struct ModelChecker<'m> {
    model: &'m Model,
    limits: ActionLimits,
    contexts: HashMap<Group, GroupContext>,
    warned: HashSet<String>,
}

impl<'m> ModelChecker<'m> {
    pub fn new(model: &'m Model) -> Self {
        Self::with_limits(model, ActionLimits::default())
    }

    pub fn with_limits(model: &'m Model, limits: ActionLimits) -> Self {
        ModelChecker {
            model,
            limits,
            contexts: HashMap::new(),
            warned: HashSet::new(),
        }
    }

    pub fn limits(&self) -> ActionLimits {
        self.limits
    }

    pub(crate) fn context(&mut self, g: &Group) -> Result<&GroupContext, CheckError> {
        if !self.model.group_in_range(g) {
            return Err(CheckError::AgentOutOfRange(g.clone()));
        }
        if !self.contexts.contains_key(g) {
            let ctx = GroupContext::build(self.model, g, self.limits)?;
            self.contexts.insert(g.clone(), ctx);
        }
        Ok(&self.contexts[g])
    }

    pub fn holds_at(&mut self, f: &Formula, s: StateId) -> Result<bool, CheckError> {
        Ok(self.eval(f)?.contains(s))
    }

    /// Whether `f` holds at every state.
    pub fn is_valid(&mut self, f: &Formula) -> Result<bool, CheckError> {
        Ok(self.eval(f)?.is_full())
    }
}

impl Evaluate for ModelChecker<'_> {
    fn model(&self) -> &Model {
        self.model
    }

    fn eval(&mut self, f: &Formula) -> Result<StateSet, CheckError> {
        let n = self.model.state_count();
        Ok(match f {
            Formula::Top => StateSet::full(n),
            Formula::Atom(p) => match self.model.valuation(p) {
                Some(set) => set.clone(),
                None => {
                    if self.warned.insert(p.clone()) {
                        log::warn!("proposition `{p}` is not in the valuation; treating it as false everywhere");
                    }
                    StateSet::empty(n)
                }
            },
            Formula::Not(g) => self.eval(g)?.complement(),
            Formula::And(l, r) => {
                let l = self.eval(l)?;
                l.intersection(&self.eval(r)?)
            }
            Formula::K(g, inner) => {
                let truth = self.eval(inner)?;
                let ctx = self.context(g)?;
                let mut out = StateSet::empty(n);
                for class in &ctx.quotient.classes {
                    if class.is_subset(&truth) {
                        out.union_with(class);
                    }
                }
                out
            }
            Formula::Kh(g, inner) => {
                let goal = self.eval(inner)?;
                let ctx = self.context(g)?;
                let solution = ctx.solve(&goal);
                let mut out = StateSet::empty(n);
                for (i, class) in ctx.quotient.classes.iter().enumerate() {
                    if solution.rank[i].is_some() {
                        out.union_with(class);
                    }
                }
                out
            }
        })
    }
}

/// `[[f]]` on `m` with default limits.
pub fn eval(m: &Model, f: &Formula) -> Result<StateSet, CheckError> {
    ModelChecker::new(m).eval(f)
}
