//! Finite epistemic models with group-owned atomic actions.
//!
//! Indistinguishability for each agent is given as a partition of the state
//! set. Distributed indistinguishability for a group is the intersection of
//! its members' relations, so its classes are the nonempty intersections of
//! one block per member. The empty group relates every pair of states.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{AgentId, Group};
use crate::states::{Relation, StateId, StateSet};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("a model needs at least one agent")]
    NoAgents,
    #[error("a model needs at least one state")]
    NoStates,
    #[error("invalid name `{0}`")]
    BadName(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{name}` in {context}")]
    UnknownState { name: String, context: String },
    #[error("agent index `{0}` out of range")]
    AgentOutOfRange(String),
    #[error("overlapping blocks for agent {agent}: state `{state}` listed twice")]
    OverlappingBlocks { agent: usize, state: String },
    #[error("empty block in partition of agent {0}")]
    EmptyBlock(usize),
    #[error("empty owner group for action `{0}`")]
    EmptyOwner(String),
    #[error("duplicate action name `{0}`")]
    DuplicateAction(String),
    #[error("duplicate agent {agent} in owner of action `{action}`")]
    DuplicateOwner { action: String, agent: usize },
}

/// On-disk model document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub agents: usize,
    pub states: Vec<String>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub epistemic: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub actions: Vec<ActionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub name: String,
    pub owner: Vec<usize>,
    #[serde(default)]
    pub moves: Vec<(String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicAction {
    pub name: String,
    pub owner: Group,
    pub moves: Relation,
}

/// One class of the distributed indistinguishability relation of `group`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EquivClass {
    pub group: Group,
    pub states: StateSet,
}

/// The partition of the state set induced by a group. Classes are ordered
/// by their least state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub group: Group,
    pub classes: Vec<StateSet>,
    class_index: Vec<usize>,
}

impl Quotient {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class containing `s`.
    pub fn index_of(&self, s: StateId) -> usize {
        self.class_index[s.0]
    }

    /// Index of the class equal to `x`, if `x` is one of the classes.
    pub fn find(&self, x: &StateSet) -> Option<usize> {
        let i = self.index_of(x.first()?);
        (self.classes[i] == *x).then_some(i)
    }

    pub fn class(&self, i: usize) -> EquivClass {
        EquivClass {
            group: self.group.clone(),
            states: self.classes[i].clone(),
        }
    }

    pub fn to_classes(&self) -> Vec<EquivClass> {
        (0..self.len()).map(|i| self.class(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    agent_count: usize,
    state_names: Vec<String>,
    state_index: HashMap<String, StateId>,
    /// `blocks[agent][state]` is the block number of `state` for `agent`.
    blocks: Vec<Vec<usize>>,
    /// Sorted by name, so `ActionId` order is name order.
    actions: Vec<AtomicAction>,
    valuation: BTreeMap<String, StateSet>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "top" | "bot" | "K" | "Kh")
}

impl Model {
    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        let doc: ModelDoc = serde_json::from_str(text)?;
        Model::validate(&doc)
    }

    /// Checks a raw document and builds the model. States missing from an
    /// agent's partition, and agents missing from `epistemic`, get singleton
    /// blocks.
    pub fn validate(doc: &ModelDoc) -> Result<Model, ModelError> {
        if doc.agents == 0 {
            return Err(ModelError::NoAgents);
        }
        if doc.states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let n = doc.states.len();
        let mut state_index = HashMap::new();
        for (i, name) in doc.states.iter().enumerate() {
            if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == ',') {
                return Err(ModelError::BadName(name.clone()));
            }
            if state_index.insert(name.clone(), StateId(i)).is_some() {
                return Err(ModelError::DuplicateState(name.clone()));
            }
        }
        let lookup = |name: &str, context: &dyn Fn() -> String| {
            state_index.get(name).copied().ok_or_else(|| ModelError::UnknownState {
                name: name.to_string(),
                context: context(),
            })
        };

        let mut blocks: Vec<Vec<Option<usize>>> = vec![vec![None; n]; doc.agents];
        for (key, partition) in &doc.epistemic {
            let agent = key
                .parse::<usize>()
                .ok()
                .filter(|&a| a < doc.agents)
                .ok_or_else(|| ModelError::AgentOutOfRange(key.clone()))?;
            for (b, block) in partition.iter().enumerate() {
                if block.is_empty() {
                    return Err(ModelError::EmptyBlock(agent));
                }
                for name in block {
                    let s = lookup(name, &|| format!("partition of agent {agent}"))?;
                    if blocks[agent][s.0].replace(b).is_some() {
                        return Err(ModelError::OverlappingBlocks {
                            agent,
                            state: name.clone(),
                        });
                    }
                }
            }
        }
        let blocks = blocks
            .into_iter()
            .map(|row| {
                let mut next = row.iter().flatten().max().map_or(0, |m| m + 1);
                row.into_iter()
                    .map(|b| {
                        b.unwrap_or_else(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();

        let mut actions = Vec::with_capacity(doc.actions.len());
        let mut seen = BTreeSet::new();
        for a in &doc.actions {
            if !is_identifier(&a.name) {
                return Err(ModelError::BadName(a.name.clone()));
            }
            if !seen.insert(a.name.as_str()) {
                return Err(ModelError::DuplicateAction(a.name.clone()));
            }
            if a.owner.is_empty() {
                return Err(ModelError::EmptyOwner(a.name.clone()));
            }
            let mut owner = BTreeSet::new();
            for &i in &a.owner {
                if i >= doc.agents {
                    return Err(ModelError::AgentOutOfRange(i.to_string()));
                }
                if !owner.insert(AgentId(i)) {
                    return Err(ModelError::DuplicateOwner {
                        action: a.name.clone(),
                        agent: i,
                    });
                }
            }
            let mut moves = Relation::empty(n);
            for (from, to) in &a.moves {
                let ctx = || format!("moves of action `{}`", a.name);
                moves.insert(lookup(from, &ctx)?, lookup(to, &ctx)?);
            }
            actions.push(AtomicAction {
                name: a.name.clone(),
                owner: owner.into_iter().collect(),
                moves,
            });
        }
        actions.sort_by(|x, y| x.name.cmp(&y.name));

        let mut valuation = BTreeMap::new();
        for (prop, names) in &doc.valuation {
            if !is_identifier(prop) {
                return Err(ModelError::BadName(prop.clone()));
            }
            let mut set = StateSet::empty(n);
            for name in names {
                set.insert(lookup(name, &|| format!("valuation of `{prop}`"))?);
            }
            valuation.insert(prop.clone(), set);
        }

        Ok(Model {
            agent_count: doc.agents,
            state_names: doc.states.clone(),
            state_index,
            blocks,
            actions,
            valuation,
        })
    }

    /// Canonical document for this model: full partitions, actions sorted by name.
    pub fn to_doc(&self) -> ModelDoc {
        let names = |set: &StateSet| set.iter().map(|s| self.state_name(s).to_string()).collect();
        ModelDoc {
            agents: self.agent_count,
            states: self.state_names.clone(),
            valuation: self.valuation.iter().map(|(p, set)| (p.clone(), names(set))).collect(),
            epistemic: (0..self.agent_count)
                .map(|i| {
                    let q = self.quotient(&Group::singleton(i));
                    (i.to_string(), q.classes.iter().map(names).collect())
                })
                .collect(),
            actions: self
                .actions
                .iter()
                .map(|a| ActionDoc {
                    name: a.name.clone(),
                    owner: a.owner.members().map(|i| i.0).collect(),
                    moves: a
                        .moves
                        .pairs()
                        .map(|(s, t)| (self.state_name(s).to_string(), self.state_name(t).to_string()))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("model documents always serialize")
    }

    pub fn agent_count(&self) -> usize {
        self.agent_count
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.state_count()).map(StateId)
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.state_count())
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn actions(&self) -> &[AtomicAction] {
        &self.actions
    }

    pub fn action(&self, id: ActionId) -> &AtomicAction {
        &self.actions[id.0]
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.actions
            .binary_search_by(|a| a.name.as_str().cmp(name))
            .ok()
            .map(ActionId)
    }

    /// States where `prop` holds; `None` when the valuation does not mention it.
    pub fn valuation(&self, prop: &str) -> Option<&StateSet> {
        self.valuation.get(prop)
    }

    pub fn props(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(String::as_str)
    }

    pub fn group_in_range(&self, g: &Group) -> bool {
        g.max_agent().is_none_or(|a| a.0 < self.agent_count)
    }

    /// Atomic actions whose owner is a subset of `g`.
    pub fn inherited_actions<'a>(&'a self, g: &'a Group) -> impl Iterator<Item = ActionId> + 'a {
        self.actions
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.owner.is_subset(g))
            .map(|(i, _)| ActionId(i))
    }

    /// `[s]_g`. Panics if `g` mentions an agent outside the model.
    pub fn class_of(&self, g: &Group, s: StateId) -> EquivClass {
        let mut states = StateSet::empty(self.state_count());
        for t in self.states() {
            if g.members().all(|i| self.blocks[i.0][s.0] == self.blocks[i.0][t.0]) {
                states.insert(t);
            }
        }
        EquivClass {
            group: g.clone(),
            states,
        }
    }

    /// All classes of `~g`. Panics if `g` mentions an agent outside the model.
    pub fn quotient(&self, g: &Group) -> Quotient {
        assert!(self.group_in_range(g), "group {g} out of range for model");
        let n = self.state_count();
        let mut by_signature: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut classes: Vec<StateSet> = Vec::new();
        let mut class_index = Vec::with_capacity(n);
        for s in self.states() {
            let sig: Vec<usize> = g.members().map(|i| self.blocks[i.0][s.0]).collect();
            let idx = *by_signature.entry(sig).or_insert_with(|| {
                classes.push(StateSet::empty(n));
                classes.len() - 1
            });
            classes[idx].insert(s);
            class_index.push(idx);
        }
        Quotient {
            group: g.clone(),
            classes,
            class_index,
        }
    }

    pub fn format_set(&self, set: &StateSet) -> String {
        let names: Vec<&str> = set.iter().map(|s| self.state_name(s)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Lexicographically least state name of a set.
    pub fn representative(&self, set: &StateSet) -> Option<&str> {
        set.iter().map(|s| self.state_name(s)).min()
    }
}

impl fmt::Display for EquivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.states)
    }
}
