//! Distributed actions available to a group.
//!
//! A group can use its own atomic actions, the atomic actions of its
//! subgroups, and joint actions: tuples of distributed actions of pairwise
//! disjoint subgroups, ordered by least member. A joint action's transition
//! relation is the intersection of its components' relations, so every
//! distributed action behaves exactly like the set of atomic actions at its
//! leaves. [`closure_nested`] builds the tuple terms; [`canonical_actions`]
//! enumerates the flattened leaf sets directly, and semantics only ever
//! looks at the latter.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::{AgentId, Group};
use crate::model::{ActionId, EquivClass, Model};
use crate::states::{Relation, StateSet};

pub const DEFAULT_ACTION_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActionLimits {
    /// Maximum number of distributed actions enumerated for one group.
    pub max_actions: usize,
}

impl Default for ActionLimits {
    fn default() -> Self {
        ActionLimits {
            max_actions: DEFAULT_ACTION_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("more than {cap} distributed actions for group {group}")]
pub struct CapExceeded {
    pub group: Group,
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NestedAction {
    Atom(ActionId),
    /// Components belong to pairwise disjoint groups, ordered by least agent.
    Tuple(Vec<NestedAction>),
}

impl NestedAction {
    /// Leaf atoms as a joint action.
    pub fn flatten(&self) -> JointAction {
        let mut leaves = Vec::new();
        self.collect_leaves(&mut leaves);
        JointAction::new(leaves)
    }

    fn collect_leaves(&self, out: &mut Vec<ActionId>) {
        match self {
            NestedAction::Atom(a) => out.push(*a),
            NestedAction::Tuple(parts) => parts.iter().for_each(|p| p.collect_leaves(out)),
        }
    }

    /// Transition relation computed by recursion on the term structure.
    pub fn transition(&self, m: &Model) -> Relation {
        match self {
            NestedAction::Atom(a) => m.action(*a).moves.clone(),
            NestedAction::Tuple(parts) => {
                let mut rel = parts[0].transition(m);
                for p in &parts[1..] {
                    rel.intersect_with(&p.transition(m));
                }
                rel
            }
        }
    }

    pub fn display<'a>(&'a self, m: &'a Model) -> impl fmt::Display + 'a {
        NestedDisplay(self, m)
    }
}

struct NestedDisplay<'a>(&'a NestedAction, &'a Model);

impl fmt::Display for NestedDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            NestedAction::Atom(a) => write!(f, "{}", self.1.action(*a).name),
            NestedAction::Tuple(parts) => {
                write!(f, "<")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", NestedDisplay(p, self.1))?;
                }
                write!(f, ">")
            }
        }
    }
}

/// A nonempty set of atomic actions with pairwise disjoint owners.
///
/// Ordered by size, then lexicographically by atom names (action ids follow
/// name order).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JointAction(Vec<ActionId>);

impl JointAction {
    pub fn new(mut atoms: Vec<ActionId>) -> Self {
        atoms.sort();
        atoms.dedup();
        JointAction(atoms)
    }

    pub fn single(a: ActionId) -> Self {
        JointAction(vec![a])
    }

    /// Resolves atom names against `m`; the error names the unknown atom.
    pub fn from_names<S: AsRef<str>>(m: &Model, names: &[S]) -> Result<Self, String> {
        names
            .iter()
            .map(|n| m.action_id(n.as_ref()).ok_or_else(|| n.as_ref().to_string()))
            .collect::<Result<Vec<_>, _>>()
            .map(JointAction::new)
    }

    pub fn atoms(&self) -> &[ActionId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names<'a>(&'a self, m: &'a Model) -> Vec<&'a str> {
        self.0.iter().map(|a| m.action(*a).name.as_str()).collect()
    }

    /// Whether this is a distributed action of `g`: nonempty, owners inside
    /// `g` and pairwise disjoint.
    pub fn available_to(&self, m: &Model, g: &Group) -> bool {
        let mut used: BTreeSet<AgentId> = BTreeSet::new();
        !self.0.is_empty()
            && self.0.iter().all(|a| {
                let owner = &m.action(*a).owner;
                owner.is_subset(g) && owner.members().all(|i| used.insert(i))
            })
    }

    pub fn display<'a>(&'a self, m: &'a Model) -> impl fmt::Display + 'a {
        JointDisplay(self, m)
    }
}

impl Ord for JointAction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for JointAction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct JointDisplay<'a>(&'a JointAction, &'a Model);

impl fmt::Display for JointDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.names(self.1).join(","))
    }
}

/// The nested closure `A*_g`, exactly as a set of tuple terms.
pub fn closure_nested(m: &Model, g: &Group, limits: ActionLimits) -> Result<BTreeSet<NestedAction>, CapExceeded> {
    let mut memo = HashMap::new();
    let members: Vec<AgentId> = g.members().collect();
    Ok(nested_rec(m, &members, limits.max_actions, &mut memo)?
        .into_iter()
        .collect())
}

fn nested_rec(
    m: &Model,
    members: &[AgentId],
    cap: usize,
    memo: &mut HashMap<Vec<AgentId>, Vec<NestedAction>>,
) -> Result<Vec<NestedAction>, CapExceeded> {
    if let Some(done) = memo.get(members) {
        return Ok(done.clone());
    }
    let group: Group = members.iter().copied().collect();
    let too_many = || CapExceeded {
        group: group.clone(),
        cap,
    };
    let mut out: BTreeSet<NestedAction> = m.inherited_actions(&group).map(NestedAction::Atom).collect();
    if out.len() > cap {
        return Err(too_many());
    }
    for blocks in partial_partitions(members) {
        let mut parts: Vec<Vec<NestedAction>> = Vec::with_capacity(blocks.len());
        for block in &blocks {
            parts.push(nested_rec(m, block, cap, memo)?);
        }
        let product = parts
            .iter()
            .try_fold(1usize, |acc, p| acc.checked_mul(p.len()))
            .unwrap_or(usize::MAX);
        if product > cap {
            return Err(too_many());
        }
        for tuple in cartesian(&parts) {
            out.insert(NestedAction::Tuple(tuple));
        }
        if out.len() > cap {
            return Err(too_many());
        }
    }
    let out: Vec<NestedAction> = out.into_iter().collect();
    memo.insert(members.to_vec(), out.clone());
    Ok(out)
}

/// Partitions of subsets of `members` with at least two blocks. Blocks come
/// out ordered by least member because agents are assigned in ascending order.
fn partial_partitions(members: &[AgentId]) -> Vec<Vec<Vec<AgentId>>> {
    fn go(members: &[AgentId], i: usize, blocks: &mut Vec<Vec<AgentId>>, out: &mut Vec<Vec<Vec<AgentId>>>) {
        if i == members.len() {
            if blocks.len() >= 2 {
                out.push(blocks.clone());
            }
            return;
        }
        // leave agent idle
        go(members, i + 1, blocks, out);
        for b in 0..blocks.len() {
            blocks[b].push(members[i]);
            go(members, i + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![members[i]]);
        go(members, i + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    if members.len() >= 2 {
        go(members, 0, &mut Vec::new(), &mut out);
    }
    out
}

fn cartesian(parts: &[Vec<NestedAction>]) -> Vec<Vec<NestedAction>> {
    parts.iter().fold(vec![Vec::new()], |acc, part| {
        acc.iter()
            .flat_map(|prefix| {
                part.iter().map(move |d| {
                    let mut next = prefix.clone();
                    next.push(d.clone());
                    next
                })
            })
            .collect()
    })
}

/// All joint actions of `g` in canonical form, in tie-break order.
pub fn canonical_actions(m: &Model, g: &Group, limits: ActionLimits) -> Result<Vec<JointAction>, CapExceeded> {
    fn go(
        m: &Model,
        eligible: &[ActionId],
        i: usize,
        used: &mut BTreeSet<AgentId>,
        chosen: &mut Vec<ActionId>,
        out: &mut Vec<JointAction>,
        cap: usize,
    ) -> bool {
        if i == eligible.len() {
            if !chosen.is_empty() {
                out.push(JointAction(chosen.clone()));
            }
            return out.len() <= cap;
        }
        if !go(m, eligible, i + 1, used, chosen, out, cap) {
            return false;
        }
        let owner = &m.action(eligible[i]).owner;
        if owner.members().all(|a| !used.contains(&a)) {
            used.extend(owner.members());
            chosen.push(eligible[i]);
            let ok = go(m, eligible, i + 1, used, chosen, out, cap);
            chosen.pop();
            owner.members().for_each(|a| {
                used.remove(&a);
            });
            return ok;
        }
        true
    }
    let eligible: Vec<ActionId> = m.inherited_actions(g).collect();
    let mut out = Vec::new();
    if !go(
        m,
        &eligible,
        0,
        &mut BTreeSet::new(),
        &mut Vec::new(),
        &mut out,
        limits.max_actions,
    ) {
        return Err(CapExceeded {
            group: g.clone(),
            cap: limits.max_actions,
        });
    }
    out.sort();
    Ok(out)
}

/// Intersection of the member atoms' move relations.
pub fn transition(m: &Model, j: &JointAction) -> Relation {
    let mut atoms = j.atoms().iter();
    let Some(first) = atoms.next() else {
        return Relation::empty(m.state_count());
    };
    let mut rel = m.action(*first).moves.clone();
    for a in atoms {
        rel.intersect_with(&m.action(*a).moves);
    }
    rel
}

/// Every state of `x` has a successor under `rel`.
pub fn relation_executable_on(rel: &Relation, x: &StateSet) -> bool {
    x.iter().all(|s| !rel.successors(s).is_empty())
}

pub fn executable_on(m: &Model, j: &JointAction, x: &StateSet) -> bool {
    relation_executable_on(&transition(m, j), x)
}

/// The `g`-classes reachable from some state of `x` in one `j` step.
pub fn class_successors(m: &Model, g: &Group, x: &EquivClass, j: &JointAction) -> BTreeSet<EquivClass> {
    let quotient = m.quotient(g);
    let image = transition(m, j).image(&x.states);
    image
        .iter()
        .map(|t| quotient.index_of(t))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|i| quotient.class(i))
        .collect()
}
