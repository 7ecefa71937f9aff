//! Formulas of the language: propositional connectives plus distributed
//! knowledge-that (`K_G`) and distributed knowledge-how (`Kh_G`).

use std::collections::{BTreeSet, HashSet};
use std::fmt;

/// Index of an agent, `0..n` for a model with `n` agents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite, possibly empty, set of agents. Members are kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group(BTreeSet<AgentId>);

impl Group {
    pub fn empty() -> Self {
        Group(BTreeSet::new())
    }

    pub fn singleton(agent: usize) -> Self {
        Group(BTreeSet::from([AgentId(agent)]))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Group(indices.into_iter().map(AgentId).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, agent: AgentId) -> bool {
        self.0.contains(&agent)
    }

    pub fn members(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &Group) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Group) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &Group) -> Group {
        Group(self.0.union(&other.0).copied().collect())
    }

    /// Least member index; `None` for the empty group.
    pub fn min_agent(&self) -> Option<AgentId> {
        self.0.first().copied()
    }

    pub fn max_agent(&self) -> Option<AgentId> {
        self.0.last().copied()
    }

    /// Comma-separated member list without braces, as used by `-g` flags.
    pub fn to_list(&self) -> String {
        self.0.iter().map(|a| a.0.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl FromIterator<AgentId> for Group {
    fn from_iter<T: IntoIterator<Item = AgentId>>(iter: T) -> Self {
        Group(iter.into_iter().collect())
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_list())
    }
}

/// Core syntax. Derived connectives (`bot`, `|`, `->`) exist only in the
/// surface syntax and are desugared by the parser.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    K(Group, Box<Formula>),
    Kh(Group, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn k(g: Group, f: Formula) -> Formula {
        Formula::K(g, Box::new(f))
    }

    pub fn kh(g: Group, f: Formula) -> Formula {
        Formula::Kh(g, Box::new(f))
    }

    /// `bot`, i.e. `~top`.
    pub fn bot() -> Formula {
        Formula::not(Formula::Top)
    }

    /// `l | r`, i.e. `~(~l & ~r)`.
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(l), Formula::not(r)))
    }

    /// `l -> r`, i.e. `~(l & ~r)`.
    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::not(Formula::and(l, Formula::not(r)))
    }

    /// If this formula has the shape `l -> r` (after desugaring), returns `(l, r)`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::And(l, r) => match r.as_ref() {
                    Formula::Not(r) => Some((l, r)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Distinct subformulas in post-order: every subterm precedes its superterms.
    pub fn subformulas(&self) -> Vec<Formula> {
        fn walk<'a>(f: &'a Formula, seen: &mut HashSet<&'a Formula>, out: &mut Vec<&'a Formula>) {
            if seen.contains(f) {
                return;
            }
            match f {
                Formula::Top | Formula::Atom(_) => {}
                Formula::Not(g) | Formula::K(_, g) | Formula::Kh(_, g) => walk(g, seen, out),
                Formula::And(l, r) => {
                    walk(l, seen, out);
                    walk(r, seen, out);
                }
            }
            seen.insert(f);
            out.push(f);
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        walk(self, &mut seen, &mut out);
        out.into_iter().cloned().collect()
    }

    /// Proposition letters occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p) = f {
                out.insert(p.as_str());
            }
        });
        out
    }

    /// Largest agent index mentioned by any modality.
    pub fn max_agent(&self) -> Option<AgentId> {
        let mut best = None;
        self.visit(&mut |f| {
            if let Formula::K(g, _) | Formula::Kh(g, _) = f {
                best = best.max(g.max_agent());
            }
        });
        best
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Atom(_) => 0,
            Formula::Not(g) | Formula::K(_, g) | Formula::Kh(_, g) => 1 + g.depth(),
            Formula::And(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Top | Formula::Atom(_) => {}
            Formula::Not(g) | Formula::K(_, g) | Formula::Kh(_, g) => g.visit(f),
            Formula::And(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }
}

// Printing emits core connectives only. `&` is left-associative, so only a
// conjunction in the right operand needs parentheses.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => write!(f, "top"),
            Formula::Atom(p) => write!(f, "{p}"),
            Formula::Not(g) => {
                write!(f, "~")?;
                fmt_operand(g, f)
            }
            Formula::K(grp, g) => {
                write!(f, "K{grp}")?;
                fmt_modal_operand(g, f)
            }
            Formula::Kh(grp, g) => {
                write!(f, "Kh{grp}")?;
                fmt_modal_operand(g, f)
            }
            Formula::And(l, r) => {
                write!(f, "{l} & ")?;
                if matches!(r.as_ref(), Formula::And(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

fn fmt_operand(g: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match g {
        Formula::And(..) => write!(f, "({g})"),
        _ => write!(f, "{g}"),
    }
}

fn fmt_modal_operand(g: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match g {
        Formula::And(..) => write!(f, "({g})"),
        Formula::Not(_) => write!(f, "{g}"),
        _ => write!(f, " {g}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    #[test]
    fn subformulas_dedup_and_order() {
        let f = Formula::and(p(), p());
        assert_eq!(f.subformulas(), vec![p(), f.clone()]);
        assert_eq!(Formula::Top.subformulas(), vec![Formula::Top]);
        let k = Formula::k(Group::singleton(0), Formula::not(p()));
        assert_eq!(k.subformulas(), vec![p(), Formula::not(p()), k.clone()]);
    }

    #[test]
    fn printing_core_forms() {
        let f = Formula::kh(
            Group::from_indices([0, 1]),
            Formula::and(Formula::not(p()), Formula::not(Formula::atom("q"))),
        );
        assert_eq!(f.to_string(), "Kh{0,1}(~p & ~q)");
        assert_eq!(Formula::k(Group::empty(), Formula::Top).to_string(), "K{} top");
        assert_eq!(Formula::bot().to_string(), "~top");
    }

    #[test]
    fn implication_view() {
        let f = Formula::implies(p(), Formula::atom("q"));
        assert_eq!(f.as_implication(), Some((&p(), &Formula::atom("q"))));
        assert_eq!(p().as_implication(), None);
    }

    #[test]
    fn group_ops() {
        let g = Group::from_indices([2, 0]);
        assert_eq!(g.to_string(), "{0,2}");
        assert_eq!(g.min_agent(), Some(AgentId(0)));
        assert!(Group::empty().is_subset(&g));
        assert!(!g.is_subset(&Group::singleton(0)));
    }
}
