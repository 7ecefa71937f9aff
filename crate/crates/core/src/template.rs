//! Formula templates with formula and group metavariables.
//!
//! Templates back both the axiom schemas of the proof checker and the
//! countermodel search. Matching is first-order and purely structural: a
//! metavariable that occurs twice must bind to equal formulas (or groups).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::formula::{Formula, Group};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupPattern {
    Fixed(Group),
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Top,
    Atom(String),
    Meta(String),
    Not(Box<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    K(GroupPattern, Box<Pattern>),
    Kh(GroupPattern, Box<Pattern>),
}

/// Metavariable assignment produced by matching or consumed by instantiation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    pub formulas: BTreeMap<String, Formula>,
    pub groups: BTreeMap<String, Group>,
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, g) in &self.groups {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "${name} = {g}")?;
        }
        for (name, phi) in &self.formulas {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "${name} = {phi}")?;
        }
        Ok(())
    }
}

impl Pattern {
    pub fn implies(l: Pattern, r: Pattern) -> Pattern {
        Pattern::Not(Box::new(Pattern::And(Box::new(l), Box::new(Pattern::Not(Box::new(r))))))
    }

    pub fn or(l: Pattern, r: Pattern) -> Pattern {
        Pattern::Not(Box::new(Pattern::And(
            Box::new(Pattern::Not(Box::new(l))),
            Box::new(Pattern::Not(Box::new(r))),
        )))
    }

    /// Converts a metavariable-free pattern into a formula.
    pub fn to_formula(&self) -> Option<Formula> {
        self.instantiate(&Bindings::default())
    }

    /// Substitutes bindings for metavariables; `None` if some metavariable is unbound.
    pub fn instantiate(&self, b: &Bindings) -> Option<Formula> {
        let group = |g: &GroupPattern| match g {
            GroupPattern::Fixed(g) => Some(g.clone()),
            GroupPattern::Var(v) => b.groups.get(v).cloned(),
        };
        Some(match self {
            Pattern::Top => Formula::Top,
            Pattern::Atom(p) => Formula::Atom(p.clone()),
            Pattern::Meta(v) => b.formulas.get(v)?.clone(),
            Pattern::Not(p) => Formula::not(p.instantiate(b)?),
            Pattern::And(l, r) => Formula::and(l.instantiate(b)?, r.instantiate(b)?),
            Pattern::K(g, p) => Formula::k(group(g)?, p.instantiate(b)?),
            Pattern::Kh(g, p) => Formula::kh(group(g)?, p.instantiate(b)?),
        })
    }

    /// Matches `f` against this pattern, returning the unique bindings if any.
    pub fn matches(&self, f: &Formula) -> Option<Bindings> {
        let mut b = Bindings::default();
        self.match_into(f, &mut b).then_some(b)
    }

    fn match_into(&self, f: &Formula, b: &mut Bindings) -> bool {
        match (self, f) {
            (Pattern::Top, Formula::Top) => true,
            (Pattern::Atom(p), Formula::Atom(q)) => p == q,
            (Pattern::Meta(v), _) => match b.formulas.get(v) {
                Some(bound) => bound == f,
                None => {
                    b.formulas.insert(v.clone(), f.clone());
                    true
                }
            },
            (Pattern::Not(p), Formula::Not(g)) => p.match_into(g, b),
            (Pattern::And(pl, pr), Formula::And(l, r)) => pl.match_into(l, b) && pr.match_into(r, b),
            (Pattern::K(gp, p), Formula::K(g, inner)) | (Pattern::Kh(gp, p), Formula::Kh(g, inner)) => {
                match_group(gp, g, b) && p.match_into(inner, b)
            }
            _ => false,
        }
    }

    pub fn formula_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out, &mut BTreeSet::new());
        out
    }

    pub fn group_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut BTreeSet::new(), &mut out);
        out
    }

    fn collect_vars<'a>(&'a self, formulas: &mut BTreeSet<&'a str>, groups: &mut BTreeSet<&'a str>) {
        match self {
            Pattern::Top | Pattern::Atom(_) => {}
            Pattern::Meta(v) => {
                formulas.insert(v);
            }
            Pattern::Not(p) => p.collect_vars(formulas, groups),
            Pattern::And(l, r) => {
                l.collect_vars(formulas, groups);
                r.collect_vars(formulas, groups);
            }
            Pattern::K(g, p) | Pattern::Kh(g, p) => {
                if let GroupPattern::Var(v) = g {
                    groups.insert(v);
                }
                p.collect_vars(formulas, groups);
            }
        }
    }

    /// Largest agent index appearing in a fixed group.
    pub fn max_agent(&self) -> Option<usize> {
        match self {
            Pattern::Top | Pattern::Atom(_) | Pattern::Meta(_) => None,
            Pattern::Not(p) => p.max_agent(),
            Pattern::And(l, r) => l.max_agent().max(r.max_agent()),
            Pattern::K(g, p) | Pattern::Kh(g, p) => {
                let here = match g {
                    GroupPattern::Fixed(g) => g.max_agent().map(|a| a.0),
                    GroupPattern::Var(_) => None,
                };
                here.max(p.max_agent())
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        match self {
            Pattern::Atom(p) => BTreeSet::from([p.as_str()]),
            Pattern::Top | Pattern::Meta(_) => BTreeSet::new(),
            Pattern::Not(p) | Pattern::K(_, p) | Pattern::Kh(_, p) => p.atoms(),
            Pattern::And(l, r) => {
                let mut a = l.atoms();
                a.extend(r.atoms());
                a
            }
        }
    }
}

fn match_group(gp: &GroupPattern, g: &Group, b: &mut Bindings) -> bool {
    match gp {
        GroupPattern::Fixed(fixed) => fixed == g,
        GroupPattern::Var(v) => match b.groups.get(v) {
            Some(bound) => bound == g,
            None => {
                b.groups.insert(v.clone(), g.clone());
                true
            }
        },
    }
}

impl fmt::Display for GroupPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupPattern::Fixed(g) => write!(f, "{g}"),
            GroupPattern::Var(v) => write!(f, "${v}"),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let operand = |p: &Pattern, f: &mut fmt::Formatter<'_>, space: bool| match p {
            Pattern::And(..) => write!(f, "({p})"),
            Pattern::Not(_) => write!(f, "{p}"),
            _ if space => write!(f, " {p}"),
            _ => write!(f, "{p}"),
        };
        match self {
            Pattern::Top => write!(f, "top"),
            Pattern::Atom(p) => write!(f, "{p}"),
            Pattern::Meta(v) => write!(f, "${v}"),
            Pattern::Not(p) => {
                write!(f, "~")?;
                operand(p, f, false)
            }
            Pattern::K(g, p) => {
                write!(f, "K{g}")?;
                operand(p, f, true)
            }
            Pattern::Kh(g, p) => {
                write!(f, "Kh{g}")?;
                operand(p, f, true)
            }
            Pattern::And(l, r) => {
                write!(f, "{l} & ")?;
                if matches!(r.as_ref(), Pattern::And(..)) {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}
