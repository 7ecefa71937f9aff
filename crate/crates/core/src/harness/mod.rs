//! Random models and formulas, the soundness sweep, and countermodel search.
//!
//! Everything is driven by a 64-bit seed. Each sample `i` of a run gets its
//! own seed via [`derive_seed`], so any reported model can be regenerated
//! from its seed alone with [`random_model`].

mod counter;
mod gen;
mod sweep;

use rand::Rng;
use thiserror::Error;

use crate::formula::Group;
use crate::parser::{parse_template, ParseError};
use crate::proof::Axiom;
use crate::template::{Bindings, Pattern};

pub use counter::{find_countermodel, Countermodel};
pub use gen::{
    derive_seed, prop_name, random_formula, random_group, random_model, random_model_with_props, random_supergroup,
    GenParams, Span,
};
pub use sweep::{soundness_sweep, soundness_sweep_with, EvaluatorFactory, SweepReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("invalid template: {0}")]
    Template(#[from] ParseError),
    #[error("budget must be positive")]
    ZeroBudget,
}

/// Footnote form of the coalition-logic cooperation principle, with
/// disjoint groups `{0}` and `{1}`.
pub const COOPERATION: &str = "Kh{0}($phi -> $psi) -> (Kh{1} $phi -> Kh{0,1} $psi)";

/// Know-how of two goals separately does not give know-how of both.
pub const KH_CONJUNCTION: &str = "Kh$G $phi & Kh$G $psi -> Kh$G($phi & $psi)";

/// A pattern plus the subgroup side conditions its instances must respect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub pattern: Pattern,
    /// Pairs `(G, H)` of group metavariables with `G ⊆ H`.
    pub subgroups: Vec<(String, String)>,
}

impl Template {
    pub fn parse(text: &str) -> Result<Template, HarnessError> {
        Ok(Template {
            name: text.to_string(),
            pattern: parse_template(text)?,
            subgroups: Vec::new(),
        })
    }

    pub fn axiom(a: Axiom) -> Template {
        Template {
            name: a.name().to_string(),
            pattern: a.pattern().clone(),
            subgroups: if a.needs_subgroup() {
                vec![("G".into(), "H".into())]
            } else {
                Vec::new()
            },
        }
    }

    /// `coop`, `khconj`, an axiom name, or else template text.
    pub fn from_name_or_text(s: &str) -> Result<Template, HarnessError> {
        let named = match s {
            "coop" => Some(COOPERATION),
            "khconj" => Some(KH_CONJUNCTION),
            _ => None,
        };
        if let Some(text) = named {
            let mut t = Template::parse(text)?;
            t.name = s.to_string();
            return Ok(t);
        }
        if let Some(a) = Axiom::from_name(s) {
            return Ok(Template::axiom(a));
        }
        Template::parse(s)
    }

    /// Number of agents a model needs for the fixed groups in the template.
    pub fn required_agents(&self) -> usize {
        self.pattern.max_agent().map_or(0, |a| a + 1)
    }

    /// Random bindings for every metavariable, honouring side conditions.
    pub fn random_bindings(&self, rng: &mut impl Rng, props: &[String], agents: usize, depth: &Span) -> Bindings {
        let mut b = Bindings::default();
        for v in self.pattern.group_vars() {
            if let Some((sub, _)) = self.subgroups.iter().find(|(_, sup)| sup == v) {
                let base = b
                    .groups
                    .entry(sub.clone())
                    .or_insert_with(|| random_group(rng, agents))
                    .clone();
                b.groups.insert(v.to_string(), random_supergroup(rng, &base, agents));
            } else if !b.groups.contains_key(v) {
                b.groups.insert(v.to_string(), random_group(rng, agents));
            }
        }
        for v in self.pattern.formula_vars() {
            let d = depth.sample(rng);
            b.formulas.insert(v.to_string(), random_formula(rng, props, agents, d));
        }
        b
    }

    pub fn side_conditions_hold(&self, b: &Bindings) -> bool {
        self.subgroups.iter().all(|(g, h)| {
            let empty = Group::empty();
            b.groups
                .get(g)
                .unwrap_or(&empty)
                .is_subset(b.groups.get(h).unwrap_or(&empty))
        })
    }
}
