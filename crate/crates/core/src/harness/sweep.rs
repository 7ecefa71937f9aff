use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formula::{Formula, Group};
use crate::model::Model;
use crate::parser::parse_template;
use crate::proof::Axiom;
use crate::semantics::{CheckError, Evaluate, ModelChecker};
use crate::states::StateSet;
use crate::template::{Bindings, Pattern};

use super::{derive_seed, random_formula, random_group, random_model, GenParams, HarnessError, Template};

/// Builds an evaluator for one model.
pub type EvaluatorFactory = dyn for<'a> Fn(&'a Model) -> Box<dyn Evaluate + 'a> + Sync;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Seed of the offending model; regenerate with `random_model`.
    pub seed: u64,
    pub check: String,
    pub state: String,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub params: GenParams,
    pub models_tested: usize,
    pub models_skipped: usize,
    pub instances_tested: usize,
    pub violations: Vec<Violation>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

// Łukasiewicz's axioms for classical propositional logic.
const PROPOSITIONAL_AXIOMS: [&str; 3] = [
    "$phi -> ($psi -> $phi)",
    "($phi -> ($psi -> $chi)) -> (($phi -> $psi) -> ($phi -> $chi))",
    "(~$phi -> ~$psi) -> ($psi -> $phi)",
];

struct ModelOutcome {
    skipped: bool,
    instances: usize,
    violations: Vec<Violation>,
}

/// Instantiates every schema on random models and checks each instance is
/// true everywhere, along with rule preservation and the empty-group
/// equivalences.
pub fn soundness_sweep(p: &GenParams, models: usize, instances_per_model: usize) -> Result<SweepReport, HarnessError> {
    soundness_sweep_with(p, models, instances_per_model, &|m| Box::new(ModelChecker::new(m)))
}

pub fn soundness_sweep_with(
    p: &GenParams,
    models: usize,
    instances_per_model: usize,
    make: &EvaluatorFactory,
) -> Result<SweepReport, HarnessError> {
    p.validate()?;
    let taut: Vec<Template> = PROPOSITIONAL_AXIOMS
        .iter()
        .map(|t| Template {
            name: "TAUT".into(),
            pattern: parse_template(t).expect("built-in templates parse"),
            subgroups: Vec::new(),
        })
        .collect();
    let schemas: Vec<Template> = Axiom::ALL.into_iter().map(Template::axiom).collect();
    let a1 = taut[0].pattern.clone();

    let outcomes: Vec<ModelOutcome> = (0..models as u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(p.seed, i);
            let model = random_model(&p.clone().with_seed(seed));
            let mut eval = make(&model);
            match check_model(eval.as_mut(), seed, p, instances_per_model, &taut, &schemas, &a1) {
                Ok((instances, violations)) => ModelOutcome {
                    skipped: false,
                    instances,
                    violations,
                },
                Err(_) => ModelOutcome {
                    skipped: true,
                    instances: 0,
                    violations: Vec::new(),
                },
            }
        })
        .collect();

    let mut report = SweepReport {
        params: p.clone(),
        models_tested: 0,
        models_skipped: 0,
        instances_tested: 0,
        violations: Vec::new(),
    };
    for o in outcomes {
        if o.skipped {
            report.models_skipped += 1;
        } else {
            report.models_tested += 1;
        }
        report.instances_tested += o.instances;
        report.violations.extend(o.violations);
    }
    report
        .violations
        .sort_by(|a, b| (a.seed, &a.check, &a.formula).cmp(&(b.seed, &b.check, &b.formula)));
    Ok(report)
}

fn check_model(
    eval: &mut dyn Evaluate,
    seed: u64,
    p: &GenParams,
    k: usize,
    taut: &[Template],
    schemas: &[Template],
    a1: &Pattern,
) -> Result<(usize, Vec<Violation>), CheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let props: Vec<String> = eval.model().props().map(String::from).collect();
    let agents = eval.model().agent_count();
    let mut instances = 0;
    let mut violations = Vec::new();

    let mut expect_valid = |eval: &mut dyn Evaluate, check: &str, f: &Formula| -> Result<bool, CheckError> {
        instances += 1;
        let truth = eval.eval(f)?;
        if let Some(s) = truth.complement().first() {
            violations.push(Violation {
                seed,
                check: check.to_string(),
                state: eval.model().state_name(s).to_string(),
                formula: f.to_string(),
            });
            return Ok(false);
        }
        Ok(true)
    };

    let plan = (0..k)
        .flat_map(|_| taut.iter())
        .chain(schemas.iter().flat_map(|t| std::iter::repeat_n(t, k)));
    let mut valid_instances = Vec::new();
    for template in plan {
        let b = template.random_bindings(&mut rng, &props, agents, &p.formula_depth);
        let f = template.pattern.instantiate(&b).expect("all metavariables bound");
        if expect_valid(eval, &template.name, &f)? {
            valid_instances.push(f);
        }
    }

    for phi in &valid_instances {
        // necessitation
        let g = random_group(&mut rng, agents);
        expect_valid(eval, "NECK", &Formula::k(g, phi.clone()))?;
        // modus ponens from phi and phi -> (psi -> phi)
        let d = p.formula_depth.sample(&mut rng);
        let psi = random_formula(&mut rng, &props, agents, d);
        let mut b = Bindings::default();
        b.formulas.insert("phi".into(), phi.clone());
        b.formulas.insert("psi".into(), psi.clone());
        let major = a1.instantiate(&b).expect("bound");
        if expect_valid(eval, "MP premise", &major)? {
            expect_valid(eval, "MP", &Formula::implies(psi, phi.clone()))?;
        }
    }

    // K{} and Kh{} both act as the universal modality
    for _ in 0..k {
        let d = p.formula_depth.sample(&mut rng);
        let f = random_formula(&mut rng, &props, agents, d);
        instances += 1;
        let truth = eval.eval(&f)?;
        let k_all = eval.eval(&Formula::k(Group::empty(), f.clone()))?;
        let kh_all = eval.eval(&Formula::kh(Group::empty(), f.clone()))?;
        let expected = if truth.is_full() {
            truth.clone()
        } else {
            StateSet::empty(truth.universe())
        };
        if k_all != expected || kh_all != expected {
            let bad = eval
                .model()
                .states()
                .find(|&s| k_all.contains(s) != expected.contains(s) || kh_all.contains(s) != expected.contains(s))
                .expect("unequal sets differ somewhere");
            violations.push(Violation {
                seed,
                check: "empty-group".into(),
                state: eval.model().state_name(bad).to_string(),
                formula: f.to_string(),
            });
        }
    }

    Ok((instances, violations))
}
