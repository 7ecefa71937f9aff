use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;
use crate::model::Model;
use crate::semantics::{Evaluate, ModelChecker};
use crate::states::StateId;
use crate::template::Bindings;

use super::{derive_seed, prop_name, random_model_with_props, GenParams, HarnessError, Span, Template};

/// A model and state falsifying an instance of a template.
#[derive(Clone, Debug, PartialEq)]
pub struct Countermodel {
    /// Index of the successful sample within the search.
    pub sample: u64,
    /// Seed the model was generated from.
    pub seed: u64,
    pub model: Model,
    pub state: StateId,
    pub bindings: Bindings,
    pub instance: Formula,
}

impl Countermodel {
    /// Re-evaluates the instance from scratch; true when it still fails at `state`.
    pub fn recheck(&self) -> bool {
        ModelChecker::new(&self.model)
            .eval(&self.instance)
            .is_ok_and(|truth| !truth.contains(self.state))
    }
}

/// Samples up to `budget` random models with random instantiations and
/// returns the first falsified instance. `None` means the budget ran out,
/// which says nothing about validity.
pub fn find_countermodel(
    template: &Template,
    p: &GenParams,
    budget: usize,
) -> Result<Option<Countermodel>, HarnessError> {
    if budget == 0 {
        return Err(HarnessError::ZeroBudget);
    }
    let mut params = p.clone();
    let need = template.required_agents();
    params.agent_count = Span::new(params.agent_count.min.max(need), params.agent_count.max.max(need));
    params.validate()?;

    let fixed_atoms: Vec<&str> = template.pattern.atoms().into_iter().collect();
    for sample in 0..budget as u64 {
        let seed = derive_seed(p.seed, sample);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let count = params.props.sample(&mut rng);
        let mut props: Vec<String> = (0..count).map(prop_name).collect();
        for a in &fixed_atoms {
            if !props.iter().any(|p| p == a) {
                props.push(a.to_string());
            }
        }
        let model = random_model_with_props(&params.clone().with_seed(seed), &props);
        let bindings = template.random_bindings(&mut rng, &props, model.agent_count(), &params.formula_depth);
        let instance = template
            .pattern
            .instantiate(&bindings)
            .expect("all metavariables bound");
        let Ok(truth) = ModelChecker::new(&model).eval(&instance) else {
            continue;
        };
        if let Some(state) = truth.complement().first() {
            let found = Countermodel {
                sample,
                seed,
                model,
                state,
                bindings,
                instance,
            };
            if found.recheck() {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}
