use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::formula::{Formula, Group};
use crate::model::{ActionDoc, Model, ModelDoc};

use super::HarnessError;

/// Inclusive integer range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub min: usize,
    pub max: usize,
}

impl Span {
    pub const fn new(min: usize, max: usize) -> Self {
        Span { min, max }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        rng.gen_range(self.min..=self.max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub seed: u64,
    pub state_count: Span,
    pub agent_count: Span,
    /// Atomic actions generated per agent.
    pub atoms_per_group: Span,
    pub props: Span,
    /// Probability of each ordered state pair being a move of an action.
    pub transition_density: f64,
    pub formula_depth: Span,
    /// Probability that an action gets a multi-agent owner.
    pub multi_owner_prob: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            seed: 0,
            state_count: Span::new(1, 6),
            agent_count: Span::new(1, 3),
            atoms_per_group: Span::new(1, 2),
            props: Span::new(1, 3),
            transition_density: 0.3,
            formula_depth: Span::new(0, 2),
            multi_owner_prob: 0.2,
        }
    }
}

impl GenParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let spans = [
            ("state_count", self.state_count),
            ("agent_count", self.agent_count),
            ("atoms_per_group", self.atoms_per_group),
            ("props", self.props),
            ("formula_depth", self.formula_depth),
        ];
        for (name, s) in spans {
            if s.min > s.max {
                return Err(HarnessError::InvalidParams(format!(
                    "{name}: empty range {}..={}",
                    s.min, s.max
                )));
            }
        }
        if self.state_count.min == 0 || self.agent_count.min == 0 {
            return Err(HarnessError::InvalidParams(
                "models need at least one state and one agent".into(),
            ));
        }
        for (name, p) in [
            ("transition_density", self.transition_density),
            ("multi_owner_prob", self.multi_owner_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(HarnessError::InvalidParams(format!("{name} must lie in [0, 1]")));
            }
        }
        Ok(())
    }
}

const PROP_NAMES: [&str; 6] = ["p", "q", "r", "s", "t", "u"];

pub fn prop_name(i: usize) -> String {
    PROP_NAMES.get(i).map_or_else(|| format!("p{i}"), |s| s.to_string())
}

/// Seed of the `index`-th derived sample of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

pub fn random_model(p: &GenParams) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let props: Vec<String> = (0..p.props.sample(&mut rng)).map(prop_name).collect();
    random_model_from(&mut rng, p, &props)
}

/// Like [`random_model`], with a fixed list of proposition names.
pub fn random_model_with_props(p: &GenParams, props: &[String]) -> Model {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    random_model_from(&mut rng, p, props)
}

fn random_model_from(rng: &mut ChaCha8Rng, p: &GenParams, props: &[String]) -> Model {
    let n = p.state_count.sample(rng);
    let agents = p.agent_count.sample(rng);
    let states: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();

    let mut epistemic = BTreeMap::new();
    for agent in 0..agents {
        // each state joins an earlier block or opens a new one
        let mut blocks: Vec<Vec<String>> = Vec::new();
        for s in &states {
            if !blocks.is_empty() && rng.gen_bool(0.5) {
                let b = rng.gen_range(0..blocks.len());
                blocks[b].push(s.clone());
            } else {
                blocks.push(vec![s.clone()]);
            }
        }
        epistemic.insert(agent.to_string(), blocks);
    }

    let valuation = props
        .iter()
        .map(|prop| {
            let holds = states.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
            (prop.clone(), holds)
        })
        .collect();

    let mut actions = Vec::new();
    for agent in 0..agents {
        for _ in 0..p.atoms_per_group.sample(rng) {
            let owner = if agents >= 2 && rng.gen_bool(p.multi_owner_prob) {
                let mut others: Vec<usize> = (0..agents).filter(|&a| a != agent).collect();
                others.shuffle(rng);
                let extra = rng.gen_range(1..=others.len());
                let mut owner: Vec<usize> = others[..extra].to_vec();
                owner.push(agent);
                owner.sort();
                owner
            } else {
                vec![agent]
            };
            let mut moves = Vec::new();
            for s in &states {
                for t in &states {
                    if rng.gen_bool(p.transition_density) {
                        moves.push((s.clone(), t.clone()));
                    }
                }
            }
            actions.push(ActionDoc {
                name: format!("a{}", actions.len()),
                owner,
                moves,
            });
        }
    }

    let doc = ModelDoc {
        agents,
        states,
        valuation,
        epistemic,
        actions,
    };
    Model::validate(&doc).expect("generated models are valid by construction")
}

/// Any subset of the model's agents, each included with probability 1/2.
pub fn random_group(rng: &mut impl Rng, agents: usize) -> Group {
    Group::from_indices((0..agents).filter(|_| rng.gen_bool(0.5)))
}

/// A random group containing `g`.
pub fn random_supergroup(rng: &mut impl Rng, g: &Group, agents: usize) -> Group {
    g.union(&random_group(rng, agents))
}

pub fn random_formula(rng: &mut impl Rng, props: &[String], agents: usize, depth: usize) -> Formula {
    let leaf = |rng: &mut dyn RngCore| {
        if props.is_empty() || rng.gen_bool(0.1) {
            Formula::Top
        } else {
            Formula::Atom(props[rng.gen_range(0..props.len())].clone())
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    match rng.gen_range(0..10) {
        0 | 1 => leaf(rng),
        2 | 3 => Formula::not(random_formula(rng, props, agents, depth - 1)),
        4 | 5 => Formula::and(
            random_formula(rng, props, agents, depth - 1),
            random_formula(rng, props, agents, depth - 1),
        ),
        6 | 7 => Formula::k(random_group(rng, agents), random_formula(rng, props, agents, depth - 1)),
        _ => Formula::kh(random_group(rng, agents), random_formula(rng, props, agents, depth - 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let p = GenParams::default().with_seed(1);
        assert_eq!(random_model(&p), random_model(&p));
        assert_ne!(
            random_model(&p).to_json(),
            random_model(&p.clone().with_seed(2)).to_json()
        );
    }

    #[test]
    fn zero_density_means_no_moves() {
        let p = GenParams {
            transition_density: 0.0,
            ..GenParams::default()
        };
        for seed in 0..20 {
            let m = random_model(&p.clone().with_seed(seed));
            assert!(m.actions().iter().all(|a| a.moves.is_empty()));
        }
    }

    #[test]
    fn single_agent_means_singleton_owners() {
        let p = GenParams {
            agent_count: Span::new(1, 1),
            multi_owner_prob: 1.0,
            ..GenParams::default()
        };
        for seed in 0..20 {
            let m = random_model(&p.clone().with_seed(seed));
            assert!(m.actions().iter().all(|a| a.owner == Group::singleton(0)));
        }
    }

    #[test]
    fn params_validation() {
        assert!(GenParams::default().validate().is_ok());
        let bad = GenParams {
            state_count: Span::new(3, 2),
            ..GenParams::default()
        };
        assert!(bad.validate().is_err());
        let bad = GenParams {
            transition_density: 1.5,
            ..GenParams::default()
        };
        assert!(bad.validate().is_err());
    }
}
