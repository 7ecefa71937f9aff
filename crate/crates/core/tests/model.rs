mod common;

use common::{arb_group, group, load, state};
use dkh::harness::{random_model, GenParams};
use dkh::{Group, Model, ModelError, StateId};
use proptest::prelude::*;

fn same_class(m: &Model, g: &Group, s: StateId, t: StateId) -> bool {
    m.class_of(g, s).states.contains(t)
}

#[test]
fn example5_quotients_match_pairwise_oracle() {
    let m = load("ex5.model.json");
    let doc = m.to_doc();
    // s ~_G t iff every member lists both in one block (or s = t)
    let related = |agent: usize, s: &str, t: &str| {
        s == t
            || doc.epistemic.get(&agent.to_string()).is_some_and(|blocks| {
                blocks
                    .iter()
                    .any(|b| b.iter().any(|x| x == s) && b.iter().any(|x| x == t))
            })
    };
    for g in [group(&[]), group(&[0]), group(&[1]), group(&[0, 1])] {
        for s in &doc.states {
            for t in &doc.states {
                let expected = g.members().all(|a| related(a.0, s, t));
                assert_eq!(same_class(&m, &g, state(&m, s), state(&m, t)), expected, "{g} {s} {t}");
            }
        }
    }
    let q = m.quotient(&group(&[0, 1]));
    assert_eq!(q.len(), 8);
    assert_eq!(m.quotient(&group(&[0])).len(), 6);
    assert_eq!(m.quotient(&Group::empty()).len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn classes_form_equivalence_and_refine_with_group(seed in any::<u64>(), g in arb_group(3), h in arb_group(3)) {
        let m = random_model(&GenParams::default().with_seed(seed));
        let n = m.agent_count();
        let g = Group::from_indices(g.members().map(|a| a.0).filter(|&a| a < n));
        let h = g.union(&Group::from_indices(h.members().map(|a| a.0).filter(|&a| a < n)));
        for s in m.states() {
            prop_assert!(same_class(&m, &g, s, s));
            for t in m.states() {
                prop_assert_eq!(same_class(&m, &g, s, t), same_class(&m, &g, t, s));
                // bigger groups distinguish more
                if same_class(&m, &h, s, t) {
                    prop_assert!(same_class(&m, &g, s, t));
                }
                for u in m.states() {
                    if same_class(&m, &g, s, t) && same_class(&m, &g, t, u) {
                        prop_assert!(same_class(&m, &g, s, u));
                    }
                }
            }
        }
        let total: usize = m.quotient(&g).to_classes().iter().map(|c| c.states.len()).sum();
        prop_assert_eq!(total, m.state_count());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let m = random_model(&GenParams::default().with_seed(seed));
        prop_assert_eq!(Model::from_json(&m.to_json()).unwrap(), m);
    }
}

#[test]
fn validation_errors() {
    let base = r#"{"agents": 2, "states": ["a", "b"], "valuation": {}, "epistemic": {EPI}, "actions": [ACT]}"#;
    let model = |epi: &str, act: &str| Model::from_json(&base.replace("EPI", epi).replace("ACT", act));
    assert!(model("", "").is_ok());
    assert!(matches!(
        model(r#""0": [["a"], ["a", "b"]]"#, ""),
        Err(ModelError::OverlappingBlocks { .. })
    ));
    assert!(matches!(
        model(r#""2": [["a"]]"#, ""),
        Err(ModelError::AgentOutOfRange(_))
    ));
    assert!(matches!(
        model("", r#"{"name": "x", "owner": [], "moves": []}"#),
        Err(ModelError::EmptyOwner(_))
    ));
    assert!(matches!(
        model("", r#"{"name": "x", "owner": [0], "moves": [["a", "c"]]}"#),
        Err(ModelError::UnknownState { .. })
    ));
    let twice = r#"{"name": "x", "owner": [0], "moves": []}, {"name": "x", "owner": [1], "moves": []}"#;
    assert!(matches!(model("", twice), Err(ModelError::DuplicateAction(_))));
    assert!(Model::from_json("{").is_err());
}
