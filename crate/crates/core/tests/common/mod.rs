#![allow(dead_code)]

use std::path::PathBuf;

use dkh::{Formula, Group, Model, StateId};
use proptest::prelude::*;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn load(name: &str) -> Model {
    let text = std::fs::read_to_string(data(name)).expect("fixture readable");
    Model::from_json(&text).expect("fixture valid")
}

pub fn state(m: &Model, name: &str) -> StateId {
    m.state_id(name).unwrap_or_else(|| panic!("no state {name}"))
}

pub fn group(ids: &[usize]) -> Group {
    Group::from_indices(ids.iter().copied())
}

pub fn arb_group(agents: usize) -> impl Strategy<Value = Group> {
    proptest::collection::btree_set(0..agents, 0..=agents).prop_map(Group::from_indices)
}

pub fn arb_formula(agents: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        "[a-z][a-z0-9_]{0,3}"
            .prop_filter("keywords are not atoms", |s| s != "top" && s != "bot")
            .prop_map(Formula::Atom),
    ];
    leaf.prop_recursive(5, 40, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (arb_group(agents), inner.clone()).prop_map(|(g, f)| Formula::k(g, f)),
            (arb_group(agents), inner).prop_map(|(g, f)| Formula::kh(g, f)),
        ]
    })
}
