#![allow(dead_code)]

pub mod bisim;
pub mod oracle;

use std::path::PathBuf;

use proptest::prelude::*;
use slco::lts::Lts;
use slco::syntax::{load_model, Model};

pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("models")
}

pub fn model_path(name: &str) -> PathBuf {
    models_dir().join(format!("{name}.slco"))
}

pub fn load(name: &str) -> Model {
    let text = std::fs::read_to_string(model_path(name)).unwrap();
    load_model(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every shipped model with a finite state space.
pub const FINITE_MODELS: &[&str] = &[
    "arithmetic",
    "deadlock",
    "lossy_bidirectional",
    "ping_pong",
    "producer_consumer_a",
    "producer_consumer_b",
    "producer_consumer_broken",
    "running_example",
    "strings",
    "sync_choice",
    "sync_handshake",
    "timeout_retry",
    "workers",
];

pub const ALL_MODELS: &[&str] = &[
    "arithmetic",
    "deadlock",
    "lossy_bidirectional",
    "ping_pong",
    "producer_consumer_a",
    "producer_consumer_b",
    "producer_consumer_broken",
    "running_example",
    "strings",
    "sync_choice",
    "sync_handshake",
    "timeout_retry",
    "unbounded_counter",
    "workers",
];

/// Random LTSs with up to `max_states` states over labels `a`, `b`, `c`
/// (the first `labels` of them) plus the internal action.
pub fn arb_lts(max_states: usize, labels: usize, max_transitions: usize) -> impl Strategy<Value = Lts> {
    (1..=max_states).prop_flat_map(move |n| {
        let label = prop_oneof![
            1 => Just(None),
            3 => (0..labels).prop_map(|i| Some(["a", "b", "c", "d"][i].to_string())),
        ];
        (
            0..n,
            proptest::collection::btree_set(0..n, 0..=n),
            proptest::collection::vec((0..n, label, 0..n), 0..=max_transitions),
        )
            .prop_map(move |(init, finals, ts)| {
                let mut l = Lts::new(n, init).with_finals(finals);
                for (s, a, t) in ts {
                    l = l.with_transition(s, a.as_deref(), t);
                }
                l
            })
    })
}
