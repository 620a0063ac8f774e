//! Labeled transition systems and their file formats.

mod aut;
mod dot;
mod text;

use std::collections::BTreeSet;

pub use aut::{emit_aut, AutError, AutExport};
pub use dot::{emit_dot, DotOptions};
pub use text::{emit_lts_text, parse_lts_text, LtsParseError};

use crate::cs::CsGraph;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: usize,
    /// `None` is the internal (unobservable) action.
    pub label: Option<String>,
    pub target: usize,
}

impl Transition {
    pub fn new(source: usize, label: Option<&str>, target: usize) -> Self {
        Transition { source, label: label.map(str::to_owned), target }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lts {
    pub num_states: usize,
    pub initial: BTreeSet<usize>,
    pub finals: BTreeSet<usize>,
    pub transitions: Vec<Transition>,
}

impl Lts {
    pub fn new(num_states: usize, initial: usize) -> Self {
        Lts { num_states, initial: BTreeSet::from([initial]), ..Lts::default() }
    }

    pub fn with_finals(mut self, finals: impl IntoIterator<Item = usize>) -> Self {
        self.finals.extend(finals);
        self
    }

    pub fn with_transition(mut self, source: usize, label: Option<&str>, target: usize) -> Self {
        self.transitions.push(Transition::new(source, label, target));
        self
    }

    /// The initial state, if there is exactly one.
    pub fn single_initial(&self) -> Option<usize> {
        match self.initial.len() {
            1 => self.initial.first().copied(),
            _ => None,
        }
    }

    pub fn is_final(&self, s: usize) -> bool {
        self.finals.contains(&s)
    }

    /// Outgoing transitions per state, in list order.
    pub fn successors(&self) -> Vec<Vec<(Option<&str>, usize)>> {
        let mut out = vec![Vec::new(); self.num_states];
        for t in &self.transitions {
            out[t.source].push((t.label.as_deref(), t.target));
        }
        out
    }

    /// Distinct labels in first-occurrence order.
    pub fn labels(&self) -> Vec<&str> {
        let mut seen = indexmap::IndexSet::new();
        for t in &self.transitions {
            if let Some(l) = &t.label {
                seen.insert(l.as_str());
            }
        }
        seen.into_iter().collect()
    }
}

/// State `i` is the `i`-th configuration; each step becomes one transition
/// with the same label.
pub fn cs_to_lts(g: &CsGraph) -> Lts {
    let mut lts = Lts { num_states: g.configurations.len(), ..Lts::default() };
    for (i, c) in g.configurations.iter().enumerate() {
        if c.status.initial {
            lts.initial.insert(i);
        }
        if c.status.is_final {
            lts.finals.insert(i);
        }
    }
    lts.transitions = g
        .steps
        .iter()
        .map(|s| Transition { source: s.source, label: s.label.clone(), target: s.target })
        .collect();
    lts
}
