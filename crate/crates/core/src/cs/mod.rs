//! Configurations and steps: the explicit state space of an SLCO model.

mod config;
mod engine;
mod text;

use indexmap::IndexSet;

pub use config::*;
pub use engine::{Bindings, Engine, EvalError, Successor};
pub use text::{parse_cs_configuration, parse_cs_graph, parse_cs_step, write_cs_graph, CsParseError, ParsedStep};

use crate::syntax::{Diagnostics, Model};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExploreError {
    #[error("invalid model:\n{0}")]
    InvalidModel(#[from] Diagnostics),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("state space exceeds {limit} configurations ({frontier} still unexplored)")]
    LimitExceeded { limit: usize, frontier: usize },
    #[error("active state {0} does not occur in the configuration")]
    UnknownActiveState(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExploreLimits {
    /// Abort once more than this many configurations have been discovered.
    pub max_configurations: Option<usize>,
    /// Capacity of every asynchronous buffer.
    pub buffer_capacity: usize,
}

impl Default for ExploreLimits {
    fn default() -> Self {
        ExploreLimits { max_configurations: None, buffer_capacity: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub source: usize,
    pub label: Option<String>,
    pub target: usize,
}

/// Reachable configurations (numbered in discovery order; 0 is initial)
/// and every step between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsGraph {
    pub configurations: Vec<Configuration>,
    pub steps: Vec<Step>,
}

impl CsGraph {
    pub fn initial(&self) -> &Configuration {
        &self.configurations[0]
    }

    pub fn final_configurations(&self) -> impl Iterator<Item = (usize, &Configuration)> {
        self.configurations.iter().enumerate().filter(|(_, c)| c.status.is_final)
    }

    pub fn to_cs_text(&self) -> String {
        let mut s = String::new();
        write_cs_graph(&mut s, self).expect("writing to a String cannot fail");
        s
    }
}

/// Builds the initial configuration of `m`.
pub fn initial_configuration(m: &Model) -> Result<Configuration, ExploreError> {
    Ok(Engine::new(m, 1)?.initial_configuration())
}

/// Generates the full state space of `m` breadth-first, then marks the
/// configurations in which every machine rests in a final state.
pub fn explore(m: &Model, limits: ExploreLimits) -> Result<CsGraph, ExploreError> {
    let engine = Engine::new(m, limits.buffer_capacity)?;
    explore_with(&engine, limits.max_configurations)
}

pub fn explore_with(engine: &Engine<'_>, max_configurations: Option<usize>) -> Result<CsGraph, ExploreError> {
    let mut seen: IndexSet<Configuration> = IndexSet::new();
    seen.insert(engine.initial_configuration().without_status());
    if let Some(limit) = max_configurations {
        if limit == 0 {
            return Err(ExploreError::LimitExceeded { limit, frontier: 1 });
        }
    }
    let mut steps = Vec::new();
    let mut next = 0;
    while next < seen.len() {
        let source = seen[next].clone();
        for succ in engine.successors(&source)? {
            let (target, fresh) = seen.insert_full(succ.target);
            if fresh {
                if let Some(limit) = max_configurations {
                    if seen.len() > limit {
                        return Err(ExploreError::LimitExceeded { limit, frontier: seen.len() - next - 1 });
                    }
                }
            }
            steps.push(Step { source: next, label: succ.label, target });
        }
        next += 1;
    }

    let mut configurations: Vec<Configuration> = seen.into_iter().collect();
    configurations[0].status.initial = true;
    for c in &mut configurations {
        c.status.is_final = engine.is_final(c);
    }
    Ok(CsGraph { configurations, steps })
}
