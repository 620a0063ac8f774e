//! Label hiding, bisimulation reduction and equivalence checking.
//!
//! Unlabeled transitions are the internal action. Final states are
//! observable: a final state is never related to a non-final one. The
//! initial-state flag is not an observation.

mod partition;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use partition::{bisimulation_partition, Partition};

use crate::lts::{Lts, Transition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Strong,
    Branching,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Strong => "strong",
            Relation::Branching => "branching",
        })
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strong" => Ok(Relation::Strong),
            "branching" => Ok(Relation::Branching),
            other => Err(format!("unknown relation `{other}` (expected `strong` or `branching`)")),
        }
    }
}

/// Which labels become internal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HideSpec {
    /// Hide every label not listed.
    Keep(BTreeSet<String>),
    /// Hide exactly the listed labels.
    Hide(BTreeSet<String>),
}

impl HideSpec {
    pub fn keep<I: IntoIterator<Item = S>, S: Into<String>>(labels: I) -> Self {
        HideSpec::Keep(labels.into_iter().map(Into::into).collect())
    }

    pub fn hide<I: IntoIterator<Item = S>, S: Into<String>>(labels: I) -> Self {
        HideSpec::Hide(labels.into_iter().map(Into::into).collect())
    }

    pub fn hides(&self, label: &str) -> bool {
        match self {
            HideSpec::Keep(keep) => !keep.contains(label),
            HideSpec::Hide(hide) => hide.contains(label),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("expected exactly one initial state, found {0}")]
    InitialStates(usize),
}

/// Turns every hidden label into the internal action. States and the
/// number and endpoints of transitions are unchanged.
pub fn hide_labels(l: &Lts, spec: &HideSpec) -> Lts {
    let transitions = l
        .transitions
        .iter()
        .map(|t| Transition {
            source: t.source,
            label: t.label.clone().filter(|label| !spec.hides(label)),
            target: t.target,
        })
        .collect();
    Lts { transitions, ..l.clone() }
}

/// The quotient of `l` by the maximal `relation`-bisimulation. Blocks are
/// numbered by their least member state; transitions are deduplicated and,
/// for branching bisimulation, internal moves within a block dropped.
pub fn reduce(l: &Lts, relation: Relation) -> Result<Lts, ReduceError> {
    let init = l.single_initial().ok_or(ReduceError::InitialStates(l.initial.len()))?;
    let partition = bisimulation_partition(l, relation);
    Ok(quotient(l, &partition, init, relation))
}

fn quotient(l: &Lts, p: &Partition, init: usize, relation: Relation) -> Lts {
    let mut transitions = BTreeSet::new();
    for t in &l.transitions {
        let (src, dst) = (p.block_of(t.source), p.block_of(t.target));
        if relation == Relation::Branching && t.label.is_none() && src == dst {
            continue;
        }
        transitions.insert(Transition { source: src, label: t.label.clone(), target: dst });
    }
    Lts {
        num_states: p.num_blocks(),
        initial: BTreeSet::from([p.block_of(init)]),
        finals: l.finals.iter().map(|&s| p.block_of(s)).collect(),
        transitions: transitions.into_iter().collect(),
    }
}

/// True iff the initial states of `a` and `b` are `relation`-bisimilar.
pub fn equivalent(a: &Lts, b: &Lts, relation: Relation) -> Result<bool, ReduceError> {
    let ia = a.single_initial().ok_or(ReduceError::InitialStates(a.initial.len()))?;
    let ib = b.single_initial().ok_or(ReduceError::InitialStates(b.initial.len()))?;
    let union = disjoint_union(a, b);
    let p = bisimulation_partition(&union, relation);
    Ok(p.block_of(ia) == p.block_of(a.num_states + ib))
}

/// `a` followed by `b` with `b`'s states shifted by `a.num_states`. The
/// initial set is `a`'s.
pub fn disjoint_union(a: &Lts, b: &Lts) -> Lts {
    let off = a.num_states;
    let mut u = a.clone();
    u.num_states += b.num_states;
    u.finals.extend(b.finals.iter().map(|s| s + off));
    u.transitions.extend(b.transitions.iter().map(|t| Transition {
        source: t.source + off,
        label: t.label.clone(),
        target: t.target + off,
    }));
    u
}
