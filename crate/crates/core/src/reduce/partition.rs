use std::collections::{BTreeSet, HashMap};

use super::Relation;
use crate::lts::Lts;

/// A partition of the states of an LTS into blocks. Blocks are numbered
/// `0..num_blocks()` in order of their least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    block: Vec<usize>,
    count: usize,
}

impl Partition {
    fn from_keys<K: std::hash::Hash + Eq>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids = HashMap::new();
        let block: Vec<usize> = keys
            .into_iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Partition { block, count: ids.len() }
    }

    pub fn block_of(&self, s: usize) -> usize {
        self.block[s]
    }

    pub fn num_blocks(&self) -> usize {
        self.count
    }

    /// Members of each block, ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (s, &b) in self.block.iter().enumerate() {
            out[b].push(s);
        }
        out
    }
}

type Signature<'a> = BTreeSet<(Option<&'a str>, usize)>;

/// The coarsest `relation`-bisimulation on `l` that separates final from
/// non-final states, by iterated signature refinement.
pub fn bisimulation_partition(l: &Lts, relation: Relation) -> Partition {
    let succ = l.successors();
    let mut p = Partition::from_keys((0..l.num_states).map(|s| l.is_final(s)));
    loop {
        let sigs: Vec<Signature> = match relation {
            Relation::Strong => (0..l.num_states).map(|s| strong_signature(&succ, &p, s)).collect(),
            Relation::Branching => branching_signatures(&succ, &p),
        };
        let next = Partition::from_keys(sigs.into_iter().enumerate().map(|(s, sig)| (p.block[s], sig)));
        if next.count == p.count {
            return next;
        }
        p = next;
    }
}

fn strong_signature<'a>(succ: &[Vec<(Option<&'a str>, usize)>], p: &Partition, s: usize) -> Signature<'a> {
    succ[s].iter().map(|&(a, t)| (a, p.block[t])).collect()
}

fn branching_signatures<'a>(succ: &[Vec<(Option<&'a str>, usize)>], p: &Partition) -> Vec<Signature<'a>> {
    let n = succ.len();
    let mut out = Vec::with_capacity(n);
    let mut seen = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for s in 0..n {
        let home = p.block[s];
        let mut sig = Signature::new();
        seen[s] = s;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &(a, t) in &succ[u] {
                let inert = a.is_none() && p.block[t] == home;
                if inert {
                    if seen[t] != s {
                        seen[t] = s;
                        stack.push(t);
                    }
                } else {
                    sig.insert((a, p.block[t]));
                }
            }
        }
        out.push(sig);
    }
    out
}
