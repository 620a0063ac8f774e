//! Maximal strong and branching bisimulation as a greatest fixpoint over
//! all state pairs. Quadratic in space and slow; only for tiny LTSs.
//! Related states must agree on finality, and every state on an internal
//! path used to answer a move must stay related to the mover.

use slco::lts::Lts;
use slco::reduce::Relation;

pub type Rel = Vec<Vec<bool>>;

/// States reachable from `t` by internal moves through states related to `s`.
fn inert_reach(l: &Lts, r: &Rel, s: usize, t: usize) -> Vec<usize> {
    let mut seen = vec![false; l.num_states];
    let mut stack = vec![t];
    seen[t] = true;
    while let Some(u) = stack.pop() {
        for x in &l.transitions {
            if x.source == u && x.label.is_none() && !seen[x.target] && r[s][x.target] {
                seen[x.target] = true;
                stack.push(x.target);
            }
        }
    }
    (0..l.num_states).filter(|&u| seen[u]).collect()
}

/// Can `t` answer the move `s -a-> s2`? For branching, `t` may first take
/// internal moves, each to a state still related to `s`.
fn answers(l: &Lts, r: &Rel, relation: Relation, s: usize, a: &Option<String>, s2: usize, t: usize) -> bool {
    match relation {
        Relation::Strong => l
            .transitions
            .iter()
            .any(|x| x.source == t && x.label == *a && r[s2][x.target]),
        Relation::Branching => {
            if a.is_none() && r[s2][t] {
                return true;
            }
            inert_reach(l, r, s, t).into_iter().any(|mid| {
                l.transitions.iter().any(|x| x.source == mid && x.label == *a && r[s2][x.target])
            })
        }
    }
}

/// The largest `relation`-bisimulation on `l`.
pub fn maximal(l: &Lts, relation: Relation) -> Rel {
    let n = l.num_states;
    let mut r: Rel = (0..n).map(|s| (0..n).map(|t| l.is_final(s) == l.is_final(t)).collect()).collect();
    loop {
        let mut changed = false;
        for s in 0..n {
            for t in 0..n {
                if !r[s][t] {
                    continue;
                }
                let ok = l
                    .transitions
                    .iter()
                    .filter(|x| x.source == s)
                    .all(|x| answers(l, &r, relation, s, &x.label, x.target, t))
                    && l
                        .transitions
                        .iter()
                        .filter(|x| x.source == t)
                        .all(|x| answers(l, &r, relation, t, &x.label, x.target, s));
                if !ok {
                    r[s][t] = false;
                    r[t][s] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

/// Whether the initial states of `a` and `b` are related.
pub fn equivalent(a: &Lts, b: &Lts, relation: Relation) -> bool {
    let u = slco::reduce::disjoint_union(a, b);
    let r = maximal(&u, relation);
    let ia = a.single_initial().unwrap();
    let ib = b.single_initial().unwrap();
    r[ia][a.num_states + ib]
}
