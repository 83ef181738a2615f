//! Greatest ND-simulation between a target and an enacted system, and plain
//! simulation between behaviors.
//!
//! This module is an independent referee for the automata pipeline: it only
//! looks at the model types.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::cg::ControllerGenerator;
use crate::model::{Action, Behavior, EnactedSystem, Target};
use crate::plant::CompositionTuple;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimKind {
    Plain,
    NonDeterministic,
}

/// A simulation relation, with the reason each excluded pair was removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimRelation {
    pub kind: SimKind,
    /// `(left state, right state)` pairs.
    pub pairs: BTreeSet<(usize, usize)>,
    /// For every excluded pair, an action the right side could not match.
    pub removed: BTreeMap<(usize, usize), Action>,
    /// Tuples reachable from the initial pair when only delegations that
    /// keep every outcome inside the relation are taken (ND kind only).
    pub reachable: BTreeSet<CompositionTuple>,
    pub initial: (usize, usize),
}

impl SimRelation {
    pub fn contains(&self, left: usize, right: usize) -> bool {
        self.pairs.contains(&(left, right))
    }

    pub fn holds_initially(&self) -> bool {
        self.pairs.contains(&self.initial)
    }
}

/// Indexes `j` that may serve `a` from `(t, b)` given the current relation.
fn good_indexes(target: &Target, e: &EnactedSystem, rel: &BTreeSet<(usize, usize)>, t: usize, b: usize, a: &Action) -> Vec<usize> {
    let tb = target.behavior();
    let n = e.state(b).len();
    let t_succ: Vec<usize> = tb.successors(t, a).collect();
    (1..=n)
        .filter(|&j| {
            let succ: Vec<usize> = e.successors(b, a, j).collect();
            !succ.is_empty() && t_succ.iter().all(|&t2| succ.iter().all(|&b2| rel.contains(&(t2, b2))))
        })
        .collect()
}

/// The largest ND-simulation of `target` by `enacted`, by iterated removal
/// of violating pairs from `T × B_S`.
pub fn greatest_nd_simulation(target: &Target, enacted: &EnactedSystem) -> SimRelation {
    let tb = target.behavior();
    let mut rel: BTreeSet<(usize, usize)> = (0..tb.state_count())
        .flat_map(|t| (0..enacted.state_count()).map(move |b| (t, b)))
        .collect();
    let mut removed = BTreeMap::new();
    loop {
        let mut dropped = Vec::new();
        for &(t, b) in &rel {
            for a in tb.transitions_from(t).iter().map(|(a, _)| a).collect::<BTreeSet<_>>() {
                if good_indexes(target, enacted, &rel, t, b, a).is_empty() {
                    dropped.push(((t, b), a.clone()));
                    break;
                }
            }
        }
        if dropped.is_empty() {
            break;
        }
        for (pair, a) in dropped {
            rel.remove(&pair);
            removed.insert(pair, a);
        }
    }

    let initial = (tb.initial(), enacted.initial());
    let mut reachable = BTreeSet::new();
    if rel.contains(&initial) {
        let mut seen = BTreeSet::from([initial]);
        let mut queue = VecDeque::from([initial]);
        while let Some((t, b)) = queue.pop_front() {
            reachable.insert(CompositionTuple {
                target: tb.state_name(t).to_string(),
                behaviors: enacted.state_names(b).to_vec(),
            });
            for (a, t2) in tb.transitions_from(t) {
                for j in good_indexes(target, enacted, &rel, t, b, a) {
                    for b2 in enacted.successors(b, a, j) {
                        if seen.insert((*t2, b2)) {
                            queue.push_back((*t2, b2));
                        }
                    }
                }
            }
        }
    }
    SimRelation {
        kind: SimKind::NonDeterministic,
        pairs: rel,
        removed,
        reachable,
        initial,
    }
}

/// The largest plain simulation of `left` by `right`.
pub fn greatest_simulation(left: &Behavior, right: &Behavior) -> SimRelation {
    let mut rel: BTreeSet<(usize, usize)> = (0..left.state_count())
        .flat_map(|s| (0..right.state_count()).map(move |r| (s, r)))
        .collect();
    let mut removed = BTreeMap::new();
    loop {
        let mut dropped = Vec::new();
        for &(s, r) in &rel {
            let unmatched = left.transitions_from(s).iter().find(|(a, s2)| {
                !right.successors(r, a).any(|r2| rel.contains(&(*s2, r2)))
            });
            if let Some((a, _)) = unmatched {
                dropped.push(((s, r), a.clone()));
            }
        }
        if dropped.is_empty() {
            break;
        }
        for (pair, a) in dropped {
            rel.remove(&pair);
            removed.insert(pair, a);
        }
    }
    SimRelation {
        kind: SimKind::Plain,
        pairs: rel,
        removed,
        reachable: BTreeSet::new(),
        initial: (left.initial(), right.initial()),
    }
}

/// `left ≼ right` on initial states.
pub fn simulates(left: &Behavior, right: &Behavior) -> bool {
    greatest_simulation(left, right).holds_initially()
}

/// A trace of `left` along which `right` eventually cannot follow, when
/// `left` is not simulated by `right`. The last action is the one `right`
/// is missing; for a deterministic `right` the trace is exactly distinguishing.
pub fn simulation_certificate(left: &Behavior, right: &Behavior) -> Option<Vec<Action>> {
    let rel = greatest_simulation(left, right);
    if rel.holds_initially() {
        return None;
    }
    let mut trace = Vec::new();
    let (mut s, mut r) = rel.initial;
    loop {
        let a = rel.removed[&(s, r)].clone();
        // a left move whose every right answer was already removed
        let next = left
            .successors(s, &a)
            .find(|&s2| right.successors(r, &a).all(|r2| !rel.contains(s2, r2)))
            .expect("removal reason is witnessed");
        trace.push(a.clone());
        match right.successors(r, &a).next() {
            None => return Some(trace),
            Some(r2) => {
                s = next;
                r = r2;
            }
        }
        if trace.len() > left.state_count() * right.state_count() + 1 {
            // the removal order guarantees termination; guard regardless
            return Some(trace);
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub ok: bool,
    /// Tuples the simulation reaches but the controller generator lacks.
    pub missing: BTreeSet<CompositionTuple>,
    /// Tuples in the controller generator the simulation does not reach.
    pub extra: BTreeSet<CompositionTuple>,
}

/// Compares the composition tuples of `cg` with the pairs reachable in the
/// ND-simulation.
pub fn crosscheck_cg(cg: &ControllerGenerator, sim: &SimRelation) -> CrosscheckReport {
    let tuples: BTreeSet<CompositionTuple> = cg.states.iter().map(|s| s.tuple.clone()).collect();
    let missing: BTreeSet<_> = sim.reachable.difference(&tuples).cloned().collect();
    let extra: BTreeSet<_> = tuples.difference(&sim.reachable).cloned().collect();
    CrosscheckReport {
        ok: missing.is_empty() && extra.is_empty(),
        missing,
        extra,
    }
}
