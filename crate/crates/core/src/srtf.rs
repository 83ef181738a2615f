//! Supremal realizable target fragments for deterministic systems.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::automata::{EventKind, StateId, TargetTransition};
use crate::lts::Lts;
use crate::model::{Action, Behavior, System, Target};
use crate::ndsim::{greatest_simulation, simulation_certificate};
use crate::plant::{build_maximal_plant, PlantError};
use crate::supcon::{supcon, SupconError, SupervisorGenerator};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SrtfError {
    #[error(transparent)]
    Plant(#[from] PlantError),
    #[error(transparent)]
    Supcon(#[from] SupconError),
}

/// One edge of a fragment, tagged with the target transition requested and
/// the behavior it was delegated to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FragmentEdge {
    pub from: usize,
    pub transition: TargetTransition,
    pub index: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetFragment {
    /// The fragment as a possibly nondeterministic target, states `y0, y1, …`.
    pub target: Target,
    /// Supervisor state backing each fragment state.
    pub origin: Vec<StateId>,
    pub edges: Vec<FragmentEdge>,
}

impl TargetFragment {
    pub fn state_count(&self) -> usize {
        self.target.behavior().state_count()
    }

    /// No realizable behavior beyond the empty trace.
    pub fn is_trivial(&self) -> bool {
        self.target.behavior().transition_count() == 0
    }

    fn to_lts(&self) -> Lts<Action> {
        let b = self.target.behavior();
        let mut lts = Lts::new(b.state_count(), b.initial());
        for (s, a, t) in b.transitions() {
            lts.add_edge(s, a.clone(), t);
        }
        lts
    }

    /// The bisimulation quotient. Each class keeps the origin of its
    /// lowest-numbered member and the tags of the first edge it inherits.
    /// Fragment states are all reachable by construction.
    pub fn quotient(&self) -> TargetFragment {
        let classes = self.to_lts().bisimulation_classes();
        let mut class_id = BTreeMap::new();
        let mut members: Vec<usize> = Vec::new();
        for (s, &c) in classes.iter().enumerate() {
            class_id.entry(c).or_insert_with(|| {
                members.push(s);
                members.len() - 1
            });
        }
        let of = |s: usize| Some(class_id[&classes[s]]);
        let mut edges: BTreeMap<(usize, Action, usize), FragmentEdge> = BTreeMap::new();
        for e in &self.edges {
            let (Some(from), Some(to)) = (of(e.from), of(e.to)) else {
                continue;
            };
            edges
                .entry((from, e.transition.action.clone(), to))
                .or_insert(FragmentEdge { from, to, ..e.clone() });
        }
        let names: Vec<String> = (0..members.len()).map(|i| format!("y{i}")).collect();
        let behavior = Behavior::new(
            self.target.behavior().name(),
            names.iter().map(String::as_str),
            "y0",
            edges
                .keys()
                .map(|(f, a, t)| (names[*f].clone(), a.to_string(), names[*t].clone()))
                .collect::<Vec<_>>(),
        )
        .expect("quotient states are well formed");
        TargetFragment {
            target: Target::nondeterministic(behavior),
            origin: members.iter().map(|&m| self.origin[m]).collect(),
            edges: edges.into_values().collect(),
        }
    }
}

/// Computes `T*` from the supervisor over the maximal plant: fragment states
/// are the idle supervisor states, and `y -a→ y'` whenever some `θ·j` with
/// action `a` leads from `y` to `y'`.
pub fn compute_srtf(system: &System, target: &Target) -> Result<TargetFragment, SrtfError> {
    let plant = build_maximal_plant(system, target)?;
    let r = supcon(&plant, &plant)?;
    Ok(extract_fragment(target, &r))
}

pub fn extract_fragment(target: &Target, r: &SupervisorGenerator) -> TargetFragment {
    let g = &r.automaton;
    let name = format!("{}*", target.behavior().name());
    if r.is_empty() {
        return TargetFragment {
            target: Target::nondeterministic(
                Behavior::new(name, ["y0"], "y0", Vec::<(&str, &str, &str)>::new()).expect("one state"),
            ),
            origin: vec![r.plant_map[0]],
            edges: Vec::new(),
        };
    }
    // idle states in breadth-first order, initial first
    let idle: Vec<StateId> = g.states().filter(|&s| g.is_marked(s)).collect();
    let id: BTreeMap<StateId, usize> = idle.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut edges = Vec::new();
    for &y in &idle {
        for (theta, c) in g.transitions(y) {
            let EventKind::TransReq(transition) = theta.kind() else {
                continue;
            };
            for (d, y2) in g.transitions(c) {
                if let EventKind::Delegate(j) = d.kind() {
                    edges.push(FragmentEdge {
                        from: id[&y],
                        transition: transition.clone(),
                        index: *j,
                        to: id[&y2],
                    });
                }
            }
        }
    }
    edges.sort();
    let names: Vec<String> = (0..idle.len()).map(|i| format!("y{i}")).collect();
    let mut triples: Vec<(String, String, String)> = edges
        .iter()
        .map(|e| (names[e.from].clone(), e.transition.action.to_string(), names[e.to].clone()))
        .collect();
    triples.dedup();
    let behavior = Behavior::new(name, names.iter().map(String::as_str), "y0", triples).expect("fragment is well formed");
    TargetFragment {
        target: Target::nondeterministic(behavior),
        origin: idle,
        edges,
    }
}

/// Mutual simulation between two targets over their transition structure.
pub fn simulation_equivalent(t1: &Target, t2: &Target) -> bool {
    simulation_difference(t1, t2).is_none()
}

/// `None` when the targets are simulation equivalent; otherwise a trace of
/// one side the other cannot follow, tagged with the side it belongs to
/// (`true` for `t1`).
pub fn simulation_difference(t1: &Target, t2: &Target) -> Option<(bool, Vec<Action>)> {
    let (b1, b2) = (t1.behavior(), t2.behavior());
    if !greatest_simulation(b1, b2).holds_initially() {
        return simulation_certificate(b1, b2).map(|w| (true, w));
    }
    if !greatest_simulation(b2, b1).holds_initially() {
        return simulation_certificate(b2, b1).map(|w| (false, w));
    }
    None
}
