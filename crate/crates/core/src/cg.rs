//! Controller generators extracted from a composition supervisor, and
//! stepping the controllers they induce.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automata::{EventKind, Generator, StateId};
use crate::lts::Lts;
use crate::model::Action;
use crate::plant::{CompositionTuple, Phase};
use crate::supcon::SupervisorGenerator;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CgError {
    #[error("controller generator has no state {0}")]
    UnknownState(usize),
    #[error("the controller generator is empty: no composition exists")]
    Empty,
    #[error("supervisor state {state} is not a composition-plant state ({reason}); use the fragment pipeline")]
    PhaseMismatch { state: StateId, reason: &'static str },
    #[error("supervisor states sharing {tuple} behave differently; a memory controller generator is required")]
    MemoryRequired { tuple: CompositionTuple },
    #[error("delegating `{action}` to {index} is not allowed here (allowed: {allowed:?})")]
    IllegalDelegation {
        action: Action,
        index: usize,
        allowed: BTreeSet<usize>,
    },
    #[error("behavior {index} cannot evolve into `{observed}` on `{action}`")]
    ModelViolation {
        action: Action,
        index: usize,
        observed: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CgKind {
    /// States are composition tuples.
    Tuples,
    /// States are supervisor states (memory).
    Memory,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgState {
    pub tuple: CompositionTuple,
    /// The supervisor state behind a memory state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub memory: Option<StateId>,
}

/// `(q, σ, j, q′)` with the local state `observed` behavior `j` evolved into.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CgEdge {
    pub from: usize,
    pub action: Action,
    pub index: usize,
    pub observed: String,
    pub to: usize,
}

/// A finite structure whose selection function enumerates every legal
/// delegation. `initial` is `None` exactly when no composition exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllerGenerator {
    pub kind: CgKind,
    pub actions: BTreeSet<Action>,
    pub behaviors: usize,
    pub initial: Option<usize>,
    pub states: Vec<CgState>,
    /// Sorted, so edges leaving a state are contiguous.
    pub edges: Vec<CgEdge>,
}

impl ControllerGenerator {
    pub fn empty(kind: CgKind, actions: BTreeSet<Action>, behaviors: usize) -> Self {
        ControllerGenerator {
            kind,
            actions,
            behaviors,
            initial: None,
            states: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.initial.is_none()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn tuple(&self, q: usize) -> Result<&CompositionTuple, CgError> {
        self.states.get(q).map(|s| &s.tuple).ok_or(CgError::UnknownState(q))
    }

    pub fn edges_from(&self, q: usize) -> &[CgEdge] {
        let lo = self.edges.partition_point(|e| e.from < q);
        let hi = self.edges.partition_point(|e| e.from <= q);
        &self.edges[lo..hi]
    }

    /// `ω(q, σ)`.
    pub fn select(&self, q: usize, action: &Action) -> Result<BTreeSet<usize>, CgError> {
        if q >= self.states.len() {
            return Err(CgError::UnknownState(q));
        }
        Ok(self
            .edges_from(q)
            .iter()
            .filter(|e| &e.action == action)
            .map(|e| e.index)
            .collect())
    }

    /// Actions with a nonempty selection at `q`.
    pub fn requests(&self, q: usize) -> Result<BTreeSet<Action>, CgError> {
        if q >= self.states.len() {
            return Err(CgError::UnknownState(q));
        }
        Ok(self.edges_from(q).iter().map(|e| e.action.clone()).collect())
    }

    /// Local states behavior `index` may evolve into on `action` at `q`.
    pub fn outcomes(&self, q: usize, action: &Action, index: usize) -> Vec<&CgEdge> {
        self.edges_from(q)
            .iter()
            .filter(|e| &e.action == action && e.index == index)
            .collect()
    }

    pub fn successor(&self, q: usize, action: &Action, index: usize, observed: &str) -> Option<usize> {
        self.edges_from(q)
            .iter()
            .find(|e| &e.action == action && e.index == index && e.observed == observed)
            .map(|e| e.to)
    }

    /// Labelled transition system over `(action, index)` labels, colouring
    /// nothing; used for bisimulation against reference automata.
    pub fn to_lts(&self) -> Lts<(Action, usize)> {
        let mut lts = Lts::new(self.states.len(), self.initial.unwrap_or(0));
        for e in &self.edges {
            lts.add_edge(e.from, (e.action.clone(), e.index), e.to);
        }
        lts
    }

    /// Bisimulation quotient on `(action, index, observed)` labels; keeps the
    /// first tuple of each class.
    pub fn quotient(&self) -> ControllerGenerator {
        let Some(init) = self.initial else {
            return self.clone();
        };
        let mut lts = Lts::new(self.states.len(), init);
        for e in &self.edges {
            lts.add_edge(e.from, (e.action.clone(), e.index, e.observed.clone()), e.to);
        }
        let classes = lts.bisimulation_classes();
        let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order: Vec<usize> = Vec::new();
        // number classes in breadth-first order from the initial state
        let mut seen = vec![false; self.states.len()];
        let mut queue = VecDeque::from([init]);
        seen[init] = true;
        while let Some(q) = queue.pop_front() {
            if !rep.contains_key(&classes[q]) {
                rep.insert(classes[q], order.len());
                order.push(q);
            }
            for e in self.edges_from(q) {
                if !seen[e.to] {
                    seen[e.to] = true;
                    queue.push_back(e.to);
                }
            }
        }
        let states = order
            .iter()
            .map(|&q| CgState {
                tuple: self.states[q].tuple.clone(),
                memory: self.states[q].memory,
            })
            .collect();
        let mut edges: Vec<CgEdge> = order
            .iter()
            .flat_map(|&q| self.edges_from(q).iter())
            .map(|e| CgEdge {
                from: rep[&classes[e.from]],
                to: rep[&classes[e.to]],
                ..e.clone()
            })
            .collect();
        edges.sort();
        edges.dedup();
        ControllerGenerator {
            kind: self.kind,
            actions: self.actions.clone(),
            behaviors: self.behaviors,
            initial: Some(0),
            states,
            edges,
        }
    }
}

struct Round {
    from: StateId,
    action: Action,
    index: usize,
    observed: String,
    to: StateId,
}

/// Compresses every request, delegation, evolution triple of `R` that starts
/// at an idle state into one round.
fn rounds(r: &Generator) -> Result<(Vec<StateId>, Vec<Round>), CgError> {
    let idle = |s: StateId| -> Result<&CompositionTuple, CgError> {
        match r.plant_state(s) {
            Some(p) if p.phase == Phase::Idle => Ok(&p.tuple),
            Some(p) if matches!(p.phase, Phase::Chosen(_)) => Err(CgError::PhaseMismatch {
                state: s,
                reason: "transition-request phase",
            }),
            Some(_) => Err(CgError::PhaseMismatch {
                state: s,
                reason: "expected an idle state",
            }),
            None => Err(CgError::PhaseMismatch {
                state: s,
                reason: "state carries no plant annotation",
            }),
        }
    };
    idle(r.initial())?;
    let mut order = vec![r.initial()];
    let mut seen = HashMap::from([(r.initial(), 0usize)]);
    let mut queue = VecDeque::from([r.initial()]);
    let mut out = Vec::new();
    while let Some(y) = queue.pop_front() {
        for (req, y1) in r.transitions(y) {
            let EventKind::Request(a) = req.kind() else {
                return Err(CgError::PhaseMismatch {
                    state: y,
                    reason: "idle state leaves by a non-request event",
                });
            };
            for (del, y2) in r.transitions(y1) {
                let EventKind::Delegate(j) = del.kind() else {
                    return Err(CgError::PhaseMismatch {
                        state: y1,
                        reason: "request is followed by a non-delegation event",
                    });
                };
                for (evo, y3) in r.transitions(y2) {
                    let EventKind::Evolve { behavior, state } = evo.kind() else {
                        return Err(CgError::PhaseMismatch {
                            state: y2,
                            reason: "delegation is followed by a non-evolution event",
                        });
                    };
                    debug_assert_eq!(behavior, j);
                    idle(y3)?;
                    if !seen.contains_key(&y3) {
                        seen.insert(y3, order.len());
                        order.push(y3);
                        queue.push_back(y3);
                    }
                    out.push(Round {
                        from: y,
                        action: a.clone(),
                        index: *j,
                        observed: state.clone(),
                        to: y3,
                    });
                }
            }
        }
    }
    Ok((order, out))
}

fn alphabet_info(r: &Generator) -> (BTreeSet<Action>, usize) {
    let mut actions = BTreeSet::new();
    let mut n = 0;
    for e in r.alphabet() {
        match e.kind() {
            EventKind::Request(a) => {
                actions.insert(a.clone());
            }
            EventKind::Delegate(j) => n = n.max(*j),
            _ => {}
        }
    }
    (actions, n)
}

/// The memory controller generator: one state per supervisor state reached
/// at a round boundary.
pub fn extract_memory_cg(r: &SupervisorGenerator) -> Result<ControllerGenerator, CgError> {
    let (actions, n) = alphabet_info(&r.automaton);
    if r.is_empty() {
        return Ok(ControllerGenerator::empty(CgKind::Memory, actions, n));
    }
    let g = &r.automaton;
    let (order, rounds) = rounds(g)?;
    let id: HashMap<StateId, usize> = order.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    let states = order
        .iter()
        .map(|&y| CgState {
            tuple: g.plant_state(y).expect("checked idle").tuple.clone(),
            memory: Some(y),
        })
        .collect();
    let mut edges: Vec<CgEdge> = rounds
        .into_iter()
        .map(|rd| CgEdge {
            from: id[&rd.from],
            action: rd.action,
            index: rd.index,
            observed: rd.observed,
            to: id[&rd.to],
        })
        .collect();
    edges.sort();
    Ok(ControllerGenerator {
        kind: CgKind::Memory,
        actions,
        behaviors: n,
        initial: Some(0),
        states,
        edges,
    })
}

/// The controller generator whose states are composition tuples.
///
/// Supervisor states with the same tuple are merged; if two of them differ in
/// their rounds the tuple alone cannot determine ω and an error is returned.
pub fn extract_cg(r: &SupervisorGenerator) -> Result<ControllerGenerator, CgError> {
    let memory = extract_memory_cg(r)?;
    if memory.is_empty() {
        return Ok(ControllerGenerator {
            kind: CgKind::Tuples,
            ..memory
        });
    }
    let mut class: HashMap<&CompositionTuple, usize> = HashMap::new();
    let mut reps: Vec<usize> = Vec::new();
    for (q, s) in memory.states.iter().enumerate() {
        class.entry(&s.tuple).or_insert_with(|| {
            reps.push(q);
            reps.len() - 1
        });
    }
    let signature = |q: usize| -> BTreeSet<(Action, usize, String, &CompositionTuple)> {
        memory
            .edges_from(q)
            .iter()
            .map(|e| (e.action.clone(), e.index, e.observed.clone(), &memory.states[e.to].tuple))
            .collect()
    };
    for (q, s) in memory.states.iter().enumerate() {
        let rep = reps[class[&s.tuple]];
        if rep != q && signature(rep) != signature(q) {
            return Err(CgError::MemoryRequired { tuple: s.tuple.clone() });
        }
    }
    let states = reps
        .iter()
        .map(|&q| CgState {
            tuple: memory.states[q].tuple.clone(),
            memory: None,
        })
        .collect();
    let mut edges: Vec<CgEdge> = reps
        .iter()
        .flat_map(|&q| memory.edges_from(q).iter())
        .map(|e| CgEdge {
            from: class[&memory.states[e.from].tuple],
            to: class[&memory.states[e.to].tuple],
            ..e.clone()
        })
        .collect();
    edges.sort();
    Ok(ControllerGenerator {
        kind: CgKind::Tuples,
        actions: memory.actions.clone(),
        behaviors: memory.behaviors,
        initial: Some(0),
        states,
        edges,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub action: Action,
    pub index: usize,
    pub observed: String,
}

/// A controller run over a controller generator: the current state and the
/// steps taken so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunState {
    state: usize,
    transcript: Vec<Step>,
}

impl RunState {
    pub fn new(cg: &ControllerGenerator) -> Result<Self, CgError> {
        let state = cg.initial.ok_or(CgError::Empty)?;
        Ok(RunState {
            state,
            transcript: Vec::new(),
        })
    }

    pub fn state(&self) -> usize {
        self.state
    }

    pub fn transcript(&self) -> &[Step] {
        &self.transcript
    }

    /// Delegates `action` to `index` and records that the behavior evolved
    /// into `observed`.
    pub fn step(&mut self, cg: &ControllerGenerator, action: &Action, index: usize, observed: &str) -> Result<usize, CgError> {
        let allowed = cg.select(self.state, action)?;
        if !allowed.contains(&index) {
            return Err(CgError::IllegalDelegation {
                action: action.clone(),
                index,
                allowed,
            });
        }
        let next = cg
            .successor(self.state, action, index, observed)
            .ok_or_else(|| CgError::ModelViolation {
                action: action.clone(),
                index,
                observed: observed.to_string(),
            })?;
        self.state = next;
        self.transcript.push(Step {
            action: action.clone(),
            index,
            observed: observed.to_string(),
        });
        Ok(next)
    }

    pub fn replay(cg: &ControllerGenerator, steps: &[Step]) -> Result<Self, CgError> {
        let mut run = RunState::new(cg)?;
        for s in steps {
            run.step(cg, &s.action, s.index, &s.observed)?;
        }
        Ok(run)
    }
}
