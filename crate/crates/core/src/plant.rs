//! The composition plant and the maximal composition plant.
//!
//! Both are built by forward closure from the initial state, so only the
//! reachable part of the declared state space is materialized.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::{Annotation, Event, Generator, GeneratorBuilder, TargetTransition};
use crate::model::{Action, System, Target};

/// A target state together with one local state per behavior, by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompositionTuple {
    pub target: String,
    pub behaviors: Vec<String>,
}

impl CompositionTuple {
    pub fn new(target: impl Into<String>, behaviors: impl IntoIterator<Item = impl Into<String>>) -> Self {
        CompositionTuple {
            target: target.into(),
            behaviors: behaviors.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for CompositionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}", self.target)?;
        for b in &self.behaviors {
            write!(f, ",{b}")?;
        }
        f.write_str("⟩")
    }
}

/// Where a plant state sits inside one request/delegation round.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// No pending request.
    Idle,
    /// An action was requested, no delegation yet.
    Requested(Action),
    /// The request was delegated to the given behavior.
    Delegated(Action, usize),
    /// A target transition was requested (maximal plant).
    Chosen(TargetTransition),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlantState {
    pub tuple: CompositionTuple,
    pub phase: Phase,
}

impl PlantState {
    /// Marked plant states are exactly the idle ones.
    pub fn is_idle(&self) -> bool {
        self.phase == Phase::Idle
    }
}

impl fmt::Display for PlantState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = self.tuple.to_string();
        let inner = inner.trim_end_matches('⟩');
        match &self.phase {
            Phase::Idle => write!(f, "{inner},e,0⟩"),
            Phase::Requested(a) => write!(f, "{inner},{a},0⟩"),
            Phase::Delegated(a, j) => write!(f, "{inner},{a},{j}⟩"),
            Phase::Chosen(t) => write!(f, "{inner},({t})⟩"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlantError {
    #[error("target `{0}` is nondeterministic; use the fragment (srtf) pipeline instead")]
    NondeterministicTarget(String),
    #[error("behavior `{0}` is nondeterministic; the maximal plant needs a deterministic system")]
    NondeterministicBehavior(String),
}

/// Index-based state key used during construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    target: usize,
    behaviors: Vec<usize>,
    phase: KeyPhase,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum KeyPhase {
    Idle,
    Requested(Action),
    Delegated(Action, usize),
    Chosen(Action, usize),
}

fn tuple_of(system: &System, target: &Target, t: usize, b: &[usize]) -> CompositionTuple {
    CompositionTuple {
        target: target.behavior().state_name(t).to_string(),
        behaviors: system.state_names(b),
    }
}

struct Closure<'a> {
    system: &'a System,
    target: &'a Target,
    builder: GeneratorBuilder,
    ids: HashMap<Key, usize>,
    queue: VecDeque<Key>,
}

impl<'a> Closure<'a> {
    fn new(system: &'a System, target: &'a Target, alphabet: Vec<Event>) -> Self {
        let mut builder = GeneratorBuilder::new();
        builder.extend_alphabet(alphabet);
        Closure {
            system,
            target,
            builder,
            ids: HashMap::new(),
            queue: VecDeque::new(),
        }
    }

    fn intern(&mut self, key: Key) -> usize {
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let tuple = tuple_of(self.system, self.target, key.target, &key.behaviors);
        let phase = match &key.phase {
            KeyPhase::Idle => Phase::Idle,
            KeyPhase::Requested(a) => Phase::Requested(a.clone()),
            KeyPhase::Delegated(a, j) => Phase::Delegated(a.clone(), *j),
            KeyPhase::Chosen(a, to) => Phase::Chosen(self.target.target_transition(key.target, a, *to)),
        };
        let marked = phase == Phase::Idle;
        let id = self
            .builder
            .add_annotated_state(marked, Some(Annotation::Plant(PlantState { tuple, phase })));
        self.ids.insert(key.clone(), id);
        self.queue.push_back(key);
        id
    }

    fn edge(&mut self, from: usize, event: Event, to: Key) {
        let to = self.intern(to);
        self.builder
            .add_transition(from, event, to)
            .expect("plant construction is deterministic by event tagging");
    }

    fn finish(self) -> Generator {
        self.builder.build(0).expect("plant alphabet is consistent")
    }
}

/// Builds the composition plant: requests and evolutions uncontrollable,
/// delegations controllable, and every delegation enabled after a request
/// (including those the chosen behavior cannot honor, which become dead
/// ends left for synthesis to prune).
pub fn build_composition_plant(system: &System, target: &Target) -> Result<Generator, PlantError> {
    if !target.is_deterministic() {
        return Err(PlantError::NondeterministicTarget(target.behavior().name().to_string()));
    }
    let n = system.len();
    let mut alphabet: Vec<Event> = target.behavior().actions().into_iter().map(Event::request).collect();
    alphabet.extend(system.indexes().map(Event::delegate));
    for j in system.indexes() {
        alphabet.extend(system.behavior(j).state_names().iter().map(|s| Event::evolve(j, s.clone())));
    }
    let mut c = Closure::new(system, target, alphabet);
    c.intern(Key {
        target: target.behavior().initial(),
        behaviors: system.initial_vector(),
        phase: KeyPhase::Idle,
    });
    while let Some(key) = c.queue.pop_front() {
        let from = c.ids[&key];
        match &key.phase {
            KeyPhase::Idle => {
                for (a, t2) in target.behavior().transitions_from(key.target) {
                    // the target moves as soon as the request is issued
                    let to = Key {
                        target: *t2,
                        behaviors: key.behaviors.clone(),
                        phase: KeyPhase::Requested(a.clone()),
                    };
                    c.edge(from, Event::request(a.clone()), to);
                }
            }
            KeyPhase::Requested(a) => {
                for j in 1..=n {
                    let to = Key {
                        phase: KeyPhase::Delegated(a.clone(), j),
                        ..key.clone()
                    };
                    c.edge(from, Event::delegate(j), to);
                }
            }
            KeyPhase::Delegated(a, j) => {
                let behavior = system.behavior(*j);
                for b2 in behavior.successors(key.behaviors[j - 1], a) {
                    let mut behaviors = key.behaviors.clone();
                    behaviors[j - 1] = b2;
                    let evo = Event::evolve(*j, behavior.state_name(b2));
                    c.edge(
                        from,
                        evo,
                        Key {
                            target: key.target,
                            behaviors,
                            phase: KeyPhase::Idle,
                        },
                    );
                }
            }
            KeyPhase::Chosen(..) => unreachable!(),
        }
    }
    Ok(c.finish())
}

/// Builds the maximal composition plant for a deterministic system: requests
/// are target transitions, everything is controllable, and a delegation
/// exists only when the behavior can perform the action.
pub fn build_maximal_plant(system: &System, target: &Target) -> Result<Generator, PlantError> {
    if let Some(b) = system.behaviors().iter().find(|b| !b.is_deterministic()) {
        return Err(PlantError::NondeterministicBehavior(b.name().to_string()));
    }
    let tb = target.behavior();
    let mut alphabet: Vec<Event> = tb
        .transitions()
        .map(|(s, a, t)| Event::trans_req(target.target_transition(s, a, t)))
        .collect();
    alphabet.extend(system.indexes().map(Event::delegate));
    let mut c = Closure::new(system, target, alphabet);
    c.intern(Key {
        target: tb.initial(),
        behaviors: system.initial_vector(),
        phase: KeyPhase::Idle,
    });
    while let Some(key) = c.queue.pop_front() {
        let from = c.ids[&key];
        match &key.phase {
            KeyPhase::Idle => {
                for (a, t2) in tb.transitions_from(key.target) {
                    let event = Event::trans_req(target.target_transition(key.target, a, *t2));
                    let to = Key {
                        phase: KeyPhase::Chosen(a.clone(), *t2),
                        ..key.clone()
                    };
                    c.edge(from, event, to);
                }
            }
            KeyPhase::Chosen(a, t2) => {
                for j in system.indexes() {
                    if let Some(b2) = system.behavior(j).successors(key.behaviors[j - 1], a).next() {
                        let mut behaviors = key.behaviors.clone();
                        behaviors[j - 1] = b2;
                        c.edge(
                            from,
                            Event::delegate(j),
                            Key {
                                target: *t2,
                                behaviors,
                                phase: KeyPhase::Idle,
                            },
                        );
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(c.finish())
}

/// `|T| · ∏|B_i| · (|A_t|+1) · (n+1)`, the size of the declared state space.
pub fn plant_size_bound(system: &System, target: &Target) -> u128 {
    let mut bound = target.behavior().state_count() as u128;
    for b in system.behaviors() {
        bound *= b.state_count() as u128;
    }
    bound * (target.behavior().actions().len() as u128 + 1) * (system.len() as u128 + 1)
}
