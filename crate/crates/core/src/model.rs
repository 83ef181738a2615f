//! Behaviors, targets, available systems, the enacted system, histories, and
//! the mapping from histories to plant words.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::{Event, TargetTransition, Word};

/// A domain action name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Action(String);

impl Action {
    pub fn new(name: impl Into<String>) -> Self {
        Action(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Action {
    fn from(s: &str) -> Self {
        Action(s.to_string())
    }
}

impl From<String> for Action {
    fn from(s: String) -> Self {
        Action(s)
    }
}

impl Borrow<str> for Action {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Names of states, actions and behaviors: non-empty, no whitespace, and none
/// of the characters used by the event text syntax.
pub fn is_valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | '/' | '"'))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("behavior `{behavior}`: invalid name `{name}`")]
    InvalidName { behavior: String, name: String },
    #[error("behavior `{behavior}`: duplicate state `{state}`")]
    DuplicateState { behavior: String, state: String },
    #[error("behavior `{behavior}`: unknown state `{state}`")]
    UnknownState { behavior: String, state: String },
    #[error("target `{0}` is nondeterministic")]
    NondeterministicTarget(String),
    #[error("behavior `{0}` is nondeterministic")]
    NondeterministicBehavior(String),
    #[error("a system needs at least one behavior")]
    EmptySystem,
    #[error("duplicate behavior name `{0}`")]
    DuplicateBehavior(String),
    #[error("behavior index {0} out of range")]
    BadIndex(usize),
    #[error("({action},{index}) is not a transition of the enacted system from the last history state")]
    IllegalStep { action: Action, index: usize },
    #[error("`{action}` is not a transition of the target from its current state")]
    IllegalTargetStep { action: Action },
    #[error("trace and history disagree at step {step}: trace has `{trace}`, history has `{history}`")]
    Pairing { step: usize, trace: Action, history: Action },
    #[error("trace has {trace} steps but history has {history}")]
    LengthMismatch { trace: usize, history: usize },
}

/// A finite transition system `⟨B, A, b0, δ⟩`, possibly nondeterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Behavior {
    name: String,
    states: Vec<String>,
    index: HashMap<String, usize>,
    initial: usize,
    /// Per state, sorted and deduplicated `(action, successor)` pairs.
    out: Vec<Vec<(Action, usize)>>,
}

impl Behavior {
    pub fn new<S, I, U, T>(name: impl Into<String>, states: I, initial: &str, transitions: T) -> Result<Self, ModelError>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = S>,
        U: AsRef<str>,
        T: IntoIterator<Item = (U, U, U)>,
    {
        let name = name.into();
        if !is_valid_name(&name) {
            return Err(ModelError::InvalidName {
                behavior: name.clone(),
                name,
            });
        }
        let mut b = Behavior {
            name,
            states: Vec::new(),
            index: HashMap::new(),
            initial: 0,
            out: Vec::new(),
        };
        for s in states {
            let s = s.as_ref();
            b.check_name(s)?;
            if b.index.insert(s.to_string(), b.states.len()).is_some() {
                return Err(ModelError::DuplicateState {
                    behavior: b.name.clone(),
                    state: s.to_string(),
                });
            }
            b.states.push(s.to_string());
            b.out.push(Vec::new());
        }
        b.initial = b.lookup(initial)?;
        for (from, action, to) in transitions {
            let from = b.lookup(from.as_ref())?;
            let to = b.lookup(to.as_ref())?;
            b.check_name(action.as_ref())?;
            b.out[from].push((Action::new(action.as_ref()), to));
        }
        for out in &mut b.out {
            out.sort();
            out.dedup();
        }
        Ok(b)
    }

    fn check_name(&self, s: &str) -> Result<(), ModelError> {
        if is_valid_name(s) {
            Ok(())
        } else {
            Err(ModelError::InvalidName {
                behavior: self.name.clone(),
                name: s.to_string(),
            })
        }
    }

    fn lookup(&self, state: &str) -> Result<usize, ModelError> {
        self.index.get(state).copied().ok_or_else(|| ModelError::UnknownState {
            behavior: self.name.clone(),
            state: state.to_string(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.states[state]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// All `(from, action, to)` triples, ordered by source state.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, &Action, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(s, out)| out.iter().map(move |(a, t)| (s, a, *t)))
    }

    pub fn transitions_from(&self, state: usize) -> &[(Action, usize)] {
        &self.out[state]
    }

    pub fn transition_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn successors<'a>(&'a self, state: usize, action: &'a Action) -> impl Iterator<Item = usize> + 'a {
        self.out[state].iter().filter(move |(a, _)| a == action).map(|&(_, t)| t)
    }

    pub fn can_perform(&self, state: usize, action: &Action) -> bool {
        self.successors(state, action).next().is_some()
    }

    pub fn actions(&self) -> BTreeSet<Action> {
        self.out.iter().flatten().map(|(a, _)| a.clone()).collect()
    }

    /// At most one successor per `(state, action)`.
    pub fn is_deterministic(&self) -> bool {
        self.out.iter().all(|out| out.windows(2).all(|w| w[0].0 != w[1].0))
    }
}

/// The target module. Deterministic unless built with
/// [`Target::nondeterministic`] (realizable fragments may branch).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    behavior: Behavior,
    allow_nondeterministic: bool,
}

impl Target {
    pub fn new(behavior: Behavior) -> Result<Self, ModelError> {
        if !behavior.is_deterministic() {
            return Err(ModelError::NondeterministicTarget(behavior.name.clone()));
        }
        Ok(Target {
            behavior,
            allow_nondeterministic: false,
        })
    }

    pub fn nondeterministic(behavior: Behavior) -> Self {
        Target {
            behavior,
            allow_nondeterministic: true,
        }
    }

    pub fn behavior(&self) -> &Behavior {
        &self.behavior
    }

    pub fn allows_nondeterminism(&self) -> bool {
        self.allow_nondeterministic
    }

    pub fn is_deterministic(&self) -> bool {
        self.behavior.is_deterministic()
    }

    /// The unique `a`-successor of `state`; the first one when nondeterministic.
    pub fn next(&self, state: usize, action: &Action) -> Option<usize> {
        self.behavior.successors(state, action).next()
    }

    pub fn target_transition(&self, from: usize, action: &Action, to: usize) -> TargetTransition {
        TargetTransition::new(
            self.behavior.state_name(from),
            action.clone(),
            self.behavior.state_name(to),
        )
    }
}

/// An available system `⟨B1, …, Bn⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    behaviors: Vec<Behavior>,
}

impl System {
    pub fn new(behaviors: Vec<Behavior>) -> Result<Self, ModelError> {
        if behaviors.is_empty() {
            return Err(ModelError::EmptySystem);
        }
        let mut names = BTreeSet::new();
        for b in &behaviors {
            if !names.insert(b.name()) {
                return Err(ModelError::DuplicateBehavior(b.name().to_string()));
            }
        }
        Ok(System { behaviors })
    }

    pub fn len(&self) -> usize {
        self.behaviors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.behaviors.is_empty()
    }

    pub fn behaviors(&self) -> &[Behavior] {
        &self.behaviors
    }

    /// The behavior with 1-based delegation index `j`.
    pub fn behavior(&self, j: usize) -> &Behavior {
        &self.behaviors[j - 1]
    }

    pub fn indexes(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.behaviors.len()
    }

    pub fn is_deterministic(&self) -> bool {
        self.behaviors.iter().all(Behavior::is_deterministic)
    }

    pub fn initial_vector(&self) -> Vec<usize> {
        self.behaviors.iter().map(Behavior::initial).collect()
    }

    pub fn state_names(&self, vector: &[usize]) -> Vec<String> {
        vector
            .iter()
            .zip(&self.behaviors)
            .map(|(&s, b)| b.state_name(s).to_string())
            .collect()
    }

    /// Union of the behaviors' actions.
    pub fn actions(&self) -> BTreeSet<Action> {
        self.behaviors.iter().flat_map(Behavior::actions).collect()
    }

    /// Successor vectors for delegating `action` to behavior `j` at `vector`.
    pub fn step(&self, vector: &[usize], action: &Action, j: usize) -> Vec<Vec<usize>> {
        self.behavior(j)
            .successors(vector[j - 1], action)
            .map(|b| {
                let mut next = vector.to_vec();
                next[j - 1] = b;
                next
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnactedTransition {
    pub action: Action,
    pub index: usize,
    pub to: usize,
}

/// The asynchronous product of the available behaviors, restricted to the
/// part reachable from the initial vector. State 0 is initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnactedSystem {
    states: Vec<Vec<usize>>,
    names: Vec<Vec<String>>,
    lookup: HashMap<Vec<usize>, usize>,
    out: Vec<Vec<EnactedTransition>>,
}

impl EnactedSystem {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn state(&self, id: usize) -> &[usize] {
        &self.states[id]
    }

    pub fn state_names(&self, id: usize) -> &[String] {
        &self.names[id]
    }

    pub fn find(&self, vector: &[usize]) -> Option<usize> {
        self.lookup.get(vector).copied()
    }

    pub fn transitions(&self, id: usize) -> &[EnactedTransition] {
        &self.out[id]
    }

    pub fn transition_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn successors<'a>(&'a self, id: usize, action: &'a Action, index: usize) -> impl Iterator<Item = usize> + 'a {
        self.out[id]
            .iter()
            .filter(move |t| t.index == index && &t.action == action)
            .map(|t| t.to)
    }
}

/// Builds the reachable enacted system: `⟨b, a, j, b'⟩` iff component `j`
/// moves by `a` and every other component stays put.
pub fn build_enacted_system(system: &System) -> EnactedSystem {
    let mut e = EnactedSystem {
        states: Vec::new(),
        names: Vec::new(),
        lookup: HashMap::new(),
        out: Vec::new(),
    };
    let init = system.initial_vector();
    e.lookup.insert(init.clone(), 0);
    e.names.push(system.state_names(&init));
    e.states.push(init);
    e.out.push(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        let vector = e.states[id].clone();
        let mut out = Vec::new();
        for j in system.indexes() {
            for (action, to) in system.behavior(j).transitions_from(vector[j - 1]) {
                let mut next = vector.clone();
                next[j - 1] = *to;
                let to = match e.lookup.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = e.states.len();
                        e.lookup.insert(next.clone(), t);
                        e.names.push(system.state_names(&next));
                        e.states.push(next);
                        e.out.push(Vec::new());
                        queue.push_back(t);
                        t
                    }
                };
                out.push(EnactedTransition {
                    action: action.clone(),
                    index: j,
                    to,
                });
            }
        }
        e.out[id] = out;
    }
    e
}

/// A system history `b0 →(a1,j1) b1 → … →(aℓ,jℓ) bℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct History {
    states: Vec<Vec<usize>>,
    steps: Vec<(Action, usize)>,
}

impl History {
    /// The empty history, just the initial vector.
    pub fn start(system: &System) -> Self {
        History {
            states: vec![system.initial_vector()],
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> &[usize] {
        self.states.last().expect("history has an initial state")
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn steps(&self) -> &[(Action, usize)] {
        &self.steps
    }

    /// Appends a step after checking it is an enacted-system transition.
    pub fn push(&mut self, system: &System, action: Action, index: usize, next: Vec<usize>) -> Result<(), ModelError> {
        if index == 0 || index > system.len() {
            return Err(ModelError::BadIndex(index));
        }
        if !system.step(self.last(), &action, index).contains(&next) {
            return Err(ModelError::IllegalStep { action, index });
        }
        self.states.push(next);
        self.steps.push((action, index));
        Ok(())
    }

    pub fn extended(&self, system: &System, action: Action, index: usize, next: Vec<usize>) -> Result<Self, ModelError> {
        let mut h = self.clone();
        h.push(system, action, index, next)?;
        Ok(h)
    }
}

/// A finite target trace `t0 →a1 t1 → … →aℓ tℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TargetTrace {
    states: Vec<usize>,
    actions: Vec<Action>,
}

impl TargetTrace {
    pub fn start(target: &Target) -> Self {
        TargetTrace {
            states: vec![target.behavior().initial()],
            actions: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn last(&self) -> usize {
        *self.states.last().expect("trace has an initial state")
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn push(&mut self, target: &Target, action: Action, to: usize) -> Result<(), ModelError> {
        if !target.behavior().successors(self.last(), &action).any(|t| t == to) {
            return Err(ModelError::IllegalTargetStep { action });
        }
        self.states.push(to);
        self.actions.push(action);
        Ok(())
    }

    pub fn extended(&self, target: &Target, action: Action, to: usize) -> Result<Self, ModelError> {
        let mut t = self.clone();
        t.push(target, action, to)?;
        Ok(t)
    }
}

/// `word(h) = (a1·j1·st_j1(b1)) ⋯ (aℓ·jℓ·st_jℓ(bℓ))`.
pub fn word_of_history(system: &System, history: &History) -> Word {
    let mut word = Vec::with_capacity(3 * history.len());
    for (i, (action, j)) in history.steps.iter().enumerate() {
        let next = &history.states[i + 1];
        word.push(Event::request(action.clone()));
        word.push(Event::delegate(*j));
        word.push(Event::evolve(*j, system.behavior(*j).state_name(next[j - 1])));
    }
    word
}

/// `word(τ, h) = (⟨t0,a1,t1⟩·j1) ⋯ (⟨tℓ−1,aℓ,tℓ⟩·jℓ)`, for deterministic
/// systems.
pub fn word_of_trace_history(system: &System, target: &Target, trace: &TargetTrace, history: &History) -> Result<Word, ModelError> {
    if let Some(b) = system.behaviors().iter().find(|b| !b.is_deterministic()) {
        return Err(ModelError::NondeterministicBehavior(b.name().to_string()));
    }
    if trace.len() != history.len() {
        return Err(ModelError::LengthMismatch {
            trace: trace.len(),
            history: history.len(),
        });
    }
    let mut word = Vec::with_capacity(2 * history.len());
    for (i, ((action, j), ta)) in history.steps.iter().zip(&trace.actions).enumerate() {
        if action != ta {
            return Err(ModelError::Pairing {
                step: i,
                trace: ta.clone(),
                history: action.clone(),
            });
        }
        word.push(Event::trans_req(target.target_transition(trace.states[i], ta, trace.states[i + 1])));
        word.push(Event::delegate(*j));
    }
    Ok(word)
}

/// Outcome of unfolding the histories a controller induces on target traces.
#[derive(Clone, Debug, Default)]
pub struct Unfolding {
    /// `(τ, h)` pairs with `h ∈ H_{P,τ}`, all lengths up to the depth.
    pub runs: Vec<(TargetTrace, History)>,
    /// Requests the controller could not legally delegate.
    pub failures: Vec<(TargetTrace, History, Action)>,
}

impl Unfolding {
    pub fn realizes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Bounded unfolding of `H_{P,τ}` over all target traces of length at most
/// `depth`. `controller` maps a trace, an induced history and the next
/// request to a delegation index.
pub fn unfold_histories<F>(system: &System, target: &Target, depth: usize, mut controller: F) -> Unfolding
where
    F: FnMut(&TargetTrace, &History, &Action) -> Option<usize>,
{
    let mut result = Unfolding::default();
    let mut frontier = vec![(TargetTrace::start(target), History::start(system))];
    result.runs.extend(frontier.iter().cloned());
    for _ in 0..depth {
        let mut next = Vec::new();
        for (trace, history) in &frontier {
            for (action, t2) in target.behavior().transitions_from(trace.last()) {
                let delegated = controller(trace, history, action)
                    .filter(|j| (1..=system.len()).contains(j))
                    .map(|j| (j, system.step(history.last(), action, j)));
                match delegated {
                    Some((j, succs)) if !succs.is_empty() => {
                        let trace2 = trace.extended(target, action.clone(), *t2).expect("target transition");
                        for b in succs {
                            let h2 = history.extended(system, action.clone(), j, b).expect("enacted transition");
                            next.push((trace2.clone(), h2));
                        }
                    }
                    _ => result.failures.push((trace.clone(), history.clone(), action.clone())),
                }
            }
        }
        result.runs.extend(next.iter().cloned());
        frontier = next;
    }
    result
}
