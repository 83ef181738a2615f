use std::collections::{BTreeMap, BTreeSet};

use crate::plant::PlantState;

use super::{AutomataError, Event, Word};

pub type StateId = usize;

/// Per-state payload attached when a generator is constructed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Annotation {
    /// A composition-plant state.
    Plant(PlantState),
    /// A state of a product, as the pair of source states.
    Pair(StateId, StateId),
    Label(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct GenState {
    marked: bool,
    annotation: Option<Annotation>,
    /// Sorted by event index; at most one entry per event.
    out: Vec<(usize, StateId)>,
}

/// A deterministic finite generator `⟨Σ, G, g0, γ, Gm⟩`.
///
/// Immutable once built; see [`GeneratorBuilder`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    alphabet: Vec<Event>,
    states: Vec<GenState>,
    initial: StateId,
}

impl Generator {
    pub fn builder() -> GeneratorBuilder {
        GeneratorBuilder::default()
    }

    /// The designated empty generator: one unmarked initial state and no
    /// transitions, so its marked language is empty.
    pub fn empty(alphabet: impl IntoIterator<Item = Event>) -> Generator {
        let mut alphabet: Vec<Event> = alphabet.into_iter().collect();
        alphabet.sort();
        alphabet.dedup();
        Generator {
            alphabet,
            states: vec![GenState {
                marked: false,
                annotation: None,
                out: Vec::new(),
            }],
            initial: 0,
        }
    }

    pub fn alphabet(&self) -> &[Event] {
        &self.alphabet
    }

    pub fn event_index(&self, event: &Event) -> Option<usize> {
        self.alphabet.binary_search(event).ok()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.states.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_marked(&self, state: StateId) -> bool {
        self.states[state].marked
    }

    pub fn marked_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(|&s| self.states[s].marked)
    }

    pub fn annotation(&self, state: StateId) -> Option<&Annotation> {
        self.states[state].annotation.as_ref()
    }

    pub fn plant_state(&self, state: StateId) -> Option<&PlantState> {
        match self.annotation(state) {
            Some(Annotation::Plant(p)) => Some(p),
            _ => None,
        }
    }

    /// Outgoing transitions of `state`, in event order.
    pub fn transitions(&self, state: StateId) -> impl Iterator<Item = (&Event, StateId)> + '_ {
        self.states[state].out.iter().map(move |&(e, t)| (&self.alphabet[e], t))
    }

    pub fn all_transitions(&self) -> impl Iterator<Item = (StateId, &Event, StateId)> + '_ {
        self.states().flat_map(move |s| self.transitions(s).map(move |(e, t)| (s, e, t)))
    }

    pub fn transition_count(&self) -> usize {
        self.states.iter().map(|s| s.out.len()).sum()
    }

    pub(crate) fn transitions_ix(&self, state: StateId) -> &[(usize, StateId)] {
        &self.states[state].out
    }

    pub(crate) fn step_ix(&self, state: StateId, event: usize) -> Option<StateId> {
        let out = &self.states[state].out;
        out.binary_search_by_key(&event, |&(e, _)| e).ok().map(|i| out[i].1)
    }

    pub fn step(&self, state: StateId, event: &Event) -> Option<StateId> {
        self.step_ix(state, self.event_index(event)?)
    }

    pub fn is_enabled(&self, state: StateId, event: &Event) -> bool {
        self.step(state, event).is_some()
    }

    /// `γ(g0, w)`, when defined.
    pub fn run(&self, word: &[Event]) -> Option<StateId> {
        word.iter().try_fold(self.initial, |s, e| self.step(s, e))
    }

    /// `w ∈ L(G)`.
    pub fn generates(&self, word: &[Event]) -> bool {
        self.run(word).is_some()
    }

    /// `w ∈ Lm(G)`.
    pub fn accepts(&self, word: &[Event]) -> bool {
        self.run(word).is_some_and(|s| self.is_marked(s))
    }

    /// True when no marked state is reachable, i.e. `Lm(G) = ∅`.
    pub fn is_empty_language(&self) -> bool {
        let reach = super::ops::reachable(self);
        !self.marked_states().any(|s| reach[s])
    }

    /// Shortest word leading from the initial state to `target`, if any.
    pub fn word_to(&self, target: StateId) -> Option<Word> {
        let mut parent: Vec<Option<(StateId, usize)>> = vec![None; self.state_count()];
        let mut seen = vec![false; self.state_count()];
        let mut queue = std::collections::VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            if s == target {
                let mut word = Vec::new();
                let mut cur = s;
                while let Some((p, e)) = parent[cur] {
                    word.push(self.alphabet[e].clone());
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for &(e, t) in &self.states[s].out {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((s, e));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// Sub-generator on the states with `keep[s]`, renumbered in increasing
    /// original order. The initial state must be kept.
    pub(crate) fn restrict(&self, keep: &[bool]) -> (Generator, Vec<StateId>) {
        debug_assert!(keep[self.initial]);
        let mut new_id = vec![usize::MAX; self.state_count()];
        let mut origin = Vec::new();
        for s in self.states() {
            if keep[s] {
                new_id[s] = origin.len();
                origin.push(s);
            }
        }
        let states = origin
            .iter()
            .map(|&s| {
                let st = &self.states[s];
                GenState {
                    marked: st.marked,
                    annotation: st.annotation.clone(),
                    out: st
                        .out
                        .iter()
                        .filter(|&&(_, t)| keep[t])
                        .map(|&(e, t)| (e, new_id[t]))
                        .collect(),
                }
            })
            .collect();
        (
            Generator {
                alphabet: self.alphabet.clone(),
                states,
                initial: new_id[self.initial],
            },
            origin,
        )
    }

    /// The same generator with its alphabet widened to include `extra`.
    pub fn with_alphabet(&self, extra: impl IntoIterator<Item = Event>) -> Result<Generator, AutomataError> {
        let mut b = GeneratorBuilder::default();
        b.extend_alphabet(self.alphabet.iter().cloned());
        b.extend_alphabet(extra);
        for s in self.states() {
            b.add_annotated_state(self.is_marked(s), self.states[s].annotation.clone());
        }
        for (s, e, t) in self.all_transitions() {
            b.add_transition(s, e.clone(), t)?;
        }
        b.build(self.initial)
    }
}

/// Incremental construction of a [`Generator`]. Determinism is enforced on
/// insertion.
#[derive(Clone, Debug, Default)]
pub struct GeneratorBuilder {
    alphabet: BTreeSet<Event>,
    states: Vec<(bool, Option<Annotation>, BTreeMap<Event, StateId>)>,
}

impl GeneratorBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn extend_alphabet(&mut self, events: impl IntoIterator<Item = Event>) -> &mut Self {
        self.alphabet.extend(events);
        self
    }

    pub fn add_state(&mut self, marked: bool) -> StateId {
        self.add_annotated_state(marked, None)
    }

    pub fn add_annotated_state(&mut self, marked: bool, annotation: Option<Annotation>) -> StateId {
        self.states.push((marked, annotation, BTreeMap::new()));
        self.states.len() - 1
    }

    pub fn add_states(&mut self, count: usize, marked: impl Fn(StateId) -> bool) -> &mut Self {
        for _ in 0..count {
            let id = self.states.len();
            self.add_state(marked(id));
        }
        self
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn set_marked(&mut self, state: StateId, marked: bool) {
        self.states[state].0 = marked;
    }

    pub fn add_transition(&mut self, from: StateId, event: Event, to: StateId) -> Result<&mut Self, AutomataError> {
        let count = self.states.len();
        for s in [from, to] {
            if s >= count {
                return Err(AutomataError::UnknownState { state: s, count });
            }
        }
        let out = &mut self.states[from].2;
        if let Some(&existing) = out.get(&event) {
            return Err(AutomataError::Nondeterministic {
                state: from,
                event,
                existing,
                new: to,
            });
        }
        self.alphabet.insert(event.clone());
        out.insert(event, to);
        Ok(self)
    }

    pub fn build(self, initial: StateId) -> Result<Generator, AutomataError> {
        if initial >= self.states.len() {
            return Err(AutomataError::UnknownState {
                state: initial,
                count: self.states.len(),
            });
        }
        let alphabet: Vec<Event> = self.alphabet.into_iter().collect();
        super::check_alphabet(&alphabet)?;
        let states = self
            .states
            .into_iter()
            .map(|(marked, annotation, out)| GenState {
                marked,
                annotation,
                out: out
                    .into_iter()
                    .map(|(e, t)| (alphabet.binary_search(&e).expect("event registered on insertion"), t))
                    .collect(),
            })
            .collect();
        Ok(Generator {
            alphabet,
            states,
            initial,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Generator {
        let mut b = Generator::builder();
        b.add_states(2, |s| s == 0);
        b.add_transition(0, Event::raw(1), 1).unwrap();
        b.add_transition(1, Event::raw(3), 0).unwrap();
        b.build(0).unwrap()
    }

    #[test]
    fn second_transition_on_same_event_is_rejected() {
        let mut b = Generator::builder();
        b.add_states(2, |_| true);
        b.add_transition(0, Event::raw(1), 1).unwrap();
        let err = b.add_transition(0, Event::raw(1), 0).unwrap_err();
        assert!(matches!(err, AutomataError::Nondeterministic { state: 0, existing: 1, new: 0, .. }));
        // even an identical duplicate is refused
        assert!(b.add_transition(0, Event::raw(1), 1).is_err());
    }

    #[test]
    fn endpoints_and_initial_must_exist() {
        let mut b = Generator::builder();
        b.add_state(true);
        assert!(matches!(
            b.add_transition(0, Event::raw(0), 4),
            Err(AutomataError::UnknownState { state: 4, .. })
        ));
        assert!(b.clone().build(1).is_err());
        assert!(b.build(0).is_ok());
    }

    #[test]
    fn conflicting_controllability_in_one_alphabet() {
        let mut b = Generator::builder();
        b.add_state(true);
        b.add_transition(0, Event::request("x"), 0).unwrap();
        b.extend_alphabet([Event::with_controllability(Event::request("x").kind().clone(), true)]);
        assert!(matches!(b.build(0), Err(AutomataError::AlphabetMismatch { .. })));
    }

    #[test]
    fn languages() {
        let g = tiny();
        assert!(g.accepts(&[]));
        assert!(g.generates(&[Event::raw(1)]));
        assert!(!g.accepts(&[Event::raw(1)]));
        assert!(g.accepts(&[Event::raw(1), Event::raw(3)]));
        assert!(!g.generates(&[Event::raw(3)]));
        assert_eq!(g.word_to(1), Some(vec![Event::raw(1)]));
    }

    #[test]
    fn empty_generator_has_empty_marked_language() {
        let e = Generator::empty([Event::raw(1)]);
        assert!(e.is_empty_language());
        assert_eq!(e.state_count(), 1);
        assert!(e.generates(&[]));
        assert!(!e.accepts(&[]));
        assert!(!tiny().is_empty_language());
    }
}
