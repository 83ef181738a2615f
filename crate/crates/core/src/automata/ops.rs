use std::collections::{HashMap, VecDeque};

use super::{check_alphabet, Annotation, AutomataError, Event, Generator, GeneratorBuilder, StateId, Word};

/// States reachable from the initial state.
pub fn reachable(g: &Generator) -> Vec<bool> {
    let mut seen = vec![false; g.state_count()];
    let mut stack = vec![g.initial()];
    seen[g.initial()] = true;
    while let Some(s) = stack.pop() {
        for &(_, t) in g.transitions_ix(s) {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// States from which some marked state can be reached.
pub fn coreachable(g: &Generator) -> Vec<bool> {
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); g.state_count()];
    for s in g.states() {
        for &(_, t) in g.transitions_ix(s) {
            preds[t].push(s);
        }
    }
    let mut seen = vec![false; g.state_count()];
    let mut stack: Vec<StateId> = g.marked_states().collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(s) = stack.pop() {
        for &p in &preds[s] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Intersection product: an event fires only when both sides enable it.
///
/// The result alphabet is the union of both alphabets; states are annotated
/// with the pair of source states and only reachable pairs are built.
pub fn sync_product(g1: &Generator, g2: &Generator) -> Result<Generator, AutomataError> {
    let mut union: Vec<Event> = g1.alphabet().iter().chain(g2.alphabet()).cloned().collect();
    union.sort();
    union.dedup();
    check_alphabet(&union)?;

    let to_g2: Vec<Option<usize>> = g1.alphabet().iter().map(|e| g2.event_index(e)).collect();

    let mut b = GeneratorBuilder::new();
    b.extend_alphabet(union);
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let start = (g1.initial(), g2.initial());
    let id = b.add_annotated_state(g1.is_marked(start.0) && g2.is_marked(start.1), Some(Annotation::Pair(start.0, start.1)));
    ids.insert(start, id);
    queue.push_back(start);
    while let Some((x1, x2)) = queue.pop_front() {
        let from = ids[&(x1, x2)];
        for &(e1, y1) in g1.transitions_ix(x1) {
            let Some(y2) = to_g2[e1].and_then(|e2| g2.step_ix(x2, e2)) else {
                continue;
            };
            let to = *ids.entry((y1, y2)).or_insert_with(|| {
                queue.push_back((y1, y2));
                b.add_annotated_state(g1.is_marked(y1) && g2.is_marked(y2), Some(Annotation::Pair(y1, y2)))
            });
            b.add_transition(from, g1.alphabet()[e1].clone(), to)?;
        }
    }
    b.build(id)
}

/// The reachable and coreachable part of `g`, or the empty generator when
/// the initial state cannot reach a marked state.
pub fn trim(g: &Generator) -> Generator {
    let reach = reachable(g);
    let coreach = coreachable(g);
    let keep: Vec<bool> = reach.iter().zip(&coreach).map(|(&r, &c)| r && c).collect();
    if !keep[g.initial()] {
        return Generator::empty(g.alphabet().iter().cloned());
    }
    g.restrict(&keep).0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllabilityReport {
    pub ok: bool,
    /// `w·σ` with `w ∈ L(candidate)`, `σ` uncontrollable and
    /// `w·σ ∈ L(plant) \ L(candidate)`; shortest such word.
    pub witness: Option<Word>,
}

/// Checks `L(candidate)·Σu ∩ L(plant) ⊆ L(candidate)`.
///
/// The candidate's generated language stands for the closure of the
/// specification, so pass a trim recognizer. `L(candidate) ⊆ L(plant)` is
/// required and reported as [`AutomataError::NotSublanguage`] otherwise.
pub fn is_controllable(candidate: &Generator, plant: &Generator) -> Result<ControllabilityReport, AutomataError> {
    let to_plant: Vec<Option<usize>> = candidate.alphabet().iter().map(|e| plant.event_index(e)).collect();
    let to_cand: Vec<Option<usize>> = plant.alphabet().iter().map(|e| candidate.event_index(e)).collect();

    let mut parent: HashMap<(StateId, StateId), Option<((StateId, StateId), Event)>> = HashMap::new();
    let path = |parent: &HashMap<(StateId, StateId), Option<((StateId, StateId), Event)>>, mut at: (StateId, StateId)| {
        let mut word = Vec::new();
        while let Some(Some((prev, e))) = parent.get(&at) {
            word.push(e.clone());
            at = *prev;
        }
        word.reverse();
        word
    };

    let start = (candidate.initial(), plant.initial());
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    let mut violation: Option<Word> = None;
    while let Some((c, p)) = queue.pop_front() {
        for &(ec, c2) in candidate.transitions_ix(c) {
            let event = &candidate.alphabet()[ec];
            let Some(p2) = to_plant[ec].and_then(|ep| plant.step_ix(p, ep)) else {
                let mut word = path(&parent, (c, p));
                word.push(event.clone());
                return Err(AutomataError::NotSublanguage { word });
            };
            if !parent.contains_key(&(c2, p2)) {
                parent.insert((c2, p2), Some(((c, p), event.clone())));
                queue.push_back((c2, p2));
            }
        }
        if violation.is_none() {
            for &(ep, _) in plant.transitions_ix(p) {
                let event = &plant.alphabet()[ep];
                if event.is_controllable() {
                    continue;
                }
                if to_cand[ep].and_then(|ec| candidate.step_ix(c, ec)).is_none() {
                    let mut word = path(&parent, (c, p));
                    word.push(event.clone());
                    violation = Some(word);
                    break;
                }
            }
        }
    }
    Ok(ControllabilityReport {
        ok: violation.is_none(),
        witness: violation,
    })
}

/// `L(g1) = L(g2)` and `Lm(g1) = Lm(g2)`, decided by a synchronized walk
/// (both sides are deterministic).
pub fn language_equivalent(g1: &Generator, g2: &Generator) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::from([(g1.initial(), g2.initial())]);
    seen.insert((g1.initial(), g2.initial()));
    while let Some((x1, x2)) = queue.pop_front() {
        if g1.is_marked(x1) != g2.is_marked(x2) {
            return false;
        }
        let left: Vec<(&Event, StateId)> = g1.transitions(x1).collect();
        let right: Vec<(&Event, StateId)> = g2.transitions(x2).collect();
        if left.len() != right.len() {
            return false;
        }
        for ((e1, y1), (e2, y2)) in left.into_iter().zip(right) {
            if e1 != e2 {
                return false;
            }
            if seen.insert((y1, y2)) {
                queue.push_back((y1, y2));
            }
        }
    }
    true
}
