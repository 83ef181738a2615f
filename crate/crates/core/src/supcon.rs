//! Supremal controllable sublanguage synthesis and control patterns.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::automata::{
    coreachable, format_word, reachable, sync_product, Annotation, AutomataError, Event, Generator, GeneratorBuilder,
    StateId, Word,
};
use crate::io::{EncodeError, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SupconError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error("specification is not closed under marked prefixes: `{}` is a marked plant word and a prefix of the specification but not in it", format_word(.witness))]
    MarkedPrefix { witness: Word },
}

/// The trim recognizer `R` of `supC(K ∩ Lm(G))`, with each state mapped back
/// to the plant state it tracks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupervisorGenerator {
    pub automaton: Generator,
    pub plant_map: Vec<StateId>,
}

impl SupervisorGenerator {
    /// `supC = ∅`.
    pub fn is_empty(&self) -> bool {
        self.automaton.is_empty_language()
    }

    pub fn plant_state(&self, r: StateId) -> StateId {
        self.plant_map[r]
    }
}

/// Computes the nonblocking supervisor for `plant` and `spec`.
///
/// The specification is intersected with the plant, then states where an
/// uncontrollable plant event escapes are deleted and the rest trimmed, until
/// nothing changes. State 0 of the result is initial; states are numbered in
/// breadth-first order and carry the plant's annotations.
pub fn supcon(plant: &Generator, spec: &Generator) -> Result<SupervisorGenerator, SupconError> {
    let product = sync_product(plant, spec)?;
    check_marked_prefix(plant, &product, spec)?;

    let pair = |s: StateId| match product.annotation(s) {
        Some(Annotation::Pair(p, k)) => (*p, *k),
        _ => unreachable!("product states are annotated with pairs"),
    };
    let uncontrollable: Vec<Vec<Event>> = product
        .states()
        .map(|s| {
            plant
                .transitions(pair(s).0)
                .filter(|(e, _)| !e.is_controllable())
                .map(|(e, _)| e.clone())
                .collect()
        })
        .collect();

    let mut keep = vec![true; product.state_count()];
    loop {
        let mut changed = false;
        for s in product.states() {
            if keep[s]
                && uncontrollable[s]
                    .iter()
                    .any(|e| !product.step(s, e).is_some_and(|t| keep[t]))
            {
                keep[s] = false;
                changed = true;
            }
        }
        if !keep[product.initial()] {
            break;
        }
        let useful = useful_states(&product, &keep);
        for s in product.states() {
            if keep[s] && !useful[s] {
                keep[s] = false;
                changed = true;
            }
        }
        if !changed || !keep[product.initial()] {
            break;
        }
    }

    if !keep[product.initial()] {
        return Ok(SupervisorGenerator {
            automaton: Generator::empty(product.alphabet().iter().cloned()),
            plant_map: vec![plant.initial()],
        });
    }
    Ok(renumber(plant, &product, &keep, |s| pair(s).0))
}

/// `¯K ∩ Lm(G) ⊆ K`: no reachable product state may be plant-marked,
/// spec-coreachable and spec-unmarked.
fn check_marked_prefix(plant: &Generator, product: &Generator, spec: &Generator) -> Result<(), SupconError> {
    let spec_coreach = coreachable(spec);
    for s in product.states() {
        let Some(Annotation::Pair(p, k)) = product.annotation(s) else {
            continue;
        };
        if plant.is_marked(*p) && spec_coreach[*k] && !spec.is_marked(*k) {
            let witness = product.word_to(s).expect("product states are reachable");
            return Err(SupconError::MarkedPrefix { witness });
        }
    }
    Ok(())
}

/// Reachable and coreachable within the kept states.
fn useful_states(g: &Generator, keep: &[bool]) -> Vec<bool> {
    let n = g.state_count();
    let mut fwd = vec![false; n];
    let mut stack = vec![g.initial()];
    fwd[g.initial()] = true;
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    while let Some(s) = stack.pop() {
        for (_, t) in g.transitions(s) {
            if keep[t] {
                preds[t].push(s);
                if !fwd[t] {
                    fwd[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    let mut back = vec![false; n];
    let mut stack: Vec<StateId> = g.states().filter(|&s| fwd[s] && g.is_marked(s)).collect();
    for &s in &stack {
        back[s] = true;
    }
    while let Some(s) = stack.pop() {
        for &p in &preds[s] {
            if !back[p] {
                back[p] = true;
                stack.push(p);
            }
        }
    }
    (0..n).map(|s| keep[s] && fwd[s] && back[s]).collect()
}

/// Breadth-first renumbering of the kept part, copying plant annotations.
fn renumber(
    plant: &Generator,
    g: &Generator,
    keep: &[bool],
    to_plant: impl Fn(StateId) -> StateId,
) -> SupervisorGenerator {
    let mut b = GeneratorBuilder::new();
    b.extend_alphabet(g.alphabet().iter().cloned());
    let mut id = vec![usize::MAX; g.state_count()];
    let mut plant_map = Vec::new();
    let mut order = VecDeque::new();
    let add = |s: StateId, b: &mut GeneratorBuilder, plant_map: &mut Vec<StateId>| {
        let p = to_plant(s);
        let ann = plant.annotation(p).cloned();
        plant_map.push(p);
        b.add_annotated_state(g.is_marked(s), ann)
    };
    id[g.initial()] = add(g.initial(), &mut b, &mut plant_map);
    order.push_back(g.initial());
    while let Some(s) = order.pop_front() {
        for (e, t) in g.transitions(s) {
            if !keep[t] {
                continue;
            }
            if id[t] == usize::MAX {
                id[t] = add(t, &mut b, &mut plant_map);
                order.push_back(t);
            }
            b.add_transition(id[s], e.clone(), id[t]).expect("subautomaton of a generator");
        }
    }
    SupervisorGenerator {
        automaton: b.build(0).expect("alphabet already checked"),
        plant_map,
    }
}

/// Per supervisor state, the controllable events the plant enables there but
/// the supervisor disables. States with nothing disabled are omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ControlPattern {
    pub disabled: BTreeMap<StateId, BTreeSet<Event>>,
}

impl ControlPattern {
    pub fn is_empty(&self) -> bool {
        self.disabled.is_empty()
    }

    /// TCT condat style, one `state:code[,code]` line per state.
    pub fn to_tct(&self, table: &SymbolTable) -> Result<String, EncodeError> {
        let mut lines = Vec::new();
        for (s, events) in &self.disabled {
            let mut codes = events.iter().map(|e| table.code(e)).collect::<Result<Vec<u32>, _>>()?;
            codes.sort_unstable();
            let codes: Vec<String> = codes.iter().map(u32::to_string).collect();
            lines.push(format!("{s}:{}", codes.join(",")));
        }
        Ok(lines.join("\n"))
    }
}

impl fmt::Display for ControlPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, events) in &self.disabled {
            let events: Vec<String> = events.iter().map(ToString::to_string).collect();
            writeln!(f, "{s}:{}", events.join(","))?;
        }
        Ok(())
    }
}

pub fn control_patterns(plant: &Generator, r: &SupervisorGenerator) -> ControlPattern {
    let mut disabled = BTreeMap::new();
    if r.is_empty() {
        return ControlPattern { disabled };
    }
    for s in r.automaton.states() {
        let p = r.plant_map[s];
        let off: BTreeSet<Event> = plant
            .transitions(p)
            .filter(|(e, _)| e.is_controllable() && !r.automaton.is_enabled(s, e))
            .map(|(e, _)| e.clone())
            .collect();
        if !off.is_empty() {
            disabled.insert(s, off);
        }
    }
    ControlPattern { disabled }
}

/// Whether every reachable state of `g` reaches a marked state.
pub fn is_nonblocking(g: &Generator) -> bool {
    let r = reachable(g);
    let c = coreachable(g);
    g.states().all(|s| !r[s] || c[s])
}
