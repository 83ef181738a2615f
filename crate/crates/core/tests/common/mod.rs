//! Shared instance generators and brute-force oracles for the integration
//! tests. Nothing here calls the synthesis code under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use descomp::automata::Annotation;
use descomp::fixtures;
use descomp::lts::Lts;
use descomp::model::{Action, Behavior, EnactedSystem, System, Target};
use descomp::{Event, Generator, GeneratorBuilder, StateId};
use rand::rngs::StdRng;
use rand::Rng;

pub const ACTIONS: [&str; 3] = ["a", "b", "c"];

/// A random behavior over `ACTIONS`; every state has at least one transition
/// with probability `density`.
pub fn random_behavior(rng: &mut StdRng, name: &str, prefix: &str, states: usize, density: f64, deterministic: bool) -> Behavior {
    let names: Vec<String> = (0..states).map(|i| format!("{prefix}{i}")).collect();
    let mut edges = Vec::new();
    for s in 0..states {
        for a in ACTIONS {
            if deterministic {
                if rng.gen_bool(density) {
                    edges.push((names[s].clone(), a.to_string(), names[rng.gen_range(0..states)].clone()));
                }
            } else {
                for t in 0..states {
                    if rng.gen_bool(density / states as f64 * 1.5) {
                        edges.push((names[s].clone(), a.to_string(), names[t].clone()));
                    }
                }
            }
        }
    }
    Behavior::new(name, names.iter().map(String::as_str), &names[0], edges).expect("generated behavior is well formed")
}

/// A random composition instance: deterministic target of at most
/// `max_target` states, at most `max_behaviors` behaviors of at most
/// `max_states` states each.
pub fn random_instance(rng: &mut StdRng, max_target: usize, max_behaviors: usize, max_states: usize, deterministic_system: bool) -> (System, Target) {
    let tn = rng.gen_range(1..=max_target);
    let target = Target::new(random_behavior(rng, "target", "t", tn, 0.5, true)).expect("deterministic");
    let n = rng.gen_range(1..=max_behaviors);
    let behaviors = (1..=n)
        .map(|j| {
            let k = rng.gen_range(1..=max_states);
            random_behavior(rng, &format!("b{j}"), &format!("s{j}_"), k, 0.6, deterministic_system)
        })
        .collect();
    (System::new(behaviors).expect("distinct names"), target)
}

/// All words of length at most `len` over the alphabet of `g` that `g`
/// generates, with whether each is marked.
pub fn generated_words(g: &Generator, len: usize) -> Vec<(Vec<Event>, bool)> {
    let mut out = vec![(Vec::new(), g.is_marked(g.initial()))];
    let mut frontier = vec![(Vec::new(), g.initial())];
    for _ in 0..len {
        let mut next = Vec::new();
        for (w, s) in &frontier {
            for (e, t) in g.transitions(*s) {
                let mut w2: Vec<Event> = w.clone();
                w2.push(e.clone());
                out.push((w2.clone(), g.is_marked(t)));
                next.push((w2, t));
            }
        }
        frontier = next;
    }
    out
}

/// Same states, marking and transitions, ignoring annotations.
pub fn same_structure(a: &Generator, b: &Generator) -> bool {
    a.state_count() == b.state_count()
        && a.initial() == b.initial()
        && a.states().all(|s| a.is_marked(s) == b.is_marked(s))
        && a.all_transitions().collect::<BTreeSet<_>>() == b.all_transitions().collect::<BTreeSet<_>>()
}

/// A random generator over raw events `0..events`; odd codes controllable.
pub fn random_generator(rng: &mut StdRng, states: usize, events: u32, density: f64, marked: f64) -> Generator {
    let mut b = GeneratorBuilder::new();
    b.extend_alphabet((0..events).map(Event::raw));
    for _ in 0..states {
        b.add_state(rng.gen_bool(marked));
    }
    for s in 0..states {
        for e in 0..events {
            if rng.gen_bool(density) {
                b.add_transition(s, Event::raw(e), rng.gen_range(0..states)).expect("one edge per event");
            }
        }
    }
    b.build(0).expect("well formed")
}

/// Brute-force supremal controllable nonblocking subautomaton of a product
/// `h` of `plant` with some specification: the union of every state subset
/// that contains the initial state, is trim within itself and lets no
/// uncontrollable plant event escape. Returns `h` restricted to that union,
/// or `None` when no subset qualifies.
pub fn brute_force_supcon(plant: &Generator, h: &Generator) -> Option<Generator> {
    let n = h.state_count();
    assert!(n <= 12, "brute force is exponential");
    let plant_of = |s: StateId| match h.annotation(s) {
        Some(Annotation::Pair(p, _)) => *p,
        _ => panic!("product states carry pairs"),
    };
    let valid = |mask: u32| -> bool {
        let inside = |s: StateId| mask & (1 << s) != 0;
        if !inside(h.initial()) {
            return false;
        }
        for s in (0..n).filter(|&s| inside(s)) {
            for (e, _) in plant.transitions(plant_of(s)) {
                if !e.is_controllable() && !h.step(s, e).is_some_and(inside) {
                    return false;
                }
            }
        }
        // reachability and coreachability inside the subset
        let mut fwd = vec![false; n];
        let mut stack = vec![h.initial()];
        fwd[h.initial()] = true;
        while let Some(s) = stack.pop() {
            for (_, t) in h.transitions(s) {
                if inside(t) && !fwd[t] {
                    fwd[t] = true;
                    stack.push(t);
                }
            }
        }
        let mut back: Vec<bool> = (0..n).map(|s| inside(s) && h.is_marked(s)).collect();
        loop {
            let mut changed = false;
            for s in 0..n {
                if inside(s) && !back[s] && h.transitions(s).any(|(_, t)| inside(t) && back[t]) {
                    back[s] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (0..n).filter(|&s| inside(s)).all(|s| fwd[s] && back[s])
    };
    let mut union = 0u32;
    let mut any = false;
    for mask in 0..(1u32 << n) {
        if valid(mask) {
            union |= mask;
            any = true;
        }
    }
    if !any {
        return None;
    }
    assert!(valid(union), "valid subsets are closed under union");
    let kept: Vec<StateId> = (0..n).filter(|&s| union & (1 << s) != 0).collect();
    let id: BTreeMap<StateId, StateId> = kept.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut b = GeneratorBuilder::new();
    b.extend_alphabet(h.alphabet().iter().cloned());
    for &s in &kept {
        b.add_state(h.is_marked(s));
    }
    for (s, e, t) in h.all_transitions() {
        if let (Some(&s2), Some(&t2)) = (id.get(&s), id.get(&t)) {
            b.add_transition(s2, e.clone(), t2).expect("subautomaton");
        }
    }
    Some(b.build(id[&h.initial()]).expect("well formed"))
}

/// Greatest ND-simulation by enumerating every subset of `T × B_S` and
/// keeping the union of those satisfying the closure condition.
pub fn brute_force_nd_simulation(target: &Target, e: &EnactedSystem) -> BTreeSet<(usize, usize)> {
    let tb = target.behavior();
    let pairs: Vec<(usize, usize)> = (0..tb.state_count())
        .flat_map(|t| (0..e.state_count()).map(move |b| (t, b)))
        .collect();
    assert!(pairs.len() <= 16, "brute force is exponential");
    let n = e.state(0).len();
    let closed = |rel: &BTreeSet<(usize, usize)>| -> bool {
        rel.iter().all(|&(t, b)| {
            tb.actions().iter().all(|a| {
                let ts: Vec<usize> = tb.successors(t, a).collect();
                ts.is_empty()
                    || (1..=n).any(|j| {
                        let bs: Vec<usize> = e.successors(b, a, j).collect();
                        !bs.is_empty() && ts.iter().all(|&t2| bs.iter().all(|&b2| rel.contains(&(t2, b2))))
                    })
            })
        })
    };
    let mut best = BTreeSet::new();
    for mask in 0..(1u32 << pairs.len()) {
        let rel: BTreeSet<(usize, usize)> = (0..pairs.len()).filter(|i| mask & (1 << i) != 0).map(|i| pairs[i]).collect();
        if closed(&rel) {
            best.extend(rel);
        }
    }
    assert!(closed(&best));
    best
}

/// The reference mining controller generator as an LTS over
/// `(action, behavior)` labels, optionally restricted to states below `limit`.
pub fn reference_cg_lts(limit: usize) -> Lts<(Action, usize)> {
    let mut lts = Lts::new(fixtures::MINING_CG_TUPLES.len(), 0);
    for (s, a, j, t) in fixtures::MINING_CG_EDGES {
        if s < limit && t < limit {
            lts.add_edge(s, (Action::from(a), j), t);
        }
    }
    lts.reachable_part()
}

/// Multiset of labels along every edge, for quick structural comparisons.
pub fn label_counts<L: Ord + Clone>(lts: &Lts<L>) -> BTreeMap<L, usize> {
    let mut m = BTreeMap::new();
    for (_, l, _) in lts.edges() {
        *m.entry(l.clone()).or_insert(0) += 1;
    }
    m
}

/// Forward closure over plant states following the request, delegation and
/// evolution rules directly, on index vectors. Returns the number of states.
pub fn brute_force_plant_size(system: &System, target: &Target) -> usize {
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    enum Ph {
        Idle,
        Req(Action),
        Del(Action, usize),
    }
    let tb = target.behavior();
    let start = (tb.initial(), system.initial_vector(), Ph::Idle);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((t, b, ph)) = queue.pop_front() {
        let mut next = Vec::new();
        match &ph {
            Ph::Idle => {
                for (a, t2) in tb.transitions_from(t) {
                    next.push((*t2, b.clone(), Ph::Req(a.clone())));
                }
            }
            Ph::Req(a) => {
                for j in 1..=system.len() {
                    next.push((t, b.clone(), Ph::Del(a.clone(), j)));
                }
            }
            Ph::Del(a, j) => {
                for b2 in system.behavior(*j).successors(b[j - 1], a) {
                    let mut v = b.clone();
                    v[j - 1] = b2;
                    next.push((t, v, Ph::Idle));
                }
            }
        }
        for s in next {
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    seen.len()
}
