//! Plain labelled transition systems with naive partition refinement, used to
//! compare synthesized structures against reference automata.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts<L> {
    states: usize,
    initial: usize,
    colours: Vec<u32>,
    edges: Vec<(usize, L, usize)>,
}

impl<L: Ord + Clone> Lts<L> {
    pub fn new(states: usize, initial: usize) -> Self {
        Lts {
            states,
            initial,
            colours: vec![0; states],
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, from: usize, label: L, to: usize) {
        self.edges.push((from, label, to));
    }

    /// States of different colours are never bisimilar.
    pub fn set_colour(&mut self, state: usize, colour: u32) {
        self.colours[state] = colour;
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn edges(&self) -> &[(usize, L, usize)] {
        &self.edges
    }

    /// The part reachable from the initial state, renumbered breadth-first.
    pub fn reachable_part(&self) -> Lts<L> {
        let mut out: Vec<Vec<(L, usize)>> = vec![Vec::new(); self.states];
        for (s, l, t) in &self.edges {
            out[*s].push((l.clone(), *t));
        }
        let mut id = vec![usize::MAX; self.states];
        let mut order = vec![self.initial];
        id[self.initial] = 0;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(s) = queue.pop_front() {
            for (_, t) in &out[s] {
                if id[*t] == usize::MAX {
                    id[*t] = order.len();
                    order.push(*t);
                    queue.push_back(*t);
                }
            }
        }
        let mut lts = Lts::new(order.len(), 0);
        for (i, &s) in order.iter().enumerate() {
            lts.colours[i] = self.colours[s];
        }
        for (s, l, t) in &self.edges {
            if id[*s] != usize::MAX {
                lts.add_edge(id[*s], l.clone(), id[*t]);
            }
        }
        lts
    }

    /// Class index per state under the coarsest bisimulation respecting the
    /// colours.
    pub fn bisimulation_classes(&self) -> Vec<usize> {
        let mut out: Vec<Vec<(L, usize)>> = vec![Vec::new(); self.states];
        for (s, l, t) in &self.edges {
            out[*s].push((l.clone(), *t));
        }
        let mut class: Vec<usize> = {
            let mut ids = BTreeMap::new();
            self.colours
                .iter()
                .map(|c| {
                    let next = ids.len();
                    *ids.entry(*c).or_insert(next)
                })
                .collect()
        };
        let mut count = class.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut ids: BTreeMap<(usize, BTreeSet<(L, usize)>), usize> = BTreeMap::new();
            let next: Vec<usize> = (0..self.states)
                .map(|s| {
                    let sig: BTreeSet<(L, usize)> = out[s].iter().map(|(l, t)| (l.clone(), class[*t])).collect();
                    let fresh = ids.len();
                    *ids.entry((class[s], sig)).or_insert(fresh)
                })
                .collect();
            let new_count = ids.len();
            class = next;
            if new_count == count {
                return class;
            }
            count = new_count;
        }
    }

    /// The quotient of the reachable part by bisimilarity.
    pub fn quotient(&self) -> Lts<L> {
        let reach = self.reachable_part();
        let classes = reach.bisimulation_classes();
        // renumber classes in first-occurrence order so state 0 stays initial
        let mut id = BTreeMap::new();
        for &c in &classes {
            let next = id.len();
            id.entry(c).or_insert(next);
        }
        let mut lts = Lts::new(id.len(), id[&classes[reach.initial]]);
        for (s, &c) in classes.iter().enumerate() {
            lts.colours[id[&c]] = reach.colours[s];
        }
        let mut edges: BTreeSet<(usize, L, usize)> = BTreeSet::new();
        for (s, l, t) in &reach.edges {
            edges.insert((id[&classes[*s]], l.clone(), id[&classes[*t]]));
        }
        lts.edges = edges.into_iter().collect();
        lts
    }
}

/// Whether the initial states of `a` and `b` are bisimilar.
pub fn bisimilar<L: Ord + Clone>(a: &Lts<L>, b: &Lts<L>) -> bool {
    let mut union = Lts::new(a.states + b.states, a.initial);
    union.colours = a.colours.iter().chain(&b.colours).copied().collect();
    for (s, l, t) in &a.edges {
        union.add_edge(*s, l.clone(), *t);
    }
    for (s, l, t) in &b.edges {
        union.add_edge(a.states + s, l.clone(), a.states + t);
    }
    let classes = union.bisimulation_classes();
    classes[a.initial] == classes[a.states + b.initial]
}
