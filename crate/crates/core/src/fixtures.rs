//! Reference instances: the simple machine, the mining-site composition
//! problem and its deterministic variant, plus the reference controller
//! generator and fragment they are checked against.
//!
//! The same instances ship as files under `fixtures/` for the CLI.

use crate::automata::{Event, Generator};
use crate::constraints::ConstraintSpec;
use crate::model::{Behavior, System, Target};

/// Machine events under their TCT codes.
pub const BREAK: u32 = 0;
pub const ON: u32 = 1;
pub const OPERATE: u32 = 3;
pub const REPAIR: u32 = 5;
pub const OFF: u32 = 7;
pub const DISMANTLE: u32 = 9;

/// TCT code ↔ name legend for the machine.
pub const MACHINE_LEGEND: [(u32, &str); 6] = [
    (BREAK, "break"),
    (ON, "on"),
    (OPERATE, "operate"),
    (REPAIR, "repair"),
    (OFF, "off"),
    (DISMANTLE, "dismantle"),
];

fn raw_generator(states: usize, marked: &[usize], edges: &[(usize, u32, usize)]) -> Generator {
    let mut b = Generator::builder();
    b.add_states(states, |s| marked.contains(&s));
    for &(s, e, t) in edges {
        b.add_transition(s, Event::raw(e), t).expect("fixture is deterministic");
    }
    b.build(0).expect("fixture is well formed")
}

/// The four-state machine: on, operate, the uncontrollable break, then
/// repair or dismantle; off returns to the marked idle state.
pub fn machine() -> Generator {
    raw_generator(
        4,
        &[0],
        &[(0, ON, 1), (1, OPERATE, 1), (1, BREAK, 2), (2, DISMANTLE, 3), (2, REPAIR, 1), (1, OFF, 0)],
    )
}

/// `(on · operate* · off)*`: never break down.
pub fn machine_k1() -> Generator {
    raw_generator(2, &[0, 1], &[(0, ON, 1), (1, OPERATE, 1), (1, OFF, 0)])
        .with_alphabet([Event::raw(BREAK)])
        .expect("same event kinds")
}

/// Anything but dismantle, as the one-state TCT listing `K`.
pub fn machine_k2() -> Generator {
    raw_generator(1, &[0], &[(0, ON, 0), (0, OPERATE, 0), (0, BREAK, 0), (0, REPAIR, 0), (0, OFF, 0)])
}

/// The machine listing, byte for byte as TCT prints it modulo the canonical
/// transition order.
pub const MACHINE_ADS: &str = include_str!("../fixtures/machine_G.ads");
pub const MACHINE_K2_ADS: &str = include_str!("../fixtures/machine_K.ads");
pub const MACHINE_SYMBOLS: &str = include_str!("../fixtures/machine.symbols.json");
pub const MINING_PROBLEM: &str = include_str!("../fixtures/mining.json");
pub const MINING_CONSTRAINED_PROBLEM: &str = include_str!("../fixtures/mining_constrained.json");
pub const MINING_DETERMINISTIC_PROBLEM: &str = include_str!("../fixtures/mining_deterministic.json");

fn behavior(name: &str, states: &[&str], transitions: &[(&str, &str, &str)]) -> Behavior {
    Behavior::new(name, states.iter().copied(), states[0], transitions.iter().copied()).expect("fixture is well formed")
}

/// The mining target: dig at t0, or run one GoMine, load, GoDepot, unload,
/// repair round.
pub fn mining_target() -> Target {
    Target::new(behavior(
        "target",
        &["t0", "t1", "t2", "t3", "t4"],
        &[
            ("t0", "dig", "t0"),
            ("t0", "GoMine", "t1"),
            ("t1", "load", "t2"),
            ("t2", "GoDepot", "t3"),
            ("t3", "unload", "t4"),
            ("t4", "repair", "t0"),
        ],
    ))
    .expect("target is deterministic")
}

/// Truck, loader and excavator. The truck may break on its way to the mine
/// and the loader may break while unloading.
pub fn mining_system() -> System {
    let truck = behavior(
        "truck",
        &["a0", "a1", "a2", "a3"],
        &[
            ("a0", "GoMine", "a1"),
            ("a0", "GoMine", "a3"),
            ("a1", "GoDepot", "a2"),
            ("a2", "unload", "a0"),
            ("a3", "repair", "a0"),
        ],
    );
    let loader = behavior(
        "loader",
        &["b0", "b1", "b2", "b3"],
        &[
            ("b0", "load", "b0"),
            ("b0", "GoDepot", "b1"),
            ("b1", "unload", "b0"),
            ("b1", "unload", "b2"),
            ("b2", "repair", "b3"),
            ("b3", "GoMine", "b0"),
        ],
    );
    let excavator = behavior(
        "excavator",
        &["c0", "c1"],
        &[("c0", "dig", "c0"), ("c1", "dig", "c1"), ("c0", "load", "c1"), ("c1", "repair", "c0")],
    );
    System::new(vec![truck, loader, excavator]).expect("distinct names")
}

pub fn mining() -> (System, Target) {
    (mining_system(), mining_target())
}

/// Deterministic variant: the excavator cannot dig or load again before a
/// repair, and nobody breaks down unexpectedly.
pub fn deterministic_mining() -> (System, Target) {
    let truck = behavior(
        "truck",
        &["a0", "a1", "a2"],
        &[("a0", "repair", "a0"), ("a0", "GoMine", "a1"), ("a1", "GoDepot", "a2"), ("a2", "unload", "a0")],
    );
    let loader = behavior(
        "loader",
        &["b0", "b1", "b2"],
        &[
            ("b0", "load", "b0"),
            ("b0", "GoDepot", "b1"),
            ("b1", "unload", "b0"),
            ("b1", "repair", "b2"),
            ("b2", "GoMine", "b0"),
        ],
    );
    let excavator = behavior(
        "excavator",
        &["c0", "c1"],
        &[("c0", "dig", "c0"), ("c0", "load", "c1"), ("c1", "repair", "c0")],
    );
    (
        System::new(vec![truck, loader, excavator]).expect("distinct names"),
        mining_target(),
    )
}

/// The reference nine-state supremal fragment for the deterministic variant.
pub fn deterministic_mining_fragment() -> Target {
    Target::nondeterministic(behavior(
        "fragment",
        &["t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8"],
        &[
            ("t0", "dig", "t0"),
            ("t0", "GoMine", "t1"),
            ("t1", "load", "t2"),
            ("t2", "GoDepot", "t3"),
            ("t3", "unload", "t4"),
            ("t4", "repair", "t0"),
            ("t1", "load", "t5"),
            ("t5", "GoDepot", "t6"),
            ("t6", "unload", "t7"),
            ("t7", "repair", "t8"),
            ("t8", "GoMine", "t1"),
            ("t7", "repair", "t0"),
        ],
    ))
}

/// Edges `(from, action, behavior, to)` of the reference mining controller
/// generator (22 states, state 0 initial).
pub const MINING_CG_EDGES: [(usize, &str, usize, usize); 32] = [
    (0, "dig", 3, 0),
    (0, "GoMine", 1, 1),
    (0, "GoMine", 1, 2),
    (1, "load", 2, 3),
    (1, "load", 3, 18),
    (2, "load", 3, 5),
    (3, "GoDepot", 2, 11),
    (4, "load", 2, 3),
    (4, "load", 3, 18),
    (5, "GoDepot", 1, 6),
    (6, "unload", 1, 9),
    (7, "GoMine", 2, 4),
    (7, "dig", 3, 7),
    (8, "repair", 1, 0),
    (9, "repair", 3, 0),
    (10, "repair", 2, 7),
    (11, "unload", 2, 8),
    (11, "unload", 2, 10),
    (12, "repair", 2, 14),
    (13, "dig", 3, 13),
    (13, "GoMine", 1, 16),
    (13, "GoMine", 1, 17),
    (14, "GoMine", 2, 17),
    (14, "dig", 3, 14),
    (15, "unload", 2, 21),
    (15, "unload", 2, 12),
    (16, "load", 2, 20),
    (17, "load", 2, 19),
    (18, "GoDepot", 2, 15),
    (19, "GoDepot", 2, 15),
    (20, "GoDepot", 1, 6),
    (21, "repair", 1, 13),
];

/// Composition tuples of the reference controller generator, by state.
/// Row 21 follows from the edges into and out of it.
pub const MINING_CG_TUPLES: [[&str; 4]; 22] = [
    ["t0", "a0", "b0", "c0"],
    ["t1", "a3", "b0", "c0"],
    ["t1", "a1", "b0", "c0"],
    ["t2", "a3", "b0", "c0"],
    ["t1", "a3", "b0", "c0"],
    ["t2", "a1", "b0", "c1"],
    ["t3", "a2", "b0", "c1"],
    ["t0", "a3", "b3", "c0"],
    ["t4", "a3", "b0", "c0"],
    ["t4", "a0", "b0", "c1"],
    ["t4", "a3", "b2", "c0"],
    ["t3", "a3", "b1", "c0"],
    ["t4", "a3", "b2", "c1"],
    ["t0", "a0", "b0", "c1"],
    ["t0", "a3", "b3", "c1"],
    ["t3", "a3", "b1", "c1"],
    ["t1", "a1", "b0", "c1"],
    ["t1", "a3", "b0", "c1"],
    ["t2", "a3", "b0", "c1"],
    ["t2", "a3", "b0", "c1"],
    ["t2", "a1", "b0", "c1"],
    ["t4", "a3", "b0", "c1"],
];

/// Once the excavator has loaded, the next repair must be delegated to it.
///
/// The excavator reaches `c1` only by loading and leaves it only by repair,
/// so `evo(3,c1)` marks the improper use.
pub fn excavator_repair_constraint() -> ConstraintSpec {
    let mut b = Generator::builder();
    let free = b.add_state(true);
    let owed = b.add_state(true);
    let repair_pending = b.add_state(true);
    let edges = [
        (free, Event::evolve(3, "c1"), owed),
        (free, Event::request("repair"), free),
        (free, Event::delegate(1), free),
        (free, Event::delegate(2), free),
        (free, Event::delegate(3), free),
        (owed, Event::evolve(3, "c1"), owed),
        (owed, Event::request("repair"), repair_pending),
        (owed, Event::delegate(1), owed),
        (owed, Event::delegate(2), owed),
        (owed, Event::delegate(3), owed),
        (repair_pending, Event::delegate(3), free),
    ];
    for (s, e, t) in edges {
        b.add_transition(s, e, t).expect("deterministic");
    }
    ConstraintSpec::new(
        b.build(free).expect("well formed"),
        "the excavator is repaired first after it has been used to load",
    )
    .expect("all states marked")
}
