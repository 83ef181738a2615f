//! Graphviz DOT export. Marked states are double circles and
//! uncontrollable transitions dashed.

use std::fmt::Write;

use crate::automata::{Annotation, Generator};
use crate::cg::ControllerGenerator;
use crate::srtf::TargetFragment;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn header(name: &str) -> String {
    format!("digraph {} {{\n  rankdir=LR;\n  node [shape=circle];\n  __start [shape=point];\n", quote(name))
}

pub fn generator_to_dot(g: &Generator, name: &str) -> String {
    let mut out = header(name);
    for s in g.states() {
        let label = match g.annotation(s) {
            Some(Annotation::Plant(p)) => format!("{s}\n{p}"),
            Some(Annotation::Label(l)) => format!("{s}\n{l}"),
            _ => s.to_string(),
        };
        let shape = if g.is_marked(s) { "doublecircle" } else { "circle" };
        writeln!(out, "  {s} [label={}, shape={shape}];", quote(&label)).unwrap();
    }
    writeln!(out, "  __start -> {};", g.initial()).unwrap();
    for (s, e, t) in g.all_transitions() {
        let style = if e.is_controllable() { "" } else { ", style=dashed" };
        writeln!(out, "  {s} -> {t} [label={}{style}];", quote(&e.to_string())).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Edges are labelled `action,index`; states with their composition tuple.
/// An empty controller generator is a single node.
pub fn cg_to_dot(cg: &ControllerGenerator, name: &str) -> String {
    let mut out = header(name);
    let Some(init) = cg.initial else {
        out.push_str("  0 [label=\"no composition\"];\n  __start -> 0;\n}\n");
        return out;
    };
    for (q, st) in cg.states.iter().enumerate() {
        writeln!(out, "  {q} [label={}];", quote(&format!("{q}\n{}", st.tuple))).unwrap();
    }
    writeln!(out, "  __start -> {init};").unwrap();
    let mut seen = std::collections::BTreeSet::new();
    for e in &cg.edges {
        // nondeterministic outcomes to the same state share one arrow
        if seen.insert((e.from, &e.action, e.index, e.to)) {
            writeln!(out, "  {} -> {} [label={}];", e.from, e.to, quote(&format!("{},{}", e.action, e.index))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Fragment edges are labelled with the action and the delegated behavior.
pub fn fragment_to_dot(f: &TargetFragment, name: &str) -> String {
    let b = f.target.behavior();
    let mut out = header(name);
    for s in 0..b.state_count() {
        writeln!(out, "  {s} [label={}];", quote(b.state_name(s))).unwrap();
    }
    writeln!(out, "  __start -> {};", b.initial()).unwrap();
    for e in &f.edges {
        writeln!(out, "  {} -> {} [label={}];", e.from, e.to, quote(&format!("{},{}", e.transition.action, e.index))).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn machine_dot_marks_and_dashes() {
        let text = generator_to_dot(&fixtures::machine(), "G");
        assert!(text.contains("0 [label=\"0\", shape=doublecircle];"));
        assert!(text.contains("1 -> 2 [label=\"raw(0)\", style=dashed];"));
        assert!(text.contains("0 -> 1 [label=\"raw(1)\"];"));
    }

    #[test]
    fn empty_generator_is_one_node() {
        let text = generator_to_dot(&Generator::empty([]), "E");
        assert_eq!(text.matches("label=").count(), 1);
        assert!(!text.contains("->  ") && text.ends_with("}\n"));
    }
}
