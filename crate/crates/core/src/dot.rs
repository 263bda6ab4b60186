//! Graphviz rendering. Output depends only on the canonical order of
//! states, neurons and triples, so equal inputs give equal bytes.

use std::fmt::Write;

use crate::automata::Nfa;
use crate::network::{PositiveNetwork, Role};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Accepting states are double circles; the start state gets an arrow from
/// an invisible point.
pub fn automaton_dot(nfa: &Nfa) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  __start [shape=point, label=\"\"];\n");
    for q in nfa.states() {
        let shape = if nfa.is_accepting(q) { "doublecircle" } else { "circle" };
        writeln!(out, "  {} [shape={shape}];", quote(q.as_str())).unwrap();
    }
    writeln!(out, "  __start -> {};", quote(nfa.start().as_str())).unwrap();
    for t in nfa.transitions() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(t.from.as_str()),
            quote(t.to.as_str()),
            quote(&format!("{{{}}}", t.symbol.joined()))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Inputs are boxes, outputs double ellipses, auxiliary neurons ellipses;
/// edges carry their weight as `num/den`.
pub fn network_dot(net: &PositiveNetwork) -> String {
    let mut out = String::from("digraph network {\n  rankdir=LR;\n");
    for id in net.inputs().iter().chain(net.auxiliary()).chain(net.outputs()) {
        let attrs = match net.role(id) {
            Some(Role::Input) => "shape=box",
            Some(Role::Output) => "shape=ellipse, peripheries=2",
            _ => "shape=ellipse",
        };
        writeln!(out, "  {} [{attrs}];", quote(id.as_str())).unwrap();
    }
    for (from, to, w) in net.weights() {
        writeln!(out, "  {} -> {} [label={}];", quote(from.as_str()), quote(to.as_str()), quote(&w.to_string()))
            .unwrap();
    }
    out.push_str("}\n");
    out
}
