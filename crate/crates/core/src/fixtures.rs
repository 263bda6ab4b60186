//! Small reference objects: the four-state automaton over inputs `a..d`
//! recognizing `σ₁ σ₂* σ₃`, its compiled network, and the biased-weight
//! network for `{⟨{a,b}⟩, ⟨{b,c}⟩}`.

use std::collections::{BTreeMap, BTreeSet};

use crate::automata::{Nfa, Transition};
use crate::compiler::{compile_delay1, AutomatonBundle};
use crate::network::{PositiveNetwork, Weight};
use crate::symbol::{InputString, NeuronId, StateId, Symbol};

pub fn neuron(name: &str) -> NeuronId {
    name.parse().expect("valid neuron name")
}

pub fn neurons(names: &[&str]) -> BTreeSet<NeuronId> {
    names.iter().map(|n| neuron(n)).collect()
}

/// Symbol from a comma-separated member list; `""` is `∅`.
pub fn symbol(members: &str) -> Symbol {
    if members.is_empty() {
        Symbol::empty()
    } else {
        Symbol::from_names(members.split(',')).expect("valid symbol")
    }
}

/// `σ₁ = {a,b,c}`, `σ₂ = {b,c}`, `σ₃ = {a,d}`.
pub fn sigma(i: usize) -> Symbol {
    match i {
        1 => symbol("a,b,c"),
        2 => symbol("b,c"),
        3 => symbol("a,d"),
        _ => panic!("no σ{i} in the reference example"),
    }
}

pub fn string(symbols: &[Symbol]) -> InputString {
    symbols.iter().cloned().collect()
}

/// Builds an automaton from string literals; triples are `(from, members, to)`.
pub fn nfa(states: &[&str], inputs: &[&str], start: &str, accepting: &[&str], triples: &[(&str, &str, &str)]) -> Nfa {
    let st = |s: &str| -> StateId { s.parse().expect("valid state name") };
    Nfa::new(
        states.iter().map(|s| st(s)),
        inputs.iter().map(|s| neuron(s)),
        st(start),
        accepting.iter().map(|s| st(s)),
        triples.iter().map(|(f, m, t)| Transition::new(st(f), symbol(m), st(t))),
    )
    .expect("well-formed automaton")
}

/// Clean automaton for `σ₁ σ₂* σ₃`: `q0 -σ₁-> q1`, `q1 <-σ₂-> q2`,
/// `q1, q2 -σ₃-> q3`, with `q3` accepting.
pub fn fig1_automaton() -> Nfa {
    nfa(
        &["q0", "q1", "q2", "q3"],
        &["a", "b", "c", "d"],
        "q0",
        &["q3"],
        &[
            ("q0", "a,b,c", "q1"),
            ("q1", "b,c", "q2"),
            ("q2", "b,c", "q1"),
            ("q1", "a,d", "q3"),
            ("q2", "a,d", "q3"),
        ],
    )
}

pub fn fig1_bundle() -> AutomatonBundle {
    AutomatonBundle::new(neurons(&["a", "b", "c", "d"]), BTreeMap::from([(neuron("x"), fig1_automaton())]))
        .expect("valid bundle")
}

/// Delay-1 network compiled from [`fig1_automaton`].
pub fn fig2_network() -> PositiveNetwork {
    compile_delay1(&fig1_bundle()).expect("reference automaton compiles").network
}

/// Automaton for `{⟨{a,b}⟩, ⟨{b,c}⟩}` over `{a,b,c}`.
pub fn bias_automaton() -> Nfa {
    nfa(&["s", "q1", "q2"], &["a", "b", "c"], "s", &["q1", "q2"], &[("s", "a,b", "q1"), ("s", "b,c", "q2")])
}

pub fn bias_bundle() -> AutomatonBundle {
    AutomatonBundle::new(neurons(&["a", "b", "c"]), BTreeMap::from([(neuron("x"), bias_automaton())]))
        .expect("valid bundle")
}

/// Auxiliary-free zero-delay network for [`bias_automaton`]:
/// `W(a,x) = 1/3`, `W(b,x) = 2/3`, `W(c,x) = 1/3`.
pub fn bias_network() -> PositiveNetwork {
    let mut net = PositiveNetwork::new(neurons(&["a", "b", "c"]), neurons(&["x"]), BTreeSet::new());
    let x = neuron("x");
    for (u, num) in [("a", 1), ("b", 2), ("c", 1)] {
        net.set_weight(neuron(u), x.clone(), Weight::new(num, 3).expect("nonzero denominator"));
    }
    net
}
