//! Network-to-automaton extraction.
//!
//! For an output neuron `x`, the extracted automaton tracks the exact
//! activation set of the network: its states are `start`, `halt`, and the
//! subsets of `O ∪ A` reachable from the empty activation. Reading `∅` from
//! `start` leads to the absorbing `halt` state, so every accepted string
//! begins with a nonempty symbol.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;

use crate::automata::{Nfa, Transition};
use crate::error::{Error, Result};
use crate::network::{PositiveNetwork, Simulator};
use crate::symbol::{powerset, NeuronId, StateId, Symbol};
use crate::verifier::BehaviorOracle;

pub const START: &str = "start";
pub const HALT: &str = "halt";

/// Extracts the automaton of `x` with transitions on every symbol over the
/// network inputs.
pub fn extract_automaton(net: &PositiveNetwork, x: &NeuronId, state_budget: u128) -> Result<Nfa> {
    extract_automaton_over(net, x, state_budget, &powerset(net.inputs()))
}

/// Like [`extract_automaton`], with transitions only on `alphabet`.
pub fn extract_automaton_over(
    net: &PositiveNetwork,
    x: &NeuronId,
    state_budget: u128,
    alphabet: &[Symbol],
) -> Result<Nfa> {
    if !net.outputs().contains(x) {
        return Err(Error::Validation(format!("{x} is not an output neuron of the network")));
    }
    let active = net.outputs().len() + net.auxiliary().len();
    let required = u32::try_from(active).ok().and_then(|n| 2u128.checked_pow(n)).and_then(|p| p.checked_add(2));
    match required {
        Some(r) if r <= state_budget => {}
        Some(r) => {
            return Err(Error::Budget(format!(
                "extraction may need {r} states (2^{active} + 2), above the state budget of {state_budget}"
            )))
        }
        None => {
            return Err(Error::Budget(format!(
                "extraction may need 2^{active} + 2 states, above the state budget of {state_budget}"
            )))
        }
    }

    let sim = net.simulator()?;
    let masks: Vec<(Symbol, FixedBitSet)> =
        alphabet.iter().map(|s| Ok((s.clone(), sim.input_index().mask(s)?))).collect::<Result<_>>()?;
    let x_bit = sim.active_ids().iter().position(|id| id == x).expect("outputs are active neurons");

    let start = state(START);
    let halt = state(HALT);
    let mut names: BTreeMap<FixedBitSet, StateId> = BTreeMap::new();
    let mut accepting = BTreeSet::new();
    let mut transitions = BTreeSet::new();
    let mut queue = VecDeque::new();
    let mut has_halt = false;

    let mut visit = |set: FixedBitSet, names: &mut BTreeMap<FixedBitSet, StateId>, queue: &mut VecDeque<FixedBitSet>| {
        if let Some(q) = names.get(&set) {
            return q.clone();
        }
        let q = subset_name(&sim, &set);
        if set.contains(x_bit) {
            accepting.insert(q.clone());
        }
        names.insert(set.clone(), q.clone());
        queue.push_back(set);
        q
    };

    let empty = sim.initial();
    for (sym, mask) in &masks {
        let to = if sym.is_empty() {
            has_halt = true;
            halt.clone()
        } else {
            visit(sim.step_bits(&empty, mask), &mut names, &mut queue)
        };
        transitions.insert(Transition::new(start.clone(), sym.clone(), to));
    }
    while let Some(set) = queue.pop_front() {
        let from = names[&set].clone();
        for (sym, mask) in &masks {
            let to = visit(sim.step_bits(&set, mask), &mut names, &mut queue);
            transitions.insert(Transition::new(from.clone(), sym.clone(), to));
        }
    }
    if has_halt {
        for (sym, _) in &masks {
            transitions.insert(Transition::new(halt.clone(), sym.clone(), halt.clone()));
        }
    }

    let mut states: Vec<StateId> = names.into_values().collect();
    states.push(start.clone());
    if has_halt {
        states.push(halt);
    }
    Nfa::new(states, net.inputs().iter().cloned(), start, accepting, transitions)
}

/// Automata for every output of `net`.
pub fn extract_all(net: &PositiveNetwork, state_budget: u128) -> Result<BTreeMap<NeuronId, Nfa>> {
    net.outputs().iter().map(|x| Ok((x.clone(), extract_automaton(net, x, state_budget)?))).collect()
}

/// The monotone-regular behavior defined by `nfas` over the union of their
/// inputs.
pub fn induced_behavior(nfas: BTreeMap<NeuronId, Nfa>) -> Result<BehaviorOracle> {
    let inputs: BTreeSet<NeuronId> = nfas.values().flat_map(|m| m.inputs().iter().cloned()).collect();
    BehaviorOracle::new(inputs, nfas)
}

fn state(name: &str) -> StateId {
    StateId::new(name).expect("fixed state names are valid")
}

/// `{a,b}` with members in sorted order; `{}` for the empty activation.
fn subset_name(sim: &Simulator, set: &FixedBitSet) -> StateId {
    let members: Vec<String> = sim.names(set).iter().map(|n| n.as_str().to_owned()).collect();
    StateId::new(format!("{{{}}}", members.join(","))).expect("neuron names contain no whitespace")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts, is_founded};
    use crate::fixtures::{fig2_network, neuron, neurons, string, symbol};
    use crate::network::{output, Weight};
    use crate::verifier::behavior_eval;

    fn single_input_net() -> PositiveNetwork {
        let mut net = PositiveNetwork::new(neurons(&["a", "b"]), neurons(&["x"]), BTreeSet::new());
        net.set_weight(neuron("a"), neuron("x"), Weight::ONE);
        net
    }

    fn all_strings(pool: &[Symbol], max_len: usize) -> Vec<Vec<Symbol>> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|s: &Vec<Symbol>| {
                    pool.iter().map(move |sym| {
                        let mut t = s.clone();
                        t.push(sym.clone());
                        t
                    })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    #[test]
    fn single_weight_network() {
        let net = single_input_net();
        let m = extract_automaton(&net, &neuron("x"), 16).unwrap();
        let names: BTreeSet<&str> = m.states().iter().map(|q| q.as_str()).collect();
        assert_eq!(names, BTreeSet::from(["start", "halt", "{}", "{x}"]));
        assert_eq!(m.accepting().iter().map(|q| q.as_str()).collect::<Vec<_>>(), ["{x}"]);
        assert!(is_founded(&m));
        let oracle = induced_behavior(BTreeMap::from([(neuron("x"), m)])).unwrap();
        let pool = powerset(net.inputs());
        for s in all_strings(&pool, 4).into_iter().filter(|s| !s.is_empty()) {
            let alpha = string(&s);
            let fires = s.last().unwrap().contains(&neuron("a"));
            assert_eq!(behavior_eval(&oracle, &alpha).unwrap().contains(&neuron("x")), fires, "{alpha:?}");
        }
    }

    #[test]
    fn deterministic_and_halting() {
        let net = fig2_network();
        let m = extract_automaton(&net, &neuron("x"), 1 << 10).unwrap();
        let pool = powerset(net.inputs());
        for q in m.states() {
            for s in &pool {
                assert_eq!(m.successors(q, s).count(), 1, "{q} on {s}");
            }
        }
        let halt = state(HALT);
        assert!(!m.is_accepting(&halt));
        for s in &pool {
            assert_eq!(m.successors(&halt, s).collect::<Vec<_>>(), [&halt]);
        }
        assert!(m.states().iter().any(|q| q.as_str() == "{(q1|a,b,c)}"));
    }

    #[test]
    fn fig2_roundtrip_to_length_3() {
        let net = fig2_network();
        let oracle = induced_behavior(extract_all(&net, 1 << 10).unwrap()).unwrap();
        let pool = powerset(net.inputs());
        for s in all_strings(&pool, 3).into_iter().filter(|s| !s.is_empty()) {
            let alpha = string(&s);
            assert_eq!(behavior_eval(&oracle, &alpha).unwrap(), output(&net, &alpha).unwrap(), "{alpha:?}");
        }
    }

    #[test]
    fn accepted_strings_are_exactly_firing_runs() {
        let net = fig2_network();
        let m = extract_automaton(&net, &neuron("x"), 1 << 10).unwrap();
        let alpha = string(&[symbol("a,b,c"), symbol("a,d"), symbol("")]);
        assert!(accepts(&m, &alpha).unwrap());
        assert!(!accepts(&m, &string(&[symbol(""), symbol("a,b,c"), symbol("a,d"), symbol("")])).unwrap());
    }

    #[test]
    fn silent_output_gives_empty_language() {
        let net = PositiveNetwork::new(neurons(&["a"]), neurons(&["x"]), BTreeSet::new());
        let m = extract_automaton(&net, &neuron("x"), 8).unwrap();
        assert!(m.accepting().is_empty());
    }

    #[test]
    fn budget_and_domain_errors() {
        let net = fig2_network();
        match extract_automaton(&net, &neuron("x"), 33) {
            Err(Error::Budget(msg)) => assert!(msg.contains("34"), "{msg}"),
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(extract_automaton(&net, &neuron("x"), 34).is_ok());
        assert!(matches!(extract_automaton(&net, &neuron("a"), 1 << 10), Err(Error::Validation(_))));
    }
}
