//! Random generators and independent reference evaluators shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use monoreg::automata::{prune_unreachable, Nfa, Transition};
use monoreg::compiler::AutomatonBundle;
use monoreg::fixtures::{neuron, neurons, symbol};
use monoreg::network::{PositiveNetwork, Weight};
use monoreg::symbol::{powerset, InputString, NeuronId, StateId, Symbol};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

pub fn random_inputs(rng: &mut ChaCha8Rng, max: usize) -> BTreeSet<NeuronId> {
    let n = rng.gen_range(1..=max);
    neurons(&NAMES[..n])
}

pub fn random_symbol(rng: &mut ChaCha8Rng, inputs: &BTreeSet<NeuronId>) -> Symbol {
    inputs.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

pub fn random_nonempty_symbol(rng: &mut ChaCha8Rng, inputs: &BTreeSet<NeuronId>) -> Symbol {
    loop {
        let s = random_symbol(rng, inputs);
        if !s.is_empty() {
            return s;
        }
    }
}

fn state(i: usize) -> StateId {
    StateId::new(format!("q{i}")).unwrap()
}

/// Builds an automaton over states `q0..q{n-1}` with start `q0`.
fn assemble(n: usize, inputs: &BTreeSet<NeuronId>, accepting: BTreeSet<usize>, triples: BTreeSet<(usize, Symbol, usize)>) -> Nfa {
    Nfa::new(
        (0..n).map(state),
        inputs.iter().cloned(),
        state(0),
        accepting.into_iter().map(state),
        triples.into_iter().map(|(f, s, t)| Transition::new(state(f), s, state(t))),
    )
    .unwrap()
}

/// Clean automaton with at most 5 states, 3 inputs and 8 transitions.
pub fn random_clean_automaton(rng: &mut ChaCha8Rng) -> Nfa {
    let inputs = random_inputs(rng, 3);
    let n = rng.gen_range(2..=5);
    let count = rng.gen_range(1..=8);
    let mut triples = BTreeSet::new();
    // a path from the start keeps most states reachable
    let mut order: Vec<usize> = (1..n).collect();
    order.shuffle(rng);
    let mut prev = 0;
    for &q in &order {
        if triples.len() >= count {
            break;
        }
        let sym = if prev == 0 { random_nonempty_symbol(rng, &inputs) } else { random_symbol(rng, &inputs) };
        triples.insert((prev, sym, q));
        prev = q;
    }
    // small alphabets may not offer `count` distinct triples
    for _ in 0..64 {
        if triples.len() >= count {
            break;
        }
        let f = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        if f == t {
            continue;
        }
        let sym = if f == 0 { random_nonempty_symbol(rng, &inputs) } else { random_symbol(rng, &inputs) };
        triples.insert((f, sym, t));
    }
    let mut accepting: BTreeSet<usize> = (1..n).filter(|_| rng.gen_bool(0.4)).collect();
    if prev != 0 && rng.gen_bool(0.9) {
        accepting.insert(prev);
    }
    prune_unreachable(&assemble(n, &inputs, accepting, triples))
}

/// Founded automaton containing at least one self-loop; may also have
/// `∅`-transitions from the start into a dead state.
pub fn random_founded_with_self_loops(rng: &mut ChaCha8Rng) -> Nfa {
    let inputs = random_inputs(rng, 3);
    let n = rng.gen_range(2..=5);
    let count = rng.gen_range(2..=8);
    let mut triples = BTreeSet::new();
    let loops = rng.gen_range(1..=3);
    for _ in 0..loops {
        let q = rng.gen_range(0..n);
        let sym = if q == 0 { random_nonempty_symbol(rng, &inputs) } else { random_symbol(rng, &inputs) };
        triples.insert((q, sym, q));
    }
    for _ in 0..64 {
        if triples.len() >= count + loops {
            break;
        }
        let f = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let sym = if f == 0 { random_nonempty_symbol(rng, &inputs) } else { random_symbol(rng, &inputs) };
        triples.insert((f, sym, t));
    }
    let mut accepting: BTreeSet<usize> = (1..n).filter(|_| rng.gen_bool(0.6)).collect();
    let mut n = n;
    if rng.gen_bool(0.3) {
        // dead successor of the start on ∅
        triples.insert((0, Symbol::empty(), n));
        accepting.remove(&n);
        n += 1;
    }
    assemble(n, &inputs, accepting, triples)
}

/// Any founded automaton (self-loops and `∅` symbols allowed away from the
/// start).
pub fn random_founded(rng: &mut ChaCha8Rng, max_inputs: usize) -> Nfa {
    let inputs = random_inputs(rng, max_inputs);
    let n = rng.gen_range(2..=5);
    let count = rng.gen_range(1..=9);
    let mut triples = BTreeSet::new();
    for _ in 0..count {
        let f = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let sym = if f == 0 { random_nonempty_symbol(rng, &inputs) } else { random_symbol(rng, &inputs) };
        triples.insert((f, sym, t));
    }
    let accepting: BTreeSet<usize> = (1..n).filter(|_| rng.gen_bool(0.5)).collect();
    assemble(n, &inputs, accepting, triples)
}

/// Random positive network with `|O ∪ A| ≤ 6` and `|I| ≤ 3`.
pub fn random_network(rng: &mut ChaCha8Rng) -> PositiveNetwork {
    let inputs = random_inputs(rng, 3);
    let outs = rng.gen_range(1..=2);
    let aux = rng.gen_range(0..=6 - outs);
    let outputs: BTreeSet<NeuronId> = (0..outs).map(|i| neuron(&format!("x{i}"))).collect();
    let auxiliary: BTreeSet<NeuronId> = (0..aux).map(|i| neuron(&format!("h{i}"))).collect();
    let mut net = PositiveNetwork::new(inputs.clone(), outputs.clone(), auxiliary.clone());
    let weights = [(1, 3), (1, 2), (2, 3), (3, 4), (1, 1), (1, 1)];
    let sources: Vec<NeuronId> = inputs.iter().chain(&auxiliary).cloned().collect();
    let targets: Vec<NeuronId> = auxiliary.iter().chain(&outputs).cloned().collect();
    for from in &sources {
        for to in &targets {
            if from != to && rng.gen_bool(0.55) {
                let (p, q) = *weights.choose(rng).unwrap();
                net.set_weight(from.clone(), to.clone(), Weight::new(p, q).unwrap());
            }
        }
    }
    net
}

/// Nonempty string of length at most `max_len` whose first symbol is nonempty.
pub fn random_founded_string(rng: &mut ChaCha8Rng, inputs: &BTreeSet<NeuronId>, max_len: usize) -> InputString {
    let len = rng.gen_range(1..=max_len);
    let mut s = InputString::empty();
    s.push(random_nonempty_symbol(rng, inputs));
    for _ in 1..len {
        s.push(random_symbol(rng, inputs));
    }
    s
}

/// Automaton accepting exactly `beta`.
pub fn string_automaton(inputs: &BTreeSet<NeuronId>, beta: &InputString) -> Nfa {
    let n = beta.len();
    let triples = beta.iter().enumerate().map(|(i, s)| (i, s.clone(), i + 1)).collect();
    assemble(n + 1, inputs, BTreeSet::from([n]), triples)
}

pub fn single_bundle(inputs: &BTreeSet<NeuronId>, nfa: Nfa) -> AutomatonBundle {
    AutomatonBundle::new(inputs.clone(), BTreeMap::from([(neuron("x"), nfa)])).unwrap()
}

/// Plain set-based parallel run of `nfa` over pool indices, used as a
/// reference independent of the library's acceptance routine.
pub struct NaiveRunner<'a> {
    nfa: &'a Nfa,
    pool: Vec<Symbol>,
}

impl<'a> NaiveRunner<'a> {
    pub fn new(nfa: &'a Nfa) -> Self {
        NaiveRunner { nfa, pool: powerset(nfa.inputs()) }
    }

    pub fn pool(&self) -> &[Symbol] {
        &self.pool
    }

    fn step(&self, current: &BTreeSet<StateId>, sym: &Symbol) -> BTreeSet<StateId> {
        self.nfa
            .transitions()
            .iter()
            .filter(|t| current.contains(&t.from) && &t.symbol == sym)
            .map(|t| t.to.clone())
            .collect()
    }

    /// The accepted strings of length at most `max_len`, as index vectors.
    pub fn language(&self, max_len: usize) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        let mut path = Vec::new();
        let start = BTreeSet::from([self.nfa.start().clone()]);
        self.walk(&start, &mut path, max_len, &mut out);
        out
    }

    fn walk(&self, current: &BTreeSet<StateId>, path: &mut Vec<usize>, left: usize, out: &mut BTreeSet<Vec<usize>>) {
        if current.iter().any(|q| self.nfa.is_accepting(q)) {
            out.insert(path.clone());
        }
        if left == 0 || current.is_empty() {
            return;
        }
        for (i, sym) in self.pool.iter().enumerate() {
            let next = self.step(current, sym);
            path.push(i);
            self.walk(&next, path, left - 1, out);
            path.pop();
        }
    }
}

/// Calls `f` on every string of length `1..=max_len` over `pool`.
pub fn for_each_string(pool: &[Symbol], max_len: usize, mut f: impl FnMut(&InputString)) {
    for len in 1..=max_len {
        let mut digits = vec![0usize; len];
        loop {
            let s: InputString = digits.iter().map(|&d| pool[d].clone()).collect();
            f(&s);
            let mut i = len;
            let mut carry = true;
            while carry && i > 0 {
                i -= 1;
                digits[i] += 1;
                carry = digits[i] == pool.len();
                if carry {
                    digits[i] = 0;
                }
            }
            if carry {
                break;
            }
        }
    }
}

/// `x` with weights `w` from `a, b, c, d`, for the behavior
/// `{⟨{a,b}⟩, ⟨{c,d}⟩}`.
pub fn wrong_symbol_candidate(w: [Weight; 4]) -> PositiveNetwork {
    let mut net = PositiveNetwork::new(neurons(&NAMES), neurons(&["x"]), BTreeSet::new());
    for (u, wu) in NAMES.iter().zip(w) {
        net.set_weight(neuron(u), neuron("x"), wu);
    }
    net
}

pub fn wrong_symbol_automaton() -> Nfa {
    monoreg::fixtures::nfa(&["s", "q1", "q2"], &NAMES, "s", &["q1", "q2"], &[("s", "a,b", "q1"), ("s", "c,d", "q2")])
}

/// The offending symbol the impossibility argument predicts for weights
/// `w` on `a, b, c, d` that satisfy both threshold sums: a cross pair
/// `{y, z}` whose weights reach 1, or else everything but some cross pair.
pub fn wrong_symbol_case(w: [Weight; 4]) -> Symbol {
    let ratio = |i: usize| w[i].ratio();
    let one = Weight::ONE.ratio();
    for (y, ny) in NAMES.iter().enumerate().take(2) {
        for (z, nz) in NAMES.iter().enumerate().skip(2) {
            if ratio(y) + ratio(z) >= one {
                return symbol(&format!("{ny},{nz}"));
            }
        }
    }
    symbol(&format!("{},{}", NAMES[1], NAMES[3]))
}

/// Auxiliaries `y1` (reading `a`) and `y3` (reading `c`) feed `x`, which also
/// reads `b` and `d`; weights are `[W(y1,x), W(b,x), W(y3,x), W(d,x)]`.
pub fn two_branch_candidate(w: [Weight; 4]) -> PositiveNetwork {
    let mut net = PositiveNetwork::new(neurons(&NAMES), neurons(&["x"]), neurons(&["y1", "y3"]));
    net.set_weight(neuron("a"), neuron("y1"), Weight::ONE);
    net.set_weight(neuron("c"), neuron("y3"), Weight::ONE);
    for (u, wu) in ["y1", "b", "y3", "d"].iter().zip(w) {
        net.set_weight(neuron(u), neuron("x"), wu);
    }
    net
}

pub fn two_branch_automaton() -> Nfa {
    monoreg::fixtures::nfa(
        &["s", "p1", "p2", "r1", "r2"],
        &NAMES,
        "s",
        &["p2", "r2"],
        &[("s", "a", "p1"), ("p1", "b", "p2"), ("s", "c", "r1"), ("r1", "d", "r2")],
    )
}

/// Grid points `(u, v)` with `u + v ≥ 1`.
pub fn threshold_pairs(grid: &[Weight]) -> Vec<(Weight, Weight)> {
    let one = Weight::ONE.ratio();
    let mut out = Vec::new();
    for &u in grid {
        for &v in grid {
            if u.ratio() + v.ratio() >= one {
                out.push((u, v));
            }
        }
    }
    out
}
