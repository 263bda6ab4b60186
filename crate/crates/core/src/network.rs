//! Positive neural networks and their discrete-time semantics.
//!
//! A network has input, output, and auxiliary neurons and a weight in
//! `[0, 1]` on each allowed connection. At every step a non-input neuron
//! fires when the weights from its active presynaptic neurons sum to at
//! least 1. All arithmetic is exact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{InputIndex, InputString, NeuronId, Symbol};

/// Nonnegative exact rational connection weight, kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Ratio<u64>);

impl Weight {
    pub const ZERO: Weight = Weight(Ratio::new_raw(0, 1));
    pub const ONE: Weight = Weight(Ratio::new_raw(1, 1));

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InputDomain(format!("weight {num}/0 has a zero denominator")));
        }
        Ok(Weight(Ratio::new(num, den)))
    }

    pub fn from_ratio(r: Ratio<u64>) -> Self {
        Weight(r)
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<u64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn exceeds_one(&self) -> bool {
        self.numer() > self.denom()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Input,
    Output,
    Auxiliary,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Input => "input",
            Role::Output => "output",
            Role::Auxiliary => "auxiliary",
        })
    }
}

/// One structural problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SharedNeuron { neuron: NeuronId, first: Role, second: Role },
    UnknownNeuron { neuron: NeuronId },
    EdgeOutOfOutput { from: NeuronId, to: NeuronId },
    EdgeIntoInput { from: NeuronId, to: NeuronId },
    SelfConnection { neuron: NeuronId },
    WeightAboveOne { from: NeuronId, to: NeuronId, weight: Weight },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SharedNeuron { neuron, first, second } => {
                write!(f, "neuron {neuron} is declared both {first} and {second}")
            }
            Violation::UnknownNeuron { neuron } => write!(f, "weight mentions undeclared neuron {neuron}"),
            Violation::EdgeOutOfOutput { from, to } => write!(f, "edge out of output neuron ({from}, {to})"),
            Violation::EdgeIntoInput { from, to } => write!(f, "edge into input neuron ({from}, {to})"),
            Violation::SelfConnection { neuron } => write!(f, "self-connection on {neuron}"),
            Violation::WeightAboveOne { from, to, weight } => {
                write!(f, "weight above 1 on ({from}, {to}): {weight}")
            }
        }
    }
}

/// A positive network `(I, O, A, W)`. Missing weights are zero.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "NetworkDoc", into = "NetworkDoc")]
pub struct PositiveNetwork {
    inputs: BTreeSet<NeuronId>,
    outputs: BTreeSet<NeuronId>,
    auxiliary: BTreeSet<NeuronId>,
    weights: BTreeMap<(NeuronId, NeuronId), Weight>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightEntry {
    den: u64,
    from: NeuronId,
    num: u64,
    to: NeuronId,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    auxiliary: Vec<NeuronId>,
    inputs: Vec<NeuronId>,
    outputs: Vec<NeuronId>,
    weights: Vec<WeightEntry>,
}

fn unique(what: &str, items: Vec<NeuronId>) -> Result<BTreeSet<NeuronId>> {
    let mut set = BTreeSet::new();
    for item in items {
        if !set.insert(item.clone()) {
            return Err(Error::Validation(format!("duplicate {what} neuron {item}")));
        }
    }
    Ok(set)
}

impl TryFrom<NetworkDoc> for PositiveNetwork {
    type Error = Error;
    fn try_from(doc: NetworkDoc) -> Result<Self> {
        let mut net = PositiveNetwork::new(
            unique("input", doc.inputs)?,
            unique("output", doc.outputs)?,
            unique("auxiliary", doc.auxiliary)?,
        );
        for e in doc.weights {
            let key = (e.from, e.to);
            if net.weights.contains_key(&key) {
                return Err(Error::Validation(format!("duplicate weight on ({}, {})", key.0, key.1)));
            }
            net.set_weight(key.0, key.1, Weight::new(e.num, e.den)?);
        }
        Ok(net)
    }
}

impl From<PositiveNetwork> for NetworkDoc {
    fn from(net: PositiveNetwork) -> Self {
        NetworkDoc {
            auxiliary: net.auxiliary.into_iter().collect(),
            inputs: net.inputs.into_iter().collect(),
            outputs: net.outputs.into_iter().collect(),
            weights: net
                .weights
                .into_iter()
                .map(|((from, to), w)| WeightEntry { den: w.denom(), from, num: w.numer(), to })
                .collect(),
        }
    }
}

impl PositiveNetwork {
    pub fn new(inputs: BTreeSet<NeuronId>, outputs: BTreeSet<NeuronId>, auxiliary: BTreeSet<NeuronId>) -> Self {
        PositiveNetwork { inputs, outputs, auxiliary, weights: BTreeMap::new() }
    }

    pub fn inputs(&self) -> &BTreeSet<NeuronId> {
        &self.inputs
    }

    pub fn outputs(&self) -> &BTreeSet<NeuronId> {
        &self.outputs
    }

    pub fn auxiliary(&self) -> &BTreeSet<NeuronId> {
        &self.auxiliary
    }

    pub fn add_auxiliary(&mut self, id: NeuronId) {
        self.auxiliary.insert(id);
    }

    /// Sets `W(from, to)`; a zero weight removes the connection.
    pub fn set_weight(&mut self, from: NeuronId, to: NeuronId, w: Weight) {
        if w.is_zero() {
            self.weights.remove(&(from, to));
        } else {
            self.weights.insert((from, to), w);
        }
    }

    pub fn weight(&self, from: &NeuronId, to: &NeuronId) -> Weight {
        self.weights.get(&(from.clone(), to.clone())).copied().unwrap_or(Weight::ZERO)
    }

    /// Nonzero weights in canonical `(from, to)` order.
    pub fn weights(&self) -> impl Iterator<Item = (&NeuronId, &NeuronId, Weight)> {
        self.weights.iter().map(|((f, t), w)| (f, t, *w))
    }

    /// Nonzero presynaptic weights of `y`.
    pub fn presynaptic<'a>(&'a self, y: &'a NeuronId) -> impl Iterator<Item = (&'a NeuronId, Weight)> + 'a {
        self.weights.iter().filter(move |((_, t), _)| t == y).map(|((f, _), w)| (f, *w))
    }

    pub fn role(&self, id: &NeuronId) -> Option<Role> {
        if self.inputs.contains(id) {
            Some(Role::Input)
        } else if self.outputs.contains(id) {
            Some(Role::Output)
        } else if self.auxiliary.contains(id) {
            Some(Role::Auxiliary)
        } else {
            None
        }
    }

    /// Disjoint union; fails on any shared output or auxiliary neuron.
    /// Input neurons are shared.
    pub fn unite(&mut self, other: PositiveNetwork) -> Result<()> {
        for id in other.outputs.iter().chain(other.auxiliary.iter()) {
            if self.role(id).is_some() {
                return Err(Error::Validation(format!("identifier clash on {id} while uniting networks")));
            }
        }
        for id in other.inputs.iter() {
            if matches!(self.role(id), Some(Role::Output | Role::Auxiliary)) {
                return Err(Error::Validation(format!("identifier clash on {id} while uniting networks")));
            }
        }
        self.inputs.extend(other.inputs);
        self.outputs.extend(other.outputs);
        self.auxiliary.extend(other.auxiliary);
        self.weights.extend(other.weights);
        Ok(())
    }

    pub fn simulator(&self) -> Result<Simulator> {
        Simulator::new(self)
    }
}

/// Structural invariants of a network; empty iff it is well formed.
pub fn validate(net: &PositiveNetwork) -> Vec<Violation> {
    let mut out = Vec::new();
    let sets = [(Role::Input, &net.inputs), (Role::Output, &net.outputs), (Role::Auxiliary, &net.auxiliary)];
    for (i, (r1, s1)) in sets.iter().enumerate() {
        for (r2, s2) in &sets[i + 1..] {
            for id in s1.intersection(s2) {
                out.push(Violation::SharedNeuron { neuron: id.clone(), first: *r1, second: *r2 });
            }
        }
    }
    for ((from, to), w) in &net.weights {
        let (rf, rt) = (net.role(from), net.role(to));
        for (id, r) in [(from, rf), (to, rt)] {
            if r.is_none() {
                out.push(Violation::UnknownNeuron { neuron: id.clone() });
            }
        }
        if from == to {
            out.push(Violation::SelfConnection { neuron: from.clone() });
        }
        if rf == Some(Role::Output) {
            out.push(Violation::EdgeOutOfOutput { from: from.clone(), to: to.clone() });
        }
        if rt == Some(Role::Input) {
            out.push(Violation::EdgeIntoInput { from: from.clone(), to: to.clone() });
        }
        if w.exceeds_one() {
            out.push(Violation::WeightAboveOne { from: from.clone(), to: to.clone(), weight: *w });
        }
    }
    out
}

/// Presynaptic weights of one non-input neuron, rescaled to integers over
/// their common denominator so that the threshold test is integer-only.
#[derive(Clone, Debug)]
enum Accumulator {
    Small { inputs: Vec<(usize, u128)>, active: Vec<(usize, u128)>, scale: u128 },
    Big { inputs: Vec<(usize, BigUint)>, active: Vec<(usize, BigUint)>, scale: BigUint },
}

impl Accumulator {
    fn build(inputs: Vec<(usize, Weight)>, active: Vec<(usize, Weight)>) -> Self {
        Self::build_small(&inputs, &active).unwrap_or_else(|| Self::build_big(inputs, active))
    }

    /// Pure `u128` path; `None` if any intermediate value overflows.
    fn build_small(inputs: &[(usize, Weight)], active: &[(usize, Weight)]) -> Option<Self> {
        let mut scale = 1u128;
        for (_, w) in inputs.iter().chain(active) {
            let d = u128::from(w.denom());
            scale = (scale / scale.gcd(&d)).checked_mul(d)?;
        }
        let scaled = |v: &[(usize, Weight)]| -> Option<Vec<(usize, u128)>> {
            v.iter().map(|(i, w)| Some((*i, u128::from(w.numer()).checked_mul(scale / u128::from(w.denom()))?))).collect()
        };
        let (inputs, active) = (scaled(inputs)?, scaled(active)?);
        inputs.iter().chain(&active).try_fold(0u128, |acc, (_, n)| acc.checked_add(*n))?;
        Some(Accumulator::Small { inputs, active, scale })
    }

    fn build_big(inputs: Vec<(usize, Weight)>, active: Vec<(usize, Weight)>) -> Self {
        let scale = inputs
            .iter()
            .chain(active.iter())
            .fold(BigUint::one(), |acc, (_, w)| acc.lcm(&BigUint::from(w.denom())));
        let scaled = |(i, w): &(usize, Weight)| (*i, BigUint::from(w.numer()) * (&scale / BigUint::from(w.denom())));
        let inputs: Vec<(usize, BigUint)> = inputs.iter().map(scaled).collect();
        let active: Vec<(usize, BigUint)> = active.iter().map(scaled).collect();
        Accumulator::Big { inputs, active, scale }
    }

    fn fires(&self, source: &FixedBitSet, symbol: &FixedBitSet) -> bool {
        match self {
            Accumulator::Small { inputs, active, scale } => {
                let mut sum = 0u128;
                for (i, n) in inputs {
                    if symbol.contains(*i) {
                        sum += n;
                        if sum >= *scale {
                            return true;
                        }
                    }
                }
                for (i, n) in active {
                    if source.contains(*i) {
                        sum += n;
                        if sum >= *scale {
                            return true;
                        }
                    }
                }
                false
            }
            Accumulator::Big { inputs, active, scale } => {
                let from_inputs = inputs.iter().filter(|(i, _)| symbol.contains(*i));
                let from_active = active.iter().filter(|(i, _)| source.contains(*i));
                let sum: BigUint = from_inputs.chain(from_active).map(|(_, n)| n).sum();
                sum >= *scale
            }
        }
    }
}

/// Precompiled evaluator for a validated network.
///
/// Activation sets are bit sets over `O ∪ A` with the outputs first; input
/// symbols are bit sets over `I` in canonical order.
#[derive(Clone, Debug)]
pub struct Simulator {
    input_index: InputIndex,
    active_ids: Vec<NeuronId>,
    active_pos: BTreeMap<NeuronId, usize>,
    output_count: usize,
    targets: Vec<Accumulator>,
}

impl Simulator {
    pub fn new(net: &PositiveNetwork) -> Result<Self> {
        let violations = validate(net);
        if !violations.is_empty() {
            let msgs: Vec<String> = violations.iter().map(ToString::to_string).collect();
            return Err(Error::Validation(msgs.join("; ")));
        }
        let input_index = InputIndex::new(&net.inputs);
        let active_ids: Vec<NeuronId> = net.outputs.iter().chain(net.auxiliary.iter()).cloned().collect();
        let active_pos: BTreeMap<NeuronId, usize> =
            active_ids.iter().cloned().enumerate().map(|(i, id)| (id, i)).collect();
        let mut pre_inputs: Vec<Vec<(usize, Weight)>> = vec![Vec::new(); active_ids.len()];
        let mut pre_active: Vec<Vec<(usize, Weight)>> = vec![Vec::new(); active_ids.len()];
        for ((from, to), w) in &net.weights {
            let t = active_pos[to];
            match input_index.position(from) {
                Some(i) => pre_inputs[t].push((i, *w)),
                None => pre_active[t].push((active_pos[from], *w)),
            }
        }
        let targets = pre_inputs.into_iter().zip(pre_active).map(|(i, a)| Accumulator::build(i, a)).collect();
        Ok(Simulator { input_index, active_ids, active_pos, output_count: net.outputs.len(), targets })
    }

    pub fn input_index(&self) -> &InputIndex {
        &self.input_index
    }

    pub fn initial(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.active_ids.len())
    }

    /// Target set of the transition reading `symbol` from `source`.
    pub fn step_bits(&self, source: &FixedBitSet, symbol: &FixedBitSet) -> FixedBitSet {
        let mut next = self.initial();
        self.step_into(source, symbol, &mut next);
        next
    }

    /// [`Simulator::step_bits`] writing into an existing set.
    pub fn step_into(&self, source: &FixedBitSet, symbol: &FixedBitSet, next: &mut FixedBitSet) {
        next.clear();
        next.grow(self.active_ids.len());
        for (y, acc) in self.targets.iter().enumerate() {
            if acc.fires(source, symbol) {
                next.insert(y);
            }
        }
    }

    /// Last activation set after reading all of `symbols` from `∅`.
    pub fn final_bits(&self, symbols: &[FixedBitSet]) -> FixedBitSet {
        symbols.iter().fold(self.initial(), |s, sym| self.step_bits(&s, sym))
    }

    /// Output neurons active in `state`, as output-bit positions.
    pub fn output_mask(&self, state: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.output_count);
        for i in state.ones().take_while(|i| *i < self.output_count) {
            out.insert(i);
        }
        out
    }

    pub fn output_ids(&self) -> &[NeuronId] {
        &self.active_ids[..self.output_count]
    }

    pub fn names(&self, state: &FixedBitSet) -> BTreeSet<NeuronId> {
        state.ones().map(|i| self.active_ids[i].clone()).collect()
    }

    pub fn output_names(&self, mask: &FixedBitSet) -> BTreeSet<NeuronId> {
        mask.ones().map(|i| self.active_ids[i].clone()).collect()
    }

    pub fn bits(&self, set: &BTreeSet<NeuronId>) -> Result<FixedBitSet> {
        let mut bits = self.initial();
        for id in set {
            let i = self
                .active_pos
                .get(id)
                .ok_or_else(|| Error::InputDomain(format!("{id} is not an output or auxiliary neuron")))?;
            bits.insert(*i);
        }
        Ok(bits)
    }

    /// Activation bit positions of `O ∪ A`, outputs first.
    pub fn active_ids(&self) -> &[NeuronId] {
        &self.active_ids
    }
}

/// The run of a network on an input string: `|input| + 1` activation sets,
/// starting from `∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkRun {
    pub input: InputString,
    pub activations: Vec<BTreeSet<NeuronId>>,
}

impl NetworkRun {
    pub fn last(&self) -> &BTreeSet<NeuronId> {
        self.activations.last().expect("a run has at least one activation set")
    }
}

pub fn step(net: &PositiveNetwork, source: &BTreeSet<NeuronId>, symbol: &Symbol) -> Result<BTreeSet<NeuronId>> {
    let sim = net.simulator()?;
    let src = sim.bits(source)?;
    let sym = sim.input_index().mask(symbol)?;
    Ok(sim.names(&sim.step_bits(&src, &sym)))
}

pub fn run(net: &PositiveNetwork, alpha: &InputString) -> Result<NetworkRun> {
    let sim = net.simulator()?;
    let masks = sim.input_index().masks(alpha)?;
    let mut state = sim.initial();
    let mut activations = vec![BTreeSet::new()];
    for m in &masks {
        state = sim.step_bits(&state, m);
        activations.push(sim.names(&state));
    }
    Ok(NetworkRun { input: alpha.clone(), activations })
}

/// `N(α)`: outputs active after the last transition. `α` must be nonempty.
pub fn output(net: &PositiveNetwork, alpha: &InputString) -> Result<BTreeSet<NeuronId>> {
    if alpha.is_empty() {
        return Err(Error::InputDomain("network output is only defined on nonempty strings".into()));
    }
    let r = run(net, alpha)?;
    Ok(r.last().intersection(net.outputs()).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig2_network, neuron, neurons, sigma, string, symbol};

    fn aux(name: &str) -> NeuronId {
        neuron(name)
    }

    #[test]
    fn empty_step_is_empty() {
        let net = fig2_network();
        assert!(step(&net, &BTreeSet::new(), &Symbol::empty()).unwrap().is_empty());
    }

    #[test]
    fn trigger_fires_exactly_at_threshold() {
        let net = fig2_network();
        let s = step(&net, &BTreeSet::new(), &symbol("a,b,c")).unwrap();
        assert_eq!(s, BTreeSet::from([aux("(q1|a,b,c)")]));
        assert!(step(&net, &BTreeSet::new(), &symbol("a,b")).unwrap().is_empty());
    }

    #[test]
    fn fig2_runs() {
        let net = fig2_network();
        let r = run(&net, &string(&[sigma(1), sigma(3)])).unwrap();
        assert_eq!(
            r.activations,
            vec![BTreeSet::new(), BTreeSet::from([aux("(q1|a,b,c)")]), BTreeSet::from([aux("(q3|a,d)")])]
        );
        let r = run(&net, &string(&[sigma(1), sigma(2), sigma(2)])).unwrap();
        assert_eq!(r.last(), &BTreeSet::from([aux("(q1|b,c)")]));
        let r = run(&net, &string(&[Symbol::empty(), Symbol::empty(), Symbol::empty()])).unwrap();
        assert!(r.activations.iter().all(BTreeSet::is_empty));
        assert_eq!(r.activations.len(), 4);
    }

    #[test]
    fn fig2_outputs() {
        let net = fig2_network();
        let x = BTreeSet::from([neuron("x")]);
        assert_eq!(output(&net, &string(&[sigma(1), sigma(3), Symbol::empty()])).unwrap(), x);
        assert!(output(&net, &string(&[sigma(1)])).unwrap().is_empty());
        assert!(output(&net, &string(&[sigma(2), sigma(3), Symbol::empty()])).unwrap().is_empty());
        assert!(matches!(output(&net, &InputString::empty()), Err(Error::InputDomain(_))));
    }

    #[test]
    fn undeclared_neurons_are_domain_errors() {
        let net = fig2_network();
        assert!(matches!(step(&net, &BTreeSet::new(), &symbol("z")), Err(Error::InputDomain(_))));
        assert!(matches!(step(&net, &neurons(&["a"]), &Symbol::empty()), Err(Error::InputDomain(_))));
    }

    #[test]
    fn validation_reports_each_violation() {
        let mut net = PositiveNetwork::new(neurons(&["a"]), neurons(&["x"]), neurons(&["y"]));
        net.set_weight(neuron("x"), neuron("y"), Weight::new(1, 2).unwrap());
        net.set_weight(neuron("a"), neuron("y"), Weight::new(3, 2).unwrap());
        net.set_weight(neuron("y"), neuron("y"), Weight::new(1, 2).unwrap());
        net.set_weight(neuron("y"), neuron("a"), Weight::new(1, 2).unwrap());
        let v: Vec<String> = validate(&net).iter().map(ToString::to_string).collect();
        assert!(v.contains(&"edge out of output neuron (x, y)".to_string()), "{v:?}");
        assert!(v.iter().any(|m| m.starts_with("weight above 1")), "{v:?}");
        assert!(v.contains(&"self-connection on y".to_string()));
        assert!(v.contains(&"edge into input neuron (y, a)".to_string()));
        assert!(net.simulator().is_err());
        assert!(validate(&fig2_network()).is_empty());
    }

    #[test]
    fn overlapping_sets_are_reported() {
        let net = PositiveNetwork::new(neurons(&["a"]), neurons(&["a"]), BTreeSet::new());
        assert!(matches!(validate(&net)[0], Violation::SharedNeuron { .. }));
    }

    #[test]
    fn zero_weights_are_not_stored() {
        let mut net = PositiveNetwork::new(neurons(&["a"]), neurons(&["x"]), BTreeSet::new());
        net.set_weight(neuron("a"), neuron("x"), Weight::ONE);
        net.set_weight(neuron("a"), neuron("x"), Weight::ZERO);
        assert_eq!(net.weights().count(), 0);
        let json = serde_json::to_string(&net).unwrap();
        assert!(json.contains("\"weights\":[]"));
    }

    #[test]
    fn json_weights_are_normalized_and_checked() {
        let doc = r#"{"inputs":["a"],"outputs":["x"],"auxiliary":[],"weights":[{"from":"a","to":"x","num":2,"den":4}]}"#;
        let net: PositiveNetwork = serde_json::from_str(doc).unwrap();
        assert_eq!(net.weight(&neuron("a"), &neuron("x")), Weight::new(1, 2).unwrap());
        let bad = doc.replace("\"den\":4", "\"den\":0");
        assert!(serde_json::from_str::<PositiveNetwork>(&bad).is_err());
    }

    #[test]
    fn big_denominators_stay_exact() {
        // Three primes near 2^64, so their lcm overflows u128.
        let p = [18446744073709551557u64, 18446744073709551533, 18446744073709551521];
        let mut net = PositiveNetwork::new(neurons(&["a", "b", "c", "d"]), neurons(&["x"]), BTreeSet::new());
        net.set_weight(neuron("a"), neuron("x"), Weight::new(p[2] - 1, p[2]).unwrap());
        net.set_weight(neuron("b"), neuron("x"), Weight::new(1, p[2]).unwrap());
        net.set_weight(neuron("c"), neuron("x"), Weight::new(1, p[1]).unwrap());
        net.set_weight(neuron("d"), neuron("x"), Weight::new(1, p[0]).unwrap());
        let sim = net.simulator().unwrap();
        assert!(matches!(sim.targets[0], Accumulator::Big { .. }));
        let x = BTreeSet::from([neuron("x")]);
        assert_eq!(step(&net, &BTreeSet::new(), &symbol("a,b")).unwrap(), x);
        // 1 - 1/p2 + 1/p1 falls short of 1; adding 1/p0 crosses it.
        assert!(step(&net, &BTreeSet::new(), &symbol("a,c")).unwrap().is_empty());
        assert_eq!(step(&net, &BTreeSet::new(), &symbol("a,c,d")).unwrap(), x);
    }
}
