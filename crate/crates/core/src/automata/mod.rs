//! Finite automata over powerset alphabets.
//!
//! Transitions are stored as explicit `(from, symbol, to)` triples; the
//! transition function on a pair `(q, σ)` is the set of targets of the
//! triples that match it exactly, which may be empty.

pub(crate) mod clean;

pub use clean::{
    clean, founded_witness, is_clean, is_converging, is_founded, prune_unreachable, remove_self_loops,
    restrict_founded_start, CleanReport, Convergence,
};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symbol::{InputIndex, InputString, NeuronId, StateId, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Transition {
    pub from: StateId,
    pub symbol: Symbol,
    pub to: StateId,
}

impl Transition {
    pub fn new(from: StateId, symbol: Symbol, to: StateId) -> Self {
        Transition { from, symbol, to }
    }

    pub fn is_self_loop(&self) -> bool {
        self.from == self.to
    }
}

/// Nondeterministic finite automaton over the powerset of `inputs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NfaDoc", into = "NfaDoc")]
pub struct Nfa {
    states: BTreeSet<StateId>,
    inputs: BTreeSet<NeuronId>,
    start: StateId,
    accepting: BTreeSet<StateId>,
    transitions: BTreeSet<Transition>,
}

/// Wire form of an automaton; keys are emitted in sorted order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NfaDoc {
    accepting: Vec<StateId>,
    inputs: Vec<NeuronId>,
    start: StateId,
    states: Vec<StateId>,
    transitions: Vec<Transition>,
}

fn unique<T: Ord + Clone + std::fmt::Display>(what: &str, items: Vec<T>) -> Result<BTreeSet<T>> {
    let mut set = BTreeSet::new();
    for item in items {
        if !set.insert(item.clone()) {
            return Err(Error::Validation(format!("duplicate {what} {item}")));
        }
    }
    Ok(set)
}

impl TryFrom<NfaDoc> for Nfa {
    type Error = Error;
    fn try_from(doc: NfaDoc) -> Result<Self> {
        Nfa::new(
            unique("state", doc.states)?,
            unique("input neuron", doc.inputs)?,
            doc.start,
            doc.accepting,
            doc.transitions,
        )
    }
}

impl From<Nfa> for NfaDoc {
    fn from(nfa: Nfa) -> Self {
        NfaDoc {
            accepting: nfa.accepting.into_iter().collect(),
            inputs: nfa.inputs.into_iter().collect(),
            start: nfa.start,
            states: nfa.states.into_iter().collect(),
            transitions: nfa.transitions.into_iter().collect(),
        }
    }
}

impl Nfa {
    /// Builds an automaton, checking that the start, accepting states, and
    /// transition endpoints are declared and that every transition symbol
    /// only mentions declared inputs.
    pub fn new(
        states: impl IntoIterator<Item = StateId>,
        inputs: impl IntoIterator<Item = NeuronId>,
        start: StateId,
        accepting: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self> {
        let states: BTreeSet<StateId> = states.into_iter().collect();
        let inputs: BTreeSet<NeuronId> = inputs.into_iter().collect();
        let accepting: BTreeSet<StateId> = accepting.into_iter().collect();
        let transitions: BTreeSet<Transition> = transitions.into_iter().collect();
        if !states.contains(&start) {
            return Err(Error::Validation(format!("start state {start} is not a declared state")));
        }
        if let Some(q) = accepting.iter().find(|q| !states.contains(*q)) {
            return Err(Error::Validation(format!("accepting state {q} is not a declared state")));
        }
        for t in &transitions {
            for q in [&t.from, &t.to] {
                if !states.contains(q) {
                    return Err(Error::Validation(format!(
                        "transition ({}, {}, {}) uses undeclared state {q}",
                        t.from, t.symbol, t.to
                    )));
                }
            }
            if let Some(u) = t.symbol.iter().find(|u| !inputs.contains(*u)) {
                return Err(Error::Validation(format!(
                    "transition ({}, {}, {}) reads undeclared input neuron {u}",
                    t.from, t.symbol, t.to
                )));
            }
        }
        Ok(Nfa { states, inputs, start, accepting, transitions })
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn inputs(&self) -> &BTreeSet<NeuronId> {
        &self.inputs
    }

    pub fn start(&self) -> &StateId {
        &self.start
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn is_accepting(&self, q: &StateId) -> bool {
        self.accepting.contains(q)
    }

    /// δ(q, σ): targets of the triples `(q, σ, ·)`.
    pub fn successors<'a>(&'a self, q: &'a StateId, sym: &'a Symbol) -> impl Iterator<Item = &'a StateId> + 'a {
        self.transitions.iter().filter(move |t| &t.from == q && &t.symbol == sym).map(|t| &t.to)
    }

    /// Distinct symbols read by some transition, in canonical order.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.transitions.iter().map(|t| t.symbol.clone()).collect()
    }

    /// Outgoing adjacency, ignoring symbols.
    pub(crate) fn adjacency(&self) -> BTreeMap<&StateId, BTreeSet<&StateId>> {
        let mut adj: BTreeMap<&StateId, BTreeSet<&StateId>> = BTreeMap::new();
        for t in &self.transitions {
            adj.entry(&t.from).or_default().insert(&t.to);
        }
        adj
    }

    /// States reachable from `from` (inclusive) by any sequence of transitions.
    pub(crate) fn reachable_from<'a>(&'a self, from: impl IntoIterator<Item = &'a StateId>) -> BTreeSet<&'a StateId> {
        let adj = self.adjacency();
        let mut seen: BTreeSet<&StateId> = BTreeSet::new();
        let mut queue: VecDeque<&StateId> = VecDeque::new();
        for q in from {
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            if let Some(next) = adj.get(q) {
                for r in next {
                    if seen.insert(r) {
                        queue.push_back(r);
                    }
                }
            }
        }
        seen
    }

    pub(crate) fn with_transitions(&self, transitions: BTreeSet<Transition>) -> Nfa {
        Nfa { transitions, ..self.clone() }
    }

    pub(crate) fn from_parts_unchecked(
        states: BTreeSet<StateId>,
        inputs: BTreeSet<NeuronId>,
        start: StateId,
        accepting: BTreeSet<StateId>,
        transitions: BTreeSet<Transition>,
    ) -> Nfa {
        debug_assert!(states.contains(&start));
        Nfa { states, inputs, start, accepting, transitions }
    }
}

/// Parallel run: `P₁ = {start}` and each `Pᵢ` is the image of `Pᵢ₋₁` under
/// the symbol read at step `i − 1`.
pub fn run_parallel(nfa: &Nfa, alpha: &InputString) -> Result<Vec<BTreeSet<StateId>>> {
    alpha.check_within(nfa.inputs())?;
    let mut current: BTreeSet<StateId> = BTreeSet::from([nfa.start.clone()]);
    let mut out = vec![current.clone()];
    for sym in alpha.iter() {
        current = nfa
            .transitions
            .iter()
            .filter(|t| &t.symbol == sym && current.contains(&t.from))
            .map(|t| t.to.clone())
            .collect();
        out.push(current.clone());
    }
    Ok(out)
}

pub fn accepts(nfa: &Nfa, alpha: &InputString) -> Result<bool> {
    let run = run_parallel(nfa, alpha)?;
    let last = run.last().expect("parallel run is never empty");
    Ok(last.iter().any(|q| nfa.is_accepting(q)))
}

/// True iff `alpha` has a suffix of length `|beta|` that contains `beta`
/// pointwise.
pub fn embeds(alpha: &InputString, beta: &InputString) -> bool {
    let (a, b) = (alpha.symbols(), beta.symbols());
    if b.len() > a.len() {
        return false;
    }
    a[a.len() - b.len()..].iter().zip(b).all(|(g, s)| s.is_subset(g))
}

/// Automaton with states numbered and symbols turned into bit masks over a
/// caller-chosen input index. Used for the hot loops in the verifier.
#[derive(Clone, Debug)]
pub(crate) struct IndexedNfa {
    start: usize,
    accepting: FixedBitSet,
    /// Outgoing triples grouped by source state.
    out: Vec<Vec<(FixedBitSet, usize)>>,
}

impl IndexedNfa {
    pub(crate) fn new(nfa: &Nfa, index: &InputIndex) -> Result<Self> {
        let ids: BTreeMap<&StateId, usize> = nfa.states.iter().enumerate().map(|(i, q)| (q, i)).collect();
        let n = ids.len();
        let mut accepting = FixedBitSet::with_capacity(n);
        for q in &nfa.accepting {
            accepting.insert(ids[q]);
        }
        let mut out = vec![Vec::new(); n];
        for t in &nfa.transitions {
            out[ids[&t.from]].push((index.mask(&t.symbol)?, ids[&t.to]));
        }
        Ok(IndexedNfa { start: ids[&nfa.start], accepting, out })
    }

    pub(crate) fn state_count(&self) -> usize {
        self.out.len()
    }

    /// Empty state set of the embedding run (no position read yet).
    pub(crate) fn embed_initial(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.state_count())
    }

    /// One position of the embedding run: a fresh run starts here, then
    /// every active state follows each triple whose symbol is contained in
    /// `gamma`.
    pub(crate) fn embed_step(&self, current: &FixedBitSet, gamma: &FixedBitSet) -> FixedBitSet {
        let mut next = self.embed_initial();
        self.embed_step_into(current, gamma, &mut next);
        next
    }

    pub(crate) fn embed_step_into(&self, current: &FixedBitSet, gamma: &FixedBitSet, next: &mut FixedBitSet) {
        next.clear();
        next.grow(self.state_count());
        let mut visit = |q: usize| {
            for (sym, to) in &self.out[q] {
                if sym.is_subset(gamma) {
                    next.insert(*to);
                }
            }
        };
        visit(self.start);
        for q in current.ones() {
            if q != self.start {
                visit(q);
            }
        }
    }

    pub(crate) fn any_accepting(&self, set: &FixedBitSet) -> bool {
        !set.is_disjoint(&self.accepting)
    }
}
