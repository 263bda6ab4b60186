//! Automaton-to-network constructions.
//!
//! Every construction turns each state-symbol pair `(q, σ)` of a clean
//! automaton into an auxiliary neuron that fires one step after an
//! embedded run reaches `q` by reading `σ`. A non-trigger neuron combines an
//! "or" over its context neurons with an "and" over the members of `σ`,
//! using the weights [`w_or`] and [`w_and`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::automata::{clean::clean_violations, is_converging, is_founded, Convergence, Nfa};
use crate::error::{Error, Result};
use crate::network::{PositiveNetwork, Weight};
use crate::symbol::{InputString, NeuronId, StateId, Symbol};

/// `1 / (n·m + 1)`: weight on each of `m` context neurons.
pub fn w_or(m: u64, n: u64) -> Result<Weight> {
    let den = or_and_denominator(m, n)?;
    Weight::new(1, den)
}

/// `m / (n·m + 1)`: weight on each of the `n` members of the symbol.
pub fn w_and(m: u64, n: u64) -> Result<Weight> {
    let den = or_and_denominator(m, n)?;
    Weight::new(m, den)
}

fn or_and_denominator(m: u64, n: u64) -> Result<u64> {
    if m == 0 || n == 0 {
        return Err(Error::InputDomain(format!("or-and weights need m, n >= 1 (got m={m}, n={n})")));
    }
    n.checked_mul(m)
        .and_then(|p| p.checked_add(1))
        .ok_or_else(|| Error::InputDomain(format!("or-and denominator overflows for m={m}, n={n}")))
}

/// Checks, in exact arithmetic, the three inequalities that make the
/// or-and weights work:
/// `m·w_or + (n−1)·w_and < 1`, `w_or + n·w_and ≥ 1`, and `n·w_and < 1`.
pub fn claim1_check(m: u64, n: u64) -> bool {
    let (Ok(wo), Ok(wa)) = (w_or(m, n), w_and(m, n)) else {
        return false;
    };
    let big = |w: Weight| BigRational::new(BigInt::from(w.numer()), BigInt::from(w.denom()));
    let (wo, wa) = (big(wo), big(wa));
    let int = |k: u64| BigRational::from_integer(BigInt::from(k));
    let one = BigRational::one();
    let all_context_no_symbol = int(m) * &wo + int(n - 1) * &wa;
    let one_context_full_symbol = &wo + int(n) * &wa;
    let symbol_alone = int(n) * &wa;
    all_context_no_symbol < one && one_context_full_symbol >= one && symbol_alone < one
}

/// Output neurons mapped to automata over a shared input set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BundleDoc", into = "BundleDoc")]
pub struct AutomatonBundle {
    inputs: BTreeSet<NeuronId>,
    outputs: BTreeMap<NeuronId, Nfa>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleEntry {
    automaton: Nfa,
    neuron: NeuronId,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleDoc {
    inputs: Vec<NeuronId>,
    outputs: Vec<BundleEntry>,
}

impl TryFrom<BundleDoc> for AutomatonBundle {
    type Error = Error;
    fn try_from(doc: BundleDoc) -> Result<Self> {
        let mut outputs = BTreeMap::new();
        for e in doc.outputs {
            if outputs.insert(e.neuron.clone(), e.automaton).is_some() {
                return Err(Error::Validation(format!("output neuron {} listed twice", e.neuron)));
            }
        }
        let n = doc.inputs.len();
        let inputs: BTreeSet<NeuronId> = doc.inputs.into_iter().collect();
        if inputs.len() != n {
            return Err(Error::Validation("duplicate input neuron in bundle".into()));
        }
        AutomatonBundle::new(inputs, outputs)
    }
}

impl From<AutomatonBundle> for BundleDoc {
    fn from(b: AutomatonBundle) -> Self {
        BundleDoc {
            inputs: b.inputs.into_iter().collect(),
            outputs: b.outputs.into_iter().map(|(neuron, automaton)| BundleEntry { automaton, neuron }).collect(),
        }
    }
}

impl AutomatonBundle {
    pub fn new(inputs: BTreeSet<NeuronId>, outputs: BTreeMap<NeuronId, Nfa>) -> Result<Self> {
        for (x, m) in &outputs {
            if inputs.contains(x) {
                return Err(Error::Validation(format!("output neuron {x} is also an input neuron")));
            }
            if let Some(u) = m.inputs().difference(&inputs).next() {
                return Err(Error::Validation(format!("automaton for {x} uses input {u} not declared by the bundle")));
            }
        }
        Ok(AutomatonBundle { inputs, outputs })
    }

    pub fn inputs(&self) -> &BTreeSet<NeuronId> {
        &self.inputs
    }

    pub fn outputs(&self) -> &BTreeMap<NeuronId, Nfa> {
        &self.outputs
    }

    /// Applies `f` to every automaton, keeping the bundle shape.
    pub fn try_map(&self, mut f: impl FnMut(&NeuronId, &Nfa) -> Result<Nfa>) -> Result<Self> {
        let outputs = self.outputs.iter().map(|(x, m)| Ok((x.clone(), f(x, m)?))).collect::<Result<_>>()?;
        AutomatonBundle::new(self.inputs.clone(), outputs)
    }
}

/// A state together with the symbol read to enter it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub state: StateId,
    pub symbol: Symbol,
}

impl Pair {
    pub fn new(state: StateId, symbol: Symbol) -> Self {
        Pair { state, symbol }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}|{})", self.state, self.symbol.joined())
    }
}

/// The auxiliary-neuron blueprint of a clean automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSet {
    /// `(q, σ)` with `q ≠ start` and some triple `(·, σ, q)`.
    pub pairs: BTreeSet<Pair>,
    /// Pairs entered directly from the start state.
    pub triggers: BTreeSet<Pair>,
    /// For each pair `(q, σ)`, the pairs `(q′, σ′)` with a triple `(q′, σ, q)`.
    pub contexts: BTreeMap<Pair, BTreeSet<Pair>>,
}

impl PairSet {
    pub fn context(&self, p: &Pair) -> &BTreeSet<Pair> {
        static EMPTY: BTreeSet<Pair> = BTreeSet::new();
        self.contexts.get(p).unwrap_or(&EMPTY)
    }

    pub fn is_trigger(&self, p: &Pair) -> bool {
        self.triggers.contains(p)
    }
}

fn require_clean(x: Option<&NeuronId>, nfa: &Nfa) -> Result<()> {
    let mut problems = clean_violations(nfa);
    if !is_founded(nfa) {
        problems.push("language is not founded".into());
    }
    if problems.is_empty() {
        return Ok(());
    }
    let whose = x.map(|x| format!(" for {x}")).unwrap_or_default();
    Err(Error::Validation(format!("automaton{whose} is not clean: {}", problems.join("; "))))
}

pub fn pair_set(nfa: &Nfa) -> Result<PairSet> {
    require_clean(None, nfa)?;
    Ok(pair_set_unchecked(nfa))
}

fn pair_set_unchecked(nfa: &Nfa) -> PairSet {
    let start = nfa.start();
    let mut pairs = BTreeSet::new();
    let mut triggers = BTreeSet::new();
    for t in nfa.transitions().iter().filter(|t| &t.to != start) {
        let p = Pair::new(t.to.clone(), t.symbol.clone());
        if &t.from == start {
            triggers.insert(p.clone());
        }
        pairs.insert(p);
    }
    let mut contexts: BTreeMap<Pair, BTreeSet<Pair>> = BTreeMap::new();
    for p in &pairs {
        let preds: BTreeSet<&StateId> = nfa
            .transitions()
            .iter()
            .filter(|t| t.to == p.state && t.symbol == p.symbol && &t.from != start)
            .map(|t| &t.from)
            .collect();
        let ctx: BTreeSet<Pair> = pairs.iter().filter(|c| preds.contains(&c.state)).cloned().collect();
        contexts.insert(p.clone(), ctx);
    }
    PairSet { pairs, triggers, contexts }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Delay1,
    Preprocessor,
    ZeroDelayConverging,
    SingleStringChain,
}

impl Construction {
    pub fn delay(self) -> usize {
        match self {
            Construction::Delay1 => 1,
            Construction::Preprocessor => 2,
            Construction::ZeroDelayConverging | Construction::SingleStringChain => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompilationResult {
    pub network: PositiveNetwork,
    pub delay: usize,
    pub aux_count: usize,
    pub construction: Construction,
}

impl CompilationResult {
    fn new(network: PositiveNetwork, construction: Construction) -> Self {
        CompilationResult { aux_count: network.auxiliary().len(), delay: construction.delay(), network, construction }
    }

    /// Network document extended with `delay`, `construction`, `aux_count`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.network).expect("networks serialize");
        let obj = v.as_object_mut().expect("network documents are objects");
        obj.insert("delay".into(), self.delay.into());
        obj.insert("construction".into(), serde_json::to_value(self.construction).expect("tag serializes"));
        obj.insert("aux_count".into(), self.aux_count.into());
        v
    }
}

/// Names generated neurons; prefixes with the output name when several
/// outputs share one network.
struct Namer<'a> {
    prefix: Option<&'a NeuronId>,
}

impl Namer<'_> {
    fn make(&self, local: String) -> NeuronId {
        let name = match self.prefix {
            Some(x) => format!("{x}:{local}"),
            None => local,
        };
        NeuronId::new(name).expect("generated names are built from valid tokens")
    }

    fn pair(&self, p: &Pair) -> NeuronId {
        self.make(p.to_string())
    }

    fn preprocessor(&self, sym: &Symbol) -> NeuronId {
        self.make(format!("y{sym}"))
    }

    fn chain(&self, i: usize) -> NeuronId {
        self.make(format!("y{i}"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Delay1,
    Preprocessor,
    ZeroDelay,
}

fn uniform(members: &Symbol) -> Result<Weight> {
    Weight::new(1, members.len() as u64)
}

/// Network for one output; auxiliary pairs wired as in the delay-1
/// construction, with the preprocessor or zero-delay variations.
fn compile_output(x: &NeuronId, nfa: &Nfa, inputs: &BTreeSet<NeuronId>, namer: &Namer, mode: Mode) -> Result<PositiveNetwork> {
    require_clean(Some(x), nfa)?;
    let ps = pair_set_unchecked(nfa);
    let aux: BTreeMap<&Pair, NeuronId> = ps.pairs.iter().map(|p| (p, namer.pair(p))).collect();
    let mut net = PositiveNetwork::new(inputs.clone(), BTreeSet::from([x.clone()]), aux.values().cloned().collect());

    let mut preprocessors: BTreeMap<&Symbol, NeuronId> = BTreeMap::new();
    if mode == Mode::Preprocessor {
        for p in ps.pairs.iter().filter(|p| !p.symbol.is_empty()) {
            preprocessors.entry(&p.symbol).or_insert_with(|| namer.preprocessor(&p.symbol));
        }
        for (sym, y) in &preprocessors {
            net.add_auxiliary(y.clone());
            let w = uniform(sym)?;
            for u in sym.iter() {
                net.set_weight(u.clone(), y.clone(), w);
            }
        }
    }

    for p in &ps.pairs {
        let y = &aux[p];
        let ctx = ps.context(p);
        if ps.is_trigger(p) {
            match mode {
                Mode::Preprocessor => net.set_weight(preprocessors[&p.symbol].clone(), y.clone(), Weight::ONE),
                _ => {
                    let w = uniform(&p.symbol)?;
                    for u in p.symbol.iter() {
                        net.set_weight(u.clone(), y.clone(), w);
                    }
                }
            }
        } else if p.symbol.is_empty() {
            for c in ctx {
                net.set_weight(aux[c].clone(), y.clone(), Weight::ONE);
            }
        } else {
            let m = ctx.len() as u64;
            debug_assert!(m > 0, "clean automata give every non-trigger pair a context");
            match mode {
                Mode::Preprocessor => {
                    net.set_weight(preprocessors[&p.symbol].clone(), y.clone(), Weight::new(m, m + 1)?);
                    for c in ctx {
                        net.set_weight(aux[c].clone(), y.clone(), Weight::new(1, m + 1)?);
                    }
                }
                _ => {
                    let n = p.symbol.len() as u64;
                    let (wo, wa) = (w_or(m, n)?, w_and(m, n)?);
                    for c in ctx {
                        net.set_weight(aux[c].clone(), y.clone(), wo);
                    }
                    for u in p.symbol.iter() {
                        net.set_weight(u.clone(), y.clone(), wa);
                    }
                }
            }
        }
    }

    match mode {
        Mode::Delay1 | Mode::Preprocessor => {
            for p in ps.pairs.iter().filter(|p| nfa.is_accepting(&p.state)) {
                net.set_weight(aux[p].clone(), x.clone(), Weight::ONE);
            }
        }
        Mode::ZeroDelay => wire_zero_delay_output(x, nfa, &ps, &aux, &mut net)?,
    }
    Ok(net)
}

fn wire_zero_delay_output(
    x: &NeuronId,
    nfa: &Nfa,
    ps: &PairSet,
    aux: &BTreeMap<&Pair, NeuronId>,
    net: &mut PositiveNetwork,
) -> Result<()> {
    let terminal = match is_converging(nfa) {
        Convergence::Terminal(s) => s,
        // Empty language: x gets no presynaptic weights and never fires.
        Convergence::Vacuous => return Ok(()),
        Convergence::Diverging(a, b) => {
            return Err(Error::Precondition(format!(
                "language of {x} is not converging: accepting states are entered on both {a} and {b}"
            )))
        }
    };
    // States that enter an accepting state on the terminal symbol.
    let before_accept: BTreeSet<&StateId> = nfa
        .transitions()
        .iter()
        .filter(|t| t.symbol == terminal && nfa.is_accepting(&t.to))
        .map(|t| &t.from)
        .collect();
    let from_start = before_accept.contains(nfa.start());
    let context: Vec<&NeuronId> =
        ps.pairs.iter().filter(|p| before_accept.contains(&p.state)).map(|p| &aux[p]).collect();

    if terminal.is_empty() {
        for y in context {
            net.set_weight(y.clone(), x.clone(), Weight::ONE);
        }
    } else if context.is_empty() || from_start {
        // ⟨σ̂⟩ itself is accepted, and every accepted string embeds it, so
        // the terminal symbol alone decides the output.
        let w = uniform(&terminal)?;
        for u in terminal.iter() {
            net.set_weight(u.clone(), x.clone(), w);
        }
    } else {
        let (m, n) = (context.len() as u64, terminal.len() as u64);
        let (wo, wa) = (w_or(m, n)?, w_and(m, n)?);
        for y in context {
            net.set_weight(y.clone(), x.clone(), wo);
        }
        for u in terminal.iter() {
            net.set_weight(u.clone(), x.clone(), wa);
        }
    }
    Ok(())
}

fn compile_all(bundle: &AutomatonBundle, mode: Mode, construction: Construction) -> Result<CompilationResult> {
    let prefixed = bundle.outputs.len() > 1;
    let mut united = PositiveNetwork::new(bundle.inputs.clone(), BTreeSet::new(), BTreeSet::new());
    for (x, nfa) in &bundle.outputs {
        let namer = Namer { prefix: prefixed.then_some(x) };
        let part = compile_output(x, nfa, &bundle.inputs, &namer, mode)?;
        united.unite(part)?;
    }
    Ok(CompilationResult::new(united, construction))
}

/// Delay-1 construction: one auxiliary neuron per pair, output neurons read
/// the pairs whose state is accepting.
pub fn compile_delay1(bundle: &AutomatonBundle) -> Result<CompilationResult> {
    compile_all(bundle, Mode::Delay1, Construction::Delay1)
}

/// Delay-2 variant: a preprocessor neuron per nonempty symbol detects the
/// whole symbol, and pair neurons read it instead of the inputs.
pub fn compile_preprocessor(bundle: &AutomatonBundle) -> Result<CompilationResult> {
    compile_all(bundle, Mode::Preprocessor, Construction::Preprocessor)
}

/// Zero-delay construction for converging languages: outputs read the
/// terminal symbol directly plus the pairs whose state precedes acceptance.
pub fn compile_zero_delay_converging(bundle: &AutomatonBundle) -> Result<CompilationResult> {
    compile_all(bundle, Mode::ZeroDelay, Construction::ZeroDelayConverging)
}

/// Zero-delay chain for outputs whose language is a single string.
pub fn compile_single_string(
    strings: &BTreeMap<NeuronId, InputString>,
    inputs: &BTreeSet<NeuronId>,
) -> Result<CompilationResult> {
    let prefixed = strings.len() > 1;
    let mut united = PositiveNetwork::new(inputs.clone(), BTreeSet::new(), BTreeSet::new());
    for (x, s) in strings {
        if inputs.contains(x) {
            return Err(Error::Validation(format!("output neuron {x} is also an input neuron")));
        }
        let symbols = s.symbols();
        match symbols.first() {
            None => return Err(Error::Validation(format!("string for {x} is empty"))),
            Some(first) if first.is_empty() => {
                return Err(Error::Validation(format!("string for {x} starts with the empty symbol")))
            }
            _ => {}
        }
        s.check_within(inputs).map_err(|e| Error::Validation(e.to_string()))?;

        let namer = Namer { prefix: prefixed.then_some(x) };
        let chain: Vec<NeuronId> = (1..symbols.len()).map(|i| namer.chain(i)).collect();
        let mut net = PositiveNetwork::new(inputs.clone(), BTreeSet::from([x.clone()]), chain.iter().cloned().collect());
        // Neuron i (0-based) detects symbols[i] given the previous link.
        for (i, sym) in symbols.iter().enumerate() {
            let target = if i + 1 == symbols.len() { x } else { &chain[i] };
            let prev = i.checked_sub(1).map(|j| &chain[j]);
            let fan_in = sym.len() as u64 + u64::from(prev.is_some());
            let w = Weight::new(1, fan_in)?;
            for u in sym.iter().chain(prev) {
                net.set_weight(u.clone(), target.clone(), w);
            }
        }
        united.unite(net)?;
    }
    Ok(CompilationResult::new(united, Construction::SingleStringChain))
}

/// `Σ_x |pair_set(M_x)|`.
pub fn total_pair_count(bundle: &AutomatonBundle) -> Result<usize> {
    bundle.outputs.values().map(|m| pair_set(m).map(|p| p.pairs.len())).sum()
}
