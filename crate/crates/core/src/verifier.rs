//! Behavior oracle and bounded conformance checking.
//!
//! The oracle evaluates monotone-regular behaviors directly from their
//! languages: `x ∈ B(α)` iff `α` embeds some string accepted by the
//! automaton of `x`. Conformance of a network with delay `k` is then checked
//! by exhaustive enumeration over a symbol pool, or by seeded sampling.

use std::collections::{BTreeMap, BTreeSet};
use std::env;
use std::sync::atomic::{AtomicUsize, Ordering};

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automata::{accepts, embeds, is_founded, IndexedNfa, Nfa};
use crate::compiler::AutomatonBundle;
use crate::error::{Error, Result};
use crate::network::{output, PositiveNetwork, Simulator, Weight};
use crate::par;
use crate::symbol::{powerset, InputIndex, InputString, NeuronId, Symbol};

pub const DEFAULT_BUDGET: u128 = 10_000_000;
pub const BUDGET_ENV: &str = "MONOREG_BUDGET";

/// Largest `|α|` accepted by [`brute_force_embed_accepts`].
pub const BRUTE_FORCE_MAX_LEN: usize = 6;
/// Largest input set accepted by [`brute_force_embed_accepts`].
pub const BRUTE_FORCE_MAX_INPUTS: usize = 4;

/// Monotone-regular behavior given by one founded language per output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BehaviorOracle {
    inputs: BTreeSet<NeuronId>,
    languages: BTreeMap<NeuronId, Nfa>,
}

impl BehaviorOracle {
    pub fn new(inputs: BTreeSet<NeuronId>, languages: BTreeMap<NeuronId, Nfa>) -> Result<Self> {
        for (x, m) in &languages {
            if let Some(u) = m.inputs().difference(&inputs).next() {
                return Err(Error::Validation(format!("language of {x} uses input {u} outside the oracle input set")));
            }
            if !is_founded(m) {
                return Err(Error::Validation(format!("language of {x} is not founded")));
            }
        }
        Ok(BehaviorOracle { inputs, languages })
    }

    pub fn from_bundle(bundle: &AutomatonBundle) -> Result<Self> {
        BehaviorOracle::new(bundle.inputs().clone(), bundle.outputs().clone())
    }

    pub fn inputs(&self) -> &BTreeSet<NeuronId> {
        &self.inputs
    }

    pub fn languages(&self) -> &BTreeMap<NeuronId, Nfa> {
        &self.languages
    }

    pub fn outputs(&self) -> BTreeSet<NeuronId> {
        self.languages.keys().cloned().collect()
    }

    pub fn eval(&self, alpha: &InputString) -> Result<BTreeSet<NeuronId>> {
        behavior_eval(self, alpha)
    }
}

/// True iff `alpha` embeds some string accepted by `nfa`.
///
/// Runs the embedding closure: a fresh run enters at every position, and
/// a triple `(q, σ, q′)` fires on position `i` whenever `σ ⊆ αᵢ`.
pub fn embed_accepts(nfa: &Nfa, alpha: &InputString) -> bool {
    let mut ids = nfa.inputs().clone();
    ids.extend(alpha.iter().flat_map(|s| s.iter().cloned()));
    let index = InputIndex::new(&ids);
    let m = IndexedNfa::new(nfa, &index).expect("index covers the automaton inputs");
    let mut run = m.embed_initial();
    for sym in alpha.iter() {
        run = m.embed_step(&run, &index.mask(sym).expect("index covers the string"));
    }
    m.any_accepting(&run)
}

/// `B(α)` for the oracle's behavior. `α` must be nonempty.
pub fn behavior_eval(oracle: &BehaviorOracle, alpha: &InputString) -> Result<BTreeSet<NeuronId>> {
    if alpha.is_empty() {
        return Err(Error::InputDomain("behaviors are only defined on nonempty strings".into()));
    }
    alpha.check_within(&oracle.inputs)?;
    Ok(oracle.languages.iter().filter(|(_, m)| embed_accepts(m, alpha)).map(|(x, _)| x.clone()).collect())
}

/// Reference version of [`embed_accepts`]: tries every string `β` with
/// `|β| ≤ |α|` over the powerset of the automaton inputs.
pub fn brute_force_embed_accepts(nfa: &Nfa, alpha: &InputString) -> Result<bool> {
    if alpha.len() > BRUTE_FORCE_MAX_LEN || nfa.inputs().len() > BRUTE_FORCE_MAX_INPUTS {
        return Err(Error::Budget(format!(
            "brute-force embedding handles |α| <= {BRUTE_FORCE_MAX_LEN} and at most {BRUTE_FORCE_MAX_INPUTS} inputs \
             (got |α| = {}, {} inputs)",
            alpha.len(),
            nfa.inputs().len()
        )));
    }
    let pool = powerset(nfa.inputs());
    for len in 0..=alpha.len() {
        let mut digits = vec![0usize; len];
        loop {
            let beta: InputString = digits.iter().map(|&d| pool[d].clone()).collect();
            if embeds(alpha, &beta) && accepts(nfa, &beta)? {
                return Ok(true);
            }
            if !odometer(&mut digits, pool.len()) {
                break;
            }
        }
    }
    Ok(false)
}

/// Advances `digits` to the next tuple in lexicographic order.
fn odometer(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: InputString,
    pub expected: BTreeSet<NeuronId>,
    pub actual: BTreeSet<NeuronId>,
}

impl Counterexample {
    /// Recomputes both sides through the public evaluators and reports
    /// whether they still disagree as recorded.
    pub fn recheck(&self, net: &PositiveNetwork, oracle: &BehaviorOracle, k: usize) -> Result<bool> {
        let actual = output(net, &self.input)?;
        let expected = delayed_behavior(oracle, &self.input, k)?;
        Ok(actual == self.actual && expected == self.expected && actual != expected)
    }
}

/// Expected output of a delay-`k` implementation on `α`.
pub fn delayed_behavior(oracle: &BehaviorOracle, alpha: &InputString, k: usize) -> Result<BTreeSet<NeuronId>> {
    if alpha.len() <= k {
        return Ok(BTreeSet::new());
    }
    behavior_eval(oracle, &alpha.prefix(alpha.len() - k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformanceResult {
    pub verdict: Verdict,
    pub strings_checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub delay: usize,
    pub max_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ConformanceResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Enumeration budget: `MONOREG_BUDGET` if set to a number, else
/// [`DEFAULT_BUDGET`].
pub fn default_budget() -> u128 {
    env::var(BUDGET_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Symbols to build strings from; the full powerset of the inputs if unset.
    pub pool: Option<Vec<Symbol>>,
    /// Refuse exhaustive runs with more than this many strings of the
    /// maximal length.
    pub budget: u128,
    /// Spread the work over the rayon pool (ignored without the `parallel`
    /// feature).
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { pool: None, budget: default_budget(), parallel: true }
    }
}

/// Exhaustive delay-`k` check over all strings of length `1..=max_len`.
pub fn verify_delay(
    net: &PositiveNetwork,
    oracle: &BehaviorOracle,
    k: usize,
    max_len: usize,
    symbol_pool: Option<&[Symbol]>,
) -> Result<ConformanceResult> {
    let opts = VerifyOptions { pool: symbol_pool.map(<[Symbol]>::to_vec), ..VerifyOptions::default() };
    verify_delay_with(net, oracle, k, max_len, &opts)
}

pub fn verify_delay_with(
    net: &PositiveNetwork,
    oracle: &BehaviorOracle,
    k: usize,
    max_len: usize,
    opts: &VerifyOptions,
) -> Result<ConformanceResult> {
    let sim = net.simulator()?;
    let checker = Checker::new(&sim, net, oracle, k)?;
    let width = sim.input_index().len();
    let p: u128 = match &opts.pool {
        None => u32::try_from(width).ok().and_then(|w| 2u128.checked_pow(w)).unwrap_or(u128::MAX),
        Some(pool) => pool.iter().collect::<BTreeSet<_>>().len() as u128,
    };
    let longest = u32::try_from(max_len).ok().and_then(|l| p.checked_pow(l));
    match longest {
        Some(n) if n <= opts.budget => {}
        _ => {
            return Err(Error::Budget(format!(
                "exhaustive check needs {p}^{max_len} strings of length {max_len}, above the budget of {}; \
                 use sampled verification instead",
                opts.budget
            )))
        }
    }
    let masks: Vec<FixedBitSet> = match &opts.pool {
        None => canonical_masks(width),
        Some(pool) => {
            let set: BTreeSet<&Symbol> = pool.iter().collect();
            set.into_iter().map(|s| sim.input_index().mask(s)).collect::<Result<_>>()?
        }
    };

    let firsts: Vec<usize> = if max_len == 0 { Vec::new() } else { (0..masks.len()).collect() };
    let chunk = firsts.len().div_ceil(par::tasks(opts.parallel)).max(1);
    let chunks: Vec<&[usize]> = firsts.chunks(chunk).collect();
    let global = AtomicUsize::new(max_len);
    let found = par::map(chunks, opts.parallel, |firsts| checker.search(&masks, firsts, max_len, &global));
    let best = found.into_iter().flatten().min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let total: u128 = (1..=max_len as u32).map(|l| p.pow(l)).sum();
    let result = match best {
        None => ConformanceResult {
            verdict: Verdict::Pass,
            strings_checked: saturate(total),
            counterexample: None,
            delay: k,
            max_len,
            seed: None,
        },
        Some(path) => {
            let digits_value = path.iter().fold(0u128, |acc, &d| acc * p + d as u128);
            let shorter: u128 = (1..path.len() as u32).map(|l| p.pow(l)).sum();
            let input: InputString = path.iter().map(|&d| sim.input_index().symbol(&masks[d])).collect();
            let sym_masks: Vec<FixedBitSet> = path.iter().map(|&d| masks[d].clone()).collect();
            ConformanceResult {
                verdict: Verdict::Fail,
                strings_checked: saturate(shorter + digits_value + 1),
                counterexample: Some(checker.counterexample(input, &sym_masks)),
                delay: k,
                max_len,
                seed: None,
            }
        }
    };
    Ok(result)
}

/// Every subset of `0..width` as a bit set, ordered like the corresponding
/// symbols: lexicographically by sorted member list.
fn canonical_masks(width: usize) -> Vec<FixedBitSet> {
    let mut masks: Vec<FixedBitSet> = (0..1usize << width)
        .map(|bits| {
            let mut m = FixedBitSet::with_capacity(width);
            for i in (0..width).filter(|i| bits >> i & 1 == 1) {
                m.insert(i);
            }
            m
        })
        .collect();
    masks.sort_by(|a, b| a.ones().cmp(b.ones()));
    masks
}

fn saturate(n: u128) -> u64 {
    u64::try_from(n).unwrap_or(u64::MAX)
}

/// Strings checked per parallel batch in sampled mode.
const SAMPLE_BATCH: usize = 4096;

/// Delay-`k` check over `samples` random strings: lengths uniform in
/// `1..=max_len`, symbols uniform over the powerset of the inputs.
pub fn verify_delay_sampled(
    net: &PositiveNetwork,
    oracle: &BehaviorOracle,
    k: usize,
    max_len: usize,
    samples: u64,
    seed: u64,
) -> Result<ConformanceResult> {
    verify_delay_sampled_with(net, oracle, k, max_len, samples, seed, true)
}

pub fn verify_delay_sampled_with(
    net: &PositiveNetwork,
    oracle: &BehaviorOracle,
    k: usize,
    max_len: usize,
    samples: u64,
    seed: u64,
    parallel: bool,
) -> Result<ConformanceResult> {
    let sim = net.simulator()?;
    let checker = Checker::new(&sim, net, oracle, k)?;
    let width = sim.input_index().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0u64;
    let mut failure = None;
    while checked < samples && max_len > 0 {
        let n = SAMPLE_BATCH.min((samples - checked) as usize);
        let batch: Vec<Vec<FixedBitSet>> = (0..n)
            .map(|_| {
                let len = rng.gen_range(1..=max_len);
                (0..len)
                    .map(|_| {
                        let mut m = FixedBitSet::with_capacity(width);
                        for i in 0..width {
                            m.set(i, rng.gen::<bool>());
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let verdicts = par::map(batch.iter().enumerate().collect(), parallel, |(i, s)| {
            checker.mismatch_on(s).then_some(i)
        });
        if let Some(i) = verdicts.into_iter().flatten().min() {
            checked += i as u64 + 1;
            failure = Some(batch[i].clone());
            break;
        }
        checked += n as u64;
    }
    let counterexample = failure.map(|masks| {
        let input: InputString = masks.iter().map(|m| sim.input_index().symbol(m)).collect();
        checker.counterexample(input, &masks)
    });
    Ok(ConformanceResult {
        verdict: if counterexample.is_some() { Verdict::Fail } else { Verdict::Pass },
        strings_checked: checked,
        counterexample,
        delay: k,
        max_len,
        seed: Some(seed),
    })
}

/// Joint state of the network and the oracle after a prefix.
#[derive(Clone)]
struct Frame {
    net: FixedBitSet,
    runs: Vec<FixedBitSet>,
    /// Oracle outputs on this prefix, as output-bit positions.
    behavior: FixedBitSet,
}

struct Checker<'a> {
    sim: &'a Simulator,
    /// One automaton per output, in simulator output order.
    automata: Vec<IndexedNfa>,
    k: usize,
}

impl<'a> Checker<'a> {
    fn new(sim: &'a Simulator, net: &PositiveNetwork, oracle: &BehaviorOracle, k: usize) -> Result<Self> {
        if net.inputs() != oracle.inputs() || *net.outputs() != oracle.outputs() {
            return Err(Error::Validation(format!(
                "network and behavior are not compatible: network has inputs {:?} and outputs {:?}, \
                 behavior has inputs {:?} and outputs {:?}",
                net.inputs(),
                net.outputs(),
                oracle.inputs(),
                oracle.outputs()
            )));
        }
        let automata = sim
            .output_ids()
            .iter()
            .map(|x| IndexedNfa::new(&oracle.languages[x], sim.input_index()))
            .collect::<Result<_>>()?;
        Ok(Checker { sim, automata, k })
    }

    fn outputs(&self) -> usize {
        self.automata.len()
    }

    fn initial(&self) -> Frame {
        Frame {
            net: self.sim.initial(),
            runs: self.automata.iter().map(IndexedNfa::embed_initial).collect(),
            behavior: FixedBitSet::with_capacity(self.outputs()),
        }
    }

    fn advance(&self, frame: &Frame, sym: &FixedBitSet) -> Frame {
        let mut next = self.initial();
        self.advance_into(frame, sym, &mut next);
        next
    }

    fn advance_into(&self, frame: &Frame, sym: &FixedBitSet, next: &mut Frame) {
        self.sim.step_into(&frame.net, sym, &mut next.net);
        for (i, m) in self.automata.iter().enumerate() {
            m.embed_step_into(&frame.runs[i], sym, &mut next.runs[i]);
            next.behavior.set(i, m.any_accepting(&next.runs[i]));
        }
    }

    /// Allocation-free form of comparing both sides of [`Checker::sides`].
    fn mismatch(&self, frames: &[Frame]) -> bool {
        let n = frames.len() - 1;
        let last = &frames[n].net;
        (0..self.outputs()).any(|i| {
            let expected = n > self.k && frames[n - self.k].behavior.contains(i);
            expected != last.contains(i)
        })
    }

    /// `frames[0]` is the initial frame and `frames[n]` follows `n` symbols.
    fn sides(&self, frames: &[Frame]) -> (FixedBitSet, FixedBitSet) {
        let n = frames.len() - 1;
        let expected = if n <= self.k {
            FixedBitSet::with_capacity(self.outputs())
        } else {
            frames[n - self.k].behavior.clone()
        };
        (expected, self.sim.output_mask(&frames[n].net))
    }

    fn frames(&self, symbols: &[FixedBitSet]) -> Vec<Frame> {
        let mut frames = vec![self.initial()];
        for s in symbols {
            let next = self.advance(frames.last().expect("nonempty"), s);
            frames.push(next);
        }
        frames
    }

    fn mismatch_on(&self, symbols: &[FixedBitSet]) -> bool {
        let (e, a) = self.sides(&self.frames(symbols));
        e != a
    }

    fn counterexample(&self, input: InputString, symbols: &[FixedBitSet]) -> Counterexample {
        let (expected, actual) = self.sides(&self.frames(symbols));
        Counterexample { input, expected: self.sim.output_names(&expected), actual: self.sim.output_names(&actual) }
    }

    /// Smallest failing string (by length, then lexicographically) among
    /// those starting with one of `firsts`, which must be ascending.
    /// `global` holds the shortest failure length found by any task.
    fn search(&self, pool: &[FixedBitSet], firsts: &[usize], max_len: usize, global: &AtomicUsize) -> Option<Vec<usize>> {
        let mut frames: Vec<Frame> = (0..=max_len).map(|_| self.initial()).collect();
        let mut path = Vec::with_capacity(max_len);
        let mut limit = max_len;
        let mut best = None;
        for &first in firsts {
            if limit == 0 || global.load(Ordering::Relaxed) == 0 {
                break;
            }
            self.dfs(pool, first, &mut frames, &mut path, &mut limit, global, &mut best);
        }
        best
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        pool: &[FixedBitSet],
        sym: usize,
        frames: &mut [Frame],
        path: &mut Vec<usize>,
        limit: &mut usize,
        global: &AtomicUsize,
        best: &mut Option<Vec<usize>>,
    ) {
        path.push(sym);
        let n = path.len();
        let (done, rest) = frames.split_at_mut(n);
        self.advance_into(&done[n - 1], &pool[sym], &mut rest[0]);
        if self.mismatch(&frames[..=n]) {
            // Depth-first order visits equal-length strings lexicographically,
            // so within this task only strictly shorter strings can improve
            // on this one. Other tasks may still hold an equal-length string
            // that sorts earlier.
            *best = Some(path.clone());
            *limit = n - 1;
            global.fetch_min(n, Ordering::Relaxed);
        } else {
            for s in 0..pool.len() {
                if n >= *limit || n >= global.load(Ordering::Relaxed) {
                    break;
                }
                self.dfs(pool, s, frames, path, limit, global, best);
            }
        }
        path.pop();
    }
}

/// All fractions `p/q` in `[0, 1]` with `1 ≤ q ≤ max_den`, ascending.
pub fn weight_grid(max_den: u64) -> Vec<Weight> {
    let mut out = BTreeSet::new();
    for q in 1..=max_den {
        for p in 0..=q {
            if p.gcd(&q) == 1 {
                out.insert(Weight::new(p, q).expect("positive denominator"));
            }
        }
    }
    out.into_iter().collect()
}
