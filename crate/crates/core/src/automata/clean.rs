//! Normalization of automata for compilation: self-loop removal, blocking
//! the empty symbol at the start state, and pruning unreachable states.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{Nfa, Transition};
use crate::error::{Error, Result};
use crate::symbol::{InputString, StateId, Symbol};

/// What [`clean`] changed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CleanReport {
    pub removed_self_loops: usize,
    /// Original state → the fresh copy introduced for it.
    pub duplicated_states: BTreeMap<StateId, StateId>,
    pub pruned_states: BTreeSet<StateId>,
    pub blocked_empty_from_start: bool,
}

impl CleanReport {
    pub fn is_noop(&self) -> bool {
        self.removed_self_loops == 0
            && self.duplicated_states.is_empty()
            && self.pruned_states.is_empty()
            && !self.blocked_empty_from_start
    }
}

fn fresh_copy_name(q: &StateId, taken: &BTreeSet<StateId>) -> StateId {
    let mut name = format!("{q}'");
    loop {
        let id = StateId::new(name.clone()).expect("derived from a valid state name");
        if !taken.contains(&id) {
            return id;
        }
        name.push('\'');
    }
}

/// Duplicates every state with a self-loop. Each copy `f(q)` receives all
/// outgoing triples of `q`; each self-loop `(q, σ, q)` becomes `(q, σ, f(q))`.
/// `f(q)` is accepting iff `q` is.
pub fn remove_self_loops(nfa: &Nfa) -> (Nfa, CleanReport) {
    let looping: BTreeSet<&StateId> = nfa.transitions.iter().filter(|t| t.is_self_loop()).map(|t| &t.from).collect();
    let mut report = CleanReport {
        removed_self_loops: nfa.transitions.iter().filter(|t| t.is_self_loop()).count(),
        ..CleanReport::default()
    };
    if looping.is_empty() {
        return (nfa.clone(), report);
    }

    let mut states = nfa.states.clone();
    for q in &looping {
        let copy = fresh_copy_name(q, &states);
        states.insert(copy.clone());
        report.duplicated_states.insert((*q).clone(), copy);
    }
    let copy_of = &report.duplicated_states;

    let mut transitions = BTreeSet::new();
    for t in &nfa.transitions {
        if t.is_self_loop() {
            transitions.insert(Transition::new(t.from.clone(), t.symbol.clone(), copy_of[&t.from].clone()));
        } else {
            transitions.insert(t.clone());
        }
        if let Some(copy) = copy_of.get(&t.from) {
            transitions.insert(Transition::new(copy.clone(), t.symbol.clone(), t.to.clone()));
        }
    }

    let mut accepting = nfa.accepting.clone();
    for (q, copy) in copy_of {
        if nfa.accepting.contains(q) {
            accepting.insert(copy.clone());
        }
    }

    let out = Nfa::from_parts_unchecked(states, nfa.inputs.clone(), nfa.start.clone(), accepting, transitions);
    (out, report)
}

/// Drops every triple `(start, ∅, ·)`. Preserves the language only when it is
/// founded; the caller is responsible for that.
pub fn restrict_founded_start(nfa: &Nfa) -> Nfa {
    let kept = nfa
        .transitions
        .iter()
        .filter(|t| !(t.from == nfa.start && t.symbol.is_empty()))
        .cloned()
        .collect();
    nfa.with_transitions(kept)
}

/// Keeps only the states that occur in some run.
pub fn prune_unreachable(nfa: &Nfa) -> Nfa {
    prune_with_report(nfa).0
}

fn prune_with_report(nfa: &Nfa) -> (Nfa, BTreeSet<StateId>) {
    let reachable: BTreeSet<StateId> = nfa.reachable_from([&nfa.start]).into_iter().cloned().collect();
    let pruned: BTreeSet<StateId> = nfa.states.difference(&reachable).cloned().collect();
    if pruned.is_empty() {
        return (nfa.clone(), pruned);
    }
    let transitions = nfa
        .transitions
        .iter()
        .filter(|t| reachable.contains(&t.from) && reachable.contains(&t.to))
        .cloned()
        .collect();
    let accepting = nfa.accepting.intersection(&reachable).cloned().collect();
    let out = Nfa::from_parts_unchecked(reachable, nfa.inputs.clone(), nfa.start.clone(), accepting, transitions);
    (out, pruned)
}

/// Graph criterion: the start state is not accepting and no state entered by
/// reading `∅` from the start can reach an accepting state.
pub fn is_founded(nfa: &Nfa) -> bool {
    if nfa.is_accepting(&nfa.start) {
        return false;
    }
    let empty = Symbol::empty();
    let entered: Vec<&StateId> = nfa.successors(&nfa.start, &empty).collect();
    nfa.reachable_from(entered).iter().all(|q| !nfa.is_accepting(q))
}

/// A shortest accepted string that is empty or starts with `∅`, if any.
pub fn founded_witness(nfa: &Nfa) -> Option<InputString> {
    if nfa.is_accepting(&nfa.start) {
        return Some(InputString::empty());
    }
    let empty = Symbol::empty();
    // Breadth-first over states, seeded with every ∅-successor of start.
    let mut parent: BTreeMap<&StateId, Option<(&StateId, &Symbol)>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for q in nfa.successors(&nfa.start, &empty) {
        if !parent.contains_key(q) {
            parent.insert(q, None);
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        if nfa.is_accepting(q) {
            let mut symbols = Vec::new();
            let mut cur = q;
            while let Some(Some((prev, sym))) = parent.get(cur) {
                symbols.push((*sym).clone());
                cur = prev;
            }
            symbols.push(Symbol::empty());
            symbols.reverse();
            return Some(InputString::new(symbols));
        }
        for t in nfa.transitions.iter().filter(|t| &t.from == q) {
            if !parent.contains_key(&t.to) {
                parent.insert(&t.to, Some((q, &t.symbol)));
                queue.push_back(&t.to);
            }
        }
    }
    None
}

/// No self-loops, no `∅` read from the start state, every state reachable.
pub fn is_clean(nfa: &Nfa) -> bool {
    clean_violations(nfa).is_empty()
}

pub(crate) fn clean_violations(nfa: &Nfa) -> Vec<String> {
    let mut out = Vec::new();
    for t in &nfa.transitions {
        if t.is_self_loop() {
            out.push(format!("self-loop ({}, {}, {})", t.from, t.symbol, t.to));
        } else if t.from == nfa.start && t.symbol.is_empty() {
            out.push(format!("empty symbol read from start state ({}, [], {})", t.from, t.to));
        }
    }
    let reachable = nfa.reachable_from([&nfa.start]);
    for q in nfa.states.iter().filter(|q| !reachable.contains(q)) {
        out.push(format!("unreachable state {q}"));
    }
    out
}

/// Removes self-loops, blocks `∅` at the start state, then prunes
/// unreachable states. Rejects automata whose language is not founded.
pub fn clean(nfa: &Nfa) -> Result<(Nfa, CleanReport)> {
    if !is_founded(nfa) {
        let msg = match founded_witness(nfa) {
            Some(w) if w.is_empty() => "language is not founded: the empty string is accepted".to_string(),
            Some(w) => format!("language is not founded: accepts {w}, which starts with the empty symbol"),
            None => "language is not founded: a state entered on [] from the start reaches an accepting state"
                .to_string(),
        };
        return Err(Error::Validation(msg));
    }
    let (no_loops, mut report) = remove_self_loops(nfa);
    let restricted = restrict_founded_start(&no_loops);
    report.blocked_empty_from_start = restricted.transitions.len() != no_loops.transitions.len();
    let (pruned, removed) = prune_with_report(&restricted);
    report.pruned_states = removed;
    Ok((pruned, report))
}

/// Outcome of the converging check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Convergence {
    /// Every transition into an accepting state reads this symbol.
    Terminal(Symbol),
    /// Two distinct symbols both lead into accepting states.
    Diverging(Symbol, Symbol),
    /// No transition enters an accepting state.
    Vacuous,
}

impl Convergence {
    pub fn terminal(&self) -> Option<&Symbol> {
        match self {
            Convergence::Terminal(s) => Some(s),
            _ => None,
        }
    }
}

/// Inspects `{(q, σ) : δ(q, σ) meets the accepting states}` over reachable `q`.
pub fn is_converging(nfa: &Nfa) -> Convergence {
    let reachable = nfa.reachable_from([&nfa.start]);
    let terminal: BTreeSet<&Symbol> = nfa
        .transitions
        .iter()
        .filter(|t| reachable.contains(&t.from) && nfa.is_accepting(&t.to))
        .map(|t| &t.symbol)
        .collect();
    let mut it = terminal.into_iter();
    match (it.next(), it.next()) {
        (None, _) => Convergence::Vacuous,
        (Some(s), None) => Convergence::Terminal(s.clone()),
        (Some(a), Some(b)) => Convergence::Diverging(a.clone(), b.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::accepts;
    use crate::fixtures::{bias_automaton, fig1_automaton, nfa, sigma};
    use crate::symbol::powerset;

    fn all_strings(syms: &[Symbol], max_len: usize) -> Vec<InputString> {
        let mut out = vec![InputString::empty()];
        let mut layer = vec![InputString::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for s in &layer {
                for sym in syms {
                    let mut t = s.clone();
                    t.push(sym.clone());
                    next.push(t);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn same_language(a: &Nfa, b: &Nfa, max_len: usize) -> bool {
        let syms = powerset(a.inputs());
        all_strings(&syms, max_len).iter().all(|s| accepts(a, s).unwrap() == accepts(b, s).unwrap())
    }

    #[test]
    fn self_loop_is_split_across_two_states() {
        // q0 -[a]-> q1, q1 -[b]-> q1, q1 -[a]-> q2 (accepting)
        let m = nfa(&["q0", "q1", "q2"], &["a", "b"], "q0", &["q2"], &[("q0", "a", "q1"), ("q1", "b", "q1"), ("q1", "a", "q2")]);
        let (out, report) = remove_self_loops(&m);
        assert_eq!(report.removed_self_loops, 1);
        let copy = &report.duplicated_states[&"q1".parse::<StateId>().unwrap()];
        assert_eq!(copy.as_str(), "q1'");
        assert!(out.transitions().iter().all(|t| !t.is_self_loop()));
        let q1: StateId = "q1".parse().unwrap();
        let b = Symbol::from_names(["b"]).unwrap();
        assert!(out.successors(&q1, &b).any(|r| r == copy));
        assert!(out.successors(copy, &b).any(|r| r == &q1));
        assert!(out.states().len() <= 2 * m.states().len());
        assert!(same_language(&m, &out, 4));
    }

    #[test]
    fn accepting_copy_follows_original() {
        let m = nfa(&["s", "q"], &["a"], "s", &["q"], &[("s", "a", "q"), ("q", "a", "q")]);
        let (out, report) = remove_self_loops(&m);
        let copy = report.duplicated_states.values().next().unwrap();
        assert!(out.is_accepting(copy));
        assert!(same_language(&m, &out, 5));
    }

    #[test]
    fn loop_free_input_is_a_fixed_point() {
        let m = fig1_automaton();
        let (out, report) = remove_self_loops(&m);
        assert_eq!(out, m);
        assert!(report.is_noop());
        assert_eq!(restrict_founded_start(&m), m);
        assert_eq!(prune_unreachable(&m), m);
    }

    #[test]
    fn dead_empty_start_transition_is_removed() {
        let m = nfa(
            &["s", "dead", "q"],
            &["a"],
            "s",
            &["q"],
            &[("s", "", "dead"), ("s", "a", "q"), ("dead", "a", "dead")],
        );
        assert!(is_founded(&m));
        let out = restrict_founded_start(&m);
        assert_eq!(out.transitions().len(), 2);
        assert_eq!(out.states(), m.states());
        assert!(same_language(&m, &out, 4));
    }

    #[test]
    fn pruning_keeps_start_and_drops_isolated() {
        let m = nfa(&["s", "u"], &["a"], "s", &[], &[]);
        let out = prune_unreachable(&m);
        assert_eq!(out.states().len(), 1);
        assert!(out.states().contains(m.start()));
    }

    #[test]
    fn foundedness() {
        assert!(is_founded(&fig1_automaton()));
        let leading_empty = nfa(&["s", "p", "q"], &["a"], "s", &["q"], &[("s", "", "p"), ("p", "a", "q")]);
        assert!(!is_founded(&leading_empty));
        assert_eq!(founded_witness(&leading_empty).unwrap().to_string(), "[];[a]");
        let eps = nfa(&["s"], &["a"], "s", &["s"], &[("s", "a", "s")]);
        assert!(!is_founded(&eps));
        assert_eq!(founded_witness(&eps), Some(InputString::empty()));
        assert_eq!(founded_witness(&fig1_automaton()), None);
    }

    #[test]
    fn clean_rejects_unfounded_with_witness() {
        let eps = nfa(&["s"], &["a"], "s", &["s"], &[("s", "a", "s")]);
        match clean(&eps) {
            Err(Error::Validation(msg)) => assert!(msg.contains("empty string")),
            other => panic!("expected validation error, got {other:?}"),
        }
        let leading_empty = nfa(&["s", "p", "q"], &["a"], "s", &["q"], &[("s", "", "p"), ("p", "a", "q")]);
        match clean(&leading_empty) {
            Err(Error::Validation(msg)) => assert!(msg.contains("[];[a]"), "{msg}"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn clean_fig1_is_identity() {
        let (out, report) = clean(&fig1_automaton()).unwrap();
        assert_eq!(out, fig1_automaton());
        assert!(report.is_noop());
        assert!(is_clean(&out));
    }

    #[test]
    fn clean_two_state_with_loop_grows_by_one() {
        // {a b^n : n >= 0}
        let m = nfa(&["s", "q"], &["a", "b"], "s", &["q"], &[("s", "a", "q"), ("q", "b", "q")]);
        let (out, report) = clean(&m).unwrap();
        assert_eq!(out.states().len(), 3);
        assert_eq!(report.duplicated_states.len(), 1);
        assert!(is_clean(&out));
        assert!(same_language(&m, &out, 4));
    }

    #[test]
    fn clean_detects_each_violation() {
        let looped = nfa(&["s", "q"], &["a"], "s", &["q"], &[("s", "a", "q"), ("q", "a", "q")]);
        assert!(!is_clean(&looped));
        let unreachable = nfa(&["s", "q", "u"], &["a"], "s", &["q"], &[("s", "a", "q")]);
        assert!(!is_clean(&unreachable));
        let empty_start = nfa(&["s", "d", "q"], &["a"], "s", &["q"], &[("s", "", "d"), ("s", "a", "q")]);
        assert!(!is_clean(&empty_start));
        assert!(is_clean(&fig1_automaton()));
    }

    #[test]
    fn convergence() {
        assert_eq!(is_converging(&fig1_automaton()), Convergence::Terminal(sigma(3)));
        assert!(matches!(is_converging(&bias_automaton()), Convergence::Diverging(_, _)));
        let single = nfa(&["s", "q"], &["a"], "s", &["q"], &[("s", "a", "q")]);
        assert_eq!(is_converging(&single), Convergence::Terminal(Symbol::from_names(["a"]).unwrap()));
        let empty = nfa(&["s", "q"], &["a"], "s", &[], &[("s", "a", "q")]);
        assert_eq!(is_converging(&empty), Convergence::Vacuous);
    }
}
