//! Identifiers, symbols of the powerset alphabet, and input strings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_token(what: &str, s: &str) -> Result<()> {
    if s.is_empty() {
        return Err(Error::Parse(format!("{what} must be nonempty")));
    }
    if s.chars().any(char::is_whitespace) {
        return Err(Error::Parse(format!("{what} {s:?} contains whitespace")));
    }
    Ok(())
}

macro_rules! token_newtype {
    ($(#[$meta:meta])* $name:ident, $what:literal) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(s: impl Into<String>) -> Result<Self> {
                let s = s.into();
                check_token($what, &s)?;
                Ok($name(s))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                $name::new(s)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                $name::new(s).map_err(serde::de::Error::custom)
            }
        }
    };
}

token_newtype!(
    /// Name of an input, output, or auxiliary neuron.
    NeuronId,
    "neuron identifier"
);

token_newtype!(
    /// Name of an automaton state.
    StateId,
    "state identifier"
);

/// One letter of the powerset alphabet: the set of input neurons active at
/// one time step. Ordered lexicographically on the sorted members.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(BTreeSet<NeuronId>);

impl Symbol {
    pub fn empty() -> Self {
        Symbol(BTreeSet::new())
    }

    pub fn new(members: BTreeSet<NeuronId>) -> Self {
        Symbol(members)
    }

    /// Builds a symbol from neuron names.
    pub fn from_names<'a, I: IntoIterator<Item = &'a str>>(names: I) -> Result<Self> {
        names
            .into_iter()
            .map(NeuronId::new)
            .collect::<Result<BTreeSet<_>>>()
            .map(Symbol)
    }

    pub fn members(&self) -> &BTreeSet<NeuronId> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: &NeuronId) -> bool {
        self.0.contains(id)
    }

    pub fn is_subset(&self, other: &Symbol) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &NeuronId> {
        self.0.iter()
    }

    /// Comma-joined sorted members, without brackets.
    pub fn joined(&self) -> String {
        self.0.iter().map(NeuronId::as_str).collect::<Vec<_>>().join(",")
    }

    fn parse_bracketed(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("symbol {s:?} must be written as [a,b,...]")))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(Symbol::empty());
        }
        inner
            .split(',')
            .map(|m| NeuronId::new(m.trim()))
            .collect::<Result<BTreeSet<_>>>()
            .map(Symbol)
    }
}

impl FromIterator<NeuronId> for Symbol {
    fn from_iter<T: IntoIterator<Item = NeuronId>>(iter: T) -> Self {
        Symbol(iter.into_iter().collect())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.joined())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Symbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Symbol::parse_bracketed(s)
    }
}

/// A finite sequence of symbols.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InputString(Vec<Symbol>);

impl InputString {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        InputString(symbols)
    }

    pub fn empty() -> Self {
        InputString(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// The first `i` symbols.
    pub fn prefix(&self, i: usize) -> InputString {
        InputString(self.0[..i.min(self.0.len())].to_vec())
    }

    /// The last `i` symbols.
    pub fn suffix(&self, i: usize) -> InputString {
        let n = self.0.len();
        InputString(self.0[n - i.min(n)..].to_vec())
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.0.iter()
    }

    /// Parses the literal form `[a,b];[b];[]`. An empty (or blank) literal is
    /// the empty string.
    pub fn parse_literal(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(InputString::empty());
        }
        s.split(';').map(Symbol::parse_bracketed).collect::<Result<Vec<_>>>().map(InputString)
    }

    /// Checks that every symbol only mentions neurons of `inputs`.
    pub fn check_within(&self, inputs: &BTreeSet<NeuronId>) -> Result<()> {
        for (i, sym) in self.0.iter().enumerate() {
            if let Some(bad) = sym.iter().find(|u| !inputs.contains(*u)) {
                return Err(Error::InputDomain(format!(
                    "symbol {} at position {} mentions undeclared input neuron {bad}",
                    sym,
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

impl From<Vec<Symbol>> for InputString {
    fn from(v: Vec<Symbol>) -> Self {
        InputString(v)
    }
}

impl FromIterator<Symbol> for InputString {
    fn from_iter<T: IntoIterator<Item = Symbol>>(iter: T) -> Self {
        InputString(iter.into_iter().collect())
    }
}

impl fmt::Display for InputString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(";"))
    }
}

impl fmt::Debug for InputString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

impl FromStr for InputString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        InputString::parse_literal(s)
    }
}

/// All subsets of `inputs`, in canonical symbol order.
pub fn powerset(inputs: &BTreeSet<NeuronId>) -> Vec<Symbol> {
    let items: Vec<&NeuronId> = inputs.iter().collect();
    assert!(items.len() < usize::BITS as usize, "powerset of {} neurons", items.len());
    let mut out: Vec<Symbol> = (0..1usize << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, u)| (*u).clone())
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// Positional index of a fixed input set, used to turn symbols into bit masks.
#[derive(Clone, Debug)]
pub struct InputIndex {
    ids: Vec<NeuronId>,
    pos: BTreeMap<NeuronId, usize>,
}

impl InputIndex {
    pub fn new(inputs: &BTreeSet<NeuronId>) -> Self {
        let ids: Vec<NeuronId> = inputs.iter().cloned().collect();
        let pos = ids.iter().cloned().enumerate().map(|(i, u)| (u, i)).collect();
        InputIndex { ids, pos }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn position(&self, id: &NeuronId) -> Option<usize> {
        self.pos.get(id).copied()
    }

    pub fn mask(&self, sym: &Symbol) -> Result<FixedBitSet> {
        let mut bits = FixedBitSet::with_capacity(self.ids.len());
        for u in sym.iter() {
            let i = self
                .position(u)
                .ok_or_else(|| Error::InputDomain(format!("undeclared input neuron {u} in {sym}")))?;
            bits.insert(i);
        }
        Ok(bits)
    }

    pub fn masks(&self, alpha: &InputString) -> Result<Vec<FixedBitSet>> {
        alpha.iter().map(|s| self.mask(s)).collect()
    }

    pub fn symbol(&self, bits: &FixedBitSet) -> Symbol {
        bits.ones().map(|i| self.ids[i].clone()).collect()
    }
}
