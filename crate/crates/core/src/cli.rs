//! The `monoreg` command line.
//!
//! Exit codes: 0 ok, 1 parse error, 2 validation error, 3 failed
//! precondition, 4 conformance failure, 5 budget exceeded.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::automata::{clean, Nfa};
use crate::compiler::{
    compile_delay1, compile_preprocessor, compile_single_string, compile_zero_delay_converging, AutomatonBundle,
};
use crate::dot::{automaton_dot, network_dot};
use crate::error::{Error, Result};
use crate::extractor::extract_automaton;
use crate::network::{run as run_network, PositiveNetwork};
use crate::symbol::{InputString, NeuronId};
use crate::verifier::{verify_delay_with, verify_delay_sampled, BehaviorOracle, VerifyOptions};

pub const EXIT_CONFORMANCE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "monoreg", version, about = "Compile, simulate, extract and verify positive neural networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Remove self-loops, empty-symbol start transitions and unreachable states.
    Clean {
        input: PathBuf,
        /// Write the cleaned automaton here and print only the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile an automaton bundle (or, for `chain`, a string bundle) into a network.
    Compile {
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the activation trace of a network on a string like "[a,b];[b];[]".
    Simulate { net: PathBuf, string: String },
    /// Check that a network implements a bundle's behavior with a given delay.
    Verify {
        net: PathBuf,
        bundle: PathBuf,
        #[arg(long)]
        delay: usize,
        #[arg(long)]
        max_len: usize,
        /// Check this many random strings instead of all of them.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, requires = "samples")]
        seed: Option<u64>,
    },
    /// Extract the automaton of one output neuron.
    Extract {
        net: PathBuf,
        output: String,
        #[arg(long, default_value_t = 1 << 16)]
        state_budget: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an automaton or a network as Graphviz DOT.
    Dot {
        path: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Delay1,
    Preproc,
    Zero,
    Chain,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Auto,
    Net,
}

/// Input of `compile --mode chain`: one string literal per output.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StringBundle {
    inputs: BTreeSet<NeuronId>,
    outputs: Vec<StringEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StringEntry {
    neuron: NeuronId,
    string: String,
}

enum Outcome {
    Ok,
    ConformanceFailure,
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::ConformanceFailure) => EXIT_CONFORMANCE,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::Budget(_)) {
                let _ = writeln!(err, "hint: pass --samples N (and optionally --seed S) for sampled verification");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<Outcome> {
    match cmd {
        Command::Clean { input, out: path } => {
            let nfa: Nfa = read_json(&input)?;
            let (cleaned, report) = clean(&nfa)?;
            match path {
                Some(p) => {
                    write_file(&p, &to_json(&cleaned))?;
                    emit(out, &to_json(&report))?;
                }
                None => {
                    let doc = serde_json::json!({ "automaton": cleaned, "report": report });
                    emit(out, &render(doc))?;
                }
            }
        }
        Command::Compile { input, mode, out: path } => {
            let result = match mode {
                Mode::Chain => {
                    let doc: StringBundle = read_json(&input)?;
                    let mut strings = BTreeMap::new();
                    for e in doc.outputs {
                        let s = InputString::parse_literal(&e.string)?;
                        if strings.insert(e.neuron.clone(), s).is_some() {
                            return Err(Error::Validation(format!("output neuron {} listed twice", e.neuron)));
                        }
                    }
                    compile_single_string(&strings, &doc.inputs)?
                }
                _ => {
                    let bundle: AutomatonBundle = read_json(&input)?;
                    match mode {
                        Mode::Delay1 => compile_delay1(&bundle)?,
                        Mode::Preproc => compile_preprocessor(&bundle)?,
                        Mode::Zero => compile_zero_delay_converging(&bundle)?,
                        Mode::Chain => unreachable!(),
                    }
                }
            };
            write_or_emit(path.as_deref(), out, &render(result.to_json()))?;
        }
        Command::Simulate { net, string } => {
            let net = read_network(&net)?;
            let alpha = InputString::parse_literal(&string)?;
            let trace = run_network(&net, &alpha)?;
            for set in &trace.activations {
                writeln!(out, "{}", fmt_set(set)).map_err(io_error)?;
            }
            let fired: BTreeSet<NeuronId> = trace.last().intersection(net.outputs()).cloned().collect();
            writeln!(out, "output: {}", fmt_set(&fired)).map_err(io_error)?;
        }
        Command::Verify { net, bundle, delay, max_len, samples, seed } => {
            let net = read_network(&net)?;
            let bundle: AutomatonBundle = read_json(&bundle)?;
            let oracle = BehaviorOracle::from_bundle(&bundle)?;
            let result = match samples {
                Some(n) => verify_delay_sampled(&net, &oracle, delay, max_len, n, seed.unwrap_or(0))?,
                None => verify_delay_with(&net, &oracle, delay, max_len, &VerifyOptions::default())?,
            };
            emit(out, &to_json(&result))?;
            if !result.passed() {
                return Ok(Outcome::ConformanceFailure);
            }
        }
        Command::Extract { net, output, state_budget, out: path } => {
            let net = read_network(&net)?;
            let x = NeuronId::new(output)?;
            let nfa = extract_automaton(&net, &x, state_budget)?;
            write_or_emit(path.as_deref(), out, &to_json(&nfa))?;
        }
        Command::Dot { path, kind } => {
            let text = match kind {
                Kind::Auto => automaton_dot(&read_json::<Nfa>(&path)?),
                Kind::Net => network_dot(&read_network(&path)?),
            };
            out.write_all(text.as_bytes()).map_err(io_error)?;
        }
    }
    Ok(Outcome::Ok)
}

fn io_error(e: std::io::Error) -> Error {
    Error::InputDomain(format!("i/o error: {e}"))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InputDomain(format!("cannot read {}: {e}", path.display())))
}

fn parse_error(path: &Path, e: serde_json::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| parse_error(path, e))
}

/// Reads a network document, tolerating the metadata keys written by
/// `compile`.
pub fn read_network(path: &Path) -> Result<PositiveNetwork> {
    let mut v: Value = serde_json::from_str(&read_text(path)?).map_err(|e| parse_error(path, e))?;
    if let Some(obj) = v.as_object_mut() {
        for key in ["aux_count", "construction", "delay"] {
            obj.remove(key);
        }
    }
    serde_json::from_value(v).map_err(|e| parse_error(path, e))
}

/// Pretty JSON with object keys in sorted order.
pub fn to_json<T: Serialize>(v: &T) -> String {
    render(serde_json::to_value(v).expect("library types serialize to JSON"))
}

fn render(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&sorted(v)).expect("values serialize");
    s.push('\n');
    s
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let entries: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            Value::Object(entries.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(io_error)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InputDomain(format!("cannot write {}: {e}", path.display())))
}

fn write_or_emit(path: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => emit(out, text),
    }
}

fn fmt_set(set: &BTreeSet<NeuronId>) -> String {
    let names: Vec<&str> = set.iter().map(NeuronId::as_str).collect();
    format!("{{{}}}", names.join(","))
}
