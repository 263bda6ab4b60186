//! Writes the built-in sample automata, bundles and networks as JSON files.
//!
//! Usage: `cargo run --example fixtures -- DIR`

use std::path::PathBuf;
use std::{env, fs};

use monoreg::cli::to_json;
use monoreg::fixtures::{bias_bundle, bias_network, fig1_automaton, fig1_bundle, fig2_network};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(env::args().nth(1).unwrap_or_else(|| "data".into()));
    fs::create_dir_all(&dir)?;
    let docs = [
        ("loop.json", to_json(&fig1_automaton())),
        ("loop-bundle.json", to_json(&fig1_bundle())),
        ("loop-net.json", to_json(&fig2_network())),
        ("bias-bundle.json", to_json(&bias_bundle())),
        ("bias-net.json", to_json(&bias_network())),
    ];
    for (name, text) in docs {
        fs::write(dir.join(name), text + "\n")?;
        println!("wrote {}", dir.join(name).display());
    }
    Ok(())
}
