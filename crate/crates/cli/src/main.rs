//! `krd`: decompose, verify and inspect semiautomata.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kr_core::covering::{covering_implies_simulation, hom_image_simulation, verify_covering, verify_hom_image};
use kr_core::io::{export_dot, parse_automaton, parse_witness, DecomposeReport, IoError, MonoidReport, Witness};
use kr_core::{
    krohn_rhodes_decompose, AutomatonError, CoveringError, KrOptions, Semiautomaton, DEFAULT_CLOSURE_CAP,
    DEFAULT_GROUP_CAP, DEFAULT_STATE_CAP,
};

const VERIFY_FAILED: u8 = 1;
const PARSE_ERROR: u8 = 2;
const RESOURCE_CAP: u8 = 3;
const IO_ERROR: u8 = 4;

#[derive(Parser)]
#[command(name = "krd", version, about = "Krohn-Rhodes decomposition with checkable covering witnesses")]
struct Cli {
    /// Seed for randomized steps. Every current command is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an automaton into simple grouplikes and two-state resets.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
        cap_group: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap_states: usize,
        /// Longest word checked by the simulation pass.
        #[arg(long, default_value_t = 6)]
        verify_len: usize,
        /// Also write the report as JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Build subtrees on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Check a covering or hom-image witness between two automata.
    Verify {
        upper: PathBuf,
        lower: PathBuf,
        witness: PathBuf,
        #[arg(long, default_value_t = 6)]
        len: usize,
    },
    /// Print the transition monoid with witness words and its table.
    Monoid {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Print the automaton graph in DOT.
    ExportDot {
        file: PathBuf,
        /// One edge per (state, symbol) even when endpoints coincide.
        #[arg(long)]
        no_merge: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(IO_ERROR, format!("{}: {e}", path.display())))
}

fn load_automaton(path: &Path) -> Result<Semiautomaton, Failure> {
    parse_automaton(&read(path)?).map_err(|e| Failure::new(PARSE_ERROR, format!("{}: {e}", path.display())))
}

fn decompose(file: &Path, options: KrOptions, verify_len: usize, out: Option<&Path>, json: bool) -> Outcome {
    let a = load_automaton(file)?;
    let tree = krohn_rhodes_decompose(&a, &options).map_err(|e| {
        let code = if e.is_cap() { RESOURCE_CAP } else { VERIFY_FAILED };
        Failure::new(code, e.to_string())
    })?;
    let violation = tree.verify(verify_len).err().map(|e| e.to_string());
    let report = DecomposeReport {
        tree: tree.report(),
        verify_len,
        verified: violation.is_none(),
        violation,
    };
    let text = report.to_json();
    if let Some(path) = out {
        fs::write(path, &text).map_err(|e| Failure::new(IO_ERROR, format!("{}: {e}", path.display())))?;
    }
    if json {
        print!("{text}");
    } else {
        print!("{}", report.to_text());
    }
    if let Some(v) = &report.violation {
        return Err(Failure::new(VERIFY_FAILED, format!("verification failed: {v}")));
    }
    if !report.tree.complete {
        return Err(Failure::new(RESOURCE_CAP, "incomplete: raw components remain"));
    }
    Ok(())
}

fn verify(upper: &Path, lower: &Path, witness: &Path, len: usize) -> Outcome {
    let (u, l) = (load_automaton(upper)?, load_automaton(lower)?);
    let doc = parse_witness(&read(witness)?).map_err(|e| Failure::new(PARSE_ERROR, format!("{}: {e}", witness.display())))?;
    let resolved = doc.resolve(&u, &l).map_err(|e| match e {
        IoError::Covering(CoveringError::Invalid(v)) => Failure::new(VERIFY_FAILED, format!("verification failed: {v}")),
        e => Failure::new(PARSE_ERROR, format!("{}: {e}", witness.display())),
    })?;
    let failed = |e: kr_core::CoveringViolation| Failure::new(VERIFY_FAILED, format!("verification failed: {e}"));
    match &resolved {
        Witness::Covering(w) => {
            verify_covering(w).map_err(failed)?;
            covering_implies_simulation(w, len).map_err(failed)?;
        }
        Witness::HomImage(w) => {
            verify_hom_image(w).map_err(failed)?;
            hom_image_simulation(w, len).map_err(failed)?;
        }
    }
    println!("verified: {} witness, words up to length {len}", doc.kind);
    Ok(())
}

fn monoid(file: &Path, cap: usize, json: bool) -> Outcome {
    let a = load_automaton(file)?;
    let t = a.transition_monoid(cap).map_err(|e| match e {
        AutomatonError::Algebra(e) => Failure::new(RESOURCE_CAP, e.to_string()),
        e => Failure::new(PARSE_ERROR, e.to_string()),
    })?;
    let report = MonoidReport::new(&a, &t);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let _ = cli.seed;
    let outcome = match cli.command {
        Command::Decompose {
            file,
            cap_group,
            cap_states,
            verify_len,
            out,
            json,
            serial,
        } => {
            let options = KrOptions {
                cap_group,
                cap_states,
                parallel: !serial,
            };
            decompose(&file, options, verify_len, out.as_deref(), json)
        }
        Command::Verify {
            upper,
            lower,
            witness,
            len,
        } => verify(&upper, &lower, &witness, len),
        Command::Monoid { file, cap, json } => monoid(&file, cap, json),
        Command::ExportDot { file, no_merge } => load_automaton(&file).map(|a| print!("{}", export_dot(&a, !no_merge))),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("krd: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

