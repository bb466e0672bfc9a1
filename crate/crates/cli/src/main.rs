//! Command-line front end: fixture claims, single analyses, CSV export.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod analyze;
mod export;
mod params;
mod scenario;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::process::ExitCode;
use torsionlab::fixtures::{load_fixture, run_fixture_claims};

use analyze::{Failure, Op};
use export::LeafOptions;
use params::Params;
use scenario::{InputError, Target};

#[derive(Parser)]
#[command(name = "torsionlab", version, about = "Local dynamics of area-preserving planar maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: Option<String>,
    /// Built-in fixture name.
    #[arg(long)]
    fixture: Option<String>,
}

impl Source {
    fn load(&self) -> Result<Target, InputError> {
        match (&self.scenario, &self.fixture) {
            (Some(path), _) => Target::from_path(path),
            (None, Some(name)) => Target::from_fixture(name),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run or describe a built-in fixture.
    Fixture {
        name: String,
        #[arg(long, conflicts_with = "describe", required_unless_present = "describe")]
        claims: bool,
        #[arg(long)]
        describe: bool,
    },
    /// Run one operation against a scenario.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum)]
        op: Op,
        #[command(flatten)]
        params: Params,
    },
    /// Write leaves or an orbit as CSV.
    Export {
        #[command(flatten)]
        source: Source,
        /// Number of leaves to trace.
        #[arg(long, conflicts_with = "orbit", required_unless_present = "orbit")]
        leaves: Option<usize>,
        /// Orbit start, `x,y` or a named point.
        #[arg(long, requires = "steps", allow_hyphen_values = true)]
        orbit: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        out: String,
        #[command(flatten)]
        leaf: LeafOptions,
    },
}

/// Header shared by every JSON document on stdout.
fn envelope(command: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!("torsionlab"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m
}

struct Output {
    doc: Map<String, Value>,
    code: u8,
}

impl Output {
    fn ok(doc: Map<String, Value>) -> Self {
        Output { doc, code: 0 }
    }

    fn input_error(mut doc: Map<String, Value>, e: InputError) -> Self {
        eprintln!("torsionlab: {}: {}", e.name, e.message);
        doc.insert("error".into(), serde_json::to_value(&e).expect("error serializes"));
        Output { doc, code: 2 }
    }

    fn failure(doc: Map<String, Value>, f: Failure) -> Self {
        match f {
            Failure::Input(e) => Output::input_error(doc, e),
            Failure::Operation(e) => {
                let mut doc = doc;
                eprintln!("torsionlab: {}: {e}", e.name());
                doc.insert("error".into(), json!({ "name": e.name(), "message": e.to_string(), "detail": format!("{e:?}") }));
                Output { doc, code: 1 }
            }
        }
    }
}

fn configure_threads() -> Result<(), InputError> {
    let Ok(text) = std::env::var("TORSIONLAB_THREADS") else {
        return Ok(());
    };
    let n: usize =
        text.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
            InputError::new("BadEnvironment", format!("TORSIONLAB_THREADS must be an integer >= 1, got `{text}`"))
        })?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| InputError::new("BadEnvironment", e.to_string()))
}

fn fixture(name: &str, describe: bool) -> Output {
    let mut doc = envelope("fixture");
    let scenario = match load_fixture(name) {
        Ok(s) => s,
        Err(e) => return Output::input_error(doc, InputError::new(e.name(), e.to_string())),
    };
    if describe {
        doc.insert("scenario".into(), serde_json::to_value(&scenario).expect("scenario serializes"));
        return Output::ok(doc);
    }
    let report = run_fixture_claims(&scenario);
    let code = if report.all_passed { 0 } else { 1 };
    doc.insert("report".into(), serde_json::to_value(&report).expect("report serializes"));
    Output { doc, code }
}

fn analyze(source: &Source, op: Op, cli_params: Params) -> Output {
    let mut doc = envelope("analyze");
    let target = match source.load() {
        Ok(t) => t,
        Err(e) => return Output::input_error(doc, e),
    };
    let params = match target.presets.get(&op.key()) {
        Some(preset) => cli_params.over(preset),
        None => cli_params,
    };
    doc.insert("input".into(), json!({ "scenario": target.echo, "op": op, "params": params }));
    match analyze::run(&target, op, &params) {
        Ok(result) => {
            doc.insert("result".into(), result);
            Output::ok(doc)
        }
        Err(f) => Output::failure(doc, f),
    }
}

fn export(source: &Source, leaves: Option<usize>, orbit: Option<(&str, usize)>, out: &str, leaf: &LeafOptions) -> Output {
    let mut doc = envelope("export");
    let target = match source.load() {
        Ok(t) => t,
        Err(e) => return Output::input_error(doc, e),
    };
    let mut input = json!({ "scenario": target.echo, "out": out });
    let table = match (leaves, orbit) {
        (Some(n), _) => {
            input["leaves"] = json!({ "count": n, "around": leaf.around, "seed_radius": leaf.seed_radius, "step": leaf.step, "length": leaf.length });
            export::leaves(&target, n, leaf)
        }
        (None, Some((start, steps))) => {
            input["orbit"] = json!({ "start": start, "steps": steps });
            export::orbit(&target, start, steps)
        }
        (None, None) => unreachable!("clap requires --leaves or --orbit"),
    };
    doc.insert("input".into(), input);
    let table = match table {
        Ok(t) => t,
        Err(f) => return Output::failure(doc, f),
    };
    if let Err(e) = std::fs::write(out, &table.csv) {
        eprintln!("torsionlab: cannot write {out}: {e}");
        doc.insert("error".into(), json!({ "name": "Io", "message": format!("cannot write {out}: {e}") }));
        return Output { doc, code: 1 };
    }
    doc.insert("rows".into(), json!(table.rows));
    Output::ok(doc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match configure_threads() {
        Err(e) => Output::input_error(envelope("startup"), e),
        Ok(()) => match &cli.command {
            Command::Fixture { name, describe, .. } => fixture(name, *describe),
            Command::Analyze { source, op, params } => analyze(source, *op, params.clone()),
            Command::Export { source, leaves, orbit, steps, out, leaf } => {
                let orbit = orbit.as_deref().zip(*steps);
                export(source, *leaves, orbit, out, leaf)
            }
        },
    };
    let text = serde_json::to_string_pretty(&Value::Object(output.doc)).expect("json output");
    // A closed pipe downstream is the reader's choice, not an error here.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(output.code)
}
