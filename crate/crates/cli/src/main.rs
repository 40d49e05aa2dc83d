use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use djsynth::dj::{self, ClassicalOutcome, DjOutcome};
use djsynth::report::{self, EntanglementSurvey, EnumerationReport, VerifyReport};
use djsynth::sim::sample_probabilities;
use djsynth::{Error, SynthesisReport, TruthTable, DEFAULT_TOL};

const EXIT_INPUT: u8 = 2;
const EXIT_PROMISE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

/// Compile and simulate refined Deutsch-Jozsa phase oracles.
#[derive(Parser)]
#[command(name = "djsynth", version)]
struct Cli {
    /// Numeric tolerance for verdicts and equivalence checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Seed for measurement sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a truth table into a phase-oracle circuit.
    Synth(TruthArgs),
    /// Run the Deutsch-Jozsa decision on a truth table.
    Run {
        #[command(flatten)]
        truth: TruthArgs,
        #[arg(long, value_enum, default_value_t = RunMode::Refined)]
        mode: RunMode,
        /// Sample the final register this many times.
        #[arg(long)]
        shots: Option<u64>,
    },
    /// Report every balanced-function class with its oracle.
    Enumerate {
        #[arg(short, long, default_value_t = 3)]
        n: usize,
    },
    /// Entanglement of the post-oracle state for every balanced class.
    Entangle {
        #[arg(short, long, default_value_t = 3)]
        n: usize,
    },
    /// Run the built-in self-checks.
    Verify {
        /// Shorthand for `--format json`.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TruthArgs {
    /// Truth table as a 0/1 string, index 0 first.
    #[arg(long)]
    truth: Option<String>,
    /// File with one truth table per line.
    #[arg(long)]
    truth_file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RunMode {
    Refined,
    Original,
    Classical,
}

/// A command's rendered output plus the exit code it earned.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::PromiseViolation => EXIT_PROMISE,
        _ => EXIT_INPUT,
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn read_truths(args: &TruthArgs) -> anyhow::Result<(Vec<String>, bool)> {
    match (&args.truth, &args.truth_file) {
        (Some(t), _) => Ok((vec![t.trim().to_string()], false)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let lines = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect();
            Ok((lines, true))
        }
        (None, None) => unreachable!("clap enforces one source"),
    }
}

/// Per-input result: a serializable value for JSON plus its table rendering.
type Item = (serde_json::Value, String);

/// Processes each truth table independently. The exit code is that of the
/// first failure.
fn for_each_truth(
    args: &TruthArgs,
    format: Format,
    mut handle: impl FnMut(&TruthTable) -> Result<Item, Error>,
) -> anyhow::Result<Output> {
    let (inputs, many) = read_truths(args)?;
    let mut code = 0;
    let mut values = Vec::new();
    let mut text = String::new();
    for input in &inputs {
        let result = input.parse::<TruthTable>().and_then(|t| handle(&t));
        match result {
            Ok((value, table)) => {
                values.push(value);
                if many && !text.is_empty() {
                    text.push('\n');
                }
                text.push_str(&table);
            }
            Err(e) => {
                eprintln!("error: {input}: {e}");
                if code == 0 {
                    code = exit_code_for(&e);
                }
                values.push(serde_json::json!({ "truth_table": input, "error": e.to_string() }));
            }
        }
    }
    let text = match format {
        Format::Json if many => to_json(&values)?,
        Format::Json => match values.into_iter().next() {
            Some(v) if code == 0 => to_json(&v)?,
            _ => String::new(),
        },
        Format::Table => text,
    };
    Ok(Output { text, code })
}

fn synth_item(t: &TruthTable) -> Result<Item, Error> {
    let r = SynthesisReport::new(t);
    let mut s = String::new();
    let _ = writeln!(s, "truth table   {}", r.truth_table);
    let _ = writeln!(s, "anf           {}", r.anf);
    if let Some(ty) = r.construction_type {
        let _ = writeln!(s, "type          {ty}");
    }
    let c = r.counts;
    let _ = writeln!(
        s,
        "gates         z={} cz={} ccz={} h={}",
        c.phase_flip, c.controlled_phase, c.multi_controlled_z, c.hadamard
    );
    let _ = writeln!(s, "global sign   {:+}", r.global_sign());
    s.push_str(&r.circuit.emit_text());
    let value = serde_json::to_value(&r).expect("report serializes");
    Ok((value, s))
}

#[derive(Serialize)]
struct RunRecord<'a> {
    truth_table: &'a TruthTable,
    #[serde(flatten)]
    outcome: RunKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    histogram: Option<BTreeMap<String, u64>>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum RunKind {
    Quantum(DjOutcome),
    Classical(ClassicalOutcome),
}

fn run_item(
    t: &TruthTable,
    mode: RunMode,
    shots: Option<u64>,
    seed: u64,
    tol: f64,
) -> Result<Item, Error> {
    let mut s = String::new();
    let _ = writeln!(s, "truth table     {t}");
    let outcome = match mode {
        RunMode::Classical => {
            let o = dj::classical_decide(t)?;
            let _ = writeln!(s, "mode            classical");
            let _ = writeln!(s, "verdict         {}", o.verdict);
            let _ = writeln!(s, "queries         {}", o.queries_used);
            RunKind::Classical(o)
        }
        RunMode::Refined | RunMode::Original => {
            let o = if mode == RunMode::Refined {
                dj::run_refined(t, tol)?
            } else {
                dj::run_original(t, tol)?
            };
            let _ = writeln!(
                s,
                "mode            {}",
                serde_json::to_value(o.mode)
                    .expect("mode")
                    .as_str()
                    .unwrap_or("")
            );
            let _ = writeln!(s, "verdict         {}", o.verdict);
            let _ = writeln!(s, "zero amplitude  {}", clean(o.zero_amplitude, tol));
            let _ = writeln!(s, "queries         {}", o.queries_used);
            if let Some(p) = o.working_qubit_purity {
                let _ = writeln!(s, "working purity  {}", clean(p, tol));
            }
            RunKind::Quantum(o)
        }
    };
    let histogram = match (shots, &outcome) {
        (Some(_), RunKind::Classical(_)) => {
            return Err(Error::Parse {
                line: 0,
                message: "--shots needs a quantum mode".into(),
            })
        }
        (Some(shots), RunKind::Quantum(o)) => {
            let hist = sample_probabilities(&o.final_probabilities, shots, seed)?;
            let width = t.n();
            let named: BTreeMap<String, u64> = hist
                .into_iter()
                .map(|(i, c)| (format!("{i:0width$b}"), c))
                .collect();
            for (k, v) in &named {
                let _ = writeln!(s, "  |{k}>  {v}");
            }
            Some(named)
        }
        (None, _) => None,
    };
    let record = RunRecord {
        truth_table: t,
        outcome,
        histogram,
    };
    Ok((
        serde_json::to_value(&record).expect("run record serializes"),
        s,
    ))
}

/// Snaps values within `tol` of an integer, so `-1e-17` prints as `0`.
fn clean(x: f64, tol: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= tol {
        r + 0.0
    } else {
        x
    }
}

fn enumerate_table(r: &EnumerationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "n = {}: {} balanced functions, {} classes",
        r.n, r.total_balanced, r.classes
    );
    if !r.type_counts.is_empty() {
        let counts: Vec<String> = r
            .type_counts
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(s, "types: {}", counts.join(" "));
        for (ty, dist) in r.phase_flip_distribution() {
            let parts: Vec<String> = dist.iter().map(|(z, c)| format!("{z}z:{c}")).collect();
            let _ = writeln!(s, "  {ty} phase-flip counts: {}", parts.join(" "));
        }
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:>3}  {:<width$}  {:<6} {:>2} {:>2} {:>3}  {:<9}  anf",
        "#",
        "f",
        "type",
        "z",
        "cz",
        "ccz",
        "state",
        width = 1 << r.n
    );
    for (i, row) in r.rows.iter().enumerate() {
        let ty = row
            .construction_type
            .map(|t| t.to_string())
            .unwrap_or_else(|| "-".into());
        let anf: Vec<String> = row.anf.iter().map(|m| m.to_string()).collect();
        let _ = writeln!(
            s,
            "{:>3}  {}  {:<6} {:>2} {:>2} {:>3}  {:<9}  {}",
            i + 1,
            row.truth_table,
            ty,
            row.counts.phase_flip,
            row.counts.controlled_phase,
            row.counts.multi_controlled_z,
            if row.fully_product {
                "product"
            } else {
                "entangled"
            },
            anf.join(" + ")
        );
    }
    s
}

fn survey_table(r: &EntanglementSurvey) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<width$}  {:<6} {:<22} state",
        "f",
        "type",
        "purities",
        width = 1 << r.n
    );
    for row in &r.rows {
        let ty = row
            .construction_type
            .map(|t| t.to_string())
            .unwrap_or_else(|| "-".into());
        let p: Vec<String> = row.purities.iter().map(|p| format!("{p:.3}")).collect();
        let _ = writeln!(
            s,
            "{}  {:<6} {:<22} {}",
            row.truth_table,
            ty,
            p.join(" "),
            if row.fully_product {
                "product"
            } else {
                "entangled"
            }
        );
    }
    let _ = writeln!(s, "{} product, {} entangled", r.product, r.entangled);
    s
}

fn verify_table(r: &VerifyReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let _ = writeln!(
            s,
            "[{}] {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    match r.first_failure() {
        None => {
            let _ = writeln!(s, "{} suites passed", r.checks.len());
        }
        Some(c) => {
            let _ = writeln!(s, "verification failed: {}", c.name);
        }
    }
    s
}

fn execute(cli: &Cli) -> anyhow::Result<Output> {
    let fmt = cli.format;
    match &cli.command {
        Command::Synth(args) => for_each_truth(args, fmt, synth_item),
        Command::Run { truth, mode, shots } => for_each_truth(truth, fmt, |t| {
            run_item(t, *mode, *shots, cli.seed, cli.tol)
        }),
        Command::Enumerate { n } => match report::enumerate_report(*n, cli.tol) {
            Ok(r) => Ok(Output::ok(match fmt {
                Format::Json => to_json(&r)?,
                Format::Table => enumerate_table(&r),
            })),
            Err(e) => {
                eprintln!("error: {e}");
                Ok(Output {
                    text: String::new(),
                    code: EXIT_INPUT,
                })
            }
        },
        Command::Entangle { n } => {
            if *n != 3 {
                eprintln!("error: entanglement survey is defined for n = 3 only");
                return Ok(Output {
                    text: String::new(),
                    code: EXIT_INPUT,
                });
            }
            let r = report::entanglement_survey(*n, cli.tol)?;
            Ok(Output::ok(match fmt {
                Format::Json => to_json(&r)?,
                Format::Table => survey_table(&r),
            }))
        }
        Command::Verify { json } => {
            let r = report::verify(cli.tol);
            let text = if *json || fmt == Format::Json {
                to_json(&r)?
            } else {
                verify_table(&r)
            };
            if let Some(c) = r.first_failure() {
                eprintln!("verification failed: {}", c.name);
            }
            Ok(Output {
                text,
                code: if r.passed() { 0 } else { EXIT_VERIFY },
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &output.text)
            .with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{}", output.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INPUT);
    }
    ExitCode::from(output.code)
}
