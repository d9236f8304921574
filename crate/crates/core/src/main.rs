//! Command-line front end for the Simon benchmark toolkit.
//!
//! Exit codes: 0 on success, 1 for usage/config errors, 2 when an
//! experiment or verification fails.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qsimon::bench::{
    self, cnot_distance_experiment, linear_fit_extrapolate, parse_report, recover_secret_end_to_end,
    report, BenchError, ExperimentConfig, ReportFormat,
};
use qsimon::circuit::{
    build_oracle_with_secret, build_simon_circuit_with_secret, classical_oracle_eval_with_secret,
    emit_qasm, Bitstring, OracleKind,
};
use qsimon::sim::{find_device, noise_model_from_device};
use qsimon::transpile::{layout_report, place, route, validate_routed, CouplingMap, PlacementStrategy};

#[derive(Parser)]
#[command(name = "qsimon", version, about = "Simon's-algorithm NISQ benchmark toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment grid described by a JSON config file.
    Run(RunArgs),
    /// Brute-force check an oracle construction: two-to-one with the
    /// expected period.
    OracleCheck(OracleCheckArgs),
    /// Place and route a Simon circuit, emitting routed OpenQASM 2.0 and a
    /// layout report.
    Transpile(TranspileArgs),
    /// Measure CNOT failure against control/target separation.
    CnotDistance(CnotDistanceArgs),
    /// Fit a line to an error-rate report and project it to a larger n.
    Extrapolate(ExtrapolateArgs),
    /// Re-render an error-rate report as CSV or JSON.
    Report(ReportArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also run end-to-end secret recovery with this attempt budget
    /// (single-n configs only) and print the outcome to stderr.
    #[arg(long)]
    recover: Option<usize>,
}

#[derive(Args)]
struct OracleCheckArgs {
    /// Register size (2..=16; the check enumerates all 2^n inputs).
    #[arg(long)]
    n: usize,
    /// simple | complex
    #[arg(long)]
    kind: String,
    /// Optional secret override, MSB-left bits (defaults to all ones).
    #[arg(long)]
    secret: Option<String>,
}

#[derive(Args)]
struct TranspileArgs {
    #[arg(long)]
    n: usize,
    /// simple | complex
    #[arg(long)]
    kind: String,
    /// "eagle127", "all-to-all", or a coupling-map JSON file path.
    #[arg(long)]
    map: String,
    /// greedy | trivial
    #[arg(long, default_value = "greedy")]
    placement: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write routed QASM here instead of stdout.
    #[arg(long)]
    qasm_out: Option<PathBuf>,
    /// Write the layout report JSON here instead of stderr.
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct CnotDistanceArgs {
    /// "eagle127" or a coupling-map JSON file path.
    #[arg(long, default_value = "eagle127")]
    map: String,
    /// Built-in device whose noise model drives the simulation.
    #[arg(long)]
    device: String,
    /// Swap error multiplier applied to router-inserted SWAPs.
    #[arg(long, default_value_t = 1.0)]
    multiplier: f64,
    #[arg(long)]
    control: usize,
    /// Comma-separated physical target qubits, e.g. "40,41,53".
    #[arg(long)]
    targets: String,
    #[arg(long, default_value_t = 4096)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExtrapolateArgs {
    /// CSV or JSON error-rate report.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 53)]
    target_n: usize,
}

#[derive(Args)]
struct ReportArgs {
    /// CSV or JSON error-rate report.
    #[arg(long)]
    input: PathBuf,
    /// csv | json
    #[arg(long)]
    format: String,
}

enum CliError {
    Usage(String),
    Experiment(String),
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        if e.is_usage_error() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Experiment(e.to_string())
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn experiment<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Experiment(e.to_string())
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_kind(s: &str) -> Result<OracleKind, CliError> {
    s.parse().map_err(usage)
}

fn parse_secret(n: usize, secret: &Option<String>) -> Result<Bitstring, CliError> {
    match secret {
        Some(text) => {
            let s: Bitstring = text.parse().map_err(usage)?;
            if s.len() != n {
                return Err(CliError::Usage(format!(
                    "secret length {} does not match --n {n}",
                    s.len()
                )));
            }
            Ok(s)
        }
        None => {
            if n < 2 {
                return Err(CliError::Usage("--n must be at least 2".to_string()));
            }
            Ok(Bitstring::ones(n))
        }
    }
}

fn load_map(source: &str, width_hint: usize) -> Result<CouplingMap, CliError> {
    match source {
        "eagle127" => CouplingMap::preset("eagle127").map_err(usage),
        "all-to-all" => CouplingMap::all_to_all(width_hint).map_err(usage),
        path => CouplingMap::load(&PathBuf::from(path)).map_err(usage),
    }
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let config = ExperimentConfig::load(&args.config)?;
    let format: ReportFormat = args.format.parse().map_err(CliError::from)?;
    let table = bench::run_experiment(&config)?;
    let text = report(&table, format)?;
    write_or_print(&args.out, &text)?;
    if let Some(budget) = args.recover {
        let outcome = recover_secret_end_to_end(&config, budget)?;
        eprintln!(
            "recovered secret {} in {} attempts ({} non-orthogonal rows)",
            outcome.secret, outcome.attempts_used, outcome.non_orthogonal_rows
        );
    }
    Ok(())
}

fn cmd_oracle_check(args: &OracleCheckArgs) -> Result<(), CliError> {
    if !(2..=16).contains(&args.n) {
        return Err(CliError::Usage(format!(
            "--n {} outside the brute-force range 2..=16",
            args.n
        )));
    }
    let kind = parse_kind(&args.kind)?;
    let secret = parse_secret(args.n, &args.secret)?;
    let oracle = build_oracle_with_secret(kind, &secret).map_err(usage)?;

    let mut preimages: HashMap<u64, Vec<u64>> = HashMap::new();
    for v in 0u64..1 << args.n {
        let x = Bitstring::from_index(v, args.n);
        let fx = classical_oracle_eval_with_secret(kind, &secret, &x).map_err(usage)?;
        preimages.entry(fx.value()).or_default().push(v);
    }
    let two_to_one = preimages.values().all(|xs| xs.len() == 2);
    let period_ok = preimages
        .values()
        .all(|xs| xs.len() == 2 && xs[0] ^ xs[1] == secret.value());

    println!(
        "oracle {} n={} secret={} gates={} two_to_one={} period_ok={}",
        kind.name(),
        args.n,
        secret,
        oracle.len(),
        two_to_one,
        period_ok
    );
    if two_to_one && period_ok {
        Ok(())
    } else {
        Err(CliError::Experiment(
            "oracle failed the two-to-one/period check".to_string(),
        ))
    }
}

fn cmd_transpile(args: &TranspileArgs) -> Result<(), CliError> {
    let kind = parse_kind(&args.kind)?;
    let secret = parse_secret(args.n, &None)?;
    let circuit = build_simon_circuit_with_secret(kind, &secret).map_err(usage)?;
    let map = load_map(&args.map, circuit.width())?;
    let strategy: PlacementStrategy = args.placement.parse().map_err(usage)?;
    let layout = place(&circuit, &map, strategy, args.seed).map_err(experiment)?;
    let routed = route(&circuit, &map, &layout).map_err(experiment)?;
    validate_routed(&routed.circuit, &map).map_err(experiment)?;

    write_or_print(&args.qasm_out, &emit_qasm(&routed.circuit))?;
    let report = layout_report(&routed, &map);
    let mut report_json =
        serde_json::to_string_pretty(&report).expect("layout report serializes");
    report_json.push('\n');
    match &args.report_out {
        Some(p) => std::fs::write(p, &report_json)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => eprint!("{report_json}"),
    }
    eprintln!(
        "routed n={} {} onto {} qubits: {} inserted swaps, {} active, {} idle",
        args.n,
        kind.name(),
        map.num_qubits(),
        routed.inserted_swap_count,
        report.active.len(),
        report.idle.len()
    );
    Ok(())
}

fn cmd_cnot_distance(args: &CnotDistanceArgs) -> Result<(), CliError> {
    let map = load_map(&args.map, 0)?;
    let device = find_device(&args.device).map_err(usage)?;
    let model = noise_model_from_device(&device, args.multiplier).map_err(usage)?;
    let targets: Vec<usize> = args
        .targets
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad --targets list: {e}")))?;
    if targets.is_empty() {
        return Err(CliError::Usage("no targets given".to_string()));
    }
    let rows = cnot_distance_experiment(&map, &model, args.control, &targets, args.shots, args.seed)?;
    println!("target,distance,shots,observed_failure,predicted_failure");
    for r in rows {
        println!(
            "{},{},{},{},{}",
            r.target, r.distance, r.shots, r.observed_failure, r.predicted_failure
        );
    }
    Ok(())
}

fn cmd_extrapolate(args: &ExtrapolateArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.input.display())))?;
    let table = parse_report(&text)?;
    let fit = linear_fit_extrapolate(&table, args.target_n)?;
    let mut out = serde_json::to_string_pretty(&fit).expect("fit serializes");
    out.push('\n');
    print!("{out}");
    Ok(())
}

fn cmd_report(args: &ReportArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.input.display())))?;
    let table = parse_report(&text)?;
    let format: ReportFormat = args.format.parse().map_err(CliError::from)?;
    print!("{}", report(&table, format)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
        Command::Transpile(args) => cmd_transpile(args),
        Command::CnotDistance(args) => cmd_cnot_distance(args),
        Command::Extrapolate(args) => cmd_extrapolate(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Experiment(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
