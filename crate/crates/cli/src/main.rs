// SPDX-License-Identifier: Apache-2.0

//! `rtg`: route circuits with teleported gates, generate benchmarks and check results.
//!
//! Exit status is 0 on success, 1 when `verify` finds a mismatch and 2 on any
//! error; errors are printed to stderr as `{"error": {"kind": ..., "message": ...}}`.

mod report;
mod spec;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rtg_core::bench::{generate, BenchSpec};
use rtg_core::circuit::{format, Circuit};
use rtg_core::qasm::{export_qasm2, parse_qasm2_subset};
use rtg_core::rtg::{rtg_search, Mode, RtgConfig, TeleportKind};
use rtg_core::sim::verify_routed_equivalence;
use rtg_core::topology::{Layout, DEFAULT_MAX_PATH_LEN};
use rtg_core::TimingModel;

use report::{CircuitInfo, ReportInput, RunReport};
use spec::{parse_layout, parse_topology, LayoutsDoc, LAYOUTS_FORMAT_VERSION};

#[derive(Parser)]
#[command(name = "rtg", version, about = "Qubit routing with teleported gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Route a circuit, optionally through virtual edges, and write the results.
    Transpile(TranspileArgs),
    /// Write a benchmark circuit.
    Generate(GenerateArgs),
    /// Check a routed or expanded circuit against the original on every branch.
    Verify(VerifyArgs),
    /// Coupling-map utilities.
    Topology {
        #[command(subcommand)]
        command: TopologyCommand,
    },
    /// Convert between the native JSON format (.json) and the QASM 2 subset (.qasm).
    Convert { input: PathBuf, output: PathBuf },
    /// Aggregate run reports into one CSV table.
    Table {
        /// Report files or directories containing `report.json`.
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TopologyCommand {
    /// Print or write a coupling map as a topology document.
    Emit {
        #[arg(long, default_value = "eagle127")]
        topology: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliMode {
    Baseline,
    Rtg,
    RtgNoise,
}

impl CliMode {
    fn name(self) -> &'static str {
        match self {
            Self::Baseline => "baseline",
            Self::Rtg => "rtg",
            Self::RtgNoise => "rtg-noise",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Native,
    Qasm2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Cnot,
    Cu,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Circuit file (.json native or .qasm subset).
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Benchmark `FAMILY:N[:SEED]`.
    #[arg(long)]
    bench: Option<String>,
}

#[derive(Args)]
struct TranspileArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "eagle127")]
    topology: String,
    #[arg(long, default_value = "identity")]
    layout: String,
    #[arg(long, value_enum, default_value = "rtg")]
    mode: CliMode,
    #[arg(long, default_value_t = 0.1)]
    t1q: f64,
    #[arg(long, default_value_t = 1.0)]
    t2q: f64,
    #[arg(long, default_value_t = 3.0)]
    tele_time_factor: f64,
    #[arg(long, default_value_t = 0.01)]
    p2q: f64,
    #[arg(long, default_value_t = 10.0)]
    tele_error_factor: f64,
    /// Router trials per subset.
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    #[arg(long, default_value_t = 3)]
    max_subset: usize,
    #[arg(long, default_value_t = 2)]
    reuse_limit: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_PATH_LEN)]
    max_path_len: usize,
    #[arg(long, default_value_t = 1)]
    closeness_radius: usize,
    #[arg(long, value_enum, default_value = "cu")]
    teleport_kind: KindArg,
    #[arg(long, default_value_t = 1.0)]
    w_d: f64,
    #[arg(long, default_value_t = 1.0)]
    w_e: f64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// `qasm2` additionally writes `.qasm` copies of the static circuits.
    #[arg(long, value_enum, default_value = "native")]
    format: OutputFormat,
}

#[derive(Args)]
struct GenerateArgs {
    /// Benchmark `FAMILY:N[:SEED]`.
    #[arg(long)]
    bench: String,
    /// QAOA rounds.
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, value_enum, default_value = "native")]
    format: OutputFormat,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    original: PathBuf,
    #[arg(long = "final")]
    final_circuit: PathBuf,
    /// Layouts document; identity placements when absent.
    #[arg(long)]
    layouts: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Structured failure printed on stderr.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new("usage", message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new("io", message)
    }
}

impl From<rtg_core::Error> for Failure {
    fn from(e: rtg_core::Error) -> Self {
        use rtg_core::Error as E;
        let kind = match &e {
            E::InvalidCircuit { .. } => "invalid_circuit",
            E::InvalidModel(_) => "invalid_model",
            E::InvalidTopology(_) => "invalid_topology",
            E::InvalidLayout(_) => "invalid_layout",
            E::OverlappingEdges { .. } => "overlapping_edges",
            E::RoutingInfeasible(_) => "routing_infeasible",
            E::Teleport(_) => "teleport",
            E::Expansion { .. } => "expansion",
            E::Simulation(_) => "simulation",
            E::BranchCap { .. } => "branch_cap",
            E::Bench(_) => "bench",
            E::Parse { .. } => "parse",
            E::Version { .. } => "format",
            E::Export(_) => "export",
            E::Json(_) => "format",
            E::Io(_) => "io",
        };
        let mut message = e.to_string();
        if let E::BranchCap { .. } = e {
            message.push_str("; exhaustive branch checking is refused, verify a smaller instance");
        }
        Self::new(kind, message)
    }
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: &'a Failure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Transpile(args) => transpile(args).map(|_| ExitCode::SUCCESS),
        Command::Generate(args) => generate_cmd(args).map(|_| ExitCode::SUCCESS),
        Command::Verify(args) => verify(args),
        Command::Topology {
            command: TopologyCommand::Emit { topology, out },
        } => emit_topology(&topology, out.as_deref()).map(|_| ExitCode::SUCCESS),
        Command::Convert { input, output } => convert(&input, &output).map(|_| ExitCode::SUCCESS),
        Command::Table { reports, out } => {
            table(&reports, out.as_deref()).map(|_| ExitCode::SUCCESS)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            let doc = serde_json::to_string(&ErrorDoc { error: &failure })
                .unwrap_or_else(|_| failure.message.clone());
            eprintln!("{doc}");
            ExitCode::from(2)
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::io(e.to_string()))?;
    write_text(path, &text)
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    let circuit = if path.extension().is_some_and(|e| e == "qasm") {
        parse_qasm2_subset(&text)?
    } else {
        format::from_json(&text)?
    };
    Ok(circuit)
}

fn write_circuit(path: &Path, circuit: &Circuit) -> Result<(), Failure> {
    let text = if path.extension().is_some_and(|e| e == "qasm") {
        export_qasm2(circuit)?
    } else {
        format::to_json(circuit)?
    };
    write_text(path, &text)
}

fn load_input(input: &InputArgs) -> Result<(Circuit, String), Failure> {
    match (&input.circuit, &input.bench) {
        (Some(path), None) => Ok((read_circuit(path)?, path.display().to_string())),
        (None, Some(b)) => {
            let spec: BenchSpec = b.parse()?;
            let source = format!("bench:{}:{}:{}", spec.family, spec.n, spec.seed);
            Ok((generate(&spec)?, source))
        }
        _ => Err(Failure::usage("give exactly one of --circuit or --bench")),
    }
}

fn transpile(args: TranspileArgs) -> Result<(), Failure> {
    let start = Instant::now();
    let (circuit, source) = load_input(&args.input)?;
    let (map, topology) = parse_topology(&args.topology)?;
    let layout = parse_layout(&args.layout, circuit.num_qubits)?;
    let model = TimingModel::from_factors(
        args.t1q,
        args.t2q,
        args.p2q,
        args.tele_time_factor,
        args.tele_error_factor,
    )?;
    let config = RtgConfig {
        mode: if args.mode == CliMode::RtgNoise {
            Mode::NoiseAware
        } else {
            Mode::Plain
        },
        max_subset_size: if args.mode == CliMode::Baseline {
            0
        } else {
            args.max_subset
        },
        reuse_limit: args.reuse_limit,
        closeness_radius: args.closeness_radius,
        max_path_len: args.max_path_len,
        trials_per_subset: args.seeds,
        base_seed: args.base_seed,
        w_d: args.w_d,
        w_e: args.w_e,
        teleport_kind: match args.teleport_kind {
            KindArg::Cnot => TeleportKind::Cnot,
            KindArg::Cu => TeleportKind::ControlledU,
        },
        ..RtgConfig::default()
    };
    let result = rtg_search(&circuit, &map, &layout, &model, &config)?;

    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::io(format!("{}: {e}", args.out.display())))?;
    let data = Some(layout.data_set().into_iter().collect::<Vec<_>>());
    let with_data = |c: &Circuit| Circuit {
        data_qubits: data.clone(),
        ..c.clone()
    };
    let circuits = [
        ("original", circuit.clone()),
        ("baseline", with_data(&result.baseline.routed.circuit)),
        ("routed", with_data(&result.best.routed.circuit)),
        ("expanded", with_data(&result.expanded)),
    ];
    let mut files = Vec::new();
    for (name, c) in &circuits {
        let file = format!("{name}.json");
        write_circuit(&args.out.join(&file), c)?;
        files.push(file);
        if args.format == OutputFormat::Qasm2 && c.is_static() && c.is_physical() {
            let file = format!("{name}.qasm");
            write_circuit(&args.out.join(&file), c)?;
            files.push(file);
        }
    }
    let layouts = LayoutsDoc {
        version: LAYOUTS_FORMAT_VERSION,
        initial: result.best.routed.initial_layout.mapping().to_vec(),
        final_: result.best.routed.final_layout.mapping().to_vec(),
        baseline_final: Some(result.baseline.routed.final_layout.mapping().to_vec()),
    };
    write_json(&args.out.join("layouts.json"), &layouts)?;
    write_text(&args.out.join("topology.json"), &result.map.to_json()?)?;
    files.extend(["layouts.json", "topology.json", "report.json"].map(String::from));

    let report = report::build(ReportInput {
        mode: args.mode.name(),
        circuit: CircuitInfo {
            source,
            num_qubits: circuit.num_qubits,
            num_gates: circuit.gates.len(),
        },
        topology,
        model: &model,
        config: &config,
        result: &result,
        files,
        wall_time_s: start.elapsed().as_secs_f64(),
    });
    write_json(&args.out.join("report.json"), &report)?;
    println!(
        "{}: d_t {} -> {}, depth {} -> {} expanded, {} virtual edge(s); wrote {}",
        report.circuit.source,
        report.metrics.baseline.temporal_depth,
        report.metrics.best.temporal_depth,
        report.metrics.baseline.depth,
        report.metrics.expanded.depth,
        report.virtual_edges.len(),
        args.out.display()
    );
    Ok(())
}

fn generate_cmd(args: GenerateArgs) -> Result<(), Failure> {
    let mut spec: BenchSpec = args.bench.parse()?;
    if let Some(rounds) = args.rounds {
        spec.rounds = rounds;
    }
    let circuit = generate(&spec)?;
    let text = match args.format {
        OutputFormat::Native => format::to_json(&circuit)?,
        OutputFormat::Qasm2 => export_qasm2(&circuit)?,
    };
    match args.out {
        Some(path) => write_text(&path, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    pass: bool,
    trials: usize,
    tol: f64,
    max_deviation: f64,
    branches_per_trial: usize,
    failures: &'a [String],
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let original = read_circuit(&args.original)?;
    let final_circuit = read_circuit(&args.final_circuit)?;
    let (initial, final_layout) = match &args.layouts {
        Some(path) => {
            let doc = LayoutsDoc::read(path)?;
            (Layout::new(doc.initial)?, Layout::new(doc.final_)?)
        }
        None => (
            Layout::identity(original.num_qubits),
            Layout::identity(original.num_qubits),
        ),
    };
    let r = verify_routed_equivalence(
        &original,
        &final_circuit,
        &initial,
        &final_layout,
        args.trials,
        args.tol,
        args.seed,
    )?;
    let summary = VerifySummary {
        pass: r.pass,
        trials: r.trials,
        tol: args.tol,
        max_deviation: r.max_deviation,
        branches_per_trial: r.branch_probabilities.first().map_or(0, Vec::len),
        failures: &r.failures,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&summary).map_err(|e| Failure::io(e.to_string()))?
    );
    Ok(if r.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn emit_topology(value: &str, out: Option<&Path>) -> Result<(), Failure> {
    let (map, _) = parse_topology(value)?;
    let text = map.to_json()?;
    match out {
        Some(path) => write_text(path, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn convert(input: &Path, output: &Path) -> Result<(), Failure> {
    let circuit = read_circuit(input)?;
    write_circuit(output, &circuit)
}

fn table(inputs: &[PathBuf], out: Option<&Path>) -> Result<(), Failure> {
    let mut reports = Vec::new();
    for path in inputs {
        let path = if path.is_dir() {
            path.join("report.json")
        } else {
            path.clone()
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
        let r: RunReport = serde_json::from_str(&text)
            .map_err(|e| Failure::new("format", format!("{}: {e}", path.display())))?;
        if r.version != report::REPORT_FORMAT_VERSION {
            return Err(Failure::new(
                "format",
                format!("{}: report version {}", path.display(), r.version),
            ));
        }
        reports.push(r);
    }
    match out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
            report::write_table(&reports, file)
        }
        None => report::write_table(&reports, std::io::stdout().lock()),
    }
}
