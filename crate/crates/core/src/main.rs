//! Command-line interface for D0L-system inference.
//!
//! Exit codes: 0 = system found, 1 = infeasible, 2 = usage or input error,
//! 3 = resource cap exceeded, 4 = unverified (non-exact backend).

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use lsys_infer::chargraph::CharacteristicGraph;
use lsys_infer::lsystem::{
    parse_sequence, parse_system, serialize_sequence, serialize_system, WordSequence,
};
use lsys_infer::pipeline::{
    self, ExactBackend, InferenceResult, Outcome, PipelineError, SatSource,
};
use lsys_infer::qaoa::QaoaParams;
use lsys_infer::qubo::{self, PenaltyConfig};
use lsys_infer::{gen, sat};

const EXIT_SYSTEM: u8 = 0;
const EXIT_INFEASIBLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_UNVERIFIED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "lsys-infer",
    version,
    about = "Infer deterministic context-free L-systems from string sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer a system compatible with a sequence, or prove infeasibility.
    Infer(InferArgs),
    /// Export the characteristic graph, QUBO matrix, or CNF encoding.
    Export(ExportArgs),
    /// Check a system against a sequence.
    Verify {
        /// Sequence file, one word per line.
        seq: PathBuf,
        /// System file: `axiom: <word>` followed by `<sym> -> <word>` rules.
        sys: PathBuf,
    },
    /// Generate a seeded random instance and its generating system.
    Gen(GenArgs),
    /// Decode an external SAT solver's model file into a system.
    Decode {
        seq: PathBuf,
        /// Model file: signed literals ending in 0, `v `-prefixed lines, or
        /// `s UNSATISFIABLE`.
        model: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    Exact,
    Qaoa,
    SatInternal,
}

#[derive(Args)]
struct SolverFlags {
    /// QAOA layer count; defaults to ceil(log2 n).
    #[arg(long)]
    p: Option<usize>,
    /// Penalty weight for the size-k constraint.
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    /// Measurement shots per evaluation.
    #[arg(long, default_value_t = 512)]
    shots: usize,
    /// Gradient-descent iterations.
    #[arg(long, default_value_t = 100)]
    iters: usize,
    /// Learning rate.
    #[arg(long, default_value_t = 0.05)]
    eta: f64,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-3)]
    fd_step: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// State-vector simulator size limit.
    #[arg(long, default_value_t = lsys_infer::qaoa::DEFAULT_QUBIT_CAP)]
    qubit_cap: usize,
    /// Optimize on sampled average costs instead of exact expectations.
    #[arg(long)]
    shot_based: bool,
}

impl SolverFlags {
    fn to_params(&self) -> QaoaParams {
        QaoaParams {
            p: self.p,
            lambda: self.lambda,
            shots: self.shots,
            iters: self.iters,
            eta: self.eta,
            fd_step: self.fd_step,
            seed: self.seed,
            qubit_cap: self.qubit_cap,
            shot_based: self.shot_based,
        }
    }
}

#[derive(Args)]
struct InferArgs {
    seq: PathBuf,
    #[arg(long, value_enum, default_value_t = BackendArg::Exact)]
    backend: BackendArg,
    /// Use generic branch-and-bound instead of clique backtracking (exact
    /// backend only).
    #[arg(long)]
    generic_mis: bool,
    /// Machine-readable report instead of prose.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    solver: SolverFlags,
}

#[derive(Args)]
#[group(id = "format", required = true, multiple = false)]
struct ExportFormat {
    /// Graphviz DOT with one cluster per clique.
    #[arg(long, group = "format")]
    dot: bool,
    /// QUBO matrix as JSON.
    #[arg(long, group = "format")]
    qubo: bool,
    /// DIMACS CNF.
    #[arg(long, group = "format")]
    cnf: bool,
    /// Vertices, edges, and k as JSON.
    #[arg(long, group = "format")]
    graph_json: bool,
}

#[derive(Args)]
struct ExportArgs {
    seq: PathBuf,
    #[command(flatten)]
    format: ExportFormat,
    /// Output file.
    #[arg(short, long)]
    out: PathBuf,
    /// Penalty weight recorded in QUBO exports.
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 2)]
    alphabet: usize,
    #[arg(long, default_value_t = 3)]
    max_succ: usize,
    #[arg(long, default_value_t = 2)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reject traces with words longer than this.
    #[arg(long, default_value_t = 60)]
    word_cap: usize,
    /// Output path prefix; writes `<prefix>.seq` and `<prefix>.sys`.
    #[arg(short, long, default_value = "instance")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Infer(args) => cmd_infer(args),
        Command::Export(args) => cmd_export(args),
        Command::Verify { seq, sys } => cmd_verify(&seq, &sys),
        Command::Gen(args) => cmd_gen(args),
        Command::Decode { seq, model } => cmd_decode(&seq, &model),
    }
}

fn read_sequence(path: &PathBuf) -> Result<WordSequence, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_sequence(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn pipeline_exit(err: PipelineError) -> Result<u8, String> {
    match err {
        PipelineError::Qaoa(_) | PipelineError::ResourceCap(_) => {
            eprintln!("error: {err}");
            Ok(EXIT_RESOURCE)
        }
        PipelineError::InvalidInput(_) | PipelineError::IncompatibleModel(_) => {
            Err(err.to_string())
        }
    }
}

fn report(result: InferenceResult, json: bool) -> u8 {
    if json {
        print!("{}", result.to_json());
        return match result.outcome {
            Outcome::System(_) => EXIT_SYSTEM,
            Outcome::Infeasible => EXIT_INFEASIBLE,
            Outcome::Unverified { .. } => EXIT_UNVERIFIED,
        };
    }
    match result.outcome {
        Outcome::System(sys) => {
            print!("{}", serialize_system(&sys));
            EXIT_SYSTEM
        }
        Outcome::Infeasible => {
            println!("INFEASIBLE");
            EXIT_INFEASIBLE
        }
        Outcome::Unverified { candidate, reason } => {
            println!("UNVERIFIED ({reason})");
            if let Some(sys) = candidate {
                print!("{}", serialize_system(&sys));
            }
            EXIT_UNVERIFIED
        }
    }
}

fn cmd_infer(args: InferArgs) -> Result<u8, String> {
    let theta = read_sequence(&args.seq)?;
    let outcome = match args.backend {
        BackendArg::Exact => {
            let backend = if args.generic_mis {
                ExactBackend::GenericMis
            } else {
                ExactBackend::Structured
            };
            pipeline::classical_d0l_solver(&theta, backend)
        }
        BackendArg::Qaoa => pipeline::quant_infer_d0l(&theta, &args.solver.to_params()),
        BackendArg::SatInternal => pipeline::sat_infer_d0l(&theta, SatSource::Internal),
    };
    match outcome {
        Ok(result) => Ok(report(result, args.json)),
        Err(err) => pipeline_exit(err),
    }
}

fn cmd_export(args: ExportArgs) -> Result<u8, String> {
    let theta = read_sequence(&args.seq)?;
    let g = CharacteristicGraph::build(&theta)
        .map_err(|e| format!("{}: {e}", args.seq.display()))?;
    let payload = if args.format.dot {
        g.to_dot()
    } else if args.format.qubo {
        let q = qubo::build_qubo(&g.to_graph());
        let cfg = PenaltyConfig { lambda: args.lambda, k: g.k() };
        q.to_json(&cfg)
    } else if args.format.cnf {
        let (formula, _) = sat::encode(&g);
        sat::write_dimacs(&formula)
    } else {
        g.to_json()
    };
    std::fs::write(&args.out, payload)
        .map_err(|e| format!("cannot write {}: {e}", args.out.display()))?;
    Ok(EXIT_SYSTEM)
}

fn cmd_verify(seq: &PathBuf, sys: &PathBuf) -> Result<u8, String> {
    let theta = read_sequence(seq)?;
    let text = std::fs::read_to_string(sys)
        .map_err(|e| format!("cannot read {}: {e}", sys.display()))?;
    let system = parse_system(&text).map_err(|e| format!("{}: {e}", sys.display()))?;
    if pipeline::verify(&theta, &system) {
        println!("COMPATIBLE");
        Ok(EXIT_SYSTEM)
    } else {
        println!("INCOMPATIBLE");
        Ok(EXIT_INFEASIBLE)
    }
}

fn cmd_gen(args: GenArgs) -> Result<u8, String> {
    let (sys, theta) =
        gen::gen_random_instance(args.alphabet, args.max_succ, args.steps, args.word_cap, args.seed)
            .map_err(|e| e.to_string())?;
    let seq_path = args.out.with_extension("seq");
    let sys_path = args.out.with_extension("sys");
    std::fs::write(&seq_path, serialize_sequence(&theta))
        .map_err(|e| format!("cannot write {}: {e}", seq_path.display()))?;
    std::fs::write(&sys_path, serialize_system(&sys))
        .map_err(|e| format!("cannot write {}: {e}", sys_path.display()))?;
    println!("{}", seq_path.display());
    println!("{}", sys_path.display());
    Ok(EXIT_SYSTEM)
}

fn cmd_decode(seq: &PathBuf, model: &PathBuf) -> Result<u8, String> {
    let theta = read_sequence(seq)?;
    let text = std::fs::read_to_string(model)
        .map_err(|e| format!("cannot read {}: {e}", model.display()))?;
    match pipeline::sat_infer_d0l(&theta, SatSource::Model(&text)) {
        Ok(result) => Ok(report(result, false)),
        Err(err) => pipeline_exit(err),
    }
}
