use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use crofton_cli::{run, Command, Failure, JobSpec};

#[derive(Parser)]
#[command(name = "crofton", version, about = "Exact l1 embeddings of planar point sets via the Crofton formula")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Model {
    /// Override the file's geometry: euclidean, minkowski or klein.
    #[arg(long)]
    geometry: Option<String>,
    /// Minkowski exponent, 1.1 <= p <= 16.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Args)]
struct Io {
    /// Point file (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    model: Model,
}

#[derive(Args)]
struct GraphSource {
    /// Use the built-in graph B_n.
    #[arg(long)]
    bn: Option<usize>,
    /// Graph file (JSON).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cut decomposition and l1 coordinates of a point set.
    Embed {
        #[command(flatten)]
        io: Io,
        /// Relative residual tolerance (default 1e-9, or 1e-7 for klein).
        #[arg(long)]
        tolerance: Option<f64>,
        /// Perturbation bounds as fractions of the diameter, for inputs with
        /// collinear triples.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        drop_zero_cuts: bool,
        /// Include one separating line per cut.
        #[arg(long)]
        emit_witness_lines: bool,
    },
    /// Check an embedding file against the point set.
    Verify {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// List the separation classes with their extremal segments and weights.
    Classes {
        #[command(flatten)]
        io: Io,
    },
    /// Move points into general position.
    Perturb {
        #[command(flatten)]
        io: Io,
        /// Every point moves by less than epsilon / 2.
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the step log here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search a graph for a non-convex interval.
    GraphCheck {
        #[command(flatten)]
        graph: GraphSource,
    },
    /// Shortcut ratios on regular polygon faces.
    DistortionCheck {
        #[command(flatten)]
        graph: GraphSource,
        /// Face sizes, e.g. 3,4,13.
        #[arg(long, value_delimiter = ',')]
        faces: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quick end-to-end checks.
    Selftest {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn with_io(spec: &mut JobSpec, io: Io) {
    spec.input = Some(io.input);
    spec.output = io.output;
    spec.geometry = io.model.geometry;
    spec.p = io.model.p;
}

fn with_graph(spec: &mut JobSpec, g: GraphSource) {
    spec.bn = g.bn;
    spec.input = g.input;
    spec.output = g.output;
}

fn job(cmd: Cmd) -> JobSpec {
    match cmd {
        Cmd::Embed { io, tolerance, schedule, seed, drop_zero_cuts, emit_witness_lines } => {
            let mut s = JobSpec::new(Command::Embed);
            with_io(&mut s, io);
            s.tolerance = tolerance;
            s.schedule = schedule;
            s.seed = seed;
            s.drop_zero_cuts = drop_zero_cuts;
            s.emit_witness_lines = emit_witness_lines;
            s
        }
        Cmd::Verify { io, embedding, tolerance } => {
            let mut s = JobSpec::new(Command::Verify);
            with_io(&mut s, io);
            s.embedding = Some(embedding);
            s.tolerance = tolerance;
            s
        }
        Cmd::Classes { io } => {
            let mut s = JobSpec::new(Command::Classes);
            with_io(&mut s, io);
            s
        }
        Cmd::Perturb { io, epsilon, seed, report } => {
            let mut s = JobSpec::new(Command::Perturb);
            with_io(&mut s, io);
            s.epsilon = Some(epsilon);
            s.seed = seed;
            s.report = report;
            s
        }
        Cmd::GraphCheck { graph } => {
            let mut s = JobSpec::new(Command::GraphCheck);
            with_graph(&mut s, graph);
            s
        }
        Cmd::DistortionCheck { graph, faces, samples, seed } => {
            let mut s = JobSpec::new(Command::DistortionCheck);
            with_graph(&mut s, graph);
            s.faces = faces;
            s.samples = samples;
            s.seed = seed;
            s
        }
        Cmd::Selftest { output } => {
            let mut s = JobSpec::new(Command::Selftest);
            s.output = output;
            s
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&job(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(e) => eprintln!("error: {e:#}"),
                Failure::Invariant { message, diagnostic } => {
                    eprintln!("invariant violation: {message}");
                    eprintln!("{}", serde_json::to_string_pretty(diagnostic).unwrap_or_default());
                }
            }
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
