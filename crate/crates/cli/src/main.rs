//! `loopy`: connectivity checks, sampling, enumeration and oracle sweeps for
//! loopy-graph degree sequences.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loopy_core::io::{read_sequences, sample_json, write_edge_list};
use loopy_core::mcmc::Sampler;
use loopy_core::oracle::{self, GraphOfGraphs, TheoremReport};
use loopy_core::{
    check_connectivity, ChainConfig, DegreeSequence, Epsilon, Error, LoopyGraph, Mode,
};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "loopy",
    version,
    about = "Degree sequences, double edge swaps and self-loops"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for the sampler's random stream.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide loopy-graphicality and double-swap connectivity.
    Check(SeqArgs),
    /// Draw graphs with the swap chain.
    Sample(SampleArgs),
    /// List every labeled loopy graph of a sequence.
    Enumerate(EnumerateArgs),
    /// Check the structural claims exhaustively for one sequence.
    Verify(VerifyArgs),
    /// Verify every loopy-graphical sequence up to a degree sum.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct SeqSource {
    /// Comma- or space-separated degrees.
    #[arg(long)]
    seq: Option<String>,

    /// File with one sequence per line; `#` starts a comment line.
    #[arg(long)]
    seq_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SeqArgs {
    #[command(flatten)]
    source: SeqSource,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    source: SeqSource,

    /// Number of samples.
    #[arg(long, default_value_t = 1)]
    count: usize,

    /// Triangle-loop proposal probability, or `auto`.
    #[arg(long, default_value = "0.05", value_parser = parse_epsilon)]
    epsilon: Epsilon,

    #[arg(long, value_enum, default_value_t = ModeArg::Vertex)]
    mode: ModeArg,

    /// Proposals before the first sample [default: 10 m ln m].
    #[arg(long)]
    burnin: Option<u64>,

    /// Proposals between samples [default: m].
    #[arg(long)]
    thin: Option<u64>,

    /// Print chain statistics as JSON on stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    source: SeqSource,

    /// Largest degree sum to enumerate.
    #[arg(long, default_value_t = 20)]
    bound: u64,

    /// Emit the graph of graphs in Graphviz format.
    #[arg(long)]
    dot: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: SeqSource,

    /// Largest degree sum to enumerate.
    #[arg(long, default_value_t = 20)]
    bound: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Largest degree sum in the sweep.
    #[arg(long)]
    max_sum: u64,

    /// Largest degree sum to enumerate.
    #[arg(long, default_value_t = 14)]
    bound: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Vertex,
    Stub,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Vertex => Mode::VertexUniform,
            ModeArg::Stub => Mode::StubUniform,
        }
    }
}

fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(Epsilon::Auto);
    }
    s.parse::<f64>()
        .map(Epsilon::Fixed)
        .map_err(|_| format!("expected a number or `auto`, got `{s}`"))
}

/// Exit 1 for a negative answer, 2 for bad input or I/O.
enum Failure {
    Verdict(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verdict(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn core_failure(e: Error) -> Failure {
    match e {
        Error::Parse(_) => Failure::Input(e.to_string()),
        other => Failure::Verdict(other.to_string()),
    }
}

type Outcome = Result<(), Failure>;

fn sequences(source: &SeqSource) -> Result<Vec<DegreeSequence>, Failure> {
    match (&source.seq, &source.seq_file) {
        (Some(s), _) => s
            .parse()
            .map(|ds| vec![ds])
            .map_err(|e: Error| Failure::Input(e.to_string())),
        (None, Some(path)) => {
            let file =
                File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let seqs =
                read_sequences(BufReader::new(file)).map_err(|e| Failure::Input(e.to_string()))?;
            if seqs.is_empty() {
                return Err(Failure::Input(format!("{}: no sequences", path.display())));
            }
            Ok(seqs)
        }
        (None, None) => Err(Failure::Input("a sequence is required".into())),
    }
}

fn check(ds: &DegreeSequence, format: Format, out: &mut dyn Write) -> Result<bool, Failure> {
    let Some(m_star) = ds.m_star().ok() else {
        let reason = ds
            .infeasibility()
            .map(|r| r.to_string())
            .unwrap_or_default();
        match format {
            Format::Json => {
                let v = json!({"sequence": ds, "loopy_graphical": false, "reason": reason});
                writeln!(out, "{v}")?;
            }
            Format::Text => {
                writeln!(out, "sequence: {ds}")?;
                writeln!(out, "loopy_graphical: false")?;
                writeln!(out, "reason: {reason}")?;
            }
        }
        eprintln!("{ds}: not loopy-graphical ({reason})");
        return Ok(false);
    };
    let report = check_connectivity(ds).map_err(core_failure)?;
    match format {
        Format::Json => {
            let v = json!({
                "sequence": ds,
                "loopy_graphical": true,
                "m_star": m_star,
                "status": report.status,
                "method": report.method,
                "detail": report.detail,
                "witness": report.witness,
            });
            writeln!(out, "{v}")?;
        }
        Format::Text => {
            writeln!(out, "sequence: {ds}")?;
            writeln!(out, "loopy_graphical: true")?;
            writeln!(out, "m_star: {m_star}")?;
            writeln!(out, "status: {:?}", report.status)?;
            writeln!(out, "method: {:?}", report.method)?;
            writeln!(out, "detail: {}", report.detail)?;
            if let Some(w) = &report.witness {
                writeln!(out, "witness:")?;
                write_edge_list(w, &mut *out)?;
            }
        }
    }
    Ok(true)
}

fn write_graph(g: &LoopyGraph, format: Format, first: bool, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", sample_json(g)),
        Format::Text => {
            if !first {
                writeln!(out)?;
            }
            write_edge_list(g, out)
        }
    }
}

fn sample(args: &SampleArgs, cli: &Cli, out: &mut dyn Write) -> Outcome {
    let seqs = sequences(&args.source)?;
    let [ds] = &seqs[..] else {
        return Err(Failure::Input(format!(
            "sample takes one sequence, got {}",
            seqs.len()
        )));
    };
    let cfg = ChainConfig {
        epsilon: args.epsilon,
        mode: args.mode.into(),
        seed: cli.seed,
        burn_in: args.burnin,
        thinning: args.thin,
        trace_loops: false,
    };
    let mut sampler = Sampler::new(ds, &cfg).map_err(core_failure)?;
    for i in 0..args.count {
        let g = sampler.next_sample().map_err(core_failure)?;
        write_graph(&g, cli.format, i == 0, out)?;
    }
    if args.stats {
        eprintln!("{}", serde_json::to_string(sampler.stats())?);
    }
    Ok(())
}

fn enumerate(args: &EnumerateArgs, format: Format, out: &mut dyn Write) -> Outcome {
    for ds in sequences(&args.source)? {
        let graphs = oracle::enumerate_with_bound(&ds, args.bound).map_err(core_failure)?;
        if args.dot {
            let gog = GraphOfGraphs::build(graphs, true).map_err(core_failure)?;
            write!(out, "{}", gog.to_dot(true))?;
            continue;
        }
        if format == Format::Text {
            writeln!(out, "# sequence {ds}: {} graphs", graphs.len())?;
        }
        for (i, g) in graphs.iter().enumerate() {
            write_graph(g, format, i == 0, out)?;
        }
    }
    Ok(())
}

fn write_report(r: &TheoremReport, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(r)?)?,
        Format::Text => {
            let c = &r.checks;
            let marks: String = [c.a, c.b, c.c, c.d, c.e, c.f, c.g]
                .iter()
                .zip('a'..='g')
                .map(|(&ok, name)| {
                    if ok {
                        name.to_string()
                    } else {
                        name.to_uppercase().to_string()
                    }
                })
                .collect();
            writeln!(
                out,
                "{}: graphs={} components={}/{} disconnected={} q1={} q2={} checks={} {}",
                r.sequence,
                r.n_graphs,
                r.components_double,
                r.components_triangle,
                r.disconnected,
                r.q1_count,
                r.q2_count,
                marks,
                if c.all() { "ok" } else { "FAILED" },
            )?;
        }
    }
    Ok(())
}

fn verify(args: &VerifyArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let mut failed = 0;
    for ds in sequences(&args.source)? {
        let report = oracle::verify_with_bound(&ds, args.bound).map_err(core_failure)?;
        failed += usize::from(!report.checks.all());
        write_report(&report, format, out)?;
    }
    if failed > 0 {
        return Err(Failure::Verdict(format!(
            "{failed} sequences failed a check"
        )));
    }
    Ok(())
}

fn sweep(args: &SweepArgs, format: Format, out: &mut dyn Write) -> Outcome {
    let run = || oracle::sweep(args.max_sum, args.bound);
    let reports = match std::env::var("LOOPY_THREADS").ok() {
        Some(n) => {
            let n: usize = n.parse().map_err(|_| {
                Failure::Input(format!("LOOPY_THREADS must be a thread count, got `{n}`"))
            })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Input(e.to_string()))?
                .install(run)
        }
        None => run(),
    }
    .map_err(core_failure)?;
    let failed = reports.iter().filter(|r| !r.checks.all()).count();
    for r in &reports {
        write_report(r, format, out)?;
    }
    if format == Format::Text {
        writeln!(out, "{} sequences, {failed} with violations", reports.len())?;
    }
    if failed > 0 {
        return Err(Failure::Verdict(format!(
            "{failed} sequences failed a check"
        )));
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    let sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(
            File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    let result = match &cli.command {
        Command::Check(args) => {
            let mut all_graphical = true;
            for ds in sequences(&args.source)? {
                all_graphical &= check(&ds, cli.format, &mut out)?;
            }
            if all_graphical {
                Ok(())
            } else {
                Err(Failure::Verdict(String::new()))
            }
        }
        Command::Sample(args) => sample(args, cli, &mut out),
        Command::Enumerate(args) => enumerate(args, cli.format, &mut out),
        Command::Verify(args) => verify(args, cli.format, &mut out),
        Command::Sweep(args) => sweep(args, cli.format, &mut out),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Verdict(msg) | Failure::Input(msg)) = &f;
            if !msg.is_empty() {
                eprintln!("loopy: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
