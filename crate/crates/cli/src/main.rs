//! `pi2bench`: build nets, compute homology verdicts and run the reduction.
//!
//! Exit codes: 0 success, 2 bad usage, 3 I/O failure, 4 invalid input data.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pi2bench::homology::q_hat;
use pi2bench::machines::{halt_after, parse_program, sample_programs, ParseError, Program};
use pi2bench::netbuilder::{
    boundary_net, cumulative_net, punctured_layer, read_net, write_net, Dyadic, DyadicPoint,
    EpsNet, Method, NetError, NetStream, Puncture, SpaceTag, SquaredDistance,
};
use pi2bench::reduction::{fooling_program, Dovetailer, ReductionError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Machine(#[from] ParseError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            _ => 4,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "pi2bench",
    version,
    about = "Dyadic nets, cubical homology and a halting reduction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a cube, boundary or punctured net and write it as a point file.
    Net(NetArgs),
    /// Compute the Betti numbers of a net file and print the verdict.
    Homology(HomologyArgs),
    /// Run the dovetailed reduction on a machine.
    Reduce(ReduceArgs),
    /// Inspect the built-in machine library.
    #[command(subcommand)]
    Machines(MachinesCommand),
}

#[derive(Args, Debug)]
struct NetArgs {
    #[arg(long, default_value_t = 3)]
    dim: usize,
    #[arg(long)]
    level: u32,
    /// Keep only grid points on the cube's boundary.
    #[arg(long, conflicts_with_all = ["puncture", "switch"])]
    boundary: bool,
    /// Remove an open ball around the centre: `auto` picks the radius from
    /// the earlier layers, otherwise give d² as `n/d`.
    #[arg(long, value_name = "auto|N/D")]
    puncture: Option<String>,
    /// Level at which an `auto` puncture starts (default 0).
    #[arg(long)]
    switch: Option<u32>,
    /// Net file to write; without it the net goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HomologyArgs {
    #[arg(long)]
    net: PathBuf,
    /// Grid level for the complex; defaults to the level in the file header.
    #[arg(long)]
    level: Option<u32>,
    /// Include elapsed milliseconds in the output.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    /// Machine description file.
    #[arg(long, conflicts_with_all = ["sample", "fool"])]
    machine: Option<PathBuf>,
    /// Name of a built-in machine (see `machines list`).
    #[arg(long, conflicts_with = "fool")]
    sample: Option<String>,
    /// Use the machine that halts one step after the budget, and fail unless
    /// it is misclassified.
    #[arg(long)]
    fool: bool,
    #[arg(long, default_value_t = 0)]
    input: u64,
    /// Number of rounds M; the final net has level M.
    #[arg(long)]
    budget: u32,
    /// Machine steps per round.
    #[arg(long, default_value_t = 1000)]
    quantum: u64,
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Step limit for the ground-truth simulation.
    #[arg(long, conflicts_with = "no_truth")]
    truth_steps: Option<u64>,
    /// Skip the ground-truth simulation.
    #[arg(long)]
    no_truth: bool,
    /// Also write the final net to this file.
    #[arg(long)]
    export_net: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum MachinesCommand {
    /// List the built-in machines.
    List,
    /// Print a built-in machine in the text format.
    Show { name: String },
    /// Print the machine that halts after exactly `steps` steps.
    HaltAfter {
        #[arg(long)]
        steps: u64,
    },
}

#[derive(Serialize)]
struct NetSummary {
    dimension: usize,
    level: u32,
    points: usize,
    epsilon_bound: Dyadic,
    space_tag: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_squared: Option<SquaredDistance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    switch_level: Option<u32>,
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn check_dim(dim: usize) -> CliResult<()> {
    if (2..=4).contains(&dim) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--dim must be between 2 and 4, got {dim}"
        )))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serializes")
}

fn auto_punctured(dim: usize, level: u32, switch: u32) -> CliResult<(EpsNet, Option<u32>)> {
    let mut stream = NetStream::new(dim)?;
    for m in 0..=level {
        stream.push(if m >= switch {
            Method::Two
        } else {
            Method::One
        })?;
    }
    Ok((stream.accumulated()?, stream.switch_level()))
}

fn fixed_punctured(dim: usize, level: u32, d_squared: SquaredDistance) -> CliResult<EpsNet> {
    let center = DyadicPoint::center(dim)?;
    let mut points = BTreeSet::new();
    for m in 0..=level {
        points.extend(punctured_layer(m, d_squared, &center, dim)?);
    }
    let ball = Puncture { center, d_squared };
    Ok(EpsNet::certify(
        dim,
        level,
        points,
        SpaceTag::Punctured(ball),
    )?)
}

fn cmd_net(args: NetArgs) -> CliResult<()> {
    check_dim(args.dim)?;
    let (net, switch_level) = match (args.puncture.as_deref(), args.switch) {
        (Some("auto") | None, Some(k)) => auto_punctured(args.dim, args.level, k)?,
        (Some("auto"), None) => auto_punctured(args.dim, args.level, 0)?,
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "--switch only applies to --puncture auto".into(),
            ))
        }
        (Some(raw), None) => {
            let d_sq: SquaredDistance = raw
                .parse()
                .map_err(|e| CliError::Usage(format!("--puncture {raw}: {e}")))?;
            if d_sq.is_zero() {
                return Err(CliError::Usage("--puncture radius must be positive".into()));
            }
            (fixed_punctured(args.dim, args.level, d_sq)?, None)
        }
        (None, None) if args.boundary => (boundary_net(args.level, args.dim)?, None),
        (None, None) => (cumulative_net(args.level, args.dim)?, None),
    };
    let summary = NetSummary {
        dimension: net.dim(),
        level: net.level(),
        points: net.len(),
        epsilon_bound: net.epsilon_bound(),
        space_tag: net.space().name(),
        d_squared: match net.space() {
            SpaceTag::Punctured(ball) => Some(ball.d_squared),
            _ => None,
        },
        switch_level,
    };
    let text = write_net(&net);
    match &args.out {
        Some(path) => {
            write_file(path, &text)?;
            println!("{}", to_json(&summary));
        }
        None => {
            print!("{text}");
            eprintln!("{}", to_json(&summary));
        }
    }
    Ok(())
}

fn cmd_homology(args: HomologyArgs) -> CliResult<()> {
    let net = read_net(&read_file(&args.net)?)?;
    let level = args.level.unwrap_or(net.level());
    let verdict = q_hat(&net, level)?;
    println!("{}", to_json(&verdict.to_json(args.timing)));
    eprintln!(
        "{:?}: β = {:?} at level {level}",
        verdict.kind, verdict.evidence.betti
    );
    Ok(())
}

fn load_machine(args: &ReduceArgs) -> CliResult<(String, Program)> {
    if args.fool {
        let name = format!("fooling_q{}_m{}", args.quantum, args.budget);
        return Ok((name, fooling_program(args.quantum, args.budget)));
    }
    if let Some(path) = &args.machine {
        let name = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        return Ok((name, parse_program(&read_file(path)?)?));
    }
    if let Some(name) = &args.sample {
        let p = sample_programs()
            .remove(name)
            .ok_or_else(|| CliError::Usage(format!("unknown sample machine `{name}`")))?;
        return Ok((name.clone(), p));
    }
    Err(CliError::Usage(
        "one of --machine, --sample or --fool is required".into(),
    ))
}

fn cmd_reduce(args: ReduceArgs) -> CliResult<()> {
    check_dim(args.dim)?;
    if args.quantum == 0 || args.budget == 0 {
        return Err(CliError::Usage(
            "--quantum and --budget must be at least 1".into(),
        ));
    }
    let (name, program) = load_machine(&args)?;
    let mut dovetailer = Dovetailer::new(args.quantum, args.budget, args.dim);
    if args.no_truth {
        dovetailer = dovetailer.with_truth_steps(None);
    } else if let Some(steps) = args.truth_steps {
        dovetailer = dovetailer.with_truth_steps(Some(steps));
    }
    let (report, net) = dovetailer.run(&name, &program, args.input)?;
    let json = report.to_json();
    match &args.out {
        Some(path) => write_file(path, &format!("{json}\n"))?,
        None => println!("{json}"),
    }
    if let Some(path) = &args.export_net {
        write_file(path, &write_net(&net))?;
    }
    eprintln!(
        "{name}({}): answer {:?} after {} steps, β = {:?}",
        args.input, report.answer, report.executed_steps, report.final_verdict.betti
    );
    if args.fool && !report.misclassified {
        return Err(CliError::Check(
            "fooling machine was not misclassified (ground truth disabled or too short?)".into(),
        ));
    }
    Ok(())
}

fn cmd_machines(cmd: MachinesCommand) -> CliResult<()> {
    match cmd {
        MachinesCommand::List => {
            for (name, p) in sample_programs() {
                println!("{name}\t{} states", p.state_count());
            }
        }
        MachinesCommand::Show { name } => {
            let p = sample_programs()
                .remove(&name)
                .ok_or_else(|| CliError::Usage(format!("unknown sample machine `{name}`")))?;
            print!("{}", p.to_text());
        }
        MachinesCommand::HaltAfter { steps } => print!("{}", halt_after(steps).to_text()),
    }
    Ok(())
}

fn configure_workers() -> CliResult<()> {
    let Ok(raw) = std::env::var("PI2BENCH_WORKERS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "PI2BENCH_WORKERS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_workers()?;
    match cli.command {
        Command::Net(a) => cmd_net(a),
        Command::Homology(a) => cmd_homology(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Machines(c) => cmd_machines(c),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
