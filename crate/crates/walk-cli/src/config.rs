//! Flag definitions and their translation into validated run configurations.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use walk_core::ctqw::Graph;
use walk_core::{CoinOperator, InitialStateKind, Topology};

use crate::CliError;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Parser, Debug)]
#[command(
    name = "walk",
    version,
    about = "Exact quantum-walk simulator: discrete and continuous time, one or two walkers",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Discrete-time walk of a single particle
    Single(SingleArgs),
    /// Discrete-time walk of two particles with product or entangled coins
    Two(TwoArgs),
    /// Continuous-time walk generated by the graph Laplacian
    Ctqw(CtqwArgs),
    /// Exact classical random-walk baseline (binomial distribution)
    Classical(ClassicalArgs),
    /// The same cycle walk repeated over a list of periods
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct SingleArgs {
    /// Lattice: line, cycle:<n>, or absorbing:<left>,<right>
    #[arg(long, default_value = "line")]
    topology: String,
    /// Coin operator: hadamard or su2:<theta>,<phi>,<lambda> (radians)
    #[arg(long, default_value = "hadamard")]
    coin: String,
    /// Initial coin state: up, down, plus, or plus-i
    #[arg(long = "init-coin", default_value = "up")]
    init_coin: String,
    /// Number of walk steps
    #[arg(long)]
    steps: u32,
    #[command(flatten)]
    io: IoArgs,
    /// Emit one distribution per step instead of only the final one
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct TwoArgs {
    /// Lattice: line, cycle:<n>, or absorbing:<left>,<right>
    #[arg(long, default_value = "line")]
    topology: String,
    /// Coin operator: hadamard or su2:<theta>,<phi>,<lambda> (radians)
    #[arg(long, default_value = "hadamard")]
    coin: String,
    /// Initial coin configuration: product, symmetric, or antisymmetric
    #[arg(long, default_value = "product")]
    state: String,
    /// Number of walk steps
    #[arg(long)]
    steps: u32,
    #[command(flatten)]
    io: IoArgs,
    /// Emit one joint distribution per step instead of only the final one
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct CtqwArgs {
    /// Graph: cycle:<n>, line:<vertices>, or line (segment sized from gamma and time)
    #[arg(long, default_value = "line")]
    topology: String,
    /// Transition rate per unit time
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Evolution time
    #[arg(long)]
    time: f64,
    /// Evolve the classical master equation instead of amplitudes
    #[arg(long)]
    classical: bool,
    #[command(flatten)]
    io: IoArgs,
}

#[derive(Args, Debug)]
struct ClassicalArgs {
    /// Number of walk steps
    #[arg(long)]
    steps: u32,
    #[command(flatten)]
    io: IoArgs,
    /// Emit one distribution per step instead of only the final one
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma-separated cycle periods to sweep
    #[arg(long, default_value = "8,16,64,100")]
    periods: String,
    /// Number of walk steps
    #[arg(long)]
    steps: u32,
    /// Coin operator: hadamard or su2:<theta>,<phi>,<lambda> (radians)
    #[arg(long, default_value = "hadamard")]
    coin: String,
    /// Two-particle initial configuration (conflicts with --init-coin)
    #[arg(long, conflicts_with = "init_coin")]
    state: Option<String>,
    /// Single-particle initial coin (switches the sweep to one walker)
    #[arg(long = "init-coin")]
    init_coin: Option<String>,
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output path; the period is injected before the extension
    #[arg(long)]
    out: PathBuf,
    /// SVG path per period, derived the same way
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IoArgs {
    /// Output format: csv or json
    #[arg(long, default_value = "csv")]
    format: String,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render an SVG plot to this path
    #[arg(long)]
    plot: Option<PathBuf>,
}

/// Output format of the data file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Where and how results get written.
#[derive(Clone, Debug)]
pub struct OutputOptions {
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

/// Fully validated configuration for one invocation.
#[derive(Clone, Debug)]
pub enum RunConfig {
    Single(SingleConfig),
    Two(TwoConfig),
    Ctqw(CtqwConfig),
    Classical(ClassicalConfig),
    Sweep(SweepConfig),
}

#[derive(Clone, Debug)]
pub struct SingleConfig {
    pub topology: Topology,
    pub topology_label: String,
    pub coin: CoinOperator,
    pub coin_label: String,
    pub init: (Complex64, Complex64),
    pub init_label: String,
    pub steps: usize,
    pub trace: bool,
    pub io: OutputOptions,
}

#[derive(Clone, Debug)]
pub struct TwoConfig {
    pub topology: Topology,
    pub topology_label: String,
    pub coin: CoinOperator,
    pub coin_label: String,
    pub kind: InitialStateKind,
    pub kind_label: String,
    pub steps: usize,
    pub trace: bool,
    pub io: OutputOptions,
}

#[derive(Clone, Debug)]
pub struct CtqwConfig {
    pub graph: Graph,
    pub topology_label: String,
    /// Vertex the walker starts on.
    pub start: usize,
    pub gamma: f64,
    pub time: f64,
    pub classical: bool,
    pub io: OutputOptions,
}

#[derive(Clone, Debug)]
pub struct ClassicalConfig {
    pub steps: usize,
    pub trace: bool,
    pub io: OutputOptions,
}

#[derive(Clone, Debug)]
pub enum SweepWalker {
    Single {
        init: (Complex64, Complex64),
        init_label: String,
    },
    Two {
        kind: InitialStateKind,
        kind_label: String,
    },
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub periods: Vec<usize>,
    pub steps: usize,
    pub coin: CoinOperator,
    pub coin_label: String,
    pub walker: SweepWalker,
    pub format: OutputFormat,
    pub out: PathBuf,
    pub plot: Option<PathBuf>,
}

/// Parses and validates a full argument vector (including the binary name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            CliError::Help(e.render().to_string())
        }
        _ => CliError::Usage(e.render().to_string()),
    })?;
    validate(cli)
}

fn validate(cli: Cli) -> Result<RunConfig, CliError> {
    match cli.command {
        Command::Single(args) => {
            let (topology, topology_label) = parse_walk_topology(&args.topology)?;
            let (coin, coin_label) = parse_coin(&args.coin)?;
            let (init, init_label) = parse_init_coin(&args.init_coin)?;
            Ok(RunConfig::Single(SingleConfig {
                topology,
                topology_label,
                coin,
                coin_label,
                init,
                init_label,
                steps: args.steps as usize,
                trace: args.trace,
                io: parse_io(args.io)?,
            }))
        }
        Command::Two(args) => {
            let (topology, topology_label) = parse_walk_topology(&args.topology)?;
            let (coin, coin_label) = parse_coin(&args.coin)?;
            let (kind, kind_label) = parse_state_kind(&args.state)?;
            Ok(RunConfig::Two(TwoConfig {
                topology,
                topology_label,
                coin,
                coin_label,
                kind,
                kind_label,
                steps: args.steps as usize,
                trace: args.trace,
                io: parse_io(args.io)?,
            }))
        }
        Command::Ctqw(args) => {
            if !args.time.is_finite() || args.time < 0.0 {
                return Err(CliError::Usage(format!(
                    "invalid --time '{}': must be a finite nonnegative number",
                    args.time
                )));
            }
            if !args.gamma.is_finite() || args.gamma <= 0.0 {
                return Err(CliError::Usage(format!(
                    "invalid --gamma '{}': must be a finite positive rate",
                    args.gamma
                )));
            }
            let (graph, topology_label, start) =
                parse_ctqw_graph(&args.topology, args.gamma, args.time)?;
            Ok(RunConfig::Ctqw(CtqwConfig {
                graph,
                topology_label,
                start,
                gamma: args.gamma,
                time: args.time,
                classical: args.classical,
                io: parse_io(args.io)?,
            }))
        }
        Command::Classical(args) => Ok(RunConfig::Classical(ClassicalConfig {
            steps: args.steps as usize,
            trace: args.trace,
            io: parse_io(args.io)?,
        })),
        Command::Sweep(args) => {
            let mut periods = Vec::new();
            for part in args.periods.split(',') {
                let n: usize = part.trim().parse().map_err(|_| {
                    CliError::Usage(format!(
                        "invalid --periods '{}': '{part}' is not a positive integer",
                        args.periods
                    ))
                })?;
                if n < 3 {
                    return Err(CliError::Usage(format!(
                        "invalid --periods: cycle of {n} sites needs n >= 3"
                    )));
                }
                periods.push(n);
            }
            if periods.is_empty() {
                return Err(CliError::Usage("--periods must list at least one cycle size".into()));
            }
            let (coin, coin_label) = parse_coin(&args.coin)?;
            let walker = match (&args.state, &args.init_coin) {
                (Some(state), None) => {
                    let (kind, kind_label) = parse_state_kind(state)?;
                    SweepWalker::Two { kind, kind_label }
                }
                (None, Some(init)) => {
                    let (init, init_label) = parse_init_coin(init)?;
                    SweepWalker::Single { init, init_label }
                }
                (None, None) => SweepWalker::Two {
                    kind: InitialStateKind::Symmetric,
                    kind_label: "symmetric".into(),
                },
                (Some(_), Some(_)) => unreachable!("clap rejects the conflict"),
            };
            Ok(RunConfig::Sweep(SweepConfig {
                periods,
                steps: args.steps as usize,
                coin,
                coin_label,
                walker,
                format: parse_format(&args.format)?,
                out: args.out,
                plot: args.plot,
            }))
        }
    }
}

fn parse_io(io: IoArgs) -> Result<OutputOptions, CliError> {
    Ok(OutputOptions {
        format: parse_format(&io.format)?,
        out: io.out,
        plot: io.plot,
    })
}

fn parse_format(s: &str) -> Result<OutputFormat, CliError> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(CliError::Usage(format!(
            "invalid --format '{other}': expected csv or json"
        ))),
    }
}

fn parse_walk_topology(s: &str) -> Result<(Topology, String), CliError> {
    if s == "line" {
        return Ok((Topology::Line, "line".into()));
    }
    if let Some(rest) = s.strip_prefix("cycle:") {
        let n: usize = rest
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid --topology '{s}': bad cycle size")))?;
        let topology = Topology::Cycle(n);
        topology
            .validate()
            .map_err(|e| CliError::Usage(format!("invalid --topology '{s}': {e}")))?;
        return Ok((topology, format!("cycle:{n}")));
    }
    if let Some(rest) = s.strip_prefix("absorbing:") {
        let parts: Vec<&str> = rest.split(',').collect();
        let parse = |p: &str| {
            p.trim().parse::<i64>().map_err(|_| {
                CliError::Usage(format!("invalid --topology '{s}': bad boundary position"))
            })
        };
        if parts.len() != 2 {
            return Err(CliError::Usage(format!(
                "invalid --topology '{s}': expected absorbing:<left>,<right>"
            )));
        }
        let (left, right) = (parse(parts[0])?, parse(parts[1])?);
        let topology = Topology::Absorbing { left, right };
        topology
            .validate()
            .map_err(|e| CliError::Usage(format!("invalid --topology '{s}': {e}")))?;
        if !(left < 0 && 0 < right) {
            return Err(CliError::Usage(format!(
                "invalid --topology '{s}': the walker starts at 0, so left < 0 < right is required"
            )));
        }
        return Ok((topology, format!("absorbing:{left},{right}")));
    }
    Err(CliError::Usage(format!(
        "invalid --topology '{s}': expected line, cycle:<n>, or absorbing:<left>,<right>"
    )))
}

/// Largest segment the auto-sizer will pick before asking for an explicit
/// vertex count (the spectral propagator is cubic in the vertex count).
const AUTO_SEGMENT_LIMIT: usize = 4001;

fn parse_ctqw_graph(s: &str, gamma: f64, time: f64) -> Result<(Graph, String, usize), CliError> {
    if let Some(rest) = s.strip_prefix("cycle:") {
        let n: usize = rest
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid --topology '{s}': bad cycle size")))?;
        let graph = Graph::Cycle(n);
        graph
            .validate()
            .map_err(|e| CliError::Usage(format!("invalid --topology '{s}': {e}")))?;
        return Ok((graph, format!("cycle:{n}"), 0));
    }
    if let Some(rest) = s.strip_prefix("line:") {
        let v: usize = rest
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid --topology '{s}': bad vertex count")))?;
        let graph = Graph::LineSegment(v);
        graph
            .validate()
            .map_err(|e| CliError::Usage(format!("invalid --topology '{s}': {e}")))?;
        return Ok((graph, format!("line:{v}"), (v - 1) / 2));
    }
    if s == "line" {
        // Amplitude spreads ballistically at speed 2*gamma; pad the segment
        // well past the front so the reflecting ends stay dark (< 1e-10).
        let half = (2.0 * gamma * time).ceil() as usize + 40;
        let vertices = 2 * half + 1;
        if vertices > AUTO_SEGMENT_LIMIT {
            return Err(CliError::Usage(format!(
                "gamma*time = {} needs a {vertices}-vertex segment; pass --topology line:<vertices> \
                 explicitly to accept the cost",
                gamma * time
            )));
        }
        return Ok((Graph::LineSegment(vertices), format!("line:{vertices}"), half));
    }
    Err(CliError::Usage(format!(
        "invalid --topology '{s}': expected line, line:<vertices>, or cycle:<n>"
    )))
}

fn parse_coin(s: &str) -> Result<(CoinOperator, String), CliError> {
    if s == "hadamard" {
        return Ok((CoinOperator::hadamard(), "hadamard".into()));
    }
    if let Some(rest) = s.strip_prefix("su2:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!(
                "invalid --coin '{s}': expected su2:<theta>,<phi>,<lambda>"
            )));
        }
        let mut angles = [0.0f64; 3];
        for (slot, part) in angles.iter_mut().zip(&parts) {
            *slot = part.trim().parse().map_err(|_| {
                CliError::Usage(format!("invalid --coin '{s}': '{part}' is not a number"))
            })?;
            if !slot.is_finite() {
                return Err(CliError::Usage(format!(
                    "invalid --coin '{s}': angles must be finite"
                )));
            }
        }
        let [theta, phi, lambda] = angles;
        return Ok((
            CoinOperator::su2(theta, phi, lambda),
            format!("su2:{theta},{phi},{lambda}"),
        ));
    }
    Err(CliError::Usage(format!(
        "invalid --coin '{s}': expected hadamard or su2:<theta>,<phi>,<lambda>"
    )))
}

fn parse_init_coin(s: &str) -> Result<((Complex64, Complex64), String), CliError> {
    let init = match s {
        "up" => (Complex64::ONE, Complex64::ZERO),
        "down" => (Complex64::ZERO, Complex64::ONE),
        "plus" => (Complex64::new(SQRT_HALF, 0.0), Complex64::new(SQRT_HALF, 0.0)),
        "plus-i" => (Complex64::new(SQRT_HALF, 0.0), Complex64::new(0.0, SQRT_HALF)),
        other => {
            return Err(CliError::Usage(format!(
                "invalid --init-coin '{other}': expected up, down, plus, or plus-i"
            )))
        }
    };
    Ok((init, s.to_string()))
}

fn parse_state_kind(s: &str) -> Result<(InitialStateKind, String), CliError> {
    let kind = match s {
        "product" => InitialStateKind::Product,
        "symmetric" => InitialStateKind::Symmetric,
        "antisymmetric" => InitialStateKind::Antisymmetric,
        other => {
            return Err(CliError::Usage(format!(
                "invalid --state '{other}': expected product, symmetric, or antisymmetric"
            )))
        }
    };
    Ok((kind, s.to_string()))
}
