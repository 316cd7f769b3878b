use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "leakbound",
    version,
    about = "Exact leakage and compositional leakage bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vulnerability, entropy, leakage, min-capacity and mutual information of one channel
    Measure(MeasureArgs),
    /// Materialize a parallel composition or a cascade
    Compose(ComposeArgs),
    /// Bound the leakage of a composition from its components
    Bound(BoundArgs),
    /// Bounds from a truncated prior (input approximation)
    Approx(ApproxArgs),
    /// Decide whether one channel refines another
    Refine(RefineArgs),
    /// Crowds protocol channel on a random network
    Crowds(CrowdsArgs),
    /// Random channels and priors
    Randgen(RandgenArgs),
    /// Time exact leakage against the bound on growing shared compositions
    Bench(BenchArgs),
    /// Evaluate a JSON scenario file
    Run(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Limits {
    /// Largest composed matrix (rows × columns) that will be materialized
    #[arg(long, default_value = "1e8", value_parser = parse_cells)]
    pub max_cells: u128,
    /// Give up on exact computations after this many seconds
    #[arg(long)]
    pub timeout_s: Option<f64>,
}

fn parse_cells(s: &str) -> Result<u128, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(v.is_finite() && v >= 1.0) {
        return Err(format!("cell cap must be at least 1, got {s}"));
    }
    Ok(v as u128)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// Channel file or `fixture:NAME`
    #[arg(long)]
    pub channel: String,
    /// Prior file, `fixture:NAME` or `uniform`
    #[arg(long, default_value = "uniform")]
    pub prior: String,
    /// `identity`, `ktries:K` or `table:PATH`
    #[arg(long, default_value = "identity")]
    pub gain: String,
    /// Only the min-capacity
    #[arg(long)]
    pub min_capacity: bool,
    /// Only the mutual information
    #[arg(long)]
    pub mi: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("op").required(true).args(["shared", "distinct", "cascade"])))]
pub struct ComposeArgs {
    #[arg(long)]
    pub shared: bool,
    #[arg(long)]
    pub distinct: bool,
    /// Two channels: the second post-processes the first
    #[arg(long)]
    pub cascade: bool,
    #[arg(long = "channel", required = true)]
    pub channels: Vec<String>,
    /// Repeat the channel list this many times
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// Output file (`.json` for JSON, CSV otherwise); stdout if absent
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: MatrixFormat,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("op").required(true).args(["shared", "distinct"])))]
pub struct BoundArgs {
    #[arg(long)]
    pub shared: bool,
    #[arg(long)]
    pub distinct: bool,
    #[arg(long = "channel")]
    pub channels: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// Channels known to be refined by the components (one per component)
    #[arg(long = "lower", requires = "upper")]
    pub lower: Vec<String>,
    /// Channels known to refine the components (one per component)
    #[arg(long = "upper", requires = "lower")]
    pub upper: Vec<String>,
    /// Shared: prior over the common input. Distinct: joint prior JSON
    #[arg(long)]
    pub prior: Option<String>,
    /// Distinct: product prior from one marginal per component
    #[arg(long = "marginal", conflicts_with = "prior")]
    pub marginals: Vec<String>,
    /// Gain on the common input (shared) or on each component (distinct)
    #[arg(long, default_value = "identity")]
    pub gain: String,
    /// Truncate the prior by this much mass (min-entropy only)
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// With --epsilon: use only component leakages and vulnerabilities
    #[arg(long, requires = "epsilon")]
    pub blackbox: bool,
    /// Also materialize the composition and compute the exact value
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[arg(long = "channel", required = true)]
    pub channels: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// Compose with distinct inputs (the prior must be a joint prior JSON)
    #[arg(long)]
    pub distinct: bool,
    #[arg(long, default_value = "uniform")]
    pub prior: String,
    /// Mass to remove; defaults to a third of the largest component
    /// posterior vulnerability
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    /// The channel claimed to be a post-processing of `--fine`
    #[arg(long)]
    pub coarse: String,
    #[arg(long)]
    pub fine: String,
    /// Write the witness here
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct CrowdsArgs {
    #[arg(long)]
    pub users: usize,
    #[arg(long, default_value_t = 1)]
    pub corrupt: usize,
    #[arg(long, default_value_t = 0.4)]
    pub edge_prob: f64,
    /// Forwarding probability
    #[arg(long, default_value_t = 0.7)]
    pub pf: f64,
    #[arg(long)]
    pub seed: u64,
    /// Executions, each on a fresh topology (seeds `seed`, `seed+1`, ...)
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    #[arg(long, default_value = "ktries:2")]
    pub gain: String,
    /// Write the first execution's channel here
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RandKind {
    Channel,
    Prior,
}

#[derive(Debug, Args)]
pub struct RandgenArgs {
    #[arg(value_enum)]
    pub kind: RandKind,
    #[arg(long, default_value_t = 10)]
    pub inputs: usize,
    #[arg(long, default_value_t = 10)]
    pub outputs: usize,
    /// Largest L1 distance of a row from uniform
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Component channel; a random one is generated when absent
    #[arg(long, required_unless_present = "seed")]
    pub channel: Option<String>,
    #[arg(long, default_value_t = 10)]
    pub size: usize,
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "uniform")]
    pub prior: String,
    #[arg(long, default_value_t = 64)]
    pub max_components: usize,
    /// Timing repetitions for the bound; the median is reported
    #[arg(long, default_value_t = 25)]
    pub reps: usize,
    #[arg(long)]
    pub out: Option<String>,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub scenario: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[command(flatten)]
    pub limits: Limits,
}
