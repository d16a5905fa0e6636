use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "combwalks", version, about = "Exact sums over weighted admissible lattice walks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for sampled potentials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads.
    #[arg(long, global = true, env = "COMBWALKS_JOBS")]
    pub jobs: Option<usize>,

    /// Drop single-step walks (nu = 0) from every class.
    #[arg(long, global = true)]
    pub exclude_single_step: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check identities against the walk-sum engine.
    #[command(subcommand)]
    Verify(Verify),
    /// Compute a single sum or polynomial.
    #[command(subcommand)]
    Compute(Compute),
    /// Parameter scans with reproducible output.
    #[command(subcommand)]
    Explore(Explore),
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Positive-walk polynomial over {-4,-2,2,4} against its product formula.
    Prop1 {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// Gapped index sums against odd/even square symmetric sums.
    Prop2 {
        #[arg(long, default_value_t = 12)]
        m_max: u32,
    },
    /// Vanishing of B_1(2m+1) over {-2,+4}.
    Catalan {
        #[arg(long, default_value_t = 15)]
        m_max: u32,
    },
    /// Dynamic programming against exhaustive enumeration.
    DpOracle {
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[arg(long, default_value_t = 9)]
        kappa_n_max: u32,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct StepArgs {
    /// Use F_m = {even j != 0 : |j| <= m}.
    #[arg(long, conflicts_with = "steps")]
    pub m: Option<u32>,

    /// Explicit step set, e.g. --steps=-2,4.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub steps: Vec<i64>,
}

#[derive(Args, Debug, Clone)]
pub struct ValueArgs {
    /// Step weight STEP=VALUE; VALUE is a rational (3/4, -0.5) or complex (0.5+1.5i).
    #[arg(long = "value", value_name = "STEP=VALUE", allow_hyphen_values = true)]
    pub values: Vec<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionArg {
    Ascending,
    Descending,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignArg {
    All,
    Positive,
    Negative,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Auto,
    Dp,
    Brute,
}

#[derive(Subcommand, Debug)]
pub enum Compute {
    /// Sum of h over a walk class.
    Sum {
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        steps: StepArgs,
        #[command(flatten)]
        values: ValueArgs,
        #[arg(long, value_enum, default_value_t = DirectionArg::Ascending)]
        direction: DirectionArg,
        #[arg(long, value_enum, default_value_t = SignArg::Positive)]
        sign: SignArg,
        #[arg(long)]
        kappa: Option<u32>,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, default_value_t = 0)]
        window: u32,
        /// Sum |h| instead of h.
        #[arg(long)]
        abs: bool,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Walk class as JSON; replaces the class flags.
        #[arg(long)]
        class: Option<String>,
    },
    /// Polynomial in V(2k) of the positive-walk sum.
    Poly {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        steps: StepArgs,
    },
    /// B_kappa(n): sum of h1 over walks with kappa steps -2R and the rest +2S.
    Bkappa {
        #[arg(long)]
        n: u32,
        #[arg(long = "R")]
        r: u32,
        #[arg(long = "S")]
        s: u32,
        #[arg(long)]
        kappa: u32,
        /// Sum |h1| instead of h1.
        #[arg(long)]
        abs: bool,
    },
    /// Truncated sum over all admissible walks.
    Beta {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        steps: StepArgs,
        #[command(flatten)]
        values: ValueArgs,
        #[arg(long, value_enum, default_value_t = DirectionArg::Ascending)]
        direction: DirectionArg,
        #[arg(long)]
        max_steps: usize,
        #[arg(long, default_value_t = 0)]
        window: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum Explore {
    /// Positive-walk polynomials over F_m for a range of n.
    Q1 {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long)]
        n_max: u32,
        /// Include the full polynomial in each row.
        #[arg(long)]
        full: bool,
    },
    /// sum|h| / |sum h| over sampled complex potentials.
    Q2 {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long, default_value_t = 24)]
        n_max: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Evaluate one fixed potential instead of sampling.
        #[command(flatten)]
        values: ValueArgs,
    },
    /// B_3(2m+1) over {-2,+4} and its growth diagnostics.
    Q3 {
        #[arg(long, default_value_t = 1)]
        m_min: u32,
        #[arg(long, default_value_t = 40)]
        m_max: u32,
        /// Re-derive rows with m up to this value by enumeration.
        #[arg(long, default_value_t = 6)]
        oracle_max: u32,
    },
    /// Truncated two-sided sums against the one-signed sums.
    Prop3 {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 4)]
        n_min: u32,
        #[arg(long, default_value_t = 24)]
        n_max: u32,
        #[command(flatten)]
        values: ValueArgs,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, default_value_t = 2)]
        window: u32,
        /// Fail (exit 1) when |ratio - 1| n / ln n exceeds this.
        #[arg(long)]
        bound: Option<f64>,
    },
}
