use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exceedance_core::sim::{Statistic, DEFAULT_SEED};
use exceedance_core::BigRational;

use crate::grid::{parse_alpha, parse_decimal_grid, parse_usize_grid, Grid};
use crate::output::Format;

/// Exact and approximate two-sample exceedance tests.
///
/// V = A_s + B_r, where A_s counts Y values above the (m-s)-th smallest X and
/// B_r counts X values below the (r+1)-th smallest Y. Large V indicates Y is
/// stochastically larger than X.
#[derive(Debug, Parser)]
#[command(name = "exceedance", version, about, long_about = None)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Seed for every simulated quantity.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Working precision, in decimal digits, for the alternating sums of the
    /// Lehmann-alternative distribution (at least 30).
    #[arg(long, global = true, env = "EXCEEDANCE_PRECISION")]
    pub precision: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test two samples and report the statistic, p-value and decision.
    Test(TestArgs),
    /// Critical-value, power and approximation tables.
    Tables {
        #[command(subcommand)]
        kind: TableKind,
    },
    /// Seeded simulations and plotting data.
    Simulate {
        #[command(subcommand)]
        kind: SimulateKind,
    },
    /// Compare the closed-form joint distribution with exhaustive enumeration.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestMethod {
    Exact,
    /// Chi-square approximation with 2(s+1) degrees of freedom.
    Approx,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// One-column CSV with the X sample (needs --y).
    #[arg(long, requires = "y", conflicts_with = "input")]
    pub x: Option<PathBuf>,

    /// One-column CSV with the Y sample.
    #[arg(long, requires = "x")]
    pub y: Option<PathBuf>,

    /// JSON file holding {"x": [...], "y": [...]}.
    #[arg(long, required_unless_present = "x")]
    pub input: Option<PathBuf>,

    /// Threshold proportion; s = floor(rho m), r = floor(rho n).
    #[arg(long, conflicts_with_all = ["s", "r"], required_unless_present = "r")]
    pub rho: Option<f64>,

    #[arg(long)]
    pub r: Option<usize>,

    /// Defaults to r.
    #[arg(long, requires = "r")]
    pub s: Option<usize>,

    #[arg(long, value_parser = parse_alpha, default_value = "0.05")]
    pub alpha: BigRational,

    #[arg(long, value_enum, default_value_t = TestMethod::Exact)]
    pub method: TestMethod,

    /// V (default), or a companion statistic tested by enumeration:
    /// P (precedence), Q (maximal precedence), M, W (rank sum).
    #[arg(long, default_value = "V")]
    pub statistic: Statistic,
}

#[derive(Debug, Clone, Args)]
pub struct SizeArgs {
    /// Size of X: a value or grid such as 6..25, 20..40:4 or 10,20.
    #[arg(long, value_parser = parse_usize_grid)]
    pub m: Grid<usize>,

    /// Size of Y; when omitted n = m for every m.
    #[arg(long, value_parser = parse_usize_grid)]
    pub n: Option<Grid<usize>>,
}

#[derive(Debug, Clone, Args)]
pub struct ThresholdArgs {
    /// Threshold proportions, e.g. 0..0.25:0.05.
    #[arg(long, value_parser = parse_decimal_grid, conflicts_with_all = ["s", "r"], required_unless_present = "r")]
    pub rho: Option<Grid<f64>>,

    /// Threshold r values (rows of the table).
    #[arg(long, value_parser = parse_usize_grid)]
    pub r: Option<Grid<usize>>,

    /// Threshold s values: one value, or one per r. Defaults to s = r.
    #[arg(long, value_parser = parse_usize_grid, requires = "r")]
    pub s: Option<Grid<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PowerMethodArg {
    /// Exact when m, n <= 40, Monte Carlo otherwise.
    Auto,
    Exact,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DfModeArg {
    /// 2(s+1) degrees of freedom.
    Matched,
    /// s+1 degrees of freedom.
    Text,
}

#[derive(Debug, Subcommand)]
pub enum TableKind {
    /// Critical values: a grid over r (rows) and sizes (columns), or one
    /// row per (rho, m, n) when --rho is given.
    Critical {
        #[command(flatten)]
        sizes: SizeArgs,
        #[command(flatten)]
        thresholds: ThresholdArgs,
        #[arg(long, value_parser = parse_alpha, default_value = "0.05")]
        alpha: BigRational,
    },
    /// Power under Lehmann alternatives; rows are thresholds, columns vary
    /// over eta or over the sizes (not both).
    Power(PowerArgs),
    /// Chi-square approximation at the exact critical values.
    Approx {
        #[command(flatten)]
        sizes: SizeArgs,
        #[arg(long, value_parser = parse_decimal_grid)]
        rho: Grid<f64>,
        #[arg(long, value_parser = parse_alpha, default_value = "0.05")]
        alpha: BigRational,
        #[arg(long, value_enum, default_value_t = DfModeArg::Matched)]
        df_mode: DfModeArg,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub sizes: SizeArgs,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// Lehmann parameter(s), each >= 1.
    #[arg(long, value_parser = parse_decimal_grid)]
    pub eta: Grid<f64>,
    #[arg(long, value_parser = parse_alpha, default_value = "0.05")]
    pub alpha: BigRational,
    #[arg(long, value_enum, default_value_t = PowerMethodArg::Auto)]
    pub method: PowerMethodArg,
    /// Monte Carlo replicates per cell.
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

#[derive(Debug, Subcommand)]
pub enum SimulateKind {
    /// Monte Carlo power, laid out like `tables power`.
    Power(PowerArgs),
    /// Rejection rates on contaminated-normal samples:
    /// X ~ 0.95 N(5,1) + 0.05 N(8,1), Y ~ 0.95 N(6,1) + 0.05 N(3,1).
    Contamination {
        #[arg(long, default_value_t = 100)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, value_parser = parse_decimal_grid, default_value = "0..0.25:0.05")]
        rho: Grid<f64>,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, value_parser = parse_alpha, default_value = "0.05")]
        alpha: BigRational,
        /// Contamination fraction applied to both samples.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Columns z, exact_cdf, nb_cdf, chisq_tail for plotting.
    FigureData {
        #[arg(long)]
        m: usize,
        /// Defaults to m.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, conflicts_with_all = ["s", "r"], required_unless_present = "r")]
        rho: Option<f64>,
        #[arg(long)]
        r: Option<usize>,
        /// Defaults to r.
        #[arg(long, requires = "r")]
        s: Option<usize>,
    },
    /// Draw one sample pair (X uniform, Y from the Lehmann alternative).
    ///
    /// Writes {"x": [...], "y": [...]} unless --x-out and --y-out are given,
    /// in which case two one-column CSV files are written instead.
    Sample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Replicate index; different indices give independent samples.
        #[arg(long, default_value_t = 0)]
        replicate: u64,
        #[arg(long, requires = "y_out")]
        x_out: Option<PathBuf>,
        #[arg(long, requires = "x_out")]
        y_out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub r: usize,
    /// Compare under a Lehmann alternative with this (decimal) eta instead
    /// of the null.
    #[arg(long)]
    pub eta: Option<String>,
}
