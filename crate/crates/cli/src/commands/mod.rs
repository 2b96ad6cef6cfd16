mod oracle;
mod simulate;
mod tables;

pub use oracle::run_oracle;
pub use simulate::run_simulate;
pub use tables::run_tables;
pub use test::run_test;

use exceedance_core::{Design, PrecisionPolicy};

use crate::args::{SizeArgs, ThresholdArgs};
use crate::error::{CliError, CliResult};
use crate::output::Cell;

/// Settings shared by every command.
pub struct Context {
    pub format: crate::output::Format,
    pub seed: u64,
    pub policy: PrecisionPolicy,
}

impl Context {
    pub fn new(format: crate::output::Format, seed: u64, precision: Option<u32>) -> CliResult<Self> {
        let policy = match precision {
            Some(digits) => PrecisionPolicy::default()
                .with_base_precision(digits)
                .map_err(|e| CliError::Usage(format!("--precision: {e}")))?,
            None => PrecisionPolicy::default(),
        };
        Ok(Context { format, seed, policy })
    }
}

/// The (m, n) pairs of a size grid, with their column labels.
fn sizes(args: &SizeArgs) -> CliResult<Vec<(usize, usize, String)>> {
    let ms = args.m.values();
    let out: Vec<_> = match &args.n {
        None => ms.iter().map(|&m| (m, m, format!("m=n={m}"))).collect(),
        Some(ns) => ms
            .iter()
            .flat_map(|&m| ns.values().iter().map(move |&n| (m, n, format!("m={m};n={n}"))))
            .collect(),
    };
    if out.iter().any(|&(m, n, _)| m == 0 || n == 0) {
        return Err(CliError::Usage("sample sizes must be at least 1".into()));
    }
    Ok(out)
}

/// Table rows: threshold proportions or explicit (s, r) pairs.
enum Thresholds {
    Rho(Vec<f64>),
    Pairs { pairs: Vec<(usize, usize)>, explicit_s: bool },
}

impl Thresholds {
    fn from_args(args: &ThresholdArgs) -> CliResult<Self> {
        if let Some(rho) = &args.rho {
            return Ok(Thresholds::Rho(rho.values().to_vec()));
        }
        let r = args.r.as_ref().ok_or_else(|| CliError::Usage("give --rho or --r".into()))?.values();
        let pairs = match &args.s {
            None => r.iter().map(|&r| (r, r)).collect(),
            Some(s) if s.len() == 1 => r.iter().map(|&r| (s.values()[0], r)).collect(),
            Some(s) if s.len() == r.len() => s.values().iter().copied().zip(r.iter().copied()).collect(),
            Some(_) => return Err(CliError::Usage("--s must have one value or as many values as --r".into())),
        };
        Ok(Thresholds::Pairs { pairs, explicit_s: args.s.is_some() })
    }

    fn len(&self) -> usize {
        match self {
            Thresholds::Rho(v) => v.len(),
            Thresholds::Pairs { pairs, .. } => pairs.len(),
        }
    }

    fn label_columns(&self) -> Vec<String> {
        match self {
            Thresholds::Rho(_) => vec!["rho".into()],
            Thresholds::Pairs { explicit_s: true, .. } => vec!["s".into(), "r".into()],
            Thresholds::Pairs { .. } => vec!["r".into()],
        }
    }

    fn label(&self, row: usize) -> Vec<Cell> {
        match self {
            Thresholds::Rho(v) => vec![Cell::Text(v[row].to_string())],
            Thresholds::Pairs { pairs, explicit_s: true } => vec![pairs[row].0.into(), pairs[row].1.into()],
            Thresholds::Pairs { pairs, .. } => vec![pairs[row].1.into()],
        }
    }

    /// Design of row `row` at sizes (m, n); `None` when s >= m or r >= n.
    fn design(&self, row: usize, m: usize, n: usize) -> CliResult<Option<Design>> {
        match self {
            Thresholds::Rho(v) => Ok(Some(Design::from_rho(m, n, v[row])?)),
            Thresholds::Pairs { pairs, .. } => {
                let (s, r) = pairs[row];
                if s >= m || r >= n {
                    Ok(None)
                } else {
                    Ok(Some(Design::new(m, n, s, r)?))
                }
            }
        }
    }
}

/// Single-design thresholds from `--rho` or `--s/--r`.
fn single_design(m: usize, n: usize, rho: Option<f64>, s: Option<usize>, r: Option<usize>) -> CliResult<Design> {
    match (rho, r) {
        (Some(rho), _) => Ok(Design::from_rho(m, n, rho)?),
        (None, Some(r)) => Ok(Design::new(m, n, s.unwrap_or(r), r)?),
        (None, None) => Err(CliError::Usage("give --rho or --r".into())),
    }
}
