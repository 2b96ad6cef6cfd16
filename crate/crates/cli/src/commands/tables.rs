use std::io::Write;

use exceedance_core::approx::{chisq_tail_approx, ApproxConfig, DfMode};
use exceedance_core::lehmann::power_with_engine;
use exceedance_core::rational::to_f64;
use exceedance_core::sim::{mc_power, RngSpec};
use exceedance_core::{critical_value, BigRational, Design, LehmannEngine, LehmannParam};

use super::{sizes, Context, Thresholds};
use crate::args::{DfModeArg, PowerArgs, PowerMethodArg, SizeArgs, TableKind, ThresholdArgs};
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

const EXACT_LIMIT: usize = 40;

pub fn run_tables(kind: &TableKind, ctx: &Context, out: &mut dyn Write) -> CliResult<()> {
    let table = match kind {
        TableKind::Critical { sizes, thresholds, alpha } => critical_table(sizes, thresholds, alpha)?,
        TableKind::Power(args) => power_table(args, args.method, ctx)?,
        TableKind::Approx { sizes, rho, alpha, df_mode } => approx_table(sizes, rho.values(), alpha, *df_mode)?,
    };
    table.write(ctx.format, out)
}

fn critical_meta(table: &mut Table, alpha: &BigRational) {
    table
        .meta("alpha", to_f64(alpha))
        .meta("rule", "reject if V > cv; reject with probability pi if V = cv");
}

fn critical_table(size_args: &SizeArgs, threshold_args: &ThresholdArgs, alpha: &BigRational) -> CliResult<Table> {
    let sizes = sizes(size_args)?;
    let rows = Thresholds::from_args(threshold_args)?;

    if let Thresholds::Rho(rhos) = &rows {
        let mut table = Table::new(["rho", "m", "s", "n", "r", "cv", "alpha1", "alpha2", "pi"]);
        critical_meta(&mut table, alpha);
        for rho in rhos {
            for &(m, n, _) in &sizes {
                let d = Design::from_rho(m, n, *rho)?;
                let dec = critical_value(&d, alpha)?;
                table.push(vec![
                    Cell::Text(rho.to_string()),
                    m.into(),
                    d.s.into(),
                    n.into(),
                    d.r.into(),
                    dec.table_value().into(),
                    Cell::Num(dec.alpha1_f64(), 4),
                    Cell::Num(dec.alpha2_f64(), 4),
                    Cell::Num(dec.pi_f64(), 4),
                ]);
            }
        }
        return Ok(table);
    }

    let mut columns = rows.label_columns();
    columns.extend(sizes.iter().map(|(_, _, label)| label.clone()));
    let mut table = Table::new(columns);
    critical_meta(&mut table, alpha);
    for row in 0..rows.len() {
        let mut cells = rows.label(row);
        for &(m, n, _) in &sizes {
            cells.push(match rows.design(row, m, n)? {
                Some(d) => critical_value(&d, alpha)?.table_value().into(),
                None => Cell::Missing,
            });
        }
        table.push(cells);
    }
    Ok(table)
}

/// How each column of a power table was computed.
#[derive(Clone, Copy, PartialEq, Eq)]
enum CellMethod {
    Exact,
    MonteCarlo,
}

pub(super) fn power_table(args: &PowerArgs, method: PowerMethodArg, ctx: &Context) -> CliResult<Table> {
    let sizes = sizes(&args.sizes)?;
    let rows = Thresholds::from_args(&args.thresholds)?;
    let etas: Vec<LehmannParam> = args.eta.values().iter().map(|&e| LehmannParam::new(e)).collect::<Result<_, _>>()?;
    if sizes.len() > 1 && etas.len() > 1 {
        return Err(CliError::Usage("power tables vary over sizes or over eta, not both".into()));
    }
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }

    let mut columns: Vec<(usize, usize, LehmannParam, String)> = Vec::new();
    for (m, n, label) in &sizes {
        for &eta in &etas {
            let label = if etas.len() > 1 { format!("eta={}", eta.value()) } else { label.clone() };
            columns.push((*m, *n, eta, label));
        }
    }

    let rng = RngSpec::new(ctx.seed);
    let mut cells = vec![Vec::with_capacity(columns.len()); rows.len()];
    let mut used = Vec::new();
    for &(m, n, eta, _) in &columns {
        let cell_method = match method {
            PowerMethodArg::Exact => CellMethod::Exact,
            PowerMethodArg::Mc => CellMethod::MonteCarlo,
            PowerMethodArg::Auto if m <= EXACT_LIMIT && n <= EXACT_LIMIT => CellMethod::Exact,
            PowerMethodArg::Auto => CellMethod::MonteCarlo,
        };
        used.push(cell_method);
        let engine = match cell_method {
            CellMethod::Exact => Some(LehmannEngine::new(m, n, eta, ctx.policy)?),
            CellMethod::MonteCarlo => None,
        };
        for (row, row_cells) in cells.iter_mut().enumerate() {
            let cell = match rows.design(row, m, n)? {
                None => Cell::Missing,
                Some(d) => {
                    let result = match &engine {
                        Some(engine) => power_with_engine(engine, &d, &args.alpha)?,
                        None => mc_power(&d, &args.alpha, eta, args.reps, &rng)?,
                    };
                    Cell::Num(result.beta, 4)
                }
            };
            row_cells.push(cell);
        }
    }

    let mut header = rows.label_columns();
    header.extend(columns.iter().map(|c| c.3.clone()));
    let mut table = Table::new(header);
    let all = |want| used.iter().all(|&u| u == want);
    let method_label = if all(CellMethod::Exact) {
        "exact".to_string()
    } else if all(CellMethod::MonteCarlo) {
        "monte-carlo".to_string()
    } else {
        format!("mixed (exact where m, n <= {EXACT_LIMIT}, monte-carlo elsewhere)")
    };
    table.meta("method", method_label).meta("alpha", to_f64(&args.alpha));
    if etas.len() == 1 {
        table.meta("eta", etas[0].value());
    }
    if used.contains(&CellMethod::MonteCarlo) {
        table.meta("reps", args.reps).meta("seed", ctx.seed);
    }
    for (row, row_cells) in cells.into_iter().enumerate() {
        let mut line = rows.label(row);
        line.extend(row_cells);
        table.push(line);
    }
    Ok(table)
}

fn approx_table(size_args: &SizeArgs, rhos: &[f64], alpha: &BigRational, df_mode: DfModeArg) -> CliResult<Table> {
    let sizes = sizes(size_args)?;
    let config = ApproxConfig {
        df_mode: match df_mode {
            DfModeArg::Matched => DfMode::Matched,
            DfModeArg::Text => DfMode::Text,
        },
    };
    let mut header = vec!["rho".to_string()];
    for (_, _, label) in &sizes {
        header.push(format!("{label} cv"));
        header.push(format!("{label} approx"));
    }
    let mut table = Table::new(header);
    table
        .meta("alpha", to_f64(alpha))
        .meta("method", "approximate (chi-square tail at the exact critical value)")
        .meta(
            "df",
            match config.df_mode {
                DfMode::Matched => "2(s+1)",
                DfMode::Text => "s+1",
            },
        );
    for &rho in rhos {
        let mut row = vec![Cell::Text(rho.to_string())];
        for &(m, n, _) in &sizes {
            let d = Design::from_rho(m, n, rho)?;
            let cv = critical_value(&d, alpha)?.table_value();
            row.push(cv.into());
            row.push(Cell::Num(chisq_tail_approx(cv as u64, m, rho, &config)?, 4));
        }
        table.push(row);
    }
    Ok(table)
}
