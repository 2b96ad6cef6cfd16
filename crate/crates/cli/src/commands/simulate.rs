use std::io::Write;

use exceedance_core::approx::{chisq_upper_tail, nb_cdf_approx, DfMode};
use exceedance_core::rational::to_f64;
use exceedance_core::sim::{contamination_experiment, sample_lehmann_pair, ContaminationSpec, RngSpec};
use exceedance_core::{v_null, LehmannParam};

use super::tables::power_table;
use super::{single_design, Context};
use crate::args::{PowerMethodArg, SimulateKind};
use crate::error::{CliError, CliResult};
use crate::input::{sample_json, write_csv_column};
use crate::output::{Cell, Table};

pub fn run_simulate(kind: &SimulateKind, ctx: &Context, out: &mut dyn Write) -> CliResult<()> {
    match kind {
        SimulateKind::Power(args) => power_table(args, PowerMethodArg::Mc, ctx)?.write(ctx.format, out),
        SimulateKind::Contamination { m, n, rho, reps, alpha, epsilon } => {
            let mut spec = ContaminationSpec::opposing_outliers();
            if let Some(e) = epsilon {
                spec.epsilon = *e;
            }
            let rows = contamination_experiment(*m, *n, &spec, rho.values(), alpha, *reps, &RngSpec::new(ctx.seed))?;
            let mut table = Table::new(["rho", "s", "r", "cv", "rejection_rate", "std_error"]);
            table
                .meta(
                    "x",
                    format!("{} N(5,1) + {} N(8,1)", 1.0 - spec.epsilon, spec.epsilon),
                )
                .meta("y", format!("{} N(6,1) + {} N(3,1)", 1.0 - spec.epsilon, spec.epsilon))
                .meta("m", m)
                .meta("n", n)
                .meta("alpha", to_f64(alpha))
                .meta("reps", reps)
                .meta("seed", ctx.seed);
            for row in rows {
                table.push(vec![
                    Cell::Text(row.rho.to_string()),
                    row.s.into(),
                    row.r.into(),
                    (row.c - 1).into(),
                    Cell::Num(row.rejection_rate, 4),
                    Cell::Num(row.std_error, 4),
                ]);
            }
            table.write(ctx.format, out)
        }
        SimulateKind::FigureData { m, n, rho, r, s } => {
            let d = single_design(*m, n.unwrap_or(*m), *rho, *s, *r)?;
            let dist = v_null(&d);
            let df = DfMode::Matched.df(d.s as u64);
            let mut table = Table::new(["z", "exact_cdf", "nb_cdf", "chisq_tail"]);
            table
                .meta("m", d.m)
                .meta("n", d.n)
                .meta("s", d.s)
                .meta("r", d.r)
                .meta("chisq_df", df);
            for z in 0..=d.total() {
                table.push(vec![
                    z.into(),
                    Cell::Num(to_f64(&dist.cdf(z)), 10),
                    Cell::Num(nb_cdf_approx(z as u64, d.s as u64), 10),
                    Cell::Num(chisq_upper_tail(z as f64, df)?, 10),
                ]);
            }
            table.write(ctx.format, out)
        }
        SimulateKind::Sample { m, n, eta, replicate, x_out, y_out } => {
            if *m == 0 || *n == 0 {
                return Err(CliError::Usage("sample sizes must be at least 1".into()));
            }
            let eta = LehmannParam::new(*eta)?;
            let pair = sample_lehmann_pair(*m, *n, eta, &mut RngSpec::new(ctx.seed).stream(*replicate));
            match (x_out, y_out) {
                (Some(xp), Some(yp)) => {
                    write_csv_column(xp, pair.x())?;
                    write_csv_column(yp, pair.y())?;
                }
                _ => writeln!(out, "{}", sample_json(&pair)?)?,
            }
            Ok(())
        }
    }
}
