use std::io::Write;

use exceedance_core::rational::{parse_decimal, to_f64};
use exceedance_core::sim::{lehmann_oracle, permutation_oracle};
use exceedance_core::{joint_pmf_null, Design, LehmannEngine, LehmannParam};

use super::Context;
use crate::args::OracleArgs;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

pub fn run_oracle(args: &OracleArgs, ctx: &Context, out: &mut dyn Write) -> CliResult<()> {
    let design = Design::new(args.m, args.n, args.s, args.r)?;
    let (m, n) = (args.m, args.n);
    let mut table = Table::new(["k", "i", "enumerated", "formula"]);
    table.meta("m", m).meta("n", n).meta("s", args.s).meta("r", args.r);
    let mut mismatches = 0usize;

    match &args.eta {
        None => {
            let enumerated = permutation_oracle(&design)?;
            let formula = joint_pmf_null(&design);
            table.meta("distribution", "null").meta("total", formula.total());
            for k in 0..=n {
                for i in 0..=m {
                    let (a, b) = (enumerated.count(k, i), formula.count(k, i));
                    if a == b && a == 0u32.into() {
                        continue;
                    }
                    mismatches += usize::from(a != b);
                    table.push(vec![k.into(), i.into(), Cell::Text(a.to_string()), Cell::Text(b.to_string())]);
                }
            }
        }
        Some(text) => {
            let exact_eta = parse_decimal(text).map_err(|e| CliError::Usage(format!("--eta: {e}")))?;
            let eta = LehmannParam::new(to_f64(&exact_eta))?;
            let enumerated = lehmann_oracle(&design, &exact_eta)?;
            let formula = LehmannEngine::new(m, n, eta, ctx.policy)?.table(&design)?;
            table.meta("distribution", format!("lehmann eta={text}"));
            for k in 0..=n {
                for i in 0..=m {
                    let a = to_f64(&enumerated[k * (m + 1) + i]);
                    let b = formula.prob(k, i);
                    if a == 0.0 && b.abs() < 1e-300 {
                        continue;
                    }
                    mismatches += usize::from((a - b).abs() > 1e-9 * a.abs() + 1e-15);
                    table.push(vec![k.into(), i.into(), Cell::Num(a, 12), Cell::Num(b, 12)]);
                }
            }
        }
    }
    table.meta("mismatches", mismatches);
    table.write(ctx.format, out)?;
    if mismatches > 0 {
        return Err(CliError::OracleMismatch(mismatches));
    }
    Ok(())
}
