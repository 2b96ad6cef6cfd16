use num_rational::BigRational;
use rayon::prelude::*;

use super::rng::{sample_contaminated_pair, sample_lehmann_pair, ContaminationSpec, RngSpec};
use crate::error::{invalid, Result};
use crate::exceedance::{exceedance_stats, thresholds, Design, SamplePair, TiePolicy};
use crate::lehmann::{LehmannParam, PowerMethod, PowerResult};
use crate::null::{critical_value, TestDecision};

fn v_of(sample: &SamplePair, design: &Design) -> usize {
    // continuous draws; a tie has probability ~2^-53 and is counted conservatively
    exceedance_stats(sample, &design.spec(), TiePolicy::Conservative)
        .expect("design validated against sample sizes")
        .v
}

/// Monte Carlo power of the randomized test under a Lehmann alternative.
///
/// Replicate `i` uses stream `i` of `rng`, so the estimate is the same for
/// any number of worker threads.
pub fn mc_power(
    design: &Design,
    alpha: &BigRational,
    eta: LehmannParam,
    replicates: usize,
    rng: &RngSpec,
) -> Result<PowerResult> {
    if replicates == 0 {
        return invalid("replicates must be at least 1");
    }
    let decision = critical_value(design, alpha)?;
    let vs: Vec<usize> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| v_of(&sample_lehmann_pair(design.m, design.n, eta, &mut rng.stream(i)), design))
        .collect();
    Ok(summarize(&decision, &vs))
}

fn summarize(decision: &TestDecision, vs: &[usize]) -> PowerResult {
    let reps = vs.len() as f64;
    let at_c = vs.iter().filter(|&&v| v >= decision.c).count() as f64;
    let at_c1 = vs.iter().filter(|&&v| v + 1 >= decision.c).count() as f64;
    let mut result = PowerResult::from_tails(decision, at_c / reps, at_c1 / reps, PowerMethod::MonteCarlo);
    result.mc_std_error = Some((result.beta * (1.0 - result.beta) / reps).sqrt());
    result
}

/// Rejection rate of the randomized test at one threshold proportion.
#[derive(Debug, Clone, PartialEq)]
pub struct ContaminationRow {
    pub rho: f64,
    pub s: usize,
    pub r: usize,
    pub c: usize,
    /// Mean rejection probability over replicates.
    pub rejection_rate: f64,
    pub std_error: f64,
}

/// Rejection rates of the randomized test on contaminated-normal data for
/// each `rho`; every `rho` is evaluated on the same simulated samples.
pub fn contamination_experiment(
    m: usize,
    n: usize,
    spec: &ContaminationSpec,
    rhos: &[f64],
    alpha: &BigRational,
    replicates: usize,
    rng: &RngSpec,
) -> Result<Vec<ContaminationRow>> {
    if replicates == 0 {
        return invalid("replicates must be at least 1");
    }
    spec.validate()?;
    let designs: Vec<Design> = rhos
        .iter()
        .map(|&rho| {
            let t = thresholds(m, n, rho)?;
            Design::new(m, n, t.s, t.r)
        })
        .collect::<Result<_>>()?;
    let decisions: Vec<TestDecision> = designs
        .iter()
        .map(|d| critical_value(d, alpha))
        .collect::<Result<_>>()?;

    let per_rep: Vec<Vec<usize>> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let sample = sample_contaminated_pair(m, n, spec, &mut rng.stream(i)).expect("validated");
            designs.iter().map(|d| v_of(&sample, d)).collect()
        })
        .collect();

    Ok(rhos
        .iter()
        .enumerate()
        .map(|(j, &rho)| {
            let vs: Vec<usize> = per_rep.iter().map(|row| row[j]).collect();
            let p = summarize(&decisions[j], &vs);
            ContaminationRow {
                rho,
                s: designs[j].s,
                r: designs[j].r,
                c: decisions[j].c,
                rejection_rate: p.beta,
                std_error: p.mc_std_error.unwrap_or(0.0),
            }
        })
        .collect())
}
