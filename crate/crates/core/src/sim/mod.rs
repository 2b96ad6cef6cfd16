//! Random sampling, Monte Carlo power and exhaustive enumeration oracles.

pub mod oracle;
pub mod power;
pub mod rng;

pub use oracle::{
    lehmann_oracle, permutation_oracle, permutation_oracle_all, permutation_pvalue, permutation_pvalue_of,
    Arrangement, Statistic, ENUMERATION_LIMIT,
};
pub use power::{contamination_experiment, mc_power, ContaminationRow};
pub use rng::{
    sample_contaminated_pair, sample_lehmann_pair, ContaminationSpec, NormalComponent, RngSpec, DEFAULT_SEED,
};
