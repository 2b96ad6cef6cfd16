//! Exact and approximate distributions for two-sample exceedance tests.
//!
//! The central statistic is `V = A_s + B_r`, where `A_s` counts Y
//! observations above the `(m-s)`-th smallest X and `B_r` counts X
//! observations below the `(r+1)`-th smallest Y. Large values indicate that
//! Y is stochastically larger than X.
//!
//! * [`null`]: exact null distribution (rational), critical values and the
//!   randomized exact-level test.
//! * [`lehmann`]: distribution and exact power under Lehmann alternatives.
//! * [`approx`]: negative-binomial and chi-square large-sample tails.
//! * [`exceedance`]: statistics computed from data, plus the precedence,
//!   maximal-precedence, `M` and rank-sum companions.
//! * [`sim`]: seeded Monte Carlo and exhaustive enumeration oracles.
//! * [`kernel`]: exact binomials, log-gamma and extended-precision sums.
//!
//! ```
//! use exceedance_core::rational::{parse_decimal, to_f64};
//! use exceedance_core::{critical_value, exceedance_stats, p_value, randomized_reject};
//! use exceedance_core::{Design, SamplePair, TiePolicy};
//!
//! let sample = SamplePair::new(
//!     vec![0.49, 0.64, 0.82, 0.93, 1.08, 1.99, 2.06, 2.15, 2.57, 4.75],
//!     vec![1.34, 1.49, 1.56, 2.10, 2.12, 3.83, 3.97, 5.13, 7.21, 8.71],
//! )?;
//! let design = Design::from_rho(10, 10, 0.1)?;
//! let v = exceedance_stats(&sample, &design.spec(), TiePolicy::Reject)?.v;
//! assert_eq!(v, 10);
//!
//! let p = p_value(&design, v)?;
//! let decision = critical_value(&design, &parse_decimal("0.05")?)?;
//! assert!(to_f64(&p) < 0.05);
//! assert_eq!(randomized_reject(v, &decision), 1.0);
//! # Ok::<(), exceedance_core::Error>(())
//! ```

pub mod approx;
pub mod error;
pub mod exceedance;
pub mod kernel;
pub mod lehmann;
pub mod null;
pub mod rational;
pub mod sim;

pub use error::{Error, Group, Result};
pub use exceedance::{
    exceedance_stats, maximal_precedence, m_statistic, precedence_statistic, thresholds, wilcoxon_rank_sum,
    Design, ExceedanceCounts, Region, SamplePair, ThresholdSpec, TiePolicy,
};
pub use kernel::PrecisionPolicy;
pub use lehmann::{joint_pmf_lehmann, power_exact, LehmannEngine, LehmannParam, LehmannTable, PowerMethod, PowerResult};
pub use null::{
    cdf_v_null, critical_value, joint_pmf_null, p_value, randomized_reject, sidak_closed_form_tail, v_null,
    JointPmfTable, TestDecision, VNullDistribution,
};
pub use num_rational::BigRational;
