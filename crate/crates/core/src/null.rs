//! Exact distribution of `(A_s, B_r)` and `V = A_s + B_r` when both samples
//! come from the same continuous distribution.
//!
//! Everything is kept as integer counts over the `C(m+n, n)` equally likely
//! arrangements, so probabilities are exact rationals.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::exceedance::{Design, Region};
use crate::kernel::{binomial, binomial_i};
use crate::rational::{ratio, to_f64};

/// Joint null distribution of `(A_s, B_r)` as arrangement counts.
///
/// `k` indexes `A_s` (`0..=n`) and `i` indexes `B_r` (`0..=m`).
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmfTable {
    design: Design,
    counts: Vec<BigUint>,
    total: BigUint,
}

impl JointPmfTable {
    /// Empty table with the right shape; used by enumeration oracles.
    pub fn zeros(design: Design) -> Self {
        JointPmfTable {
            design,
            counts: vec![BigUint::ZERO; (design.n + 1) * (design.m + 1)],
            total: binomial(design.total() as u64, design.n as i64),
        }
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    fn index(&self, k: usize, i: usize) -> usize {
        k * (self.design.m + 1) + i
    }

    /// Number of arrangements with `A_s = k`, `B_r = i`.
    pub fn count(&self, k: usize, i: usize) -> BigUint {
        if k > self.design.n || i > self.design.m {
            return BigUint::ZERO;
        }
        self.counts[self.index(k, i)].clone()
    }

    pub fn add_count(&mut self, k: usize, i: usize, c: u64) {
        let idx = self.index(k, i);
        self.counts[idx] += c;
    }

    /// `C(m+n, n)`, the number of equally likely arrangements.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn prob(&self, k: usize, i: usize) -> BigRational {
        ratio(&self.count(k, i), &self.total)
    }

    pub fn prob_f64(&self, k: usize, i: usize) -> f64 {
        to_f64(&self.prob(k, i))
    }

    /// Sum of all counts divided by the total; exactly one for a valid table.
    pub fn total_mass(&self) -> BigRational {
        let sum: BigUint = self.counts.iter().sum();
        ratio(&sum, &self.total)
    }

    /// Nonzero cells as `(k, i, count)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &BigUint)> + '_ {
        let w = self.design.m + 1;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / w, idx % w, c))
    }

    /// Counts of `V = k + i` for `v = 0..=m+n`.
    pub fn v_counts(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::ZERO; self.design.total() + 1];
        for (k, i, c) in self.nonzero() {
            out[k + i] += c;
        }
        out
    }
}

/// Arrangement count for `P(A_s = k, B_r = i)`.
pub fn joint_count(design: &Design, k: usize, i: usize) -> BigUint {
    let Design { m, n, s, r } = *design;
    let (m, n, s, r, k, i) = (m as i64, n as i64, s as i64, r as i64, k as i64, i as i64);
    match Region::classify(design, k as usize, i as usize) {
        Some(Region::Lower) => {
            binomial_i(s + k, s)
                * binomial_i(r + i, r)
                * binomial_i(m + n - s - r - i - k - 2, n - r - k - 1)
        }
        Some(Region::Upper) => {
            binomial_i(m + n - r - i - 1, n - r - 1)
                * binomial_i(m + n - s - k - 1, m - s - 1)
                * binomial_i(k + i - m - n + s + r, k - n + r)
        }
        None => BigUint::ZERO,
    }
}

/// Exact joint null table of `(A_s, B_r)`.
pub fn joint_pmf_null(design: &Design) -> JointPmfTable {
    let mut table = JointPmfTable::zeros(*design);
    for k in 0..=design.n {
        for i in 0..=design.m {
            let idx = table.index(k, i);
            table.counts[idx] = joint_count(design, k, i);
        }
    }
    table
}

/// Null distribution of `V`, stored as upper-tail counts.
#[derive(Debug, Clone)]
pub struct VNullDistribution {
    design: Design,
    /// `tail[v]` = number of arrangements with `V >= v`, for `v = 0..=m+n+1`.
    tail: Vec<BigUint>,
    total: BigUint,
}

impl VNullDistribution {
    pub fn from_table(table: &JointPmfTable) -> Self {
        let counts = table.v_counts();
        let mut tail = vec![BigUint::ZERO; counts.len() + 1];
        for v in (0..counts.len()).rev() {
            tail[v] = &tail[v + 1] + &counts[v];
        }
        VNullDistribution {
            design: *table.design(),
            tail,
            total: table.total().clone(),
        }
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// Number of arrangements with `V >= v` (zero above `m+n`).
    pub fn tail_count(&self, v: usize) -> BigUint {
        self.tail.get(v).cloned().unwrap_or_default()
    }

    /// `P(V >= v)`.
    pub fn tail(&self, v: usize) -> BigRational {
        ratio(&self.tail_count(v), &self.total)
    }

    /// `P(V = v)`.
    pub fn pmf(&self, v: usize) -> BigRational {
        ratio(&(self.tail_count(v) - self.tail_count(v + 1)), &self.total)
    }

    /// `P(V <= z)`.
    pub fn cdf(&self, z: usize) -> BigRational {
        BigRational::one() - self.tail(z + 1)
    }
}

fn cache() -> &'static Mutex<HashMap<Design, Arc<VNullDistribution>>> {
    static CACHE: OnceLock<Mutex<HashMap<Design, Arc<VNullDistribution>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Null distribution of `V` for `design`, built once and shared.
pub fn v_null(design: &Design) -> Arc<VNullDistribution> {
    if let Some(d) = cache().lock().unwrap_or_else(|e| e.into_inner()).get(design) {
        return Arc::clone(d);
    }
    let dist = Arc::new(VNullDistribution::from_table(&joint_pmf_null(design)));
    cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .entry(*design)
        .or_insert(dist)
        .clone()
}

fn check_v(design: &Design, v: usize) -> Result<()> {
    if v > design.total() {
        return invalid(format!("value {v} outside 0..={}", design.total()));
    }
    Ok(())
}

/// `P(V <= z)` under the null.
pub fn cdf_v_null(design: &Design, z: usize) -> Result<BigRational> {
    check_v(design, z)?;
    Ok(v_null(design).cdf(z))
}

/// Upper-tail p-value `P(V >= v_observed)`.
pub fn p_value(design: &Design, v_observed: usize) -> Result<BigRational> {
    check_v(design, v_observed)?;
    Ok(v_null(design).tail(v_observed))
}

/// Older closed-form expression for the `s = r = 0` tail, evaluated as
/// written. Kept for comparison only; it agrees with `P(V >= z)` for
/// `z < m+n` and gives 0 at `z = m+n`.
pub fn sidak_closed_form_tail(m: usize, n: usize, z: usize) -> Result<BigRational> {
    if m == 0 || n == 0 {
        return invalid("sample sizes must be positive");
    }
    if z > m + n {
        return invalid(format!("value {z} outside 0..={}", m + n));
    }
    let (mi, ni, zi) = (m as i64, n as i64, z as i64);
    let mut num = binomial_i(mi + ni - zi, ni);
    for j in 0..zi {
        num += binomial_i(mi + ni - zi - 1, mi - j);
    }
    Ok(ratio(&num, &binomial((m + n) as u64, n as i64)))
}

/// Critical value and randomization of the exact-level test that rejects
/// for large `V`.
///
/// `c` is the smallest value with `P(V >= c) <= alpha`. The test rejects
/// outright when `V >= c` and with probability `pi` when `V = c - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestDecision {
    pub design: Design,
    pub c: usize,
    pub alpha: BigRational,
    /// `P(V >= c)`.
    pub alpha1: BigRational,
    /// `P(V >= c - 1)`.
    pub alpha2: BigRational,
    pub pi: BigRational,
    /// No attainable threshold: `c = m+n+1` and rejection only happens
    /// through randomization at `m+n`.
    pub degenerate: bool,
}

impl TestDecision {
    /// Boundary value at which the test randomizes (`c - 1`), the figure
    /// usually printed in critical-value tables.
    pub fn table_value(&self) -> usize {
        self.c - 1
    }

    pub fn reject_probability(&self, v: usize) -> BigRational {
        if v >= self.c {
            BigRational::one()
        } else if v + 1 == self.c {
            self.pi.clone()
        } else {
            BigRational::zero()
        }
    }

    /// Exact size `alpha1 + pi (alpha2 - alpha1)`.
    pub fn size(&self) -> BigRational {
        &self.alpha1 + &self.pi * (&self.alpha2 - &self.alpha1)
    }

    pub fn alpha1_f64(&self) -> f64 {
        to_f64(&self.alpha1)
    }

    pub fn alpha2_f64(&self) -> f64 {
        to_f64(&self.alpha2)
    }

    pub fn pi_f64(&self) -> f64 {
        to_f64(&self.pi)
    }
}

/// Critical value for level `alpha` (an exact rational in `(0, 1)`).
pub fn critical_value(design: &Design, alpha: &BigRational) -> Result<TestDecision> {
    if *alpha <= BigRational::zero() || *alpha >= BigRational::one() {
        return invalid("alpha must lie strictly between 0 and 1");
    }
    let dist = v_null(design);
    let total = BigInt::from(dist.total().clone());
    // P(V >= c) <= alpha  <=>  tail_count(c) <= alpha * total
    let bound = alpha * BigRational::from_integer(total);
    let top = design.total() + 1;
    let c = (1..=top)
        .find(|&c| BigRational::from_integer(dist.tail_count(c).into()) <= bound)
        .unwrap_or(top);
    let alpha1 = dist.tail(c);
    let alpha2 = dist.tail(c - 1);
    let pi = (alpha - &alpha1) / (&alpha2 - &alpha1);
    Ok(TestDecision {
        design: *design,
        c,
        alpha: alpha.clone(),
        alpha1,
        alpha2,
        pi,
        degenerate: c == top,
    })
}

/// Probability of rejecting when `v_observed` is seen.
pub fn randomized_reject(v_observed: usize, decision: &TestDecision) -> f64 {
    to_f64(&decision.reject_probability(v_observed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_decimal;

    fn d(m: usize, n: usize, s: usize, r: usize) -> Design {
        Design::new(m, n, s, r).unwrap()
    }

    fn q(a: u64, b: u64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn one_by_one() {
        let t = joint_pmf_null(&d(1, 1, 0, 0));
        assert_eq!(t.prob(0, 0), q(1, 2));
        assert_eq!(t.prob(1, 1), q(1, 2));
        assert_eq!(t.prob(0, 1), q(0, 1));
        assert_eq!(t.prob(1, 0), q(0, 1));
        assert_eq!(cdf_v_null(&d(1, 1, 0, 0), 0).unwrap(), q(1, 2));
    }

    #[test]
    fn ten_by_ten_tails() {
        let v = v_null(&d(10, 10, 0, 0));
        assert_eq!(v.total(), &BigUint::from(184_756u32));
        let expected = [(5, 15_444u32), (6, 8008), (7, 4070), (8, 2046), (9, 1024), (10, 512), (11, 256)];
        for (z, c) in expected {
            assert_eq!(v.tail_count(z), BigUint::from(c), "z={z}");
        }
        assert_eq!(cdf_v_null(&d(10, 10, 0, 0), 20).unwrap(), q(1, 1));
        assert_eq!(
            cdf_v_null(&d(10, 10, 0, 0), 7).unwrap(),
            q(1, 1) - q(2046, 184_756)
        );
    }

    #[test]
    fn example_p_values() {
        assert_eq!(p_value(&d(10, 10, 1, 1), 10).unwrap(), q(5312, 184_756));
        assert_eq!(p_value(&d(10, 10, 2, 2), 10).unwrap(), q(19_852, 184_756));
        assert!(p_value(&d(10, 10, 0, 0), 21).is_err());
    }

    #[test]
    fn closed_form_behaviour() {
        assert_eq!(sidak_closed_form_tail(10, 10, 0).unwrap(), q(1, 1));
        assert_eq!(sidak_closed_form_tail(10, 10, 20).unwrap(), q(0, 1));
        assert_eq!(sidak_closed_form_tail(10, 10, 8).unwrap(), q(2046, 184_756));
        for (m, n) in [(3, 5), (6, 6), (8, 4)] {
            let dist = v_null(&d(m, n, 0, 0));
            for z in 0..m + n {
                assert_eq!(sidak_closed_form_tail(m, n, z).unwrap(), dist.tail(z));
            }
        }
    }

    #[test]
    fn critical_values() {
        let alpha = parse_decimal("0.05").unwrap();
        let t = critical_value(&d(10, 10, 0, 0), &alpha).unwrap();
        assert_eq!(t.table_value(), 5);
        let t = critical_value(&d(40, 20, 0, 0), &alpha).unwrap();
        assert_eq!((t.c, t.table_value()), (8, 7));
        assert!((t.alpha1_f64() - 0.0432).abs() < 5e-4);
        assert!((t.alpha2_f64() - 0.0679).abs() < 5e-4);
        assert_eq!(t.size(), alpha);
        let pi = t.pi_f64();
        assert!((randomized_reject(7, &t) - pi).abs() < 1e-15);
        assert_eq!(randomized_reject(11, &t), 1.0);
        assert_eq!(randomized_reject(0, &t), 0.0);
        let t = critical_value(&d(40, 40, 10, 10), &alpha).unwrap();
        assert_eq!(t.table_value(), 33);
    }

    #[test]
    fn degenerate_level() {
        let t = critical_value(&d(2, 2, 0, 0), &parse_decimal("0.01").unwrap()).unwrap();
        assert!(t.degenerate);
        assert_eq!(t.c, 5);
        assert_eq!(t.alpha1, BigRational::zero());
        assert_eq!(t.size(), parse_decimal("0.01").unwrap());
    }

    #[test]
    fn symmetry_and_reflection() {
        for (m, n) in [(5, 5), (6, 4), (7, 9)] {
            for s in 0..m {
                for r in 0..n {
                    let t = joint_pmf_null(&d(m, n, s, r));
                    assert_eq!(t.total_mass(), q(1, 1));
                    let refl = joint_pmf_null(&d(n, m, n - r - 1, m - s - 1));
                    for k in n - r..=n {
                        for i in m - s..=m {
                            assert_eq!(t.prob(k, i), refl.prob(m - i, n - k));
                        }
                    }
                    if m == n && s == r {
                        for k in 0..=n {
                            for i in 0..=m {
                                assert_eq!(t.count(k, i), t.count(i, k));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn critical_value_monotone_in_alpha() {
        let design = d(12, 15, 2, 3);
        let mut last = usize::MAX;
        for j in 1..100u64 {
            let t = critical_value(&design, &q(j, 100)).unwrap();
            assert!(t.c <= last);
            assert_eq!(t.size(), q(j, 100));
            last = t.c;
        }
    }
}
