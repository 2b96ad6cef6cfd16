//! Distribution of `(A_s, B_r)` under the Lehmann alternative
//! `G = 1 - (1 - F)^(1/eta)` and the exact power of the randomized test.
//!
//! Each probability is a factorial prefactor times two alternating sums
//! whose terms are reciprocals of rising products such as
//! `prod_{j=a}^{b} (j + w/eta)`. The sums cancel heavily for moderate
//! sample sizes, so they are evaluated with [`alternating_sum_with`] on
//! extended-precision terms. Rising products are taken from prefix-product
//! tables shared by every threshold pair `(s, r)` of a given `(m, n, eta)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use log::warn;
use num_rational::BigRational;

use crate::error::{invalid, Error, Result};
use crate::exceedance::Design;
use crate::kernel::{alternating_sum_with, binomial, digits_to_bits, ln_factorial, AltSum, HpFloat, PrecisionPolicy};
use crate::null::{critical_value, TestDecision};

/// Negative entries above this magnitude are treated as precision failures.
pub const NEGATIVE_TOLERANCE: f64 = 1e-12;

/// Lehmann parameter; `1` is the null hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LehmannParam(f64);

impl LehmannParam {
    pub fn new(eta: f64) -> Result<Self> {
        if !eta.is_finite() || eta < 1.0 {
            return invalid(format!("eta must be a finite value >= 1, got {eta}"));
        }
        Ok(LehmannParam(eta))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Tables at one working precision.
struct Level {
    binom: Vec<Vec<HpFloat>>,
    /// `f[w][h] = prod_{j=1}^{h} (j + w/eta)`.
    f: Vec<Vec<HpFloat>>,
    f_inv: Vec<Vec<HpFloat>>,
    /// `eta / w`, the reciprocal of the `j = 0` factor.
    eta_over: Vec<HpFloat>,
    /// `h[u][l] = prod_{j=1}^{l} (j + u eta)`.
    h: Vec<Vec<HpFloat>>,
    h_inv: Vec<Vec<HpFloat>>,
}

fn prefix_products(factor: impl Fn(u64) -> HpFloat, len: usize, bits: u64) -> (Vec<HpFloat>, Vec<HpFloat>) {
    let mut prod = Vec::with_capacity(len + 1);
    let mut inv = Vec::with_capacity(len + 1);
    prod.push(HpFloat::one(bits));
    inv.push(HpFloat::one(bits));
    for j in 1..=len as u64 {
        let x = factor(j);
        let next_inv = inv.last().unwrap().div(&x);
        prod.push(prod.last().unwrap().mul(&x));
        inv.push(next_inv);
    }
    (prod, inv)
}

impl Level {
    fn build(m: usize, n: usize, eta: f64, bits: u64) -> Level {
        let top = m.max(n);
        let binom = (0..=top)
            .map(|a| {
                (0..=a)
                    .map(|b| HpFloat::from_biguint(&binomial(a as u64, b as i64), bits))
                    .collect()
            })
            .collect();
        let eta_hp = HpFloat::from_f64(eta, bits);
        let inv_eta = HpFloat::one(bits).div(&eta_hp);

        let mut f = Vec::with_capacity(n + 1);
        let mut f_inv = Vec::with_capacity(n + 1);
        let mut eta_over = Vec::with_capacity(n + 1);
        for w in 0..=n as u64 {
            let shift = inv_eta.mul_u64(w);
            let (p, q) = prefix_products(|j| HpFloat::from_u64(j, bits).add(&shift), m, bits);
            f.push(p);
            f_inv.push(q);
            eta_over.push(if w == 0 {
                HpFloat::zero(bits)
            } else {
                eta_hp.div(&HpFloat::from_u64(w, bits))
            });
        }

        let mut h = Vec::with_capacity(m + 1);
        let mut h_inv = Vec::with_capacity(m + 1);
        for u in 0..=m as u64 {
            let shift = eta_hp.mul_u64(u);
            let (p, q) = prefix_products(|j| HpFloat::from_u64(j, bits).add(&shift), n, bits);
            h.push(p);
            h_inv.push(q);
        }
        Level {
            binom,
            f,
            f_inv,
            eta_over,
            h,
            h_inv,
        }
    }

    /// `1 / prod_{j=lo}^{hi} (j + w/eta)` for `lo <= hi`.
    fn recip_f(&self, w: usize, lo: usize, hi: usize) -> HpFloat {
        if lo == 0 {
            self.f_inv[w][hi].mul(&self.eta_over[w])
        } else {
            self.f_inv[w][hi].mul(&self.f[w][lo - 1])
        }
    }

    /// `1 / prod_{j=lo}^{hi} (j + u eta)` for `1 <= lo <= hi`.
    fn recip_h(&self, u: usize, lo: usize, hi: usize) -> HpFloat {
        self.h_inv[u][hi].mul(&self.h[u][lo - 1])
    }
}

fn signed(term: HpFloat, index: usize) -> HpFloat {
    if index % 2 == 1 {
        term.neg()
    } else {
        term
    }
}

/// Evaluator for all Lehmann tables with fixed `(m, n, eta)`.
pub struct LehmannEngine {
    m: usize,
    n: usize,
    eta: LehmannParam,
    policy: PrecisionPolicy,
    levels: Mutex<HashMap<u64, Arc<Level>>>,
}

impl std::fmt::Debug for LehmannEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LehmannEngine")
            .field("m", &self.m)
            .field("n", &self.n)
            .field("eta", &self.eta)
            .field("policy", &self.policy)
            .finish()
    }
}

impl LehmannEngine {
    pub fn new(m: usize, n: usize, eta: LehmannParam, policy: PrecisionPolicy) -> Result<Self> {
        if m == 0 || n == 0 {
            return invalid("sample sizes must be positive");
        }
        policy.validate()?;
        Ok(LehmannEngine {
            m,
            n,
            eta,
            policy,
            levels: Mutex::new(HashMap::new()),
        })
    }

    pub fn eta(&self) -> LehmannParam {
        self.eta
    }

    fn level(&self, bits: u64) -> Arc<Level> {
        let mut levels = self.levels.lock().unwrap_or_else(|e| e.into_inner());
        levels
            .entry(bits)
            .or_insert_with(|| Arc::new(Level::build(self.m, self.n, self.eta.0, bits)))
            .clone()
    }

    fn sum<F>(&self, k: usize, i: usize, make: F) -> Result<AltSum>
    where
        F: Fn(&Level) -> Vec<HpFloat>,
    {
        alternating_sum_with(&self.policy, |bits| make(&self.level(bits))).map_err(|e| Error::AtEntry {
            k,
            i,
            source: Box::new(e),
        })
    }

    /// Joint probability table for `design` (which must match the engine's sizes).
    pub fn table(&self, design: &Design) -> Result<LehmannTable> {
        if design.m != self.m || design.n != self.n {
            return invalid(format!(
                "design sizes ({}, {}) differ from engine sizes ({}, {})",
                design.m, design.n, self.m, self.n
            ));
        }
        // warm the base level before any sum needs it
        self.level(digits_to_bits(self.policy.base_precision));

        let Design { m, n, s, r } = *design;
        let ln_eta = self.eta.0.ln();
        let ln_mn = ln_factorial(m as u64) + ln_factorial(n as u64);
        let mut probs = vec![0.0; (n + 1) * (m + 1)];
        let mut clamped = 0usize;

        // lower region: k <= n-r-1, i <= m-s-1
        let s_p: Vec<AltSum> = (0..m - s)
            .map(|i| {
                self.sum(0, i, |lv| {
                    (0..=r)
                        .map(|p| signed(lv.binom[r][p].mul(&lv.recip_f(n - r + p, m - i, m)), p))
                        .collect()
                })
            })
            .collect::<Result<_>>()?;
        for k in 0..n - r {
            let big_n = n - k - r - 1;
            let ln_pre = ln_mn
                - ln_eta
                - ln_factorial(r as u64)
                - ln_factorial(s as u64)
                - ln_factorial(big_n as u64)
                - ln_factorial(k as u64);
            for (i, sp) in s_p.iter().enumerate() {
                let s_z = self.sum(k, i, |lv| {
                    (0..=big_n)
                        .map(|z| signed(lv.binom[big_n][z].mul(&lv.recip_f(z + k, s + 1, m - i)), z))
                        .collect()
                })?;
                probs[k * (m + 1) + i] = entry(k, i, ln_pre, sp, &s_z, &mut clamped)?;
            }
        }

        // upper region: k >= n-r, i >= m-s
        let s_zp: Vec<AltSum> = (n - r..=n)
            .map(|k| {
                self.sum(k, m - s, |lv| {
                    (0..m - s)
                        .map(|z| signed(lv.binom[m - s - 1][z].mul(&lv.recip_h(z + s + 1, k, n)), z))
                        .collect()
                })
            })
            .collect::<Result<_>>()?;
        for (k, szp) in (n - r..=n).zip(&s_zp) {
            for i in m - s..=m {
                let big_m = i + s - m;
                let ln_pre = ln_mn + ln_eta
                    - ln_factorial((n - r - 1) as u64)
                    - ln_factorial((m - s - 1) as u64)
                    - ln_factorial(big_m as u64)
                    - ln_factorial((m - i) as u64);
                let s_pp = self.sum(k, i, |lv| {
                    (0..=big_m)
                        .map(|p| signed(lv.binom[big_m][p].mul(&lv.recip_h(m - i + p, n - r, k)), p))
                        .collect()
                })?;
                probs[k * (m + 1) + i] = entry(k, i, ln_pre, &s_pp, szp, &mut clamped)?;
            }
        }

        if clamped > 0 {
            warn!("clamped {clamped} tiny negative Lehmann probabilities to zero for {design:?}");
        }
        Ok(LehmannTable {
            design: *design,
            eta: self.eta,
            probs,
            clamped,
        })
    }
}

fn entry(k: usize, i: usize, ln_pre: f64, a: &AltSum, b: &AltSum, clamped: &mut usize) -> Result<f64> {
    if a.value.is_zero() || b.value.is_zero() {
        return Ok(0.0);
    }
    let mag = (ln_pre + a.ln_abs() + b.ln_abs()).exp();
    if a.value.is_negative() == b.value.is_negative() {
        return Ok(mag);
    }
    if mag < NEGATIVE_TOLERANCE {
        *clamped += 1;
        Ok(0.0)
    } else {
        Err(Error::NegativeProbability { k, i, value: -mag })
    }
}

/// Joint probabilities of `(A_s, B_r)` under a Lehmann alternative.
#[derive(Debug, Clone)]
pub struct LehmannTable {
    design: Design,
    eta: LehmannParam,
    probs: Vec<f64>,
    clamped: usize,
}

impl LehmannTable {
    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn eta(&self) -> LehmannParam {
        self.eta
    }

    /// Number of tiny negative entries that were set to zero.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn prob(&self, k: usize, i: usize) -> f64 {
        if k > self.design.n || i > self.design.m {
            return 0.0;
        }
        self.probs[k * (self.design.m + 1) + i]
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `P(V = v)` for `v = 0..=m+n`.
    pub fn v_pmf(&self) -> Vec<f64> {
        let w = self.design.m + 1;
        let mut out = vec![0.0; self.design.total() + 1];
        for (idx, p) in self.probs.iter().enumerate() {
            out[idx / w + idx % w] += p;
        }
        out
    }

    /// `P(V >= v)`.
    pub fn tail(&self, v: usize) -> f64 {
        self.v_pmf().iter().skip(v).sum()
    }
}

/// Lehmann joint table with a fresh engine.
pub fn joint_pmf_lehmann(design: &Design, eta: LehmannParam, policy: &PrecisionPolicy) -> Result<LehmannTable> {
    LehmannEngine::new(design.m, design.n, eta, *policy)?.table(design)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerMethod {
    Exact,
    MonteCarlo,
}

impl std::fmt::Display for PowerMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PowerMethod::Exact => "exact",
            PowerMethod::MonteCarlo => "monte-carlo",
        })
    }
}

/// Power of the randomized test: `beta = pi beta2 + (1 - pi) beta1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    pub beta: f64,
    /// Rejection probability at `c`.
    pub beta1: f64,
    /// Rejection probability at `c - 1`.
    pub beta2: f64,
    pub pi: f64,
    pub c: usize,
    pub method: PowerMethod,
    pub mc_std_error: Option<f64>,
}

impl PowerResult {
    pub fn from_tails(decision: &TestDecision, beta1: f64, beta2: f64, method: PowerMethod) -> Self {
        let pi = decision.pi_f64();
        PowerResult {
            beta: pi * beta2 + (1.0 - pi) * beta1,
            beta1,
            beta2,
            pi,
            c: decision.c,
            method,
            mc_std_error: None,
        }
    }
}

/// Exact power using a caller-supplied engine.
pub fn power_with_engine(engine: &LehmannEngine, design: &Design, alpha: &BigRational) -> Result<PowerResult> {
    let decision = critical_value(design, alpha)?;
    let table = engine.table(design)?;
    let pmf = table.v_pmf();
    let beta1: f64 = pmf.iter().skip(decision.c).sum();
    let beta2: f64 = pmf.iter().skip(decision.c - 1).sum();
    Ok(PowerResult::from_tails(&decision, beta1, beta2, PowerMethod::Exact))
}

/// Exact power of the level-`alpha` randomized test at `eta`.
pub fn power_exact(
    design: &Design,
    alpha: &BigRational,
    eta: LehmannParam,
    policy: &PrecisionPolicy,
) -> Result<PowerResult> {
    let engine = LehmannEngine::new(design.m, design.n, eta, *policy)?;
    power_with_engine(&engine, design, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::null::joint_pmf_null;
    use crate::rational::parse_decimal;

    fn eta(v: f64) -> LehmannParam {
        LehmannParam::new(v).unwrap()
    }

    #[test]
    fn param_bounds() {
        assert!(LehmannParam::new(0.5).is_err());
        assert!(LehmannParam::new(f64::INFINITY).is_err());
        assert!(LehmannParam::new(1.0).is_ok());
    }

    #[test]
    fn reduces_to_null() {
        let engine = LehmannEngine::new(7, 5, eta(1.0), PrecisionPolicy::default()).unwrap();
        for s in 0..7 {
            for r in 0..5 {
                let design = Design::new(7, 5, s, r).unwrap();
                let exact = joint_pmf_null(&design);
                let table = engine.table(&design).unwrap();
                for k in 0..=5 {
                    for i in 0..=7 {
                        let want = exact.prob_f64(k, i);
                        let got = table.prob(k, i);
                        if want == 0.0 {
                            assert_eq!(got, 0.0);
                        } else {
                            assert!(((got - want) / want).abs() < 1e-12, "{design:?} ({k},{i})");
                        }
                    }
                }
            }
        }
    }

    // (m, n, s, r) = (3, 2, 1, 0) at eta = 2, from summing the sequential
    // selection probabilities of all ten arrangements
    #[test]
    fn small_case_exact_values() {
        let design = Design::new(3, 2, 1, 0).unwrap();
        let t = joint_pmf_lehmann(&design, eta(2.0), &PrecisionPolicy::default()).unwrap();
        let expected = [
            ((0, 0), 11.0 / 140.0),
            ((0, 1), 1.0 / 20.0),
            ((1, 0), 6.0 / 35.0),
            ((1, 1), 1.0 / 5.0),
            ((2, 2), 1.0 / 4.0),
            ((2, 3), 1.0 / 4.0),
        ];
        for ((k, i), want) in expected {
            assert!((t.prob(k, i) - want).abs() < 1e-14, "({k},{i})");
        }
        assert!((t.total_mass() - 1.0).abs() < 1e-14);
        assert_eq!(t.prob(2, 1), 0.0);
    }

    #[test]
    fn normalized_at_alternative() {
        let design = Design::new(10, 10, 0, 0).unwrap();
        let t = joint_pmf_lehmann(&design, eta(2.0), &PrecisionPolicy::default()).unwrap();
        assert!((t.total_mass() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn power_at_null_is_alpha() {
        let alpha = parse_decimal("0.05").unwrap();
        let design = Design::new(10, 12, 1, 2).unwrap();
        let p = power_exact(&design, &alpha, eta(1.0), &PrecisionPolicy::default()).unwrap();
        assert!((p.beta - 0.05).abs() < 1e-10);
        assert!(p.beta1 <= p.beta && p.beta <= p.beta2);
    }

    #[test]
    fn power_example() {
        let alpha = parse_decimal("0.05").unwrap();
        let design = Design::new(10, 10, 0, 0).unwrap();
        let p = power_exact(&design, &alpha, eta(2.0), &PrecisionPolicy::default()).unwrap();
        assert!((p.beta - 0.3212).abs() < 0.01, "{}", p.beta);
        assert_eq!(p.method, PowerMethod::Exact);
    }
}
