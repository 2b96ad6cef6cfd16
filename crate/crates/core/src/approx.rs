//! Large-sample approximations to the null distribution of `V`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::kernel::{binomial, log_gamma};
use crate::rational::f64_to_decimal;

/// Degrees-of-freedom rule for the chi-square approximation, with
/// `s = floor(rho m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DfMode {
    /// `s + 1` degrees of freedom.
    Text,
    /// `2 (s + 1)` degrees of freedom, the chi-square matching the
    /// negative-binomial limit.
    #[default]
    Matched,
}

impl DfMode {
    pub fn df(&self, s: u64) -> f64 {
        match self {
            DfMode::Text => (s + 1) as f64,
            DfMode::Matched => (2 * (s + 1)) as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ApproxConfig {
    pub df_mode: DfMode,
}

/// Negative-binomial cdf with `2(s+1)` successes and probability 1/2:
/// `sum_{i=0}^{z} C(2s+1+i, i) 2^-(2(s+1)+i)`.
pub fn nb_cdf_approx(z: u64, s: u64) -> f64 {
    let size = 2.0 * (s as f64 + 1.0);
    let mut ln_term = -size * std::f64::consts::LN_2;
    let mut acc = ln_term.exp();
    for i in 1..=z {
        let i = i as f64;
        ln_term += ((size - 1.0 + i) / (2.0 * i)).ln();
        acc += ln_term.exp();
    }
    acc.min(1.0)
}

/// The same cdf as an exact rational.
pub fn nb_cdf_exact(z: u64, s: u64) -> BigRational {
    let size = 2 * (s + 1);
    let shift = (size + z) as usize;
    let mut num = BigInt::zero();
    for i in 0..=z {
        // C(size-1+i, i) / 2^(size+i), scaled to the common denominator 2^(size+z)
        let c = BigInt::from(binomial(size - 1 + i, i as i64));
        num += c << (z - i) as usize;
    }
    BigRational::new(num, BigInt::one() << shift)
}

/// `(c + 2) / 2^(c+1)`, the large-sample tail `P(V >= c)` for `s = r = 0`.
pub fn sidak_asymptotic_tail(c: u64) -> f64 {
    (c as f64 + 2.0) * 2f64.powi(-((c + 1).min(i32::MAX as u64) as i32))
}

pub fn sidak_asymptotic_tail_exact(c: u64) -> BigRational {
    BigRational::new(BigInt::from(c + 2), BigInt::one() << (c + 1) as usize)
}

/// Upper tail `1 - nb_cdf(c - 1, s)` as an exact rational.
pub fn nb_tail_exact(c: u64, s: u64) -> BigRational {
    if c == 0 {
        BigRational::one()
    } else {
        BigRational::one() - nb_cdf_exact(c - 1, s)
    }
}

/// Chi-square approximation to `P(V >= c)` with degrees of freedom chosen
/// by `config` from `s = floor(rho m)`.
pub fn chisq_tail_approx(c: u64, m: usize, rho: f64, config: &ApproxConfig) -> Result<f64> {
    if !(0.0..1.0).contains(&rho) {
        return invalid(format!("rho must lie in [0, 1), got {rho}"));
    }
    let s = (f64_to_decimal(rho)? * BigRational::from_integer(m.into()))
        .floor()
        .to_integer();
    let s: u64 = s.try_into().unwrap_or(0);
    chisq_upper_tail(c as f64, config.df_mode.df(s))
}

/// `P(chi^2_df > x)`.
pub fn chisq_upper_tail(x: f64, df: f64) -> Result<f64> {
    if !(df > 0.0) {
        return invalid(format!("degrees of freedom must be positive, got {df}"));
    }
    if x.is_nan() {
        return invalid("chi-square argument is NaN");
    }
    if x <= 0.0 {
        return Ok(1.0);
    }
    regularized_gamma_q(df / 2.0, x / 2.0)
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn regularized_gamma_q(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || x < 0.0 {
        return invalid(format!("incomplete gamma needs a > 0 and x >= 0 (a = {a}, x = {x})"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let ln_prefix = a * x.ln() - x - log_gamma(a)?;
    if x < a + 1.0 {
        // P(a, x) by its power series
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..10_000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        Ok((1.0 - sum * ln_prefix.exp()).max(0.0))
    } else {
        // Q(a, x) by its continued fraction (modified Lentz)
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok(ln_prefix.exp() * h)
    }
}
