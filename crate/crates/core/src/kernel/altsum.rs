//! Sums of terms with alternating signs evaluated in extended precision.
//!
//! Terms are accumulated exactly at a common binary exponent and rounded
//! once, so the only error in the result comes from the terms themselves.
//! When the result is small compared to the largest term (heavy
//! cancellation) the computation is repeated with more digits.

use log::debug;

use super::hpfloat::{digits_to_bits, HpFloat};
use crate::error::{invalid, Error, Result};

/// Controls working precision and when to escalate it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionPolicy {
    /// Initial working precision in decimal digits.
    pub base_precision: u32,
    /// Precision multiplier applied on each escalation.
    pub escalation_factor: u32,
    /// `|sum| / max|term|` below this ratio counts as cancellation.
    pub cancellation_threshold: f64,
    /// Maximum number of escalations before giving up.
    pub max_escalations: u32,
    /// Estimated relative error that is good enough even under cancellation.
    pub target_rel_error: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            base_precision: 50,
            escalation_factor: 2,
            cancellation_threshold: 1e-8,
            max_escalations: 4,
            target_rel_error: 1e-12,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(base_precision: u32, escalation_factor: u32, cancellation_threshold: f64) -> Result<Self> {
        let p = PrecisionPolicy {
            base_precision,
            escalation_factor,
            cancellation_threshold,
            ..Default::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_base_precision(mut self, digits: u32) -> Result<Self> {
        self.base_precision = digits;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_precision < 30 {
            return invalid(format!(
                "base precision must be at least 30 digits, got {}",
                self.base_precision
            ));
        }
        if self.escalation_factor < 2 {
            return invalid(format!(
                "escalation factor must be at least 2, got {}",
                self.escalation_factor
            ));
        }
        if !(self.cancellation_threshold > 0.0 && self.cancellation_threshold < 1.0) {
            return invalid("cancellation threshold must lie in (0, 1)");
        }
        if !(self.target_rel_error > 0.0) {
            return invalid("target relative error must be positive");
        }
        Ok(())
    }

    fn digits_at(&self, escalation: u32) -> u32 {
        self.base_precision
            .saturating_mul(self.escalation_factor.saturating_pow(escalation))
    }
}

/// A term given by its sign and the natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogTerm {
    pub negative: bool,
    pub ln_abs: f64,
}

impl LogTerm {
    pub fn pos(ln_abs: f64) -> Self {
        LogTerm {
            negative: false,
            ln_abs,
        }
    }

    pub fn neg(ln_abs: f64) -> Self {
        LogTerm {
            negative: true,
            ln_abs,
        }
    }
}

/// Result of an alternating summation.
#[derive(Debug, Clone)]
pub struct AltSum {
    pub value: HpFloat,
    /// Estimated relative error of `value`.
    pub rel_error: f64,
    /// Digits used for the accepted evaluation.
    pub digits: u32,
    pub escalations: u32,
}

impl AltSum {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn ln_abs(&self) -> f64 {
        self.value.ln_abs()
    }
}

/// Sum terms given in sign/log-magnitude form.
pub fn alternating_sum(terms: &[LogTerm], policy: &PrecisionPolicy) -> Result<AltSum> {
    alternating_sum_with(policy, |bits| {
        terms
            .iter()
            .filter(|t| t.ln_abs != f64::NEG_INFINITY)
            .map(|t| {
                let v = HpFloat::exp_f64(t.ln_abs, bits);
                if t.negative {
                    v.neg()
                } else {
                    v
                }
            })
            .collect()
    })
}

/// Sum terms produced by `make_terms(bits)`, which must evaluate every term
/// with a relative error of a few units in the last of `bits` bits.
pub fn alternating_sum_with<F>(policy: &PrecisionPolicy, mut make_terms: F) -> Result<AltSum>
where
    F: FnMut(u64) -> Vec<HpFloat>,
{
    policy.validate()?;
    let mut previous_zero = false;
    for escalation in 0..=policy.max_escalations {
        let digits = policy.digits_at(escalation);
        let bits = digits_to_bits(digits);
        let terms = make_terms(bits);
        let sum = HpFloat::exact_sum(terms.iter(), bits);

        if terms.is_empty() {
            return Ok(AltSum {
                value: sum,
                rel_error: 0.0,
                digits,
                escalations: escalation,
            });
        }
        if sum.is_zero() {
            if previous_zero {
                return Ok(AltSum {
                    value: sum,
                    rel_error: 0.0,
                    digits,
                    escalations: escalation,
                });
            }
            previous_zero = true;
            continue;
        }
        previous_zero = false;

        let ln_sum = sum.ln_abs();
        let ln_max = terms
            .iter()
            .map(HpFloat::ln_abs)
            .fold(f64::NEG_INFINITY, f64::max);
        let ln_total = ln_max
            + terms
                .iter()
                .map(|t| (t.ln_abs() - ln_max).exp())
                .sum::<f64>()
                .ln();
        let ratio = (ln_sum - ln_max).exp();
        let rel_error = ((ln_total - ln_sum) - (bits as f64 - 16.0) * std::f64::consts::LN_2).exp();

        if ratio >= policy.cancellation_threshold || rel_error <= policy.target_rel_error {
            return Ok(AltSum {
                value: sum,
                rel_error,
                digits,
                escalations: escalation,
            });
        }
        debug!(
            "alternating sum cancellation ratio {ratio:e} at {digits} digits (est. rel error {rel_error:e}); escalating"
        );
    }
    Err(Error::PrecisionExhausted {
        escalations: policy.max_escalations,
        digits: policy.digits_at(policy.max_escalations),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_cancellation_is_zero() {
        let s = alternating_sum(&[LogTerm::pos(0.0), LogTerm::neg(0.0)], &PrecisionPolicy::default())
            .unwrap();
        assert!(s.value.is_zero());
        assert_eq!(s.to_f64(), 0.0);
    }

    #[test]
    fn two_minus_one() {
        let s = alternating_sum(
            &[LogTerm::pos(2f64.ln()), LogTerm::neg(0.0)],
            &PrecisionPolicy::default(),
        )
        .unwrap();
        assert!((s.to_f64() - 1.0).abs() < 1e-15);
        assert_eq!(s.escalations, 0);
    }

    #[test]
    fn empty_sum() {
        let s = alternating_sum(&[], &PrecisionPolicy::default()).unwrap();
        assert_eq!(s.to_f64(), 0.0);
    }

    #[test]
    fn policy_bounds() {
        assert!(PrecisionPolicy::new(29, 2, 1e-8).is_err());
        assert!(PrecisionPolicy::new(30, 1, 1e-8).is_err());
        assert!(PrecisionPolicy::new(30, 2, 1e-8).is_ok());
    }

    #[test]
    fn heavy_cancellation_escalates() {
        // (1 + 2^-200) - 1 needs more than 50 digits to see anything
        let policy = PrecisionPolicy::default();
        let s = alternating_sum_with(&policy, |bits| {
            let one = HpFloat::one(bits);
            vec![one.add(&one.ldexp(-200)), one.neg()]
        })
        .unwrap();
        assert!(s.escalations >= 1);
        assert!((s.ln_abs() + 200.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn hopeless_cancellation_reports_error() {
        let policy = PrecisionPolicy::default();
        let r = alternating_sum_with(&policy, |bits| {
            let one = HpFloat::one(bits);
            vec![one.add(&one.ldexp(-(bits as i64) + 4)), one.neg()]
        });
        assert!(matches!(r, Err(Error::PrecisionExhausted { escalations: 4, .. })));
    }
}
