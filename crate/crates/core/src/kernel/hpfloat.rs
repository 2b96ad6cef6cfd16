//! Arbitrary-precision binary floating point.
//!
//! A value is `mantissa * 2^exponent` with the mantissa rounded to at most
//! `bits` significant bits after every operation. Only the handful of
//! operations the alternating sums need are provided.

use std::cmp::Ordering;
use std::f64::consts::LN_2;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct HpFloat {
    mantissa: BigInt,
    exponent: i64,
    bits: u64,
}

/// Number of bits needed for `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u64 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u64
}

impl HpFloat {
    pub fn zero(bits: u64) -> Self {
        HpFloat {
            mantissa: BigInt::zero(),
            exponent: 0,
            bits,
        }
    }

    pub fn one(bits: u64) -> Self {
        Self::from_u64(1, bits)
    }

    pub fn from_u64(v: u64, bits: u64) -> Self {
        Self::from_parts(BigInt::from(v), 0, bits)
    }

    pub fn from_biguint(v: &BigUint, bits: u64) -> Self {
        Self::from_parts(BigInt::from_biguint(Sign::Plus, v.clone()), 0, bits)
    }

    /// Exact conversion of a finite `f64` (then rounded to `bits` if narrower).
    pub fn from_f64(v: f64, bits: u64) -> Self {
        assert!(v.is_finite(), "HpFloat::from_f64 on non-finite value");
        if v == 0.0 {
            return Self::zero(bits);
        }
        let raw = v.to_bits();
        let negative = raw >> 63 == 1;
        let biased = ((raw >> 52) & 0x7ff) as i64;
        let frac = raw & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let m = BigInt::from(mant);
        Self::from_parts(if negative { -m } else { m }, exp, bits)
    }

    fn from_parts(mantissa: BigInt, exponent: i64, bits: u64) -> Self {
        let mut v = HpFloat {
            mantissa,
            exponent,
            bits,
        };
        v.normalize();
        v
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let len = self.mantissa.bits();
        if len > self.bits {
            let shift = len - self.bits;
            let negative = self.mantissa.is_negative();
            let mag = self.mantissa.magnitude();
            let round_up = mag.bit(shift - 1);
            let mut q: BigUint = mag >> shift;
            if round_up {
                q += 1u32;
            }
            self.mantissa = BigInt::from_biguint(if negative { Sign::Minus } else { Sign::Plus }, q);
            self.exponent += shift as i64;
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn neg(&self) -> Self {
        HpFloat {
            mantissa: -self.mantissa.clone(),
            exponent: self.exponent,
            bits: self.bits,
        }
    }

    pub fn abs(&self) -> Self {
        HpFloat {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
            bits: self.bits,
        }
    }

    /// Exponent of the leading bit plus one (`|x|` lies in `[2^(t-1), 2^t)`).
    fn top(&self) -> i64 {
        self.exponent + self.mantissa.bits() as i64
    }

    pub fn add(&self, other: &Self) -> Self {
        let bits = self.bits.max(other.bits);
        if self.is_zero() {
            return Self::from_parts(other.mantissa.clone(), other.exponent, bits);
        }
        if other.is_zero() {
            return Self::from_parts(self.mantissa.clone(), self.exponent, bits);
        }
        let (hi, lo) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        // lo cannot reach the rounding position of hi
        if hi.top() - lo.top() > bits as i64 + 2 {
            return Self::from_parts(hi.mantissa.clone(), hi.exponent, bits);
        }
        let e = hi.exponent.min(lo.exponent);
        let a = &hi.mantissa << (hi.exponent - e) as usize;
        let b = &lo.mantissa << (lo.exponent - e) as usize;
        Self::from_parts(a + b, e, bits)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let bits = self.bits.max(other.bits);
        Self::from_parts(
            &self.mantissa * &other.mantissa,
            self.exponent + other.exponent,
            bits,
        )
    }

    pub fn mul_u64(&self, v: u64) -> Self {
        Self::from_parts(&self.mantissa * BigInt::from(v), self.exponent, self.bits)
    }

    /// Division; panics on a zero divisor (callers never divide by zero).
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "HpFloat division by zero");
        let bits = self.bits.max(other.bits);
        if self.is_zero() {
            return Self::zero(bits);
        }
        let shift =
            (bits as i64 + other.mantissa.bits() as i64 - self.mantissa.bits() as i64 + 2).max(0);
        let num = &self.mantissa << shift as usize;
        let q = num / &other.mantissa;
        Self::from_parts(q, self.exponent - other.exponent - shift, bits)
    }

    pub fn recip(&self) -> Self {
        Self::one(self.bits).div(self)
    }

    /// Multiply by `2^k` exactly.
    pub fn ldexp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        HpFloat {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
            bits: self.bits,
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.top().cmp(&other.top()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let e = self.exponent.min(other.exponent);
        let a = self.mantissa.magnitude() << (self.exponent - e) as usize;
        let b = other.mantissa.magnitude() << (other.exponent - e) as usize;
        a.cmp(&b)
    }

    /// Leading 64 bits as an `f64` together with the binary exponent to apply.
    fn split(&self) -> (f64, i64) {
        let len = self.mantissa.bits();
        let shift = len.saturating_sub(64);
        let top = (self.mantissa.magnitude() >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        (top, self.exponent + shift as i64)
    }

    /// `ln |x|` as an `f64`; `-inf` for zero. Valid far outside the `f64` range.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (top, e) = self.split();
        top.ln() + e as f64 * LN_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let (top, e) = self.split();
        let mag = if e > 2000 {
            f64::INFINITY
        } else if e < -2200 {
            0.0
        } else {
            // two steps so the intermediate power never overflows on its own
            let half = e / 2;
            top * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
        };
        if self.is_negative() {
            -mag
        } else {
            mag
        }
    }

    /// Exact sum of all values, rounded once to `bits`.
    pub fn exact_sum<'a, I>(values: I, bits: u64) -> Self
    where
        I: IntoIterator<Item = &'a HpFloat>,
    {
        let values: Vec<&HpFloat> = values.into_iter().filter(|v| !v.is_zero()).collect();
        let Some(e) = values.iter().map(|v| v.exponent).min() else {
            return Self::zero(bits);
        };
        let mut acc = BigInt::zero();
        for v in values {
            acc += &v.mantissa << (v.exponent - e) as usize;
        }
        Self::from_parts(acc, e, bits)
    }

    /// `ln 2` to `bits` bits via the series `sum 1/(j 2^j)`.
    pub fn ln2(bits: u64) -> Self {
        let work = bits + 32;
        let one = Self::one(work);
        let terms: Vec<HpFloat> = (1..=work + 8)
            .map(|j| one.div(&Self::from_u64(j, work)).ldexp(-(j as i64)))
            .collect();
        let mut s = Self::exact_sum(terms.iter(), work);
        s.bits = bits;
        s.normalize();
        s
    }

    /// `e^x` for an exactly representable `f64` argument, to `bits` bits.
    pub fn exp_f64(x: f64, bits: u64) -> Self {
        assert!(x.is_finite(), "exp of non-finite value");
        if x == 0.0 {
            return Self::one(bits);
        }
        let work = bits + 64;
        let k = (x / LN_2).round();
        let ln2 = Self::ln2(work);
        let r = Self::from_f64(x, work).sub(&ln2.mul(&Self::from_f64(k, work)));
        // |r| <= ln2/2; shrink further and square back up
        const HALVINGS: i64 = 16;
        let r = r.ldexp(-HALVINGS);
        let mut sum = Self::one(work);
        let mut term = Self::one(work);
        let eps_top = -(work as i64) - 4;
        for j in 1..10_000u64 {
            term = term.mul(&r).div(&Self::from_u64(j, work));
            if term.is_zero() || term.top() < eps_top {
                break;
            }
            sum = sum.add(&term);
        }
        for _ in 0..HALVINGS {
            sum = sum.mul(&sum);
        }
        let mut out = sum.ldexp(k as i64);
        out.bits = bits;
        out.normalize();
        out
    }
}

impl PartialEq for HpFloat {
    fn eq(&self, other: &Self) -> bool {
        self.is_negative() == other.is_negative() && self.cmp_abs(other) == Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: u64 = 200;

    #[test]
    fn f64_roundtrip_is_exact() {
        for v in [1.0, -2.5, 0.1, 1e-300, 6.02e23, f64::MIN_POSITIVE / 8.0] {
            assert_eq!(HpFloat::from_f64(v, B).to_f64(), v);
        }
    }

    #[test]
    fn one_third_times_three() {
        let third = HpFloat::one(B).div(&HpFloat::from_u64(3, B));
        let back = third.mul_u64(3);
        let err = back.sub(&HpFloat::one(B)).abs();
        assert!(err.ln_abs() < -(B as f64 - 2.0) * LN_2);
    }

    #[test]
    fn addition_keeps_small_differences() {
        let big = HpFloat::from_f64(1e30, B);
        let small = HpFloat::one(B);
        let d = big.add(&small).sub(&big);
        assert_eq!(d.to_f64(), 1.0);
    }

    #[test]
    fn ln2_matches_constant() {
        assert_eq!(HpFloat::ln2(B).to_f64(), LN_2);
    }

    #[test]
    fn exp_is_inverse_of_ln_on_small_integers() {
        assert_eq!(HpFloat::exp_f64(0.0, B).to_f64(), 1.0);
        let e = HpFloat::exp_f64(1.0, B).to_f64();
        assert!((e - std::f64::consts::E).abs() < 1e-15);
        let big = HpFloat::exp_f64(1000.0, B);
        assert!((big.ln_abs() - 1000.0).abs() < 1e-12);
    }

    #[test]
    fn ln_abs_outside_f64_range() {
        let tiny = HpFloat::one(B).ldexp(-5000);
        assert!((tiny.ln_abs() + 5000.0 * LN_2).abs() < 1e-9);
        assert_eq!(tiny.to_f64(), 0.0);
    }

    #[test]
    fn exact_sum_cancels_to_zero() {
        let a = HpFloat::from_f64(0.1, B);
        let b = a.neg();
        assert!(HpFloat::exact_sum([&a, &b], B).is_zero());
    }
}
