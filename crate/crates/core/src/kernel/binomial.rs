use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::One;

use super::gamma::log_gamma;

pub const DEFAULT_FACTORIAL_CAP: usize = 2000;

/// Factorials `0!..=cap!`, grown lazily and shared between threads.
#[derive(Debug)]
pub struct FactorialCache {
    cap: usize,
    table: RwLock<Vec<BigUint>>,
}

impl FactorialCache {
    pub fn new(cap: usize) -> Self {
        FactorialCache {
            cap,
            table: RwLock::new(vec![BigUint::one()]),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `n!`, cached when `n <= cap` and computed directly otherwise.
    pub fn factorial(&self, n: usize) -> BigUint {
        if n > self.cap {
            return (2..=n as u64).fold(BigUint::one(), |acc, j| acc * j);
        }
        {
            let table = self.table.read().unwrap_or_else(|e| e.into_inner());
            if let Some(v) = table.get(n) {
                return v.clone();
            }
        }
        let mut table = self.table.write().unwrap_or_else(|e| e.into_inner());
        while table.len() <= n {
            let next = table.last().unwrap() * table.len() as u64;
            table.push(next);
        }
        table[n].clone()
    }

    pub fn binomial(&self, n: u64, k: i64) -> BigUint {
        if k < 0 || k as u64 > n {
            return BigUint::ZERO;
        }
        let k = k as u64;
        let k = k.min(n - k);
        if (n as usize) <= self.cap {
            let n = n as usize;
            let k = k as usize;
            return self.factorial(n) / (self.factorial(k) * self.factorial(n - k));
        }
        let mut acc = BigUint::one();
        for j in 1..=k {
            acc = acc * (n - k + j) / j;
        }
        acc
    }
}

fn global() -> &'static FactorialCache {
    static CACHE: OnceLock<FactorialCache> = OnceLock::new();
    CACHE.get_or_init(|| FactorialCache::new(DEFAULT_FACTORIAL_CAP))
}

/// `n!` from the shared cache.
pub fn factorial(n: usize) -> BigUint {
    global().factorial(n)
}

/// Binomial coefficient `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    global().binomial(n, k)
}

/// Same as [`binomial`] but with a signed upper argument; zero when `n < 0`.
pub fn binomial_i(n: i64, k: i64) -> BigUint {
    if n < 0 {
        BigUint::ZERO
    } else {
        binomial(n as u64, k)
    }
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    log_gamma(n as f64 + 1.0).expect("positive argument")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(binomial(20, 10), BigUint::from(184_756u32));
        assert_eq!(binomial(5, 0), BigUint::one());
        assert_eq!(binomial(4, 7), BigUint::ZERO);
        assert_eq!(binomial(4, -1), BigUint::ZERO);
        assert_eq!(binomial_i(-3, 0), BigUint::ZERO);
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn uncached_path_agrees() {
        let small = FactorialCache::new(10);
        for (n, k) in [(30u64, 7i64), (64, 32), (100, 3)] {
            assert_eq!(small.binomial(n, k), binomial(n, k));
        }
        assert_eq!(small.factorial(15), factorial(15));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..=60u64 {
            for k in 1..=n as i64 {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn ln_factorial_small() {
        assert_eq!(ln_factorial(0), 0.0);
        assert!((ln_factorial(10) - 3_628_800f64.ln()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn symmetric(n in 0u64..300, k in 0i64..300) {
            prop_assume!(k as u64 <= n);
            prop_assert_eq!(binomial(n, k), binomial(n, n as i64 - k));
        }
    }
}
