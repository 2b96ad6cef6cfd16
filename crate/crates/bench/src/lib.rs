//! Shared fixtures for the distribution benchmarks.

use exceedance_core::rational::parse_decimal;
use exceedance_core::{BigRational, Design};

/// Balanced designs with `s = r = floor(0.1 m)` at the given sizes.
pub fn balanced(sizes: &[usize]) -> Vec<Design> {
    sizes
        .iter()
        .map(|&m| Design::from_rho(m, m, 0.1).expect("valid proportion"))
        .collect()
}

pub fn five_percent() -> BigRational {
    parse_decimal("0.05").expect("literal decimal")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        let d = balanced(&[20, 40]);
        assert_eq!((d[1].s, d[1].r), (4, 4));
        assert_eq!(five_percent(), BigRational::new(1.into(), 20.into()));
    }
}
