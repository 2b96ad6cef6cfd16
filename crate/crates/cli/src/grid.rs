//! Grid flags: comma-separated items, each a value `a`, an inclusive range
//! `a..b` (integers only, step 1) or a stepped range `a..b:step`.

use exceedance_core::rational::{parse_decimal, to_f64};
use exceedance_core::BigRational;
use num_traits::{Signed, Zero};

/// Parsed list of grid values, in the order given.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T>(pub Vec<T>);

impl<T> Grid<T> {
    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

fn split_item(item: &str) -> Result<(&str, Option<(&str, Option<&str>)>), String> {
    let item = item.trim();
    if item.is_empty() {
        return Err("empty grid item".into());
    }
    match item.split_once("..") {
        None => Ok((item, None)),
        Some((lo, rest)) => match rest.split_once(':') {
            None => Ok((lo.trim(), Some((rest.trim(), None)))),
            Some((hi, step)) => Ok((lo.trim(), Some((hi.trim(), Some(step.trim()))))),
        },
    }
}

pub fn parse_usize_grid(text: &str) -> Result<Grid<usize>, String> {
    let int = |s: &str| s.parse::<usize>().map_err(|_| format!("{s:?} is not a nonnegative integer"));
    let mut out = Vec::new();
    for item in text.split(',') {
        match split_item(item)? {
            (v, None) => out.push(int(v)?),
            (lo, Some((hi, step))) => {
                let (lo, hi) = (int(lo)?, int(hi)?);
                let step = step.map(int).transpose()?.unwrap_or(1);
                if step == 0 {
                    return Err("grid step must be positive".into());
                }
                if hi < lo {
                    return Err(format!("empty range {lo}..{hi}"));
                }
                out.extend((lo..=hi).step_by(step));
            }
        }
    }
    Ok(Grid(out))
}

/// Decimal grid; stepped ranges are generated in exact decimal arithmetic,
/// so `0..0.25:0.05` yields exactly 0, 0.05, ..., 0.25.
pub fn parse_decimal_grid(text: &str) -> Result<Grid<f64>, String> {
    let dec = |s: &str| parse_decimal(s).map_err(|e| e.to_string());
    let mut out = Vec::new();
    for item in text.split(',') {
        match split_item(item)? {
            (v, None) => out.push(to_f64(&dec(v)?)),
            (lo, Some((hi, step))) => {
                let (lo, hi) = (dec(lo)?, dec(hi)?);
                let step: BigRational = match step {
                    Some(s) => dec(s)?,
                    None => return Err(format!("decimal range {item:?} needs a step, e.g. a..b:0.05")),
                };
                if !step.is_positive() {
                    return Err("grid step must be positive".into());
                }
                if hi < lo {
                    return Err(format!("empty range in {item:?}"));
                }
                let mut v = lo;
                while v <= hi {
                    out.push(to_f64(&v));
                    v += &step;
                }
            }
        }
    }
    Ok(Grid(out))
}

pub fn parse_alpha(text: &str) -> Result<BigRational, String> {
    let a = parse_decimal(text).map_err(|e| e.to_string())?;
    if a.is_zero() || !a.is_positive() || a >= BigRational::from_integer(1.into()) {
        return Err(format!("alpha must lie strictly between 0 and 1, got {text}"));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_forms() {
        assert_eq!(parse_usize_grid("6..9").unwrap().0, vec![6, 7, 8, 9]);
        assert_eq!(parse_usize_grid("20..40:4").unwrap().0, vec![20, 24, 28, 32, 36, 40]);
        assert_eq!(parse_usize_grid("1, 3..4,10").unwrap().0, vec![1, 3, 4, 10]);
        assert!(parse_usize_grid("5..3").is_err());
        assert!(parse_usize_grid("1..4:0").is_err());
        assert!(parse_usize_grid("-1").is_err());
        assert!(parse_usize_grid("").is_err());
    }

    #[test]
    fn decimal_ranges_are_exact() {
        let g = parse_decimal_grid("0..0.25:0.05").unwrap();
        assert_eq!(g.0, vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25]);
        assert_eq!(parse_decimal_grid("3.5").unwrap().0, vec![3.5]);
        assert!(parse_decimal_grid("0..1").is_err());
    }

    #[test]
    fn alpha_bounds() {
        assert!(parse_alpha("0.05").is_ok());
        assert!(parse_alpha("0").is_err());
        assert!(parse_alpha("1").is_err());
        assert!(parse_alpha("abc").is_err());
    }
}
