//! Sample-level statistics: thresholds, exceedance/precedence counts and the
//! companion statistics used for comparison.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, Error, Group, Result};
use crate::rational::f64_to_decimal;

/// Two independent samples. `x` has size `m`, `y` has size `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePair {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl SamplePair {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        for (group, data) in [(Group::X, &x), (Group::Y, &y)] {
            if data.is_empty() {
                return Err(Error::EmptySample { group });
            }
            if let Some(index) = data.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { group, index });
            }
        }
        Ok(SamplePair { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Apply `f` to every observation of both samples.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        SamplePair::new(
            self.x.iter().map(|&v| f(v)).collect(),
            self.y.iter().map(|&v| f(v)).collect(),
        )
    }

    fn sorted(&self) -> (Vec<f64>, Vec<f64>) {
        let mut xs = self.x.clone();
        let mut ys = self.y.clone();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        (xs, ys)
    }
}

/// How cross-sample ties at a threshold order statistic are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Report [`Error::Tie`].
    #[default]
    Reject,
    /// Count a tied observation as neither exceeding nor preceding.
    Conservative,
}

/// Threshold indices into the X and Y order statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSpec {
    pub s: usize,
    pub r: usize,
    pub rho: Option<f64>,
}

impl ThresholdSpec {
    pub fn new(s: usize, r: usize) -> Self {
        ThresholdSpec { s, r, rho: None }
    }

    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        if self.s >= m {
            return invalid(format!("s = {} must be below m = {m}", self.s));
        }
        if self.r >= n {
            return invalid(format!("r = {} must be below n = {n}", self.r));
        }
        Ok(())
    }
}

/// Sample sizes together with thresholds; the parameter set of every
/// distribution in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Design {
    pub m: usize,
    pub n: usize,
    pub s: usize,
    pub r: usize,
}

impl Design {
    pub fn new(m: usize, n: usize, s: usize, r: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return invalid(format!("sample sizes must be positive (m = {m}, n = {n})"));
        }
        ThresholdSpec::new(s, r).validate(m, n)?;
        Ok(Design { m, n, s, r })
    }

    pub fn from_rho(m: usize, n: usize, rho: f64) -> Result<Self> {
        let spec = thresholds(m, n, rho)?;
        Design::new(m, n, spec.s, spec.r)
    }

    pub fn total(&self) -> usize {
        self.m + self.n
    }

    pub fn spec(&self) -> ThresholdSpec {
        ThresholdSpec::new(self.s, self.r)
    }
}

/// The two support regions of `(A_s, B_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// `a <= n-r-1` and `b <= m-s-1`.
    Lower,
    /// `a >= n-r` and `b >= m-s`.
    Upper,
}

impl Region {
    /// Region of `(a, b)` under `design`, or `None` off the support.
    pub fn classify(design: &Design, a: usize, b: usize) -> Option<Region> {
        let lower_a = a + design.r < design.n;
        let lower_b = b + design.s < design.m;
        match (lower_a, lower_b) {
            (true, true) => Some(Region::Lower),
            (false, false) if a <= design.n && b <= design.m => Some(Region::Upper),
            _ => None,
        }
    }
}

/// `A_s` (Y observations above the X threshold), `B_r` (X observations below
/// the Y threshold) and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExceedanceCounts {
    pub a: usize,
    pub b: usize,
    pub v: usize,
    pub s: usize,
    pub r: usize,
}

impl ExceedanceCounts {
    pub fn region(&self, m: usize, n: usize) -> Option<Region> {
        Region::classify(
            &Design {
                m,
                n,
                s: self.s,
                r: self.r,
            },
            self.a,
            self.b,
        )
    }
}

/// `s = floor(rho m)`, `r = floor(rho n)`, with `rho` read as the decimal it
/// prints as (so `0.29 * 100` gives 29).
pub fn thresholds(m: usize, n: usize, rho: f64) -> Result<ThresholdSpec> {
    if !(0.0..1.0).contains(&rho) {
        return invalid(format!("rho must lie in [0, 1), got {rho}"));
    }
    if m == 0 || n == 0 {
        return invalid("sample sizes must be positive");
    }
    let exact = f64_to_decimal(rho)?;
    let spec = ThresholdSpec {
        s: floor_times(&exact, m),
        r: floor_times(&exact, n),
        rho: Some(rho),
    };
    spec.validate(m, n)?;
    Ok(spec)
}

fn floor_times(q: &BigRational, k: usize) -> usize {
    let prod = q * BigRational::from_integer(k.into());
    let f = prod.floor().to_integer();
    if f.is_zero() {
        0
    } else {
        f.to_usize().unwrap_or(usize::MAX)
    }
}

fn check_tie(
    policy: TiePolicy,
    others: &[f64],
    threshold: f64,
    threshold_group: Group,
) -> Result<()> {
    if policy == TiePolicy::Reject && others.contains(&threshold) {
        return Err(Error::Tie {
            value: threshold,
            threshold_group,
        });
    }
    Ok(())
}

/// Compute `(A_s, B_r, V)` with strict inequalities.
pub fn exceedance_stats(
    sample: &SamplePair,
    spec: &ThresholdSpec,
    policy: TiePolicy,
) -> Result<ExceedanceCounts> {
    let (m, n) = (sample.m(), sample.n());
    spec.validate(m, n)?;
    let (xs, ys) = sample.sorted();
    let x_thr = xs[m - spec.s - 1];
    let y_thr = ys[spec.r];
    check_tie(policy, &ys, x_thr, Group::X)?;
    check_tie(policy, &xs, y_thr, Group::Y)?;
    let a = ys.iter().filter(|&&y| y > x_thr).count();
    let b = xs.iter().filter(|&&x| x < y_thr).count();
    Ok(ExceedanceCounts {
        a,
        b,
        v: a + b,
        s: spec.s,
        r: spec.r,
    })
}

/// Number of X observations before the `(r+1)`-th smallest Y.
pub fn precedence_statistic(sample: &SamplePair, r: usize, policy: TiePolicy) -> Result<usize> {
    if r >= sample.n() {
        return invalid(format!("r = {r} must be below n = {}", sample.n()));
    }
    let (xs, ys) = sample.sorted();
    check_tie(policy, &xs, ys[r], Group::Y)?;
    Ok(xs.iter().filter(|&&x| x < ys[r]).count())
}

/// Largest number of X observations in one of the gaps before `Y_(1)`,
/// between `Y_(1)` and `Y_(2)`, ..., between `Y_(r)` and `Y_(r+1)`.
pub fn maximal_precedence(sample: &SamplePair, r: usize, policy: TiePolicy) -> Result<usize> {
    if r >= sample.n() {
        return invalid(format!("r = {r} must be below n = {}", sample.n()));
    }
    let (xs, ys) = sample.sorted();
    for &y in &ys[..=r] {
        check_tie(policy, &xs, y, Group::Y)?;
    }
    let mut best = 0;
    let mut lo = f64::NEG_INFINITY;
    for &hi in &ys[..=r] {
        let gap = xs.iter().filter(|&&x| x >= lo && x < hi).count();
        best = best.max(gap);
        lo = hi;
    }
    Ok(best)
}

/// `max(n - A_s, m - B_r)`; small values indicate Y stochastically larger.
pub fn m_statistic(sample: &SamplePair, spec: &ThresholdSpec, policy: TiePolicy) -> Result<usize> {
    let c = exceedance_stats(sample, spec, policy)?;
    Ok((sample.n() - c.a).max(sample.m() - c.b))
}

/// Sum of the pooled ranks of the X observations, midranks for ties.
pub fn wilcoxon_rank_sum(sample: &SamplePair) -> f64 {
    let mut pooled: Vec<(f64, bool)> = sample
        .x()
        .iter()
        .map(|&v| (v, true))
        .chain(sample.y().iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j + 1 < pooled.len() && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        // ranks i+1..=j+1 share their average
        let mid = (i + j + 2) as f64 / 2.0;
        total += mid * pooled[i..=j].iter().filter(|p| p.1).count() as f64;
        i = j + 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example() -> SamplePair {
        SamplePair::new(
            vec![0.49, 0.64, 0.82, 0.93, 1.08, 1.99, 2.06, 2.15, 2.57, 4.75],
            vec![1.34, 1.49, 1.56, 2.10, 2.12, 3.83, 3.97, 5.13, 7.21, 8.71],
        )
        .unwrap()
    }

    #[test]
    fn threshold_floor() {
        let t = thresholds(40, 20, 0.15).unwrap();
        assert_eq!((t.s, t.r), (6, 3));
        let t = thresholds(40, 28, 0.25).unwrap();
        assert_eq!((t.s, t.r), (10, 7));
        let t = thresholds(100, 100, 0.29).unwrap();
        assert_eq!((t.s, t.r), (29, 29));
        assert!(thresholds(10, 10, 1.0).is_err());
        assert!(thresholds(10, 10, -0.1).is_err());
    }

    #[test]
    fn example_counts() {
        let d = example();
        let c = exceedance_stats(&d, &ThresholdSpec::new(0, 0), TiePolicy::Reject).unwrap();
        assert_eq!((c.a, c.b, c.v), (3, 5, 8));
        let c = exceedance_stats(&d, &ThresholdSpec::new(1, 1), TiePolicy::Reject).unwrap();
        assert_eq!((c.a, c.b, c.v), (5, 5, 10));
        let c = exceedance_stats(&d, &ThresholdSpec::new(2, 2), TiePolicy::Reject).unwrap();
        assert_eq!(c.v, 10);
    }

    #[test]
    fn example_companions() {
        let d = example();
        for r in 0..3 {
            assert_eq!(precedence_statistic(&d, r, TiePolicy::Reject).unwrap(), 5);
            assert_eq!(maximal_precedence(&d, r, TiePolicy::Reject).unwrap(), 5);
        }
        let m: Vec<usize> = (0..3)
            .map(|k| m_statistic(&d, &ThresholdSpec::new(k, k), TiePolicy::Reject).unwrap())
            .collect();
        assert_eq!(m, vec![7, 5, 5]);
        assert_eq!(wilcoxon_rank_sum(&d), 78.0);
    }

    #[test]
    fn separation() {
        let d = SamplePair::new(vec![1.0, 2.0, 3.0], vec![4.0, 5.0]).unwrap();
        let c = exceedance_stats(&d, &ThresholdSpec::new(0, 0), TiePolicy::Reject).unwrap();
        assert_eq!((c.a, c.b, c.v), (2, 3, 5));
        assert_eq!(m_statistic(&d, &ThresholdSpec::new(0, 0), TiePolicy::Reject).unwrap(), 0);
        let flipped = SamplePair::new(vec![4.0, 5.0], vec![1.0, 2.0, 3.0]).unwrap();
        for r in 0..3 {
            assert_eq!(precedence_statistic(&flipped, r, TiePolicy::Reject).unwrap(), 0);
        }
    }

    #[test]
    fn interleaved_gaps() {
        let d = SamplePair::new(vec![0.5, 1.5, 2.5, 3.5], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        for r in 0..4 {
            assert_eq!(maximal_precedence(&d, r, TiePolicy::Reject).unwrap(), 1);
        }
    }

    #[test]
    fn wilcoxon_small() {
        let d = SamplePair::new(vec![1.0, 2.0], vec![3.0, 4.0]).unwrap();
        assert_eq!(wilcoxon_rank_sum(&d), 3.0);
        let d = SamplePair::new(vec![3.0, 4.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(wilcoxon_rank_sum(&d), 7.0);
        let d = SamplePair::new(vec![1.0, 2.0], vec![2.0, 3.0]).unwrap();
        assert_eq!(wilcoxon_rank_sum(&d), 3.5);
    }

    #[test]
    fn ties_at_threshold() {
        let d = SamplePair::new(vec![1.0, 2.0, 3.0], vec![3.0, 4.0]).unwrap();
        let err = exceedance_stats(&d, &ThresholdSpec::new(0, 0), TiePolicy::Reject).unwrap_err();
        assert!(matches!(err, Error::Tie { value, .. } if value == 3.0));
        let c = exceedance_stats(&d, &ThresholdSpec::new(0, 0), TiePolicy::Conservative).unwrap();
        assert_eq!((c.a, c.b), (1, 2));
    }

    #[test]
    fn invalid_samples() {
        assert!(matches!(
            SamplePair::new(vec![], vec![1.0]),
            Err(Error::EmptySample { group: Group::X })
        ));
        assert!(matches!(
            SamplePair::new(vec![1.0], vec![2.0, f64::NAN]),
            Err(Error::NonFinite { group: Group::Y, index: 1 })
        ));
    }

    fn distinct_pair() -> impl Strategy<Value = SamplePair> {
        (1usize..9, 1usize..9).prop_flat_map(|(m, n)| {
            let pool: Vec<f64> = (0..m + n).map(|i| i as f64 * 0.5 - 3.0).collect();
            Just(pool).prop_shuffle().prop_map(move |p| {
                SamplePair::new(p[..m].to_vec(), p[m..].to_vec()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn case_split_holds(d in distinct_pair(), sf in 0.0f64..1.0, rf in 0.0f64..1.0) {
            let s = (sf * d.m() as f64) as usize;
            let r = (rf * d.n() as f64) as usize;
            let c = exceedance_stats(&d, &ThresholdSpec::new(s, r), TiePolicy::Reject).unwrap();
            prop_assert!(c.region(d.m(), d.n()).is_some());
            prop_assert_eq!(c.b, precedence_statistic(&d, r, TiePolicy::Reject).unwrap());
        }

        #[test]
        fn shift_and_monotone_invariance(d in distinct_pair(), shift in -50.0f64..50.0) {
            let spec = ThresholdSpec::new(0, 0);
            let base = exceedance_stats(&d, &spec, TiePolicy::Reject).unwrap();
            let shifted = d.map(|v| v + shift).unwrap();
            let warped = d.map(|v| v.exp() + v * v * v).unwrap();
            for other in [&shifted, &warped] {
                prop_assert_eq!(exceedance_stats(other, &spec, TiePolicy::Reject).unwrap(), base);
                prop_assert_eq!(wilcoxon_rank_sum(other), wilcoxon_rank_sum(&d));
                prop_assert_eq!(
                    maximal_precedence(other, 0, TiePolicy::Reject).unwrap(),
                    maximal_precedence(&d, 0, TiePolicy::Reject).unwrap()
                );
            }
        }

        #[test]
        fn monotone_in_thresholds(d in distinct_pair()) {
            let p: Vec<usize> = (0..d.n())
                .map(|r| precedence_statistic(&d, r, TiePolicy::Reject).unwrap())
                .collect();
            prop_assert!(p.windows(2).all(|w| w[0] <= w[1]));
            let a: Vec<usize> = (0..d.m())
                .map(|s| exceedance_stats(&d, &ThresholdSpec::new(s, 0), TiePolicy::Reject).unwrap().a)
                .collect();
            prop_assert!(a.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}
