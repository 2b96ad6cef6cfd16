//! Brute-force enumeration of every X/Y label arrangement.
//!
//! Under the null all `C(m+n, n)` arrangements of the pooled order
//! statistics are equally likely, so exact distributions of rank statistics
//! follow from counting. Arrangements are visited as `(m+n)`-bit masks with
//! exactly `n` bits set (bit `p` set means position `p` holds a Y).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exceedance::{
    exceedance_stats, maximal_precedence, m_statistic, precedence_statistic, wilcoxon_rank_sum,
    Design, SamplePair, ThresholdSpec, TiePolicy,
};
use crate::null::JointPmfTable;

/// Largest `m + n` accepted by the enumerators.
pub const ENUMERATION_LIMIT: usize = 22;

fn check_size(m: usize, n: usize) -> Result<()> {
    if m + n > ENUMERATION_LIMIT {
        return Err(Error::SizeBound {
            total: m + n,
            limit: ENUMERATION_LIMIT,
        });
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("sample sizes must be positive".into()));
    }
    Ok(())
}

/// Calls `f` with every `total`-bit mask having `ones` bits set, in
/// increasing numeric order.
pub fn for_each_arrangement(total: usize, ones: usize, mut f: impl FnMut(u32)) {
    if ones == 0 {
        f(0);
        return;
    }
    if ones > total {
        return;
    }
    let limit: u64 = 1 << total;
    let mut mask: u64 = (1 << ones) - 1;
    while mask < limit {
        f(mask as u32);
        // next mask with the same popcount
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

/// Positions of Y and X labels in ascending order.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub y_pos: Vec<usize>,
    pub x_pos: Vec<usize>,
}

impl Arrangement {
    pub fn from_mask(mask: u32, total: usize) -> Self {
        let mut y_pos = Vec::new();
        let mut x_pos = Vec::new();
        for p in 0..total {
            if mask >> p & 1 == 1 {
                y_pos.push(p);
            } else {
                x_pos.push(p);
            }
        }
        Arrangement { y_pos, x_pos }
    }

    pub fn m(&self) -> usize {
        self.x_pos.len()
    }

    pub fn n(&self) -> usize {
        self.y_pos.len()
    }

    /// X labels before the `(r+1)`-th Y.
    pub fn precedence(&self, r: usize) -> usize {
        self.y_pos[r] - r
    }

    /// Y labels after the `(m-s)`-th X.
    pub fn exceedance(&self, s: usize) -> usize {
        let j = self.m() - s - 1;
        self.n() - (self.x_pos[j] - j)
    }

    pub fn maximal_precedence(&self, r: usize) -> usize {
        let mut best = self.y_pos[0];
        for j in 1..=r {
            best = best.max(self.y_pos[j] - self.y_pos[j - 1] - 1);
        }
        best
    }

    pub fn rank_sum_x(&self) -> usize {
        self.x_pos.iter().map(|p| p + 1).sum()
    }
}

/// Joint table of `(A_s, B_r)` for every threshold pair of an `(m, n)`
/// design from a single pass over arrangements; entry `s * n + r`.
pub fn permutation_oracle_all(m: usize, n: usize) -> Result<Vec<JointPmfTable>> {
    check_size(m, n)?;
    let mut tables: Vec<JointPmfTable> = (0..m)
        .flat_map(|s| (0..n).map(move |r| (s, r)))
        .map(|(s, r)| JointPmfTable::zeros(Design { m, n, s, r }))
        .collect();
    for_each_arrangement(m + n, n, |mask| {
        let a = Arrangement::from_mask(mask, m + n);
        let exceed: Vec<usize> = (0..m).map(|s| a.exceedance(s)).collect();
        let prec: Vec<usize> = (0..n).map(|r| a.precedence(r)).collect();
        for (s, &k) in exceed.iter().enumerate() {
            for (r, &i) in prec.iter().enumerate() {
                tables[s * n + r].add_count(k, i, 1);
            }
        }
    });
    Ok(tables)
}

/// Joint null table of `(A_s, B_r)` by enumeration.
pub fn permutation_oracle(design: &Design) -> Result<JointPmfTable> {
    let Design { m, n, s, r } = *design;
    check_size(m, n)?;
    let mut table = JointPmfTable::zeros(*design);
    for_each_arrangement(m + n, n, |mask| {
        let a = Arrangement::from_mask(mask, m + n);
        table.add_count(a.exceedance(s), a.precedence(r), 1);
    });
    Ok(table)
}

/// Statistics supported by [`permutation_pvalue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// Precedence count `P_r`; large values are significant.
    P,
    /// Maximal precedence `Q_r`; large values are significant.
    Q,
    /// `max(n - A_s, m - B_r)`; small values are significant.
    M,
    /// `A_s + B_r`; large values are significant.
    V,
    /// Rank sum of X; small values are significant.
    W,
}

impl Statistic {
    pub fn all() -> [Statistic; 5] {
        [Statistic::P, Statistic::Q, Statistic::M, Statistic::V, Statistic::W]
    }

    pub fn lower_tail(&self) -> bool {
        matches!(self, Statistic::M | Statistic::W)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Statistic::P => "P",
            Statistic::Q => "Q",
            Statistic::M => "M",
            Statistic::V => "V",
            Statistic::W => "W",
        }
    }

    /// Value of the statistic on an arrangement.
    pub fn on_arrangement(&self, a: &Arrangement, spec: &ThresholdSpec) -> f64 {
        match self {
            Statistic::P => a.precedence(spec.r) as f64,
            Statistic::Q => a.maximal_precedence(spec.r) as f64,
            Statistic::M => {
                let m = (a.n() - a.exceedance(spec.s)).max(a.m() - a.precedence(spec.r));
                m as f64
            }
            Statistic::V => (a.exceedance(spec.s) + a.precedence(spec.r)) as f64,
            Statistic::W => a.rank_sum_x() as f64,
        }
    }

    /// Value of the statistic on data.
    pub fn on_sample(&self, sample: &SamplePair, spec: &ThresholdSpec, policy: TiePolicy) -> Result<f64> {
        Ok(match self {
            Statistic::P => precedence_statistic(sample, spec.r, policy)? as f64,
            Statistic::Q => maximal_precedence(sample, spec.r, policy)? as f64,
            Statistic::M => m_statistic(sample, spec, policy)? as f64,
            Statistic::V => exceedance_stats(sample, spec, policy)?.v as f64,
            Statistic::W => wilcoxon_rank_sum(sample),
        })
    }
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P" => Ok(Statistic::P),
            "Q" => Ok(Statistic::Q),
            "M" => Ok(Statistic::M),
            "V" => Ok(Statistic::V),
            "W" => Ok(Statistic::W),
            _ => Err(Error::InvalidParameter(format!("unknown statistic {s:?}"))),
        }
    }
}

/// Permutation p-value of an observed statistic value: the null probability
/// of a value at least as extreme in the statistic's significant direction.
pub fn permutation_pvalue_of(
    m: usize,
    n: usize,
    statistic: Statistic,
    spec: &ThresholdSpec,
    observed: f64,
) -> Result<BigRational> {
    check_size(m, n)?;
    spec.validate(m, n)?;
    let mut hits: u64 = 0;
    let mut total: u64 = 0;
    for_each_arrangement(m + n, n, |mask| {
        let a = Arrangement::from_mask(mask, m + n);
        let v = statistic.on_arrangement(&a, spec);
        let extreme = if statistic.lower_tail() {
            v <= observed
        } else {
            v >= observed
        };
        hits += extreme as u64;
        total += 1;
    });
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

/// Permutation p-value of `statistic` computed on `sample`.
pub fn permutation_pvalue(
    sample: &SamplePair,
    statistic: Statistic,
    spec: &ThresholdSpec,
    policy: TiePolicy,
) -> Result<BigRational> {
    let observed = statistic.on_sample(sample, spec, policy)?;
    permutation_pvalue_of(sample.m(), sample.n(), statistic, spec, observed)
}

/// Exact joint table of `(A_s, B_r)` under the Lehmann alternative with a
/// rational `eta`, by enumeration.
///
/// With `X` exponential with rate 1 and `Y` exponential with rate `1/eta`
/// (the survival-time picture of the alternative), the next smallest of
/// `a` remaining X and `b` remaining Y values is an X with probability
/// `a / (a + b/eta)`. Multiplying these along an arrangement gives its
/// exact probability.
pub fn lehmann_oracle(design: &Design, eta: &BigRational) -> Result<Vec<BigRational>> {
    let Design { m, n, s, r } = *design;
    check_size(m, n)?;
    if *eta < BigRational::one() {
        return Err(Error::InvalidParameter("eta must be >= 1".into()));
    }
    let lambda = eta.recip();
    let mut probs = vec![BigRational::zero(); (n + 1) * (m + 1)];
    for_each_arrangement(m + n, n, |mask| {
        let (mut a, mut b) = (m, n);
        let mut w = BigRational::one();
        for p in 0..m + n {
            let denom = BigRational::from_integer(a.into()) + &lambda * BigRational::from_integer(b.into());
            if mask >> p & 1 == 1 {
                w = w * &lambda * BigRational::from_integer(b.into()) / denom;
                b -= 1;
            } else {
                w = w * BigRational::from_integer(a.into()) / denom;
                a -= 1;
            }
        }
        let arr = Arrangement::from_mask(mask, m + n);
        probs[arr.exceedance(s) * (m + 1) + arr.precedence(r)] += w;
    });
    Ok(probs)
}
