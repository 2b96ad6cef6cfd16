use exceedance_core::rational::parse_decimal;
use exceedance_core::sim::{permutation_oracle, permutation_oracle_all};
use exceedance_core::{critical_value, joint_pmf_null, p_value, v_null, BigRational, Design};
use num_traits::One;
use proptest::prelude::*;

fn design(m: usize, n: usize, s: usize, r: usize) -> Design {
    Design::new(m, n, s, r).unwrap()
}

#[test]
fn spot_pairs_match_enumeration() {
    for (m, n, s, r) in [(10, 10, 0, 0), (10, 10, 3, 7), (12, 8, 5, 2), (7, 13, 6, 12), (9, 11, 4, 4)] {
        let d = design(m, n, s, r);
        let exact = joint_pmf_null(&d);
        let oracle = permutation_oracle(&d).unwrap();
        for k in 0..=n {
            for i in 0..=m {
                assert_eq!(exact.count(k, i), oracle.count(k, i), "{d:?} entry ({k},{i})");
            }
        }
    }
}

#[test]
fn every_table_sums_to_one() {
    for m in 1..=12 {
        for n in 1..=12 {
            for s in 0..m {
                for r in 0..n {
                    let t = joint_pmf_null(&design(m, n, s, r));
                    assert!(t.total_mass().is_one(), "m={m} n={n} s={s} r={r}");
                }
            }
        }
    }
}

#[test]
fn swapping_roles_transposes_the_table() {
    // A_s of (m,n,s,r) is B_r of the mirrored design (n,m,r,s)
    for (m, n) in [(6, 9), (8, 8), (11, 5)] {
        let all = permutation_oracle_all(n, m).unwrap();
        for s in 0..m {
            for r in 0..n {
                let direct = joint_pmf_null(&design(m, n, s, r));
                let mirrored = &all[r * m + s];
                for k in 0..=n {
                    for i in 0..=m {
                        assert_eq!(direct.count(k, i), mirrored.count(i, k));
                    }
                }
            }
        }
    }
}

#[test]
fn p_value_is_the_upper_tail() {
    let d = design(10, 10, 0, 0);
    assert_eq!(p_value(&d, 8).unwrap(), BigRational::new(2046.into(), 184756.into()));
    assert!(p_value(&d, 0).unwrap().is_one());
    let dist = v_null(&d);
    for v in 0..=20 {
        assert_eq!(p_value(&d, v).unwrap(), dist.tail(v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn randomized_test_has_exact_size(
        m in 2usize..30,
        n in 2usize..30,
        s_frac in 0.0f64..1.0,
        r_frac in 0.0f64..1.0,
        level in prop::sample::select(vec!["0.01", "0.05", "0.1"]),
    ) {
        let s = ((m as f64) * s_frac) as usize;
        let r = ((n as f64) * r_frac) as usize;
        let d = design(m, n, s.min(m - 1), r.min(n - 1));
        let alpha = parse_decimal(level).unwrap();
        let dec = critical_value(&d, &alpha).unwrap();
        if !dec.degenerate {
            prop_assert_eq!(dec.size(), alpha.clone());
        }
        prop_assert!(dec.alpha1 <= alpha);
    }
}
