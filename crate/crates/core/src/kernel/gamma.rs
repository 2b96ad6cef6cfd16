#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_78;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// zeta(k) - 1 for k = 2..=30.
const ZETA_MINUS_ONE: [f64; 29] = [
    0.644_934_066_848_226_436_47,
    0.202_056_903_159_594_285_4,
    0.082_323_233_711_138_191_516,
    0.036_927_755_143_369_926_331,
    0.017_343_061_984_449_139_715,
    0.008_349_277_381_922_826_839_8,
    0.004_077_356_197_944_339_378_7,
    0.002_008_392_826_082_214_417_9,
    0.000_994_575_127_818_085_337_15,
    0.000_494_188_604_119_464_558_7,
    0.000_246_086_553_308_048_298_64,
    0.000_122_713_347_578_489_146_75,
    0.000_061_248_135_058_704_829_259,
    0.000_030_588_236_307_020_493_552,
    0.000_015_282_259_408_651_871_733,
    7.637_197_637_899_762_273_6e-6,
    3.817_293_264_999_839_856_5e-6,
    1.908_212_716_553_938_925_7e-6,
    9.539_620_338_727_961_131_5e-7,
    4.769_329_867_878_064_631_2e-7,
    2.384_505_027_277_329_9e-7,
    1.192_199_259_653_110_730_7e-7,
    5.960_818_905_125_947_961_2e-8,
    2.980_350_351_465_228_018_6e-8,
    1.490_155_482_836_504_123_5e-8,
    7.450_711_789_835_429_492e-9,
    3.725_334_024_788_457_054_8e-9,
    1.862_659_723_513_049_006_4e-9,
    9.313_274_324_196_681_828_7e-10,
];

/// B_{2k} / (2k (2k-1)) for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `sum_{k>=2} (-1)^k (zeta(k) - 1) z^k / k`, for |z| <= 1/4.
fn zeta_tail_series(z: f64) -> f64 {
    let mut acc = 0.0;
    let mut zk = z * z;
    for (j, c) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (j + 2) as f64;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * c * zk / k;
        zk *= z;
    }
    acc
}

fn lanczos(x: f64) -> f64 {
    let xm1 = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (xm1 + i as f64);
    }
    let t = xm1 + LANCZOS_G + 0.5;
    HALF_LN_2PI + (xm1 + 0.5) * t.ln() - t + a.ln()
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in STIRLING {
        corr += c * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + corr
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Uses power series around the zeros at 1 and 2 (so the result keeps full
/// relative accuracy there), a Lanczos approximation on moderate arguments
/// and the Stirling series for `x >= 10`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(x));
    }
    Ok(log_gamma_unchecked(x))
}

fn log_gamma_unchecked(x: f64) -> f64 {
    let z1 = x - 1.0;
    if z1.abs() <= 0.25 {
        return (z1 - z1.ln_1p()) - EULER_GAMMA * z1 + zeta_tail_series(z1);
    }
    let z2 = x - 2.0;
    if z2.abs() <= 0.25 {
        return (1.0 - EULER_GAMMA) * z2 + zeta_tail_series(z2);
    }
    if x < 0.75 {
        return log_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x < 10.0 {
        lanczos(x)
    } else {
        stirling(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // high-precision reference values of ln Gamma(x)
    const REFERENCE: &[(f64, f64)] = &[
        (0.001, 6.907_178_885_383_853_661_7),
        (0.1, 2.252_712_651_734_205_902),
        (0.3, 1.095_797_994_818_075_560_6),
        (0.5, 0.572_364_942_924_700_087_07),
        (0.75, 0.203_280_951_431_295_371_48),
        (0.8, 0.152_059_678_399_837_545_92),
        (0.9, 0.066_376_239_734_742_954_426),
        (0.99, 0.005_854_806_764_709_781_453_2),
        (0.999999, 5.772_164_873_855_652_379_4e-7),
        (1.000001, -5.772_148_423_874_146_650_6e-7),
        (1.01, -0.005_690_307_946_069_650_503_7),
        (1.1, -0.049_872_441_259_839_761_785),
        (1.25, -0.098_271_836_421_813_161_464),
        (1.5, -0.120_782_237_635_245_222_35),
        (1.75, -0.084_401_121_020_485_555_958),
        (1.9, -0.038_984_275_923_083_361_674),
        (1.999, -0.000_422_461_800_692_107_284_18),
        (2.001, 0.000_423_106_734_800_116_991_19),
        (2.1, 0.045_437_738_544_485_179_002),
        (2.3, 0.154_189_454_959_630_474_5),
        (2.5, 0.284_682_870_472_919_159_63),
        (3.0, std::f64::consts::LN_2),
        (3.7, 1.428_072_326_665_388_129_2),
        (5.5, 3.957_813_967_618_716_293_9),
        (7.25, 7.052_185_450_738_539_444_9),
        (9.99, 12.779_315_214_350_193_36),
        (10.0, 12.801_827_480_081_469_611),
        (10.5, 13.940_625_219_403_763_633),
        (11.0, 15.104_412_573_075_515_295),
        (25.3, 55.746_181_183_584_592_334),
        (99.5, 356.835_382_823_613_074_47),
        (170.6, 704.518_037_127_998_742_59),
        (1000.25, 5_906.947_268_271_117_177),
        (9999.5, 82_095.112_363_757_639_228),
        (10000.0, 82_099.717_496_442_377_273),
    ];

    #[test]
    fn matches_reference_values() {
        for &(x, want) in REFERENCE {
            let got = log_gamma(x).unwrap();
            let rel = ((got - want) / want).abs();
            assert!(rel <= 1e-13, "x={x}: got {got:e}, want {want:e}, rel {rel:e}");
        }
    }

    #[test]
    fn exact_points() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!((log_gamma(0.5).unwrap() - std::f64::consts::PI.sqrt().ln()).abs() < 1e-15);
        assert!((log_gamma(11.0).unwrap() - 3_628_800f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(-1.5), Err(Error::Domain(_))));
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn recurrence_on_half_integers() {
        for j in 0..100 {
            let x = 0.5 + j as f64;
            let ratio = (log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap()).exp();
            assert!(((ratio - x) / x).abs() <= 1e-12, "x={x}: ratio {ratio}");
        }
    }
}
