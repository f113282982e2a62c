use statrs::function::gamma as sg;

/// Taylor coefficients of 1/Γ(1+x) about 0.
pub(crate) const RGAMMA1P: [f64; 29] = [
    1.0,
    5.772_156_649_015_328_66e-1,
    -6.558_780_715_202_539_02e-1,
    -4.200_263_503_409_523_70e-2,
    1.665_386_113_822_914_79e-1,
    -4.219_773_455_554_433_34e-2,
    -9.621_971_527_876_973_03e-3,
    7.218_943_246_663_099_90e-3,
    -1.165_167_591_859_065_17e-3,
    -2.152_416_741_149_509_75e-4,
    1.280_502_823_881_161_96e-4,
    -2.013_485_478_078_823_87e-5,
    -1.250_493_482_142_670_63e-6,
    1.133_027_231_981_695_93e-6,
    -2.056_338_416_977_607_07e-7,
    6.116_095_104_481_416_09e-9,
    5.002_007_644_469_222_95e-9,
    -1.181_274_570_487_020_04e-9,
    1.043_426_711_691_100_54e-10,
    7.782_263_439_905_070_81e-12,
    -3.696_805_618_642_205_98e-12,
    5.100_370_287_454_475_75e-13,
    -2.058_326_053_566_506_64e-14,
    -5.348_122_539_423_017_82e-15,
    1.226_778_628_238_260_84e-15,
    -1.181_259_301_697_458_83e-16,
    1.186_692_254_751_600_37e-18,
    1.412_380_655_318_031_86e-18,
    -2.298_745_684_435_370_22e-19,
];

/// Temme's auxiliary quantities for |mu| <= 1/2:
/// (Γ1, Γ2, 1/Γ(1+μ), 1/Γ(1−μ)).
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mut odd = 0.0;
    let mut even = 0.0;
    let mut p = 1.0;
    for (j, a) in RGAMMA1P.iter().enumerate() {
        if j % 2 == 0 {
            even += a * p;
        } else {
            odd += a * p;
        }
        p *= mu;
    }
    // odd part was accumulated as Σ a_j μ^j; Γ1 = −Σ a_j μ^{j−1}
    let g1 = if mu == 0.0 {
        -RGAMMA1P[1]
    } else {
        let mut s = 0.0;
        let mut p = 1.0;
        for j in (1..RGAMMA1P.len()).step_by(2) {
            s += RGAMMA1P[j] * p;
            p *= mu * mu;
        }
        -s
    };
    (g1, even, even + odd, even - odd)
}

pub fn gamma(x: f64) -> f64 {
    sg::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    sg::ln_gamma(x)
}

pub fn digamma(x: f64) -> f64 {
    statrs::function::gamma::digamma(x)
}

/// 1/Γ(x), zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if (x - 1.0).abs() <= 0.5 {
        let mu = x - 1.0;
        return RGAMMA1P.iter().rev().fold(0.0, |acc, a| acc * mu + a);
    }
    1.0 / sg::gamma(x)
}
