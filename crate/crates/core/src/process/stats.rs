use serde::{Deserialize, Serialize};

/// Sample mean and its standard error.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// sup |F_n − F| for a sample against a continuous CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Real and imaginary parts of a Monte Carlo characteristic-function
/// estimate with standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCharacteristic {
    pub re: f64,
    pub re_se: f64,
    pub im: f64,
    pub im_se: f64,
    pub count: usize,
}

impl EmpiricalCharacteristic {
    /// Mean of e^{iθ_k} over the given phases.
    pub fn from_phases(phases: &[f64]) -> Self {
        let c: Vec<f64> = phases.iter().map(|t| t.cos()).collect();
        let s: Vec<f64> = phases.iter().map(|t| t.sin()).collect();
        let (re, re_se) = mean_and_se(&c);
        let (im, im_se) = mean_and_se(&s);
        Self { re, re_se, im, im_se, count: phases.len() }
    }

    /// Largest deviation from a real target, in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        let zr = (self.re - target).abs() / self.re_se.max(1e-300);
        let zi = self.im.abs() / self.im_se.max(1e-300);
        zr.max(zi)
    }
}
