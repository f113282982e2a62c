use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use crate::specfun::bessel::j_nu;

const REFINED: usize = 64;

fn mcmahon(nu: f64, k: usize) -> f64 {
    let mu = 4.0 * nu * nu;
    let b = (k as f64 + 0.5 * nu - 0.25) * PI;
    let e = 8.0 * b;
    b - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e)
}

fn newton(nu: f64, mut x: f64) -> f64 {
    for _ in 0..60 {
        let j = j_nu(nu, x);
        let dj = j_nu(nu - 1.0, x) - nu / x * j;
        let dx = j / dj;
        x -= dx;
        if dx.abs() < 1e-15 * x {
            break;
        }
    }
    x
}

fn refined(nu_key: i64) -> Vec<f64> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Vec<f64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("zero cache").get(&nu_key) {
        return v.clone();
    }
    let nu = nu_key as f64 / 2.0;
    let v: Vec<f64> = (1..=REFINED).map(|k| newton(nu, mcmahon(nu, k))).collect();
    cache.lock().expect("zero cache").insert(nu_key, v.clone());
    v
}

/// Positive zeros of the spherical kernel Ŝ_d, i.e. of J_{d/2−1}, in
/// increasing order. Exact for d = 1 and d = 3; Newton-refined McMahon
/// estimates otherwise (asymptotic estimates beyond the first 64).
pub fn spherical_zeros(d: usize) -> impl Iterator<Item = f64> {
    let table = match d {
        1 | 3 => Vec::new(),
        _ => refined(d as i64 - 2),
    };
    let nu = d as f64 / 2.0 - 1.0;
    (1usize..).map(move |k| match d {
        1 => (k as f64 - 0.5) * PI,
        3 => k as f64 * PI,
        _ => table.get(k - 1).copied().unwrap_or_else(|| mcmahon(nu, k)),
    })
}
