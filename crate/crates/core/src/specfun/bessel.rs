//! Bessel functions of real order and positive real argument, textbook
//! argument convention.
//!
//! K_ν uses Temme's series for x < 2 and Steed's continued fraction
//! otherwise, then recurs upward in order. J_ν and Y_ν follow the same plan
//! with a CF1 ratio for J; for large x the Hankel expansion is used instead.

use std::f64::consts::PI;

use super::gamma::{digamma, ln_gamma, rgamma, temme_gammas};
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;
const XMIN: f64 = 2.0;
const SERIES_CAP: usize = 400;

/// I_ν(x) for ν ≥ 0 by the ascending series. All terms are positive, so the
/// sum is accurate to a few ulps whenever it converges inside the term cap.
pub fn i_series(nu: f64, x: f64) -> Result<f64> {
    debug_assert!(nu >= 0.0);
    let h = 0.5 * x;
    let q = h * h;
    let mut term = if h == 0.0 {
        if nu == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (nu * h.ln() - ln_gamma(nu + 1.0)).exp()
    };
    let mut sum = term;
    for m in 0..SERIES_CAP {
        let mf = m as f64;
        let ratio = q / ((mf + 1.0) * (mf + 1.0 + nu));
        term *= ratio;
        sum += term;
        if ratio < 1.0 {
            let tail = term * ratio / (1.0 - ratio);
            if tail <= 1e-16 * sum {
                return Ok(sum);
            }
        }
    }
    Err(Error::Accuracy(format!(
        "I series for nu={nu}, x={x} did not converge in {SERIES_CAP} terms"
    )))
}

/// I_ν(x) for any real ν, using I_{−ν} = I_ν + (2/π) sin(νπ) K_ν.
pub fn i_nu(nu: f64, x: f64) -> Result<f64> {
    if nu >= 0.0 {
        return i_series(nu, x);
    }
    let a = -nu;
    Ok(i_series(a, x)? + 2.0 / PI * (a * PI).sin() * k_nu(a, x))
}

/// K_μ(x), K_{μ+1}(x) for |μ| ≤ 1/2, scaled by e^x when x ≥ XMIN.
fn k_pair(mu: f64, x: f64) -> (f64, f64, bool) {
    let mu2 = mu * mu;
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (g1, g2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (g1 * e.cosh() + g2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        (sum, sum1 * 2.0 / x, false)
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                break;
            }
        }
        h *= a1;
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        let k1 = kmu * (mu + x + 0.5 - h) / x;
        (kmu, k1, true)
    }
}

/// ln K_ν(x) for ν ≥ 0 and x > 0, without overflow for small x or large ν.
pub fn ln_k_nu(nu: f64, x: f64) -> f64 {
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut kmu, mut k1, scaled) = k_pair(mu, x);
    let mut shift = if scaled { -x } else { 0.0 };
    let xi2 = 2.0 / x;
    for i in 1..=(nl as usize) {
        let kt = (mu + i as f64) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = kt;
        if k1 > 1e250 {
            kmu /= 1e250;
            k1 /= 1e250;
            shift += 250.0 * std::f64::consts::LN_10;
        }
    }
    kmu.ln() + shift
}

/// K_ν(x), symmetric in ν.
pub fn k_nu(nu: f64, x: f64) -> f64 {
    ln_k_nu(nu, x).exp()
}

/// e^x K_ν(x).
pub fn k_nu_scaled(nu: f64, x: f64) -> f64 {
    (ln_k_nu(nu, x) + x).exp()
}

/// K via the reflection formula π/(2 sin νπ)(I_{−ν} − I_ν) with both I
/// series summed directly, switching to the logarithmic series for orders
/// within 1e-6 of an integer. Accurate only for small and moderate x because
/// of cancellation; kept as an independent oracle.
pub fn k_reflection(nu: f64, x: f64) -> Result<f64> {
    let nu = nu.abs();
    let m = nu.round();
    if (nu - m).abs() < 1e-6 {
        return k_integer_series(m as usize, x);
    }
    let ip = i_series(nu, x)?;
    let im = i_series_signed(-nu, x)?;
    Ok(PI / (2.0 * (PI * nu).sin()) * (im - ip))
}

/// Ascending series for arbitrary real order, terms through 1/Γ so that the
/// poles of negative integer orders vanish.
pub(crate) fn i_series_signed(nu: f64, x: f64) -> Result<f64> {
    let h = 0.5 * x;
    let q = h * h;
    let lead = h.powf(nu);
    let mut sum = 0.0;
    let mut pw = 1.0;
    let mut fact = 1.0;
    for m in 0..SERIES_CAP {
        let mf = m as f64;
        if m > 0 {
            pw *= q;
            fact *= mf;
        }
        let t = pw / fact * rgamma(mf + nu + 1.0);
        sum += t;
        if m > 2 && mf + nu > 0.0 && t.abs() < 1e-17 * sum.abs() {
            return Ok(lead * sum);
        }
    }
    Err(Error::Accuracy(format!("signed I series for nu={nu}, x={x}")))
}

/// K_n(x) for integer n by the series with logarithmic and digamma terms.
pub fn k_integer_series(n: usize, x: f64) -> Result<f64> {
    let h = 0.5 * x;
    let q = h * h;
    let nf = n as f64;
    let mut first = 0.0;
    if n > 0 {
        let mut fk = 1.0;
        for k in 0..n {
            if k > 0 {
                fk *= k as f64;
            }
            let num = ln_gamma((n - k) as f64).exp();
            first += num / fk * (-q).powi(k as i32);
        }
        first *= 0.5 * h.powf(-nf);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let i_n = i_series(nf, x)?;
    let mut third = 0.0;
    let mut pw = 1.0;
    for k in 0..SERIES_CAP {
        let kf = k as f64;
        if k > 0 {
            pw *= q;
        }
        let t = (digamma(kf + 1.0) + digamma(nf + kf + 1.0)) * pw
            / (ln_gamma(kf + 1.0) + ln_gamma(nf + kf + 1.0)).exp();
        third += t;
        if k > 2 && t.abs() < 1e-17 * third.abs() {
            break;
        }
    }
    third *= 0.5 * h.powf(nf);
    Ok(first - sign * h.ln() * i_n + sign * third)
}

/// K_{k+1/2}(x) in closed form.
pub fn k_half_integer(k: usize, x: f64) -> f64 {
    let mut s = 0.0;
    for j in 0..=k {
        let c = (ln_gamma((k + j + 1) as f64) - ln_gamma((j + 1) as f64) - ln_gamma((k - j + 1) as f64))
            .exp();
        s += c / (2.0 * x).powi(j as i32);
    }
    (PI / (2.0 * x)).sqrt() * (-x).exp() * s
}

/// (J_ν(x), Y_ν(x)) for ν ≥ 0 and x > 0.
pub fn jy_nu(nu: f64, x: f64) -> (f64, f64) {
    debug_assert!(nu >= 0.0 && x > 0.0);
    if x > 25.0 + nu * nu {
        return jy_hankel(nu, x);
    }
    let nl = if x < XMIN {
        (nu + 0.5).floor() as usize
    } else {
        ((nu - x + 1.5).floor()).max(0.0) as usize
    };
    let mu = nu - nl as f64;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;
    let (rjmu, mut rymu, mut ry1);
    if x < XMIN {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (g1, g2, gampl, gammi) = temme_gammas(mu);
        let mut ff = 2.0 / PI * fact * (g1 * e.cosh() + g2 * fact2 * d);
        let ee = e.exp();
        let mut p = ee / (gampl * PI);
        let mut q = 1.0 / (ee * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut cc = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            cc *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = cc * (ff + r * q);
            sum += del;
            sum1 += cc * p - fi * del;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = mu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        let mut a = 0.25 - mu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 2..MAXIT {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                break;
            }
        }
        let gam = (p - f) / q;
        let mut j = (w / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            j = -j;
        }
        rjmu = j;
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = mu * xi * rymu - rymup;
    }
    let rj = rjl1 * (rjmu / rjl);
    for i in 1..=nl {
        let rytemp = (mu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    (rj, rymu)
}

/// Hankel asymptotic expansion for x ≫ max(1, ν²).
fn jy_hankel(nu: f64, x: f64) -> (f64, f64) {
    let m = 4.0 * nu * nu;
    let z8 = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = (2 * k - 1) as f64;
        term *= (m - kf * kf) / (k as f64 * z8);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    let amp = (2.0 / (PI * x)).sqrt();
    let (s, c) = chi.sin_cos();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

/// J_ν(x) for any real ν and x > 0.
pub fn j_nu(nu: f64, x: f64) -> f64 {
    if nu >= 0.0 {
        return jy_nu(nu, x).0;
    }
    let a = -nu;
    if a == a.round() {
        let j = jy_nu(a, x).0;
        return if (a as i64) % 2 == 0 { j } else { -j };
    }
    let (j, y) = jy_nu(a, x);
    (a * PI).cos() * j - (a * PI).sin() * y
}

/// Y_ν(x) for ν ≥ 0 and x > 0.
pub fn y_nu(nu: f64, x: f64) -> f64 {
    jy_nu(nu, x).1
}
