//! Named identity-check suites and sample emission.
//!
//! Every check owns a random stream keyed by its id, so a check produces the
//! same residual whether it runs alone, inside its suite, or inside `all`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{
    act, cocycle_beta, factor_word, inversion, measure_relation_check, random_element, random_orthogonal,
    GroupElement, TriangularElement,
};
use crate::measures::{
    big_psi, check_coherence, extrapolate_halving, ln_density_v, ln_mu_alpha_density, ln_nu_alpha_density,
    mu_alpha_density, mu_alpha_probability_density, nu_alpha_density, refinement_sequence, rn_derivative, CellVector,
    MarginalVector, Partition, Refinement,
};
use crate::process::{
    ks_two_sample, oracle_n2, project_config, sample_cell, sample_marginal, Atom, EmpiricalCharacteristic, JumpTable,
    PointConfiguration, ProcessConfig, SeededStream,
};
use crate::quadrature::fourier::{calibrate_cn, inverse_v_closed_form, inverse_v_transform, pairing_check};
use crate::quadrature::levy::{levy_khinchin_kappa_analytic, LEVY_GRID};
use crate::quadrature::{kernel_a, kernel_a_closed_n2, levy_khinchin_fit, radial_integral, RadialProfile};
use crate::reps::{
    comm_norm, r_transform, spherical_reproduce, special_cocycle, special_t_apply, t_comm_apply, tau_isometry_check,
    u_current_apply, u_letter_apply, vacuum, vacuum_checks, CellGrid, CurrentFunction, GridFunction, Involution,
    Letter1, ProductGrid, EXACT_TOL, KERNEL_TOL, MC_SIGMAS, QUADRATURE_TOL,
};
use crate::specfun::{
    bessel::k_nu, bessel_i, gamma, v_rho, v_rho_asymptotic, v_rho_reflection, Dimensions, FourierConstant,
};

/// Output format for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format {s:?}"))),
        }
    }
}

/// Settings shared by every suite and by sample emission.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub n: usize,
    pub partition: Partition,
    pub seed: u64,
    /// Monte Carlo sample count for the checks that take one.
    pub samples: usize,
    /// Per-check tolerance overrides keyed by check id.
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 2,
            partition: Partition::new(vec![0.5, 0.5]).expect("positive masses"),
            seed: 0,
            samples: 100_000,
            tolerances: BTreeMap::new(),
            output_path: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        Dimensions::new(self.n).map_err(|e| Error::Config(e.to_string()))?;
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::Config(format!("tolerance for {k} must be positive, got {v}")));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        Ok(())
    }

    pub fn dims(&self) -> Result<Dimensions> {
        Dimensions::new(self.n)
    }
}

/// One line of a suite report. `pass` holds exactly when residual ≤ tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    /// The identity being tested, in words.
    pub anchor: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: u64,
    /// A reported quantity such as a fitted constant.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// A full suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    /// The report with timings zeroed, for byte-level comparison.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.runtime_ms = 0;
        }
        r
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| Error::Io(e.to_string()))
            }
            Format::Csv => {
                let mut out = String::from("check_id,anchor,residual,tolerance,pass,runtime_ms\n");
                for c in &self.checks {
                    out += &format!(
                        "{},\"{}\",{:e},{:e},{},{}\n",
                        c.check_id, c.anchor, c.residual, c.tolerance, c.pass, c.runtime_ms
                    );
                }
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Specfun,
    Fourier,
    LevyKhinchin,
    Measures,
    Coherence,
    Invariance,
    Group,
    Reps,
    Spherical,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 10] =
        ["specfun", "fourier", "levy-khinchin", "measures", "coherence", "invariance", "group", "reps", "spherical", "all"];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Fourier => "fourier",
            Suite::LevyKhinchin => "levy-khinchin",
            Suite::Measures => "measures",
            Suite::Coherence => "coherence",
            Suite::Invariance => "invariance",
            Suite::Group => "group",
            Suite::Reps => "reps",
            Suite::Spherical => "spherical",
            Suite::All => "all",
        }
    }

    fn members(&self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Specfun, Fourier, LevyKhinchin, Measures, Coherence, Invariance, Group, Reps, Spherical],
            s => vec![*s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        use Suite::*;
        Ok(match s {
            "specfun" => Specfun,
            "fourier" => Fourier,
            "levy-khinchin" => LevyKhinchin,
            "measures" => Measures,
            "coherence" => Coherence,
            "invariance" => Invariance,
            "group" => Group,
            "reps" => Reps,
            "spherical" => Spherical,
            "all" => All,
            _ => return Err(Error::Config(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", ")))),
        })
    }
}

/// What a check body returns: its residual and an optional reported value.
#[derive(Debug, Clone, Copy)]
pub struct Outcome {
    pub residual: f64,
    pub value: Option<f64>,
}

impl From<f64> for Outcome {
    fn from(residual: f64) -> Self {
        Outcome { residual, value: None }
    }
}

type Body = Arc<dyn Fn(&RunConfig, &mut SeededStream) -> Result<Outcome> + Send + Sync>;

/// A registered check.
#[derive(Clone)]
pub struct Check {
    pub id: String,
    pub anchor: &'static str,
    pub tolerance: f64,
    body: Body,
}

impl std::fmt::Debug for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Check").field("id", &self.id).field("tolerance", &self.tolerance).finish()
    }
}

impl Check {
    fn new(
        id: impl Into<String>,
        anchor: &'static str,
        tolerance: f64,
        body: impl Fn(&RunConfig, &mut SeededStream) -> Result<Outcome> + Send + Sync + 'static,
    ) -> Self {
        Self { id: id.into(), anchor, tolerance, body: Arc::new(body) }
    }

    /// Runs on the check's own stream and times it.
    pub fn run(&self, config: &RunConfig) -> CheckReport {
        let tolerance = config.tolerances.get(&self.id).copied().unwrap_or(self.tolerance);
        let mut rng = SeededStream::new(config.seed, stream_id(&self.id));
        let t0 = Instant::now();
        let out = (self.body)(config, &mut rng);
        let runtime_ms = t0.elapsed().as_millis() as u64;
        let (residual, value, error) = match out {
            Ok(o) if o.residual.is_nan() => (f64::INFINITY, o.value, Some("residual is NaN".to_string())),
            Ok(o) => (o.residual, o.value, None),
            Err(e) => (f64::INFINITY, None, Some(e.to_string())),
        };
        CheckReport {
            check_id: self.id.clone(),
            anchor: self.anchor.to_string(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            runtime_ms,
            value,
            error,
        }
    }
}

/// FNV-1a of the check id, used as its stream id.
fn stream_id(id: &str) -> u64 {
    id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// The checks a suite runs, in report order.
pub fn suite_checks(suite: Suite) -> Vec<Check> {
    suite
        .members()
        .into_iter()
        .flat_map(|s| match s {
            Suite::Specfun => specfun_checks(),
            Suite::Fourier => fourier_checks(),
            Suite::LevyKhinchin => levy_checks(),
            Suite::Measures => measures_checks(),
            Suite::Coherence => coherence_checks(),
            Suite::Invariance => invariance_checks(),
            Suite::Group => group_checks(),
            Suite::Reps => reps_checks(),
            Suite::Spherical => spherical_checks(),
            Suite::All => unreachable!(),
        })
        .collect()
}

/// Runs a list of checks concurrently and assembles the report in order.
pub fn run_checks(name: &str, config: &RunConfig, checks: &[Check]) -> Result<SuiteReport> {
    config.validate()?;
    let reports: Vec<CheckReport> = checks.par_iter().map(|c| c.run(config)).collect();
    Ok(SuiteReport { suite: name.to_string(), seed: config.seed, pass: reports.iter().all(|r| r.pass), checks: reports })
}

pub fn run_suite(config: &RunConfig, suite: Suite) -> Result<SuiteReport> {
    run_checks(suite.name(), config, &suite_checks(suite))
}

/// Kind of draw written by [`emit_samples`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleKind {
    Marginal,
    Process { cutoff_eps: f64 },
}

#[derive(Serialize)]
struct MarginalRecord<'a> {
    masses: &'a [f64],
    xi: &'a MarginalVector,
}

/// Writes `count` draws as JSON lines. Marginal draws use the configured
/// partition; process draws live on X = [0, total mass).
pub fn emit_samples<W: Write>(config: &RunConfig, kind: SampleKind, count: usize, out: &mut W) -> Result<()> {
    config.validate()?;
    let dims = config.dims()?;
    let mut rng = SeededStream::new(config.seed, 0);
    match kind {
        SampleKind::Marginal => {
            for _ in 0..count {
                let xi = sample_marginal(dims, &config.partition, &mut rng)?;
                let rec = MarginalRecord { masses: config.partition.masses(), xi: &xi };
                writeln!(out, "{}", serde_json::to_string(&rec).map_err(|e| Error::Io(e.to_string()))?)?;
            }
        }
        SampleKind::Process { cutoff_eps } => {
            if count == 0 {
                return Ok(());
            }
            let table = JumpTable::new(dims, ProcessConfig::new(dims, config.partition.total_mass(), cutoff_eps))?;
            for _ in 0..count {
                let c = table.sample(&mut rng)?;
                writeln!(out, "{}", serde_json::to_string(&c).map_err(|e| Error::Io(e.to_string()))?)?;
            }
        }
    }
    Ok(())
}

fn dims(n: usize) -> Dimensions {
    Dimensions::new(n).expect("n >= 2")
}

fn part(m: &[f64]) -> Partition {
    Partition::new(m.to_vec()).expect("positive masses")
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn try_max(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut m = 0.0f64;
    for r in it {
        let r = r?;
        if r.is_nan() {
            return Ok(f64::NAN);
        }
        m = m.max(r);
    }
    Ok(m)
}

/// Relative error of the small-x branch against V itself, normalized by V − 1.
pub fn asymptotic_ratio_error(rho: f64, x: f64) -> Result<f64> {
    let v = v_rho(rho, x)?;
    Ok(((v - v_rho_asymptotic(rho, x)) / (v - 1.0)).abs())
}

// K values from mpmath at 30 digits.
const K_REFERENCE: [(f64, f64, f64); 6] = [
    (0.0, 1.0, 0.42102443824070833),
    (0.5, 2.0, 0.11993777196806145),
    (1.5, 2.0, 0.17990665795209217),
    (0.3, 0.01, 6.8901026382927695),
    (2.7, 5.0, 0.0071262487556333316),
    (1.0, 1.0, 0.60190723019723457),
];

fn specfun_checks() -> Vec<Check> {
    let mut v = vec![
        Check::new("specfun.k_reference", "K_nu against reference values", 1e-12, |_, _| {
            Ok(max_of(K_REFERENCE.iter().map(|&(nu, x, want)| rel(k_nu(nu, x), want))).into())
        }),
        Check::new("specfun.i_reference", "I_1/2(2) = sinh(2)/sqrt(pi)", 1e-13, |_, _| {
            let want = 2f64.sinh() / PI.sqrt();
            Ok(rel(bessel_i(0.5, 1.0)?, want).into())
        }),
        Check::new("specfun.v_half_exponential", "V_1/2(x) = e^{2x} on [0, 5]", 1e-12, |_, _| {
            try_max((0..=100).map(|k| {
                let x = 0.05 * k as f64;
                v_rho(0.5, x).map(|v| rel(v, (2.0 * x).exp()))
            }))
            .map(Outcome::from)
        }),
        Check::new("specfun.v_at_zero", "V_rho(0) = 1 exactly", 0.0, |_, _| {
            try_max([0.5, 1.0, 2.0].iter().map(|&r| v_rho(r, 0.0).map(|v| (v - 1.0).abs()))).map(Outcome::from)
        }),
        Check::new("specfun.v_times_k_profile", "V_rho times the normalized K profile is 1", 1e-10, |_, rng| {
            try_max((0..200).map(|_| {
                let rho = rng.random_range(0.05..4.0);
                let x = rng.random_range(0.001..20.0);
                v_rho(rho, x).map(|v| (v * (2.0 / gamma(rho)) * x.powf(rho) * k_nu(rho, 2.0 * x) - 1.0).abs())
            }))
            .map(Outcome::from)
        }),
        Check::new("specfun.v_reflection", "V_rho through the I_{-rho} - I_rho form", 1e-8, |_, rng| {
            try_max((0..200).map(|_| {
                let rho = loop {
                    let r: f64 = rng.random_range(0.05..2.9);
                    if (r - r.round()).abs() > 1e-2 {
                        break r;
                    }
                };
                let x = rng.random_range(0.01..3.0);
                Ok(rel(v_rho_reflection(rho, x)?, v_rho(rho, x)?))
            }))
            .map(Outcome::from)
        }),
        Check::new("specfun.k_integer_continuity", "K_rho continuous across rho = 1, 2", 1e-8, |_, _| {
            Ok(max_of([1.0, 2.0].iter().flat_map(|&m| {
                [0.1, 1.0, 5.0].map(move |x| {
                    let at = k_nu(m, x);
                    rel(k_nu(m - 1e-9, x), at).max(rel(k_nu(m + 1e-9, x), at))
                })
            }))
            .into())
        }),
    ];
    // ρ = 1 is checked where its logarithmic correction has decayed
    for (rho, x) in [(0.5, 1e-3), (1.0, 1e-6), (2.0, 1e-3)] {
        v.push(Check::new(
            format!("specfun.v_asymptotic_rho{rho}_x{x:e}"),
            "small-x branch of V_rho",
            1e-2,
            move |_, _| asymptotic_ratio_error(rho, x).map(Outcome::from),
        ));
    }
    v
}

fn fourier_checks() -> Vec<Check> {
    let mut v = Vec::new();
    for n in [2usize, 3] {
        v.push(Check::new(
            format!("fourier.cn_spread_n{n}"),
            "Fourier transform of the Lorentzian is the Bessel-K profile",
            1e-6,
            move |_, _| {
                let fc = calibrate_cn(dims(n))?;
                Ok(Outcome { residual: fc.spread, value: Some(fc.c_n) })
            },
        ));
        v.push(Check::new(
            format!("fourier.cn_analytic_n{n}"),
            "calibrated constant equals (4 pi)^{d/2}",
            1e-6,
            move |_, _| {
                let fc = calibrate_cn(dims(n))?;
                Ok(rel(fc.c_n, FourierConstant::analytic(dims(n))).into())
            },
        ));
        v.push(Check::new(
            format!("fourier.pairing_n{n}"),
            "Riesz transform in pairing form with the same constant",
            1e-5,
            move |_, _| {
                let d = dims(n);
                let cn = calibrate_cn(d)?.c_n;
                let mut worst = 0.0f64;
                for lambda in [0.3, 0.5 * d.df(), 0.9 * d.df()] {
                    for coeffs in [vec![1.0], vec![1.0, 0.5], vec![0.2, -0.3, 0.1]] {
                        let p = RadialProfile::gaussian_poly(0.8, coeffs);
                        worst = worst.max(pairing_check(d, cn, lambda, &p, 8.0, 12.0)?.residual);
                    }
                }
                Ok(worst.into())
            },
        ));
    }
    v.push(Check::new("fourier.inverse_v_n3", "transform of 1/V_rho in closed form", 1e-6, |_, _| {
        let d = dims(3);
        let cn = calibrate_cn(d)?.c_n;
        try_max([(0.6, 0.5), (0.6, 2.0), (1.5, 0.5), (1.5, 2.0)].iter().map(|&(rho, x)| {
            Ok(rel(inverse_v_transform(d, rho, x)?.value, inverse_v_closed_form(d, cn, rho, x)))
        }))
        .map(Outcome::from)
    }));
    v.push(Check::new("fourier.kernel_closed_form_n2", "intertwining kernel against its closed form", 1e-7, |_, _| {
        try_max([(0.5, 0.3), (0.5, -0.3), (2.0, 0.1), (1.2, -2.0)].iter().map(|&(x, y)| {
            let q = kernel_a(dims(2), 0.5, &[x], &[y])?.value;
            let c = kernel_a_closed_n2(0.5, x, y)?;
            Ok((q - c).abs() / c.abs().max(1.0))
        }))
        .map(Outcome::from)
    }));
    v
}

fn levy_checks() -> Vec<Check> {
    let mut v = Vec::new();
    for n in [2usize, 3] {
        v.push(Check::new(
            format!("levy-khinchin.fit_n{n}"),
            "log(1+|gamma|^2/4) as a Levy-Khinchin integral with one constant",
            1e-4,
            move |_, _| {
                let fit = levy_khinchin_fit(dims(n), &LEVY_GRID)?;
                Ok(Outcome { residual: fit.max_residual(), value: Some(fit.kappa) })
            },
        ));
        v.push(Check::new(
            format!("levy-khinchin.kappa_n{n}"),
            "fitted constant equals -2 pi^{-d/2}",
            1e-6,
            move |_, _| {
                let fit = levy_khinchin_fit(dims(n), &LEVY_GRID)?;
                Ok(rel(fit.kappa, levy_khinchin_kappa_analytic(dims(n))).into())
            },
        ));
    }
    v
}

fn measures_checks() -> Vec<Check> {
    let mut v = vec![
        Check::new("measures.mu_example", "single-cell mu density 2 K_0(1)/Gamma(1/2)", 1e-13, |_, _| {
            // mpmath reference
            let v = mu_alpha_density(dims(2), &part(&[1.0]), &MarginalVector(vec![vec![0.5]]))?;
            Ok(rel(v, 0.47507520494890654).into())
        }),
        Check::new("measures.rn_ratio", "Radon-Nikodym derivative is the density ratio", 1e-10, |_, rng| {
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let n = rng.random_range(2..5);
                let d = dims(n);
                let l = rng.random_range(1..3);
                let masses: Vec<f64> = (0..l).map(|_| rng.random_range(0.05..(n - 1) as f64 - 0.05)).collect();
                let p = part(&masses);
                let xi = MarginalVector(
                    (0..l).map(|_| (0..n - 1).map(|_| rng.random_range(-4.0..4.0)).collect()).collect(),
                );
                let r = rn_derivative(d, &p, &xi)?;
                let q = nu_alpha_density(d, &p, &xi)? / mu_alpha_density(d, &p, &xi)?;
                worst = worst.max(rel(r, q));
            }
            Ok(worst.into())
        }),
        Check::new("measures.mu_normalization", "mu cell densities are probability densities", 1e-8, |_, _| {
            try_max([(2usize, 0.5), (2, 1.5), (3, 0.7), (3, 2.5), (4, 1.0)].iter().map(|&(n, lambda)| {
                let d = dims(n);
                let p = part(&[lambda]);
                let prof = RadialProfile::new(0.0, move |r| {
                    let mut x = vec![0.0; n - 1];
                    x[0] = r;
                    mu_alpha_probability_density(d, &p, &MarginalVector(vec![x])).unwrap_or(f64::NAN)
                });
                Ok((radial_integral(d, &prof)?.value - 1.0).abs())
            }))
            .map(Outcome::from)
        }),
    ];
    for n in [2usize, 3] {
        v.push(Check::new(
            format!("measures.refinement_limit_n{n}"),
            "Radon-Nikodym derivatives on refinements converge to v",
            1e-2,
            move |_, _| {
                let d = dims(n);
                let c = PointConfiguration::new(
                    vec![
                        Atom { x: 0.11, c: vec![0.8; n - 1] },
                        Atom { x: 0.52, c: vec![-0.3; n - 1] },
                        Atom { x: 0.93, c: vec![1.5; n - 1] },
                    ],
                    0.0,
                )?;
                let seq = refinement_sequence(d, &c, 1.0, &[8, 16, 32, 64])?;
                let target = ln_density_v(d, &c, 1.0)?;
                Ok(((extrapolate_halving(&seq) - target).exp() - 1.0).abs().into())
            },
        ));
    }
    v.push(Check::new("process.n2_oracle_ks", "n = 2 marginal against the gamma-difference law", 0.02, |cfg, rng| {
        let a: Vec<f64> = (0..cfg.samples).map(|_| sample_cell(dims(2), 0.5, rng).map(|x| x[0])).collect::<Result<_>>()?;
        let b: Vec<f64> = (0..cfg.samples).map(|_| oracle_n2(0.5, rng)).collect::<Result<_>>()?;
        Ok(ks_two_sample(&a, &b).into())
    }));
    v.push(Check::new(
        "process.n3_characteristic_function",
        "n = 3 marginal characteristic function (1+|gamma|^2/4)^{-lambda/2}",
        MC_SIGMAS,
        |cfg, rng| {
            let lambda = 0.7;
            let draws: Vec<Vec<f64>> = (0..cfg.samples).map(|_| sample_cell(dims(3), lambda, rng)).collect::<Result<_>>()?;
            Ok(max_of([0.0, 0.5, 1.0, 2.0, 4.0].iter().map(|&g| {
                let gamma = [g * 0.6, g * 0.8];
                let phases: Vec<f64> = draws.iter().map(|x| x[0] * gamma[0] + x[1] * gamma[1]).collect();
                EmpiricalCharacteristic::from_phases(&phases).z_score((1.0 + 0.25 * g * g).powf(-0.5 * lambda))
            }))
            .into())
        },
    ));
    v.push(Check::new("process.projection_ks", "projected jump process against exact marginals", 0.03, |cfg, rng| {
        let d = dims(2);
        let p = part(&[0.5, 0.5]);
        let paths = (cfg.samples / 10).max(1);
        let table = JumpTable::new(d, ProcessConfig::new(d, 1.0, 1e-4))?;
        let proj: Vec<MarginalVector> =
            (0..paths).map(|_| table.sample(rng).map(|c| project_config(d, &c, &p))).collect::<Result<_>>()?;
        let marg: Vec<MarginalVector> = (0..paths).map(|_| sample_marginal(d, &p, rng)).collect::<Result<_>>()?;
        Ok(max_of((0..2).map(|cell| {
            let a: Vec<f64> = proj.iter().map(|m| m.0[cell][0]).collect();
            let b: Vec<f64> = marg.iter().map(|m| m.0[cell][0]).collect();
            ks_two_sample(&a, &b)
        }))
        .into())
    }));
    v
}

fn coherence_checks() -> Vec<Check> {
    fn cases() -> Vec<(usize, Refinement, CellVector)> {
        let p = part(&[1.0]);
        let split = Refinement::split(&p, &[1.0, 1.0]).expect("valid split");
        let chain = split.then(&Refinement::split(&split.child, &[1.0, 3.0]).expect("valid split")).expect("chain");
        vec![(2, split, CellVector(vec![vec![1.5]])), (3, chain, CellVector(vec![vec![0.7, -1.1]]))]
    }
    let mut v = Vec::new();
    for (k, label) in ["split_n2", "chain_n3"].iter().enumerate() {
        v.push(Check::new(
            format!("coherence.nu_{label}"),
            "Fourier transform of nu is unchanged by refinement",
            1e-12,
            move |_, rng| {
                let (n, r, g) = cases().swap_remove(k);
                Ok(check_coherence(dims(n), &r, &g, 1, rng)?.nu_residual.into())
            },
        ));
        v.push(Check::new(
            format!("coherence.psi_{label}"),
            "Psi is unchanged by refinement",
            1e-12,
            move |_, rng| {
                let (n, r, g) = cases().swap_remove(k);
                Ok(check_coherence(dims(n), &r, &g, 1, rng)?.psi_residual.into())
            },
        ));
        v.push(Check::new(
            format!("coherence.mu_{label}"),
            "projections of mu on a refinement follow mu",
            MC_SIGMAS,
            move |cfg, rng| {
                let (n, r, g) = cases().swap_remove(k);
                Ok(check_coherence(dims(n), &r, &g, cfg.samples, rng)?.mu_z_score.into())
            },
        ));
    }
    v
}

fn invariance_checks() -> Vec<Check> {
    vec![
        Check::new("invariance.rotation", "nu and mu densities are invariant under cell rotations", 1e-12, |_, rng| {
            let d = dims(3);
            let p = part(&[0.8, 1.3]);
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let xi: Vec<Vec<f64>> = (0..2).map(|_| (0..2).map(|_| rng.random_range(-3.0..3.0)).collect()).collect();
                let rotated: Vec<Vec<f64>> = xi
                    .iter()
                    .map(|x| {
                        let u = random_orthogonal(2, rng);
                        (0..2).map(|j| (0..2).map(|i| x[i] * u[(i, j)]).sum()).collect()
                    })
                    .collect();
                let (a, b) = (MarginalVector(xi), MarginalVector(rotated));
                worst = worst
                    .max((ln_nu_alpha_density(d, &p, &a)? - ln_nu_alpha_density(d, &p, &b)?).abs())
                    .max((ln_mu_alpha_density(d, &p, &a)? - ln_mu_alpha_density(d, &p, &b)?).abs());
            }
            Ok(worst.into())
        }),
        Check::new(
            "invariance.scaling",
            "nu density picks up prod |eps_i|^{lambda_i} under cell scalings",
            1e-12,
            |_, rng| {
                let d = dims(3);
                let mut worst = 0.0f64;
                for _ in 0..100 {
                    let (l0, l1) = (rng.random_range(0.05..1.9), rng.random_range(0.05..1.9));
                    let p = part(&[l0, l1]);
                    let e0 = rng.random_range(0.1..5.0);
                    let e1 = -rng.random_range(0.1..5.0);
                    let x: Vec<f64> = (0..4).map(|_| rng.random_range(0.1..3.0)).collect();
                    let xi = MarginalVector(vec![vec![x[0], x[1]], vec![x[2], -x[3]]]);
                    let sc = MarginalVector(vec![vec![e0 * x[0], e0 * x[1]], vec![e1 * x[2], -e1 * x[3]]]);
                    let lhs = nu_alpha_density(d, &p, &sc)? * (e0 * e1).abs().powi(2);
                    let rhs = e0.abs().powf(l0) * e1.abs().powf(l1) * nu_alpha_density(d, &p, &xi)?;
                    worst = worst.max(rel(lhs, rhs));
                }
                Ok(worst.into())
            },
        ),
    ]
}

fn group_samples(ns: &[usize], trials: usize, rng: &mut SeededStream) -> Vec<(GroupElement, GroupElement, Vec<f64>)> {
    (0..trials)
        .map(|k| {
            let d = dims(ns[k % ns.len()]);
            let g1 = random_element(d, rng);
            let g2 = random_element(d, rng);
            let x = (0..d.d()).map(|_| StandardNormal.sample(rng)).collect();
            (g1, g2, x)
        })
        .collect()
}

fn rel_matrix(a: &GroupElement, b: &GroupElement) -> f64 {
    (a.matrix() - b.matrix()).abs().max() / a.matrix().abs().max().max(1.0)
}

fn group_checks() -> Vec<Check> {
    group_checks_for(&[2, 3, 4], 100)
}

/// The group-law checks on `trials` random words, cycling through `ns`.
pub fn group_checks_for(ns: &[usize], trials: usize) -> Vec<Check> {
    let ns: Arc<Vec<usize>> = Arc::new(ns.to_vec());
    let (n1, n2, n3, n4, n5, n6) = (ns.clone(), ns.clone(), ns.clone(), ns.clone(), ns.clone(), ns);
    vec![
        Check::new("group.membership", "random words satisfy the O(n,1) block relations", 1e-10, move |_, rng| {
            Ok(max_of(group_samples(&n1, trials, rng).iter().flat_map(|(g, _, _)| {
                let mut r = g.block_relation_residuals().to_vec();
                r.push(g.membership_residual());
                r
            }))
            .into())
        }),
        Check::new("group.cocycle", "beta(x, g1 g2) = beta(x, g1) beta(x g1, g2)", 1e-6, move |_, rng| {
            let mut worst = 0.0f64;
            for (g1, g2, x) in group_samples(&n2, trials, rng) {
                let (Ok(y), Ok(b12), Ok(b1)) = (act(&x, &g1), cocycle_beta(&x, &g1.mul(&g2)), cocycle_beta(&x, &g1))
                else {
                    continue;
                };
                if let Ok(b2) = cocycle_beta(&y, &g2) {
                    worst = worst.max((b12 - b1 * b2).abs() / b12.max(b1 * b2));
                }
            }
            Ok(worst.into())
        }),
        Check::new("group.jacobian", "Jacobian of the boundary action is beta^{1-n}", 1e-6, move |_, rng| {
            let mut worst = 0.0f64;
            for (g, _, x) in group_samples(&n3, trials, rng) {
                let y: Vec<f64> = x.iter().map(|a| a + 0.7).collect();
                if let Ok((r1, _)) = measure_relation_check(&g, &x, &y) {
                    worst = worst.max(r1);
                }
            }
            Ok(worst.into())
        }),
        Check::new("group.distance", "|x-y|^2 = |xg-yg|^2 beta(x,g) beta(y,g)", 1e-6, move |_, rng| {
            let mut worst = 0.0f64;
            for (g, _, x) in group_samples(&n4, trials, rng) {
                let y: Vec<f64> = x.iter().map(|a| a - 1.3).collect();
                if let Ok((_, r2)) = measure_relation_check(&g, &x, &y) {
                    worst = worst.max(r2);
                }
            }
            Ok(worst.into())
        }),
        Check::new("group.z_s_identity", "z(g) s = d(g) s z(-g) s z(-2g/|g|^2) as matrices", 1e-10, move |_, rng| {
            let mut worst = 0.0f64;
            for k in 0..trials {
                let n = n5[k % n5.len()];
                let g: Vec<f64> = (0..n - 1).map(|_| StandardNormal.sample(rng)).collect();
                let s = GroupElement::s(dims(n));
                let neg: Vec<f64> = g.iter().map(|x| -x).collect();
                let lhs = GroupElement::z(&g).mul(&s);
                let rhs = GroupElement::d_of_gamma(&g)?
                    .mul(&s)
                    .mul(&GroupElement::z(&neg))
                    .mul(&s)
                    .mul(&GroupElement::z(&inversion(&g)?));
                worst = worst.max(rel_matrix(&lhs, &rhs));
            }
            Ok(worst.into())
        }),
        Check::new("group.factor_word", "factor_word reproduces the element", 1e-8, move |_, rng| {
            try_max(group_samples(&n6, trials, rng).iter().map(|(g, _, _)| Ok(rel_matrix(&factor_word(g)?.evaluate(), g))))
                .map(Outcome::from)
        }),
    ]
}

fn line_setup(lambda: f64) -> Result<(Dimensions, Partition, Arc<ProductGrid>)> {
    let p = part(&[lambda]);
    let g = Arc::new(ProductGrid::uniform(&p, CellGrid::standard(dims(2), 20.0, 2.0)?));
    Ok((dims(2), p, g))
}

fn fine_setup(lambda: f64) -> (Dimensions, Partition, Arc<ProductGrid>) {
    let p = part(&[lambda]);
    let g = Arc::new(ProductGrid::uniform(&p, CellGrid::line(128, 14.0, 2.0)));
    (dims(2), p, g)
}

fn bump(width: f64) -> CurrentFunction {
    CurrentFunction::single(move |x| (-x[0] * x[0] / (width * width)).exp())
}

fn shifted() -> CurrentFunction {
    CurrentFunction::single(|x| (-(x[0] - 1.0) * (x[0] - 1.0)).exp())
}

fn rot(theta: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}

fn node_gap(a: &GridFunction, b: &GridFunction) -> f64 {
    max_of(a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm() / (1.0 + y.norm())))
}

fn norm_change(
    d: Dimensions,
    p: &Partition,
    g: &Arc<ProductGrid>,
    f: &CurrentFunction,
    uf: &CurrentFunction,
) -> Result<f64> {
    let n0 = GridFunction::tabulate(p, g.clone(), f).nu_norm2(d)?;
    let n1 = GridFunction::tabulate(p, g.clone(), uf).nu_norm2(d)?;
    Ok((n1 - n0).abs() / n0)
}

fn r_at(d: Dimensions, f: &GridFunction, y: f64) -> Result<Complex64> {
    r_transform(d, f, &CellVector(vec![vec![y]]))
}

fn reps_checks() -> Vec<Check> {
    vec![
        Check::new("reps.unitarity.z", "translations act by phases", EXACT_TOL, |_, _| {
            let (d, p, g) = fine_setup(0.5);
            let f = shifted();
            let uf = u_current_apply(d, &p, &[TriangularElement::translation(vec![1.3])], &f)?;
            norm_change(d, &p, &g, &f, &uf).map(Outcome::from)
        }),
        Check::new("reps.unitarity.d", "dilations preserve the nu norm", QUADRATURE_TOL, |_, _| {
            let (d, p, g) = fine_setup(0.5);
            let f = shifted();
            let b = TriangularElement::new(1.7, -DMatrix::identity(1, 1), vec![0.6])?;
            let uf = u_current_apply(d, &p, &[b], &f)?;
            norm_change(d, &p, &g, &f, &uf).map(Outcome::from)
        }),
        Check::new("reps.unitarity.comm_norm", "triangular letters preserve the commutative-model norm", QUADRATURE_TOL, |_, _| {
            let d = dims(3);
            let p = part(&[0.8]);
            let g = Arc::new(ProductGrid::uniform(&p, CellGrid::polar(96, 64, 10.0, 2.0)));
            let phi =
                CurrentFunction::new(|x| Complex64::new((-(x[0][0] - 0.5).powi(2) - x[0][1] * x[0][1]).exp(), 0.0));
            let b = TriangularElement::new(1.3, rot(0.4), vec![0.2, -0.7])?.to_element();
            let tphi = t_comm_apply(d, 0.8, &b, &phi, None)?;
            let n0 = comm_norm(d, 0.8, &GridFunction::tabulate(&p, g.clone(), &phi))?;
            let n1 = comm_norm(d, 0.8, &GridFunction::tabulate(&p, g, &tphi))?;
            Ok(((n1 - n0).abs() / n0).into())
        }),
        Check::new("reps.group_law", "operators compose like the group on triangular words", EXACT_TOL, |_, _| {
            let d = dims(3);
            let phi =
                CurrentFunction::new(|x| Complex64::new((-(x[0][0] - 0.5).powi(2) - x[0][1] * x[0][1]).exp(), x[0][1]));
            let b1 = TriangularElement::new(1.3, rot(0.4), vec![0.2, -0.7])?.to_element();
            let b2 = TriangularElement::new(-0.6, rot(-1.1), vec![1.0, 0.3])?.to_element();
            let p = part(&[0.8]);
            let g = Arc::new(ProductGrid::uniform(&p, CellGrid::standard(d, 10.0, 1.0)?));
            let both = t_comm_apply(d, 0.8, &b1.mul(&b2), &phi, None)?;
            let outer = t_comm_apply(d, 0.8, &b1, &t_comm_apply(d, 0.8, &b2, &phi, None)?, None)?;
            Ok(node_gap(&GridFunction::tabulate(&p, g.clone(), &both), &GridFunction::tabulate(&p, g, &outer)).into())
        }),
        Check::new("reps.involution.square", "the involution squares to the identity", KERNEL_TOL, |_, _| {
            let (d, p, g) = line_setup(0.5)?;
            let inv = Involution::new(d, &p, g.clone())?;
            let f = GridFunction::tabulate(&p, g, &bump(2.0));
            inv.apply_grid(&inv.apply_grid(&f)).relative_distance(d, &f).map(Outcome::from)
        }),
        Check::new("reps.involution.unitary", "the involution preserves the nu norm", KERNEL_TOL, |_, _| {
            let (d, p, g) = line_setup(0.5)?;
            let inv = Involution::new(d, &p, g.clone())?;
            let f = GridFunction::tabulate(&p, g, &bump(2.0));
            let (n0, n1) = (f.nu_norm2(d)?, inv.apply_grid(&f).nu_norm2(d)?);
            Ok(((n1 - n0).abs() / n0).into())
        }),
        Check::new("reps.involution.dilation", "I U_d(eps) = U_d(1/eps) I", KERNEL_TOL, |_, _| {
            let (d, p, g) = line_setup(0.5)?;
            let inv = Involution::new(d, &p, g.clone())?;
            let f = bump(2.0);
            let b = TriangularElement::dilation(1.4, -DMatrix::identity(1, 1))?;
            let bi = TriangularElement::dilation(1.0 / 1.4, -DMatrix::identity(1, 1))?;
            let lhs = u_letter_apply(d, &p, &[Letter1::S, Letter1::B(vec![b])], &inv, &f)?;
            let rhs = u_letter_apply(d, &p, &[Letter1::B(vec![bi]), Letter1::S], &inv, &f)?;
            GridFunction::tabulate(&p, g.clone(), &lhs).relative_distance(d, &GridFunction::tabulate(&p, g, &rhs)).map(Outcome::from)
        }),
        Check::new("reps.involution.translation", "U_z(g) I = U_d(g) I U_z(-g) I U_z(-2g/|g|^2)", KERNEL_TOL, |_, _| {
            let (d, p, g) = line_setup(0.5)?;
            let inv = Involution::new(d, &p, g.clone())?;
            let f = bump(2.0);
            let gam = 1.5;
            let dg = TriangularElement::from_element(&GroupElement::d_of_gamma(&[gam])?)
                .ok_or_else(|| Error::Domain("d(gamma) is triangular".into()))?;
            let lhs = u_letter_apply(
                d,
                &p,
                &[Letter1::B(vec![TriangularElement::translation(vec![gam])]), Letter1::S],
                &inv,
                &f,
            )?;
            let word = [
                Letter1::B(vec![dg]),
                Letter1::S,
                Letter1::B(vec![TriangularElement::translation(vec![-gam])]),
                Letter1::S,
                Letter1::B(vec![TriangularElement::translation(vec![-2.0 / gam])]),
            ];
            let rhs = u_letter_apply(d, &p, &word, &inv, &f)?;
            GridFunction::tabulate(&p, g.clone(), &lhs).relative_distance(d, &GridFunction::tabulate(&p, g, &rhs)).map(Outcome::from)
        }),
        Check::new("reps.tau", "the product embedding is isometric", MC_SIGMAS, |cfg, rng| {
            Ok(tau_isometry_check(dims(3), &[0.5, 0.7], cfg.samples, rng)?.z.into())
        }),
        Check::new("reps.vacuum_ratio_n3", "vacuum matrix coefficient is Psi", QUADRATURE_TOL, |_, _| {
            let d = dims(3);
            let r = vacuum_checks(d, 1.0, calibrate_cn(d)?.c_n, &[0.0, 0.5, 2.0])?;
            Ok(r.max_ratio_residual.max(r.integral_residual).into())
        }),
        Check::new("reps.vacuum_ratio_n2", "vacuum matrix coefficient is Psi", QUADRATURE_TOL, |_, _| {
            let d = dims(2);
            let r = vacuum_checks(d, 0.4, calibrate_cn(d)?.c_n, &[0.3, 1.0, 3.0])?;
            Ok(r.max_ratio_residual.max(r.integral_residual).into())
        }),
        Check::new("reps.r_transform.z", "dual transform of a translate is a shift", EXACT_TOL, |_, _| {
            let (d, p, g) = fine_setup(0.5);
            let f = shifted();
            let fg = GridFunction::tabulate(&p, g.clone(), &f);
            let zf = u_current_apply(d, &p, &[TriangularElement::translation(vec![0.4])], &f)?;
            let a = r_at(d, &GridFunction::tabulate(&p, g, &zf), 0.7)?;
            let b = r_at(d, &fg, 1.1)?;
            Ok(((a - b).norm() / b.norm().max(1.0)).into())
        }),
        Check::new("reps.r_transform.d", "dual transform of a dilate", QUADRATURE_TOL, |_, _| {
            let (d, p, g) = fine_setup(0.5);
            let f = shifted();
            let fg = GridFunction::tabulate(&p, g.clone(), &f);
            let (eps, u, gamma) = (1.6, -1.0, 0.7);
            let df =
                u_current_apply(d, &p, &[TriangularElement::dilation(eps, DMatrix::from_element(1, 1, u))?], &f)?;
            let a = r_at(d, &GridFunction::tabulate(&p, g, &df), gamma)?;
            let b = r_at(d, &fg, gamma * u / eps)? * eps.powf(-0.25);
            Ok(((a - b).norm() / b.norm()).into())
        }),
        Check::new("reps.r_transform.s", "dual transform of the involution", KERNEL_TOL, |_, _| {
            let (d, p, g) = line_setup(0.5)?;
            let inv = Involution::new(d, &p, g.clone())?;
            let even = GridFunction::tabulate(&p, g, &bump(2.0));
            let once = inv.apply_grid(&even);
            try_max([0.8, 1.5, -2.5].iter().map(|&gamma| {
                let a = r_at(d, &once, gamma)?;
                let b = r_at(d, &even, -2.0 / gamma)? * 2f64.powf(0.25) * gamma.abs().powf(-0.5);
                Ok((a - b).norm() / b.norm())
            }))
            .map(Outcome::from)
        }),
        Check::new("reps.special_cocycle", "b(g1 g2) = T_g1 b(g2) + b(g1) for the special representation", 1e-8, |_, _| {
            let d = dims(3);
            let nodes = CellGrid::polar(6, 6, 3.0, 1.0);
            let g1 = GroupElement::z(&[0.5, -0.2]);
            let g2 = GroupElement::d(1.7, &rot(0.3))?;
            let f0 = vacuum(d, 0.0)?.function();
            let b2 = special_t_apply(d, &g2, &f0, None)?.add(&f0.scale(Complex64::new(-1.0, 0.0)));
            let tb2 = special_t_apply(d, &g1, &b2, None)?;
            let b1 = special_cocycle(d, &g1, &nodes, None)?;
            let b12 = special_cocycle(d, &g1.mul(&g2), &nodes, None)?;
            Ok(max_of(
                nodes.points.iter().enumerate().map(|(k, p)| (b12[k] - tb2.eval(std::slice::from_ref(p)) - b1[k]).norm()),
            )
            .into())
        }),
    ]
}

/// The representation checks behind `rep check --suite <name>`.
pub fn rep_checks(name: &str) -> Result<Vec<Check>> {
    let pick = |prefixes: &[&str]| -> Vec<Check> {
        let mut all = reps_checks();
        all.extend(spherical_checks());
        all.into_iter().filter(|c| prefixes.iter().any(|p| c.id.starts_with(p))).collect()
    };
    Ok(match name {
        "unitarity" => pick(&["reps.unitarity.", "reps.group_law", "reps.r_transform."]),
        "involution" => pick(&["reps.involution."]),
        "tau" => pick(&["reps.tau"]),
        "spherical" => pick(&["spherical.", "reps.vacuum"]),
        "cocycle" => pick(&["reps.special_cocycle"]),
        _ => {
            return Err(Error::Config(format!(
                "unknown rep suite {name:?}; expected unitarity, involution, tau, spherical or cocycle"
            )))
        }
    })
}

fn spherical_gamma(n: usize, cells: usize, r: f64) -> CellVector {
    CellVector(
        (0..cells)
            .map(|i| {
                let mut g = vec![0.0; n - 1];
                g[i % (n - 1)] = r;
                g
            })
            .collect(),
    )
}

fn spherical_checks() -> Vec<Check> {
    let mut v = Vec::new();
    for n in [2usize, 3] {
        for masses in [vec![1.0], vec![0.5, 0.5]] {
            for r in [0.0, 1.0, 2.0] {
                let label = masses.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("_");
                let masses = masses.clone();
                v.push(Check::new(
                    format!("spherical.n{n}_m{label}_g{r}"),
                    "vacuum spherical function reproduces Psi",
                    MC_SIGMAS,
                    move |cfg, rng| {
                        let p = part(&masses);
                        let g = spherical_gamma(n, masses.len(), r);
                        let rep = spherical_reproduce(dims(n), &p, &g, cfg.samples, rng)?;
                        if (rep.psi - big_psi(&p, &g)).abs() > 1e-15 {
                            return Err(Error::Accuracy("Psi disagrees with its closed form".into()));
                        }
                        Ok(Outcome { residual: rep.z, value: Some(rep.estimate.re) })
                    },
                ));
            }
        }
    }
    v
}
