use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use lorentz_current::group::GroupElement;
use lorentz_current::measures::{
    ln_mu_alpha_density, ln_nu_alpha_density, ln_rn_derivative, MarginalVector, Partition,
};
use lorentz_current::quadrature::kernel_a;
use lorentz_current::reps::{t_comm_apply, CellGrid, CurrentFunction, GridFunction, Involution, ProductGrid};
use lorentz_current::specfun::{
    bessel_i, bessel_k, levy_density, marginal_radial_density, v_rho, Dimensions,
};
use lorentz_current::suite::{
    emit_samples, group_checks_for, rep_checks, run_checks, run_suite, Format, RunConfig, SampleKind, Suite,
    SuiteReport,
};
use lorentz_current::Error;

#[derive(Parser)]
#[command(name = "lorentz-current", version, about = "Densities, samplers, operators and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Random seed.
    #[arg(long, env = "LORENTZ_CURRENT_SEED", global = true)]
    seed: Option<u64>,
    /// Matrix size n of O(n,1).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Comma-separated cell masses.
    #[arg(long, global = true)]
    partition: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<FormatArg>,
    /// JSON run configuration; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Special functions.
    Specfun {
        #[command(subcommand)]
        cmd: SpecfunCmd,
    },
    /// Run a check suite.
    Check(CheckArgs),
    /// Draw samples as JSON lines.
    Sample {
        #[command(subcommand)]
        kind: SampleCmd,
    },
    /// Evaluate measure densities.
    Measure {
        #[command(subcommand)]
        cmd: MeasureCmd,
    },
    /// Tabulate the intertwining kernel.
    Kernel {
        #[command(subcommand)]
        cmd: KernelCmd,
    },
    /// Representation operators.
    Rep {
        #[command(subcommand)]
        cmd: RepCmd,
    },
    /// Group-law checks.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpecFn {
    /// I_rho(2x)
    #[value(name = "I")]
    I,
    /// K_rho(2x)
    #[value(name = "K")]
    K,
    /// V_rho(x)
    #[value(name = "V")]
    V,
    /// Levy density g at |xi| = x
    #[value(name = "g")]
    G,
    /// single-cell marginal density at |xi| = x
    #[value(name = "psi")]
    Psi,
}

#[derive(Subcommand)]
enum SpecfunCmd {
    Eval {
        #[arg(long = "fn", value_enum)]
        func: SpecFn,
        #[arg(long, default_value_t = 0.5)]
        rho: f64,
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct CheckArgs {
    suite: String,
    /// Monte Carlo samples per check.
    #[arg(long)]
    samples: Option<usize>,
    /// Tolerance override, `check_id=value`; repeatable.
    #[arg(long = "tol")]
    tolerances: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum SampleCmd {
    Marginal {
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
    Process {
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Total mass of X; overrides the partition.
        #[arg(long)]
        mass: Option<f64>,
        /// Jump-size cutoff.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Mu,
    Nu,
    V,
}

#[derive(Subcommand)]
enum MeasureCmd {
    Density {
        #[arg(long, value_enum)]
        which: Which,
        /// Cell points separated by ';', coordinates by ','.
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum KernelCmd {
    Tabulate {
        #[arg(long)]
        lambda: f64,
        /// `lo:hi:count` along the first axis.
        #[arg(long, default_value = "0.25:2:8", allow_hyphen_values = true)]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Apply T_g to e^{-|xi - e1|^2} and report node values.
    Apply {
        #[arg(long)]
        lambda: f64,
        /// Word such as `z:1.0,0.5|s|d:2.0`, applied as a product left to right.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// `radius:nodes` of the line grid (n = 2) or `radius:radial:angular` (n = 3).
        #[arg(long, default_value = "20:32")]
        grid: String,
        #[command(flatten)]
        common: Common,
    },
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        samples: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    Check {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
}

/// Failures mapped to exit codes: usage 2, everything else 1.
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            e => Failure::Run(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn resolve(common: &Common) -> Result<RunConfig, Failure> {
    let mut cfg = match &common.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(n) = common.n {
        cfg.n = n;
    }
    if let Some(p) = &common.partition {
        cfg.partition = p.parse::<Partition>().map_err(|e| usage(e.to_string()))?;
    }
    if let Some(o) = &common.out {
        cfg.output_path = Some(o.display().to_string());
    }
    if let Some(f) = common.format {
        cfg.format = match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

/// Writes through a sibling temp file so a failed run leaves nothing behind.
fn write_output(path: Option<&str>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|e| Failure::Run(e.to_string()))
        }
        Some(p) => {
            let p = Path::new(p);
            let tmp = p.with_extension("partial");
            std::fs::write(&tmp, bytes)
                .and_then(|_| std::fs::rename(&tmp, p))
                .map_err(|e| {
                    let _ = std::fs::remove_file(&tmp);
                    Failure::Run(format!("{}: {e}", p.display()))
                })
        }
    }
}

fn print_json<T: Serialize>(cfg: &RunConfig, value: &T) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Run(e.to_string()))? + "\n";
    write_output(cfg.output_path.as_deref(), s.as_bytes())
}

fn finish(cfg: &RunConfig, report: &SuiteReport) -> Result<bool, Failure> {
    let text = report.render(cfg.format)?;
    write_output(cfg.output_path.as_deref(), text.as_bytes())?;
    if cfg.output_path.is_some() {
        for c in report.failures() {
            eprintln!("FAIL {} residual {:e} > {:e}", c.check_id, c.residual, c.tolerance);
        }
    }
    Ok(report.pass)
}

fn radial_point(dims: Dimensions, x: f64) -> Vec<f64> {
    let mut v = vec![0.0; dims.d()];
    v[0] = x;
    v
}

fn parse_floats(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| usage(format!("bad number {t:?}: {e}")))).collect()
}

fn parse_word(dims: Dimensions, word: &str) -> Result<GroupElement, Failure> {
    let mut g = GroupElement::identity(dims);
    for letter in word.split('|') {
        let letter = letter.trim();
        let (name, args) = letter.split_once(':').unwrap_or((letter, ""));
        let el = match name {
            "s" => GroupElement::s(dims),
            "z" => {
                let v = parse_floats(args)?;
                if v.len() != dims.d() {
                    return Err(usage(format!("z needs {} coordinates", dims.d())));
                }
                GroupElement::z(&v)
            }
            "d" => {
                let v = parse_floats(args)?;
                GroupElement::d(v[0], &DMatrix::identity(dims.d(), dims.d()))?
            }
            _ => return Err(usage(format!("unknown letter {letter:?}; use z:..., d:eps or s"))),
        };
        g = g.mul(&el);
    }
    Ok(g)
}

#[derive(Serialize)]
struct Density {
    value: f64,
    log_value: f64,
}

#[derive(Serialize)]
struct Applied {
    n: usize,
    lambda: f64,
    word: String,
    nodes: Vec<Vec<f64>>,
    re: Vec<f64>,
    im: Vec<f64>,
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Specfun { cmd: SpecfunCmd::Eval { func, rho, x, lambda, common } } => {
            let cfg = resolve(&common)?;
            let d = cfg.dims()?;
            let value = match func {
                SpecFn::I => bessel_i(rho, x)?,
                SpecFn::K => bessel_k(rho, x)?,
                SpecFn::V => v_rho(rho, x)?,
                SpecFn::G => levy_density(d, &radial_point(d, x))?,
                SpecFn::Psi => marginal_radial_density(d, lambda, &radial_point(d, x))?,
            };
            write_output(cfg.output_path.as_deref(), format!("{value:.17e}\n").as_bytes())?;
            Ok(true)
        }
        Command::Check(args) => {
            let suite: Suite = args.suite.parse().map_err(|e: Error| usage(e.to_string()))?;
            let mut cfg = resolve(&args.common)?;
            if let Some(s) = args.samples {
                cfg.samples = s;
            }
            for t in &args.tolerances {
                let (k, v) = t.split_once('=').ok_or_else(|| usage(format!("--tol expects id=value, got {t:?}")))?;
                let v: f64 = v.parse().map_err(|e| usage(format!("--tol {t:?}: {e}")))?;
                cfg.tolerances.insert(k.to_string(), v);
            }
            let report = run_suite(&cfg, suite)?;
            finish(&cfg, &report)
        }
        Command::Sample { kind } => {
            let (count, kind, cfg) = match kind {
                SampleCmd::Marginal { count, common } => (count, SampleKind::Marginal, resolve(&common)?),
                SampleCmd::Process { count, mass, eps, common } => {
                    let mut cfg = resolve(&common)?;
                    if let Some(m) = mass {
                        cfg.partition = Partition::new(vec![m]).map_err(|e| usage(e.to_string()))?;
                    }
                    if !(eps > 0.0) {
                        return Err(usage("--eps must be positive"));
                    }
                    (count, SampleKind::Process { cutoff_eps: eps }, cfg)
                }
            };
            let mut buf = Vec::new();
            emit_samples(&cfg, kind, count, &mut buf)?;
            write_output(cfg.output_path.as_deref(), &buf)?;
            Ok(true)
        }
        Command::Measure { cmd: MeasureCmd::Density { which, xi, common } } => {
            let cfg = resolve(&common)?;
            let d = cfg.dims()?;
            let xi = MarginalVector(xi.split(';').map(parse_floats).collect::<Result<_, _>>()?);
            xi.check(d, &cfg.partition)?;
            let log_value = match which {
                Which::Mu => ln_mu_alpha_density(d, &cfg.partition, &xi)?,
                Which::Nu => ln_nu_alpha_density(d, &cfg.partition, &xi)?,
                Which::V => ln_rn_derivative(d, &cfg.partition, &xi)?,
            };
            print_json(&cfg, &Density { value: log_value.exp(), log_value })?;
            Ok(true)
        }
        Command::Kernel { cmd: KernelCmd::Tabulate { lambda, grid, common } } => {
            let cfg = resolve(&common)?;
            let d = cfg.dims()?;
            let parts: Vec<&str> = grid.split(':').collect();
            let [lo, hi, count] = parts[..] else {
                return Err(usage("--grid expects lo:hi:count"));
            };
            let parse = |t: &str| t.parse::<f64>().map_err(|e| usage(format!("--grid {t:?}: {e}")));
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            let count: usize = count.parse().map_err(|e| usage(format!("--grid count: {e}")))?;
            if count < 2 {
                return Err(usage("--grid needs at least two points"));
            }
            let pts: Vec<f64> = (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect();
            let mut out = String::from("xi,xi_prime,value,err_est\n");
            for &x in &pts {
                for &y in &pts {
                    let (v, e) = match kernel_a(d, lambda, &radial_point(d, x), &radial_point(d, y)) {
                        Ok(q) => (q.value, q.abs_error_estimate),
                        Err(Error::Domain(m)) if m.contains("lambda") => return Err(usage(m)),
                        Err(_) => (f64::NAN, f64::NAN),
                    };
                    out += &format!("{x},{y},{v:e},{e:e}\n");
                }
            }
            write_output(cfg.output_path.as_deref(), out.as_bytes())?;
            Ok(true)
        }
        Command::Rep { cmd: RepCmd::Apply { lambda, g, grid, common } } => {
            let cfg = resolve(&common)?;
            let d = cfg.dims()?;
            let el = parse_word(d, &g)?;
            let p = Partition::new(vec![lambda]).map_err(|e| usage(e.to_string()))?;
            let nums = grid.split(':').map(|t| t.parse::<f64>()).collect::<Result<Vec<_>, _>>();
            let cell = match (d.d(), nums.as_deref()) {
                (1, Ok([r, k])) => CellGrid::line(*k as usize, *r, 2.0),
                (2, Ok([r, kr, ka])) => CellGrid::polar(*kr as usize, *ka as usize, *r, 2.0),
                _ => return Err(usage("--grid is radius:nodes for n = 2 and radius:radial:angular for n = 3")),
            };
            let grid = Arc::new(ProductGrid::uniform(&p, cell));
            let e1 = radial_point(d, 1.0);
            let f = CurrentFunction::single(move |x| (-x.iter().zip(&e1).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()).exp());
            let inv = if g.contains('s') { Some(Involution::new(d, &p, grid.clone())?) } else { None };
            let tf = t_comm_apply(d, lambda, &el, &f, inv.as_ref())?;
            let values = GridFunction::tabulate(&p, grid.clone(), &tf).values;
            let nodes = (0..grid.len()).map(|k| grid.point(k)[0].clone()).collect();
            let (re, im) = values.iter().map(|c: &Complex64| (c.re, c.im)).unzip();
            print_json(&cfg, &Applied { n: d.n(), lambda, word: g, nodes, re, im })?;
            Ok(true)
        }
        Command::Rep { cmd: RepCmd::Check { suite, samples, common } } => {
            let checks = rep_checks(&suite)?;
            let mut cfg = resolve(&common)?;
            if let Some(s) = samples {
                cfg.samples = s;
            }
            let report = run_checks(&format!("rep-{suite}"), &cfg, &checks)?;
            finish(&cfg, &report)
        }
        Command::Group { cmd: GroupCmd::Check { trials, common } } => {
            let cfg = resolve(&common)?;
            if trials == 0 {
                return Err(usage("--trials must be positive"));
            }
            let ns = match common.n {
                Some(n) => vec![n],
                None => vec![2, 3, 4],
            };
            let report = run_checks("group", &cfg, &group_checks_for(&ns, trials))?;
            finish(&cfg, &report)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
