//! Command-line front end. [`run`] is the whole program minus process
//! setup, so it can be driven in-process.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dombrowski::{self, DEFAULT_FD_STEP};
use crate::error::{Error, Result};
use crate::expfam::FiniteExpFam;
use crate::geometry::{self, DEFAULT_MAX_ITER, DEFAULT_NEWTON_TOL};
use crate::io;
use crate::linalg;
use crate::polytope::{self, DEFAULT_METRIC_SAMPLES, DEFAULT_METRIC_TOL, MAX_VERTICES};
use crate::scalar::{format_rational, parse_rational};
use crate::torus::{self, DEFAULT_TRIALS};
use crate::weyl::{self, WeylGroupReport, DEFAULT_LIMIT_M};

pub const TOOL: &str = "toricweyl";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Radius of the θ-grids used by the checks.
const GRID_RADIUS: f64 = 1.0;
/// Largest grid evaluated point by point; bigger requests are sampled.
const MAX_GRID_POINTS: usize = 729;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "toricweyl",
    version,
    about = "Fisher geometry and Weyl groups of finite exponential families"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Shape, backend and vertices of a family
    Describe,
    /// Fisher metric by both routes
    Fisher,
    /// α-connection coefficients Γ_{ij,k}
    Christoffel,
    /// Solve for the natural parameter of an expectation point
    Legendre,
    /// Kähler data on the tangent bundle and its checks
    Kahler,
    /// Enumerate the Weyl group from affine witnesses
    Weyl,
    /// Momentum polytope and its symmetry groups
    Polytope,
    /// Compare the witness and polytope realizations of the Weyl group
    CrossValidate,
    /// Lattice action and the normalizer model T^n ⋊ W
    Torus,
    /// Run every check
    Verify,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Options {
    /// Family file, or a builtin such as `categorical:3` or `binomial:4`
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    #[serde(skip)]
    pub json: bool,
    /// Natural parameter, comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    /// Expectation parameter, comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub eta: Option<Vec<f64>>,
    /// Fiber vector for `kahler`, comma separated
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub fiber: Option<Vec<f64>>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Grid points per axis
    #[arg(long, global = true, default_value_t = 3)]
    pub grid: usize,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// `rational` or `float`
    #[arg(long, global = true)]
    pub backend: Option<String>,
    /// Lattice basis, rows separated by `;`, e.g. `1,0;0,1`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub basis: Option<String>,
    /// Random triples for the normalizer model
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Interior samples for the metric filter
    #[arg(long, global = true, default_value_t = DEFAULT_METRIC_SAMPLES)]
    pub samples: usize,
    /// Largest outcome count for exhaustive enumeration
    #[arg(long, global = true, default_value_t = DEFAULT_LIMIT_M)]
    pub limit: usize,
}

/// Exit status and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Section {
    value: Value,
    text: String,
    pass: bool,
}

/// Parses arguments (including the program name) and runs.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            }
        }
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    match execute(config) {
        Ok(section) => {
            let stdout = if config.options.json {
                let report = json!({
                    "tool": TOOL,
                    "version": VERSION,
                    "command": config.command,
                    "config": config.options,
                    "result": section.value,
                    "pass": section.pass,
                });
                serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
            } else {
                section.text
            };
            Outcome {
                code: if section.pass { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Failed verifications exit 1, everything else 2.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Mismatch { .. }
        | Error::NonIntegral { .. }
        | Error::NoConvergence { .. }
        | Error::PositivityLost { .. } => 1,
        _ => 2,
    }
}

pub fn load_family(config: &RunConfig) -> Result<FiniteExpFam> {
    let source = config
        .options
        .family
        .as_deref()
        .ok_or_else(|| Error::Parse("--family is required".into()))?;
    let backend = config
        .options
        .backend
        .as_deref()
        .map(io::parse_backend)
        .transpose()?;
    io::load_family(source, backend)
}

fn execute(config: &RunConfig) -> Result<Section> {
    let fam = load_family(config)?;
    let opts = &config.options;
    match config.command {
        Command::Describe => describe(&fam),
        Command::Fisher => fisher(&fam, opts),
        Command::Christoffel => christoffel(&fam, opts),
        Command::Legendre => legendre(&fam, opts),
        Command::Kahler => kahler(&fam, opts),
        Command::Weyl => weyl_cmd(&fam, opts),
        Command::Polytope => polytope_cmd(&fam, opts),
        Command::CrossValidate => cross_validate(&fam, opts),
        Command::Torus => torus_cmd(&fam, opts),
        Command::Verify => verify(&fam, opts),
    }
}

fn vector(v: &DVector<f64>) -> Value {
    json!(v.iter().copied().collect::<Vec<_>>())
}

fn matrix(m: &DMatrix<f64>) -> Value {
    json!(weyl::rows(m, |v| *v))
}

fn fmt_vec(v: &DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_mat(m: &DMatrix<f64>) -> String {
    let rows: Vec<String> = m.row_iter().map(|r| fmt_vec(&r.transpose())).collect();
    format!("[{}]", rows.join(", "))
}

fn point(fam: &FiniteExpFam, given: &Option<Vec<f64>>, what: &str) -> Result<DVector<f64>> {
    match given {
        Some(v) if v.len() != fam.n() => Err(Error::Parse(format!(
            "--{what} has {} entries, the family has dimension {}",
            v.len(),
            fam.n()
        ))),
        Some(v) => Ok(DVector::from_vec(v.clone())),
        None => Ok(DVector::zeros(fam.n())),
    }
}

fn grid(fam: &FiniteExpFam, opts: &Options) -> Vec<DVector<f64>> {
    let n = fam.n();
    let full = opts.grid.checked_pow(n as u32).unwrap_or(usize::MAX);
    if full <= MAX_GRID_POINTS {
        geometry::theta_grid(n, opts.grid, GRID_RADIUS)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        geometry::random_points(n, MAX_GRID_POINTS, GRID_RADIUS, &mut rng)
    }
}

fn describe(fam: &FiniteExpFam) -> Result<Section> {
    let poly = polytope::momentum_polytope(fam);
    let vertices: Vec<usize> = poly.vertices.iter().map(|i| i + 1).collect();
    let basis: Vec<usize> = fam.basis_rows().iter().map(|i| i + 1).collect();
    let mut text = String::new();
    writeln!(text, "outcomes m = {}, dimension n = {}", fam.m(), fam.n()).ok();
    writeln!(text, "backend: {:?}", fam.backend()).ok();
    writeln!(text, "injective F: {}", fam.is_injective()).ok();
    writeln!(text, "labels: {}", fam.labels().join(", ")).ok();
    writeln!(text, "polytope vertices: {vertices:?}").ok();
    Ok(Section {
        value: json!({
            "m": fam.m(),
            "n": fam.n(),
            "backend": fam.backend(),
            "injective": fam.is_injective(),
            "basis_rows": basis,
            "vertices": vertices,
            "family": io::family_to_json(fam),
        }),
        text,
        pass: true,
    })
}

fn fisher(fam: &FiniteExpFam, opts: &Options) -> Result<Section> {
    let theta = point(fam, &opts.theta, "theta")?;
    let tol = opts.tol.unwrap_or(1e-9);
    let hessian = fam.fisher(&theta)?.entries;
    let definition = fam.fisher_def(&theta)?.entries;
    let residual = (&hessian - &definition).amax();
    let pass = residual <= tol;
    let mut text = String::new();
    writeln!(text, "theta = {}", fmt_vec(&theta)).ok();
    writeln!(text, "h = {}", fmt_mat(&hessian)).ok();
    writeln!(
        text,
        "two-route residual = {residual:.3e} ({})",
        verdict(pass)
    )
    .ok();
    Ok(Section {
        value: json!({
            "theta": vector(&theta),
            "psi": fam.log_partition(&theta)?,
            "eta": vector(&fam.mean_params(&theta)?),
            "p": vector(&fam.prob_vector(&theta)?),
            "metric": matrix(&hessian),
            "metric_definition": matrix(&definition),
            "residual": residual,
            "tol": tol,
        }),
        text,
        pass,
    })
}

fn christoffel(fam: &FiniteExpFam, opts: &Options) -> Result<Section> {
    let theta = point(fam, &opts.theta, "theta")?;
    let alpha = opts.alpha.unwrap_or(1.0);
    let gamma = fam.christoffel_alpha(&theta, alpha)?;
    let n = fam.n();
    let nested: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| gamma.get(i, j, k)).collect())
                .collect()
        })
        .collect();
    let mut text = String::new();
    writeln!(text, "theta = {}, alpha = {alpha}", fmt_vec(&theta)).ok();
    for (i, plane) in nested.iter().enumerate() {
        for (j, row) in plane.iter().enumerate() {
            let parts: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
            writeln!(
                text,
                "Gamma[{},{},:] = [{}]",
                i + 1,
                j + 1,
                parts.join(", ")
            )
            .ok();
        }
    }
    Ok(Section {
        value: json!({"theta": vector(&theta), "alpha": alpha, "gamma": nested, "max_abs": gamma.max_abs()}),
        text,
        pass: true,
    })
}

fn legendre(fam: &FiniteExpFam, opts: &Options) -> Result<Section> {
    let tol = opts.tol.unwrap_or(DEFAULT_NEWTON_TOL);
    let (eta, source_theta) = match (&opts.eta, &opts.theta) {
        (Some(_), _) => (point(fam, &opts.eta, "eta")?, None),
        (None, Some(_)) => {
            let theta = point(fam, &opts.theta, "theta")?;
            (fam.mean_params(&theta)?, Some(theta))
        }
        (None, None) => return Err(Error::Parse("legendre needs --eta or --theta".into())),
    };
    let dual = geometry::legendre_dual_point(fam, &eta, tol, DEFAULT_MAX_ITER)?;
    let roundtrip = source_theta.as_ref().map(|t| (t - &dual.theta).amax());
    let pass = roundtrip.is_none_or(|e| e <= 1e-8);
    let mut text = String::new();
    writeln!(text, "eta = {}", fmt_vec(&eta)).ok();
    writeln!(
        text,
        "theta = {} ({} Newton steps, residual {:.3e})",
        fmt_vec(&dual.theta),
        dual.iterations,
        dual.residual
    )
    .ok();
    writeln!(text, "phi = {:.12}", dual.phi).ok();
    writeln!(text, "k = {}", fmt_mat(&dual.k)).ok();
    if let Some(e) = roundtrip {
        writeln!(text, "roundtrip error = {e:.3e} ({})", verdict(pass)).ok();
    }
    Ok(Section {
        value: json!({
            "eta": vector(&eta),
            "theta": vector(&dual.theta),
            "phi": dual.phi,
            "k": matrix(&dual.k),
            "iterations": dual.iterations,
            "residual": dual.residual,
            "roundtrip_error": roundtrip,
        }),
        text,
        pass,
    })
}

fn kahler(fam: &FiniteExpFam, opts: &Options) -> Result<Section> {
    let theta = point(fam, &opts.theta, "theta")?;
    let fiber = point(fam, &opts.fiber, "fiber")?;
    let data = dombrowski::kahler_at(fam, &theta, &fiber)?;
    let report = dombrowski::check_kahler(fam, &grid(fam, opts), DEFAULT_FD_STEP)?;
    let mut text = String::new();
    writeln!(text, "g = {}", fmt_mat(&data.g)).ok();
    writeln!(text, "omega = {}", fmt_mat(&data.omega)).ok();
    writeln!(text, "J^2 = -I exactly: {}", report.j_squared_exact).ok();
    writeln!(
        text,
        "compatibility residual = {:.3e}",
        report.compatibility_residual
    )
    .ok();
    writeln!(
        text,
        "d omega residual = {:.3e} over {} points ({})",
        report.d_omega_residual,
        report.points,
        verdict(report.pass)
    )
    .ok();
    Ok(Section {
        value: json!({
            "point": {"theta": vector(&theta), "fiber": vector(&fiber), "g": matrix(&data.g), "omega": matrix(&data.omega), "J": matrix(&data.j)},
            "check": report,
        }),
        pass: report.pass,
        text,
    })
}

fn weyl_section(fam: &FiniteExpFam, report: &WeylGroupReport, opts: &Options) -> Result<Section> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let samples = geometry::random_points(fam.n(), 5, 2.0, &mut rng);
    let mut probability: f64 = 0.0;
    let mut isometry: f64 = 0.0;
    for el in &report.elements {
        probability = probability.max(weyl::probability_residual(fam, el, &samples)?);
        isometry = isometry.max(weyl::isometry_residual(fam, el, &samples)?);
    }
    let checks_ok = report
        .checks
        .is_none_or(|c| c.closed && c.inverses && c.functorial);
    let pass = checks_ok && probability <= 1e-9 && isometry <= 1e-8;
    let d = weyl::describe_group(report);
    let mut value = report.to_json();
    value["probability_residual"] = json!(probability);
    value["isometry_residual"] = json!(isometry);
    let mut text = String::new();
    writeln!(
        text,
        "order {} ({}), {}{}",
        d.order,
        d.name,
        if d.abelian { "abelian" } else { "nonabelian" },
        if report.injective {
            ""
        } else {
            ", F not injective: Perm(E) only"
        }
    )
    .ok();
    writeln!(text, "element orders: {:?}", d.element_orders).ok();
    let gens: Vec<Vec<usize>> = d
        .generators
        .iter()
        .map(|&g| report.elements[g].sigma().iter().map(|i| i + 1).collect())
        .collect();
    writeln!(text, "generators: {gens:?}").ok();
    if report.order <= 24 {
        for el in &report.elements {
            let sigma: Vec<usize> = el.sigma().iter().map(|i| i + 1).collect();
            writeln!(
                text,
                "  sigma = {sigma:?}  A = {}  B = {}",
                fmt_mat(el.a()),
                fmt_vec(el.b())
            )
            .ok();
        }
    }
    writeln!(
        text,
        "probability residual {probability:.3e}, isometry residual {isometry:.3e} ({})",
        verdict(pass)
    )
    .ok();
    Ok(Section { value, text, pass })
}

fn weyl_cmd(fam: &FiniteExpFam, opts: &Options) -> Result<Section> {
    let report = weyl::enumerate_weyl(fam, opts.limit)?;
    weyl_section(fam, &report, opts)
}

fn polytope_cmd(fam: &FiniteExpFam, opts: &Options) -> Result<Section> {
    let tol = opts.tol.unwrap_or(DEFAULT_METRIC_TOL);
    let poly = polytope::momentum_polytope(fam);
    let affine = polytope::affine_symmetries(&poly)?;
    let samples = polytope::interior_samples(fam, opts.samples, opts.seed)?;
    let metric = polytope::metric_symmetries(fam, &samples, tol)?;
    let mut text = String::new();
    let vertices: Vec<usize> = poly.vertices.iter().map(|i| i + 1).collect();
    writeln!(text, "vertices: {vertices:?}").ok();
    for (i, w) in &poly.combinations {
        writeln!(text, "  point {} = {:?} · vertices", i + 1, w).ok();
    }
    writeln!(text, "affine symmetries of the polytope: {}", affine.len()).ok();
    writeln!(text, "dual-metric isometries among them: {}", metric.len()).ok();
    Ok(Section {
        value: json!({
            "polytope": poly.to_json(),
            "affine_order": affine.len(),
            "affine": affine.iter().map(|s| s.to_json(&poly)).collect::<Vec<_>>(),
            "metric_order": metric.len(),
            "metric": metric.iter().map(|s| s.to_json(&poly)).collect::<Vec<_>>(),
            "tol": tol,
        }),
        text,
        pass: true,
    })
}

fn cross_validate(fam: &FiniteExpFam, opts: &Options) -> Result<Section> {
    let tol = opts.tol.unwrap_or(DEFAULT_METRIC_TOL);
    let cv = polytope::cross_validate(fam, opts.samples, tol, opts.seed)?;
    let mut text = String::new();
    writeln!(
        text,
        "witness order {}, polytope affine order {}, metric order {}",
        cv.witness_order, cv.polytope_order, cv.metric_order
    )
    .ok();
    writeln!(
        text,
        "vertex actions agree; map residual {:.3e} ({})",
        cv.map_residual,
        verdict(cv.pass)
    )
    .ok();
    Ok(Section {
        value: serde_json::to_value(&cv).expect("serializable"),
        pass: cv.pass,
        text,
    })
}

fn parse_basis(text: &str, n: usize) -> Result<DMatrix<BigRational>> {
    let rows: Vec<Vec<BigRational>> = text
        .split(';')
        .map(|r| r.split(',').map(parse_rational).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("--basis must be {n}×{n}")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j].clone()))
}

fn torus_section(
    report: &WeylGroupReport,
    basis: &DMatrix<BigRational>,
    opts: &Options,
) -> Result<Section> {
    let mut rho = Vec::new();
    let mut integral = true;
    let mut text = String::new();
    for i in 0..report.order {
        let sigma: Vec<usize> = report.elements[i].sigma().iter().map(|k| k + 1).collect();
        match torus::rho_matrix(report, i, basis) {
            Ok(m) => {
                let cells = weyl::rows(&m, format_rational);
                if report.order <= 24 {
                    writeln!(text, "  sigma = {sigma:?}  rho = {cells:?}").ok();
                }
                rho.push(json!({"sigma": sigma, "rho": cells}));
            }
            Err(e @ Error::NonIntegral { .. }) => {
                integral = false;
                writeln!(text, "  sigma = {sigma:?}  {e}").ok();
                rho.push(json!({"sigma": sigma, "error": e.to_string()}));
            }
            Err(e) => return Err(e),
        }
    }
    let normalizer = if integral {
        Some(torus::verify_normalizer_model(
            report,
            basis,
            opts.trials,
            opts.seed,
        )?)
    } else {
        None
    };
    let pass = normalizer.as_ref().is_some_and(|r| r.pass);
    match &normalizer {
        Some(r) => writeln!(
            text,
            "normalizer model: associative {}, normal {}, quotient = Weyl table {}, rho homomorphic {}, index {} ({})",
            r.associative,
            r.normal,
            r.quotient_matches,
            r.homomorphism,
            r.index,
            verdict(r.pass)
        ),
        None => writeln!(text, "lattice action is not integral; normalizer model not built (FAIL)"),
    }
    .ok();
    Ok(Section {
        value: json!({"order": report.order, "rho": rho, "normalizer": normalizer}),
        text,
        pass,
    })
}

fn torus_cmd(fam: &FiniteExpFam, opts: &Options) -> Result<Section> {
    let n = fam.n();
    let basis = match &opts.basis {
        Some(text) => parse_basis(text, n)?,
        None => linalg::identity(n),
    };
    let report = weyl::enumerate_weyl(fam, opts.limit)?;
    torus_section(&report, &basis, opts)
}

/// Finite-difference residuals of `∇ψ = η` and `∇η = h`.
fn calculus_residuals(fam: &FiniteExpFam, theta: &DVector<f64>) -> Result<(f64, f64)> {
    let n = fam.n();
    let step = 1e-5;
    let eta = fam.mean_params(theta)?;
    let h = fam.fisher(theta)?.entries;
    let mut grad: f64 = 0.0;
    let mut hess: f64 = 0.0;
    for i in 0..n {
        let mut fwd = theta.clone();
        let mut bwd = theta.clone();
        fwd[i] += step;
        bwd[i] -= step;
        let d = (fam.log_partition(&fwd)? - fam.log_partition(&bwd)?) / (2.0 * step);
        grad = grad.max((d - eta[i]).abs());
        let col = (fam.mean_params(&fwd)? - fam.mean_params(&bwd)?) / (2.0 * step);
        hess = hess.max((col - h.column(i)).amax());
    }
    Ok((grad, hess))
}

fn verify(fam: &FiniteExpFam, opts: &Options) -> Result<Section> {
    let tol = opts.tol.unwrap_or(1e-8);
    let points = grid(fam, opts);
    let mut text = String::new();
    let mut sections = serde_json::Map::new();
    let mut all = true;
    let mut record = |name: &str, pass: bool, value: Value, text: &mut String| {
        writeln!(text, "{name:<16} {}", verdict(pass)).ok();
        all &= pass;
        sections.insert(name.to_string(), json!({"pass": pass, "detail": value}));
    };

    // expfam invariants
    let mut routes: f64 = 0.0;
    let mut normalization: f64 = 0.0;
    let mut grad: f64 = 0.0;
    let mut hess: f64 = 0.0;
    for theta in &points {
        routes = routes.max((fam.fisher(theta)?.entries - fam.fisher_def(theta)?.entries).amax());
        normalization = normalization.max((fam.prob_vector(theta)?.sum() - 1.0).abs());
        let (g, h) = calculus_residuals(fam, theta)?;
        grad = grad.max(g);
        hess = hess.max(h);
    }
    record(
        "expfam",
        routes <= tol && normalization <= 1e-12 && grad <= 1e-6 && hess <= 1e-6,
        json!({"fisher_routes": routes, "normalization": normalization, "gradient_fd": grad, "hessian_fd": hess}),
        &mut text,
    );

    // geometry
    let duality = geometry::check_duality_identity(fam, &points, &[-1.0, 0.0, 1.0])?;
    let mut flat: f64 = 0.0;
    let mut roundtrip: f64 = 0.0;
    let mut iterations = 0;
    for theta in &points {
        flat = flat.max(fam.christoffel_alpha(theta, 1.0)?.max_abs());
        let dual = geometry::legendre_dual_point(
            fam,
            &fam.mean_params(theta)?,
            DEFAULT_NEWTON_TOL,
            DEFAULT_MAX_ITER,
        )?;
        roundtrip = roundtrip.max((&dual.theta - theta).amax());
        iterations = iterations.max(dual.iterations);
    }
    record(
        "geometry",
        duality.pass && flat <= 1e-10 && roundtrip <= tol && iterations <= 30,
        json!({"duality": duality, "exponential_flatness": flat, "legendre_roundtrip": roundtrip, "newton_iterations": iterations}),
        &mut text,
    );

    let kahler = dombrowski::check_kahler(fam, &points, DEFAULT_FD_STEP)?;
    record(
        "dombrowski",
        kahler.pass,
        serde_json::to_value(&kahler).expect("serializable"),
        &mut text,
    );

    if fam.m() > opts.limit {
        record(
            "weyl",
            true,
            json!({"skipped": format!("{} outcomes exceed --limit", fam.m())}),
            &mut text,
        );
    } else {
        let report = weyl::enumerate_weyl(fam, opts.limit)?;
        let w = weyl_section(fam, &report, opts)?;
        record(
            "weyl",
            w.pass,
            json!({"order": report.order, "name": report.descriptors.name, "probability_residual": w.value["probability_residual"], "isometry_residual": w.value["isometry_residual"], "checks": report.checks}),
            &mut text,
        );

        let vertices = polytope::momentum_polytope(fam).vertices.len();
        if !fam.is_injective() || vertices > MAX_VERTICES {
            record(
                "cross-validate",
                true,
                json!({"skipped": "F not injective or too many vertices"}),
                &mut text,
            );
        } else {
            match polytope::cross_validate(fam, opts.samples, DEFAULT_METRIC_TOL, opts.seed) {
                Ok(cv) => record(
                    "cross-validate",
                    cv.pass,
                    serde_json::to_value(&cv).expect("serializable"),
                    &mut text,
                ),
                Err(e @ Error::Mismatch { .. }) => record(
                    "cross-validate",
                    false,
                    json!({"error": e.to_string()}),
                    &mut text,
                ),
                Err(e) => return Err(e),
            }
        }

        let basis = linalg::identity(fam.n());
        let t = torus_section(&report, &basis, opts)?;
        record("torus", t.pass, t.value["normalizer"].clone(), &mut text);
    }
    writeln!(text, "overall          {}", verdict(all)).ok();
    Ok(Section {
        value: Value::Object(sections),
        text,
        pass: all,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
