//! Command-line front end: closed-form map generation, CSV/JSON data
//! interchange and the full verification pipeline.
//!
//! Exit codes: 0 success, 1 verification failure (a residual above its
//! tolerance), 2 usage or configuration error, 3 numeric or domain error.
//!
//! Output is bit-stable: floats are printed with 17 significant digits in
//! a fixed column order, so identical configurations produce byte-identical
//! CSV and JSON files.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::backlund;
use crate::beltrami::{self, BoundaryData, SolverConfig};
use crate::catalog::{self, LitamForm};
use crate::elliptic;
use crate::grid::FieldGrid;
use crate::mapgen::{self, MapParams};
use crate::soliton::SolitonParams;
use crate::verify::{self, MetricSpec, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// CSV column header; one node per line, row-major with ξ fastest,
/// empty cells on masked nodes.
pub const CSV_HEADER: &str = "xi,eta,R,S,omega,eF,res_harmonic,res_beltrami";

enum Failure {
    Usage(String),
    Numeric(String),
    /// checks ran, at least one residual exceeded its tolerance
    Verify,
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numeric(_) => EXIT_NUMERIC,
            Failure::Verify => EXIT_VERIFY,
        }
    }
}

fn numeric(e: impl std::fmt::Display) -> Failure {
    Failure::Numeric(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "harmap",
    version,
    about = "Harmonic diffeomorphisms between surfaces from sinh-Gordon solutions",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sample a closed-form one-soliton map on a grid and verify it
    SolitonMap(SolitonMapArgs),
    /// Run the verification suite on a map read from CSV
    Verify(VerifyArgs),
    /// Solve the first-order Beltrami system for R on a grid
    SolveBeltrami(SolveBeltramiArgs),
    /// Generate and verify a catalog example map
    Example(ExampleArgs),
    /// Integrate the Baecklund system from the kink seed and verify the
    /// associated explicit map
    Backlund(BacklundArgs),
    /// Run the built-in elliptic identity suite
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Default, Clone)]
struct CommonArgs {
    /// JSON config file; command-line flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// grid size as NXxNY
    #[arg(long)]
    grid: Option<String>,
    /// ξ range as LO:HI
    #[arg(long)]
    xi_range: Option<String>,
    /// η range as LO:HI
    #[arg(long)]
    eta_range: Option<String>,
    /// CSV output path
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON verification-report output path
    #[arg(long)]
    report: Option<PathBuf>,
    /// finite-difference tolerance of the verification checks
    #[arg(long)]
    tol_fd: Option<f64>,
    /// curvature tolerance of the metric round trip
    #[arg(long)]
    tol_curvature: Option<f64>,
    /// RNG seed for sampled identity checks
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct SolitonMapArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// target curvature sign, one of -1, 0, 1
    #[arg(long)]
    kn: Option<i32>,
    #[arg(long)]
    rho: Option<f64>,
    /// rotation angle τ in radians
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
    #[arg(long)]
    omega0: Option<f64>,
    #[arg(long)]
    domega0: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    s0: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// CSV file with a sampled map (same layout this tool writes)
    #[arg(long)]
    input: Option<PathBuf>,
    /// target metric: flat, half-plane, sphere, strip, wolf-cylinder, sampled
    #[arg(long)]
    metric: Option<String>,
    /// cylinder parameter for --metric wolf-cylinder
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Args, Debug)]
struct SolveBeltramiArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// coefficient field: li-tam (ω = −ln|tanh ξ|) or linear (ω = ξ)
    #[arg(long)]
    omega_form: Option<String>,
}

#[derive(Args, Debug)]
struct ExampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// family name: li-tam, wolf, half-cylinder, stw
    name: String,
    /// Li–Tam scale parameter
    #[arg(long)]
    a: Option<f64>,
    /// Wolf cylinder parameter (t > 1)
    #[arg(long)]
    t: Option<f64>,
    /// half-cylinder family parameter (c > 0)
    #[arg(long)]
    c: Option<f64>,
    /// strip-map α
    #[arg(long)]
    alpha: Option<f64>,
    /// strip-map b (defaults to the quarter-period root)
    #[arg(long)]
    b: Option<f64>,
}

#[derive(Args, Debug)]
struct BacklundArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// sine-Gordon seed; only the built-in kink θ = arcsin tanh 2ξ
    #[arg(long, default_value = "kink")]
    seed_theta: String,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[command(flatten)]
    common: CommonArgs,
}

// ---------------------------------------------------------------------------
// Configuration file.

/// Optional JSON configuration; every key mirrors a flag of the same name
/// and flags win. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    grid: Option<String>,
    xi_range: Option<String>,
    eta_range: Option<String>,
    out: Option<String>,
    report: Option<String>,
    tol_fd: Option<f64>,
    tol_curvature: Option<f64>,
    seed: Option<u64>,
    a: Option<f64>,
    t: Option<f64>,
    c: Option<f64>,
    alpha: Option<f64>,
    b: Option<f64>,
    kn: Option<i32>,
    rho: Option<f64>,
    tau: Option<f64>,
    y0: Option<f64>,
    omega0: Option<f64>,
    domega0: Option<f64>,
    x0: Option<f64>,
    r0: Option<f64>,
    s0: Option<f64>,
    input: Option<String>,
    metric: Option<String>,
    omega_form: Option<String>,
}

impl FileConfig {
    fn load(path: &Option<PathBuf>) -> Result<Self, Failure> {
        let Some(p) = path else { return Ok(Self::default()) };
        let text = fs::read_to_string(p)
            .map_err(|e| usage(format!("cannot read config {}: {e}", p.display())))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| usage(format!("invalid config {}: {e}", p.display())))?;
        for (name, v) in [
            ("tol_fd", cfg.tol_fd),
            ("tol_curvature", cfg.tol_curvature),
            ("a", cfg.a),
            ("t", cfg.t),
            ("c", cfg.c),
            ("alpha", cfg.alpha),
            ("b", cfg.b),
            ("rho", cfg.rho),
            ("tau", cfg.tau),
            ("y0", cfg.y0),
            ("omega0", cfg.omega0),
            ("domega0", cfg.domega0),
            ("x0", cfg.x0),
            ("r0", cfg.r0),
            ("s0", cfg.s0),
        ] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(usage(format!("config field {name} is not finite")));
                }
            }
        }
        Ok(cfg)
    }
}

fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| file.clone())
}

fn parse_grid_size(s: &str) -> Result<(usize, usize), Failure> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| usage(format!("grid must look like 201x201, got {s}")))?;
    let nx: usize = a.parse().map_err(|_| usage(format!("bad grid width {a}")))?;
    let ny: usize = b.parse().map_err(|_| usage(format!("bad grid height {b}")))?;
    if nx < 3 || ny < 3 {
        return Err(usage(format!("grid must be at least 3x3, got {nx}x{ny}")));
    }
    Ok((nx, ny))
}

fn parse_range(s: &str) -> Result<(f64, f64), Failure> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("range must look like 0.5:1.5, got {s}")))?;
    let lo: f64 = a.parse().map_err(|_| usage(format!("bad range bound {a}")))?;
    let hi: f64 = b.parse().map_err(|_| usage(format!("bad range bound {b}")))?;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(usage(format!("range bounds must be finite with hi > lo, got {s}")));
    }
    Ok((lo, hi))
}

struct GridSpec {
    nx: usize,
    ny: usize,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

fn resolve_grid(
    common: &CommonArgs,
    cfg: &FileConfig,
    default: GridSpec,
) -> Result<FieldGrid<f64>, Failure> {
    let (nx, ny) = match pick(&common.grid, &cfg.grid) {
        Some(s) => parse_grid_size(&s)?,
        None => (default.nx, default.ny),
    };
    let x_range = match pick(&common.xi_range, &cfg.xi_range) {
        Some(s) => parse_range(&s)?,
        None => default.x_range,
    };
    let y_range = match pick(&common.eta_range, &cfg.eta_range) {
        Some(s) => parse_range(&s)?,
        None => default.y_range,
    };
    Ok(FieldGrid::from_fn(nx, ny, x_range, y_range, |_, _| 0.0))
}

fn resolve_opts(common: &CommonArgs, cfg: &FileConfig) -> VerifyOptions {
    let mut opts = VerifyOptions { tol_fd: 1e-4, ..VerifyOptions::default() };
    if let Some(v) = pick(&common.tol_fd, &cfg.tol_fd) {
        opts.tol_fd = v;
    }
    if let Some(v) = pick(&common.tol_curvature, &cfg.tol_curvature) {
        opts.tol_curvature = v;
    }
    opts
}

fn out_path(flag: &Option<PathBuf>, file: &Option<String>) -> Option<PathBuf> {
    flag.clone().or_else(|| file.as_ref().map(PathBuf::from))
}

// ---------------------------------------------------------------------------
// CSV interchange.

/// 17 significant digits: enough to round-trip any f64 exactly.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_cell(v: f64, regular: bool) -> String {
    if regular && v.is_finite() {
        fmt_float(v)
    } else {
        String::new()
    }
}

struct CsvFields {
    u: FieldGrid<Complex64>,
    omega: FieldGrid<f64>,
    e_f: FieldGrid<f64>,
    res_harmonic: FieldGrid<f64>,
    res_beltrami: FieldGrid<f64>,
}

fn write_csv(path: &Path, f: &CsvFields) -> Result<(), Failure> {
    let u = &f.u;
    let mut text = String::with_capacity(u.values.len() * 96);
    text.push_str(CSV_HEADER);
    text.push('\n');
    for j in 0..u.ny {
        for i in 0..u.nx {
            let k = u.idx(i, j);
            let row = [
                fmt_float(u.x(i)),
                fmt_float(u.y(j)),
                csv_cell(u.values[k].re, u.mask[k]),
                csv_cell(u.values[k].im, u.mask[k]),
                csv_cell(f.omega.values[k], f.omega.mask[k]),
                csv_cell(f.e_f.values[k], f.e_f.mask[k]),
                csv_cell(f.res_harmonic.values[k], f.res_harmonic.mask[k]),
                csv_cell(f.res_beltrami.values[k], f.res_beltrami.mask[k]),
            ];
            text.push_str(&row.join(","));
            text.push('\n');
        }
    }
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

struct CsvMap {
    u: FieldGrid<Complex64>,
    omega: Option<FieldGrid<f64>>,
    e_f: Option<FieldGrid<f64>>,
}

fn read_csv(path: &Path) -> Result<CsvMap, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| usage("empty CSV"))?;
    if header != CSV_HEADER {
        return Err(usage(format!("unexpected CSV header {header:?}")));
    }
    let mut rows: Vec<[Option<f64>; 8]> = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 8 {
            return Err(usage(format!("row {} has {} cells, want 8", n + 2, cells.len())));
        }
        let mut row = [None; 8];
        for (c, cell) in cells.iter().enumerate() {
            if !cell.is_empty() {
                row[c] = Some(
                    cell.parse::<f64>()
                        .map_err(|_| usage(format!("bad number {cell:?} in row {}", n + 2)))?,
                );
            }
        }
        if row[0].is_none() || row[1].is_none() {
            return Err(usage(format!("row {} is missing coordinates", n + 2)));
        }
        rows.push(row);
    }
    let eta0 = rows[0][1].unwrap();
    let nx = rows.iter().take_while(|r| r[1].unwrap() == eta0).count();
    if nx < 3 || rows.len() % nx != 0 {
        return Err(usage("CSV rows do not form a row-major rectangular grid"));
    }
    let ny = rows.len() / nx;
    if ny < 3 {
        return Err(usage("grid must be at least 3x3"));
    }
    let x_range = (rows[0][0].unwrap(), rows[nx - 1][0].unwrap());
    let y_range = (eta0, rows[rows.len() - 1][1].unwrap());
    if !(x_range.1 > x_range.0 && y_range.1 > y_range.0) {
        return Err(usage("CSV grid ranges are not increasing"));
    }
    let mut u = FieldGrid::from_fn(nx, ny, x_range, y_range, |_, _| Complex64::new(0.0, 0.0));
    let mut omega = u.map(|_| 0.0f64);
    let mut e_f = u.map(|_| 0.0f64);
    let (mut any_omega, mut any_ef) = (false, false);
    for (k, row) in rows.iter().enumerate() {
        match (row[2], row[3]) {
            (Some(r), Some(s)) => u.values[k] = Complex64::new(r, s),
            _ => u.mask[k] = false,
        }
        match row[4] {
            Some(w) => {
                omega.values[k] = w;
                any_omega = true;
            }
            None => omega.mask[k] = false,
        }
        match row[5] {
            Some(v) => {
                e_f.values[k] = v;
                any_ef = true;
            }
            None => e_f.mask[k] = false,
        }
    }
    Ok(CsvMap { u, omega: any_omega.then_some(omega), e_f: any_ef.then_some(e_f) })
}

// ---------------------------------------------------------------------------
// Shared emit path: verify, then write CSV and JSON report.

fn e_f_grid(u: &FieldGrid<Complex64>, metric: &MetricSpec) -> FieldGrid<f64> {
    match metric {
        MetricSpec::Sampled(g) => g.clone(),
        _ => {
            let mut out = u.map(|_| 0.0f64);
            for k in 0..u.values.len() {
                match metric.e_f(u.values[k]) {
                    Some(v) if u.mask[k] => out.values[k] = v,
                    _ => out.mask[k] = false,
                }
            }
            out
        }
    }
}

fn emit(
    u: FieldGrid<Complex64>,
    omega: FieldGrid<f64>,
    metric: &MetricSpec,
    opts: &VerifyOptions,
    out: Option<PathBuf>,
    report_path: Option<PathBuf>,
) -> Result<(), Failure> {
    let report = verify::verify_map(&u, metric, opts).map_err(numeric)?;
    let res_harmonic = verify::harmonic_residual_field(&u, metric).map_err(numeric)?;
    let res_beltrami = beltrami::beltrami_residual_field(&u, &omega).map_err(numeric)?;
    if let Some(path) = out {
        let e_f = e_f_grid(&u, metric);
        write_csv(&path, &CsvFields { u, omega, e_f, res_harmonic, res_beltrami })?;
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &report_path {
        fs::write(path, format!("{json}\n"))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    println!("{json}");
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

// ---------------------------------------------------------------------------
// Subcommands.

fn run_example(args: &ExampleArgs) -> Result<(), Failure> {
    let cfg = FileConfig::load(&args.common.config)?;
    let mut opts = resolve_opts(&args.common, &cfg);
    let out = out_path(&args.common.out, &cfg.out);
    let report = out_path(&args.common.report, &cfg.report);
    match args.name.as_str() {
        "li-tam" => {
            let a = pick(&args.a, &cfg.a).unwrap_or(1.0);
            let grid = resolve_grid(
                &args.common,
                &cfg,
                GridSpec { nx: 201, ny: 201, x_range: (-0.9, -0.5), y_range: (0.0, 0.4) },
            )?;
            let u = catalog::litam_map(a, &grid, LitamForm::Zeta).map_err(numeric)?;
            let omega = grid.map(|_| 0.0).clone();
            let mut omega = omega;
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    *omega.at_mut(i, j) = catalog::litam_omega(grid.x(i));
                }
            }
            opts.expected_curvature = Some(-1.0);
            opts.omega = Some(omega.clone());
            emit(u, omega, &MetricSpec::HalfPlane, &opts, out, report)
        }
        "wolf" => {
            let t = pick(&args.t, &cfg.t).unwrap_or(2.0);
            let grid = resolve_grid(
                &args.common,
                &cfg,
                GridSpec { nx: 201, ny: 201, x_range: (0.0, 1.0), y_range: (0.0, 1.0) },
            )?;
            let sol = catalog::wolf_solve(t, 1e-4).map_err(numeric)?;
            let u = sol.map_grid(&grid);
            opts.expected_curvature = Some(-1.0);
            let lambda = (4.0 * t * t / (sol.c0 - 0.5)).ln();
            opts.lambda = Complex64::new(lambda, 0.0);
            let dec = verify::beltrami_decompose(&u).map_err(numeric)?;
            let omega = dec.omega;
            emit(u, omega, &MetricSpec::WolfCylinder { t }, &opts, out, report)
        }
        "half-cylinder" => {
            let c = pick(&args.c, &cfg.c).unwrap_or(0.1);
            let grid = resolve_grid(
                &args.common,
                &cfg,
                GridSpec { nx: 201, ny: 201, x_range: (0.0, 1.0), y_range: (1.0, 3.0) },
            )?;
            let u = catalog::half_cylinder_map(c, &grid).map_err(numeric)?;
            // μ = (1 − v′)/(1 + v′) < 0, so ω = −½ ln|μ|
            let mut omega = grid.map(|_| 0.0f64);
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let mu = catalog::half_cylinder_mu(c, grid.y(j));
                    *omega.at_mut(i, j) = -0.5 * mu.abs().ln();
                }
            }
            opts.expected_curvature = Some(-1.0);
            // Hopf = −c/4 = e^{−λ}
            opts.lambda = Complex64::new((4.0 / c).ln(), std::f64::consts::PI);
            opts.omega = Some(omega.clone());
            emit(u, omega, &MetricSpec::HalfPlane, &opts, out, report)
        }
        "stw" => {
            let alpha = pick(&args.alpha, &cfg.alpha).unwrap_or(1.0);
            let a = pick(&args.a, &cfg.a).unwrap_or(1.0);
            let b = match pick(&args.b, &cfg.b) {
                Some(b) => b,
                None => catalog::stw_find_b(alpha, a, (0.2, 2.5)).map_err(numeric)?,
            };
            let p = catalog::StwParams::new(alpha, a, b).map_err(numeric)?;
            let grid = resolve_grid(
                &args.common,
                &cfg,
                GridSpec {
                    nx: 101,
                    ny: 401,
                    x_range: (0.0, 1.0),
                    y_range: (0.6, std::f64::consts::PI - 0.6),
                },
            )?;
            let u = catalog::stw_map(&p, &grid).map_err(numeric)?;
            let mut omega = grid.map(|_| 0.0f64);
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    *omega.at_mut(i, j) = catalog::stw_tanh_omega(&p, grid.y(j)).atanh();
                }
            }
            opts.expected_curvature = Some(-1.0);
            // constant Hopf Λ = (α² − a⁴ − b²)/4 − iαa²/2 = e^{−λ}
            let hopf = Complex64::new(
                (alpha * alpha - a.powi(4) - b * b) / 4.0,
                -alpha * a * a / 2.0,
            );
            opts.lambda = -hopf.ln();
            opts.omega = Some(omega.clone());
            emit(u, omega, &MetricSpec::Strip, &opts, out, report)
        }
        other => Err(usage(format!(
            "unknown example {other}; expected li-tam, wolf, half-cylinder or stw"
        ))),
    }
}

fn run_soliton_map(args: &SolitonMapArgs) -> Result<(), Failure> {
    let cfg = FileConfig::load(&args.common.config)?;
    let mut opts = resolve_opts(&args.common, &cfg);
    let kn = pick(&args.kn, &cfg.kn).unwrap_or(1);
    let rho = pick(&args.rho, &cfg.rho).unwrap_or(2.0);
    let tau = pick(&args.tau, &cfg.tau).unwrap_or(std::f64::consts::FRAC_PI_4);
    let y0 = pick(&args.y0, &cfg.y0).unwrap_or(0.0);
    let omega0 = pick(&args.omega0, &cfg.omega0).unwrap_or(0.0);
    let domega0 = pick(&args.domega0, &cfg.domega0).unwrap_or(1.0);
    let alpha = pick(&args.alpha, &cfg.alpha).unwrap_or(1.0);
    let x0 = pick(&args.x0, &cfg.x0).unwrap_or(0.0);
    let r0 = pick(&args.r0, &cfg.r0).unwrap_or(0.0);
    let s0 = pick(&args.s0, &cfg.s0).unwrap_or(0.0);
    let sol = SolitonParams::new(kn, rho, tau, y0, omega0, domega0).map_err(numeric)?;
    let mp = MapParams::new(sol, alpha, x0, r0, s0).map_err(numeric)?;
    // keep the default window clear of the ω = 0 line (|μ| = 1 fold of
    // the closed form, where the map stops being a diffeomorphism)
    let grid = resolve_grid(
        &args.common,
        &cfg,
        GridSpec { nx: 201, ny: 201, x_range: (-0.2, 0.2), y_range: (0.3, 0.7) },
    )?;
    let mut u = grid.map(|_| Complex64::new(0.0, 0.0));
    let mut omega = grid.map(|_| 0.0f64);
    let mut e_f = grid.map(|_| 0.0f64);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let s = mapgen::map_sample(grid.x(i), grid.y(j), &mp);
            let k = grid.idx(i, j);
            if s.masked {
                u.mask[k] = false;
                omega.mask[k] = false;
                e_f.mask[k] = false;
                continue;
            }
            u.values[k] = Complex64::new(s.r, s.s);
            omega.values[k] = s.omega;
            e_f.values[k] = s.e_f;
        }
    }
    let out = out_path(&args.common.out, &cfg.out);
    let report = out_path(&args.common.report, &cfg.report);
    opts.omega = Some(omega.clone());
    emit(u, omega, &MetricSpec::Sampled(e_f), &opts, out, report)
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let cfg = FileConfig::load(&args.common.config)?;
    let opts = resolve_opts(&args.common, &cfg);
    let input = args
        .input
        .clone()
        .or_else(|| cfg.input.as_ref().map(PathBuf::from))
        .ok_or_else(|| usage("verify needs --input CSV"))?;
    let map = read_csv(&input)?;
    let metric_name = pick(&args.metric, &cfg.metric).unwrap_or_else(|| "half-plane".into());
    let metric = match metric_name.as_str() {
        "flat" => MetricSpec::Flat,
        "half-plane" => MetricSpec::HalfPlane,
        "sphere" => MetricSpec::Sphere,
        "strip" => MetricSpec::Strip,
        "wolf-cylinder" => {
            let t = pick(&args.t, &cfg.t).ok_or_else(|| usage("wolf-cylinder needs --t"))?;
            MetricSpec::WolfCylinder { t }
        }
        "sampled" => {
            let e_f = map.e_f.clone().ok_or_else(|| {
                usage("--metric sampled needs a populated eF column in the CSV")
            })?;
            MetricSpec::Sampled(e_f)
        }
        other => Err(usage(format!("unknown metric {other}")))?,
    };
    let mut opts = opts;
    opts.omega = map.omega.clone();
    let omega = match map.omega {
        Some(w) => w,
        None => verify::beltrami_decompose(&map.u).map_err(numeric)?.omega,
    };
    let out = out_path(&args.common.out, &cfg.out);
    let report = out_path(&args.common.report, &cfg.report);
    emit(map.u, omega, &metric, &opts, out, report)
}

fn run_solve_beltrami(args: &SolveBeltramiArgs) -> Result<(), Failure> {
    let cfg = FileConfig::load(&args.common.config)?;
    let form = pick(&args.omega_form, &cfg.omega_form).unwrap_or_else(|| "li-tam".into());
    let default = match form.as_str() {
        "li-tam" => GridSpec { nx: 129, ny: 129, x_range: (0.5, 1.5), y_range: (0.0, 1.0) },
        "linear" => GridSpec { nx: 65, ny: 65, x_range: (-0.5, 0.5), y_range: (0.0, 1.0) },
        other => return Err(usage(format!("unknown omega form {other}"))),
    };
    let grid = resolve_grid(&args.common, &cfg, default)?;
    let omega = match form.as_str() {
        "li-tam" => FieldGrid::from_fn(grid.nx, grid.ny, grid.x_range, grid.y_range, |x, _| {
            catalog::litam_omega(x)
        }),
        _ => FieldGrid::from_fn(grid.nx, grid.ny, grid.x_range, grid.y_range, |x, _| x),
    };
    // Dirichlet data of the Li–Tam solution R = η (also a sound boundary
    // condition for any coefficient field)
    let bc = BoundaryData::from_fn(&omega, |_, eta| eta);
    let solved = beltrami::solve_r(&omega, &bc, &SolverConfig::default()).map_err(numeric)?;
    if !solved.converged {
        return Err(Failure::Numeric(format!(
            "solver stalled at residual {} after {} iterations",
            solved.residual, solved.iterations
        )));
    }
    // anchor S so the image stays in the upper half-plane
    let anchor_value = 0.5 + 0.5 * (2.0 * grid.x_range.1).sinh();
    let (s_grid, compat) =
        beltrami::reconstruct_s(&solved.r, &omega, (0, 0), anchor_value).map_err(numeric)?;
    println!(
        "converged in {} sweeps, residual {:.3e}, S-compatibility {:.3e}",
        solved.iterations, solved.residual, compat
    );
    let mut u = grid.map(|_| Complex64::new(0.0, 0.0));
    for k in 0..u.values.len() {
        u.values[k] = Complex64::new(solved.r.values[k], s_grid.values[k]);
    }
    if let Some(out) = out_path(&args.common.out, &cfg.out) {
        let res_harmonic = verify::harmonic_residual_field(&u, &MetricSpec::HalfPlane)
            .map_err(numeric)?;
        let res_beltrami = beltrami::beltrami_residual_field(&u, &omega).map_err(numeric)?;
        let e_f = e_f_grid(&u, &MetricSpec::HalfPlane);
        write_csv(&out, &CsvFields { u: u.clone(), omega: omega.clone(), e_f, res_harmonic, res_beltrami })?;
    }
    if let Some(report) = out_path(&args.common.report, &cfg.report) {
        let mut opts = resolve_opts(&args.common, &cfg);
        opts.omega = Some(omega);
        emit(u, opts.omega.clone().unwrap(), &MetricSpec::HalfPlane, &opts, None, Some(report))?;
    }
    Ok(())
}

fn run_backlund(args: &BacklundArgs) -> Result<(), Failure> {
    let cfg = FileConfig::load(&args.common.config)?;
    if args.seed_theta != "kink" {
        return Err(usage(format!("unknown seed {}; only kink is built in", args.seed_theta)));
    }
    // integrate ω from the kink on the domain where the first-order pair
    // relations hold, and report the branch selection
    let gc = FieldGrid::from_fn(161, 161, (1.0, 1.5), (0.2, 0.8), |_, _| 0.0);
    let theta =
        FieldGrid::from_fn(gc.nx, gc.ny, gc.x_range, gc.y_range, |x, _| backlund::kink_theta(x));
    let seed = (gc.nx / 2, gc.ny / 2);
    let omega0 = backlund::example_omega_direct(gc.x(seed.0), gc.y(seed.1));
    let integ = backlund::backlund_integrate(&theta, seed, omega0, 1e-3).map_err(numeric)?;
    println!(
        "kink integration: consistency {:.3e}, sinh-Gordon residual {:.3e}",
        integ.consistency_residual, integ.sinh_gordon_residual
    );
    let branches = backlund::resolve_example_branch(201);
    for (domain, v) in
        [("eta > cosh(2 xi)/2", &branches.stated), ("eta < cosh(2 xi)/2", &branches.complement)]
    {
        println!(
            "branch on {domain}: omega = {} (sinh-Gordon residual {:.3e})",
            v.formula, v.sinh_gordon_residual
        );
    }

    // the associated explicit map, verified against the half-plane target
    let mut opts = resolve_opts(&args.common, &cfg);
    let grid = resolve_grid(
        &args.common,
        &cfg,
        GridSpec { nx: 401, ny: 401, x_range: (-0.3, 0.3), y_range: (2.5, 3.5) },
    )?;
    let u = backlund::backlund_example_map(&grid).map_err(numeric)?;
    let mut omega = grid.map(|_| 0.0f64);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            *omega.at_mut(i, j) = backlund::example_omega_reciprocal(grid.x(i), grid.y(j));
        }
    }
    opts.expected_curvature = Some(-1.0);
    // Hopf ≡ 1 for this map (e^F u_ζ ū_ζ = 1), so λ = 0
    opts.lambda = Complex64::new(0.0, 0.0);
    opts.omega = Some(omega.clone());
    let out = out_path(&args.common.out, &cfg.out);
    let report = out_path(&args.common.report, &cfg.report);
    emit(u, omega, &MetricSpec::HalfPlane, &opts, out, report)
}

fn run_selftest(args: &SelftestArgs) -> Result<(), Failure> {
    let cfg = FileConfig::load(&args.common.config)?;
    let seed = pick(&args.common.seed, &cfg.seed).unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut check = |name: &str, worst: f64, tol: f64| {
        let ok = worst < tol;
        println!("{} {name}: {worst:.3e} (tol {tol:.1e})", if ok { "pass" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };
    let mut worst_pyth = 0.0f64;
    let mut worst_dn = 0.0f64;
    for _ in 0..10_000 {
        let u: f64 = rng.gen_range(-5.0..5.0);
        let m: f64 = rng.gen_range(0.0..1.0);
        let j = elliptic::jacobi_sn_cn_dn(u, m);
        worst_pyth = worst_pyth.max((j.sn * j.sn + j.cn * j.cn - 1.0).abs());
        worst_dn = worst_dn.max((j.dn * j.dn + m * j.sn * j.sn - 1.0).abs());
    }
    check("sn^2 + cn^2 - 1", worst_pyth, 1e-12);
    check("dn^2 + m sn^2 - 1", worst_dn, 1e-12);
    let mut worst_sin = 0.0f64;
    let mut worst_tanh = 0.0f64;
    let mut worst_pi0 = 0.0f64;
    for _ in 0..200 {
        let u: f64 = rng.gen_range(-3.0..3.0);
        worst_sin = worst_sin.max((elliptic::jacobi_sn_cn_dn(u, 0.0).sn - u.sin()).abs());
        worst_tanh = worst_tanh.max((elliptic::jacobi_sn_cn_dn(u, 1.0).sn - u.tanh()).abs());
        let m: f64 = rng.gen_range(0.0..1.0);
        let pi0 = elliptic::ellint_pi(0.0, u.abs(), m).map_err(numeric)?;
        worst_pi0 = worst_pi0.max((pi0 - u.abs()).abs());
    }
    check("sn(u|0) - sin u", worst_sin, 1e-12);
    check("sn(u|1) - tanh u", worst_tanh, 1e-12);
    check("Pi(0; u|m) - u", worst_pi0, 1e-12);
    let mut worst_cd = 0.0f64;
    for _ in 0..200 {
        let m: f64 = rng.gen_range(0.01..0.99);
        let k = elliptic::complete_k(m).map_err(numeric)?;
        let j = elliptic::jacobi_sn_cn_dn(k, m);
        worst_cd = worst_cd.max((j.cn / j.dn).abs());
    }
    check("cd(K|m)", worst_cd, 1e-12);
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

// ---------------------------------------------------------------------------
// Entry point.

pub fn run(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version are successful exits in clap
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.cmd {
        Cmd::SolitonMap(a) => run_soliton_map(a),
        Cmd::Verify(a) => run_verify(a),
        Cmd::SolveBeltrami(a) => run_solve_beltrami(a),
        Cmd::Example(a) => run_example(a),
        Cmd::Backlund(a) => run_backlund(a),
        Cmd::Selftest(a) => run_selftest(a),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Numeric(msg) => eprintln!("numeric error: {msg}"),
                Failure::Verify => eprintln!("verification failed"),
            }
            f.code()
        }
    }
}
