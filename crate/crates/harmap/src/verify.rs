//! Finite-difference verification of the pointwise identities a harmonic
//! diffeomorphism must satisfy: the harmonic-map equation, the Beltrami
//! decomposition, holomorphy (and constancy) of the Hopf differential,
//! curvature of the reconstructed target metric, the Jacobian sign and
//! gradient orthogonality.

use crate::grid::FieldGrid;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("grids do not share geometry")]
    GeometryMismatch,
    #[error("map value outside the metric domain at {count} nodes (first: ({i}, {j}))")]
    MetricDomain { count: usize, i: usize, j: usize },
    #[error("critical point: u_z vanishes at node ({0}, {1})")]
    CriticalPoint(usize, usize),
    #[error("degenerate decomposition: the map is conformal (mu = 0) at node ({0}, {1})")]
    ConformalDegeneracy(usize, usize),
    #[error("phi is not harmonic (max |Laplacian phi| = {0}, tolerance {1}); the Beltrami phase fails the necessary condition for a harmonic diffeomorphism")]
    PhiNotHarmonic(f64, f64),
    #[error(transparent)]
    Beltrami(#[from] crate::beltrami::BeltramiError),
}

/// The target metric, either one of the closed-form constant-curvature
/// models (evaluated along the map) or a conformal factor sampled on the
/// domain grid.
#[derive(Debug, Clone)]
pub enum MetricSpec {
    /// e^F = 1 (curvature 0)
    Flat,
    /// upper half-plane, e^F = 1/S² (curvature −1)
    HalfPlane,
    /// sphere, e^F = 4/(1+|u|²)² (curvature +1)
    Sphere,
    /// strip 0 < S < π, e^F = 1/sin²S (curvature −1)
    Strip,
    /// hyperbolic cylinder chart, e^F = 1/(t² cos²(S/t)) (curvature −1)
    WolfCylinder { t: f64 },
    /// e^F samples pulled back to the domain grid
    Sampled(FieldGrid<f64>),
}

impl MetricSpec {
    /// Conformal factor at a map value; `None` outside the domain.
    pub fn e_f(&self, u: Complex64) -> Option<f64> {
        let s = u.im;
        match self {
            MetricSpec::Flat => Some(1.0),
            MetricSpec::HalfPlane => (s > 0.0).then(|| 1.0 / (s * s)),
            MetricSpec::Sphere => Some(4.0 / (1.0 + u.norm_sqr()).powi(2)),
            MetricSpec::Strip => {
                (s > 0.0 && s < std::f64::consts::PI).then(|| 1.0 / s.sin().powi(2))
            }
            MetricSpec::WolfCylinder { t } => {
                let c = (s / t).cos();
                (c != 0.0).then(|| 1.0 / (t * t * c * c))
            }
            MetricSpec::Sampled(_) => None,
        }
    }

    /// ∂F/∂u at a map value (closed-form kinds only).
    pub fn f_u(&self, u: Complex64) -> Option<Complex64> {
        match self {
            MetricSpec::Flat => Some(Complex64::new(0.0, 0.0)),
            MetricSpec::HalfPlane => {
                // F = −2 log S: F_u = −2/(u − ū)
                Some(-2.0 / (u - u.conj()))
            }
            MetricSpec::Sphere => Some(-2.0 * u.conj() / (1.0 + u.norm_sqr())),
            MetricSpec::Strip => {
                // F = −2 log sin S: F_u = i cot S
                Some(Complex64::i() * u.im.cos() / u.im.sin())
            }
            MetricSpec::WolfCylinder { t } => {
                // F = −2 log(t cos(S/t)): F_u = −(i/t) tan(S/t)
                Some(-Complex64::i() / t * (u.im / t).tan())
            }
            MetricSpec::Sampled(_) => None,
        }
    }
}

// ---------------------------------------------------------------------------
// FD operators.

fn partial_x(f: &FieldGrid<Complex64>) -> FieldGrid<Complex64> {
    let h = f.hx();
    let mut out = f.clone();
    for j in 0..f.ny {
        for i in 0..f.nx {
            let v = if i == 0 {
                (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) / (2.0 * h)
            } else if i + 1 == f.nx {
                (3.0 * f.at(i, j) - 4.0 * f.at(i - 1, j) + f.at(i - 2, j)) / (2.0 * h)
            } else {
                (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h)
            };
            *out.at_mut(i, j) = v;
        }
    }
    out
}

fn partial_y(f: &FieldGrid<Complex64>) -> FieldGrid<Complex64> {
    let h = f.hy();
    let mut out = f.clone();
    for j in 0..f.ny {
        for i in 0..f.nx {
            let v = if j == 0 {
                (-3.0 * f.at(i, 0) + 4.0 * f.at(i, 1) - f.at(i, 2)) / (2.0 * h)
            } else if j + 1 == f.ny {
                (3.0 * f.at(i, j) - 4.0 * f.at(i, j - 1) + f.at(i, j - 2)) / (2.0 * h)
            } else {
                (f.at(i, j + 1) - f.at(i, j - 1)) / (2.0 * h)
            };
            *out.at_mut(i, j) = v;
        }
    }
    out
}

/// Wirtinger derivatives ∂_z = ½(∂_x − i∂_y), ∂_z̄ = ½(∂_x + i∂_y);
/// second-order central differences in the interior, one-sided
/// second-order at the edges.
pub fn wirtinger(f: &FieldGrid<Complex64>) -> (FieldGrid<Complex64>, FieldGrid<Complex64>) {
    let dx = partial_x(f);
    let dy = partial_y(f);
    let mut dz = f.clone();
    let mut dzb = f.clone();
    for k in 0..f.values.len() {
        let gx = dx.values[k];
        let gy = dy.values[k];
        dz.values[k] = 0.5 * (gx - Complex64::i() * gy);
        dzb.values[k] = 0.5 * (gx + Complex64::i() * gy);
    }
    (dz, dzb)
}

/// 5-point Laplacian; edge nodes are masked in the output.
pub fn laplacian(f: &FieldGrid<Complex64>) -> FieldGrid<Complex64> {
    let hx2 = f.hx() * f.hx();
    let hy2 = f.hy() * f.hy();
    let mut out = f.map(|_| Complex64::new(0.0, 0.0));
    for j in 0..f.ny {
        for i in 0..f.nx {
            if i == 0 || j == 0 || i + 1 == f.nx || j + 1 == f.ny {
                out.set_masked(i, j);
                continue;
            }
            let v = (f.at(i + 1, j) + f.at(i - 1, j) - 2.0 * f.at(i, j)) / hx2
                + (f.at(i, j + 1) + f.at(i, j - 1) - 2.0 * f.at(i, j)) / hy2;
            *out.at_mut(i, j) = v;
        }
    }
    out
}

fn laplacian_real(f: &FieldGrid<f64>) -> FieldGrid<f64> {
    let c = f.map(|&v| Complex64::new(v, 0.0));
    laplacian(&c).map(|v| v.re)
}

// ---------------------------------------------------------------------------
// Identity checks.

/// Max-norm over regular interior nodes of the harmonic-map residual
/// u_zz̄ + F_u(u, ū) u_z u_z̄.
pub fn harmonic_residual(u: &FieldGrid<Complex64>, metric: &MetricSpec) -> Result<f64, VerifyError> {
    let field = harmonic_residual_field(u, metric)?;
    let mut worst = 0.0f64;
    for k in 0..field.values.len() {
        if field.mask[k] {
            worst = worst.max(field.values[k]);
        }
    }
    Ok(worst)
}

/// Pointwise |u_zz̄ + F_u u_z u_z̄|; nodes where the residual is not
/// evaluated (edge margin, singular stencils) come back masked.
pub fn harmonic_residual_field(
    u: &FieldGrid<Complex64>,
    metric: &MetricSpec,
) -> Result<FieldGrid<f64>, VerifyError> {
    let (uz, uzb) = wirtinger(u);
    let uzzb = laplacian(u).map(|v| v / 4.0);
    let f_u_field = match metric {
        MetricSpec::Sampled(e_f) => Some(recover_f_u(u, &uz, &uzb, e_f)?),
        _ => None,
    };
    // sampled metrics need F_u recovered by a second FD pass, so the edge
    // closures contaminate one extra layer; stay two layers inside there
    let margin = if f_u_field.is_some() { 2 } else { 1 };
    let mut out = u.map(|_| 0.0f64);
    for k in 0..out.values.len() {
        out.mask[k] = false;
    }
    let mut bad: Vec<(usize, usize)> = Vec::new();
    for j in margin..u.ny - margin {
        for i in margin..u.nx - margin {
            if !u.stencil_regular(i, j) {
                continue;
            }
            let k = u.idx(i, j);
            let f_u = match &f_u_field {
                Some(g) => {
                    if !g.mask[k] {
                        continue;
                    }
                    g.values[k]
                }
                None => match metric.f_u(u.values[k]) {
                    Some(v) if metric.e_f(u.values[k]).is_some() => v,
                    _ => {
                        bad.push((i, j));
                        continue;
                    }
                },
            };
            let res = uzzb.values[k] + f_u * uz.values[k] * uzb.values[k];
            out.values[k] = res.norm();
            out.mask[k] = true;
        }
    }
    if !bad.is_empty() {
        return Err(VerifyError::MetricDomain { count: bad.len(), i: bad[0].0, j: bad[0].1 });
    }
    Ok(out)
}

/// Recover F_u at each node from a sampled conformal factor: F real gives
/// F_ū = conj(F_u), so the chain rule F_z = F_u u_z + conj(F_u) conj(u_z̄)
/// is a 2×2 real-linear system per node with determinant equal to the
/// Jacobian of u.
fn recover_f_u(
    u: &FieldGrid<Complex64>,
    uz: &FieldGrid<Complex64>,
    uzb: &FieldGrid<Complex64>,
    e_f: &FieldGrid<f64>,
) -> Result<FieldGrid<Complex64>, VerifyError> {
    if !u.same_geometry(e_f) {
        return Err(VerifyError::GeometryMismatch);
    }
    let big_f = e_f.map(|&v| Complex64::new(v.ln(), 0.0));
    let (fz, _) = wirtinger(&big_f);
    let mut out = u.map(|_| Complex64::new(0.0, 0.0));
    for k in 0..u.values.len() {
        if !u.mask[k] || !e_f.mask[k] || !e_f.values[k].is_finite() {
            out.mask[k] = false;
            continue;
        }
        let a = uz.values[k];
        let b = uzb.values[k].conj();
        let det = a.norm_sqr() - b.norm_sqr();
        if det == 0.0 {
            out.mask[k] = false;
            continue;
        }
        // Re: p(a.re + b.re) + q(b.im − a.im) = F_z.re
        // Im: p(a.im + b.im) + q(a.re − b.re) = F_z.im
        let (fr, fi) = (fz.values[k].re, fz.values[k].im);
        let p = (fr * (a.re - b.re) - fi * (b.im - a.im)) / det;
        let q = (fi * (a.re + b.re) - fr * (a.im + b.im)) / det;
        out.values[k] = Complex64::new(p, q);
    }
    Ok(out)
}

/// Hopf differential Λ = e^F u_z ū_z and its FD statistics.
pub struct HopfResult {
    pub field: FieldGrid<Complex64>,
    /// max |∂_z̄ Λ| over regular interior nodes
    pub holomorphy_max: f64,
    /// standard deviation of Λ over regular nodes
    pub std_dev: f64,
    pub mean: Complex64,
    /// min |Λ| (the standing non-vanishing assumption)
    pub min_abs: f64,
    /// max |Λ − 1| (relevant in specific coordinates)
    pub max_dev_from_one: f64,
}

pub fn hopf_field(u: &FieldGrid<Complex64>, metric: &MetricSpec) -> Result<HopfResult, VerifyError> {
    let (uz, uzb) = wirtinger(u);
    let mut field = u.map(|_| Complex64::new(0.0, 0.0));
    let mut bad: Vec<(usize, usize)> = Vec::new();
    for j in 0..u.ny {
        for i in 0..u.nx {
            let k = u.idx(i, j);
            if !u.mask[k] {
                field.mask[k] = false;
                continue;
            }
            let ef = match metric {
                MetricSpec::Sampled(g) => {
                    if g.mask[k] && g.values[k].is_finite() {
                        Some(g.values[k])
                    } else {
                        None
                    }
                }
                _ => metric.e_f(u.values[k]),
            };
            match ef {
                Some(ef) => {
                    // ū_z = conj(u_z̄)
                    field.values[k] = ef * uz.values[k] * uzb.values[k].conj();
                }
                None => bad.push((i, j)),
            }
        }
    }
    if !bad.is_empty() {
        return Err(VerifyError::MetricDomain { count: bad.len(), i: bad[0].0, j: bad[0].1 });
    }
    // second-pass FD quantities and the field statistics are restricted to
    // nodes two layers inside the boundary, where every stencil upstream is
    // central; one layer closer the one-sided edge closures leak O(h) noise
    let (_, lzb) = wirtinger(&field);
    let mut holomorphy_max = 0.0f64;
    for j in 2..u.ny.saturating_sub(2) {
        for i in 2..u.nx.saturating_sub(2) {
            if field.stencil_regular(i, j) {
                holomorphy_max = holomorphy_max.max(lzb.values[field.idx(i, j)].norm());
            }
        }
    }
    let mut regular: Vec<Complex64> = Vec::new();
    for j in 1..u.ny - 1 {
        for i in 1..u.nx - 1 {
            if field.is_regular(i, j) {
                regular.push(field.values[field.idx(i, j)]);
            }
        }
    }
    let n = regular.len().max(1) as f64;
    let mean = regular.iter().sum::<Complex64>() / n;
    let var = regular.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>() / n;
    let min_abs = regular.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let max_dev_from_one = regular
        .iter()
        .map(|v| (v - Complex64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    Ok(HopfResult { field, holomorphy_max, std_dev: var.sqrt(), mean, min_abs, max_dev_from_one })
}

/// ω and φ with μ = u_z̄/u_z = e^{−2ω + iφ}; φ is unwrapped row-major
/// with a column seam pass.
pub struct Decomposition {
    pub omega: FieldGrid<f64>,
    pub phi: FieldGrid<f64>,
    pub phi_harmonicity_max: f64,
}

pub fn beltrami_decompose(u: &FieldGrid<Complex64>) -> Result<Decomposition, VerifyError> {
    let (uz, uzb) = wirtinger(u);
    let mut omega = u.map(|_| 0.0f64);
    let mut phi = u.map(|_| 0.0f64);
    for j in 0..u.ny {
        for i in 0..u.nx {
            let k = u.idx(i, j);
            if !u.mask[k] {
                omega.mask[k] = false;
                phi.mask[k] = false;
                continue;
            }
            if uz.values[k].norm() == 0.0 {
                return Err(VerifyError::CriticalPoint(i, j));
            }
            let mu = uzb.values[k] / uz.values[k];
            if mu.norm() == 0.0 {
                return Err(VerifyError::ConformalDegeneracy(i, j));
            }
            omega.values[k] = -0.5 * mu.norm().ln();
            phi.values[k] = mu.arg();
        }
    }
    unwrap_phase(&mut phi);
    // φ on the edges comes from one-sided stencils; its Laplacian one
    // layer in would divide that O(h²) closure mismatch by h², so the
    // harmonicity statistic stays two layers inside
    let lap = laplacian_real(&phi);
    let mut worst = 0.0f64;
    for j in 2..u.ny.saturating_sub(2) {
        for i in 2..u.nx.saturating_sub(2) {
            if phi.stencil_regular(i, j) {
                worst = worst.max(lap.values[phi.idx(i, j)].abs());
            }
        }
    }
    Ok(Decomposition { omega, phi, phi_harmonicity_max: worst })
}

/// Remove 2π jumps: each row is unwrapped left to right, and each row
/// start is aligned with the node below it (column seam).
fn unwrap_phase(phi: &mut FieldGrid<f64>) {
    use std::f64::consts::{PI, TAU};
    let nx = phi.nx;
    for j in 0..phi.ny {
        if j > 0 {
            let below = phi.values[(j - 1) * nx];
            let here = phi.values[j * nx];
            let shift = ((here - below + PI) / TAU).floor() * TAU;
            phi.values[j * nx] = here - shift;
        }
        for i in 1..nx {
            let prev = phi.values[j * nx + i - 1];
            let here = phi.values[j * nx + i];
            let shift = ((here - prev + PI) / TAU).floor() * TAU;
            phi.values[j * nx + i] = here - shift;
        }
    }
}

/// Pointwise Gauss curvature K = −½ e^{−F} ΔF of a sampled log-conformal
/// factor; edge nodes masked.
pub fn curvature_from_metric(f: &FieldGrid<f64>) -> FieldGrid<f64> {
    let lap = laplacian_real(f);
    let mut out = lap.clone();
    for k in 0..f.values.len() {
        if out.mask[k] {
            out.values[k] = -0.5 * (-f.values[k]).exp() * lap.values[k];
        }
    }
    out
}

/// Metric reconstruction from the map alone: with λ = ψ + iφ the
/// holomorphic completion of the Beltrami phase, the pulled-back factor
/// e^{F̃} = e^{−λ}/(u_z ū_z) = e^{−ψ+2ω}/|u_z|², the curvature field
/// K̃ = −(2 ω_zz̄ / sinh 2ω) e^ψ, and the harmonic residual of u against
/// the reconstructed (sampled) metric.
pub struct Reconstruction {
    pub e_f_tilde: FieldGrid<f64>,
    pub curvature: FieldGrid<f64>,
    pub harmonic_residual: f64,
    pub decomposition: Decomposition,
}

pub fn reconstruct_metric(
    u: &FieldGrid<Complex64>,
    lambda: Complex64,
    phi_tolerance: f64,
) -> Result<Reconstruction, VerifyError> {
    let dec = beltrami_decompose(u)?;
    if dec.phi_harmonicity_max > phi_tolerance {
        return Err(VerifyError::PhiNotHarmonic(dec.phi_harmonicity_max, phi_tolerance));
    }
    let psi = lambda.re;
    let (uz, _) = wirtinger(u);
    let mut e_f_tilde = u.map(|_| 0.0f64);
    for k in 0..u.values.len() {
        if !u.mask[k] {
            e_f_tilde.mask[k] = false;
            continue;
        }
        e_f_tilde.values[k] =
            (2.0 * dec.omega.values[k] - psi).exp() / uz.values[k].norm_sqr();
    }
    let omega_c = dec.omega.map(|&w| Complex64::new(w, 0.0));
    let omega_zzb = laplacian(&omega_c).map(|v| v / 4.0);
    let mut curvature = dec.omega.map(|_| 0.0f64);
    for j in 0..u.ny {
        for i in 0..u.nx {
            let k = u.idx(i, j);
            // ω at edge nodes comes from one-sided stencils, so the
            // Laplacian one layer in is contaminated: mask two layers
            if i < 2 || j < 2 || i + 2 >= u.nx || j + 2 >= u.ny {
                curvature.mask[k] = false;
                continue;
            }
            if !omega_zzb.mask[k] || !dec.omega.mask[k] {
                curvature.mask[k] = false;
                continue;
            }
            let s2w = (2.0 * dec.omega.values[k]).sinh();
            if s2w == 0.0 {
                curvature.mask[k] = false;
                continue;
            }
            curvature.values[k] = -2.0 * omega_zzb.values[k].re / s2w * psi.exp();
        }
    }
    let harmonic = harmonic_residual(u, &MetricSpec::Sampled(e_f_tilde.clone()))?;
    Ok(Reconstruction { e_f_tilde, curvature, harmonic_residual: harmonic, decomposition: dec })
}

/// Jacobian J = |u_z|² − |u_z̄|² and its minimum over regular nodes.
pub fn jacobian_and_norms(u: &FieldGrid<Complex64>) -> (FieldGrid<f64>, f64) {
    let (uz, uzb) = wirtinger(u);
    let mut out = u.map(|_| 0.0f64);
    let mut min_j = f64::INFINITY;
    for k in 0..u.values.len() {
        if !u.mask[k] {
            out.mask[k] = false;
            continue;
        }
        let j = uz.values[k].norm_sqr() - uzb.values[k].norm_sqr();
        out.values[k] = j;
        min_j = min_j.min(j);
    }
    (out, min_j)
}

/// max |R_ξ R_η + S_ξ S_η| over regular interior nodes.
pub fn orthogonality_residual(u: &FieldGrid<Complex64>) -> f64 {
    let dx = partial_x(u);
    let dy = partial_y(u);
    let mut worst = 0.0f64;
    for j in 1..u.ny - 1 {
        for i in 1..u.nx - 1 {
            if !u.stencil_regular(i, j) {
                continue;
            }
            let k = u.idx(i, j);
            let r = dx.values[k].re * dy.values[k].re + dx.values[k].im * dy.values[k].im;
            worst = worst.max(r.abs());
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// Aggregate report.

/// Named residual maxima with the tolerances applied and per-check flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub nx: usize,
    pub ny: usize,
    pub xi_min: f64,
    pub xi_max: f64,
    pub eta_min: f64,
    pub eta_max: f64,
    pub harmonic_max: f64,
    pub beltrami_max: f64,
    pub hopf_holomorphy_max: f64,
    pub hopf_std: f64,
    pub hopf_min_abs: f64,
    pub curvature_dev_max: f64,
    pub jacobian_min: f64,
    pub orthogonality_max: f64,
    pub phi_harmonicity_max: f64,
    pub tol_fd: f64,
    pub tol_curvature: f64,
    pub pass_harmonic: bool,
    pub pass_beltrami: bool,
    pub pass_hopf: bool,
    pub pass_curvature: bool,
    pub pass_jacobian: bool,
    pub pass_orthogonality: bool,
    pub pass_phi_harmonicity: bool,
    pub pass: bool,
}

/// Grid-aware default tolerance for smooth closed forms.
pub fn default_tolerance(h: f64) -> f64 {
    (10.0 * h * h).max(1e-8)
}

pub struct VerifyOptions {
    /// expected constant curvature of the target, if known
    pub expected_curvature: Option<f64>,
    /// expected ω samples for the Beltrami residual (decomposed ω is
    /// used when absent)
    pub omega: Option<FieldGrid<f64>>,
    /// constant λ of the specific-coordinate chart
    pub lambda: Complex64,
    pub tol_fd: f64,
    pub tol_curvature: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            expected_curvature: None,
            omega: None,
            lambda: Complex64::new(0.0, 0.0),
            tol_fd: 1e-5,
            tol_curvature: 1e-3,
        }
    }
}

/// Run the full identity suite on a map grid.
pub fn verify_map(
    u: &FieldGrid<Complex64>,
    metric: &MetricSpec,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let harmonic_max = harmonic_residual(u, metric)?;
    let hopf = hopf_field(u, metric)?;
    let dec = beltrami_decompose(u)?;
    let omega_grid = opts.omega.as_ref().unwrap_or(&dec.omega);
    // |e^ω u_ζ̄ − e^{−ω+iφ} u_ζ| with the decomposed phase: families with
    // μ negative (φ = π) or a constant complex phase are fair game, while
    // a supplied ω is still checked against |μ|
    let beltrami_max = {
        if !u.same_geometry(omega_grid) {
            return Err(VerifyError::GeometryMismatch);
        }
        let (uz, uzb) = wirtinger(u);
        let mut worst = 0.0f64;
        for j in 1..u.ny - 1 {
            for i in 1..u.nx - 1 {
                if !u.stencil_regular(i, j) {
                    continue;
                }
                let k = u.idx(i, j);
                if !omega_grid.mask[k] || !omega_grid.values[k].is_finite() {
                    continue;
                }
                let w = omega_grid.values[k];
                let phase = Complex64::from_polar(1.0, dec.phi.values[k]);
                let res = w.exp() * uzb.values[k] - (-w).exp() * phase * uz.values[k];
                worst = worst.max(res.norm());
            }
        }
        worst
    };
    let (jac, jacobian_min) = jacobian_and_norms(u);
    let jac_max = jac
        .values
        .iter()
        .zip(&jac.mask)
        .filter_map(|(v, &m)| m.then_some(*v))
        .fold(f64::NEG_INFINITY, f64::max);
    let orthogonality_max = orthogonality_residual(u);
    let curvature_dev_max = match opts.expected_curvature {
        Some(kn) => {
            let rec = reconstruct_metric(u, opts.lambda, opts.tol_fd.max(1e-4))?;
            rec.curvature
                .values
                .iter()
                .zip(&rec.curvature.mask)
                .filter_map(|(v, &m)| m.then_some((v - kn).abs()))
                .fold(0.0, f64::max)
        }
        None => 0.0,
    };
    let pass_harmonic = harmonic_max < opts.tol_fd;
    let pass_beltrami = beltrami_max < opts.tol_fd;
    let pass_hopf = hopf.holomorphy_max < opts.tol_fd;
    let pass_curvature = curvature_dev_max < opts.tol_curvature;
    // diffeomorphism: the Jacobian must keep one sign
    let pass_jacobian = jacobian_min > 0.0 || jac_max < 0.0;
    // the orthogonality identity R_ξR_η + S_ξS_η = 0 holds only for real
    // Beltrami coefficients; skip the gate when the phase is genuinely
    // complex (φ away from 0 and π)
    let phase_real = {
        let mut worst = 0.0f64;
        for k in 0..u.values.len() {
            if dec.phi.mask[k] {
                worst = worst.max(dec.phi.values[k].sin().abs());
            }
        }
        worst < 1e-2
    };
    let pass_orthogonality = !phase_real || orthogonality_max < 10.0 * opts.tol_fd;
    let pass_phi_harmonicity = dec.phi_harmonicity_max < opts.tol_fd.max(1e-5);
    let pass = pass_harmonic
        && pass_beltrami
        && pass_hopf
        && pass_curvature
        && pass_jacobian
        && pass_orthogonality
        && pass_phi_harmonicity;
    Ok(VerificationReport {
        nx: u.nx,
        ny: u.ny,
        xi_min: u.x_range.0,
        xi_max: u.x_range.1,
        eta_min: u.y_range.0,
        eta_max: u.y_range.1,
        harmonic_max,
        beltrami_max,
        hopf_holomorphy_max: hopf.holomorphy_max,
        hopf_std: hopf.std_dev,
        hopf_min_abs: hopf.min_abs,
        curvature_dev_max,
        jacobian_min,
        orthogonality_max,
        phi_harmonicity_max: dec.phi_harmonicity_max,
        tol_fd: opts.tol_fd,
        tol_curvature: opts.tol_curvature,
        pass_harmonic,
        pass_beltrami,
        pass_hopf,
        pass_curvature,
        pass_jacobian,
        pass_orthogonality,
        pass_phi_harmonicity,
        pass,
    })
}
