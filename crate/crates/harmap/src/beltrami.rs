//! Grid solver for the real-coefficient Beltrami equation via its
//! divergence-form second-order reduction
//!   (tanh ω R_ξ)_ξ + (coth ω R_η)_η = 0,
//! followed by quadrature reconstruction of S from the first-order system
//!   S_η = tanh ω R_ξ,   S_ξ = −coth ω R_η.

use crate::grid::FieldGrid;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BeltramiError {
    #[error("grids do not share geometry")]
    GeometryMismatch,
    #[error("coefficient singularity: min |omega| = {0} is below the floor {1} (coth omega blows up)")]
    CoefficientSingularity(f64, f64),
    #[error("boundary data length does not match the grid")]
    BoundaryMismatch,
}

/// Dirichlet data for R on the four edges.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    /// j = 0 row, length nx
    pub bottom: Vec<f64>,
    /// j = ny−1 row, length nx
    pub top: Vec<f64>,
    /// i = 0 column, length ny
    pub left: Vec<f64>,
    /// i = nx−1 column, length ny
    pub right: Vec<f64>,
}

impl BoundaryData {
    /// Sample a closed form R(ξ, η) on the edges of `grid`.
    pub fn from_fn(grid: &FieldGrid<f64>, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            bottom: (0..grid.nx).map(|i| f(grid.x(i), grid.y(0))).collect(),
            top: (0..grid.nx).map(|i| f(grid.x(i), grid.y(grid.ny - 1))).collect(),
            left: (0..grid.ny).map(|j| f(grid.x(0), grid.y(j))).collect(),
            right: (0..grid.ny).map(|j| f(grid.x(grid.nx - 1), grid.y(j))).collect(),
        }
    }
}

pub struct SolveResult {
    pub r: FieldGrid<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// final max-norm of the discrete divergence residual
    pub residual: f64,
}

pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub relaxation: f64,
    pub omega_floor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 200_000, relaxation: 1.9, omega_floor: 1e-3 }
    }
}

/// Red-black SOR on the conservative 5-point stencil with half-node
/// coefficients by arithmetic averaging.
pub fn solve_r(
    omega: &FieldGrid<f64>,
    bc: &BoundaryData,
    cfg: &SolverConfig,
) -> Result<SolveResult, BeltramiError> {
    let (nx, ny) = (omega.nx, omega.ny);
    if bc.bottom.len() != nx || bc.top.len() != nx || bc.left.len() != ny || bc.right.len() != ny {
        return Err(BeltramiError::BoundaryMismatch);
    }
    let min_abs_omega = omega.values.iter().fold(f64::INFINITY, |m, &w| m.min(w.abs()));
    if min_abs_omega < cfg.omega_floor {
        return Err(BeltramiError::CoefficientSingularity(min_abs_omega, cfg.omega_floor));
    }
    let a: Vec<f64> = omega.values.iter().map(|&w| w.tanh()).collect();
    let b: Vec<f64> = omega.values.iter().map(|&w| 1.0 / w.tanh()).collect();
    let ihx2 = 1.0 / (omega.hx() * omega.hx());
    let ihy2 = 1.0 / (omega.hy() * omega.hy());

    let mut r = omega.map(|_| 0.0f64);
    for i in 0..nx {
        *r.at_mut(i, 0) = bc.bottom[i];
        *r.at_mut(i, ny - 1) = bc.top[i];
    }
    for j in 0..ny {
        *r.at_mut(0, j) = bc.left[j];
        *r.at_mut(nx - 1, j) = bc.right[j];
    }
    // interior start: average of the boundary mean, deterministic
    let edge_mean = (bc.bottom.iter().chain(&bc.top).chain(&bc.left).chain(&bc.right).sum::<f64>())
        / (2 * nx + 2 * ny) as f64;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            *r.at_mut(i, j) = edge_mean;
        }
    }

    let idx = |i: usize, j: usize| j * nx + i;
    let weights = |i: usize, j: usize| {
        let we = 0.5 * (a[idx(i, j)] + a[idx(i + 1, j)]) * ihx2;
        let ww = 0.5 * (a[idx(i, j)] + a[idx(i - 1, j)]) * ihx2;
        let wn = 0.5 * (b[idx(i, j)] + b[idx(i, j + 1)]) * ihy2;
        let ws = 0.5 * (b[idx(i, j)] + b[idx(i, j - 1)]) * ihy2;
        (we, ww, wn, ws)
    };

    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    while iterations < cfg.max_iter {
        for color in 0..2usize {
            for j in 1..ny - 1 {
                for i in 1..nx - 1 {
                    if (i + j) % 2 != color {
                        continue;
                    }
                    let (we, ww, wn, ws) = weights(i, j);
                    let gs = (we * r.values[idx(i + 1, j)]
                        + ww * r.values[idx(i - 1, j)]
                        + wn * r.values[idx(i, j + 1)]
                        + ws * r.values[idx(i, j - 1)])
                        / (we + ww + wn + ws);
                    let old = r.values[idx(i, j)];
                    r.values[idx(i, j)] = old + cfg.relaxation * (gs - old);
                }
            }
        }
        iterations += 1;
        // check the true divergence residual every few sweeps
        if iterations % 8 == 0 || iterations == cfg.max_iter {
            residual = divergence_residual(&r, &a, &b, ihx2, ihy2);
            if residual <= cfg.tol {
                break;
            }
        }
    }
    if residual > cfg.tol {
        residual = divergence_residual(&r, &a, &b, ihx2, ihy2);
    }
    Ok(SolveResult { converged: residual <= cfg.tol, iterations, residual, r })
}

fn divergence_residual(r: &FieldGrid<f64>, a: &[f64], b: &[f64], ihx2: f64, ihy2: f64) -> f64 {
    let (nx, ny) = (r.nx, r.ny);
    let idx = |i: usize, j: usize| j * nx + i;
    let mut worst = 0.0f64;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let we = 0.5 * (a[idx(i, j)] + a[idx(i + 1, j)]) * ihx2;
            let ww = 0.5 * (a[idx(i, j)] + a[idx(i - 1, j)]) * ihx2;
            let wn = 0.5 * (b[idx(i, j)] + b[idx(i, j + 1)]) * ihy2;
            let ws = 0.5 * (b[idx(i, j)] + b[idx(i, j - 1)]) * ihy2;
            let res = we * (r.values[idx(i + 1, j)] - r.values[idx(i, j)])
                - ww * (r.values[idx(i, j)] - r.values[idx(i - 1, j)])
                + wn * (r.values[idx(i, j + 1)] - r.values[idx(i, j)])
                - ws * (r.values[idx(i, j)] - r.values[idx(i, j - 1)]);
            worst = worst.max(res.abs());
        }
    }
    worst
}

/// S from trapezoidal path integration of the first-order system, anchored
/// at one node; also reports the path-independence (compatibility)
/// residual max |(S_ξ)_η − (S_η)_ξ|.
pub fn reconstruct_s(
    r: &FieldGrid<f64>,
    omega: &FieldGrid<f64>,
    anchor: (usize, usize),
    anchor_value: f64,
) -> Result<(FieldGrid<f64>, f64), BeltramiError> {
    if !r.same_geometry(omega) {
        return Err(BeltramiError::GeometryMismatch);
    }
    let rc = r.map(|&v| Complex64::new(v, 0.0));
    let (dz, dzb) = crate::verify::wirtinger(&rc);
    // R_ξ = Re(dz + dzb), R_η = Re(i (dz − dzb)) = Im(dzb − dz)... use
    // the real parts directly:
    let r_xi = |k: usize| (dz.values[k] + dzb.values[k]).re;
    let r_eta = |k: usize| (Complex64::i() * (dz.values[k] - dzb.values[k])).re;
    // S_ξ = −coth ω R_η, S_η = tanh ω R_ξ
    let p: Vec<f64> = (0..r.values.len()).map(|k| -r_eta(k) / omega.values[k].tanh()).collect();
    let q: Vec<f64> = (0..r.values.len()).map(|k| omega.values[k].tanh() * r_xi(k)).collect();

    let (nx, ny) = (r.nx, r.ny);
    let (hx, hy) = (r.hx(), r.hy());
    let idx = |i: usize, j: usize| j * nx + i;
    let mut s = r.map(|_| 0.0f64);
    let (ai, aj) = anchor;
    s.values[idx(ai, aj)] = anchor_value;
    // integrate along the anchor row ...
    for i in (0..ai).rev() {
        s.values[idx(i, aj)] =
            s.values[idx(i + 1, aj)] - 0.5 * hx * (p[idx(i, aj)] + p[idx(i + 1, aj)]);
    }
    for i in ai + 1..nx {
        s.values[idx(i, aj)] =
            s.values[idx(i - 1, aj)] + 0.5 * hx * (p[idx(i, aj)] + p[idx(i - 1, aj)]);
    }
    // ... then along each column
    for i in 0..nx {
        for j in (0..aj).rev() {
            s.values[idx(i, j)] =
                s.values[idx(i, j + 1)] - 0.5 * hy * (q[idx(i, j)] + q[idx(i, j + 1)]);
        }
        for j in aj + 1..ny {
            s.values[idx(i, j)] =
                s.values[idx(i, j - 1)] + 0.5 * hy * (q[idx(i, j)] + q[idx(i, j - 1)]);
        }
    }
    // compatibility: max |∂_η P − ∂_ξ Q| over interior nodes
    let mut compat = 0.0f64;
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let d_eta_p = (p[idx(i, j + 1)] - p[idx(i, j - 1)]) / (2.0 * hy);
            let d_xi_q = (q[idx(i + 1, j)] - q[idx(i - 1, j)]) / (2.0 * hx);
            compat = compat.max((d_eta_p - d_xi_q).abs());
        }
    }
    Ok((s, compat))
}

/// Max-norm of the first-order Beltrami residual e^ω u_ζ̄ − e^{−ω} u_ζ
/// over regular interior nodes, with central Wirtinger differences.
pub fn beltrami_residual(
    u: &FieldGrid<Complex64>,
    omega: &FieldGrid<f64>,
) -> Result<f64, BeltramiError> {
    let field = beltrami_residual_field(u, omega)?;
    let mut worst = 0.0f64;
    for k in 0..field.values.len() {
        if field.mask[k] {
            worst = worst.max(field.values[k]);
        }
    }
    Ok(worst)
}

/// Pointwise |e^ω u_ζ̄ − e^{−ω} u_ζ|; unevaluated nodes come back masked.
pub fn beltrami_residual_field(
    u: &FieldGrid<Complex64>,
    omega: &FieldGrid<f64>,
) -> Result<FieldGrid<f64>, BeltramiError> {
    if !u.same_geometry(omega) {
        return Err(BeltramiError::GeometryMismatch);
    }
    let (uz, uzb) = crate::verify::wirtinger(u);
    let mut out = omega.map(|_| 0.0f64);
    for k in 0..out.values.len() {
        out.mask[k] = false;
    }
    for j in 1..u.ny - 1 {
        for i in 1..u.nx - 1 {
            if !u.stencil_regular(i, j) {
                continue;
            }
            let k = u.idx(i, j);
            if !omega.mask[k] || !omega.values[k].is_finite() {
                continue;
            }
            let w = omega.values[k];
            let res = w.exp() * uzb.values[k] - (-w).exp() * uz.values[k];
            out.values[k] = res.norm();
            out.mask[k] = true;
        }
    }
    Ok(out)
}
