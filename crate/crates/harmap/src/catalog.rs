//! Closed-form harmonic-map families between constant-curvature surfaces:
//! the hyperbolic-cylinder maps (boundary-value ODE plus an equivalent
//! elliptic-function form), the half-infinite-cylinder family, the
//! quasi-conformal strip maps, and the half-plane pair. Each family is
//! built along an independent path (shooting, quadrature, root-finding)
//! so the elliptic closed forms can be cross-checked.

use crate::elliptic::{complete_k, jacobi_sn_cn_dn};
use crate::grid::FieldGrid;
use crate::ode::{rk4_path, Rk4Path};
use crate::quad::adaptive_simpson;
use crate::roots::{bisect, RootError};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("shooting bracket [{0}, {1}] does not enclose the boundary value")]
    ShootingBracket(f64, f64),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Elliptic(#[from] crate::elliptic::EllipticError),
}

// ---------------------------------------------------------------------------
// Cylinder maps u(x, y) = y + i t arctan(sinh u(x)).

/// Two-point boundary-value solution of u″ = (1/2t²) sinh 2u with
/// u(0) = 0 and u(1) = arccosh t, solved by shooting on u′(0).
pub struct WolfSolution {
    pub t: f64,
    /// first-integral constant: (u′t)² = sinh²u + ½ + c₀
    pub c0: f64,
    pub du0: f64,
    path: Rk4Path<2>,
}

fn wolf_shoot(t: f64, du0: f64, step: f64) -> Rk4Path<2> {
    let coeff = 1.0 / (2.0 * t * t);
    rk4_path(|_, y: &[f64; 2]| [y[1], coeff * (2.0 * y[0]).sinh()], 0.0, [0.0, du0], 1.0, step)
}

pub fn wolf_solve(t: f64, step: f64) -> Result<WolfSolution, CatalogError> {
    if t <= 1.0 {
        return Err(CatalogError::BadParameter(format!("t = {t} must exceed 1")));
    }
    let target = t.acosh();
    let end = |s: f64| wolf_shoot(t, s, step).end_state()[0] - target;
    // u(1) is increasing in u′(0); scan upward for a sign change
    let mut lo = 1e-3;
    let mut hi = lo;
    let mut f_hi = end(hi);
    if f_hi > 0.0 {
        return Err(CatalogError::ShootingBracket(0.0, lo));
    }
    loop {
        hi *= 2.0;
        f_hi = end(hi);
        if f_hi > 0.0 {
            break;
        }
        lo = hi;
        if hi > 1e6 {
            return Err(CatalogError::ShootingBracket(lo, hi));
        }
    }
    let du0 = bisect(end, lo, hi, 1e-14, 200)?;
    let path = wolf_shoot(t, du0, step);
    let c0 = (du0 * t).powi(2) - 0.5;
    Ok(WolfSolution { t, c0, du0, path })
}

impl WolfSolution {
    /// u(x) on [−1, 1] via the odd extension u(−x) = −u(x).
    pub fn u(&self, x: f64) -> f64 {
        x.signum() * self.path.eval(x.abs())[0]
    }

    pub fn du(&self, x: f64) -> f64 {
        self.path.eval(x.abs())[1]
    }

    /// The cylinder map in strip coordinates: u(x, y) = y + i t arctan(sinh u(x)).
    pub fn map(&self, x: f64, y: f64) -> Complex64 {
        Complex64::new(y, self.t * self.u(x).sinh().atan())
    }

    pub fn map_grid(&self, grid: &FieldGrid<f64>) -> FieldGrid<Complex64> {
        FieldGrid::from_fn(grid.nx, grid.ny, grid.x_range, grid.y_range, |x, y| self.map(x, y))
    }

    /// max |(u′t)² − sinh²u − ½ − c₀| along the stored trajectory.
    pub fn first_integral_drift(&self) -> f64 {
        let t2 = self.t * self.t;
        self.path
            .ys
            .iter()
            .map(|y| (t2 * y[1] * y[1] - y[0].sinh().powi(2) - 0.5 - self.c0).abs())
            .fold(0.0, f64::max)
    }

    /// Constant value of the Hopf differential e^F u_z ū_z.
    pub fn hopf(&self) -> f64 {
        (self.c0 - 0.5) / (4.0 * self.t * self.t)
    }
}

/// The same cylinder map through the elliptic closed form of the
/// one-soliton family. The published constants display mixes the two
/// first-integral conventions (for u′ and for u′t); in the (u′t)²
/// convention used by `WolfSolution` the dictionary is k = c₀ − ½,
/// m = 1 + k, α = −2t/√k, τ = −π/2, M = 1, with dn modulus (m−1)/m.
pub struct WolfSolitonForm {
    pub t: f64,
    pub c0: f64,
    pub k: f64,
    pub m: f64,
    pub alpha: f64,
    /// dn modulus (m−1)/m
    pub kappa: f64,
    /// complete quarter period K(kappa)
    pub big_k: f64,
}

pub fn wolf_as_soliton(t: f64, c0: f64) -> Result<WolfSolitonForm, CatalogError> {
    let k = c0 - 0.5;
    if k <= 0.0 {
        return Err(CatalogError::BadParameter(format!("c0 = {c0} must exceed 1/2")));
    }
    let m = 1.0 + k;
    let kappa = (m - 1.0) / m;
    let big_k = complete_k(kappa)?;
    Ok(WolfSolitonForm { t, c0, k, m, alpha: -2.0 * t / k.sqrt(), kappa, big_k })
}

impl WolfSolitonForm {
    /// domain chart of the soliton form: (ξ, η) = (√k/2t)(x, y)
    pub fn xi(&self, x: f64) -> f64 {
        self.k.sqrt() / (2.0 * self.t) * x
    }

    /// tanh ω(x) = −dn(√m·x/t + K | (m−1)/m); negative because the
    /// cylinder map reverses orientation (|μ| > 1).
    pub fn tanh_omega(&self, x: f64) -> f64 {
        let j = jacobi_sn_cn_dn(self.m.sqrt() * x / self.t + self.big_k, self.kappa);
        -j.dn
    }

    /// sinh u recovered from dn alone: sinh²u = (m dn² − 1)/(1 − dn²).
    pub fn sinh_u(&self, x: f64) -> f64 {
        let j = jacobi_sn_cn_dn(self.m.sqrt() * x / self.t + self.big_k, self.kappa);
        let dn2 = j.dn * j.dn;
        let num = (self.m * dn2 - 1.0).max(0.0);
        x.signum() * (num / (1.0 - dn2)).sqrt()
    }

    /// S-component t·arctan(sinh u(x)), entirely from elliptic functions.
    pub fn s_component(&self, x: f64) -> f64 {
        self.t * self.sinh_u(x).atan()
    }

    /// Full map: R = α·X with X = −η, so R = y in strip coordinates.
    pub fn map(&self, x: f64, y: f64) -> Complex64 {
        Complex64::new(self.alpha * -self.xi(y), self.s_component(x))
    }
}

// ---------------------------------------------------------------------------
// Half-infinite-cylinder family u(x, y) = x + i v_c(y).

/// v_c(y) = (1/√c) sinh(√c(y−1) + arcsinh √c): v_c(1) = 1 and
/// v v″ − (v′)² + 1 = 0.
pub fn half_cylinder_v(c: f64, y: f64) -> f64 {
    let s = c.sqrt();
    (s * (y - 1.0) + s.asinh()).sinh() / s
}

pub fn half_cylinder_dv(c: f64, y: f64) -> f64 {
    let s = c.sqrt();
    (s * (y - 1.0) + s.asinh()).cosh()
}

pub fn half_cylinder_map(c: f64, grid: &FieldGrid<f64>) -> Result<FieldGrid<Complex64>, CatalogError> {
    if c <= 0.0 {
        return Err(CatalogError::BadParameter(format!("c = {c} must be positive")));
    }
    if grid.y_range.0 < 1.0 {
        return Err(CatalogError::BadParameter("half-cylinder chart needs y >= 1".into()));
    }
    Ok(FieldGrid::from_fn(grid.nx, grid.ny, grid.x_range, grid.y_range, |x, y| {
        Complex64::new(x, half_cylinder_v(c, y))
    }))
}

/// Analytic residual of v v″ − (v′)² + 1 at a point.
pub fn half_cylinder_ode_residual(c: f64, y: f64) -> f64 {
    let v = half_cylinder_v(c, y);
    let dv = half_cylinder_dv(c, y);
    let ddv = c * v;
    v * ddv - dv * dv + 1.0
}

/// Beltrami coefficient of the family: μ = (1 − v′)/(1 + v′) ∈ (−1, 0)
/// (the reciprocal form sometimes quoted has modulus > 1 and cannot be a
/// diffeomorphism coefficient).
pub fn half_cylinder_mu(c: f64, y: f64) -> f64 {
    let dv = half_cylinder_dv(c, y);
    (1.0 - dv) / (1.0 + dv)
}

// ---------------------------------------------------------------------------
// Strip maps u = αx + h(y) + i g(y).

/// Parameters of the quasi-conformal strip family: α = R_x, a = h′(π/2),
/// b = g′(π/2), with the quartic α²z⁴ + c²z² + b² factored through
/// w₁ ≤ 1 ≤ w₂.
#[derive(Debug, Clone)]
pub struct StwParams {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub c2: f64,
    pub w1: f64,
    pub w2: f64,
    /// modulus 1 − w₁²/w₂² of the dn/cs forms
    pub m_cs: f64,
}

impl StwParams {
    pub fn new(alpha: f64, a: f64, b: f64) -> Result<Self, CatalogError> {
        if alpha <= 0.0 || a <= 0.0 || b <= 0.0 {
            return Err(CatalogError::BadParameter(
                "strip parameters alpha, a, b must be positive".into(),
            ));
        }
        let c2 = alpha * alpha + b * b + a.powi(4);
        let disc = c2 * c2 - 4.0 * alpha * alpha * b * b;
        if disc < 0.0 {
            return Err(CatalogError::BadParameter("quartic has no real factorization".into()));
        }
        let w1 = ((c2 - disc.sqrt()) / (2.0 * alpha * alpha)).sqrt();
        let w2 = ((c2 + disc.sqrt()) / (2.0 * alpha * alpha)).sqrt();
        if !(w1 <= 1.0 && w2 >= 1.0) {
            return Err(CatalogError::BadParameter(format!(
                "factorization must straddle 1: w1 = {w1}, w2 = {w2}"
            )));
        }
        Ok(Self { alpha, a, b, c2, w1, w2, m_cs: 1.0 - (w1 / w2).powi(2) })
    }
}

/// Mismatch K(1 − w₁²/w₂²) − αw₂·π/2 of the period-matching condition:
/// S(y) = arccot(w₂ cs(αw₂y | 1 − w₁²/w₂²)) sweeps (0, π) exactly when
/// the full period 2K of cs spans the strip height, αw₂π = 2K. Zero
/// selects the family member mapping strip to strip.
pub fn stw_quarter_period_mismatch(alpha: f64, a: f64, b: f64) -> Result<f64, CatalogError> {
    let p = StwParams::new(alpha, a, b)?;
    Ok(complete_k(p.m_cs)? - alpha * p.w2 * std::f64::consts::FRAC_PI_2)
}

/// Root of the quarter-period mismatch in b at fixed (α, a).
pub fn stw_find_b(alpha: f64, a: f64, bracket: (f64, f64)) -> Result<f64, CatalogError> {
    let f = |b: f64| stw_quarter_period_mismatch(alpha, a, b).unwrap_or(f64::NAN);
    Ok(bisect(f, bracket.0, bracket.1, 1e-13, 200)?)
}

/// S(y) = arccot(w₂ cs(αw₂y | m)) with the continuous arccot branch in
/// (0, π); y must stay inside the open interval (0, π).
pub fn stw_s(p: &StwParams, y: f64) -> f64 {
    let j = jacobi_sn_cn_dn(p.alpha * p.w2 * y, p.m_cs);
    std::f64::consts::FRAC_PI_2 - (p.w2 * j.cn / j.sn).atan()
}

/// Closed-form ∂S/∂y = αw₂² dn/(w₂² + (1 − w₂²) sn²).
pub fn stw_ds_dy(p: &StwParams, y: f64) -> f64 {
    let j = jacobi_sn_cn_dn(p.alpha * p.w2 * y, p.m_cs);
    p.alpha * p.w2 * p.w2 * j.dn / (p.w2 * p.w2 + (1.0 - p.w2 * p.w2) * j.sn * j.sn)
}

/// h(y) = ∫_{π/2}^{y} a² sin²S, the shear component of R = αx + h(y).
pub fn stw_h(p: &StwParams, y: f64) -> f64 {
    let f = |s: f64| p.a * p.a * stw_s(p, s).sin().powi(2);
    adaptive_simpson(&f, std::f64::consts::FRAC_PI_2, y, 1e-12)
}

/// tanh ω(y) = dn(αw₂y | m), the closed-form distortion profile.
pub fn stw_tanh_omega(p: &StwParams, y: f64) -> f64 {
    jacobi_sn_cn_dn(p.alpha * p.w2 * y, p.m_cs).dn
}

/// cot S recovered by inverting the quadrature
/// ∫₀^z dz/(α√((z²+w₁²)(z²+w₂²))) = π/2 − y, as an independent check of
/// the cs closed form.
pub fn stw_cot_s_from_quadrature(p: &StwParams, y: f64) -> Result<f64, CatalogError> {
    let integral = |z: f64| {
        let f = |s: f64| {
            1.0 / (p.alpha * ((s * s + p.w1 * p.w1) * (s * s + p.w2 * p.w2)).sqrt())
        };
        adaptive_simpson(&f, 0.0, z, 1e-13)
    };
    let target = std::f64::consts::FRAC_PI_2 - y;
    // the integral is odd and increasing in z, so bracket by doubling
    let mut hi = 1.0f64;
    while integral(hi.copysign(target)).abs() < target.abs() {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(CatalogError::BadParameter("quadrature inversion out of range".into()));
        }
    }
    Ok(bisect(|z| integral(z) - target, -hi, hi, 1e-13, 200)?)
}

pub fn stw_map(p: &StwParams, grid: &FieldGrid<f64>) -> Result<FieldGrid<Complex64>, CatalogError> {
    let mismatch = stw_quarter_period_mismatch(p.alpha, p.a, p.b)?;
    if mismatch.abs() > 1e-8 {
        return Err(CatalogError::BadParameter(format!(
            "quarter-period condition violated by {mismatch}"
        )));
    }
    if grid.y_range.0 <= 0.0 || grid.y_range.1 >= std::f64::consts::PI {
        return Err(CatalogError::BadParameter("strip chart needs 0 < y < pi".into()));
    }
    // column-constant h and S: evaluate once per row. h is accumulated
    // with a fixed-order panel rule between consecutive rows so the
    // quadrature error varies smoothly in j (independent adaptive calls
    // would leave row-to-row jitter that FD second differences amplify)
    let integrand = |y: f64| p.a * p.a * stw_s(p, y).sin().powi(2);
    let panel = |lo: f64, hi: f64| {
        // composite Simpson, 4 subintervals
        let n = 4;
        let w = (hi - lo) / n as f64;
        let mut acc = integrand(lo) + integrand(hi);
        for k in 1..n {
            let c = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += c * integrand(lo + w * k as f64);
        }
        acc * w / 3.0
    };
    let mut h = vec![0.0f64; grid.ny];
    h[0] = stw_h(p, grid.y(0));
    for j in 1..grid.ny {
        h[j] = h[j - 1] + panel(grid.y(j - 1), grid.y(j));
    }
    let s: Vec<f64> = (0..grid.ny).map(|j| stw_s(p, grid.y(j))).collect();
    let mut out = FieldGrid::from_fn(grid.nx, grid.ny, grid.x_range, grid.y_range, |_, _| {
        Complex64::new(0.0, 0.0)
    });
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            *out.at_mut(i, j) = Complex64::new(p.alpha * grid.x(i) + h[j], s[j]);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Half-plane pair.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LitamForm {
    /// u = x + (i/a) sinh(ay) on y > 0
    Z,
    /// u = 2η/a − (i/a) sinh 2ξ with μ = tanh²ξ; ξ < 0 maps into the
    /// upper half-plane
    Zeta,
}

pub fn litam_point(a: f64, x: f64, y: f64, form: LitamForm) -> Complex64 {
    match form {
        LitamForm::Z => Complex64::new(x, (a * y).sinh() / a),
        LitamForm::Zeta => Complex64::new(2.0 * y / a, -(2.0 * x).sinh() / a),
    }
}

pub fn litam_map(
    a: f64,
    grid: &FieldGrid<f64>,
    form: LitamForm,
) -> Result<FieldGrid<Complex64>, CatalogError> {
    if a <= 0.0 {
        return Err(CatalogError::BadParameter(format!("a = {a} must be positive")));
    }
    match form {
        LitamForm::Z if grid.y_range.0 <= 0.0 => {
            return Err(CatalogError::BadParameter("z-form needs y > 0".into()))
        }
        LitamForm::Zeta if grid.x_range.1 >= 0.0 => {
            return Err(CatalogError::BadParameter(
                "zeta-form into the upper half-plane needs xi < 0".into(),
            ))
        }
        _ => {}
    }
    Ok(FieldGrid::from_fn(grid.nx, grid.ny, grid.x_range, grid.y_range, |x, y| {
        litam_point(a, x, y, form)
    }))
}

/// Distortion profile of the half-plane pair: ω = −log |tanh ξ|.
pub fn litam_omega(xi: f64) -> f64 {
    -xi.tanh().abs().ln()
}
