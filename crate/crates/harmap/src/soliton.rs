//! Closed-form one-soliton solutions omega(Y) of the elliptic sinh-Gordon
//! equation d²ω/dY² = -(2 K_N / ρ²) sinh 2ω in rotated coordinates
//! Z = ρ e^{-iτ} ζ, expressed through Jacobi elliptic functions.

use crate::elliptic::{self, EllipticError, Letter};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolitonError {
    #[error("target curvature must be -1, 0 or +1 (got {0})")]
    BadCurvature(i32),
    #[error("rho must be positive (got {0})")]
    BadRho(f64),
    #[error("first-integral constant C = {0} is not positive; only C > 0 branches are in scope")]
    NonPositiveC(f64),
    #[error("degenerate parameter m = 0 (boundary of the negative-curvature family)")]
    ZeroModulus,
    #[error("parameter m = {0} is negative; the real closed forms require m > 0")]
    NegativeModulus(f64),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// Parameters of a one-soliton solution, with the derived constants of
/// the closed forms.
///
/// C = ω₀′² + (4 K_N / ρ²) sinh²ω₀,  m = 1 + 4 K_N / (C ρ²),
/// M = 1 + (m − 1) cos²τ,  v₀ = sd⁻¹(√m sinh ω₀ | 1/m),
/// ε = sign ω₀′ (free sign, taken +1, when ω₀′ = 0).
#[derive(Debug, Clone, Copy)]
pub struct SolitonParams {
    pub k_n: i32,
    pub rho: f64,
    pub tau: f64,
    pub y0: f64,
    pub omega0: f64,
    pub domega0: f64,
    pub eps: f64,
    pub c: f64,
    pub m: f64,
    pub big_m: f64,
    pub v0: f64,
}

/// A scalar evaluation that may sit on a pole of the closed form
/// (ω → ±∞ where the map degenerates); `pole` is a quiet flag so grid
/// sweeps can mask singular nodes.
#[derive(Debug, Clone, Copy)]
pub struct FlaggedVal {
    pub value: f64,
    pub pole: bool,
}

impl FlaggedVal {
    fn regular(value: f64) -> Self {
        Self { value, pole: false }
    }
}

impl SolitonParams {
    pub fn new(
        k_n: i32,
        rho: f64,
        tau: f64,
        y0: f64,
        omega0: f64,
        domega0: f64,
    ) -> Result<Self, SolitonError> {
        if !matches!(k_n, -1 | 0 | 1) {
            return Err(SolitonError::BadCurvature(k_n));
        }
        if !(rho > 0.0) {
            return Err(SolitonError::BadRho(rho));
        }
        let kn = k_n as f64;
        let c = domega0 * domega0 + 4.0 * kn / (rho * rho) * omega0.sinh().powi(2);
        if !(c > 0.0) {
            return Err(SolitonError::NonPositiveC(c));
        }
        let m = 1.0 + 4.0 * kn / (c * rho * rho);
        if m == 0.0 {
            return Err(SolitonError::ZeroModulus);
        }
        if m < 0.0 {
            return Err(SolitonError::NegativeModulus(m));
        }
        let big_m = 1.0 + (m - 1.0) * tau.cos().powi(2);
        let eps = if domega0 == 0.0 { 1.0 } else { domega0.signum() };
        let v0 = if m == 1.0 {
            // sd(v | 1) = sinh v, so v0 = asinh(sinh ω₀) = ω₀
            omega0
        } else {
            elliptic::inverse_jacobi(Letter::S, Letter::D, m.sqrt() * omega0.sinh(), 1.0 / m)?
        };
        Ok(Self { k_n, rho, tau, y0, omega0, domega0, eps, c, m, big_m, v0 })
    }

    /// Elliptic argument v = ε√(Cm)(Y − Y₀) + v₀ of the closed forms.
    fn arg(&self, y: f64) -> f64 {
        self.eps * (self.c * self.m).sqrt() * (y - self.y0) + self.v0
    }
}

/// The rotated coordinate Z = ρ e^{-iτ} ζ.
pub fn rotate_coords(zeta: Complex64, p: &SolitonParams) -> Complex64 {
    p.rho * (Complex64::new(0.0, -p.tau)).exp() * zeta
}

/// Inverse of `rotate_coords`.
pub fn unrotate_coords(z: Complex64, p: &SolitonParams) -> Complex64 {
    z / (p.rho * (Complex64::new(0.0, -p.tau)).exp())
}

/// tanh ω = (1/√m) sn(v | 1/m); ω itself, pole-flagged where the argument
/// of arctanh reaches 1 (possible only for m < 1).
pub fn omega(y: f64, p: &SolitonParams) -> FlaggedVal {
    if p.m == 1.0 {
        return FlaggedVal::regular(p.omega0 + p.eps * p.c.sqrt() * (y - p.y0));
    }
    let s = elliptic::jacobi_sn_cn_dn(p.arg(y), 1.0 / p.m).sn / p.m.sqrt();
    let w = s.atanh();
    // |s| approaches 1 at the quarter-period poles of the m < 1 branch;
    // flag proximity as well as the exact pole so grid sweeps can mask
    // nodes where the map degenerates
    FlaggedVal { value: w, pole: !w.is_finite() || s.abs() >= 1.0 - 1e-12 }
}

/// ω′(Y) = ε√C cd(v | 1/m).
pub fn omega_prime(y: f64, p: &SolitonParams) -> FlaggedVal {
    if p.m == 1.0 {
        return FlaggedVal::regular(p.eps * p.c.sqrt());
    }
    let cd = elliptic::jacobi_pq(Letter::C, Letter::D, p.arg(y), 1.0 / p.m);
    FlaggedVal { value: p.eps * p.c.sqrt() * cd.value, pole: cd.pole }
}

/// (sinh ω, cosh ω) from the quotient forms
/// sinh ω = (1/√m) sd(v | 1/m), cosh ω = nd(v | 1/m).
pub fn sinh_cosh_omega(y: f64, p: &SolitonParams) -> (FlaggedVal, FlaggedVal) {
    if p.m == 1.0 {
        let w = omega(y, p).value;
        return (FlaggedVal::regular(w.sinh()), FlaggedVal::regular(w.cosh()));
    }
    let v = p.arg(y);
    let sd = elliptic::jacobi_pq(Letter::S, Letter::D, v, 1.0 / p.m);
    let nd = elliptic::jacobi_pq(Letter::N, Letter::D, v, 1.0 / p.m);
    (
        FlaggedVal { value: sd.value / p.m.sqrt(), pole: sd.pole },
        FlaggedVal { value: nd.value, pole: nd.pole },
    )
}

/// Max finite-difference residual of d²ω/dY² + (2 K_N / ρ²) sinh 2ω = 0
/// over the sample list (pole-flagged samples are skipped).
pub fn sinh_gordon_residual(p: &SolitonParams, ys: &[f64], h: f64) -> f64 {
    let coeff = 2.0 * p.k_n as f64 / (p.rho * p.rho);
    let mut worst = 0.0f64;
    for &y in ys {
        let wm = omega(y - h, p);
        let w0 = omega(y, p);
        let wp = omega(y + h, p);
        if wm.pole || w0.pole || wp.pole {
            continue;
        }
        let second = (wp.value - 2.0 * w0.value + wm.value) / (h * h);
        worst = worst.max((second + coeff * (2.0 * w0.value).sinh()).abs());
    }
    worst
}

/// |(ω′/√C)² + (m − 1) sinh²ω − 1|, the first-integral invariant.
pub fn first_integral_residual(y: f64, p: &SolitonParams) -> Option<f64> {
    let wp = omega_prime(y, p);
    let (sh, _) = sinh_cosh_omega(y, p);
    if wp.pole || sh.pole {
        return None;
    }
    let lhs = (wp.value / p.c.sqrt()).powi(2) + (p.m - 1.0) * sh.value * sh.value;
    Some((lhs - 1.0).abs())
}
