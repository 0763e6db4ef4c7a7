//! Closed-form one-soliton harmonic map u = R + iS, its derivatives and
//! the constant-curvature target metric density.
//!
//! In the rotated coordinates Z = X + iY the map is
//!   u = R₀ + iS₀ + α (X − X₀ + i ∫ tanh(ω(t) + iτ) dt),
//! so R_X = α, S_X = 0 and the Y-derivatives have both a trigonometric
//! form in (τ, ω) and an elliptic form in ω′. The elliptic
//! antiderivatives depend on the parameter branch:
//!   m > 1  : third-kind integral Π for R, arctanh of ω′/√(CM) for S,
//!   m = 1  : elementary arctan / log antiderivatives,
//!   m < 1  : arccoth branch for S (|ω′| > √(CM) there), adaptive
//!            quadrature for R.

use crate::elliptic::{self, EllipticError};
use crate::quad::adaptive_simpson;
use crate::soliton::{self, SolitonParams};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("alpha must be nonzero")]
    ZeroAlpha,
    #[error("closed form evaluated on a singular node (omega pole) at Y = {0}")]
    Pole(f64),
    #[error("arctanh branch violated at Y = {0}: |omega'| reaches sqrt(C M)")]
    BranchViolation(f64),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
}

/// One-soliton map parameters: the underlying sinh-Gordon soliton plus
/// the map scale α and the affine offsets.
#[derive(Debug, Clone, Copy)]
pub struct MapParams {
    pub soliton: SolitonParams,
    pub alpha: f64,
    pub x0: f64,
    pub r0: f64,
    pub s0: f64,
    /// K(1/m), cached for the Π closed form (only defined for m > 1).
    pub k_recip: Option<f64>,
}

/// Value and first derivatives of the map at one node, with the metric
/// density; `masked` marks nodes where the closed form is singular.
#[derive(Debug, Clone, Copy)]
pub struct MapSample {
    pub xi: f64,
    pub eta: f64,
    pub r: f64,
    pub s: f64,
    /// (R_ξ, R_η)
    pub dr: (f64, f64),
    /// (S_ξ, S_η)
    pub ds: (f64, f64),
    pub omega: f64,
    pub e_f: f64,
    pub masked: bool,
}

impl MapParams {
    pub fn new(
        soliton: SolitonParams,
        alpha: f64,
        x0: f64,
        r0: f64,
        s0: f64,
    ) -> Result<Self, MapError> {
        if alpha == 0.0 {
            return Err(MapError::ZeroAlpha);
        }
        let k_recip = if soliton.m > 1.0 {
            Some(elliptic::complete_k(1.0 / soliton.m)?)
        } else {
            None
        };
        Ok(Self { soliton, alpha, x0, r0, s0, k_recip })
    }

    fn sqrt_c_big_m(&self) -> f64 {
        (self.soliton.c * self.soliton.big_m).sqrt()
    }
}

/// S(Y) from the elliptic antiderivative of ∂S/∂Y.
pub fn map_s(y: f64, mp: &MapParams) -> Result<f64, MapError> {
    let p = &mp.soliton;
    if p.m == 1.0 {
        // ∫ α sinh ω cosh ω / (cos²τ + sinh²ω) dY with ω linear in Y
        let w = soliton::omega(y, p).value;
        let c2 = p.tau.cos().powi(2);
        let num = c2 + w.sinh().powi(2);
        let den = c2 + p.omega0.sinh().powi(2);
        return Ok(mp.s0 + mp.alpha / (2.0 * p.eps * p.c.sqrt()) * (num / den).ln());
    }
    let scm = mp.sqrt_c_big_m();
    let wp = soliton::omega_prime(y, p);
    if wp.pole {
        return Err(MapError::Pole(y));
    }
    let x = wp.value / scm;
    let x0 = p.domega0 / scm;
    let diff = if p.m > 1.0 {
        if x.abs() >= 1.0 {
            return Err(MapError::BranchViolation(y));
        }
        x.atanh() - x0.atanh()
    } else {
        // m < 1: |ω′| > √(CM) everywhere on the trajectory
        (1.0 / x).atanh() - (1.0 / x0).atanh()
    };
    Ok(mp.s0 - mp.alpha / scm * diff)
}

/// R(X, Y): α(X − X₀) plus the elliptic Π term (absent for sin τ cos τ = 0).
pub fn map_r(x: f64, y: f64, mp: &MapParams) -> Result<f64, MapError> {
    let p = &mp.soliton;
    let base = mp.r0 + mp.alpha * (x - mp.x0);
    let sc = p.tau.sin() * p.tau.cos();
    if sc.abs() < 1e-15 {
        return Ok(base);
    }
    if p.m == 1.0 {
        let w = soliton::omega(y, p).value;
        let t = p.tau.tan();
        let term = (t * w.tanh()).atan() - (t * p.omega0.tanh()).atan();
        return Ok(base - mp.alpha / (p.eps * p.c.sqrt()) * term);
    }
    if p.m > 1.0 {
        let k = mp.k_recip.expect("cached K(1/m) for m > 1");
        let sqrt_cm = (p.c * p.m).sqrt();
        let v = p.eps * sqrt_cm * (y - p.y0) + p.v0;
        let n = 1.0 / p.big_m;
        let pi_v = elliptic::ellint_pi(n, v + k, 1.0 / p.m)?;
        let pi_v0 = elliptic::ellint_pi(n, p.v0 + k, 1.0 / p.m)?;
        let coeff = p.eps / sqrt_cm * (p.m - 1.0) * mp.alpha * sc / p.big_m;
        return Ok(base - coeff * (pi_v - pi_v0));
    }
    // m < 1: the Π characteristic 1/M exceeds 1, so integrate the
    // ω′-form of ∂R/∂Y directly; the integrand stays bounded across
    // ω-poles (it vanishes there)
    let integrand = |t: f64| {
        let (sh, _) = soliton::sinh_cosh_omega(t, p);
        let den = p.tau.cos().powi(2) + sh.value * sh.value;
        if den.is_finite() {
            -mp.alpha * sc / den
        } else {
            0.0
        }
    };
    Ok(base + adaptive_simpson(&integrand, p.y0, y, 1e-12))
}

/// ∂R/∂Y, elliptic (ω′) form; falls back to the trigonometric form at
/// m = 1 where the elliptic form is 0/0.
pub fn dr_dy(y: f64, mp: &MapParams) -> Result<f64, MapError> {
    let p = &mp.soliton;
    if p.m == 1.0 {
        return dr_dy_trig(y, mp);
    }
    let wp = soliton::omega_prime(y, p);
    if wp.pole {
        return Err(MapError::Pole(y));
    }
    let d = 1.0 - (wp.value / mp.sqrt_c_big_m()).powi(2);
    Ok(-(p.m - 1.0) * p.tau.sin() * p.tau.cos() / p.big_m * mp.alpha / d)
}

/// ∂R/∂Y, trigonometric/hyperbolic form.
pub fn dr_dy_trig(y: f64, mp: &MapParams) -> Result<f64, MapError> {
    let p = &mp.soliton;
    let w = soliton::omega(y, p);
    if w.pole {
        return Err(MapError::Pole(y));
    }
    let th = w.value.tanh();
    let t = p.tau.tan();
    Ok(-mp.alpha * (1.0 - th * th) * t / (1.0 + t * t * th * th))
}

/// ∂S/∂Y, elliptic (ω″) form; trigonometric form at m = 1.
pub fn ds_dy(y: f64, mp: &MapParams) -> Result<f64, MapError> {
    let p = &mp.soliton;
    if p.m == 1.0 {
        return ds_dy_trig(y, mp);
    }
    let wp = soliton::omega_prime(y, p);
    let (sh, ch) = soliton::sinh_cosh_omega(y, p);
    if wp.pole || sh.pole {
        return Err(MapError::Pole(y));
    }
    // ω″ from the sinh-Gordon equation itself
    let wpp = -2.0 * p.k_n as f64 / (p.rho * p.rho) * 2.0 * sh.value * ch.value;
    let d = 1.0 - (wp.value / mp.sqrt_c_big_m()).powi(2);
    Ok(-mp.alpha / (p.c * p.big_m) * wpp / d)
}

/// ∂S/∂Y, trigonometric/hyperbolic form.
pub fn ds_dy_trig(y: f64, mp: &MapParams) -> Result<f64, MapError> {
    let p = &mp.soliton;
    let w = soliton::omega(y, p);
    if w.pole {
        return Err(MapError::Pole(y));
    }
    let th = w.value.tanh();
    let t = p.tau.tan();
    Ok(mp.alpha * (1.0 + t * t) * th / (1.0 + t * t * th * th))
}

/// Metric density e^F as a function of the target ordinate S:
/// e^F = 4M / ((m−1) α² ρ² cosh²Σ) with Σ the arctanh antiderivative
/// variable (arccoth/sinh form on the m < 1 branch, elementary closed
/// form at m = 1).
pub fn metric_density(s: f64, mp: &MapParams) -> Result<f64, MapError> {
    let p = &mp.soliton;
    let a2r2 = mp.alpha * mp.alpha * p.rho * p.rho;
    if p.m == 1.0 {
        // invert the m = 1 closed form of S to recover cos²τ + sinh²ω
        let den = p.tau.cos().powi(2) + p.omega0.sinh().powi(2);
        let g = den * (2.0 * p.eps * p.c.sqrt() / mp.alpha * (s - mp.s0)).exp();
        return Ok(4.0 / a2r2 * g);
    }
    let scm = mp.sqrt_c_big_m();
    let x0 = p.domega0 / scm;
    if p.m > 1.0 {
        let sigma = scm / mp.alpha * (mp.s0 - s) + x0.atanh();
        Ok(4.0 * p.big_m / ((p.m - 1.0) * a2r2 * sigma.cosh().powi(2)))
    } else {
        let sigma = scm / mp.alpha * (mp.s0 - s) + (1.0 / x0).atanh();
        Ok(-4.0 * p.big_m / ((p.m - 1.0) * a2r2 * sigma.sinh().powi(2)))
    }
}

/// Metric density from the hyperbolic form
/// e^F = (4/(α²ρ²)) (cos²τ cosh²ω + sin²τ sinh²ω), as a function of Y.
pub fn metric_density_from_omega(y: f64, mp: &MapParams) -> Result<f64, MapError> {
    let p = &mp.soliton;
    let (sh, ch) = soliton::sinh_cosh_omega(y, p);
    if sh.pole {
        return Err(MapError::Pole(y));
    }
    let val = 4.0 / (mp.alpha * mp.alpha * p.rho * p.rho)
        * (p.tau.cos().powi(2) * ch.value * ch.value + p.tau.sin().powi(2) * sh.value * sh.value);
    Ok(val)
}

/// The conformal chart ζ = e^{−λ/2} z for constant λ.
pub fn specific_coords(z: Complex64, lambda: Complex64) -> Complex64 {
    (-lambda / 2.0).exp() * z
}

/// Evaluate the map at one (ξ, η) node: values, chain-rule derivatives
/// and metric density. Singular nodes come back masked.
pub fn map_sample(xi: f64, eta: f64, mp: &MapParams) -> MapSample {
    let p = &mp.soliton;
    let z = soliton::rotate_coords(Complex64::new(xi, eta), p);
    let (x, y) = (z.re, z.im);
    let masked_sample = |r: f64, s: f64, w: f64| MapSample {
        xi,
        eta,
        r,
        s,
        dr: (f64::NAN, f64::NAN),
        ds: (f64::NAN, f64::NAN),
        omega: w,
        e_f: f64::NAN,
        masked: true,
    };
    let w = soliton::omega(y, p);
    if w.pole {
        return masked_sample(f64::NAN, f64::NAN, w.value);
    }
    let (r, s, ry, sy, ef) = match (
        map_r(x, y, mp),
        map_s(y, mp),
        dr_dy(y, mp),
        ds_dy(y, mp),
        metric_density_from_omega(y, mp),
    ) {
        (Ok(r), Ok(s), Ok(ry), Ok(sy), Ok(ef)) => (r, s, ry, sy, ef),
        _ => return masked_sample(f64::NAN, f64::NAN, w.value),
    };
    // chain rule through X = ρ(ξ cos τ + η sin τ), Y = ρ(−ξ sin τ + η cos τ)
    let (ct, st) = (p.tau.cos(), p.tau.sin());
    let rx = mp.alpha;
    let dr = (p.rho * (rx * ct - ry * st), p.rho * (rx * st + ry * ct));
    let ds = (p.rho * (-sy * st), p.rho * (sy * ct));
    MapSample { xi, eta, r, s, dr, ds, omega: w.value, e_f: ef, masked: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    fn fixture(tau: f64) -> MapParams {
        let p = SolitonParams::new(1, 2.0, tau, 0.0, 0.0, 1.0).unwrap();
        MapParams::new(p, 1.0, 0.0, 0.0, 0.0).unwrap()
    }

    /// Quadrature oracle for S from the trigonometric ∂S/∂Y.
    fn s_quad(y: f64, mp: &MapParams) -> f64 {
        mp.s0
            + adaptive_simpson(
                &|t: f64| ds_dy_trig(t, mp).unwrap(),
                mp.soliton.y0,
                y,
                1e-13,
            )
    }

    /// Quadrature oracle for the Y-part of R.
    fn r_quad(x: f64, y: f64, mp: &MapParams) -> f64 {
        mp.r0
            + mp.alpha * (x - mp.x0)
            + adaptive_simpson(
                &|t: f64| dr_dy_trig(t, mp).unwrap(),
                mp.soliton.y0,
                y,
                1e-13,
            )
    }

    #[test]
    fn map_s_initial_value_and_oracle() {
        let mp = fixture(0.0);
        assert_abs_diff_eq!(map_s(mp.soliton.y0, &mp).unwrap(), mp.s0);
        // M = m = 2 fixture of the closed form vs quadrature
        assert_abs_diff_eq!(map_s(0.5, &mp).unwrap(), s_quad(0.5, &mp), epsilon = 1e-8);
        let mp = fixture(FRAC_PI_4);
        for &y in &[0.3, 0.9, -0.7] {
            assert_abs_diff_eq!(map_s(y, &mp).unwrap(), s_quad(y, &mp), epsilon = 1e-8);
        }
    }

    #[test]
    fn map_r_initial_value_and_oracle() {
        let mp = fixture(FRAC_PI_4);
        assert_abs_diff_eq!(map_r(mp.x0, mp.soliton.y0, &mp).unwrap(), mp.r0);
        assert_abs_diff_eq!(map_r(0.0, 0.5, &mp).unwrap(), r_quad(0.0, 0.5, &mp), epsilon = 1e-8);
        for &y in &[0.3, 1.1, -0.8] {
            assert_abs_diff_eq!(map_r(0.2, y, &mp).unwrap(), r_quad(0.2, y, &mp), epsilon = 1e-8);
        }
    }

    #[test]
    fn map_r_is_linear_without_rotation() {
        // sin τ cos τ = 0 kills the Π term
        for tau in [0.0, std::f64::consts::FRAC_PI_2] {
            let p = SolitonParams::new(1, 2.0, tau, 0.0, 0.3, 1.0).unwrap();
            let mp = MapParams::new(p, 1.3, 0.1, 0.2, 0.0).unwrap();
            for &(x, y) in &[(0.0, 0.5), (1.0, -0.4)] {
                assert_abs_diff_eq!(
                    map_r(x, y, &mp).unwrap(),
                    mp.r0 + mp.alpha * (x - mp.x0),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn derivative_forms_agree() {
        let mp = fixture(FRAC_PI_4);
        for i in 0..100 {
            let y = -1.2 + 2.4 * i as f64 / 99.0;
            assert_abs_diff_eq!(dr_dy(y, &mp).unwrap(), dr_dy_trig(y, &mp).unwrap(), epsilon = 1e-10);
            assert_abs_diff_eq!(ds_dy(y, &mp).unwrap(), ds_dy_trig(y, &mp).unwrap(), epsilon = 1e-10);
        }
    }

    #[test]
    fn derivative_trivial_zeros() {
        let mp = fixture(0.0);
        assert_abs_diff_eq!(dr_dy(0.7, &mp).unwrap(), 0.0, epsilon = 1e-14);
        // ω(Y₀) = 0 kills the tanh factor of ∂S/∂Y
        let mp = fixture(FRAC_PI_4);
        assert_abs_diff_eq!(ds_dy(mp.soliton.y0, &mp).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_forms_match_finite_differences() {
        let mp = fixture(FRAC_PI_4);
        let h = 1e-5;
        for &y in &[0.4, -0.9, 1.3] {
            let fd_s = (map_s(y + h, &mp).unwrap() - map_s(y - h, &mp).unwrap()) / (2.0 * h);
            assert_abs_diff_eq!(fd_s, ds_dy(y, &mp).unwrap(), epsilon = 1e-7);
            let fd_r = (map_r(0.0, y + h, &mp).unwrap() - map_r(0.0, y - h, &mp).unwrap()) / (2.0 * h);
            assert_abs_diff_eq!(fd_r, dr_dy(y, &mp).unwrap(), epsilon = 1e-7);
        }
    }

    #[test]
    fn flat_branch_closed_forms() {
        let p = SolitonParams::new(0, 1.5, 0.5, 0.1, 0.4, 0.9).unwrap();
        let mp = MapParams::new(p, 1.2, 0.0, 0.0, 0.0).unwrap();
        for &y in &[0.4, 1.0, -0.6] {
            assert_abs_diff_eq!(map_s(y, &mp).unwrap(), s_quad(y, &mp), epsilon = 1e-10);
            assert_abs_diff_eq!(map_r(0.3, y, &mp).unwrap(), r_quad(0.3, y, &mp), epsilon = 1e-10);
        }
    }

    #[test]
    fn negative_curvature_branch_closed_forms() {
        // m = 3/4 < 1: arccoth branch for S, quadrature path for R
        let p = SolitonParams::new(-1, 2.0, 0.4, 0.0, 0.0, 2.0).unwrap();
        let mp = MapParams::new(p, 1.0, 0.0, 0.0, 0.0).unwrap();
        for &y in &[0.3, 0.7, -0.5] {
            assert_abs_diff_eq!(map_s(y, &mp).unwrap(), s_quad(y, &mp), epsilon = 1e-9);
            assert_abs_diff_eq!(map_r(0.0, y, &mp).unwrap(), r_quad(0.0, y, &mp), epsilon = 1e-9);
        }
    }

    #[test]
    fn metric_density_forms_agree() {
        for mp in [
            fixture(0.0),
            fixture(FRAC_PI_4),
            {
                let p = SolitonParams::new(-1, 2.0, 0.4, 0.0, 0.0, 2.0).unwrap();
                MapParams::new(p, 1.0, 0.0, 0.0, 0.0).unwrap()
            },
            {
                let p = SolitonParams::new(0, 1.5, 0.5, 0.1, 0.4, 0.9).unwrap();
                MapParams::new(p, 1.2, 0.0, 0.0, 0.0).unwrap()
            },
        ] {
            for i in 0..40 {
                let y = -0.6 + 1.2 * i as f64 / 39.0;
                let s = map_s(y, &mp).unwrap();
                let a = metric_density(s, &mp).unwrap();
                let b = metric_density_from_omega(y, &mp).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-10 * b.abs().max(1.0));
                assert!(a > 0.0);
            }
        }
    }

    #[test]
    fn metric_density_trivial_value() {
        // ω₀ = 0, τ = 0, α = 1, ρ = 2 at Y₀: e^F = 4/ρ² = 1
        let mp = fixture(0.0);
        assert_abs_diff_eq!(metric_density_from_omega(0.0, &mp).unwrap(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn relation_between_dr_dy_and_metric() {
        // ∂R/∂Y = −(4 sin τ cos τ / (α ρ²)) / Φ with Φ = e^F
        let mp = fixture(FRAC_PI_4);
        let p = &mp.soliton;
        for i in 0..100 {
            let y = -1.0 + 2.0 * i as f64 / 99.0;
            let phi = metric_density_from_omega(y, &mp).unwrap();
            let lhs = dr_dy(y, &mp).unwrap();
            let rhs = -4.0 * p.tau.sin() * p.tau.cos() / (mp.alpha * p.rho * p.rho) / phi;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-9);
        }
    }

    #[test]
    fn quadratic_relation_for_ds_dy() {
        // (∂S/∂Y)² = −16 tan²τ/((1+tan²τ)² α² ρ⁴ Φ²)
        //            + 4(tan²τ − 1)/((1+tan²τ) ρ² Φ) + α²
        let mp = fixture(0.6);
        let p = &mp.soliton;
        let t2 = p.tau.tan().powi(2);
        for i in 0..100 {
            let y = -1.0 + 2.0 * i as f64 / 99.0;
            let phi = metric_density_from_omega(y, &mp).unwrap();
            let sy = ds_dy(y, &mp).unwrap();
            let rhs = -16.0 * t2 / ((1.0 + t2).powi(2) * mp.alpha.powi(2) * p.rho.powi(4) * phi * phi)
                + 4.0 * (t2 - 1.0) / ((1.0 + t2) * p.rho * p.rho * phi)
                + mp.alpha * mp.alpha;
            assert_abs_diff_eq!(sy * sy, rhs, epsilon = 1e-9);
        }
    }

    #[test]
    fn specific_coords_constants() {
        let z = Complex64::new(0.7, -0.2);
        assert_eq!(specific_coords(z, Complex64::new(0.0, 0.0)), z);
        let half = specific_coords(z, Complex64::new(2.0 * 2.0f64.ln(), 0.0));
        assert_abs_diff_eq!((half - z / 2.0).norm(), 0.0, epsilon = 1e-14);
        let rot = specific_coords(z, Complex64::new(0.0, std::f64::consts::PI));
        assert_abs_diff_eq!((rot - Complex64::new(0.0, -1.0) * z).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn sample_derivatives_match_finite_differences() {
        let mp = fixture(FRAC_PI_4);
        let h = 1e-5;
        for &(xi, eta) in &[(0.1, 0.2), (-0.3, 0.15), (0.2, -0.25)] {
            let s0 = map_sample(xi, eta, &mp);
            assert!(!s0.masked);
            let fr = |x: f64, e: f64| map_sample(x, e, &mp);
            let r_xi = (fr(xi + h, eta).r - fr(xi - h, eta).r) / (2.0 * h);
            let r_eta = (fr(xi, eta + h).r - fr(xi, eta - h).r) / (2.0 * h);
            let s_xi = (fr(xi + h, eta).s - fr(xi - h, eta).s) / (2.0 * h);
            let s_eta = (fr(xi, eta + h).s - fr(xi, eta - h).s) / (2.0 * h);
            assert_abs_diff_eq!(s0.dr.0, r_xi, epsilon = 1e-7);
            assert_abs_diff_eq!(s0.dr.1, r_eta, epsilon = 1e-7);
            assert_abs_diff_eq!(s0.ds.0, s_xi, epsilon = 1e-7);
            assert_abs_diff_eq!(s0.ds.1, s_eta, epsilon = 1e-7);
        }
    }

    #[test]
    fn orthogonality_and_beltrami_from_samples() {
        let mp = fixture(FRAC_PI_4);
        for &(xi, eta) in &[(0.1, 0.2), (-0.2, 0.3)] {
            let smp = map_sample(xi, eta, &mp);
            // R_ξ R_η + S_ξ S_η = 0
            let orth = smp.dr.0 * smp.dr.1 + smp.ds.0 * smp.ds.1;
            assert_abs_diff_eq!(orth, 0.0, epsilon = 1e-10);
            // u_ζ̄ / u_ζ = e^{−2ω}
            let u_xi = Complex64::new(smp.dr.0, smp.ds.0);
            let u_eta = Complex64::new(smp.dr.1, smp.ds.1);
            let u_z = (u_xi - Complex64::i() * u_eta) / 2.0;
            let u_zb = (u_xi + Complex64::i() * u_eta) / 2.0;
            let mu = u_zb / u_z;
            assert_abs_diff_eq!(mu.im, 0.0, epsilon = 1e-10);
            assert_abs_diff_eq!(mu.re, (-2.0 * smp.omega).exp(), epsilon = 1e-9);
            // Hopf normalization e^F u_ζ ū_ζ = 1
            let hopf = smp.e_f * (u_z * u_zb.conj()).re;
            assert_abs_diff_eq!(hopf, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn masked_sample_at_pole() {
        // m < 1 fixture with τ = 0: pole at Y = K(m)/√C, so pick η there
        let p = SolitonParams::new(-1, 2.0, 0.0, 0.0, 0.0, 2.0).unwrap();
        let mp = MapParams::new(p, 1.0, 0.0, 0.0, 0.0).unwrap();
        let y_pole = elliptic::complete_k(p.m).unwrap() / p.c.sqrt();
        let smp = map_sample(0.0, y_pole / p.rho, &mp);
        assert!(smp.masked);
    }
}
