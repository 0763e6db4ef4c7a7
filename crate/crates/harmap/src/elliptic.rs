//! Elliptic integrals and Jacobi elliptic functions in the
//! argument–parameter convention `pq(u | m)` where the parameter `m` is
//! the squared modulus.
//!
//! Real arguments and real parameters only. The primary parameter range
//! is m < 1; m > 1 is reached through the reciprocal-parameter
//! transformation and m < 0 through the negative-parameter
//! transformation, so every evaluation reduces to the AGM / descending
//! Landen recursion on 0 <= m < 1.

use crate::quad::adaptive_simpson;
use std::f64::consts::FRAC_PI_2;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EllipticError {
    #[error("parameter m = {0} outside the domain of {1}")]
    Domain(f64, &'static str),
    #[error("argument {0} outside the attainable range of {1}")]
    Range(f64, &'static str),
    #[error("singular characteristic: 1 - n sn^2 vanishes on the integration path")]
    SingularCharacteristic,
}

/// sn, cn, dn at one argument/parameter pair.
#[derive(Debug, Clone, Copy)]
pub struct JacobiEval {
    pub u: f64,
    pub m: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Complete first-kind integral K(m) together with its complement.
#[derive(Debug, Clone, Copy)]
pub struct EllipticParameterPack {
    pub m: f64,
    pub k: f64,
    pub k_prime: f64,
}

impl EllipticParameterPack {
    pub fn new(m: f64) -> Result<Self, EllipticError> {
        Ok(Self {
            m,
            k: complete_k(m)?,
            k_prime: complete_k(1.0 - m)?,
        })
    }
}

/// K(m) by the arithmetic–geometric mean: K = pi / (2 agm(1, sqrt(1-m))).
/// Valid for every m < 1, including m < 0.
pub fn complete_k(m: f64) -> Result<f64, EllipticError> {
    if !(m < 1.0) {
        return Err(EllipticError::Domain(m, "complete_k (requires m < 1)"));
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..60 {
        if (a - b).abs() <= 1e-17 * a.abs() {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(FRAC_PI_2 / a)
}

// ---------------------------------------------------------------------------
// Carlson symmetric forms (duplication algorithm).

const RF_ERRTOL: f64 = 0.0012;
const RC_ERRTOL: f64 = 0.0008;
const RJ_ERRTOL: f64 = 0.0012;

/// Carlson R_F(x, y, z); arguments nonnegative, at most one zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let (mut delx, mut dely, mut delz, mut ave);
    loop {
        let sx = xt.sqrt();
        let sy = yt.sqrt();
        let sz = zt.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        ave = (xt + yt + zt) / 3.0;
        delx = (ave - xt) / ave;
        dely = (ave - yt) / ave;
        delz = (ave - zt) / ave;
        if delx.abs().max(dely.abs()).max(delz.abs()) < RF_ERRTOL {
            break;
        }
    }
    let e2 = delx * dely - delz * delz;
    let e3 = delx * dely * delz;
    (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt()
}

/// Carlson R_C(x, y) for x >= 0, y > 0.
pub fn carlson_rc(x: f64, y: f64) -> f64 {
    let (mut xt, mut yt) = (x, y);
    let (mut s, mut ave);
    loop {
        let lam = 2.0 * xt.sqrt() * yt.sqrt() + yt;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        ave = (xt + 2.0 * yt) / 3.0;
        s = (yt - ave) / ave;
        if s.abs() < RC_ERRTOL {
            break;
        }
    }
    (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / ave.sqrt()
}

/// Carlson R_J(x, y, z, p) for nonnegative x, y, z (at most one zero) and
/// p > 0 (the circular case; the Cauchy-principal-value case is not needed
/// here).
pub fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
    let (mut xt, mut yt, mut zt, mut pt) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    let (mut delx, mut dely, mut delz, mut delp, mut ave);
    loop {
        let sx = xt.sqrt();
        let sy = yt.sqrt();
        let sz = zt.sqrt();
        let lam = sx * (sy + sz) + sy * sz;
        let alpha = (pt * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = pt * (pt + lam) * (pt + lam);
        sum += fac * carlson_rc(alpha, beta);
        fac *= 0.25;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        pt = 0.25 * (pt + lam);
        ave = 0.2 * (xt + yt + zt + 2.0 * pt);
        delx = (ave - xt) / ave;
        dely = (ave - yt) / ave;
        delz = (ave - zt) / ave;
        delp = (ave - pt) / ave;
        if delx.abs().max(dely.abs()).max(delz.abs()).max(delp.abs()) < RJ_ERRTOL {
            break;
        }
    }
    let ea = delx * (dely + delz) + dely * delz;
    let eb = delx * dely * delz;
    let ec = delp * delp;
    let ed = ea - 3.0 * ec;
    let ee = eb + 2.0 * delp * (ea - ec);
    let c1 = 3.0 / 14.0;
    let c2 = 1.0 / 3.0;
    let c3 = 3.0 / 22.0;
    let c4 = 3.0 / 26.0;
    3.0 * sum
        + fac
            * (1.0 + ed * (-c1 + 0.75 * c3 * ed - 1.5 * c4 * ee)
                + eb * (0.5 * c2 + delp * (-c3 - c3 + delp * c4))
                + delp * ea * (c2 - delp * c3)
                - c2 * delp * ec)
            / (ave * ave.sqrt())
}

// ---------------------------------------------------------------------------
// Incomplete first kind.

/// Incomplete elliptic integral of the first kind
/// F(phi | m) = ∫_0^phi dθ / sqrt(1 - m sin²θ), for m sin²phi < 1.
/// Arbitrary real amplitude via the quasi-periodicity F(phi + pi) = F(phi) + 2K.
pub fn incomplete_f(phi: f64, m: f64) -> Result<f64, EllipticError> {
    if phi == 0.0 {
        return Ok(0.0);
    }
    // reduce the amplitude into [-pi/2, pi/2]
    let n = (phi / std::f64::consts::PI).round();
    let phi_r = phi - n * std::f64::consts::PI;
    let mut shift = 0.0;
    if n != 0.0 {
        shift = 2.0 * n * complete_k(m)?;
    }
    let s = phi_r.sin();
    let c = phi_r.cos();
    let radicand = 1.0 - m * s * s;
    if radicand <= 0.0 {
        return Err(EllipticError::Domain(m, "incomplete_f (m sin^2 phi >= 1)"));
    }
    Ok(shift + s * carlson_rf(c * c, radicand, 1.0))
}

// ---------------------------------------------------------------------------
// Jacobi functions.

/// sn, cn, dn via descending Landen / AGM. Any finite `u`; any real `m`
/// (m > 1 through the reciprocal-parameter transformation, m < 0 through
/// the negative-parameter transformation).
pub fn jacobi_sn_cn_dn(u: f64, m: f64) -> JacobiEval {
    let (sn, cn, dn) = sncndn(u, m);
    JacobiEval { u, m, sn, cn, dn }
}

fn sncndn(u: f64, m: f64) -> (f64, f64, f64) {
    if m == 0.0 {
        return (u.sin(), u.cos(), 1.0);
    }
    if m == 1.0 {
        let t = u.tanh();
        let s = 1.0 / u.cosh();
        return (t, s, s);
    }
    if m < 0.0 {
        // negative-parameter transformation: with m1 = -m,
        // mu = m1/(1+m1), v = u sqrt(1+m1):
        //   sn(u|m) = sn(v|mu) / (sqrt(1+m1) dn(v|mu))
        //   cn(u|m) = cn(v|mu) / dn(v|mu)
        //   dn(u|m) = 1 / dn(v|mu)
        let m1 = -m;
        let g = (1.0 + m1).sqrt();
        let mu = m1 / (1.0 + m1);
        let (s, c, d) = sncndn(u * g, mu);
        return (s / (g * d), c / d, 1.0 / d);
    }
    if m > 1.0 {
        // reciprocal-parameter transformation:
        //   sn(u|m) = sn(u sqrt(m) | 1/m) / sqrt(m)
        //   cn(u|m) = dn(u sqrt(m) | 1/m)
        //   dn(u|m) = cn(u sqrt(m) | 1/m)
        let rm = m.sqrt();
        let (s, c, d) = sncndn(u * rm, 1.0 / m);
        return (s / rm, d, c);
    }
    // 0 < m < 1: descending Landen / AGM recursion.
    const CA: f64 = 3e-9; // truncation level; error is of order CA^2
    let mut emc = 1.0 - m;
    let mut a = 1.0f64;
    let mut dn = 1.0f64;
    let mut em = Vec::with_capacity(16);
    let mut en = Vec::with_capacity(16);
    let mut c = a;
    let mut last = 0usize;
    for i in 0..30 {
        last = i;
        em.push(a);
        emc = emc.sqrt();
        en.push(emc);
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= CA * a {
            break;
        }
        emc *= a;
        a = c;
    }
    let uu = c * u;
    let mut sn = uu.sin();
    let mut cn = uu.cos();
    if sn != 0.0 {
        let mut aa = cn / sn;
        c *= aa;
        for i in (0..=last).rev() {
            let b = em[i];
            aa *= c;
            c *= dn;
            dn = (en[i] + aa) / (b + aa);
            aa = c / b;
        }
        let amp = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn < 0.0 { -amp } else { amp };
        cn = c * sn;
    }
    (sn, cn, dn)
}

// ---------------------------------------------------------------------------
// Quotient family.

/// Result of a quotient evaluation; `pole` marks a vanishing denominator
/// (value is a signed infinity there).
#[derive(Debug, Clone, Copy)]
pub struct PqValue {
    pub value: f64,
    pub pole: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    S,
    C,
    D,
    N,
}

impl Letter {
    pub fn parse(ch: char) -> Result<Self, EllipticError> {
        match ch {
            's' => Ok(Letter::S),
            'c' => Ok(Letter::C),
            'd' => Ok(Letter::D),
            'n' => Ok(Letter::N),
            _ => Err(EllipticError::Range(0.0, "jacobi letter (s, c, d, n)")),
        }
    }
}

fn letter_value(l: Letter, ev: &JacobiEval) -> f64 {
    match l {
        Letter::S => ev.sn,
        Letter::C => ev.cn,
        Letter::D => ev.dn,
        Letter::N => 1.0,
    }
}

/// The quotient function pq(u | m) = p-value / q-value (pp = 1).
pub fn jacobi_pq(p: Letter, q: Letter, u: f64, m: f64) -> PqValue {
    if p == q {
        return PqValue { value: 1.0, pole: false };
    }
    let ev = jacobi_sn_cn_dn(u, m);
    let num = letter_value(p, &ev);
    let den = letter_value(q, &ev);
    let value = num / den;
    PqValue { value, pole: !value.is_finite() }
}

// ---------------------------------------------------------------------------
// Inverses.

/// Inverse Jacobi functions on the principal branch. Supported pairs:
/// sn, sd, cd, sc.
pub fn inverse_jacobi(p: Letter, q: Letter, x: f64, m: f64) -> Result<f64, EllipticError> {
    match (p, q) {
        (Letter::S, Letter::N) => inv_sn(x, m),
        (Letter::S, Letter::D) => inv_sd(x, m),
        (Letter::C, Letter::D) => inv_cd(x, m),
        (Letter::S, Letter::C) => inv_sc(x, m),
        _ => Err(EllipticError::Range(x, "inverse_jacobi (supported: sn, sd, cd, sc)")),
    }
}

fn inv_sn(x: f64, m: f64) -> Result<f64, EllipticError> {
    if m > 1.0 {
        // sn(u|m) = sn(u sqrt m | 1/m)/sqrt m
        let rm = m.sqrt();
        return Ok(inv_sn(rm * x, 1.0 / m)? / rm);
    }
    if x.abs() > 1.0 || m * x * x >= 1.0 {
        return Err(EllipticError::Range(x, "inverse sn"));
    }
    incomplete_f(x.asin(), m)
}

fn inv_sc(y: f64, m: f64) -> Result<f64, EllipticError> {
    if m > 1.0 {
        // sc(u|m) = sn/cn = (sn(v|1/m)/sqrt m)/dn(v|1/m) = sd(v|1/m)/sqrt m
        let rm = m.sqrt();
        return Ok(inv_sd(rm * y, 1.0 / m)? / rm);
    }
    incomplete_f(y.atan(), m)
}

fn inv_sd(x: f64, m: f64) -> Result<f64, EllipticError> {
    if m > 1.0 {
        // sd(u|m) = sc(u sqrt m | 1/m)/sqrt m
        let rm = m.sqrt();
        return Ok(inv_sc(rm * x, 1.0 / m)? / rm);
    }
    // sd = sn/dn  =>  sn = x / sqrt(1 + m x^2)
    let denom = 1.0 + m * x * x;
    if denom <= 0.0 || x * x * (1.0 - m) > denom {
        return Err(EllipticError::Range(x, "inverse sd"));
    }
    inv_sn(x / denom.sqrt(), m)
}

fn inv_cd(x: f64, m: f64) -> Result<f64, EllipticError> {
    if m >= 1.0 {
        return Err(EllipticError::Domain(m, "inverse cd (requires m < 1)"));
    }
    if x.abs() > 1.0 {
        return Err(EllipticError::Range(x, "inverse cd"));
    }
    // cd^2 = (1 - sn^2)/(1 - m sn^2)  =>  sn^2 = (1 - x^2)/(1 - m x^2)
    let sn2 = (1.0 - x * x) / (1.0 - m * x * x);
    let v = inv_sn(sn2.max(0.0).sqrt(), m)?;
    if x >= 0.0 {
        Ok(v)
    } else {
        // cd is odd about u = K: cd(2K - v) = -cd(v)
        Ok(2.0 * complete_k(m)? - v)
    }
}

// ---------------------------------------------------------------------------
// Third kind.

/// Elliptic integral of the third kind
/// Π(n; u | m) = ∫_0^u dw / (1 - n sn²(w | m)).
pub fn ellint_pi(n: f64, u: f64, m: f64) -> Result<f64, EllipticError> {
    if u == 0.0 {
        return Ok(0.0);
    }
    if n == 0.0 {
        return Ok(u);
    }
    if u < 0.0 {
        // the integrand is even in w, so Π is odd in u
        return Ok(-ellint_pi(n, -u, m)?);
    }
    if m > 1.0 {
        // substitute w = s / sqrt(m): sn(w|m) = sn(s|1/m)/sqrt(m)
        let rm = m.sqrt();
        return Ok(ellint_pi(n / m, rm * u, 1.0 / m)? / rm);
    }
    if m < 0.0 {
        // no closed reduction needed by the callers; integrate directly
        if n >= 1.0 {
            return Err(EllipticError::SingularCharacteristic);
        }
        let f = |w: f64| {
            let s = jacobi_sn_cn_dn(w, m).sn;
            1.0 / (1.0 - n * s * s)
        };
        return Ok(adaptive_simpson(&f, 0.0, u, 1e-13));
    }
    if m == 1.0 {
        // sn = tanh w: ∫ dw/(1 - n tanh²w) closed form
        if n >= 1.0 {
            return Err(EllipticError::SingularCharacteristic);
        }
        // 1/(1 - n tanh²) = (1/(1-n)) (1 - n sech²/( ... )) — integrate directly
        let f = |w: f64| {
            let t = w.tanh();
            1.0 / (1.0 - n * t * t)
        };
        return Ok(adaptive_simpson(&f, 0.0, u, 1e-13));
    }
    // 0 <= m < 1
    let k = complete_k(m)?;
    let two_k = 2.0 * k;
    let periods = (u / two_k).floor();
    let r = u - periods * two_k;
    let mut total = 0.0;
    if periods != 0.0 {
        if n >= 1.0 {
            // sn reaches 1 inside every full period
            return Err(EllipticError::SingularCharacteristic);
        }
        total += periods * 2.0 * pi_complete(n, m, k)?;
    }
    total += if r <= k {
        pi_incomplete_first_quadrant(n, r, m)?
    } else {
        // reflection about K: sn(2K - w) = sn(w)
        if n >= 1.0 {
            return Err(EllipticError::SingularCharacteristic);
        }
        2.0 * pi_complete(n, m, k)? - pi_incomplete_first_quadrant(n, two_k - r, m)?
    };
    Ok(total)
}

/// Complete Π over [0, K] via Carlson.
fn pi_complete(n: f64, m: f64, _k: f64) -> Result<f64, EllipticError> {
    if n >= 1.0 {
        return Err(EllipticError::SingularCharacteristic);
    }
    Ok(carlson_rf(0.0, 1.0 - m, 1.0) + n / 3.0 * carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n))
}

/// Incomplete Π for r in [0, K] via Carlson with x = sn(r | m).
fn pi_incomplete_first_quadrant(n: f64, r: f64, m: f64) -> Result<f64, EllipticError> {
    let x = jacobi_sn_cn_dn(r, m).sn.clamp(0.0, 1.0);
    let x2 = x * x;
    let p = 1.0 - n * x2;
    if p <= 0.0 {
        return Err(EllipticError::SingularCharacteristic);
    }
    Ok(x * carlson_rf(1.0 - x2, 1.0 - m * x2, 1.0)
        + n / 3.0 * x2 * x * carlson_rj(1.0 - x2, 1.0 - m * x2, 1.0, p))
}
