//! Scalar root finding: bracketed bisection (robust reference) and a
//! secant refinement used by the shooting solvers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RootError {
    #[error("bracket [{0}, {1}] does not straddle a sign change")]
    NoSignChange(f64, f64),
    #[error("root iteration failed to converge within {0} iterations")]
    NoConvergence(usize),
}

/// Bisection on a sign-changing bracket; returns the midpoint once the
/// bracket width falls below `tol`.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64, RootError> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(RootError::NoSignChange(a, b));
    }
    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Err(RootError::NoConvergence(max_iter))
}

/// Secant iteration started from `(x0, x1)`; falls back on failure to the
/// caller (no bracketing guarantee).
pub fn secant<F: FnMut(f64) -> f64>(
    mut f: F,
    mut x0: f64,
    mut x1: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64, RootError> {
    let mut f0 = f(x0);
    let mut f1 = f(x1);
    for _ in 0..max_iter {
        if (x1 - x0).abs() <= tol || f1 == 0.0 {
            return Ok(x1);
        }
        let denom = f1 - f0;
        if denom == 0.0 {
            return Err(RootError::NoConvergence(max_iter));
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f(x1);
    }
    Err(RootError::NoConvergence(max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bisect_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert_abs_diff_eq!(r, 2.0f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn secant_cubic() {
        let r = secant(|x| x * x * x - 8.0, 1.0, 3.0, 1e-14, 100).unwrap();
        assert_abs_diff_eq!(r, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100),
            Err(RootError::NoSignChange(_, _))
        ));
    }
}
