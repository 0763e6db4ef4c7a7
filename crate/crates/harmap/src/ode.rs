//! Classical fixed-step RK4 integration with dense output.
//!
//! The stored trajectory keeps the state and its derivative at every node,
//! so intermediate values are recovered by cubic Hermite interpolation
//! (locally fourth-order accurate, matching the RK4 global order).

/// Dense RK4 trajectory of an `N`-dimensional first-order system.
pub struct Rk4Path<const N: usize> {
    pub ts: Vec<f64>,
    pub ys: Vec<[f64; N]>,
    pub dys: Vec<[f64; N]>,
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` with step magnitude `h`
/// (the last step is shortened to land on `t1` exactly).
pub fn rk4_path<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    h: f64,
) -> Rk4Path<N> {
    assert!(h > 0.0, "step must be positive");
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let span = (t1 - t0).abs();
    let n_steps = (span / h).ceil().max(1.0) as usize;
    let mut ts = Vec::with_capacity(n_steps + 1);
    let mut ys = Vec::with_capacity(n_steps + 1);
    let mut dys = Vec::with_capacity(n_steps + 1);

    let mut t = t0;
    let mut y = y0;
    ts.push(t);
    dys.push(f(t, &y));
    ys.push(y);
    for i in 0..n_steps {
        let t_next = if i + 1 == n_steps {
            t1
        } else {
            t0 + dir * span * (i + 1) as f64 / n_steps as f64
        };
        let dt = t_next - t;
        let k1 = *dys.last().unwrap();
        let y2 = add_scaled(&y, &k1, 0.5 * dt);
        let k2 = f(t + 0.5 * dt, &y2);
        let y3 = add_scaled(&y, &k2, 0.5 * dt);
        let k3 = f(t + 0.5 * dt, &y3);
        let y4 = add_scaled(&y, &k3, dt);
        let k4 = f(t + dt, &y4);
        for j in 0..N {
            y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        t = t_next;
        ts.push(t);
        dys.push(f(t, &y));
        ys.push(y);
    }
    Rk4Path { ts, ys, dys }
}

fn add_scaled<const N: usize>(y: &[f64; N], k: &[f64; N], s: f64) -> [f64; N] {
    let mut out = *y;
    for j in 0..N {
        out[j] += s * k[j];
    }
    out
}

impl<const N: usize> Rk4Path<N> {
    /// Evaluate the stored trajectory at `t` by cubic Hermite interpolation.
    /// `t` must lie within the integration span.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let first = self.ts[0];
        let last = *self.ts.last().unwrap();
        let (lo, hi) = if first <= last { (first, last) } else { (last, first) };
        assert!(
            t >= lo - 1e-12 && t <= hi + 1e-12,
            "evaluation point {t} outside integration span [{lo}, {hi}]"
        );
        let t = t.clamp(lo, hi);
        // binary search for the bracketing interval (ts monotone)
        let ascending = first <= last;
        let idx = {
            let mut a = 0usize;
            let mut b = self.ts.len() - 1;
            while b - a > 1 {
                let m = (a + b) / 2;
                let cond = if ascending { self.ts[m] <= t } else { self.ts[m] >= t };
                if cond {
                    a = m;
                } else {
                    b = m;
                }
            }
            a
        };
        let dt = self.ts[idx + 1] - self.ts[idx];
        if dt == 0.0 {
            return self.ys[idx];
        }
        let s = (t - self.ts[idx]) / dt;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let mut out = [0.0; N];
        for j in 0..N {
            out[j] = h00 * self.ys[idx][j]
                + h10 * dt * self.dys[idx][j]
                + h01 * self.ys[idx + 1][j]
                + h11 * dt * self.dys[idx + 1][j];
        }
        out
    }

    pub fn end_state(&self) -> [f64; N] {
        *self.ys.last().unwrap()
    }
}
