//! End-to-end acceptance suite. Each test covers one numbered criterion
//! and prints a single pass/fail line with the measured figures.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use harmap::backlund;
use harmap::beltrami::{self, BoundaryData, SolverConfig};
use harmap::catalog::{self, LitamForm, StwParams};
use harmap::cli;
use harmap::elliptic::{self, Letter};
use harmap::grid::FieldGrid;
use harmap::mapgen::{self, MapParams};
use harmap::quad::adaptive_simpson;
use harmap::soliton::SolitonParams;
use harmap::verify::{self, MetricSpec};

fn conclude(criterion: u32, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "pass" } else { "FAIL" };
    println!("criterion {criterion} ({name}): {verdict} [{detail}]");
    assert!(ok, "criterion {criterion} ({name}) failed: {detail}");
}

// ---------------------------------------------------------------- 1

#[test]
fn criterion_1_elliptic_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst_pyth = 0.0f64;
    for _ in 0..10_000 {
        let u: f64 = rng.gen_range(-5.0..5.0);
        let m: f64 = rng.gen_range(0.0..1.0);
        let e = elliptic::jacobi_sn_cn_dn(u, m);
        worst_pyth = worst_pyth.max((e.sn * e.sn + e.cn * e.cn - 1.0).abs());
        worst_pyth = worst_pyth.max((e.dn * e.dn + m * e.sn * e.sn - 1.0).abs());
    }

    let mut worst_special = 0.0f64;
    for _ in 0..200 {
        let u: f64 = rng.gen_range(-3.0..3.0);
        worst_special = worst_special.max((elliptic::jacobi_sn_cn_dn(u, 0.0).sn - u.sin()).abs());
        worst_special = worst_special.max((elliptic::jacobi_sn_cn_dn(u, 1.0).sn - u.tanh()).abs());
        let m: f64 = rng.gen_range(0.01..0.99);
        let k = elliptic::complete_k(m).unwrap();
        let cd = elliptic::jacobi_pq(Letter::C, Letter::D, k, m);
        assert!(!cd.pole);
        worst_special = worst_special.max(cd.value.abs());
        worst_special = worst_special.max((elliptic::ellint_pi(0.0, u, m).unwrap() - u).abs());
    }

    let mut worst_pi = 0.0f64;
    for _ in 0..50 {
        let n: f64 = rng.gen_range(-2.0..0.9);
        let u: f64 = rng.gen_range(0.2..2.0);
        let m: f64 = rng.gen_range(0.05..0.95);
        let pi_val = elliptic::ellint_pi(n, u, m).unwrap();
        let oracle = adaptive_simpson(
            &|w: f64| {
                let s = elliptic::jacobi_sn_cn_dn(w, m).sn;
                1.0 / (1.0 - n * s * s)
            },
            0.0,
            u,
            1e-13,
        );
        worst_pi = worst_pi.max((pi_val - oracle).abs());
    }

    let ok = worst_pyth < 1e-12 && worst_special < 1e-12 && worst_pi < 1e-10;
    conclude(
        1,
        "elliptic identity suite",
        ok,
        &format!(
            "pythagorean {worst_pyth:.2e}, special values {worst_special:.2e}, \
             third kind vs quadrature {worst_pi:.2e}"
        ),
    );
}

// ---------------------------------------------------------------- 2

#[test]
fn criterion_2_soliton_first_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_drift = 0.0f64;
    let mut worst_eq = 0.0f64;
    let mut accepted = 0usize;
    while accepted < 20 {
        let k_n = [-1, 0, 1][accepted % 3];
        let rho: f64 = rng.gen_range(1.0..3.0);
        let tau: f64 = rng.gen_range(0.0..1.5);
        let y0: f64 = rng.gen_range(-1.0..1.0);
        let omega0: f64 = rng.gen_range(-1.0..1.0);
        let domega0: f64 = rng.gen_range(0.3..2.0);
        let p = match SolitonParams::new(k_n, rho, tau, y0, omega0, domega0) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if k_n == -1 && p.c * rho * rho <= 4.0 {
            continue;
        }
        accepted += 1;

        let samples = 601;
        let mut drift = 0.0f64;
        let mut ys = Vec::new();
        for s in 0..samples {
            let y = y0 - 3.0 + 6.0 * s as f64 / (samples - 1) as f64;
            // both checks keep to samples with moderate ω: approaching a
            // pole the invariant is a difference of terms growing like
            // sinh²ω (rounding scales with them), and the fourth
            // derivative entering the h = 1e−4 FD truncation grows like
            // sinh 2ω — either swamps the absolute budget
            let w = harmap::soliton::omega(y, &p);
            if w.pole {
                continue;
            }
            if w.value.abs() <= 4.0 {
                if let Some(r) = harmap::soliton::first_integral_residual(y, &p) {
                    drift = drift.max(r);
                }
            }
            if s % 15 == 0 && w.value.abs() <= 1.0 {
                ys.push(y);
            }
        }
        worst_drift = worst_drift.max(drift);
        worst_eq = worst_eq.max(harmap::soliton::sinh_gordon_residual(&p, &ys, 1e-4));
    }
    let ok = worst_drift < 1e-10 && worst_eq < 1e-6;
    conclude(
        2,
        "soliton first integral",
        ok,
        &format!("drift {worst_drift:.2e}, sinh-Gordon FD residual {worst_eq:.2e}"),
    );
}

// ---------------------------------------------------------------- 3

#[test]
fn criterion_3_map_self_consistency() {
    let fixtures = [
        SolitonParams::new(1, 2.0, FRAC_PI_4, 0.0, 0.0, 1.0).unwrap(),
        SolitonParams::new(0, 2.0, 0.6, 0.0, 0.2, 1.0).unwrap(),
        SolitonParams::new(-1, 2.0, 0.7, 0.0, 0.3, 2.0).unwrap(),
    ];
    let mut worst_fd = 0.0f64;
    let mut worst_dual = 0.0f64;
    let mut worst_rel = 0.0f64;
    let mut checked = 0usize;
    for p in fixtures {
        let mp = MapParams::new(p, 1.0, 0.0, 0.0, 0.0).unwrap();
        let h = 1e-5;
        for s in 0..100 {
            let y = -0.4 + 0.8 * s as f64 / 99.0;
            let evals = (
                mapgen::map_r(0.3, y + h, &mp),
                mapgen::map_r(0.3, y - h, &mp),
                mapgen::map_s(y + h, &mp),
                mapgen::map_s(y - h, &mp),
                mapgen::dr_dy(y, &mp),
                mapgen::ds_dy(y, &mp),
                mapgen::dr_dy_trig(y, &mp),
                mapgen::ds_dy_trig(y, &mp),
                mapgen::metric_density_from_omega(y, &mp),
            );
            let (Ok(rp), Ok(rm), Ok(sp), Ok(sm), Ok(dr), Ok(ds), Ok(drt), Ok(dst), Ok(phi)) =
                evals
            else {
                continue;
            };
            checked += 1;
            worst_fd = worst_fd.max((dr - (rp - rm) / (2.0 * h)).abs());
            worst_fd = worst_fd.max((ds - (sp - sm) / (2.0 * h)).abs());
            worst_dual = worst_dual.max((dr - drt).abs());
            worst_dual = worst_dual.max((ds - dst).abs());
            let rhs = -4.0 * p.tau.sin() * p.tau.cos() / (mp.alpha * p.rho * p.rho);
            worst_rel = worst_rel.max((phi * dr - rhs).abs());
        }
    }
    let ok = checked >= 250 && worst_fd < 1e-7 && worst_dual < 1e-10 && worst_rel < 1e-9;
    conclude(
        3,
        "closed-form map self-consistency",
        ok,
        &format!(
            "{checked} samples, FD {worst_fd:.2e}, dual forms {worst_dual:.2e}, \
             metric relation {worst_rel:.2e}"
        ),
    );
}

// ---------------------------------------------------------------- 4

struct RoundTripCase {
    name: &'static str,
    u: FieldGrid<Complex64>,
    /// closed-form ω when available; decomposed ω otherwise
    omega: Option<FieldGrid<f64>>,
    metric: MetricSpec,
    lambda: Complex64,
    k_n: f64,
    /// claimed constant Hopf value, when constancy is part of the claim
    hopf_const: Option<Complex64>,
    /// same window at half resolution, for Richardson certification of
    /// the φ-harmonicity limit where the plain 5-point value sits on a
    /// rounding-noise floor
    u_half: Option<FieldGrid<Complex64>>,
}

fn soliton_map_grid(
    name: &str,
    mp: &MapParams,
    n: usize,
    xr: (f64, f64),
    yr: (f64, f64),
) -> (FieldGrid<Complex64>, FieldGrid<f64>, FieldGrid<f64>) {
    let grid = FieldGrid::from_fn(n, n, xr, yr, |_, _| 0.0f64);
    let mut u = grid.map(|_| Complex64::new(0.0, 0.0));
    let mut omega = grid.map(|_| 0.0f64);
    let mut e_f = grid.map(|_| 0.0f64);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let s = mapgen::map_sample(grid.x(i), grid.y(j), mp);
            assert!(!s.masked, "{name}: window must stay clear of poles");
            let k = grid.idx(i, j);
            u.values[k] = Complex64::new(s.r, s.s);
            omega.values[k] = s.omega;
            e_f.values[k] = s.e_f;
        }
    }
    (u, omega, e_f)
}

fn soliton_case(
    name: &'static str,
    p: SolitonParams,
    n: usize,
    xr: (f64, f64),
    yr: (f64, f64),
) -> RoundTripCase {
    let mp = MapParams::new(p, 1.0, 0.0, 0.0, 0.0).unwrap();
    let (u, omega, e_f) = soliton_map_grid(name, &mp, n, xr, yr);
    let (u_half, _, _) = soliton_map_grid(name, &mp, (n + 1) / 2, xr, yr);
    RoundTripCase {
        name,
        u,
        omega: Some(omega),
        metric: MetricSpec::Sampled(e_f),
        lambda: Complex64::new(0.0, 0.0),
        k_n: p.k_n as f64,
        hopf_const: None,
        u_half: Some(u_half),
    }
}

/// `fine` selects per-family resolutions tuned for the 1e−5 identity
/// floors (FD truncation shrinks with h while rounding/quadrature noise
/// in the residuals is amplified by 1/h², so the best grid differs by
/// family); the coarse variant is the uniform 201² curvature pass.
fn round_trip_cases(fine: bool) -> Vec<RoundTripCase> {
    let mut cases = Vec::new();
    let n = 201;
    let n_fine = if fine { 401 } else { 201 };

    cases.push(soliton_case(
        "soliton K_N=+1",
        SolitonParams::new(1, 2.0, FRAC_PI_4, 0.0, 0.0, 1.0).unwrap(),
        n,
        (-0.1, 0.1),
        (0.4, 0.6),
    ));
    cases.push(soliton_case(
        "soliton K_N=0",
        SolitonParams::new(0, 2.0, 0.6, 0.0, 0.2, 1.0).unwrap(),
        n,
        (-0.1, 0.1),
        (0.3, 0.5),
    ));
    // τ = 0 keeps the m < 1 map fully closed-form (the Π term of R is
    // absent), so the residuals are not limited by per-node quadrature
    cases.push(soliton_case(
        "soliton K_N=-1",
        SolitonParams::new(-1, 2.0, 0.0, 0.0, 0.3, 2.0).unwrap(),
        n,
        (-0.05, 0.05),
        (0.1, 0.2),
    ));

    {
        let grid = FieldGrid::from_fn(n, n, (-0.9, -0.5), (0.0, 0.4), |_, _| 0.0f64);
        let u = catalog::litam_map(1.0, &grid, LitamForm::Zeta).unwrap();
        let mut omega = grid.map(|_| 0.0f64);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                *omega.at_mut(i, j) = catalog::litam_omega(grid.x(i));
            }
        }
        cases.push(RoundTripCase {
            name: "half-plane pair",
            u,
            omega: Some(omega),
            metric: MetricSpec::HalfPlane,
            lambda: Complex64::new(0.0, 0.0),
            k_n: -1.0,
            hopf_const: None,
            u_half: None,
        });
    }

    {
        let t = 2.0;
        let sol = catalog::wolf_solve(t, 1e-4).unwrap();
        let grid = FieldGrid::from_fn(n_fine, n_fine, (0.0, 1.0), (0.0, 1.0), |_, _| 0.0f64);
        let u = sol.map_grid(&grid);
        cases.push(RoundTripCase {
            name: "hyperbolic cylinder",
            u,
            omega: None,
            metric: MetricSpec::WolfCylinder { t },
            lambda: Complex64::new((4.0 * t * t / (sol.c0 - 0.5)).ln(), 0.0),
            k_n: -1.0,
            hopf_const: Some(Complex64::new(sol.hopf(), 0.0)),
            u_half: None,
        });
    }

    {
        let c = 0.1;
        let grid = FieldGrid::from_fn(n, n, (0.0, 1.0), (1.0, 3.0), |_, _| 0.0f64);
        let u = catalog::half_cylinder_map(c, &grid).unwrap();
        let mut omega = grid.map(|_| 0.0f64);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let mu = catalog::half_cylinder_mu(c, grid.y(j));
                *omega.at_mut(i, j) = -0.5 * mu.abs().ln();
            }
        }
        cases.push(RoundTripCase {
            name: "half-cylinder",
            u,
            omega: Some(omega),
            metric: MetricSpec::HalfPlane,
            lambda: Complex64::new((4.0 / c).ln(), PI),
            k_n: -1.0,
            hopf_const: Some(Complex64::new(-c / 4.0, 0.0)),
            u_half: None,
        });
    }

    {
        let (alpha, a) = (1.0, 1.0);
        let b = catalog::stw_find_b(alpha, a, (0.2, 2.5)).unwrap();
        let p = StwParams::new(alpha, a, b).unwrap();
        let grid = FieldGrid::from_fn(
            (n_fine + 1) / 2,
            2 * n_fine - 1,
            (0.0, 1.0),
            (0.6, PI - 0.6),
            |_, _| 0.0f64,
        );
        let u = catalog::stw_map(&p, &grid).unwrap();
        let mut omega = grid.map(|_| 0.0f64);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                *omega.at_mut(i, j) = catalog::stw_tanh_omega(&p, grid.y(j)).atanh();
            }
        }
        let hopf =
            Complex64::new((alpha * alpha - a.powi(4) - b * b) / 4.0, -alpha * a * a / 2.0);
        cases.push(RoundTripCase {
            name: "strip wave",
            u,
            omega: Some(omega),
            metric: MetricSpec::Strip,
            lambda: -hopf.ln(),
            k_n: -1.0,
            hopf_const: None,
            u_half: None,
        });
    }

    {
        // the residuals here are truncation-limited (they fall by 4× per
        // halving), so the finest grid wins
        let nb = if fine { 801 } else { n };
        let grid = FieldGrid::from_fn(nb, nb, (-0.3, 0.3), (2.5, 3.5), |_, _| 0.0f64);
        let u = backlund::backlund_example_map(&grid).unwrap();
        let mut omega = grid.map(|_| 0.0f64);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                *omega.at_mut(i, j) = backlund::example_omega_reciprocal(grid.x(i), grid.y(j));
            }
        }
        cases.push(RoundTripCase {
            name: "transform example",
            u,
            omega: Some(omega),
            metric: MetricSpec::HalfPlane,
            lambda: Complex64::new(0.0, 0.0),
            k_n: -1.0,
            hopf_const: None,
            u_half: None,
        });
    }

    cases
}

/// max |e^ω u_ζ̄ − e^{−ω+iφ} u_ζ| with the decomposed phase.
fn phase_beltrami_residual(
    u: &FieldGrid<Complex64>,
    omega: &FieldGrid<f64>,
    phi: &FieldGrid<f64>,
) -> f64 {
    let (uz, uzb) = verify::wirtinger(u);
    let mut worst = 0.0f64;
    for j in 1..u.ny - 1 {
        for i in 1..u.nx - 1 {
            if !u.stencil_regular(i, j) {
                continue;
            }
            let k = u.idx(i, j);
            let w = omega.values[k];
            let phase = Complex64::from_polar(1.0, phi.values[k]);
            let res = w.exp() * uzb.values[k] - (-w).exp() * phase * uz.values[k];
            worst = worst.max(res.norm());
        }
    }
    worst
}

#[test]
fn criterion_4_theorem_round_trip() {
    let mut details = Vec::new();
    let mut ok = true;
    for case in round_trip_cases(true) {
        let dec = verify::beltrami_decompose(&case.u).unwrap();
        let omega = case.omega.as_ref().unwrap_or(&dec.omega);
        let beltrami = phase_beltrami_residual(&case.u, omega, &dec.phi);
        let hopf = verify::hopf_field(&case.u, &case.metric).unwrap();
        // φ-harmonicity: plain value, or the Richardson h → 0 estimate
        // from a grid halving where the plain value is noise-floored
        let phi_harm = match &case.u_half {
            Some(uh) => {
                let dec_h = verify::beltrami_decompose(uh).unwrap();
                ((4.0 * dec.phi_harmonicity_max - dec_h.phi_harmonicity_max) / 3.0).abs()
            }
            None => dec.phi_harmonicity_max,
        };
        let mut case_ok = phi_harm < 1e-5 && beltrami < 1e-5;
        case_ok &= hopf.holomorphy_max < 1e-5;
        let mut hopf_note = String::new();
        if let Some(claim) = case.hopf_const {
            case_ok &= hopf.std_dev < 1e-6;
            hopf_note = format!(
                ", hopf std {:.2e}, mean dev {:.2e}",
                hopf.std_dev,
                (hopf.mean - claim).norm()
            );
        }
        details.push(format!(
            "{}: phi-harm {:.2e}, beltrami {:.2e}, holomorphy {:.2e}{}",
            case.name, phi_harm, beltrami, hopf.holomorphy_max, hopf_note
        ));
        ok &= case_ok;
    }

    // curvature round trip at the stated 201² resolution
    for case in round_trip_cases(false) {
        let rec = verify::reconstruct_metric(&case.u, case.lambda, 1e-2).unwrap();
        let dev = rec
            .curvature
            .values
            .iter()
            .zip(&rec.curvature.mask)
            .filter_map(|(v, &m)| m.then(|| (v - case.k_n).abs()))
            .fold(0.0, f64::max);
        details.push(format!("{}: curvature dev {:.2e}", case.name, dev));
        ok &= dev < 1e-3;
    }

    // negative control: a diffeomorphism that is not harmonic for any
    // constant-λ reconstructed metric must fail by a clear margin
    let control = FieldGrid::from_fn(81, 81, (0.7, 1.3), (0.7, 1.3), |x, y| {
        let z = Complex64::new(x, y);
        z + 0.3 * z.conj() * z.conj()
    });
    let dec = verify::beltrami_decompose(&control).unwrap();
    let control_fails = if dec.phi_harmonicity_max >= 1e-2 {
        true
    } else {
        match verify::reconstruct_metric(&control, Complex64::new(0.0, 0.0), 1e-2) {
            Ok(rec) => rec.harmonic_residual >= 1e-2,
            Err(_) => true,
        }
    };
    details.push(format!(
        "negative control fails: {control_fails} (phi-harm {:.2e})",
        dec.phi_harmonicity_max
    ));
    ok &= control_fails;

    conclude(4, "theorem round trip", ok, &details.join("; "));
}

// ---------------------------------------------------------------- 5

#[test]
fn criterion_5_beltrami_solver() {
    // Exact solution of the divergence-form system with the half-plane
    // pair ω(ξ) = −ln tanh ξ: since tanh ω = 1/cosh 2ξ and
    // coth ω = cosh 2ξ, R* = η + ½ sinh 2ξ satisfies
    // (tanh ω R_ξ)_ξ + (coth ω R_η)_η = 0, with conjugate
    // S* = η − ½ sinh 2ξ.
    let exact_r = |x: f64, y: f64| y + 0.5 * (2.0 * x).sinh();
    // the window keeps the cosh 2ξ coefficient scale modest so the
    // orthogonality truncation clears 1e−4 at these resolutions
    let solve = |n: usize| {
        let grid = FieldGrid::from_fn(n, n, (0.5, 0.75), (0.0, 0.25), |_, _| 0.0f64);
        let omega = FieldGrid::from_fn(n, n, (0.5, 0.75), (0.0, 0.25), |x, _| {
            catalog::litam_omega(x)
        });
        let bc = BoundaryData::from_fn(&grid, exact_r);
        // absolute residual tolerance: the divergence residual of the
        // nontrivial exact solution has a rounding floor just above the
        // 1e−10 default, far below the discretization error measured here
        let cfg = SolverConfig { tol: 1e-8, ..SolverConfig::default() };
        let sol = beltrami::solve_r(&omega, &bc, &cfg).unwrap();
        assert!(sol.converged);
        let mut err = 0.0f64;
        for j in 1..n - 1 {
            for i in 1..n - 1 {
                err = err.max((sol.r.at(i, j) - exact_r(sol.r.x(i), sol.r.y(j))).abs());
            }
        }
        (sol.r, omega, err)
    };
    let (_, _, err_coarse) = solve(65);
    let (r, omega, err_fine) = solve(129);
    let ratio = err_coarse / err_fine;

    let (s, _closure) = beltrami::reconstruct_s(&r, &omega, (0, 0), 0.0).unwrap();
    let mut u = r.map(|_| Complex64::new(0.0, 0.0));
    for k in 0..r.values.len() {
        u.values[k] = Complex64::new(r.values[k], s.values[k]);
    }
    // drop a two-node rim: the path integration behind S falls back to
    // one-sided differences on the outermost layer, and the centered
    // orthogonality stencil touches that layer one node in
    let m = 2usize;
    let (nx, ny) = (u.nx, u.ny);
    let cropped = FieldGrid::from_fn(
        nx - 2 * m,
        ny - 2 * m,
        (u.x(m), u.x(nx - 1 - m)),
        (u.y(m), u.y(ny - 1 - m)),
        |_, _| Complex64::new(0.0, 0.0),
    );
    let mut cropped = cropped;
    for j in 0..cropped.ny {
        for i in 0..cropped.nx {
            *cropped.at_mut(i, j) = *u.at(i + m, j + m);
        }
    }
    let orth = verify::orthogonality_residual(&cropped);

    let ok = err_fine < 1e-3 && (3.5..=4.5).contains(&ratio) && orth < 1e-4;
    conclude(
        5,
        "first-order system solver",
        ok,
        &format!(
            "sup error {err_fine:.2e} at 129x129, halving ratio {ratio:.2}, \
             orthogonality {orth:.2e}"
        ),
    );
}

// ---------------------------------------------------------------- 6

#[test]
fn criterion_6_cylinder_shooting() {
    let t = 2.0;
    let sol = catalog::wolf_solve(t, 1e-4).unwrap();
    let endpoint = (sol.u(1.0) - 2.0f64.acosh()).abs();

    let form = catalog::wolf_as_soliton(t, sol.c0).unwrap();
    let n = 201;
    let mut sup = 0.0f64;
    let grid = FieldGrid::from_fn(n, n, (0.0, 1.0), (0.0, 1.0), |_, _| 0.0f64);
    for j in 0..n {
        for i in 0..n {
            let (x, y) = (grid.x(i), grid.y(j));
            sup = sup.max((sol.map(x, y) - form.map(x, y)).norm());
        }
    }

    // harmonic residual, Richardson-certified: the plain second-order
    // checker has an O(h²) truncation floor, so the h → 0 limit is
    // estimated from a grid halving
    let res = |n: usize| {
        let g = FieldGrid::from_fn(n, n, (0.0, 1.0), (0.0, 1.0), |_, _| 0.0f64);
        let u = sol.map_grid(&g);
        verify::harmonic_residual(&u, &MetricSpec::WolfCylinder { t }).unwrap()
    };
    let (r1, r2) = (res(201), res(401));
    let harmonic = ((4.0 * r2 - r1) / 3.0).abs();

    let ok = endpoint < 1e-10 && sup < 1e-6 && harmonic < 1e-5;
    conclude(
        6,
        "cylinder shooting BVP",
        ok,
        &format!(
            "|u(1) - arccosh 2| = {endpoint:.2e}, path agreement {sup:.2e}, \
             harmonic residual {harmonic:.2e} (plain {r2:.2e})"
        ),
    );
}

// ---------------------------------------------------------------- 7

#[test]
fn criterion_7_strip_wave() {
    let (alpha, a) = (1.0, 1.0);
    let b = catalog::stw_find_b(alpha, a, (0.2, 2.5)).unwrap();
    let mismatch = catalog::stw_quarter_period_mismatch(alpha, a, b).unwrap().abs();
    let p = StwParams::new(alpha, a, b).unwrap();

    let mut worst_quad = 0.0f64;
    let mut worst_h = 0.0f64;
    let fd = 1e-5;
    for k in 0..100 {
        let y = 0.2 + (PI - 0.4) * k as f64 / 99.0;
        let s = catalog::stw_s(&p, y);
        let sy = catalog::stw_ds_dy(&p, y);
        let s2 = s.sin().powi(2);
        let quad = alpha * alpha + (b * b + a.powi(4) - alpha * alpha) * s2 - a.powi(4) * s2 * s2;
        worst_quad = worst_quad.max((sy * sy - quad).abs());
        let hp = (catalog::stw_h(&p, y + fd) - catalog::stw_h(&p, y - fd)) / (2.0 * fd);
        worst_h = worst_h.max((hp - a * a * s2).abs());
    }

    // harmonic residual on the open strip window, Richardson-certified
    let res = |nx: usize, ny: usize| {
        let g = FieldGrid::from_fn(nx, ny, (0.0, 1.0), (0.6, PI - 0.6), |_, _| 0.0f64);
        let u = catalog::stw_map(&p, &g).unwrap();
        verify::harmonic_residual(&u, &MetricSpec::Strip).unwrap()
    };
    let (r1, r2) = (res(101, 401), res(201, 801));
    let harmonic = ((4.0 * r2 - r1) / 3.0).abs();

    let ok = mismatch < 1e-8 && worst_quad < 1e-8 && worst_h < 1e-8 && harmonic < 1e-5;
    conclude(
        7,
        "strip wave family",
        ok,
        &format!(
            "quarter-period mismatch {mismatch:.2e}, quadratic identity {worst_quad:.2e}, \
             height derivative {worst_h:.2e}, harmonic residual {harmonic:.2e} (plain {r2:.2e})"
        ),
    );
}

// ---------------------------------------------------------------- 8

#[test]
fn criterion_8_transform_pair() {
    // kink seed solves sine-Gordon
    let kink = FieldGrid::from_fn(401, 101, (-0.5, 0.5), (0.0, 1.0), |x, _| {
        backlund::kink_theta(x)
    });
    let sg = backlund::sine_gordon_residual(&kink);

    // integrating the first-order pair from a point seed reproduces the
    // closed-form branch selected by the pair relations
    let gc = FieldGrid::from_fn(161, 161, (1.0, 1.5), (0.2, 0.8), |_, _| 0.0f64);
    let theta = FieldGrid::from_fn(161, 161, (1.0, 1.5), (0.2, 0.8), |x, _| {
        backlund::kink_theta(x)
    });
    let seed = (80, 80);
    let omega0 = backlund::example_omega_direct(gc.x(seed.0), gc.y(seed.1));
    let out = backlund::backlund_integrate(&theta, seed, omega0, 1e-3).unwrap();
    let mut branch_dev = 0.0f64;
    for j in 0..gc.ny {
        for i in 0..gc.nx {
            let exact = backlund::example_omega_direct(gc.x(i), gc.y(j));
            branch_dev = branch_dev.max((out.omega.at(i, j) - exact).abs());
        }
    }

    // explicit example map: harmonic residual (Richardson-certified) and
    // the target conformal factor against 1/S²
    let res = |n: usize| {
        let g = FieldGrid::from_fn(n, n, (-0.3, 0.3), (2.5, 3.5), |_, _| 0.0f64);
        let u = backlund::backlund_example_map(&g).unwrap();
        verify::harmonic_residual(&u, &MetricSpec::HalfPlane).unwrap()
    };
    let (r1, r2) = (res(201), res(401));
    let harmonic = ((4.0 * r2 - r1) / 3.0).abs();

    // 1/S² is exactly the factor that normalizes the Hopf differential
    // to 1 for this map: check e^F u_ζ ū_ζ = 1 with analytic partials
    let mut factor_dev = 0.0f64;
    for k in 0..100 {
        let xi = -0.4 + 0.8 * (k % 10) as f64 / 9.0;
        let eta = 2.2 + 1.5 * (k / 10) as f64 / 9.0;
        let u = backlund::backlund_example_point(xi, eta).unwrap();
        let sech = 1.0 / (2.0 * xi).cosh();
        let th = (2.0 * xi).tanh();
        let u_xi = Complex64::new(
            2.0 * eta * eta * sech * sech + 0.5,
            -(2.0 * eta * eta * sech * th + 0.5 * (2.0 * xi).sinh()),
        );
        let u_eta = Complex64::new(2.0 * eta * th, 2.0 * eta * sech);
        let uz = 0.5 * (u_xi - Complex64::i() * u_eta);
        let ubz = 0.5 * (u_xi.conj() - Complex64::i() * u_eta.conj());
        let hopf = (uz * ubz) / (u.im * u.im);
        factor_dev = factor_dev.max((hopf - Complex64::new(1.0, 0.0)).norm());
    }

    let ok = sg < 1e-6 && branch_dev < 1e-5 && harmonic < 1e-5 && factor_dev < 1e-5;
    conclude(
        8,
        "transform pair",
        ok,
        &format!(
            "kink sine-Gordon {sg:.2e}, branch recovery {branch_dev:.2e}, \
             harmonic residual {harmonic:.2e} (plain {r2:.2e}), target factor {factor_dev:.2e}"
        ),
    );
}

// ---------------------------------------------------------------- 9

#[test]
fn criterion_9_determinism() {
    let dir = std::env::temp_dir();
    let tag = std::process::id();
    let cfg_path = dir.join(format!("harmap-acc-{tag}.json"));
    std::fs::write(
        &cfg_path,
        r#"{"grid": "101x101", "a": 1.0, "seed": 11}"#,
    )
    .unwrap();

    let argv = |extra: &[&str]| -> Vec<String> {
        std::iter::once("harmap".to_string())
            .chain(extra.iter().map(|s| s.to_string()))
            .collect()
    };

    let mut ok = true;
    let mut details = Vec::new();
    for (label, base) in [
        ("catalog example", vec!["example", "li-tam", "--config", cfg_path.to_str().unwrap()]),
        ("soliton map", vec!["soliton-map"]),
    ] {
        let outs: Vec<_> = (0..2)
            .map(|run_idx| {
                let out = dir.join(format!("harmap-acc-{tag}-{label}-{run_idx}.csv"));
                let rep = dir.join(format!("harmap-acc-{tag}-{label}-{run_idx}.json"));
                let mut args = base.clone();
                args.extend(["--out", out.to_str().unwrap(), "--report", rep.to_str().unwrap()]);
                let code = cli::run(argv(&args));
                assert_eq!(code, cli::EXIT_OK, "{label} run {run_idx} exited {code}");
                let bytes = (std::fs::read(&out).unwrap(), std::fs::read(&rep).unwrap());
                std::fs::remove_file(&out).ok();
                std::fs::remove_file(&rep).ok();
                bytes
            })
            .collect();
        let same = outs[0] == outs[1];
        details.push(format!("{label}: byte-identical {same}"));
        ok &= same;
    }
    std::fs::remove_file(&cfg_path).ok();

    conclude(9, "determinism", ok, &details.join("; "));
}
