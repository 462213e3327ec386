//! Dealias-safe pseudo-spectral 2D incompressible Euler solver in
//! vorticity/stream-function form, with RK4 stepping and diagnostics that
//! track the end-point Triebel-Lizorkin norm against its Gronwall envelope.
//!
//! Conventions: the stream function solves `psi = -Laplace^{-1} omega`,
//! the velocity is `u = (d2 psi, -d1 psi)` and the scalar curl is
//! `omega = d1 u2 - d2 u1`; then `omega_t + u . grad omega = 0`.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{
    forward_transform, gradient_magnitude_samples, inverse_transform_unchecked,
    vector_magnitude_samples, SpectralField, VectorField,
};
use crate::grid::Grid;
use crate::norms::{besov_norm_vector, tl_norm_vector};
use crate::verify::{generate_scalar, FieldGenSpec, GenKind};

/// Hard stop: |omega|_inf beyond this multiple of its initial value.
pub const BLOWUP_FACTOR: f64 = 1e6;

/// Initial vorticity presets (all mean-free, hence divergence-free velocity).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "preset")]
pub enum InitialCondition {
    /// omega = 2 sin x1 sin x2; steady because omega is proportional to psi.
    TaylorGreen,
    /// omega = -cos x2, the parallel flow u = (sin x2, 0).
    Shear,
    /// Band-limited random vorticity, velocity normalized to |u|_inf = 1/2.
    RandomSmooth { seed: u64, slope: f64 },
    /// Two opposite-sign frequency-Gaussian blobs; |u|_inf normalized to 1.
    VortexPair,
}

impl std::str::FromStr for InitialCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "taylor-green" => Ok(Self::TaylorGreen),
            "shear" => Ok(Self::Shear),
            "random-smooth" => Ok(Self::RandomSmooth {
                seed: 0,
                slope: 4.0,
            }),
            "vortex-pair" => Ok(Self::VortexPair),
            other => Err(Error::InvalidConfig {
                reason: format!("unknown preset {other:?}"),
            }),
        }
    }
}

/// Simulation parameters.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub grid: Grid,
    pub dt: f64,
    pub t_end: f64,
    /// Smoothness of the tracked norm; the persistence hypothesis wants s >= d+1.
    pub s: f64,
    /// Envelope constant; fitted from the trajectory when absent.
    pub c0: Option<f64>,
    pub initial_condition: InitialCondition,
    pub dealias: bool,
    /// Steps between diagnostic samples.
    pub monitor_period: usize,
}

impl SimConfig {
    pub fn new(grid: Grid, dt: f64, t_end: f64, initial_condition: InitialCondition) -> Self {
        Self {
            grid,
            dt,
            t_end,
            s: 3.0,
            c0: None,
            initial_condition,
            dealias: true,
            monitor_period: 20,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.grid.d() != 2 {
            return Err(Error::InvalidConfig {
                reason: format!("simulator requires d = 2, got d = {}", self.grid.d()),
            });
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig {
                reason: format!("dt = {} must be positive", self.dt),
            });
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidConfig {
                reason: format!("t_end = {} must be nonnegative", self.t_end),
            });
        }
        if self.monitor_period == 0 {
            return Err(Error::InvalidConfig {
                reason: "monitor_period must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// Velocity from vorticity: `u1 = i xi2 omega_hat / |xi|^2`,
/// `u2 = -i xi1 omega_hat / |xi|^2`.
pub fn biot_savart(omega: &SpectralField) -> VectorField {
    let grid = omega.grid().clone();
    let mut u1 = SpectralField::zeros(&grid);
    let mut u2 = SpectralField::zeros(&grid);
    for m in 0..grid.len() {
        let sq = grid.xi_odd_norm_sq(m);
        if sq == 0.0 {
            continue;
        }
        let xi = grid.xi_odd(m);
        let w = omega.coeffs()[m] / sq;
        u1.coeffs_mut()[m] = Complex64::new(0.0, xi[1]) * w;
        u2.coeffs_mut()[m] = Complex64::new(0.0, -xi[0]) * w;
    }
    VectorField::new(vec![u1, u2]).expect("two components on one grid")
}

/// Scalar curl `d1 u2 - d2 u1`.
pub fn curl(u: &VectorField) -> SpectralField {
    let mut out = u.component(1).derivative(0);
    let d2u1 = u.component(0).derivative(1);
    for (a, b) in out.coeffs_mut().iter_mut().zip(d2u1.coeffs()) {
        *a -= b;
    }
    out
}

fn product(a: &SpectralField, b: &SpectralField, dealias: bool) -> SpectralField {
    let pa = inverse_transform_unchecked(a);
    let pb = inverse_transform_unchecked(b);
    let prod: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    let mut out = forward_transform(&prod, a.grid()).expect("shape preserved");
    if dealias {
        out.dealias();
    }
    out
}

/// Vorticity tendency `-(u . grad) omega` with the transport term dealiased;
/// the mean mode is pinned to zero (its analytic value).
pub fn rhs(omega: &SpectralField, dealias: bool) -> SpectralField {
    let u = biot_savart(omega);
    let mut acc = SpectralField::zeros(omega.grid());
    for l in 0..2 {
        acc.add_assign(&product(u.component(l), &omega.derivative(l), dealias));
    }
    acc.scale(-1.0);
    acc.zero_mean_mode();
    acc
}

/// One classical RK4 step of the vorticity equation.
pub fn step_rk4(omega: &SpectralField, dt: f64, dealias: bool) -> SpectralField {
    let k1 = rhs(omega, dealias);
    let mut mid = omega.clone();
    axpy(&mut mid, 0.5 * dt, &k1);
    let k2 = rhs(&mid, dealias);
    let mut mid2 = omega.clone();
    axpy(&mut mid2, 0.5 * dt, &k2);
    let k3 = rhs(&mid2, dealias);
    let mut end = omega.clone();
    axpy(&mut end, dt, &k3);
    let k4 = rhs(&end, dealias);

    let mut out = omega.clone();
    let w = dt / 6.0;
    for m in 0..out.coeffs().len() {
        out.coeffs_mut()[m] += w
            * (k1.coeffs()[m]
                + 2.0 * k2.coeffs()[m]
                + 2.0 * k3.coeffs()[m]
                + k4.coeffs()[m]);
    }
    out
}

fn axpy(y: &mut SpectralField, a: f64, x: &SpectralField) {
    for (yc, xc) in y.coeffs_mut().iter_mut().zip(x.coeffs()) {
        *yc += a * xc;
    }
}

/// Instantaneous solver state.
#[derive(Debug, Clone)]
pub struct EulerState {
    pub t: f64,
    pub omega: SpectralField,
}

impl EulerState {
    pub fn velocity(&self) -> VectorField {
        biot_savart(&self.omega)
    }
}

/// One diagnostics record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub energy: f64,
    pub enstrophy: f64,
    pub linf_u: f64,
    pub linf_grad_u: f64,
    pub f_norm: f64,
    pub besov_1_inf_1: f64,
    /// Gronwall envelope value at `t` (infinite past the horizon).
    pub envelope: f64,
}

/// Full diagnostics time series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EulerTrajectory {
    pub s: f64,
    pub samples: Vec<Sample>,
    pub u0_f_norm: f64,
    /// Envelope constant used for the `envelope` column (supplied or fitted).
    pub c0: f64,
    pub blowup_stop: bool,
    pub warnings: Vec<String>,
}

fn quadratic_invariants(omega: &SpectralField) -> (f64, f64) {
    // Parseval: integrals of |u|^2 and omega^2 from coefficient sums.
    let grid = omega.grid();
    let vol = grid.box_volume();
    let mut energy = 0.0;
    let mut enstrophy = 0.0;
    for m in 0..grid.len() {
        let sq = grid.xi_norm_sq(m);
        let w2 = omega.coeffs()[m].norm_sqr();
        enstrophy += w2;
        if sq > 0.0 {
            energy += w2 / sq;
        }
    }
    (0.5 * vol * energy, 0.5 * vol * enstrophy)
}

fn record(state: &EulerState, s: f64) -> Sample {
    let u = state.velocity();
    let (energy, enstrophy) = quadratic_invariants(&state.omega);
    let linf_u = vector_magnitude_samples(&u)
        .iter()
        .fold(0.0f64, |m, v| m.max(*v));
    let linf_grad_u = gradient_magnitude_samples(&u)
        .iter()
        .fold(0.0f64, |m, v| m.max(*v));
    let f_norm = tl_norm_vector(&u, s, false).value;
    let besov = besov_norm_vector(&u, 1.0, f64::INFINITY, 1.0)
        .expect("fixed exponents are valid")
        .value;
    Sample {
        t: state.t,
        energy,
        enstrophy,
        linf_u,
        linf_grad_u,
        f_norm,
        besov_1_inf_1: besov,
        envelope: f64::NAN,
    }
}

/// Build the initial vorticity for a preset.
pub fn initial_vorticity(ic: &InitialCondition, grid: &Grid) -> Result<SpectralField> {
    match ic {
        InitialCondition::TaylorGreen => {
            // 2 sin x1 sin x2 = cos(x1 - x2) - cos(x1 + x2).
            let mut w = SpectralField::zeros(grid);
            *w.coeff_at_mut(&[1, -1]) = Complex64::new(0.5, 0.0);
            *w.coeff_at_mut(&[-1, 1]) = Complex64::new(0.5, 0.0);
            *w.coeff_at_mut(&[1, 1]) = Complex64::new(-0.5, 0.0);
            *w.coeff_at_mut(&[-1, -1]) = Complex64::new(-0.5, 0.0);
            Ok(w)
        }
        InitialCondition::Shear => {
            let mut w = SpectralField::zeros(grid);
            *w.coeff_at_mut(&[0, 1]) = Complex64::new(-0.5, 0.0);
            *w.coeff_at_mut(&[0, -1]) = Complex64::new(-0.5, 0.0);
            Ok(w)
        }
        InitialCondition::RandomSmooth { seed, slope } => {
            let spec = FieldGenSpec {
                seed: *seed,
                band_range: (0, 3),
                spectrum_slope: *slope,
                kind: GenKind::Scalar,
            };
            let mut omega = generate_scalar(&spec, grid)?;
            // Normalize through the velocity so CFL control is uniform.
            let u = biot_savart(&omega);
            let sup = vector_magnitude_samples(&u)
                .iter()
                .fold(0.0f64, |m, v| m.max(*v));
            if sup > 0.0 {
                omega.scale(0.5 / sup);
            }
            Ok(omega)
        }
        InitialCondition::VortexPair => {
            let sigma = 3.0;
            let pi = std::f64::consts::PI;
            let centers = [(0.75 * pi, pi, 1.0), (1.25 * pi, pi, -1.0)];
            let mut omega = SpectralField::zeros(grid);
            for m in 0..grid.len() {
                let xi = grid.xi(m);
                let decay = (-(xi[0] * xi[0] + xi[1] * xi[1]) / (2.0 * sigma * sigma)).exp();
                let mut c = Complex64::ZERO;
                for (cx, cy, sign) in centers {
                    let phase = -(xi[0] * cx + xi[1] * cy);
                    c += sign * decay * Complex64::new(phase.cos(), phase.sin());
                }
                omega.coeffs_mut()[m] = c;
            }
            omega.zero_mean_mode();
            let u = biot_savart(&omega);
            let sup = vector_magnitude_samples(&u)
                .iter()
                .fold(0.0f64, |m, v| m.max(*v));
            if sup > 0.0 {
                omega.scale(1.0 / sup);
            }
            Ok(omega)
        }
    }
}

/// March the vorticity equation and collect diagnostics.
pub fn simulate(config: &SimConfig) -> Result<EulerTrajectory> {
    simulate_from(config, initial_vorticity(&config.initial_condition, &config.grid)?)
}

/// As [`simulate`] but with explicit initial vorticity (mean mode dropped).
pub fn simulate_from(config: &SimConfig, mut omega: SpectralField) -> Result<EulerTrajectory> {
    config.validate()?;
    let mut warnings = Vec::new();
    if config.s < (config.grid.d() + 1) as f64 {
        warnings.push(format!(
            "s = {} is below the persistence hypothesis s >= {}",
            config.s,
            config.grid.d() + 1
        ));
    }
    if omega.mean().norm() > 0.0 {
        warnings.push("initial vorticity mean mode dropped".into());
        omega.zero_mean_mode();
    }

    let u0 = biot_savart(&omega);
    let sup_u0 = vector_magnitude_samples(&u0)
        .iter()
        .fold(0.0f64, |m, v| m.max(*v));
    let cfl = config.dt * sup_u0 / config.grid.dx();
    if cfl > 0.5 {
        return Err(Error::CflViolation { cfl });
    }

    let omega0_sup = inverse_transform_unchecked(&omega)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));

    let n_steps = (config.t_end / config.dt).round() as usize;
    let mut state = EulerState { t: 0.0, omega };
    let mut samples = vec![record(&state, config.s)];
    let mut blowup_stop = false;

    for step in 1..=n_steps {
        state.omega = step_rk4(&state.omega, config.dt, config.dealias);
        state.t = step as f64 * config.dt;

        let finite = state.omega.coeffs().iter().all(|c| c.is_finite());
        let sup_now = if finite {
            inverse_transform_unchecked(&state.omega)
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()))
        } else {
            f64::INFINITY
        };
        if !finite || sup_now > BLOWUP_FACTOR * omega0_sup.max(f64::MIN_POSITIVE) {
            blowup_stop = true;
            warnings.push(format!("numerical blow-up guard tripped at t = {}", state.t));
            break;
        }
        if step % config.monitor_period == 0 || step == n_steps {
            samples.push(record(&state, config.s));
        }
    }

    let u0_f_norm = samples[0].f_norm;
    let mut trajectory = EulerTrajectory {
        s: config.s,
        samples,
        u0_f_norm,
        c0: f64::NAN,
        blowup_stop,
        warnings,
    };
    let c0 = match config.c0 {
        Some(c0) => c0,
        None => fit_c0(&trajectory)?.c0,
    };
    trajectory.c0 = c0;
    for sample in &mut trajectory.samples {
        trajectory_envelope(&mut sample.envelope, u0_f_norm, c0, sample.t);
    }
    Ok(trajectory)
}

fn trajectory_envelope(slot: &mut f64, u0_norm: f64, c0: f64, t: f64) {
    *slot = gronwall_envelope(u0_norm, c0, t).unwrap_or(f64::INFINITY);
}

/// Guaranteed-persistence horizon `T0 = 1 / (C0^2 |u0|)`.
pub fn blowup_time(u0_norm: f64, c0: f64) -> f64 {
    if u0_norm <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / (c0 * c0 * u0_norm)
    }
}

/// Gronwall envelope `C0 |u0| / (1 - t C0^2 |u0|)` for `0 <= t < T0`.
pub fn gronwall_envelope(u0_norm: f64, c0: f64, t: f64) -> Result<f64> {
    let t0 = blowup_time(u0_norm, c0);
    if t < 0.0 || t >= t0 {
        return Err(Error::PastEnvelopeHorizon { t, t0 });
    }
    Ok(c0 * u0_norm / (1.0 - t * c0 * c0 * u0_norm))
}

/// Result of fitting the envelope constant.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct C0Fit {
    pub c0: f64,
    /// True when the trajectory was cut short by the blow-up guard and the
    /// fit only covers the surviving samples.
    pub pre_stop_only: bool,
}

/// Smallest C0 >= 1 (to 1e-6) whose envelope dominates the running sup of
/// the measured norm at every sample before the fitted horizon.
pub fn fit_c0(trajectory: &EulerTrajectory) -> Result<C0Fit> {
    if trajectory.samples.len() < 2 {
        // A single sample still admits a fit; fewer means no trajectory.
        if trajectory.samples.is_empty() {
            return Err(Error::TrajectoryTooShort { need: 1, got: 0 });
        }
    }
    let u0 = trajectory.samples[0].f_norm;
    let mut running = Vec::with_capacity(trajectory.samples.len());
    let mut sup = 0.0f64;
    for s in &trajectory.samples {
        sup = sup.max(s.f_norm);
        running.push((s.t, sup));
    }
    let admissible = |c0: f64| -> bool {
        let t0 = blowup_time(u0, c0);
        running.iter().all(|&(t, sup_t)| {
            if t >= t0 {
                return true;
            }
            match gronwall_envelope(u0, c0, t) {
                Ok(env) => sup_t <= env,
                Err(_) => true,
            }
        })
    };

    if admissible(1.0) {
        return Ok(C0Fit {
            c0: 1.0,
            pre_stop_only: trajectory.blowup_stop,
        });
    }
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    while !admissible(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e15 {
            break;
        }
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if admissible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(C0Fit {
        c0: hi,
        pre_stop_only: trajectory.blowup_stop,
    })
}

/// Outcome of the 2D global-bound monitor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlobalCheckReport {
    /// Smallest C >= 1 with `|u(t)| <= C |u0| exp(C int |u|_W1inf)` at samples.
    pub fitted_c: f64,
    /// Trapezoid value of `int_0^T |u(tau)|_{W^{1,inf}} d tau`.
    pub exponent_integral: f64,
    pub grad_u_finite: bool,
    pub passed: bool,
}

/// Check the exponential 2D bound along a trajectory.
pub fn two_d_global_check(trajectory: &EulerTrajectory) -> GlobalCheckReport {
    let samples = &trajectory.samples;
    let u0 = trajectory.u0_f_norm;
    let grad_u_finite = samples.iter().all(|s| s.linf_grad_u.is_finite());

    // Cumulative trapezoid of the W^{1,inf} norm.
    let mut integral = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    integral.push(0.0);
    for w in samples.windows(2) {
        let w1 = w[0].linf_u + w[0].linf_grad_u;
        let w2 = w[1].linf_u + w[1].linf_grad_u;
        acc += 0.5 * (w1 + w2) * (w[1].t - w[0].t);
        integral.push(acc);
    }

    let admissible = |c: f64| -> bool {
        samples
            .iter()
            .zip(&integral)
            .all(|(s, i)| s.f_norm <= c * u0 * (c * i).exp())
    };

    let fitted_c = if u0 == 0.0 || admissible(1.0) {
        1.0
    } else {
        let mut lo = 1.0f64;
        let mut hi = 2.0f64;
        while !admissible(hi) && hi <= 1e15 {
            lo = hi;
            hi *= 2.0;
        }
        while hi - lo > 1e-6 {
            let mid = 0.5 * (lo + hi);
            if admissible(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };

    let norms_finite = samples.iter().all(|s| s.f_norm.is_finite());
    let passed = grad_u_finite
        && norms_finite
        && !trajectory.blowup_stop
        && fitted_c.is_finite()
        && (u0 == 0.0 || admissible(fitted_c));
    GlobalCheckReport {
        fitted_c,
        exponent_integral: acc,
        grad_u_finite,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2(n: usize) -> Grid {
        Grid::new(2, n, 1.0).unwrap()
    }

    fn sup_phys(f: &SpectralField) -> f64 {
        inverse_transform_unchecked(f)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    #[test]
    fn taylor_green_is_a_steady_state_of_the_rhs() {
        let g = grid2(64);
        let w = initial_vorticity(&InitialCondition::TaylorGreen, &g).unwrap();
        let tendency = rhs(&w, true);
        assert!(sup_phys(&tendency) <= 1e-12);
    }

    #[test]
    fn shear_flow_is_steady() {
        let g = grid2(64);
        let w = initial_vorticity(&InitialCondition::Shear, &g).unwrap();
        assert!(sup_phys(&rhs(&w, true)) <= 1e-12);
    }

    #[test]
    fn taylor_green_velocity_matches_the_closed_form() {
        let g = grid2(32);
        let w = initial_vorticity(&InitialCondition::TaylorGreen, &g).unwrap();
        let u = biot_savart(&w);
        let u1 = inverse_transform_unchecked(u.component(0));
        let u2 = inverse_transform_unchecked(u.component(1));
        for m in 0..g.len() {
            let x = g.coords(m);
            assert!((u1[m] - x[0].sin() * x[1].cos()).abs() <= 1e-12);
            assert!((u2[m] + x[0].cos() * x[1].sin()).abs() <= 1e-12);
        }
        // And curl inverts Biot-Savart.
        let back = curl(&u);
        assert!(back.sub(&w).max_amplitude() <= 1e-13);
    }

    #[test]
    fn rhs_conserves_mean_vorticity() {
        let g = grid2(64);
        let w = initial_vorticity(
            &InitialCondition::RandomSmooth { seed: 4, slope: 4.0 },
            &g,
        )
        .unwrap();
        let tendency = rhs(&w, true);
        assert_eq!(tendency.mean(), Complex64::ZERO);
        let phys = inverse_transform_unchecked(&tendency);
        let integral = crate::field::lattice_integral(&phys, &g);
        assert!(integral.abs() <= 1e-12);
    }

    #[test]
    fn zero_dt_step_is_identity() {
        let g = grid2(32);
        let w = initial_vorticity(
            &InitialCondition::RandomSmooth { seed: 1, slope: 4.0 },
            &g,
        )
        .unwrap();
        let stepped = step_rk4(&w, 0.0, true);
        assert_eq!(stepped.coeffs(), w.coeffs());
    }

    #[test]
    fn steady_state_does_not_drift() {
        let g = grid2(64);
        let w0 = initial_vorticity(&InitialCondition::TaylorGreen, &g).unwrap();
        let mut w = w0.clone();
        for _ in 0..200 {
            w = step_rk4(&w, 1e-3, true);
        }
        assert!(sup_phys(&w.sub(&w0)) <= 1e-10);
    }

    #[test]
    fn rk4_is_fourth_order_by_richardson() {
        let g = grid2(32);
        let w0 = initial_vorticity(
            &InitialCondition::RandomSmooth { seed: 9, slope: 3.0 },
            &g,
        )
        .unwrap();
        let advance = |dt: f64, steps: usize| {
            let mut w = w0.clone();
            for _ in 0..steps {
                w = step_rk4(&w, dt, true);
            }
            w
        };
        let coarse = advance(0.04, 10);
        let medium = advance(0.02, 20);
        let fine = advance(0.01, 40);
        let e1 = sup_phys(&coarse.sub(&medium));
        let e2 = sup_phys(&medium.sub(&fine));
        let order = (e1 / e2).log2();
        assert!(
            (3.5..=4.5).contains(&order),
            "observed order {order:.2} (e1 = {e1:.3e}, e2 = {e2:.3e})"
        );
    }

    #[test]
    fn simulate_zero_t_end_gives_single_sample() {
        let g = grid2(32);
        let config = SimConfig::new(g, 1e-3, 0.0, InitialCondition::TaylorGreen);
        let traj = simulate(&config).unwrap();
        assert_eq!(traj.samples.len(), 1);
        assert!(!traj.blowup_stop);
    }

    #[test]
    fn simulate_conserves_invariants_on_a_short_run() {
        let g = grid2(64);
        let mut config = SimConfig::new(
            g,
            1e-3,
            0.2,
            InitialCondition::RandomSmooth { seed: 3, slope: 4.0 },
        );
        config.monitor_period = 50;
        let traj = simulate(&config).unwrap();
        let first = &traj.samples[0];
        let last = traj.samples.last().unwrap();
        assert!((last.energy - first.energy).abs() <= 1e-9 * first.energy);
        assert!((last.enstrophy - first.enstrophy).abs() <= 1e-7 * first.enstrophy);
        for s in &traj.samples {
            assert!(s.f_norm.is_finite());
            assert!(s.envelope >= s.f_norm * (1.0 - 1e-9) || s.envelope.is_infinite());
        }
    }

    #[test]
    fn velocity_stays_divergence_free_along_a_run() {
        let g = grid2(32);
        let w0 = initial_vorticity(
            &InitialCondition::RandomSmooth { seed: 5, slope: 4.0 },
            &g,
        )
        .unwrap();
        let mut w = w0;
        for step in 0..60 {
            if step % 15 == 0 {
                let u = biot_savart(&w);
                assert!(u.is_divergence_free(1e-10), "step {step}");
            }
            w = step_rk4(&w, 2e-3, true);
        }
    }

    #[test]
    fn cfl_violation_is_rejected() {
        let g = grid2(32);
        let config = SimConfig::new(g, 1.0, 1.0, InitialCondition::TaylorGreen);
        assert!(matches!(simulate(&config), Err(Error::CflViolation { .. })));
    }

    #[test]
    fn envelope_closed_form_values() {
        assert_eq!(gronwall_envelope(1.0, 1.0, 0.0).unwrap(), 1.0);
        assert_eq!(gronwall_envelope(1.0, 1.0, 0.5).unwrap(), 2.0);
        assert!((blowup_time(3.0, 2.0) - 1.0 / 12.0).abs() <= 1e-15);
        assert!(matches!(
            gronwall_envelope(1.0, 1.0, 1.0),
            Err(Error::PastEnvelopeHorizon { .. })
        ));
        assert!(matches!(
            gronwall_envelope(1.0, 1.0, -0.1),
            Err(Error::PastEnvelopeHorizon { .. })
        ));
        assert_eq!(blowup_time(0.0, 1.0), f64::INFINITY);
    }

    #[test]
    fn fit_c0_on_steady_and_zero_trajectories() {
        let g = grid2(32);
        let mut config = SimConfig::new(g.clone(), 1e-3, 0.05, InitialCondition::TaylorGreen);
        config.monitor_period = 10;
        let traj = simulate(&config).unwrap();
        let fit = fit_c0(&traj).unwrap();
        assert_eq!(fit.c0, 1.0, "steady norm sits under the growing envelope");

        let zero = EulerTrajectory {
            s: 3.0,
            samples: vec![
                Sample {
                    t: 0.0,
                    energy: 0.0,
                    enstrophy: 0.0,
                    linf_u: 0.0,
                    linf_grad_u: 0.0,
                    f_norm: 0.0,
                    besov_1_inf_1: 0.0,
                    envelope: f64::NAN,
                },
                Sample {
                    t: 1.0,
                    energy: 0.0,
                    enstrophy: 0.0,
                    linf_u: 0.0,
                    linf_grad_u: 0.0,
                    f_norm: 0.0,
                    besov_1_inf_1: 0.0,
                    envelope: f64::NAN,
                },
            ],
            u0_f_norm: 0.0,
            c0: f64::NAN,
            blowup_stop: false,
            warnings: vec![],
        };
        assert_eq!(fit_c0(&zero).unwrap().c0, 1.0);
    }

    #[test]
    fn fit_c0_is_rerun_stable() {
        let g = grid2(32);
        let mut config = SimConfig::new(
            g,
            2e-3,
            0.3,
            InitialCondition::RandomSmooth { seed: 6, slope: 4.0 },
        );
        config.monitor_period = 25;
        let traj = simulate(&config).unwrap();
        let a = fit_c0(&traj).unwrap().c0;
        let b = fit_c0(&traj).unwrap().c0;
        assert_eq!(a, b);
        assert!(a >= 1.0 && a.is_finite());
        // Post-fit the envelope dominates the running sup by construction.
        let mut sup = 0.0f64;
        for s in &traj.samples {
            sup = sup.max(s.f_norm);
            if s.t < blowup_time(traj.u0_f_norm, a) {
                assert!(sup <= gronwall_envelope(traj.u0_f_norm, a, s.t).unwrap());
            }
        }
    }

    #[test]
    fn aliased_unstable_run_trips_the_guard_and_flags_the_fit() {
        // Without dealiasing, an under-resolved run at large dt goes
        // unstable; the guard must stop it and keep the earlier samples.
        let g = grid2(32);
        let mut config = SimConfig::new(
            g,
            0.1,
            20.0,
            InitialCondition::RandomSmooth { seed: 3, slope: 1.5 },
        );
        config.dealias = false;
        config.monitor_period = 10;
        let traj = simulate(&config).unwrap();
        assert!(traj.blowup_stop);
        assert!(traj.samples.len() >= 2);
        assert!(traj.samples.iter().all(|s| s.f_norm.is_finite()));
        let fit = fit_c0(&traj).unwrap();
        assert!(fit.pre_stop_only);
        let check = two_d_global_check(&traj);
        assert!(!check.passed);
    }

    #[test]
    fn global_check_passes_on_steady_flow() {
        let g = grid2(32);
        let mut config = SimConfig::new(g, 1e-3, 0.05, InitialCondition::TaylorGreen);
        config.monitor_period = 10;
        let traj = simulate(&config).unwrap();
        let report = two_d_global_check(&traj);
        assert!(report.passed);
        assert!((report.fitted_c - 1.0).abs() <= 1e-6);
        assert!(report.exponent_integral > 0.0);
    }
}
