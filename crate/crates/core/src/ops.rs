//! Operator zoo: discrete Hardy-Littlewood maximal function, Peetre-type
//! maximal checks, the homogeneous Riesz-type multiplier `d_k Laplace^{-1}`,
//! fractional derivatives, the Leray projection and the Euler pressure
//! gradient.
//!
//! Symbol conventions: `d_k <-> i xi_k`, `Laplace^{-1} <-> -1/|xi|^2`; the
//! zero mode of any homogeneous multiplier is 0 (torus quotient by
//! constants). Nonlinear terms are dealiased by the 2/3 rule before any
//! symbol is applied.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{
    dealiased_product, forward_transform, inverse_transform, inverse_transform_complex,
    inverse_transform_unchecked, SpectralField, VectorField,
};
use crate::grid::Grid;

/// Ball radii used by the discrete maximal operator.
///
/// The dyadic default {dx, 2dx, 4dx, ..., n dx/2} keeps the cost at one
/// convolution per radius while changing M only by a bounded factor, which
/// the estimates absorb into their constants.
#[derive(Debug, Clone)]
pub struct MaximalConfig {
    grid: Grid,
    radii: Vec<f64>,
}

impl MaximalConfig {
    /// The default dyadic radius set for a grid.
    pub fn dyadic(grid: &Grid) -> Self {
        let dx = grid.dx();
        let mut radii = Vec::new();
        let mut r = dx;
        let top = grid.n() as f64 * dx / 2.0;
        while r <= top {
            radii.push(r);
            r *= 2.0;
        }
        Self {
            grid: grid.clone(),
            radii,
        }
    }

    /// Custom radius list; must be positive, increasing, starting at or below dx.
    pub fn new(grid: &Grid, radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii[0] <= 0.0 || radii[0] > grid.dx() {
            return Err(Error::InvalidConfig {
                reason: "maximal radii must be positive with smallest <= dx".into(),
            });
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig {
                reason: "maximal radii must be strictly increasing".into(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            radii,
        })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
}

/// Periodic min-image distance from the origin for a flat lattice offset.
fn offset_distance(grid: &Grid, flat: usize) -> f64 {
    let mut idx = [0usize; 3];
    let d = grid.d();
    grid.unravel(flat, &mut idx[..d]);
    let n = grid.n();
    let dx = grid.dx();
    let mut sq = 0.0;
    for &i in idx.iter().take(d) {
        let w = i.min(n - i) as f64 * dx;
        sq += w * w;
    }
    sq.sqrt()
}

/// Discrete Hardy-Littlewood maximal function: the max over configured
/// radii of the average of |f| over the periodic ball.
pub fn maximal(f: &[f64], cfg: &MaximalConfig) -> Vec<f64> {
    let grid = &cfg.grid;
    assert_eq!(f.len(), grid.len(), "maximal input shape");
    let abs: Vec<f64> = f.iter().map(|v| v.abs()).collect();
    let abs_hat = forward_transform(&abs, grid).expect("shape checked");

    let mut out = vec![f64::NEG_INFINITY; grid.len()];
    let mut conv = SpectralField::zeros(grid);
    for &radius in &cfg.radii {
        // Count ball cells; a one-cell ball is the identity average.
        let mut count = 0usize;
        for m in 0..grid.len() {
            if offset_distance(grid, m) < radius {
                count += 1;
            }
        }
        if count == 1 {
            for (o, v) in out.iter_mut().zip(&abs) {
                *o = o.max(*v);
            }
            continue;
        }
        // Ball average by circular convolution with the indicator mask.
        let mask: Vec<f64> = (0..grid.len())
            .map(|m| if offset_distance(grid, m) < radius { 1.0 } else { 0.0 })
            .collect();
        let mask_hat = forward_transform(&mask, grid).expect("shape checked");
        let scale = grid.len() as f64 / count as f64;
        for m in 0..grid.len() {
            conv.coeffs_mut()[m] = abs_hat.coeffs()[m] * mask_hat.coeffs()[m] * scale;
        }
        let avg = inverse_transform_complex(&conv);
        for (o, v) in out.iter_mut().zip(&avg) {
            *o = o.max(v.re);
        }
    }
    out.into_iter().map(|v| v.max(0.0)).collect()
}

/// `M(|f|^r)(x)^{1/r}` with the default dyadic radii.
pub fn maximal_power(samples: &[f64], r: f64, cfg: &MaximalConfig) -> Vec<f64> {
    let powered: Vec<f64> = samples.iter().map(|v| v.abs().powf(r)).collect();
    maximal(&powered, cfg)
        .into_iter()
        .map(|v| v.powf(1.0 / r))
        .collect()
}

/// Outcome of the Peetre-type maximal comparison on one band-limited field.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PeetreReport {
    pub t: f64,
    pub r: f64,
    /// max over x of `sup_z |u(x-z)| / (1+t|z|)^{d/r}` divided by `M(|u|^r)(x)^{1/r}`.
    pub max_ratio_value: Option<f64>,
    /// Same with `t^{-1} |grad u(x-z)|` in the numerator.
    pub max_ratio_gradient: Option<f64>,
    /// Lattice points skipped because the right-hand side vanished.
    pub excluded_points: usize,
}

/// Largest |xi| carrying a coefficient above `1e-13 * max amplitude`.
fn support_radius(f: &SpectralField) -> f64 {
    let amp = f.max_amplitude();
    if amp == 0.0 {
        return 0.0;
    }
    let grid = f.grid();
    let mut top: f64 = 0.0;
    for m in 0..grid.len() {
        if f.coeffs()[m].norm() > 1e-13 * amp {
            top = top.max(grid.xi_norm_sq(m).sqrt());
        }
    }
    top
}

/// Max-plus convolution `x -> max_y a(y) w(x - y)` over the periodic lattice.
fn sup_weighted_translates(a: &[f64], w: &[f64], grid: &Grid) -> Vec<f64> {
    let n = grid.n();
    let d = grid.d();
    let len = grid.len();
    (0..len)
        .into_par_iter()
        .map(|x| {
            let mut xi = [0usize; 3];
            grid.unravel(x, &mut xi[..d]);
            let mut best = 0.0f64;
            let mut yi = [0usize; 3];
            for y in 0..len {
                grid.unravel(y, &mut yi[..d]);
                let mut z = 0usize;
                for a_ in 0..d {
                    z = z * n + (xi[a_] + n - yi[a_]) % n;
                }
                let v = a[y] * w[z];
                if v > best {
                    best = v;
                }
            }
            best
        })
        .collect()
}

/// Both sides of the Peetre maximal inequality for a band-limited field.
///
/// The frequency support of `u` must lie within `|xi| <= 2t`.
pub fn peetre_ratio(u: &SpectralField, t: f64, r: f64, cfg: &MaximalConfig) -> Result<PeetreReport> {
    let grid = u.grid().clone();
    let max_xi = support_radius(u);
    if max_xi > 2.0 * t {
        return Err(Error::SupportViolation {
            limit: 2.0 * t,
            max_xi,
        });
    }

    let samples = inverse_transform(u)?;
    let abs: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
    let mut grad_sq = vec![0.0f64; grid.len()];
    for axis in 0..grid.d() {
        let g = inverse_transform_unchecked(&u.derivative(axis));
        for (acc, v) in grad_sq.iter_mut().zip(&g) {
            *acc += v * v;
        }
    }
    let grad_over_t: Vec<f64> = grad_sq.iter().map(|v| v.sqrt() / t).collect();

    let exponent = grid.d() as f64 / r;
    let w: Vec<f64> = (0..grid.len())
        .map(|m| (1.0 + t * offset_distance(&grid, m)).powf(-exponent))
        .collect();

    let mid = sup_weighted_translates(&abs, &w, &grid);
    let left = sup_weighted_translates(&grad_over_t, &w, &grid);
    let right = maximal_power(&samples, r, cfg);

    let mut best_mid: Option<f64> = None;
    let mut best_left: Option<f64> = None;
    let mut excluded = 0usize;
    for m in 0..grid.len() {
        if right[m] > 0.0 {
            let rm = mid[m] / right[m];
            let rl = left[m] / right[m];
            best_mid = Some(best_mid.map_or(rm, |b| b.max(rm)));
            best_left = Some(best_left.map_or(rl, |b| b.max(rl)));
        } else {
            excluded += 1;
        }
    }
    Ok(PeetreReport {
        t,
        r,
        max_ratio_value: best_mid,
        max_ratio_gradient: best_left,
        excluded_points: excluded,
    })
}

/// `d_k Laplace^{-1}`: coefficient-wise multiplication by `-i xi_k / |xi|^2`
/// (zero mode and Nyquist oddball rows set to 0). Requires a mean-free input.
pub fn riesz_multiplier(f: &SpectralField, k: usize) -> Result<SpectralField> {
    let grid = f.grid().clone();
    assert!(k < grid.d(), "component index out of range");
    let mean = f.mean().norm();
    if mean > 1e-12 * f.max_amplitude().max(f64::MIN_POSITIVE) {
        return Err(Error::NonMeanFree { mean });
    }
    let mut out = f.clone();
    for m in 0..grid.len() {
        let xi = grid.xi_odd(m);
        let sq = grid.xi_odd_norm_sq(m);
        out.coeffs_mut()[m] = if sq == 0.0 {
            Complex64::ZERO
        } else {
            Complex64::new(0.0, -xi[k] / sq) * f.coeffs()[m]
        };
    }
    Ok(out)
}

/// Fractional derivative `D^s = F^{-1}(|xi|^s F)`; the mean mode is dropped
/// for s != 0 (in particular it never divides by zero for s < 0).
pub fn frac_deriv(f: &SpectralField, s: f64) -> SpectralField {
    if s == 0.0 {
        return f.clone();
    }
    let grid = f.grid().clone();
    let mut out = f.clone();
    for m in 0..grid.len() {
        let sq = grid.xi_norm_sq(m);
        out.coeffs_mut()[m] = if sq == 0.0 {
            Complex64::ZERO
        } else {
            f.coeffs()[m] * sq.sqrt().powf(s)
        };
    }
    out
}

/// Frequency-space divergence `sum_a i xi_a u_hat_a`.
pub fn divergence(u: &VectorField) -> SpectralField {
    let grid = u.grid().clone();
    let mut out = SpectralField::zeros(&grid);
    for m in 0..grid.len() {
        let xi = grid.xi_odd(m);
        let mut acc = Complex64::ZERO;
        for a in 0..grid.d() {
            acc += Complex64::new(0.0, xi[a]) * u.component(a).coeffs()[m];
        }
        out.coeffs_mut()[m] = acc;
    }
    out
}

/// Leray projection `P u = u - grad Laplace^{-1} (div u)`; mean modes pass
/// through unchanged.
pub fn leray(u: &VectorField) -> VectorField {
    let grid = u.grid().clone();
    let mut out = u.clone();
    for m in 0..grid.len() {
        let sq = grid.xi_odd_norm_sq(m);
        if sq == 0.0 {
            continue;
        }
        let xi = grid.xi_odd(m);
        let mut dot = Complex64::ZERO;
        for a in 0..grid.d() {
            dot += xi[a] * u.component(a).coeffs()[m];
        }
        let c = dot / sq;
        for a in 0..grid.d() {
            out.components_mut()[a].coeffs_mut()[m] -= xi[a] * c;
        }
    }
    out
}

/// Dealiased convective term `(u . grad) u`.
pub fn convective_term(u: &VectorField) -> VectorField {
    let grid = u.grid().clone();
    let mut comps = Vec::with_capacity(grid.d());
    for i in 0..grid.d() {
        let mut acc = SpectralField::zeros(&grid);
        for l in 0..grid.d() {
            let term = dealiased_product(u.component(l), &u.component(i).derivative(l));
            acc.add_assign(&term);
        }
        comps.push(acc);
    }
    VectorField::new(comps).expect("components share the grid")
}

/// Relative divergence tolerance accepted by [`pressure_gradient`].
pub const PRESSURE_DIV_TOLERANCE: f64 = 1e-8;

/// Euler pressure gradient `grad p = grad (-Laplace)^{-1} div((u.grad)u)`.
pub fn pressure_gradient(u: &VectorField) -> Result<VectorField> {
    let amp = u.max_amplitude();
    if amp > 0.0 && u.divergence_residual() > PRESSURE_DIV_TOLERANCE * amp {
        return Err(Error::DivergenceViolation {
            violation: u.divergence_residual() / amp,
        });
    }
    let grid = u.grid().clone();
    let conv = convective_term(u);
    let mut out = VectorField::zeros(&grid);
    for m in 0..grid.len() {
        let sq = grid.xi_odd_norm_sq(m);
        if sq == 0.0 {
            continue;
        }
        let xi = grid.xi_odd(m);
        let mut dot = Complex64::ZERO;
        for a in 0..grid.d() {
            dot += xi[a] * conv.component(a).coeffs()[m];
        }
        let c = dot / sq;
        for a in 0..grid.d() {
            out.components_mut()[a].coeffs_mut()[m] = -xi[a] * c;
        }
    }
    Ok(out)
}
