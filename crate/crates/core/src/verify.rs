//! Property-based verification harness: deterministic band-limited field
//! generation, one runner per estimate, ensemble statistics and
//! resolution-stability sweeps.
//!
//! Free parameters are pinned for reproducibility: r = 1/2 wherever an
//! exponent 0 < r < 1 is needed, (gamma, delta) = (1/2, 1/2) and
//! r1 = r2 = 1/2 in the two maximal-product scenarios, and the band kernel
//! `h_0` stands in for the generic kernel psi (with shift l = 0).

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{
    dealiased_product, gradient_magnitude_samples, inverse_transform_unchecked, lattice_integral,
    SpectralField, VectorField,
};
use crate::grid::Grid;
use crate::lp::{delta_j, j_max, make_profile, resolved_range};
use crate::norms::{band_sup_samples, linf_norm, tl_norm, tl_norm_vector, w1inf_norm};
use crate::ops::{
    leray, maximal, peetre_ratio, riesz_multiplier, MaximalConfig,
};
use crate::para::{commutator_given_convection, convection_scalar};

/// Ensemble field model: band-limited, power-law spectrum, unit sup norm.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldGenSpec {
    pub seed: u64,
    /// Inclusive dyadic band range [j_lo, j_hi].
    pub band_range: (i32, i32),
    /// Coefficient magnitude decays like |xi|^(-slope).
    pub spectrum_slope: f64,
    pub kind: GenKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    Scalar,
    DivFreeVector,
}

impl FieldGenSpec {
    /// Default ensemble for a grid: bands [0, j_max - 2], slope s + 1/2.
    pub fn default_for(grid: &Grid, s: f64, seed: u64, kind: GenKind) -> Self {
        Self {
            seed,
            band_range: (0, j_max(grid) - 2),
            spectrum_slope: s + 0.5,
            kind,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic sub-seed for (master, trial, stream); parallel and serial
/// ensemble runs agree bit for bit.
pub fn trial_seed(master: u64, trial: u64, stream: u64) -> u64 {
    splitmix64(master ^ splitmix64(trial.wrapping_mul(8).wrapping_add(stream).wrapping_add(1)))
}

fn validate_band_range(spec: &FieldGenSpec, grid: &Grid) -> Result<()> {
    let (j_lo, j_hi) = spec.band_range;
    let top = j_max(grid);
    let (bottom, _) = resolved_range(grid, true);
    if j_lo > j_hi || j_hi > top || j_lo < bottom {
        return Err(Error::BandRangeExceedsNyquist {
            j_lo,
            j_hi,
            j_min: bottom,
            j_max: top,
        });
    }
    Ok(())
}

fn raw_scalar(spec: &FieldGenSpec, grid: &Grid, seed: u64) -> SpectralField {
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let profile = make_profile();
    let (j_lo, j_hi) = spec.band_range;
    let lo_scale = f64::exp2(-j_lo as f64);
    let hi_scale = f64::exp2(-(j_hi as f64) - 1.0);
    let mut f = SpectralField::zeros(grid);
    for m in 0..grid.len() {
        // Fixed draw order keeps generation deterministic.
        let re: f64 = rng.gen_range(-1.0..1.0);
        let im: f64 = rng.gen_range(-1.0..1.0);
        let r = grid.xi_norm_sq(m).sqrt();
        if r == 0.0 {
            continue;
        }
        let mask = profile.chi(hi_scale * r) - profile.chi(lo_scale * r);
        if mask == 0.0 {
            continue;
        }
        let envelope = r.powf(-spec.spectrum_slope);
        f.coeffs_mut()[m] = Complex64::new(re, im) * (mask * envelope);
    }
    f.symmetrize();
    f.zero_mean_mode();
    f
}

fn normalize_sup(f: &mut SpectralField) {
    let sup = inverse_transform_unchecked(f)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if sup > 0.0 {
        f.scale(1.0 / sup);
    }
}

/// Deterministic band-limited scalar field with unit sup norm.
pub fn generate_scalar(spec: &FieldGenSpec, grid: &Grid) -> Result<SpectralField> {
    validate_band_range(spec, grid)?;
    let mut f = raw_scalar(spec, grid, spec.seed);
    normalize_sup(&mut f);
    Ok(f)
}

/// Deterministic divergence-free vector field (Leray-projected components).
pub fn generate_vector(spec: &FieldGenSpec, grid: &Grid) -> Result<VectorField> {
    validate_band_range(spec, grid)?;
    let comps: Vec<SpectralField> = (0..grid.d())
        .map(|a| raw_scalar(spec, grid, trial_seed(spec.seed, 0, a as u64)))
        .collect();
    let mut u = leray(&VectorField::new(comps)?);
    let sup = crate::field::vector_magnitude_samples(&u)
        .iter()
        .fold(0.0f64, |m, v| m.max(*v));
    if sup > 0.0 {
        for c in u.components_mut() {
            c.scale(1.0 / sup);
        }
    }
    Ok(u)
}

/// Either output shape of [`generate`].
#[derive(Debug, Clone)]
pub enum Generated {
    Scalar(SpectralField),
    Vector(VectorField),
}

/// Generate the field the spec asks for.
pub fn generate(spec: &FieldGenSpec, grid: &Grid) -> Result<Generated> {
    match spec.kind {
        GenKind::Scalar => Ok(Generated::Scalar(generate_scalar(spec, grid)?)),
        GenKind::DivFreeVector => Ok(Generated::Vector(generate_vector(spec, grid)?)),
    }
}

/// The estimates the harness knows how to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    Bernstein,
    Peetre,
    ConvBound,
    Coro1,
    Coro2,
    Moser,
    Commutator,
    Riesz,
    Leray,
    Pressure,
}

impl InequalityId {
    pub const ALL: [InequalityId; 10] = [
        InequalityId::Bernstein,
        InequalityId::Peetre,
        InequalityId::ConvBound,
        InequalityId::Coro1,
        InequalityId::Coro2,
        InequalityId::Moser,
        InequalityId::Commutator,
        InequalityId::Riesz,
        InequalityId::Leray,
        InequalityId::Pressure,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            InequalityId::Bernstein => "bernstein",
            InequalityId::Peetre => "peetre",
            InequalityId::ConvBound => "conv_bound",
            InequalityId::Coro1 => "coro1",
            InequalityId::Coro2 => "coro2",
            InequalityId::Moser => "moser",
            InequalityId::Commutator => "commutator",
            InequalityId::Riesz => "riesz",
            InequalityId::Leray => "leray",
            InequalityId::Pressure => "pressure",
        }
    }
}

impl std::str::FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|id| id.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownInequality { id: s.to_string() })
    }
}

impl std::fmt::Display for InequalityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One counted trial.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridInfo {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub l: f64,
}

/// Ensemble statistics for one estimate at one resolution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub id: String,
    pub grid: GridInfo,
    pub seed: u64,
    /// Requested trial count; `trials - excluded` entered the statistics.
    pub trials: usize,
    pub excluded: usize,
    /// More than 10% of trials had a vanishing right-hand side.
    pub degenerate: bool,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub p95_ratio: f64,
    pub per_trial: Vec<TrialRecord>,
}

pub(crate) mod runners {
    use super::*;

    /// `|D f|_{dot F^s} <= C |f|_{dot F^{s+1}}`.
    pub fn bernstein(f: &SpectralField, s: f64) -> (f64, f64) {
        let df = crate::ops::frac_deriv(f, 1.0);
        (tl_norm(&df, s, true).value, tl_norm(f, s + 1.0, true).value)
    }

    /// `|fg|_{F^s} <= C (|f|_inf |g|_{F^s} + |g|_inf |f|_{F^s})`.
    pub fn moser(f: &SpectralField, g: &SpectralField, s: f64) -> (f64, f64) {
        let prod = dealiased_product(f, g);
        let lhs = tl_norm(&prod, s, false).value;
        let rhs = linf_norm(f).unwrap().value * tl_norm(g, s, false).value
            + linf_norm(g).unwrap().value * tl_norm(f, s, false).value;
        (lhs, rhs)
    }

    /// Integral of the band sup of the commutator against its two-norm bound.
    pub fn commutator(u: &VectorField, f: &SpectralField, s: f64) -> (f64, f64) {
        let grid = f.grid().clone();
        let conv = convection_scalar(u, f);
        let (j_lo, j_hi) = resolved_range(&grid, true);
        let mut sup = vec![0.0f64; grid.len()];
        for j in j_lo..=j_hi {
            let c = commutator_given_convection(u, f, &conv, j);
            let phys = inverse_transform_unchecked(&c);
            let w = f64::exp2(j as f64 * s);
            for (acc, v) in sup.iter_mut().zip(&phys) {
                *acc = acc.max(w * v.abs());
            }
        }
        let lhs = lattice_integral(&sup, &grid);

        let grad_u_sup = gradient_magnitude_samples(u)
            .iter()
            .fold(0.0f64, |m, v| m.max(*v));
        let grad_f_sup = {
            let mut sq = vec![0.0f64; grid.len()];
            for axis in 0..grid.d() {
                let g = inverse_transform_unchecked(&f.derivative(axis));
                for (acc, v) in sq.iter_mut().zip(&g) {
                    *acc += v * v;
                }
            }
            sq.iter().fold(0.0f64, |m, v| m.max(v.sqrt()))
        };
        let rhs = grad_u_sup * tl_norm(f, s, true).value
            + tl_norm_vector(u, s, true).value * grad_f_sup;
        (lhs, rhs)
    }

    /// `|d_k Laplace^{-1} u|_{dot F^s} <= C |u|_{dot F^{s-1}}`, worst k.
    pub fn riesz(f: &SpectralField, s: f64) -> (f64, f64) {
        let mut lhs = 0.0f64;
        for k in 0..f.grid().d() {
            let out = riesz_multiplier(f, k).expect("generator output is mean-free");
            lhs = lhs.max(tl_norm(&out, s, true).value);
        }
        (lhs, tl_norm(f, s - 1.0, true).value)
    }

    /// `|P u|_{dot F^s} <= C |u|_{dot F^s}` on unprojected fields.
    pub fn leray_bound(u: &VectorField, s: f64) -> (f64, f64) {
        let pu = leray(u);
        (
            tl_norm_vector(&pu, s, true).value,
            tl_norm_vector(u, s, true).value,
        )
    }

    /// `|grad p|_{L^1} <= C |u|_{W^{1,inf}} |u|_{dot F^s}`.
    pub fn pressure(u: &VectorField, s: f64) -> (f64, f64) {
        let gp = crate::ops::pressure_gradient(u).expect("generator output is divergence-free");
        let mag = crate::field::vector_magnitude_samples(&gp);
        let lhs = lattice_integral(&mag, u.grid());
        let rhs = w1inf_norm(u).unwrap().value * tl_norm_vector(u, s, true).value;
        (lhs, rhs)
    }

    /// Peetre maximal inequality; the trial ratio is the worse of the value
    /// and gradient chains (reported against rhs = 1).
    pub fn peetre(f: &SpectralField, t: f64, cfg: &MaximalConfig) -> Option<(f64, f64)> {
        let report = peetre_ratio(f, t, 0.5, cfg).expect("support enforced by generator");
        match (report.max_ratio_value, report.max_ratio_gradient) {
            (Some(a), Some(b)) => Some((a.max(b), 1.0)),
            _ => None,
        }
    }

    /// Pointwise kernel-convolution bound with psi = h_0, scale s0 = t/2.
    pub fn conv_bound(
        f: &SpectralField,
        g: &SpectralField,
        t: f64,
        cfg: &MaximalConfig,
    ) -> Option<(f64, f64)> {
        let grid = f.grid().clone();
        let profile = make_profile();
        let s0 = t / 2.0;
        let prod = dealiased_product(g, f);
        let filtered = prod.apply_radial_symbol(|r| profile.band(0, r / s0));
        let lhs_phys = inverse_transform_unchecked(&filtered);

        let m_g = maximal(&inverse_transform_unchecked(g), cfg);
        let f_phys = inverse_transform_unchecked(f);
        let sqrt_abs: Vec<f64> = f_phys.iter().map(|v| v.abs().sqrt()).collect();
        let m_f_half = maximal(&sqrt_abs, cfg);

        // (t/s0)^{d/r} with r = 1/2.
        let prefactor = (t / s0).powf(2.0 * grid.d() as f64);
        let mut best: Option<f64> = None;
        for m in 0..grid.len() {
            let rhs = prefactor * m_g[m] * m_f_half[m] * m_f_half[m];
            if rhs > 0.0 {
                let r = lhs_phys[m].abs() / rhs;
                best = Some(best.map_or(r, |b| b.max(r)));
            }
        }
        best.map(|b| (b, 1.0))
    }

    /// Pointwise block-of-product bound `|Delta_k(gf)| <= C 2^{(j-k)d/r} ...`.
    pub fn coro1(
        f: &SpectralField,
        g: &SpectralField,
        j: i32,
        cfg: &MaximalConfig,
    ) -> Option<(f64, f64)> {
        let grid = f.grid().clone();
        let prod = dealiased_product(g, f);
        let m_g = maximal(&inverse_transform_unchecked(g), cfg);
        let f_phys = inverse_transform_unchecked(f);
        let sqrt_abs: Vec<f64> = f_phys.iter().map(|v| v.abs().sqrt()).collect();
        let m_f_half = maximal(&sqrt_abs, cfg);

        let d_over_r = 2.0 * grid.d() as f64;
        let mut best: Option<f64> = None;
        // l0 = 1: the claim covers every block k <= j.
        for k in -1..=j.min(j_max(&grid)) {
            let blocked = delta_j(&prod, k, false).field;
            let phys = inverse_transform_unchecked(&blocked);
            let scale = f64::exp2((j - k) as f64 * d_over_r);
            for m in 0..grid.len() {
                let rhs = scale * m_g[m] * m_f_half[m] * m_f_half[m];
                if rhs > 0.0 {
                    let r = phys[m].abs() / rhs;
                    best = Some(best.map_or(r, |b| b.max(r)));
                }
            }
        }
        best.map(|b| (b, 1.0))
    }

    /// Vector-maximal substitute: band kernels applied per block keep the
    /// weighted band-sup integral bounded (q = inf, l = 0).
    pub fn coro2(f: &SpectralField, s: f64) -> (f64, f64) {
        let grid = f.grid().clone();
        let profile = make_profile();
        let (j_lo, j_hi) = resolved_range(&grid, true);
        let mut sup = vec![0.0f64; grid.len()];
        for k in j_lo..=j_hi {
            let band = delta_j(f, k, true).field;
            let kernel_scale = f64::exp2(-k as f64);
            let smoothed = band.apply_radial_symbol(|r| profile.band(0, kernel_scale * r));
            let phys = inverse_transform_unchecked(&smoothed);
            let w = f64::exp2(k as f64 * s);
            for (acc, v) in sup.iter_mut().zip(&phys) {
                *acc = acc.max(w * v.abs());
            }
        }
        let lhs = lattice_integral(&sup, &grid);
        let (rhs_sup, _) = band_sup_samples(f, s, true);
        (lhs, lattice_integral(&rhs_sup, &grid))
    }
}

fn run_one_trial(
    id: InequalityId,
    ensemble: &FieldGenSpec,
    grid: &Grid,
    s: f64,
    trial: u64,
) -> Result<Option<(f64, f64)>> {
    let scalar_spec = |stream: u64| FieldGenSpec {
        seed: trial_seed(ensemble.seed, trial, stream),
        band_range: ensemble.band_range,
        spectrum_slope: ensemble.spectrum_slope,
        kind: GenKind::Scalar,
    };
    let vector_spec = |stream: u64| FieldGenSpec {
        kind: GenKind::DivFreeVector,
        ..scalar_spec(stream)
    };
    let band_top = f64::exp2(ensemble.band_range.1 as f64 + 1.0);

    let pair = match id {
        InequalityId::Bernstein => {
            let f = generate_scalar(&scalar_spec(0), grid)?;
            Some(runners::bernstein(&f, s))
        }
        InequalityId::Moser => {
            let f = generate_scalar(&scalar_spec(0), grid)?;
            let g = generate_scalar(&scalar_spec(1), grid)?;
            Some(runners::moser(&f, &g, s))
        }
        InequalityId::Commutator => {
            let u = generate_vector(&vector_spec(0), grid)?;
            let f = generate_scalar(&scalar_spec(1), grid)?;
            Some(runners::commutator(&u, &f, s))
        }
        InequalityId::Riesz => {
            let f = generate_scalar(&scalar_spec(0), grid)?;
            Some(runners::riesz(&f, s))
        }
        InequalityId::Leray => {
            let comps: Vec<SpectralField> = (0..grid.d())
                .map(|a| generate_scalar(&scalar_spec(a as u64), grid))
                .collect::<Result<_>>()?;
            let u = VectorField::new(comps)?;
            Some(runners::leray_bound(&u, s))
        }
        InequalityId::Pressure => {
            let u = generate_vector(&vector_spec(0), grid)?;
            Some(runners::pressure(&u, s))
        }
        InequalityId::Peetre => {
            let f = generate_scalar(&scalar_spec(0), grid)?;
            let cfg = MaximalConfig::dyadic(grid);
            runners::peetre(&f, band_top, &cfg)
        }
        InequalityId::ConvBound => {
            let f = generate_scalar(&scalar_spec(0), grid)?;
            let g = generate_scalar(&scalar_spec(1), grid)?;
            let cfg = MaximalConfig::dyadic(grid);
            runners::conv_bound(&f, &g, band_top, &cfg)
        }
        InequalityId::Coro1 => {
            let f = generate_scalar(&scalar_spec(0), grid)?;
            let g = generate_scalar(&scalar_spec(1), grid)?;
            let cfg = MaximalConfig::dyadic(grid);
            runners::coro1(&f, &g, ensemble.band_range.1 + 1, &cfg)
        }
        InequalityId::Coro2 => {
            let f = generate_scalar(&scalar_spec(0), grid)?;
            Some(runners::coro2(&f, s))
        }
    };
    Ok(pair)
}

/// Run `n_trials` independent trials of one estimate with the default
/// smoothness s = d + 1.
pub fn run_inequality(
    id: InequalityId,
    ensemble: &FieldGenSpec,
    n_trials: usize,
    grid: &Grid,
) -> Result<InequalityReport> {
    run_inequality_with_s(id, ensemble, n_trials, grid, (grid.d() + 1) as f64)
}

/// Run one estimate at an explicit smoothness.
///
/// Each runner draws the field shapes its estimate needs (scalars, pairs,
/// divergence-free vectors) from per-trial sub-seeds of the ensemble, using
/// the ensemble's band range and slope.
pub fn run_inequality_with_s(
    id: InequalityId,
    ensemble: &FieldGenSpec,
    n_trials: usize,
    grid: &Grid,
    s: f64,
) -> Result<InequalityReport> {
    validate_band_range(ensemble, grid)?;
    let outcomes: Vec<Result<Option<(f64, f64)>>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|trial| run_one_trial(id, ensemble, grid, s, trial))
        .collect();
    let mut pairs = Vec::with_capacity(n_trials);
    for outcome in outcomes {
        pairs.push(outcome?);
    }
    summarize_trials(id, ensemble.seed, grid, pairs)
}

/// Fold (lhs, rhs) pairs into a report; trials with a vanishing right-hand
/// side are excluded and tallied, and an all-excluded ensemble is an error.
fn summarize_trials(
    id: InequalityId,
    seed: u64,
    grid: &Grid,
    pairs: Vec<Option<(f64, f64)>>,
) -> Result<InequalityReport> {
    let n_trials = pairs.len();
    let mut per_trial = Vec::new();
    let mut excluded = 0usize;
    for pair in pairs {
        match pair {
            Some((lhs, rhs)) if rhs > 0.0 => per_trial.push(TrialRecord {
                lhs,
                rhs,
                ratio: lhs / rhs,
            }),
            _ => excluded += 1,
        }
    }
    if per_trial.is_empty() {
        return Err(Error::DegenerateEnsemble {
            excluded,
            trials: n_trials,
        });
    }

    let mut ratios: Vec<f64> = per_trial.iter().map(|t| t.ratio).collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let max_ratio = *ratios.last().unwrap();
    let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let p95_index = ((0.95 * ratios.len() as f64).ceil() as usize).clamp(1, ratios.len()) - 1;
    let p95_ratio = ratios[p95_index];

    Ok(InequalityReport {
        id: id.name().to_string(),
        grid: GridInfo {
            d: grid.d(),
            n: grid.n(),
            l: grid.box_scale(),
        },
        seed,
        trials: n_trials,
        excluded,
        degenerate: excluded * 10 > n_trials,
        max_ratio,
        mean_ratio,
        p95_ratio,
        per_trial,
    })
}

/// One resolution's worth of a stability sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

/// Observed-constant stability across resolutions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityReport {
    pub id: String,
    pub points: Vec<SweepPoint>,
    /// `max_ratio` at the largest resolution over the smallest.
    pub growth_factor: f64,
    /// True when the observed constant more than doubled.
    pub failed: bool,
}

/// Re-run one estimate across resolutions and compare observed constants.
pub fn stability_sweep(
    id: InequalityId,
    ensemble: &FieldGenSpec,
    resolutions: &[usize],
    d: usize,
    box_scale: f64,
    n_trials: usize,
) -> Result<StabilityReport> {
    if resolutions.len() < 2 {
        return Err(Error::TooFewResolutions {
            got: resolutions.len(),
        });
    }
    let mut ns = resolutions.to_vec();
    ns.sort_unstable();
    let mut points = Vec::new();
    for &n in &ns {
        let grid = Grid::new(d, n, box_scale)?;
        let report = run_inequality(id, ensemble, n_trials, &grid)?;
        points.push(SweepPoint {
            n,
            max_ratio: report.max_ratio,
            mean_ratio: report.mean_ratio,
        });
    }
    let growth_factor = points.last().unwrap().max_ratio / points[0].max_ratio;
    Ok(StabilityReport {
        id: id.name().to_string(),
        points,
        growth_factor,
        failed: growth_factor > 2.0,
    })
}
