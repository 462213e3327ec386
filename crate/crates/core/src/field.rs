//! Spectral field representation and the discrete Fourier calculus.
//!
//! Normalization: a pure mode `exp(i k.x / L)` has coefficient 1 at lattice
//! index `k` and 0 elsewhere. Forward transform therefore divides the DFT by
//! `n^d`; the inverse is the plain unnormalized inverse DFT.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Relative conjugate-symmetry slack accepted by `inverse_transform`.
pub const REALITY_TOLERANCE: f64 = 1e-9;

/// Scalar or component-of-vector tag carried by a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FieldKind {
    Scalar,
    /// Component `axis` of a vector field.
    Component(usize),
}

/// Complex Fourier amplitudes on the frequency lattice of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
    kind: FieldKind,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex64::ZERO; grid.len()],
            kind: FieldKind::Scalar,
        }
    }

    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                axis: 0,
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            coeffs,
            kind: FieldKind::Scalar,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: FieldKind) -> Self {
        self.kind = kind;
        self
    }

    /// Coefficient at integer frequency `k` (one entry per axis).
    pub fn coeff_at(&self, k: &[i64]) -> Complex64 {
        assert_eq!(k.len(), self.grid.d());
        let mut idx = [0usize; 3];
        for (a, &ka) in k.iter().enumerate() {
            idx[a] = self.grid.axis_index(ka);
        }
        self.coeffs[self.grid.ravel(&idx[..self.grid.d()])]
    }

    pub fn coeff_at_mut(&mut self, k: &[i64]) -> &mut Complex64 {
        assert_eq!(k.len(), self.grid.d());
        let mut idx = [0usize; 3];
        for (a, &ka) in k.iter().enumerate() {
            idx[a] = self.grid.axis_index(ka);
        }
        let flat = self.grid.ravel(&idx[..self.grid.d()]);
        &mut self.coeffs[flat]
    }

    /// Largest coefficient modulus.
    pub fn max_amplitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Maximum deviation from conjugate symmetry, `max_k |c(-k) - conj(c(k))|`.
    pub fn symmetry_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for m in 0..self.coeffs.len() {
            let r = self.grid.reflect(m);
            if r < m {
                continue;
            }
            let v = (self.coeffs[r] - self.coeffs[m].conj()).norm();
            worst = worst.max(v);
        }
        worst
    }

    /// Whether the field represents a real function, within `tol` relative.
    pub fn is_real(&self, tol: f64) -> bool {
        let amp = self.max_amplitude();
        self.symmetry_violation() <= tol * amp.max(f64::MIN_POSITIVE)
    }

    /// Restore exact conjugate symmetry by averaging with the reflected conjugate.
    pub fn symmetrize(&mut self) {
        for m in 0..self.coeffs.len() {
            let r = self.grid.reflect(m);
            if r < m {
                continue;
            }
            let avg = 0.5 * (self.coeffs[m] + self.coeffs[r].conj());
            self.coeffs[m] = avg;
            self.coeffs[r] = avg.conj();
        }
    }

    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn zero_mean_mode(&mut self) {
        self.coeffs[0] = Complex64::ZERO;
    }

    pub fn scale(&mut self, a: f64) {
        for c in &mut self.coeffs {
            *c *= a;
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.grid, other.grid);
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += o;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.grid, other.grid);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
            kind: self.kind,
        }
    }

    /// Coefficient-wise multiplication by a real radial symbol evaluated at |xi|.
    pub fn apply_radial_symbol(&self, symbol: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        for m in 0..out.coeffs.len() {
            let s = symbol(self.grid.xi_norm_sq(m).sqrt());
            out.coeffs[m] *= s;
        }
        out
    }

    /// Spectral partial derivative along `axis` (multiplication by
    /// i*xi_axis, with the Nyquist oddball frequency taken as zero).
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(axis < self.grid.d());
        let mut out = self.clone();
        for m in 0..out.coeffs.len() {
            let xi = self.grid.xi_odd(m);
            out.coeffs[m] *= Complex64::new(0.0, xi[axis]);
        }
        out
    }

    /// Zero every coefficient with any |k_axis| > floor(n/3) (2/3-rule mask).
    pub fn dealias(&mut self) {
        let keep = (self.grid.n() / 3) as i64;
        let d = self.grid.d();
        let mut idx = [0usize; 3];
        for m in 0..self.coeffs.len() {
            self.grid.unravel(m, &mut idx[..d]);
            for a in 0..d {
                if self.grid.axis_wavenumber(idx[a]).abs() > keep {
                    self.coeffs[m] = Complex64::ZERO;
                    break;
                }
            }
        }
    }

    /// Physical-space samples; errors if the field is not real.
    pub fn to_samples(&self) -> Result<Vec<f64>> {
        inverse_transform(self)
    }
}

/// `d` spectral fields sharing one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<SpectralField>,
}

impl VectorField {
    pub fn new(components: Vec<SpectralField>) -> Result<Self> {
        let d = components[0].grid().d();
        if components.len() != d {
            return Err(Error::ShapeMismatch {
                axis: 0,
                expected: d,
                got: components.len(),
            });
        }
        for (a, c) in components.iter().enumerate() {
            if c.grid() != components[0].grid() {
                return Err(Error::ShapeMismatch {
                    axis: a,
                    expected: components[0].grid().len(),
                    got: c.grid().len(),
                });
            }
        }
        let components = components
            .into_iter()
            .enumerate()
            .map(|(a, c)| c.with_kind(FieldKind::Component(a)))
            .collect();
        Ok(Self { components })
    }

    pub fn zeros(grid: &Grid) -> Self {
        let comps = (0..grid.d())
            .map(|a| SpectralField::zeros(grid).with_kind(FieldKind::Component(a)))
            .collect();
        Self { components: comps }
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [SpectralField] {
        &mut self.components
    }

    pub fn component(&self, a: usize) -> &SpectralField {
        &self.components[a]
    }

    pub fn max_amplitude(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.max_amplitude())
            .fold(0.0, f64::max)
    }

    /// `max_xi |xi . u_hat(xi)|`, the absolute divergence residual in frequency.
    pub fn divergence_residual(&self) -> f64 {
        let grid = self.grid().clone();
        let mut worst = 0.0f64;
        for m in 0..grid.len() {
            let xi = grid.xi_odd(m);
            let mut dot = Complex64::ZERO;
            for a in 0..grid.d() {
                dot += Complex64::new(0.0, xi[a]) * self.components[a].coeffs()[m];
            }
            worst = worst.max(dot.norm());
        }
        worst
    }

    /// Divergence-free check: `max |xi.u_hat| <= tol * max |u_hat|`.
    pub fn is_divergence_free(&self, tol: f64) -> bool {
        let amp = self.max_amplitude();
        if amp == 0.0 {
            return true;
        }
        self.divergence_residual() <= tol * amp
    }

    pub fn sub(&self, other: &Self) -> Self {
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sub(b))
            .collect();
        Self { components: comps }
    }
}

/// One 1-D FFT plan pair reused across every axis of a grid.
#[derive(Clone)]
pub struct TransformPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl TransformPlan {
    pub fn for_grid(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n: grid.n(),
            forward: planner.plan_fft(grid.n(), FftDirection::Forward),
            inverse: planner.plan_fft(grid.n(), FftDirection::Inverse),
        }
    }

    /// In-place d-dimensional transform of a row-major buffer.
    fn transform(&self, grid: &Grid, data: &mut [Complex64], dir: FftDirection) {
        let n = self.n;
        let fft = match dir {
            FftDirection::Forward => &self.forward,
            FftDirection::Inverse => &self.inverse,
        };
        let d = grid.d();
        let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
        let mut line = vec![Complex64::ZERO; n];
        for axis in 0..d {
            // Axis `axis` has stride n^(d-1-axis); lines are gathered unless contiguous.
            let stride = n.pow((d - 1 - axis) as u32);
            if stride == 1 {
                for chunk in data.chunks_exact_mut(n) {
                    fft.process_with_scratch(chunk, &mut scratch);
                }
            } else {
                let outer = n.pow(axis as u32);
                let inner = stride;
                for o in 0..outer {
                    let base_o = o * n * inner;
                    for i in 0..inner {
                        let base = base_o + i;
                        for (j, slot) in line.iter_mut().enumerate() {
                            *slot = data[base + j * stride];
                        }
                        fft.process_with_scratch(&mut line, &mut scratch);
                        for (j, slot) in line.iter().enumerate() {
                            data[base + j * stride] = *slot;
                        }
                    }
                }
            }
        }
    }
}

thread_local! {
    static PLAN_CACHE: std::cell::RefCell<Vec<(usize, TransformPlan)>> =
        const { std::cell::RefCell::new(Vec::new()) };
}

fn with_plan<R>(grid: &Grid, f: impl FnOnce(&TransformPlan) -> R) -> R {
    PLAN_CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        if let Some((_, plan)) = cache.iter().find(|(n, _)| *n == grid.n()) {
            let plan = plan.clone();
            drop(cache);
            return f(&plan);
        }
        let plan = TransformPlan::for_grid(grid);
        cache.push((grid.n(), plan.clone()));
        drop(cache);
        f(&plan)
    })
}

/// Forward transform of real row-major samples.
pub fn forward_transform(samples: &[f64], grid: &Grid) -> Result<SpectralField> {
    if samples.len() != grid.len() {
        return Err(Error::ShapeMismatch {
            axis: 0,
            expected: grid.len(),
            got: samples.len(),
        });
    }
    let mut data: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    with_plan(grid, |plan| {
        plan.transform(grid, &mut data, FftDirection::Forward)
    });
    let scale = 1.0 / grid.len() as f64;
    for c in &mut data {
        *c *= scale;
    }
    SpectralField::from_coeffs(grid, data)
}

/// Forward transform of complex row-major samples (no reality requirement).
pub fn forward_transform_complex(samples: &[Complex64], grid: &Grid) -> Result<SpectralField> {
    if samples.len() != grid.len() {
        return Err(Error::ShapeMismatch {
            axis: 0,
            expected: grid.len(),
            got: samples.len(),
        });
    }
    let mut data = samples.to_vec();
    with_plan(grid, |plan| {
        plan.transform(grid, &mut data, FftDirection::Forward)
    });
    let scale = 1.0 / grid.len() as f64;
    for c in &mut data {
        *c *= scale;
    }
    SpectralField::from_coeffs(grid, data)
}

/// Inverse transform to real samples; errors on conjugate-symmetry violation.
pub fn inverse_transform(field: &SpectralField) -> Result<Vec<f64>> {
    let amp = field.max_amplitude();
    let violation = field.symmetry_violation();
    if violation > REALITY_TOLERANCE * amp.max(f64::MIN_POSITIVE) {
        return Err(Error::NonRealField {
            violation: violation / amp.max(f64::MIN_POSITIVE),
            tolerance: REALITY_TOLERANCE,
        });
    }
    Ok(inverse_transform_unchecked(field))
}

/// Inverse transform keeping only real parts, without the symmetry check.
pub fn inverse_transform_unchecked(field: &SpectralField) -> Vec<f64> {
    let grid = field.grid();
    let mut data = field.coeffs().to_vec();
    with_plan(grid, |plan| {
        plan.transform(grid, &mut data, FftDirection::Inverse)
    });
    data.into_iter().map(|c| c.re).collect()
}

/// Inverse transform to the full complex samples.
pub fn inverse_transform_complex(field: &SpectralField) -> Vec<Complex64> {
    let grid = field.grid();
    let mut data = field.coeffs().to_vec();
    with_plan(grid, |plan| {
        plan.transform(grid, &mut data, FftDirection::Inverse)
    });
    data
}

/// Box quadrature `dx^d * sum(samples)`; exact for band-limited integrands.
pub fn lattice_integral(samples: &[f64], grid: &Grid) -> f64 {
    grid.cell_volume() * samples.iter().sum::<f64>()
}

/// Dealiased pointwise product: transform to physical space, multiply,
/// transform back, then apply the 2/3-rule mask.
pub fn dealiased_product(a: &SpectralField, b: &SpectralField) -> SpectralField {
    assert_eq!(a.grid(), b.grid());
    let pa = inverse_transform_unchecked(a);
    let pb = inverse_transform_unchecked(b);
    let prod: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
    let mut out = forward_transform(&prod, a.grid()).expect("shape preserved");
    out.dealias();
    out
}

/// Physical samples of the pointwise Euclidean magnitude of a vector field.
pub fn vector_magnitude_samples(u: &VectorField) -> Vec<f64> {
    let mut acc = vec![0.0f64; u.grid().len()];
    for comp in u.components() {
        let s = inverse_transform_unchecked(comp);
        for (a, v) in acc.iter_mut().zip(&s) {
            *a += v * v;
        }
    }
    for a in &mut acc {
        *a = a.sqrt();
    }
    acc
}

/// Physical samples of the Frobenius magnitude of the gradient of `u`.
pub fn gradient_magnitude_samples(u: &VectorField) -> Vec<f64> {
    let grid = u.grid();
    let mut acc = vec![0.0f64; grid.len()];
    for comp in u.components() {
        for axis in 0..grid.d() {
            let s = inverse_transform_unchecked(&comp.derivative(axis));
            for (a, v) in acc.iter_mut().zip(&s) {
                *a += v * v;
            }
        }
    }
    for a in &mut acc {
        *a = a.sqrt();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand::Rng as _;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid2(n: usize) -> Grid {
        Grid::new(2, n, 1.0).unwrap()
    }

    fn random_real_field(grid: &Grid, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        forward_transform(&samples, grid).unwrap()
    }

    #[test]
    fn constant_field_lives_at_zero_frequency() {
        let g = grid2(16);
        let samples = vec![3.25; g.len()];
        let f = forward_transform(&samples, &g).unwrap();
        assert_abs_diff_eq!(f.coeff_at(&[0, 0]).re, 3.25, epsilon = 1e-13);
        let off: f64 = (1..g.len()).map(|m| f.coeffs()[m].norm()).fold(0.0, f64::max);
        assert!(off <= 1e-13);
    }

    #[test]
    fn cosine_splits_into_two_half_modes() {
        let g = grid2(32);
        let samples: Vec<f64> = (0..g.len()).map(|m| g.coords(m)[0].cos()).collect();
        let f = forward_transform(&samples, &g).unwrap();
        assert_abs_diff_eq!(f.coeff_at(&[1, 0]).re, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(f.coeff_at(&[-1, 0]).re, 0.5, epsilon = 1e-13);
        let mut others = 0.0f64;
        for m in 0..g.len() {
            let xi = g.xi(m);
            if (xi[0].abs() - 1.0).abs() > 0.5 || xi[1].abs() > 0.5 {
                others = others.max(f.coeffs()[m].norm());
            }
        }
        assert!(others <= 1e-13);
    }

    #[test]
    fn inverse_of_half_modes_is_cosine() {
        let g = grid2(32);
        let mut f = SpectralField::zeros(&g);
        *f.coeff_at_mut(&[1, 0]) = Complex64::new(0.5, 0.0);
        *f.coeff_at_mut(&[-1, 0]) = Complex64::new(0.5, 0.0);
        let samples = inverse_transform(&f).unwrap();
        for m in 0..g.len() {
            assert_abs_diff_eq!(samples[m], g.coords(m)[0].cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn forward_shape_error_names_input() {
        let g = grid2(16);
        let err = forward_transform(&[0.0; 17], &g).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { expected: 256, got: 17, .. }));
    }

    #[test]
    fn asymmetric_coeffs_are_rejected_as_non_real() {
        let g = grid2(16);
        let mut f = SpectralField::zeros(&g);
        *f.coeff_at_mut(&[1, 0]) = Complex64::new(1.0, 0.0);
        // Missing the conjugate partner at -e1.
        assert!(matches!(
            inverse_transform(&f),
            Err(Error::NonRealField { .. })
        ));
    }

    #[test]
    fn roundtrip_identity_in_3d() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = forward_transform(&samples, &g).unwrap();
        let back = inverse_transform(&f).unwrap();
        for (a, b) in samples.iter().zip(&back) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn inverse_then_forward_reproduces_coefficients() {
        let g = grid2(32);
        let mut f = random_real_field(&g, 77);
        f.symmetrize();
        let samples = inverse_transform(&f).unwrap();
        let back = forward_transform(&samples, &g).unwrap();
        let amp = f.max_amplitude();
        for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
            assert!((a - b).norm() <= 1e-12 * amp);
        }
    }

    #[test]
    fn parseval_matches_coefficient_sum() {
        let g = grid2(64);
        let f = random_real_field(&g, 5);
        let samples = inverse_transform(&f).unwrap();
        let sq: Vec<f64> = samples.iter().map(|v| v * v).collect();
        let physical = lattice_integral(&sq, &g);
        let spectral: f64 =
            g.box_volume() * f.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>();
        assert!((physical - spectral).abs() <= 1e-10 * physical.abs().max(1.0));
    }

    #[test]
    fn quadrature_examples() {
        let g = grid2(64);
        // Constant 1 integrates to the box volume.
        assert_abs_diff_eq!(
            lattice_integral(&vec![1.0; g.len()], &g),
            (2.0 * PI) * (2.0 * PI),
            epsilon = 1e-10
        );
        // Odd integrand sums to zero.
        let sin: Vec<f64> = (0..g.len()).map(|m| g.coords(m)[0].sin()).collect();
        assert!(lattice_integral(&sin, &g).abs() <= 1e-12);
    }

    #[test]
    fn quadrature_of_abs_cos_converges_at_second_order() {
        // |cos x1| has kinks, so box quadrature converges at O(n^-2) toward
        // the analytic value 8*pi; the observed constant is about 83.
        let exact = 8.0 * PI;
        let mut prev_err = f64::INFINITY;
        for n in [64, 128, 256] {
            let g = grid2(n);
            let samples: Vec<f64> = (0..g.len()).map(|m| g.coords(m)[0].cos().abs()).collect();
            let err = (lattice_integral(&samples, &g) - exact).abs();
            assert!(err <= 100.0 / (n as f64 * n as f64), "n={n} err={err:.3e}");
            assert!(err < prev_err);
            prev_err = err;
        }
    }

    #[test]
    fn dealias_zeroes_the_top_third() {
        let g = grid2(16);
        let mut f = SpectralField::zeros(&g);
        *f.coeff_at_mut(&[6, 0]) = Complex64::new(1.0, 0.0);
        *f.coeff_at_mut(&[-6, 0]) = Complex64::new(1.0, 0.0);
        *f.coeff_at_mut(&[3, 3]) = Complex64::new(1.0, 0.0);
        *f.coeff_at_mut(&[-3, -3]) = Complex64::new(1.0, 0.0);
        f.dealias();
        assert_eq!(f.coeff_at(&[6, 0]), Complex64::ZERO);
        assert_eq!(f.coeff_at(&[3, 3]), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn divergence_residual_detects_gradient_fields() {
        let g = grid2(16);
        let mut phi = SpectralField::zeros(&g);
        *phi.coeff_at_mut(&[1, 2]) = Complex64::new(0.3, 0.1);
        *phi.coeff_at_mut(&[-1, -2]) = Complex64::new(0.3, -0.1);
        let grad = VectorField::new(vec![phi.derivative(0), phi.derivative(1)]).unwrap();
        assert!(!grad.is_divergence_free(1e-10));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn transform_roundtrip_and_linearity(seed_a in 0u64..1000, seed_b in 1000u64..2000, a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let g = grid2(16);
            let mut rng = ChaCha8Rng::seed_from_u64(seed_a);
            let fa: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed_b);
            let fb: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();

            // Round-trip.
            let ta = forward_transform(&fa, &g).unwrap();
            let back = inverse_transform(&ta).unwrap();
            for (x, y) in fa.iter().zip(&back) {
                prop_assert!((x - y).abs() <= 1e-12);
            }

            // Linearity.
            let combo: Vec<f64> = fa.iter().zip(&fb).map(|(x, y)| a * x + b * y).collect();
            let tc = forward_transform(&combo, &g).unwrap();
            let tb = forward_transform(&fb, &g).unwrap();
            for m in 0..g.len() {
                let lin = a * ta.coeffs()[m] + b * tb.coeffs()[m];
                prop_assert!((tc.coeffs()[m] - lin).norm() <= 1e-12 * (1.0 + lin.norm()));
            }
        }
    }
}
