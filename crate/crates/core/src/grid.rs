//! Periodic lattice: the discretization of the box [0, 2*pi*L)^d.
//!
//! Physical frequencies are xi = k / L for integer multi-indices k with
//! per-axis components in [-n/2, n/2). Enlarging L refines the frequency
//! lattice and exposes more negative dyadic bands.

use crate::error::{Error, Result};

/// Uniform periodic grid with `n` points per axis on `[0, 2*pi*L)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    d: usize,
    n: usize,
    box_scale: f64,
}

impl Grid {
    pub fn new(d: usize, n: usize, box_scale: f64) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDimension { d });
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGridSize { n });
        }
        if !(box_scale.is_finite() && box_scale > 0.0) {
            return Err(Error::InvalidBoxScale { l: box_scale });
        }
        Ok(Self { d, n, box_scale })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_scale(&self) -> f64 {
        self.box_scale
    }

    /// Grid spacing `2*pi*L / n`.
    pub fn dx(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.box_scale / self.n as f64
    }

    /// Total number of lattice points `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume of one quadrature cell, `dx^d`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.d as i32)
    }

    /// Box volume `(2*pi*L)^d`.
    pub fn box_volume(&self) -> f64 {
        (2.0 * std::f64::consts::PI * self.box_scale).powi(self.d as i32)
    }

    /// Largest per-axis physical frequency `n / (2L)`.
    pub fn nyquist(&self) -> f64 {
        self.n as f64 / (2.0 * self.box_scale)
    }

    /// Signed integer frequency for axis index `i` in `0..n`.
    #[inline]
    pub fn axis_wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Axis index holding integer frequency `k` (must satisfy -n/2 <= k < n/2).
    #[inline]
    pub fn axis_index(&self, k: i64) -> usize {
        debug_assert!(-(self.n as i64) / 2 <= k && k < self.n as i64 / 2);
        k.rem_euclid(self.n as i64) as usize
    }

    /// Decompose a flat row-major index into per-axis indices (first axis slowest).
    #[inline]
    pub fn unravel(&self, mut flat: usize, idx: &mut [usize]) {
        for a in (0..self.d).rev() {
            idx[a] = flat % self.n;
            flat /= self.n;
        }
    }

    /// Flatten per-axis indices into a row-major index.
    #[inline]
    pub fn ravel(&self, idx: &[usize]) -> usize {
        let mut flat = 0usize;
        for a in 0..self.d {
            flat = flat * self.n + idx[a];
        }
        flat
    }

    /// Physical frequency vector xi = k/L at a flat coefficient index.
    pub fn xi(&self, flat: usize) -> [f64; 3] {
        let mut idx = [0usize; 3];
        self.unravel(flat, &mut idx[..self.d]);
        let mut out = [0.0; 3];
        for a in 0..self.d {
            out[a] = self.axis_wavenumber(idx[a]) as f64 / self.box_scale;
        }
        out
    }

    /// Signed frequency for symbols odd in xi: the Nyquist index `n/2` has
    /// no conjugate partner on the lattice, so its directional frequency is
    /// taken as zero (the usual oddball-mode convention). Radial symbols
    /// keep using [`Grid::xi`], whose magnitude is unambiguous.
    pub fn xi_odd(&self, flat: usize) -> [f64; 3] {
        let mut idx = [0usize; 3];
        self.unravel(flat, &mut idx[..self.d]);
        let mut out = [0.0; 3];
        for a in 0..self.d {
            out[a] = if idx[a] == self.n / 2 {
                0.0
            } else {
                self.axis_wavenumber(idx[a]) as f64 / self.box_scale
            };
        }
        out
    }

    /// |xi_odd|^2 at a flat coefficient index.
    #[inline]
    pub fn xi_odd_norm_sq(&self, flat: usize) -> f64 {
        let xi = self.xi_odd(flat);
        let mut s = 0.0;
        for a in 0..self.d {
            s += xi[a] * xi[a];
        }
        s
    }

    /// |xi|^2 at a flat coefficient index.
    #[inline]
    pub fn xi_norm_sq(&self, flat: usize) -> f64 {
        let xi = self.xi(flat);
        let mut s = 0.0;
        for a in 0..self.d {
            s += xi[a] * xi[a];
        }
        s
    }

    /// Precomputed |xi| for every flat index, in lattice order.
    pub fn xi_norms(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.xi_norm_sq(m).sqrt()).collect()
    }

    /// Flat index of the frequency-reflected point (-k mod n per axis).
    pub fn reflect(&self, flat: usize) -> usize {
        let mut idx = [0usize; 3];
        self.unravel(flat, &mut idx[..self.d]);
        let mut out = 0usize;
        for a in 0..self.d {
            let r = (self.n - idx[a]) % self.n;
            out = out * self.n + r;
        }
        out
    }

    /// Physical coordinates of a flat sample index.
    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let mut idx = [0usize; 3];
        self.unravel(flat, &mut idx[..self.d]);
        let mut out = [0.0; 3];
        for a in 0..self.d {
            out[a] = idx[a] as f64 * self.dx();
        }
        out
    }

    /// Smallest nonzero |xi| on the lattice, `1/L`.
    pub fn min_nonzero_xi(&self) -> f64 {
        1.0 / self.box_scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            Grid::new(5, 64, 1.0),
            Err(Error::UnsupportedDimension { d: 5 })
        ));
        assert!(matches!(
            Grid::new(2, 48, 1.0),
            Err(Error::InvalidGridSize { n: 48 })
        ));
        assert!(matches!(
            Grid::new(2, 4, 1.0),
            Err(Error::InvalidGridSize { n: 4 })
        ));
        assert!(Grid::new(2, 64, -1.0).is_err());
    }

    #[test]
    fn spacing_times_n_is_box_length() {
        let g = Grid::new(2, 64, 2.5).unwrap();
        let circumference = 2.0 * std::f64::consts::PI * 2.5;
        assert!((g.dx() * g.n() as f64 - circumference).abs() <= f64::EPSILON * circumference);
    }

    #[test]
    fn wavenumbers_cover_half_open_range() {
        let g = Grid::new(1, 8, 1.0).unwrap();
        let ks: Vec<i64> = (0..8).map(|i| g.axis_wavenumber(i)).collect();
        assert_eq!(ks, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for k in -4..4 {
            assert_eq!(g.axis_wavenumber(g.axis_index(k)), k);
        }
    }

    #[test]
    fn nyquist_bounds_every_axis_frequency() {
        let g = Grid::new(2, 16, 2.0).unwrap();
        for m in 0..g.len() {
            let xi = g.xi(m);
            for a in 0..2 {
                assert!(xi[a].abs() <= g.nyquist());
            }
        }
    }

    #[test]
    fn reflect_is_an_involution() {
        let g = Grid::new(2, 16, 1.0).unwrap();
        for m in 0..g.len() {
            assert_eq!(g.reflect(g.reflect(m)), m);
        }
    }

    #[test]
    fn ravel_unravel_roundtrip() {
        let g = Grid::new(3, 8, 1.0).unwrap();
        let mut idx = [0usize; 3];
        for m in 0..g.len() {
            g.unravel(m, &mut idx);
            assert_eq!(g.ravel(&idx), m);
        }
    }
}
