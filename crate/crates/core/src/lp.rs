//! Littlewood-Paley blocks: the radial cutoff, annular band symbols and the
//! dyadic block operators with an exact discrete partition of unity.
//!
//! All block operators act by symbol multiplication in coefficient space;
//! each symbol is identically zero outside its annulus, so frequency-support
//! statements hold exactly on the lattice.

use std::collections::BTreeMap;

use crate::field::{inverse_transform_unchecked, SpectralField};
use crate::grid::Grid;

/// Smooth radial cutoff: 1 on [0, 3/4], 0 on [1, inf), glued with exp(-1/t).
#[derive(Debug, Clone, PartialEq)]
pub struct BumpProfile {
    transition: (f64, f64),
    smoothness_witness: &'static str,
}

impl Default for BumpProfile {
    fn default() -> Self {
        make_profile()
    }
}

/// The canonical profile: chi(r) = g(4(1-r)) on the transition interval,
/// where g(t) = theta(t)/(theta(t)+theta(1-t)) and theta(t) = exp(-1/t).
pub fn make_profile() -> BumpProfile {
    BumpProfile {
        transition: (0.75, 1.0),
        smoothness_witness: "exp(-1/t) gluing",
    }
}

fn theta(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

fn glue(t: f64) -> f64 {
    let a = theta(t);
    let b = theta(1.0 - t);
    a / (a + b)
}

impl BumpProfile {
    pub fn transition(&self) -> (f64, f64) {
        self.transition
    }

    pub fn smoothness_witness(&self) -> &'static str {
        self.smoothness_witness
    }

    /// The radial cutoff chi at radius `r >= 0`.
    pub fn chi(&self, r: f64) -> f64 {
        let (lo, hi) = self.transition;
        if r <= lo {
            1.0
        } else if r >= hi {
            0.0
        } else {
            glue(4.0 * (1.0 - r))
        }
    }

    /// Annular band symbol `h_j(r) = chi(2^{-j-1} r) - chi(2^{-j} r)`.
    pub fn band(&self, j: i32, r: f64) -> f64 {
        let half = f64::exp2(-(j as f64) - 1.0);
        self.chi(half * r) - self.chi(2.0 * half * r)
    }
}

/// Band symbol at a physical frequency vector.
pub fn band_symbol(profile: &BumpProfile, j: i32, xi: &[f64]) -> f64 {
    let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    profile.band(j, r)
}

/// Top resolved band index: `ceil(log2(n/(2L))) + 1`.
pub fn j_max(grid: &Grid) -> i32 {
    grid.nyquist().log2().ceil() as i32 + 1
}

/// Lowest resolved homogeneous band index: `floor(log2(1/L)) - 1`.
pub fn j_min_hom(grid: &Grid) -> i32 {
    (1.0 / grid.box_scale()).log2().floor() as i32 - 1
}

/// Resolved band range for either calculus.
pub fn resolved_range(grid: &Grid, homogeneous: bool) -> (i32, i32) {
    if homogeneous {
        (j_min_hom(grid), j_max(grid))
    } else {
        (-1, j_max(grid))
    }
}

/// One dyadic block with its truncation status.
#[derive(Debug, Clone)]
pub struct Band {
    pub j: i32,
    pub field: SpectralField,
    /// True when `j` lies outside the resolved range of the grid.
    pub truncated: bool,
}

/// Apply the block operator Delta_j (inhomogeneous) or dotted Delta_j.
pub fn delta_j(f: &SpectralField, j: i32, homogeneous: bool) -> Band {
    let profile = make_profile();
    delta_j_with(&profile, f, j, homogeneous)
}

pub fn delta_j_with(profile: &BumpProfile, f: &SpectralField, j: i32, homogeneous: bool) -> Band {
    let grid = f.grid().clone();
    let (j_lo, j_hi) = resolved_range(&grid, homogeneous);

    if !homogeneous && j <= -2 {
        // Identically zero by definition, not a truncation.
        return Band {
            j,
            field: SpectralField::zeros(&grid),
            truncated: false,
        };
    }
    let truncated = j < j_lo || j > j_hi;
    if homogeneous && truncated {
        return Band {
            j,
            field: SpectralField::zeros(&grid),
            truncated,
        };
    }

    let field = if !homogeneous && j == -1 {
        f.apply_radial_symbol(|r| profile.chi(r))
    } else {
        f.apply_radial_symbol(|r| profile.band(j, r))
    };
    Band {
        j,
        field,
        truncated,
    }
}

/// Low-pass partial sum S_k (or dotted S_k), using the telescoped closed
/// form: multiplication by `chi(2^{-k-1} xi)`.
pub fn partial_sum(f: &SpectralField, k: i32, homogeneous: bool) -> SpectralField {
    let profile = make_profile();
    partial_sum_with(&profile, f, k, homogeneous)
}

pub fn partial_sum_with(
    profile: &BumpProfile,
    f: &SpectralField,
    k: i32,
    homogeneous: bool,
) -> SpectralField {
    let grid = f.grid().clone();
    if !homogeneous && k <= -2 {
        return SpectralField::zeros(&grid);
    }
    let scale = f64::exp2(-(k as f64) - 1.0);
    let mut out = f.apply_radial_symbol(|r| profile.chi(scale * r));
    if homogeneous {
        // The homogeneous calculus works modulo the mean mode.
        out.zero_mean_mode();
    }
    out
}

/// Indexed family of blocks over the resolved range.
#[derive(Debug, Clone)]
pub struct DyadicDecomposition {
    pub profile: BumpProfile,
    pub homogeneous: bool,
    pub bands: BTreeMap<i32, SpectralField>,
    pub j_min: i32,
    pub j_max: i32,
}

impl DyadicDecomposition {
    /// Sum of all bands (equals `f`, or `f` minus its mean when homogeneous).
    pub fn reconstruct(&self) -> SpectralField {
        let mut iter = self.bands.values();
        let mut acc = iter.next().expect("at least one band").clone();
        for band in iter {
            acc.add_assign(band);
        }
        acc
    }

    /// Relative sup-norm reconstruction error against the original field.
    pub fn reconstruction_error(&self, original: &SpectralField) -> f64 {
        let mut target = original.clone();
        if self.homogeneous {
            target.zero_mean_mode();
        }
        let diff = self.reconstruct().sub(&target);
        let diff_phys = inverse_transform_unchecked(&diff);
        let orig_phys = inverse_transform_unchecked(&target);
        let num = diff_phys.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let den = orig_phys.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }
}

/// Decompose `f` into its dyadic blocks over the resolved range.
pub fn decompose(f: &SpectralField, homogeneous: bool) -> DyadicDecomposition {
    let profile = make_profile();
    let (j_lo, j_hi) = resolved_range(f.grid(), homogeneous);
    let mut bands = BTreeMap::new();
    for j in j_lo..=j_hi {
        bands.insert(j, delta_j_with(&profile, f, j, homogeneous).field);
    }
    DyadicDecomposition {
        profile,
        homogeneous,
        bands,
        j_min: j_lo,
        j_max: j_hi,
    }
}
