//! Bony paraproduct calculus: T_f g, the remainder R(f, g), their
//! homogeneous variants, the transport commutator `[u, dot Delta_j] . grad f`
//! and its five-term decomposition.
//!
//! Pointwise products are formed in physical space and dealiased by the 2/3
//! rule, so the frequency-support bookkeeping of the block calculus stays
//! exact on the lattice. In the homogeneous calculus the low-pass `dot S_k`
//! drops the mean mode (torus quotient by constants), so the three Bony
//! parts reconstruct the product of the mean-freed factors.

use crate::error::{Error, Result};
use crate::field::{
    dealiased_product, forward_transform, inverse_transform_unchecked, SpectralField, VectorField,
};
use crate::lp::{delta_j, partial_sum, resolved_range};
use crate::ops::PRESSURE_DIV_TOLERANCE;

/// Offset of the low-pass factor in the paraproduct sum, `S_{j-4} f Delta_j g`.
pub const PARAPRODUCT_OFFSET: i32 = 4;
/// Band separation defining the remainder, `|i - j| <= 3`.
pub const REMAINDER_WIDTH: i32 = 3;

/// Paraproduct `T_f g = sum_j S_{j-4} f Delta_j g` over the resolved range.
pub fn paraproduct(f: &SpectralField, g: &SpectralField, homogeneous: bool) -> SpectralField {
    let grid = f.grid().clone();
    assert_eq!(&grid, g.grid());
    let (j_lo, j_hi) = resolved_range(&grid, homogeneous);
    let mut acc = vec![0.0f64; grid.len()];
    for j in j_lo..=j_hi {
        let low = partial_sum(f, j - PARAPRODUCT_OFFSET, homogeneous);
        if low.max_amplitude() == 0.0 {
            continue;
        }
        let band = delta_j(g, j, homogeneous).field;
        if band.max_amplitude() == 0.0 {
            continue;
        }
        let lp = inverse_transform_unchecked(&low);
        let bp = inverse_transform_unchecked(&band);
        for (a, (x, y)) in acc.iter_mut().zip(lp.iter().zip(&bp)) {
            *a += x * y;
        }
    }
    let mut out = forward_transform(&acc, &grid).expect("shape preserved");
    out.dealias();
    out
}

/// Remainder `R(f, g) = sum_{|i-j| <= 3} Delta_i f Delta_j g`.
pub fn remainder(f: &SpectralField, g: &SpectralField, homogeneous: bool) -> SpectralField {
    let grid = f.grid().clone();
    assert_eq!(&grid, g.grid());
    let (j_lo, j_hi) = resolved_range(&grid, homogeneous);
    let f_bands: Vec<Vec<f64>> = (j_lo..=j_hi)
        .map(|j| inverse_transform_unchecked(&delta_j(f, j, homogeneous).field))
        .collect();
    let g_bands: Vec<Vec<f64>> = (j_lo..=j_hi)
        .map(|j| inverse_transform_unchecked(&delta_j(g, j, homogeneous).field))
        .collect();
    let mut acc = vec![0.0f64; grid.len()];
    for (bi, fi) in f_bands.iter().enumerate() {
        for (bj, gj) in g_bands.iter().enumerate() {
            if (bi as i32 - bj as i32).abs() > REMAINDER_WIDTH {
                continue;
            }
            for (a, (x, y)) in acc.iter_mut().zip(fi.iter().zip(gj)) {
                *a += x * y;
            }
        }
    }
    let mut out = forward_transform(&acc, &grid).expect("shape preserved");
    out.dealias();
    out
}

/// The three Bony parts together with their reconstruction residual.
#[derive(Debug, Clone)]
pub struct BonyDecomposition {
    pub para_fg: SpectralField,
    pub para_gf: SpectralField,
    pub remainder: SpectralField,
    /// Relative sup-norm defect of `T_f g + T_g f + R - fg` against the
    /// dealiased product (of the mean-freed factors when homogeneous).
    pub residual: f64,
}

/// Assemble the full Bony decomposition of the product `f g`.
pub fn bony(f: &SpectralField, g: &SpectralField, homogeneous: bool) -> BonyDecomposition {
    let para_fg = paraproduct(f, g, homogeneous);
    let para_gf = paraproduct(g, f, homogeneous);
    let rem = remainder(f, g, homogeneous);

    let (ft, gt) = if homogeneous {
        let mut ft = f.clone();
        let mut gt = g.clone();
        ft.zero_mean_mode();
        gt.zero_mean_mode();
        (ft, gt)
    } else {
        (f.clone(), g.clone())
    };
    let target = dealiased_product(&ft, &gt);

    let mut sum = para_fg.clone();
    sum.add_assign(&para_gf);
    sum.add_assign(&rem);
    let diff = sum.sub(&target);
    let num = inverse_transform_unchecked(&diff)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let den = inverse_transform_unchecked(&target)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let residual = if den == 0.0 { num } else { num / den };

    BonyDecomposition {
        para_fg,
        para_gf,
        remainder: rem,
        residual,
    }
}

/// Dealiased transport term `u . grad f`.
pub fn convection_scalar(u: &VectorField, f: &SpectralField) -> SpectralField {
    let grid = u.grid().clone();
    let mut acc = SpectralField::zeros(&grid);
    for l in 0..grid.d() {
        acc.add_assign(&dealiased_product(u.component(l), &f.derivative(l)));
    }
    acc
}

fn check_divergence_free(u: &VectorField) -> Result<()> {
    let amp = u.max_amplitude();
    if amp > 0.0 && u.divergence_residual() > PRESSURE_DIV_TOLERANCE * amp {
        return Err(Error::DivergenceViolation {
            violation: u.divergence_residual() / amp,
        });
    }
    Ok(())
}

/// Transport commutator `([u, dot Delta_j] . grad) f` computed directly:
/// `u . grad(dot Delta_j f) - dot Delta_j(u . grad f)`.
pub fn commutator(u: &VectorField, f: &SpectralField, j: i32) -> Result<SpectralField> {
    check_divergence_free(u)?;
    let conv = convection_scalar(u, f);
    Ok(commutator_given_convection(u, f, &conv, j))
}

/// Same as [`commutator`] with the transport term `u . grad f` precomputed,
/// for callers that sweep over many `j`.
pub fn commutator_given_convection(
    u: &VectorField,
    f: &SpectralField,
    conv: &SpectralField,
    j: i32,
) -> SpectralField {
    let band = delta_j(f, j, true).field;
    let mut advected_band = convection_scalar(u, &band);
    let band_of_conv = delta_j(conv, j, true).field;
    advected_band.coeffs_mut()
        .iter_mut()
        .zip(band_of_conv.coeffs())
        .for_each(|(a, b)| *a -= b);
    advected_band
}

/// The five appendix terms of the commutator and their sum.
#[derive(Debug, Clone)]
pub struct CommutatorSplit {
    /// I:   sum_l  T_{dot Delta_j d_l f} u^l
    /// II:  sum_l  R(u^l, dot Delta_j d_l f)
    /// III: sum_l  [T_{u^l}, dot Delta_j] d_l f
    /// IV:  -sum_l dot Delta_j T_{d_l f} u^l
    /// V:   -sum_l dot Delta_j R(u^l, d_l f)
    pub terms: [SpectralField; 5],
    pub total: SpectralField,
}

/// Decompose `([u, dot Delta_j] . grad) f` into the five Bony terms.
pub fn commutator_split(u: &VectorField, f: &SpectralField, j: i32) -> Result<CommutatorSplit> {
    check_divergence_free(u)?;
    let grid = u.grid().clone();
    let mut terms: [SpectralField; 5] = [
        SpectralField::zeros(&grid),
        SpectralField::zeros(&grid),
        SpectralField::zeros(&grid),
        SpectralField::zeros(&grid),
        SpectralField::zeros(&grid),
    ];
    for l in 0..grid.d() {
        let ul = u.component(l);
        let dlf = f.derivative(l);
        let w = delta_j(&dlf, j, true).field; // dot Delta_j d_l f

        terms[0].add_assign(&paraproduct(&w, ul, true));
        terms[1].add_assign(&remainder(ul, &w, true));

        let tu_w = paraproduct(ul, &w, true);
        let tu_dlf_band = delta_j(&paraproduct(ul, &dlf, true), j, true).field;
        terms[2].add_assign(&tu_w.sub(&tu_dlf_band));

        let t4 = delta_j(&paraproduct(&dlf, ul, true), j, true).field;
        let t5 = delta_j(&remainder(ul, &dlf, true), j, true).field;
        for (a, b) in terms[3].coeffs_mut().iter_mut().zip(t4.coeffs()) {
            *a -= b;
        }
        for (a, b) in terms[4].coeffs_mut().iter_mut().zip(t5.coeffs()) {
            *a -= b;
        }
    }
    let mut total = SpectralField::zeros(&grid);
    for t in &terms {
        total.add_assign(t);
    }
    Ok(CommutatorSplit { terms, total })
}
