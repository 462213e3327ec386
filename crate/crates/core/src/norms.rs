//! Norms: L^p, L^inf, W^{1,inf}, the end-point Triebel-Lizorkin norms
//! (integral of the pointwise sup over bands of `2^{js} |Delta_j f|`) and
//! Besov norms (`l^q` over bands of `2^{js} |Delta_j f|_{L^p}`).
//!
//! Vector fields are measured through pointwise Euclidean magnitudes: the
//! band magnitude `|Delta_j u|(x)` is the Euclidean norm over components.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{
    gradient_magnitude_samples, inverse_transform, inverse_transform_unchecked, lattice_integral,
    vector_magnitude_samples, SpectralField, VectorField,
};
use crate::grid::Grid;
use crate::lp::{make_profile, resolved_range, BumpProfile};

mod exponent_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            v.serialize(s)
        } else {
            "inf".serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Word(w) if w == "inf" => Ok(f64::INFINITY),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("bad exponent {w:?}"))),
        }
    }
}

/// Which norm was computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space")]
pub enum NormSpec {
    #[serde(rename = "lp")]
    Lp {
        #[serde(with = "exponent_serde")]
        p: f64,
    },
    #[serde(rename = "linf")]
    Linf,
    #[serde(rename = "w1inf")]
    W1inf,
    #[serde(rename = "tl_inhom")]
    TlInhom { s: f64 },
    #[serde(rename = "tl_hom")]
    TlHom { s: f64 },
    #[serde(rename = "besov")]
    Besov {
        s: f64,
        #[serde(with = "exponent_serde")]
        p: f64,
        #[serde(with = "exponent_serde")]
        q: f64,
    },
}

/// A computed norm with the band range it saw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub spec: NormSpec,
    /// Resolved band range used, when the norm is band-based.
    pub truncation: Option<(i32, i32)>,
}

fn check_p(name: &'static str, p: f64) -> Result<()> {
    if p >= 1.0 || p == f64::INFINITY {
        Ok(())
    } else {
        Err(Error::InvalidExponent { name, value: p })
    }
}

/// L^p norm by lattice quadrature (p = inf gives the sup norm).
pub fn lp_norm(f: &SpectralField, p: f64) -> Result<NormValue> {
    check_p("p", p)?;
    let samples = inverse_transform(f)?;
    let value = lp_of_samples(&samples, f.grid(), p);
    Ok(NormValue {
        value,
        spec: NormSpec::Lp { p },
        truncation: None,
    })
}

fn lp_of_samples(samples: &[f64], grid: &Grid, p: f64) -> f64 {
    if p == f64::INFINITY {
        samples.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    } else if p == 1.0 {
        let abs: Vec<f64> = samples.iter().map(|v| v.abs()).collect();
        lattice_integral(&abs, grid)
    } else {
        let pow: Vec<f64> = samples.iter().map(|v| v.abs().powf(p)).collect();
        lattice_integral(&pow, grid).powf(1.0 / p)
    }
}

/// Sup norm of a real field.
pub fn linf_norm(f: &SpectralField) -> Result<NormValue> {
    let samples = inverse_transform(f)?;
    Ok(NormValue {
        value: samples.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        spec: NormSpec::Linf,
        truncation: None,
    })
}

/// `|u|_inf + |grad u|_inf` with spectral gradients (vector field).
pub fn w1inf_norm(u: &VectorField) -> Result<NormValue> {
    for comp in u.components() {
        inverse_transform(comp)?;
    }
    let mag = vector_magnitude_samples(u);
    let grad = gradient_magnitude_samples(u);
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(*x));
    Ok(NormValue {
        value: sup(&mag) + sup(&grad),
        spec: NormSpec::W1inf,
        truncation: None,
    })
}

/// Scalar W^{1,inf}: `|f|_inf + |grad f|_inf`.
pub fn w1inf_norm_scalar(f: &SpectralField) -> Result<NormValue> {
    let samples = inverse_transform(f)?;
    let grid = f.grid();
    let mut grad_sq = vec![0.0f64; grid.len()];
    for axis in 0..grid.d() {
        let g = inverse_transform_unchecked(&f.derivative(axis));
        for (acc, v) in grad_sq.iter_mut().zip(&g) {
            *acc += v * v;
        }
    }
    let sup = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sup_grad = grad_sq.iter().fold(0.0f64, |m, v| m.max(v.sqrt()));
    Ok(NormValue {
        value: sup + sup_grad,
        spec: NormSpec::W1inf,
        truncation: None,
    })
}

/// Band weight `2^{js}`.
#[inline]
fn weight(j: i32, s: f64) -> f64 {
    f64::exp2(j as f64 * s)
}

fn band_multiplier(profile: &BumpProfile, j: i32, homogeneous: bool, r: f64) -> f64 {
    if !homogeneous && j == -1 {
        profile.chi(r)
    } else {
        profile.band(j, r)
    }
}

/// Physical samples of the pointwise sup over resolved bands of
/// `2^{js} |Delta_j f|(x)`, shared by the scalar TL norm and the
/// inequality runners that integrate band envelopes of other operators.
pub fn band_sup_samples(f: &SpectralField, s: f64, homogeneous: bool) -> (Vec<f64>, (i32, i32)) {
    let grid = f.grid().clone();
    let profile = make_profile();
    let (j_lo, j_hi) = resolved_range(&grid, homogeneous);
    let radii = grid.xi_norms();
    let mut sup = vec![0.0f64; grid.len()];
    let mut band = SpectralField::zeros(&grid);
    for j in j_lo..=j_hi {
        for m in 0..grid.len() {
            let h = band_multiplier(&profile, j, homogeneous, radii[m]);
            band.coeffs_mut()[m] = f.coeffs()[m] * h;
        }
        if homogeneous {
            band.zero_mean_mode();
        }
        let phys = inverse_transform_unchecked(&band);
        let w = weight(j, s);
        for (acc, v) in sup.iter_mut().zip(&phys) {
            *acc = acc.max(w * v.abs());
        }
    }
    (sup, (j_lo, j_hi))
}

/// Vector analogue of [`band_sup_samples`] (Euclidean band magnitudes).
pub fn band_sup_samples_vector(
    u: &VectorField,
    s: f64,
    homogeneous: bool,
) -> (Vec<f64>, (i32, i32)) {
    let grid = u.grid().clone();
    let profile = make_profile();
    let (j_lo, j_hi) = resolved_range(&grid, homogeneous);
    let radii = grid.xi_norms();
    let mut sup = vec![0.0f64; grid.len()];
    let mut band = SpectralField::zeros(&grid);
    let mut mag_sq = vec![0.0f64; grid.len()];
    for j in j_lo..=j_hi {
        mag_sq.iter_mut().for_each(|v| *v = 0.0);
        for comp in u.components() {
            for m in 0..grid.len() {
                let h = band_multiplier(&profile, j, homogeneous, radii[m]);
                band.coeffs_mut()[m] = comp.coeffs()[m] * h;
            }
            if homogeneous {
                band.zero_mean_mode();
            }
            let phys = inverse_transform_unchecked(&band);
            for (acc, v) in mag_sq.iter_mut().zip(&phys) {
                *acc += v * v;
            }
        }
        let w = weight(j, s);
        for (acc, v) in sup.iter_mut().zip(&mag_sq) {
            *acc = acc.max(w * v.sqrt());
        }
    }
    (sup, (j_lo, j_hi))
}

/// Triebel-Lizorkin norm F^s_{1,inf} (inhomogeneous) or its dotted variant.
pub fn tl_norm(f: &SpectralField, s: f64, homogeneous: bool) -> NormValue {
    let (sup, range) = band_sup_samples(f, s, homogeneous);
    NormValue {
        value: lattice_integral(&sup, f.grid()),
        spec: if homogeneous {
            NormSpec::TlHom { s }
        } else {
            NormSpec::TlInhom { s }
        },
        truncation: Some(range),
    }
}

/// Vector-field Triebel-Lizorkin norm.
pub fn tl_norm_vector(u: &VectorField, s: f64, homogeneous: bool) -> NormValue {
    let (sup, range) = band_sup_samples_vector(u, s, homogeneous);
    NormValue {
        value: lattice_integral(&sup, u.grid()),
        spec: if homogeneous {
            NormSpec::TlHom { s }
        } else {
            NormSpec::TlInhom { s }
        },
        truncation: Some(range),
    }
}

/// Besov norm B^s_{p,q} over the inhomogeneous resolved range.
pub fn besov_norm(f: &SpectralField, s: f64, p: f64, q: f64) -> Result<NormValue> {
    check_p("p", p)?;
    check_p("q", q)?;
    let grid = f.grid().clone();
    let profile = make_profile();
    let (j_lo, j_hi) = resolved_range(&grid, false);
    let radii = grid.xi_norms();
    let mut band = SpectralField::zeros(&grid);
    let mut terms = Vec::new();
    for j in j_lo..=j_hi {
        for m in 0..grid.len() {
            let h = band_multiplier(&profile, j, false, radii[m]);
            band.coeffs_mut()[m] = f.coeffs()[m] * h;
        }
        let phys = inverse_transform_unchecked(&band);
        terms.push(weight(j, s) * lp_of_samples(&phys, &grid, p));
    }
    let value = if q == f64::INFINITY {
        terms.iter().fold(0.0f64, |m, v| m.max(*v))
    } else {
        terms
            .iter()
            .map(|v| v.powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    };
    Ok(NormValue {
        value,
        spec: NormSpec::Besov { s, p, q },
        truncation: Some((j_lo, j_hi)),
    })
}

/// Vector Besov norm through pointwise Euclidean band magnitudes.
pub fn besov_norm_vector(u: &VectorField, s: f64, p: f64, q: f64) -> Result<NormValue> {
    check_p("p", p)?;
    check_p("q", q)?;
    let grid = u.grid().clone();
    let profile = make_profile();
    let (j_lo, j_hi) = resolved_range(&grid, false);
    let radii = grid.xi_norms();
    let mut band = SpectralField::zeros(&grid);
    let mut terms = Vec::new();
    let mut mag_sq = vec![0.0f64; grid.len()];
    for j in j_lo..=j_hi {
        mag_sq.iter_mut().for_each(|v| *v = 0.0);
        for comp in u.components() {
            for m in 0..grid.len() {
                let h = band_multiplier(&profile, j, false, radii[m]);
                band.coeffs_mut()[m] = comp.coeffs()[m] * h;
            }
            let phys = inverse_transform_unchecked(&band);
            for (acc, v) in mag_sq.iter_mut().zip(&phys) {
                *acc += v * v;
            }
        }
        let mag: Vec<f64> = mag_sq.iter().map(|v| v.sqrt()).collect();
        terms.push(weight(j, s) * lp_of_samples(&mag, &grid, p));
    }
    let value = if q == f64::INFINITY {
        terms.iter().fold(0.0f64, |m, v| m.max(*v))
    } else {
        terms
            .iter()
            .map(|v| v.powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    };
    Ok(NormValue {
        value,
        spec: NormSpec::Besov { s, p, q },
        truncation: Some((j_lo, j_hi)),
    })
}

/// Both sides of the norm equivalence for s > 0, and their ratio.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub s: f64,
    pub inhomogeneous_norm: f64,
    pub l1_plus_homogeneous: f64,
    /// `inhomogeneous_norm / l1_plus_homogeneous`; 1 for the zero field.
    pub ratio: f64,
}

/// Compare `|f|_{F^s}` against `|f|_{L^1} + |f|_{dot F^s}` (s > 0).
pub fn norm_equivalence_check(f: &SpectralField, s: f64) -> Result<EquivalenceReport> {
    if s <= 0.0 {
        return Err(Error::InvalidSmoothness {
            s,
            reason: "equivalence requires s > 0".into(),
        });
    }
    let inhom = tl_norm(f, s, false).value;
    let l1 = lp_norm(f, 1.0)?.value;
    let hom = tl_norm(f, s, true).value;
    let rhs = l1 + hom;
    let ratio = if inhom == 0.0 && rhs == 0.0 {
        1.0
    } else {
        inhom / rhs
    };
    Ok(EquivalenceReport {
        s,
        inhomogeneous_norm: inhom,
        l1_plus_homogeneous: rhs,
        ratio,
    })
}
