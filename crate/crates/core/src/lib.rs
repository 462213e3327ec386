//! Spectral Littlewood-Paley toolkit on the periodic box.
//!
//! The crate provides, bottom to top:
//!
//! - [`grid`] / [`field`]: lattice geometry, spectral fields, transforms,
//!   quadrature and dealiased products;
//! - [`io`]: the bit-exact field file format;
//! - [`lp`]: the radial cutoff, dyadic blocks and partition of unity;
//! - [`norms`]: L^p, W^{1,inf}, end-point Triebel-Lizorkin and Besov norms;
//! - [`ops`]: maximal functions, Riesz-type multipliers, fractional
//!   derivatives, Leray projection and the Euler pressure gradient;
//! - [`para`]: Bony paraproducts, remainders and transport commutators;
//! - [`verify`]: randomized inequality runners with ensemble statistics;
//! - [`euler2d`]: the 2D vorticity solver and its Gronwall diagnostics.

// Lattice kernels walk several parallel flat arrays by index; iterator
// rewrites of those loops hurt readability without changing codegen.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod euler2d;
pub mod field;
pub mod grid;
pub mod io;
pub mod lp;
pub mod norms;
pub mod ops;
pub mod para;
pub mod verify;

pub use error::{Error, Result};
pub use field::{
    forward_transform, inverse_transform, lattice_integral, FieldKind, SpectralField, VectorField,
};
pub use grid::Grid;
pub use lp::{
    band_symbol, decompose, delta_j, make_profile, partial_sum, BumpProfile, DyadicDecomposition,
};
pub use norms::{
    besov_norm, linf_norm, lp_norm, norm_equivalence_check, tl_norm, tl_norm_vector, w1inf_norm,
    NormSpec, NormValue,
};
pub use ops::{
    frac_deriv, leray, maximal, peetre_ratio, pressure_gradient, riesz_multiplier, MaximalConfig,
};
pub use para::{bony, commutator, commutator_split, paraproduct, remainder, BonyDecomposition};
pub use verify::{
    generate, run_inequality, stability_sweep, FieldGenSpec, GenKind, InequalityId,
    InequalityReport,
};
pub use euler2d::{
    fit_c0, gronwall_envelope, simulate, two_d_global_check, EulerTrajectory, InitialCondition,
    SimConfig,
};
