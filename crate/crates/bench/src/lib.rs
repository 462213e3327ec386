//! Shared fixtures for the criterion benchmarks.

use lp_euler_core::field::SpectralField;
use lp_euler_core::grid::Grid;
use lp_euler_core::verify::{generate_scalar, FieldGenSpec, GenKind};

/// A reproducible band-limited field on an n-by-n unit-scale grid.
pub fn fixture_field(n: usize, seed: u64) -> SpectralField {
    let grid = Grid::new(2, n, 1.0).unwrap();
    let spec = FieldGenSpec {
        seed,
        band_range: (0, lp_euler_core::lp::j_max(&grid) - 2),
        spectrum_slope: 3.5,
        kind: GenKind::Scalar,
    };
    generate_scalar(&spec, &grid).unwrap()
}
