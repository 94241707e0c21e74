//! Fixtures shared by the criterion benchmarks.

use paramech_core::{PolyScalar, ScalarField};

/// `½ Σ x²` on `R^{4n}` as an exact polynomial field.
pub fn harmonic(n: usize) -> ScalarField {
    ScalarField::polynomial(PolyScalar::half_sum_of_squares(4 * n))
}

/// The unit point `(1, 0, …, 0)` of `R^{4n}`.
pub fn unit_point(n: usize) -> Vec<f64> {
    let mut x = vec![0.0; 4 * n];
    x[0] = 1.0;
    x
}
