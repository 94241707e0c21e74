//! Small dense linear solves on top of `nalgebra`'s partially pivoted LU.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Reciprocal condition numbers below this are treated as singular.
pub const SINGULAR_RCOND: f64 = 1e-12;

pub fn to_dmatrix(m: &[Vec<f64>]) -> DMatrix<f64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows, cols, |r, c| m[r][c])
}

/// LU factorisation with a 1-norm condition estimate.
pub struct Factorized {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    rcond: f64,
}

impl Factorized {
    /// Factorises `m`; `None` when it is singular or `rcond < SINGULAR_RCOND`.
    pub fn new(m: &[Vec<f64>]) -> Option<Self> {
        let a = to_dmatrix(m);
        let dim = a.nrows();
        if dim == 0 || a.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let norm = one_norm(&a);
        let lu = a.lu();
        let inv = lu.try_inverse()?;
        let rcond = if norm == 0.0 {
            0.0
        } else {
            1.0 / (norm * one_norm(&inv))
        };
        if rcond.is_nan() || rcond < SINGULAR_RCOND {
            return None;
        }
        Some(Self { lu, rcond })
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let rhs = DVector::from_column_slice(b);
        self.lu
            .solve(&rhs)
            .expect("factorisation was checked to be nonsingular")
            .iter()
            .copied()
            .collect()
    }
}

fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `m x = b`, mapping singularity to `err`.
pub fn solve(m: &[Vec<f64>], b: &[f64], err: Error) -> Result<Vec<f64>> {
    if m.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: m.len(),
            got: b.len(),
        });
    }
    Factorized::new(m).map(|f| f.solve(b)).ok_or(err)
}

pub fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|c| (0..rows).map(|r| m[r][c]).collect()).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
