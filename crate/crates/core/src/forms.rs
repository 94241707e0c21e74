//! Exact exterior calculus on `R^{4n}` with polynomial coefficients.
//!
//! A [`KForm`] of degree `k` is `Σ_I f_I dx_{I_1} ∧ … ∧ dx_{I_k}` over strictly
//! increasing index tuples `I`. Degrees are capped at 3; nothing here needs
//! more than `d` of a 2-form.
//!
//! The structure-dependent operators are the vertical derivation
//! `i_A ω(X_1, …, X_r) = Σ_k ω(X_1, …, A X_k, …, X_r)` and the vertical
//! differential `d_A = i_A d - d i_A`. On functions `d_A f (v) = df(A v)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{rat_to_f64, PolyScalar, Rational};
use crate::structure::{build_structure, IntMatrix, StructureKind};
use crate::tables;

pub const MAX_DEGREE: usize = 3;

/// Sorts an index tuple, returning the permutation sign, or `None` when an
/// index repeats (the wedge vanishes).
fn canonicalize(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Differential form of degree 0..=3 on `R^dim`.
#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, PolyScalar>,
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeOverflow(degree));
        }
        Ok(Self {
            dim,
            degree,
            terms: BTreeMap::new(),
        })
    }

    /// The 0-form `f`.
    pub fn function(f: PolyScalar) -> Self {
        let dim = f.nvars();
        let mut out = Self {
            dim,
            degree: 0,
            terms: BTreeMap::new(),
        };
        out.add_term(&[], f);
        out
    }

    /// The coordinate 1-form `dx_k` (0-based).
    pub fn dx(dim: usize, k: usize) -> Self {
        let mut out = Self {
            dim,
            degree: 1,
            terms: BTreeMap::new(),
        };
        out.add_term(&[k], PolyScalar::constant(dim, Rational::one()));
        out
    }

    /// `f dx_{I_1} ∧ …` for an arbitrary (unsorted) index list.
    pub fn monomial(f: PolyScalar, indices: &[usize]) -> Result<Self> {
        let mut out = Self::zero(f.nvars(), indices.len())?;
        out.add_term(indices, f);
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &PolyScalar)> {
        self.terms.iter()
    }

    /// Coefficient on the increasing tuple `indices`, zero if absent.
    pub fn coefficient(&self, indices: &[usize]) -> PolyScalar {
        self.terms
            .get(indices)
            .cloned()
            .unwrap_or_else(|| PolyScalar::zero(self.dim))
    }

    /// Adds `f dx_{indices}`, reordering the indices with the sign of the permutation.
    pub fn add_term(&mut self, indices: &[usize], f: PolyScalar) {
        assert_eq!(indices.len(), self.degree, "index tuple length must equal the degree");
        assert_eq!(f.nvars(), self.dim, "coefficient lives in a different space");
        if f.is_zero() {
            return;
        }
        let Some((key, sign)) = canonicalize(indices) else {
            return;
        };
        let f = if sign < 0 { -&f } else { f };
        let sum = match self.terms.get(&key) {
            Some(existing) => existing + &f,
            None => f,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (idx, f) in &other.terms {
            out.add_term(idx, f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self {
            dim: self.dim,
            degree: self.degree,
            terms: BTreeMap::new(),
        };
        for (idx, f) in &self.terms {
            out.add_term(idx, f.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by the function `g`.
    pub fn mul_function(&self, g: &PolyScalar) -> Self {
        let mut out = Self {
            dim: self.dim,
            degree: self.degree,
            terms: BTreeMap::new(),
        };
        for (idx, f) in &self.terms {
            out.add_term(idx, f * g);
        }
        out
    }

    /// `ω(e_{b_1}, …, e_{b_k})` as a polynomial, for arbitrary basis indices.
    pub fn eval_on_basis(&self, basis: &[usize]) -> PolyScalar {
        assert_eq!(basis.len(), self.degree);
        match canonicalize(basis) {
            None => PolyScalar::zero(self.dim),
            Some((key, sign)) => {
                let c = self.coefficient(&key);
                if sign < 0 {
                    -&c
                } else {
                    c
                }
            }
        }
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let wedge: Vec<String> = idx.iter().map(|k| format!("dx{}", k + 1)).collect();
                if wedge.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c}) {}", wedge.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Vector field with polynomial components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymVectorField {
    pub components: Vec<PolyScalar>,
}

impl SymVectorField {
    pub fn new(components: Vec<PolyScalar>) -> Result<Self> {
        let dim = components.len();
        if components.iter().any(|c| c.nvars() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: components
                    .iter()
                    .map(PolyScalar::nvars)
                    .find(|&k| k != dim)
                    .unwrap_or(0),
            });
        }
        Ok(Self { components })
    }

    /// Constant coordinate field `∂/∂x_k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let components = (0..dim)
            .map(|a| {
                if a == k {
                    PolyScalar::constant(dim, Rational::one())
                } else {
                    PolyScalar::zero(dim)
                }
            })
            .collect();
        Self { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

/// `a ∧ b`.
pub fn wedge(a: &KForm, b: &KForm) -> Result<KForm> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: b.dim,
        });
    }
    let mut out = KForm::zero(a.dim, a.degree + b.degree)?;
    for (ia, fa) in &a.terms {
        for (ib, fb) in &b.terms {
            let idx: Vec<usize> = ia.iter().chain(ib).copied().collect();
            out.add_term(&idx, fa * fb);
        }
    }
    Ok(out)
}

/// Exterior derivative; the input degree must be at most 2.
pub fn ext_d(a: &KForm) -> Result<KForm> {
    let mut out = KForm::zero(a.dim, a.degree + 1)?;
    for (idx, f) in &a.terms {
        for k in 0..a.dim {
            let df = f.derivative(k);
            if df.is_zero() {
                continue;
            }
            let full: Vec<usize> = std::iter::once(k).chain(idx.iter().copied()).collect();
            out.add_term(&full, df);
        }
    }
    Ok(out)
}

/// Interior product `i_X a`, `(i_X a)(Y_1, …) = a(X, Y_1, …)`.
pub fn interior(x: &SymVectorField, a: &KForm) -> Result<KForm> {
    if a.degree == 0 {
        return Err(Error::InvalidArgument(
            "interior product of a 0-form is undefined".into(),
        ));
    }
    if x.dim() != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: x.dim(),
        });
    }
    let mut out = KForm::zero(a.dim, a.degree - 1)?;
    for (idx, f) in &a.terms {
        for (m, &k) in idx.iter().enumerate() {
            let xk = &x.components[k];
            if xk.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != m)
                .map(|(_, &v)| v)
                .collect();
            let coeff = f * xk;
            let coeff = if m % 2 == 1 { -&coeff } else { coeff };
            out.add_term(&rest, coeff);
        }
    }
    Ok(out)
}

fn tangent_matrix(kind: StructureKind, dim: usize) -> Result<IntMatrix> {
    kind.require_tangent()?;
    if !dim.is_multiple_of(4) || dim == 0 {
        return Err(Error::InvalidArgument(format!(
            "dimension {dim} is not a positive multiple of 4"
        )));
    }
    Ok(build_structure(kind, dim / 4)?.matrix)
}

/// `i_A a`: replaces each covector factor `dx_b` in turn by `dx_b ∘ A`.
/// Zero on 0-forms.
pub fn vertical_derivation(kind: StructureKind, a: &KForm) -> Result<KForm> {
    let m = tangent_matrix(kind, a.dim)?;
    let mut out = KForm::zero(a.dim, a.degree)?;
    for (idx, f) in &a.terms {
        for pos in 0..idx.len() {
            let b = idx[pos];
            for c in 0..a.dim {
                let coeff = m.get(b, c);
                if coeff == 0 {
                    continue;
                }
                let mut replaced = idx.clone();
                replaced[pos] = c;
                out.add_term(&replaced, f.scale(&Rational::from_integer(coeff.into())));
            }
        }
    }
    Ok(out)
}

/// `d_A f = i_A df - d i_A f` on a function.
pub fn vertical_differential(kind: StructureKind, f: &PolyScalar) -> Result<KForm> {
    let zero_form = KForm::function(f.clone());
    let first = vertical_derivation(kind, &ext_d(&zero_form)?)?;
    let second = ext_d(&vertical_derivation(kind, &zero_form)?)?;
    first.sub(&second)
}

/// `d_A f` from the block-wise coordinate formula of each structure.
pub fn vertical_differential_coordinates(kind: StructureKind, f: &PolyScalar) -> Result<KForm> {
    let dim = f.nvars();
    tangent_matrix(kind, dim)?;
    let mut out = KForm::zero(dim, 1)?;
    let entries = tables::vertical_differential_formula(kind.tag);
    for (coframe, deriv, sign) in tables::expand(dim / 4, &entries) {
        out.add_term(
            &[coframe],
            f.derivative(deriv).scale(&Rational::from_integer(sign.into())),
        );
    }
    Ok(out)
}

/// `Φ_L^A = -d d_A L`.
pub fn lagrangian_two_form(kind: StructureKind, l: &PolyScalar) -> Result<KForm> {
    Ok(ext_d(&vertical_differential(kind, l)?)?.neg())
}

fn check_two_form(a: &KForm, point_len: usize) -> Result<()> {
    if a.degree != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a 2-form, got degree {}",
            a.degree
        )));
    }
    if point_len != a.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: point_len,
        });
    }
    Ok(())
}

/// `M[b][c] = a(e_b, e_c)` at an exact point.
pub fn form_to_matrix(a: &KForm, point: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    check_two_form(a, point.len())?;
    let mut m = vec![vec![Rational::zero(); a.dim]; a.dim];
    for (idx, f) in &a.terms {
        let v = f.eval_rational(point);
        m[idx[1]][idx[0]] = -v.clone();
        m[idx[0]][idx[1]] = v;
    }
    Ok(m)
}

/// `M[b][c] = a(e_b, e_c)` at a floating-point point.
pub fn form_to_matrix_f64(a: &KForm, point: &[f64]) -> Result<Vec<Vec<f64>>> {
    check_two_form(a, point.len())?;
    let mut m = vec![vec![0.0; a.dim]; a.dim];
    for (idx, f) in &a.terms {
        let v = f.eval_f64(point);
        m[idx[0]][idx[1]] = v;
        m[idx[1]][idx[0]] = -v;
    }
    Ok(m)
}

/// Constant-coefficient 2-form with the given antisymmetric integer matrix.
pub fn constant_two_form(m: &IntMatrix) -> Result<KForm> {
    let dim = m.dim();
    let mut out = KForm::zero(dim, 2)?;
    for a in 0..dim {
        for b in a + 1..dim {
            let v = m.get(a, b);
            if v != 0 {
                out.add_term(&[a, b], PolyScalar::constant(dim, Rational::from_integer(v.into())));
            }
        }
    }
    Ok(out)
}

/// Floating-point view of a rational matrix.
pub fn matrix_to_f64(m: &[Vec<Rational>]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.iter().map(rat_to_f64).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, rat_int};

    fn x(dim: usize, k: usize) -> PolyScalar {
        PolyScalar::var(dim, k)
    }

    fn one(dim: usize) -> PolyScalar {
        PolyScalar::constant(dim, Rational::one())
    }

    #[test]
    fn wedge_examples() {
        let w = wedge(&KForm::dx(4, 0), &KForm::dx(4, 1)).unwrap();
        assert_eq!(w.coefficient(&[0, 1]), one(4));
        assert!(wedge(&KForm::dx(4, 0), &KForm::dx(4, 0)).unwrap().is_zero());
        let a = KForm::monomial(x(4, 0), &[0]).unwrap();
        let b = KForm::monomial(x(4, 1), &[1]).unwrap();
        let ab = wedge(&a, &b).unwrap();
        assert_eq!(ab.coefficient(&[0, 1]), &x(4, 0) * &x(4, 1));
        let ba = wedge(&b, &a).unwrap();
        assert_eq!(ba, ab.neg());
    }

    #[test]
    fn degree_overflow() {
        let w = wedge(&KForm::dx(4, 0), &KForm::dx(4, 1)).unwrap();
        let w3 = wedge(&w, &KForm::dx(4, 2)).unwrap();
        assert_eq!(w3.degree(), 3);
        assert!(matches!(wedge(&w, &w), Err(Error::DegreeOverflow(4))));
        assert!(matches!(ext_d(&w3), Err(Error::DegreeOverflow(4))));
    }

    #[test]
    fn ext_d_examples() {
        let f = &x(4, 0) * &x(4, 1);
        let df = ext_d(&KForm::function(f)).unwrap();
        assert_eq!(df.coefficient(&[0]), x(4, 1));
        assert_eq!(df.coefficient(&[1]), x(4, 0));
        let a = KForm::monomial(x(4, 0), &[1]).unwrap();
        let da = ext_d(&a).unwrap();
        assert_eq!(da.coefficient(&[0, 1]), one(4));
        assert_eq!(da.terms().count(), 1);
    }

    #[test]
    fn interior_examples() {
        let e1 = SymVectorField::basis(4, 0);
        assert_eq!(interior(&e1, &KForm::dx(4, 0)).unwrap(), KForm::function(one(4)));
        let w = wedge(&KForm::dx(4, 0), &KForm::dx(4, 1)).unwrap();
        assert_eq!(interior(&e1, &w).unwrap(), KForm::dx(4, 1));
        let e2 = SymVectorField::basis(4, 1);
        assert_eq!(interior(&e2, &w).unwrap(), KForm::dx(4, 0).neg());
        assert!(interior(&e1, &KForm::function(one(4))).is_err());
    }

    #[test]
    fn vertical_derivation_examples() {
        let f = StructureKind::F;
        assert_eq!(vertical_derivation(f, &KForm::dx(4, 0)).unwrap(), KForm::dx(4, 1).neg());
        assert!(vertical_derivation(f, &KForm::function(x(4, 2))).unwrap().is_zero());
        let w = wedge(&KForm::dx(4, 0), &KForm::dx(4, 1)).unwrap();
        let lhs = vertical_derivation(f, &w).unwrap();
        let rhs = wedge(&vertical_derivation(f, &KForm::dx(4, 0)).unwrap(), &KForm::dx(4, 1))
            .unwrap()
            .add(&wedge(&KForm::dx(4, 0), &vertical_derivation(f, &KForm::dx(4, 1)).unwrap()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        assert!(vertical_derivation(StructureKind::F_DUAL, &w).is_err());
    }

    #[test]
    fn vertical_derivation_matches_pointwise_definition() {
        // (i_A ω)(e_b, e_c) = ω(A e_b, e_c) + ω(e_b, A e_c)
        let n = 1;
        let dim = 4 * n;
        let mut omega = KForm::zero(dim, 2).unwrap();
        omega.add_term(&[0, 1], x(dim, 2));
        omega.add_term(&[1, 3], rat_int(3).into_poly(dim));
        omega.add_term(&[0, 2], &x(dim, 0) * &x(dim, 3));
        for kind in [StructureKind::F, StructureKind::G, StructureKind::H] {
            let a = build_structure(kind, n).unwrap();
            let ia = vertical_derivation(kind, &omega).unwrap();
            for b in 0..dim {
                for c in 0..dim {
                    let (ab, sb) = a.image_of_basis(b);
                    let (ac, sc) = a.image_of_basis(c);
                    let expected = &omega.eval_on_basis(&[ab, c]).scale(&rat_int(sb))
                        + &omega.eval_on_basis(&[b, ac]).scale(&rat_int(sc));
                    assert_eq!(ia.eval_on_basis(&[b, c]), expected, "{kind} ({b},{c})");
                }
            }
        }
    }

    trait IntoPoly {
        fn into_poly(self, dim: usize) -> PolyScalar;
    }

    impl IntoPoly for Rational {
        fn into_poly(self, dim: usize) -> PolyScalar {
            PolyScalar::constant(dim, self)
        }
    }

    #[test]
    fn vertical_differential_examples() {
        let l = &x(4, 0) * &x(4, 1);
        let df = vertical_differential(StructureKind::F, &l).unwrap();
        let expected = KForm::monomial(x(4, 0), &[0])
            .unwrap()
            .sub(&KForm::monomial(x(4, 1), &[1]).unwrap())
            .unwrap();
        assert_eq!(df, expected);
        assert_eq!(
            vertical_differential(StructureKind::H, &x(4, 0)).unwrap(),
            KForm::dx(4, 3)
        );
        assert!(vertical_differential(StructureKind::G, &one(4)).unwrap().is_zero());
    }

    #[test]
    fn lagrangian_two_form_harmonic() {
        let l = PolyScalar::half_sum_of_squares(4);
        let phi = lagrangian_two_form(StructureKind::F, &l).unwrap();
        let mut expected = KForm::zero(4, 2).unwrap();
        expected.add_term(&[0, 1], PolyScalar::constant(4, rat_int(2)));
        expected.add_term(&[2, 3], PolyScalar::constant(4, rat_int(2)));
        assert_eq!(phi, expected);
        assert!(lagrangian_two_form(StructureKind::G, &one(4)).unwrap().is_zero());
        // matrix is -2F
        let m = form_to_matrix(&phi, &vec![Rational::zero(); 4]).unwrap();
        let f = build_structure(StructureKind::F, 1).unwrap().matrix;
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(m[a][b], rat_int(-2 * f.get(a, b)));
            }
        }
    }

    #[test]
    fn form_to_matrix_examples() {
        let w = wedge(&KForm::dx(4, 0), &KForm::dx(4, 1)).unwrap();
        let z = vec![Rational::zero(); 4];
        let m = form_to_matrix(&w, &z).unwrap();
        assert_eq!(m[0][1], rat_int(1));
        assert_eq!(m[1][0], rat_int(-1));
        let xw = w.mul_function(&x(4, 0));
        let p = vec![rat_int(3), rat(1, 2), Rational::zero(), Rational::zero()];
        assert_eq!(form_to_matrix(&xw, &p).unwrap()[0][1], rat_int(3));
        let mf = form_to_matrix_f64(&xw, &[3.0, 0.5, 0.0, 0.0]).unwrap();
        assert_eq!(mf[0][1], 3.0);
        assert_eq!(mf[1][0], -3.0);
        assert!(form_to_matrix(&KForm::dx(4, 0), &z).is_err());
    }
}
