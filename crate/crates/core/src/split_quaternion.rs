//! Split quaternions `B = span{1, i, s, t}` with `i² = -1`, `s² = t² = 1`,
//! `is = t = -si`.
//!
//! The product of two basis elements is never written out by hand. It is
//! derived once from the generator relations by rewriting words in `i` and
//! `s` (`t = is`), so the table and the relations cannot drift apart.
//!
//! Coefficients are any [`Scalar`]: exact rationals for the algebra checks,
//! `f64` elsewhere.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Basis labels in coefficient order.
pub const BASIS_LABELS: [&str; 4] = ["1", "i", "s", "t"];

/// `MUL_TABLE[a][b] = (sign, c)` means `e_a e_b = sign * e_c`.
pub static MUL_TABLE: LazyLock<[[(i8, usize); 4]; 4]> = LazyLock::new(build_mul_table);

/// Each basis element as a word in the generators: `1 = ()`, `i`, `s`, `t = is`.
const BASIS_WORDS: [&[u8]; 4] = [b"", b"i", b"s", b"is"];

/// Reduces a word in `{i, s}` to `sign * e_c` using `si = -is`, `i² = -1`, `s² = 1`.
fn reduce_word(word: &[u8]) -> (i8, usize) {
    let mut w = word.to_vec();
    let mut sign = 1i8;
    // Bubble every `i` to the left; each swap past an `s` flips the sign.
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 0..w.len().saturating_sub(1) {
            if w[k] == b's' && w[k + 1] == b'i' {
                w.swap(k, k + 1);
                sign = -sign;
                swapped = true;
            }
        }
    }
    let i_count = w.iter().filter(|&&c| c == b'i').count();
    let s_count = w.len() - i_count;
    if (i_count / 2) % 2 == 1 {
        sign = -sign;
    }
    let has_i = i_count % 2 == 1;
    let has_s = s_count % 2 == 1;
    let idx = match (has_i, has_s) {
        (false, false) => 0,
        (true, false) => 1,
        (false, true) => 2,
        (true, true) => 3,
    };
    (sign, idx)
}

fn build_mul_table() -> [[(i8, usize); 4]; 4] {
    let mut table = [[(0i8, 0usize); 4]; 4];
    for (a, row) in table.iter_mut().enumerate() {
        for (b, cell) in row.iter_mut().enumerate() {
            let word: Vec<u8> = BASIS_WORDS[a].iter().chain(BASIS_WORDS[b]).copied().collect();
            *cell = reduce_word(&word);
        }
    }
    table
}

/// `p = x + i y + s u + t v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitQuaternion<S> {
    pub x: S,
    pub y: S,
    pub u: S,
    pub v: S,
}

/// Result of classifying `p` by its square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SquareClass {
    SquaresToMinusOne,
    SquaresToPlusOne,
    Other,
}

impl<S: Scalar> SplitQuaternion<S> {
    pub fn new(x: S, y: S, u: S, v: S) -> Self {
        Self { x, y, u, v }
    }

    pub fn from_coeffs(c: [S; 4]) -> Self {
        let [x, y, u, v] = c;
        Self { x, y, u, v }
    }

    pub fn coeffs(&self) -> [S; 4] {
        [self.x.clone(), self.y.clone(), self.u.clone(), self.v.clone()]
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    pub fn one() -> Self {
        Self::real(S::one())
    }

    pub fn real(x: S) -> Self {
        Self::new(x, S::zero(), S::zero(), S::zero())
    }

    pub fn i() -> Self {
        Self::basis(1)
    }

    pub fn s() -> Self {
        Self::basis(2)
    }

    pub fn t() -> Self {
        Self::basis(3)
    }

    /// The basis element with index `k` in `{1, i, s, t}` order.
    pub fn basis(k: usize) -> Self {
        let mut c = [S::zero(), S::zero(), S::zero(), S::zero()];
        c[k] = S::one();
        Self::from_coeffs(c)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.u.is_zero() && self.v.is_zero()
    }

    /// Product through the derived basis table.
    pub fn times(&self, other: &Self) -> Self {
        let a = self.coeffs();
        let b = other.coeffs();
        let mut out = [S::zero(), S::zero(), S::zero(), S::zero()];
        for (ia, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (ib, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let (sign, ic) = MUL_TABLE[ia][ib];
                let term = ca.clone() * cb.clone();
                out[ic] = if sign > 0 {
                    out[ic].clone() + term
                } else {
                    out[ic].clone() - term
                };
            }
        }
        Self::from_coeffs(out)
    }

    /// `conj(x + iy + su + tv) = x - iy - su - tv`.
    pub fn conj(&self) -> Self {
        Self::new(self.x.clone(), -self.y.clone(), -self.u.clone(), -self.v.clone())
    }

    /// Real part of `conj(p) p`, i.e. `x² + y² - u² - v²`; signature (2, 2).
    pub fn norm_sq(&self) -> S {
        self.x.clone() * self.x.clone() + self.y.clone() * self.y.clone()
            - self.u.clone() * self.u.clone()
            - self.v.clone() * self.v.clone()
    }

    /// Classification by the closed-form criterion on the coefficients.
    ///
    /// Exact for rational scalars; for `f64` the equalities are tested exactly
    /// as well, so only representable points classify as `±1` squares.
    pub fn square_class(&self) -> SquareClass {
        let imag_form =
            self.y.clone() * self.y.clone() - self.u.clone() * self.u.clone() - self.v.clone() * self.v.clone();
        if self.x.is_zero() {
            if imag_form == S::one() {
                return SquareClass::SquaresToMinusOne;
            }
            if imag_form == -S::one() {
                return SquareClass::SquaresToPlusOne;
            }
            return SquareClass::Other;
        }
        let pure_real = self.y.is_zero() && self.u.is_zero() && self.v.is_zero();
        if pure_real && (self.x == S::one() || self.x == -S::one()) {
            SquareClass::SquaresToPlusOne
        } else {
            SquareClass::Other
        }
    }
}

impl<S: Scalar> Add for SplitQuaternion<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.u + o.u, self.v + o.v)
    }
}

impl<S: Scalar> Sub for SplitQuaternion<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.u - o.u, self.v - o.v)
    }
}

impl<S: Scalar> Neg for SplitQuaternion<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.u, -self.v)
    }
}

impl<S: Scalar> Mul for SplitQuaternion<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        SplitQuaternion::times(&self, &o)
    }
}

impl<'a, S: Scalar> Mul<&'a SplitQuaternion<S>> for &'a SplitQuaternion<S> {
    type Output = SplitQuaternion<S>;
    fn mul(self, o: &'a SplitQuaternion<S>) -> SplitQuaternion<S> {
        SplitQuaternion::times(self, o)
    }
}

/// Element of the right `B`-module `B^n ≅ R^{4n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BVector<S> {
    entries: Vec<SplitQuaternion<S>>,
}

impl<S: Scalar> BVector<S> {
    pub fn new(entries: Vec<SplitQuaternion<S>>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("B^n vector needs n >= 1".into()));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[SplitQuaternion<S>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Real coordinates `(x_1..x_n, y_1..y_n, u_1..u_n, v_1..v_n)`.
    pub fn to_real(&self) -> Vec<S> {
        let n = self.len();
        let mut out = vec![S::zero(); 4 * n];
        for (k, q) in self.entries.iter().enumerate() {
            for (c, val) in q.coeffs().into_iter().enumerate() {
                out[c * n + k] = val;
            }
        }
        out
    }

    pub fn from_real(coords: &[S]) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(4) {
            return Err(Error::InvalidArgument(format!(
                "real coordinate length {} is not a positive multiple of 4",
                coords.len()
            )));
        }
        let n = coords.len() / 4;
        let entries = (0..n)
            .map(|k| {
                SplitQuaternion::new(
                    coords[k].clone(),
                    coords[n + k].clone(),
                    coords[2 * n + k].clone(),
                    coords[3 * n + k].clone(),
                )
            })
            .collect();
        Self::new(entries)
    }
}

/// Square matrix over `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct BMatrix<S> {
    n: usize,
    entries: Vec<SplitQuaternion<S>>,
}

impl<S: Scalar> BMatrix<S> {
    /// Row-major entries; the count must be a perfect square.
    pub fn new(n: usize, entries: Vec<SplitQuaternion<S>>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![SplitQuaternion::one(); n])
    }

    pub fn diagonal(diag: Vec<SplitQuaternion<S>>) -> Self {
        let n = diag.len();
        let mut entries = vec![SplitQuaternion::zero(); n * n];
        for (k, d) in diag.into_iter().enumerate() {
            entries[k * n + k] = d;
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &SplitQuaternion<S> {
        &self.entries[row * self.n + col]
    }

    /// `conj(A)^T`.
    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(self.get(c, r).conj());
            }
        }
        Self { n, entries }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = SplitQuaternion::zero();
                for k in 0..n {
                    acc = acc + self.get(r, k).times(other.get(k, c));
                }
                entries.push(acc);
            }
        }
        Ok(Self { n, entries })
    }

    pub fn apply(&self, xi: &BVector<S>) -> Result<BVector<S>> {
        if xi.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: xi.len(),
            });
        }
        let entries = (0..self.n)
            .map(|r| {
                (0..self.n).fold(SplitQuaternion::zero(), |acc, k| {
                    acc + self.get(r, k).times(&xi.entries()[k])
                })
            })
            .collect();
        BVector::new(entries)
    }
}

pub fn sq_mul<S: Scalar>(p: &SplitQuaternion<S>, q: &SplitQuaternion<S>) -> SplitQuaternion<S> {
    p.times(q)
}

pub fn sq_conj<S: Scalar>(p: &SplitQuaternion<S>) -> SplitQuaternion<S> {
    p.conj()
}

pub fn sq_norm_sq<S: Scalar>(p: &SplitQuaternion<S>) -> S {
    p.norm_sq()
}

pub fn sq_square_class<S: Scalar>(p: &SplitQuaternion<S>) -> SquareClass {
    p.square_class()
}

/// `Re(Σ_k conj(ξ_k) η_k)`, the neutral inner product on `B^n`.
pub fn bn_inner<S: Scalar>(xi: &BVector<S>, eta: &BVector<S>) -> Result<S> {
    if xi.len() != eta.len() {
        return Err(Error::DimensionMismatch {
            expected: xi.len(),
            got: eta.len(),
        });
    }
    Ok(xi
        .entries()
        .iter()
        .zip(eta.entries())
        .fold(S::zero(), |acc, (a, b)| acc + a.conj().times(b).x))
}

/// `conj(A)^T A = 1` up to `tol` on every coefficient.
pub fn sp_nb_member<S: Scalar>(a: &BMatrix<S>, tol: &S) -> bool {
    let prod = match a.conj_transpose().matmul(a) {
        Ok(p) => p,
        Err(_) => return false,
    };
    let n = a.n();
    (0..n).all(|r| {
        (0..n).all(|c| {
            let mut e = prod.get(r, c).clone();
            if r == c {
                e.x = e.x - S::one();
            }
            e.coeffs().iter().all(|v| v.abs() <= *tol)
        })
    })
}

/// `(A, p) · ξ = A ξ conj(p)`.
pub fn group_action<S: Scalar>(a: &BMatrix<S>, p: &SplitQuaternion<S>, xi: &BVector<S>) -> Result<BVector<S>> {
    let p_bar = p.conj();
    let a_xi = a.apply(xi)?;
    BVector::new(a_xi.entries().iter().map(|e| e.times(&p_bar)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Rational;
    use num_traits::{One, Zero};

    type Q = SplitQuaternion<Rational>;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn q(x: i64, y: i64, u: i64, v: i64) -> Q {
        Q::new(r(x), r(y), r(u), r(v))
    }

    #[test]
    fn generator_relations() {
        let (one, i, s, t) = (Q::one(), Q::i(), Q::s(), Q::t());
        assert_eq!(&i * &i, -one.clone());
        assert_eq!(&s * &s, one.clone());
        assert_eq!(&t * &t, one.clone());
        assert_eq!(&i * &s, t.clone());
        assert_eq!(&s * &i, -t.clone());
        assert_eq!(&s * &t, -i.clone());
        assert_eq!(&t * &s, i.clone());
        assert_eq!(&i * &t, -s.clone());
        assert_eq!(&t * &i, s);
    }

    #[test]
    fn unit_and_zero_divisor() {
        let p = q(3, -2, 5, 7);
        assert_eq!(&Q::one() * &p, p);
        assert_eq!(&p * &Q::one(), p);
        assert!((&q(1, 0, 1, 0) * &q(1, 0, -1, 0)).is_zero());
    }

    #[test]
    fn conj_examples() {
        assert_eq!(Q::one().conj(), Q::one());
        assert_eq!(q(0, 1, 1, 0).conj(), q(0, -1, -1, 0));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(q(1, 1, 0, 0).norm_sq(), r(2));
        assert_eq!(q(1, 1, 1, 1).norm_sq(), r(0));
        // Re(conj(p) p) matches the closed form.
        let p = q(2, -3, 5, 1);
        let cp = p.conj().times(&p);
        assert_eq!(cp.x, p.norm_sq());
        assert!(cp.y.is_zero() && cp.u.is_zero() && cp.v.is_zero());
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(Q::i().square_class(), SquareClass::SquaresToMinusOne);
        assert_eq!(Q::s().square_class(), SquareClass::SquaresToPlusOne);
        assert_eq!(q(1, 1, 0, 0).square_class(), SquareClass::Other);
        assert_eq!(q(-1, 0, 0, 0).square_class(), SquareClass::SquaresToPlusOne);
        // (1+i)^2 = 2i
        assert_eq!(q(1, 1, 0, 0) * q(1, 1, 0, 0), q(0, 2, 0, 0));
    }

    #[test]
    fn inner_product_examples() {
        let one = BVector::new(vec![Q::one()]).unwrap();
        let s = BVector::new(vec![Q::s()]).unwrap();
        assert_eq!(bn_inner(&one, &one).unwrap(), r(1));
        assert_eq!(bn_inner(&s, &s).unwrap(), r(-1));
        let two = BVector::new(vec![Q::one(), Q::i()]).unwrap();
        assert!(matches!(bn_inner(&one, &two), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sp_membership_examples() {
        let zero = Rational::zero();
        assert!(sp_nb_member(&BMatrix::<Rational>::identity(2), &zero));
        assert!(sp_nb_member(&BMatrix::diagonal(vec![Q::i()]), &zero));
        assert!(!sp_nb_member(&BMatrix::diagonal(vec![q(1, 0, 1, 0)]), &zero));
    }

    #[test]
    fn group_action_examples() {
        let xi = BVector::new(vec![q(1, 2, 3, 4), q(-1, 0, 2, 5)]).unwrap();
        let id = BMatrix::<Rational>::identity(2);
        assert_eq!(group_action(&id, &Q::one(), &xi).unwrap(), xi);
        let single = BVector::new(vec![Q::one()]).unwrap();
        let out = group_action(&BMatrix::identity(1), &Q::i(), &single).unwrap();
        assert_eq!(out.entries()[0], -Q::i());
        assert!(group_action(&id, &Q::one(), &single).is_err());
    }

    #[test]
    fn real_coordinates_roundtrip() {
        let xi = BVector::new(vec![q(1, 2, 3, 4), q(5, 6, 7, 8)]).unwrap();
        let coords = xi.to_real();
        assert_eq!(coords, [1, 5, 2, 6, 3, 7, 4, 8].map(r).to_vec());
        assert_eq!(BVector::from_real(&coords).unwrap(), xi);
        assert!(Rational::one() > Rational::zero());
    }

    #[test]
    fn float_instantiation_shares_table() {
        let a = SplitQuaternion::new(0.5f64, -1.0, 2.0, 0.25);
        let b = SplitQuaternion::new(1.5, 3.0, -0.5, 1.0);
        let lhs = a.times(&b).norm_sq();
        assert!((lhs - a.norm_sq() * b.norm_sq()).abs() < 1e-12);
    }
}
