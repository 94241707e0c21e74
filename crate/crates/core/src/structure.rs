//! The canonical local basis `{F, G, H}` of the para-quaternionic structure on
//! `R^{4n}`, its dual basis `{F*, G*, H*}`, the neutral metric and the
//! fundamental 2-forms `ω_A(X, Y) = g(AX, Y)`.
//!
//! Coordinates come in four blocks of length `n`: `x_i`, `x_{n+i}`,
//! `x_{2n+i}`, `x_{3n+i}`. Every operator permutes the blocks with signs, so
//! it is stored as a dense integer matrix with one `±1` per row and column.
//! Composition is `(AB)(x) = A(B(x))`, i.e. the ordinary matrix product.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureTag {
    F,
    G,
    H,
}

impl StructureTag {
    pub const ALL: [StructureTag; 3] = [StructureTag::F, StructureTag::G, StructureTag::H];

    /// `-1` for `F` (`F² = -I`), `+1` for `G` and `H`.
    pub fn square_sign(self) -> i64 {
        match self {
            StructureTag::F => -1,
            StructureTag::G | StructureTag::H => 1,
        }
    }

    /// `+1` when `g(AX, AY) = g(X, Y)`, `-1` when `g(AX, AY) = -g(X, Y)`.
    pub fn metric_sign(self) -> i64 {
        match self {
            StructureTag::F => 1,
            StructureTag::G | StructureTag::H => -1,
        }
    }
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructureTag::F => "F",
            StructureTag::G => "G",
            StructureTag::H => "H",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for StructureTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().trim_end_matches('*') {
            "F" | "f" => Ok(StructureTag::F),
            "G" | "g" => Ok(StructureTag::G),
            "H" | "h" => Ok(StructureTag::H),
            other => Err(Error::InvalidArgument(format!("unknown structure `{other}`"))),
        }
    }
}

/// One of `F, G, H` (acting on vectors) or `F*, G*, H*` (acting on covectors).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructureKind {
    pub tag: StructureTag,
    pub dual: bool,
}

impl StructureKind {
    pub const F: StructureKind = StructureKind::tangent(StructureTag::F);
    pub const G: StructureKind = StructureKind::tangent(StructureTag::G);
    pub const H: StructureKind = StructureKind::tangent(StructureTag::H);
    pub const F_DUAL: StructureKind = StructureKind::cotangent(StructureTag::F);
    pub const G_DUAL: StructureKind = StructureKind::cotangent(StructureTag::G);
    pub const H_DUAL: StructureKind = StructureKind::cotangent(StructureTag::H);

    pub const fn tangent(tag: StructureTag) -> Self {
        Self { tag, dual: false }
    }

    pub const fn cotangent(tag: StructureTag) -> Self {
        Self { tag, dual: true }
    }

    pub fn require_tangent(self) -> Result<Self> {
        if self.dual {
            Err(Error::WrongStructureKind {
                expected: "non-dual (F, G or H)",
                got: self.to_string(),
            })
        } else {
            Ok(self)
        }
    }

    pub fn require_dual(self) -> Result<Self> {
        if self.dual {
            Ok(self)
        } else {
            Err(Error::WrongStructureKind {
                expected: "dual (F*, G* or H*)",
                got: self.to_string(),
            })
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.tag, if self.dual { "*" } else { "" })
    }
}

/// `(source block, target block, sign)`: the operator sends the basis element
/// of the source block to `sign` times the one of the target block.
type BlockMap = [(usize, usize, i64); 4];

const TANGENT_F: BlockMap = [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)];
const TANGENT_G: BlockMap = [(0, 2, 1), (1, 3, -1), (2, 0, 1), (3, 1, -1)];
const TANGENT_H: BlockMap = [(0, 3, 1), (1, 2, 1), (2, 1, 1), (3, 0, 1)];

// Action on the coframe dx_i, dx_{n+i}, dx_{2n+i}, dx_{3n+i}.
const COTANGENT_F: BlockMap = [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)];
const COTANGENT_G: BlockMap = [(0, 2, 1), (1, 3, -1), (2, 0, 1), (3, 1, -1)];
const COTANGENT_H: BlockMap = [(0, 3, 1), (1, 2, 1), (2, 1, 1), (3, 0, 1)];

fn block_map(kind: StructureKind) -> &'static BlockMap {
    match (kind.tag, kind.dual) {
        (StructureTag::F, false) => &TANGENT_F,
        (StructureTag::G, false) => &TANGENT_G,
        (StructureTag::H, false) => &TANGENT_H,
        (StructureTag::F, true) => &COTANGENT_F,
        (StructureTag::G, true) => &COTANGENT_G,
        (StructureTag::H, true) => &COTANGENT_H,
    }
}

/// Dense square integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, 1)
    }

    pub fn scalar(dim: usize, c: i64) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.set(k, k, c);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix rows are not square".into()));
        }
        Ok(Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.dim).map(<[i64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * other.get(k, c);
                }
            }
        }
        out
    }

    pub fn scaled(&self, c: i64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.add(&self.transpose()).data.iter().all(|&v| v == 0)
    }

    pub fn is_signed_permutation(&self) -> bool {
        let d = self.dim;
        let row_ok = (0..d).all(|r| {
            let nz: Vec<i64> = (0..d).map(|c| self.get(r, c)).filter(|&v| v != 0).collect();
            nz.len() == 1 && nz[0].abs() == 1
        });
        let col_ok = (0..d).all(|c| (0..d).filter(|&r| self.get(r, c) != 0).count() == 1);
        row_ok && col_ok
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        let d = self.dim;
        if d == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..d - 1 {
            if a[k][k] == 0 {
                match (k + 1..d).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[d - 1][d - 1]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
            writeln!(f, "  [{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A structure endomorphism on `R^{4n}` (or its dual on covectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureOperator {
    pub kind: StructureKind,
    pub n: usize,
    pub matrix: IntMatrix,
}

impl StructureOperator {
    pub fn dim(&self) -> usize {
        4 * self.n
    }

    /// Image of the `k`-th basis element (0-based) as `(index, sign)`.
    pub fn image_of_basis(&self, k: usize) -> (usize, i64) {
        (0..self.dim())
            .find_map(|r| match self.matrix.get(r, k) {
                0 => None,
                v => Some((r, v)),
            })
            .expect("structure operators are signed permutations")
    }

    pub fn apply_f64(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|r| (0..d).map(|c| self.matrix.get(r, c) as f64 * v[c]).sum::<f64>())
            .collect()
    }

    pub fn transpose_apply_f64(&self, v: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|c| (0..d).map(|r| self.matrix.get(r, c) as f64 * v[r]).sum::<f64>())
            .collect()
    }
}

pub fn build_structure(kind: StructureKind, n: usize) -> Result<StructureOperator> {
    if n < 1 {
        return Err(Error::InvalidArgument("structure dimension n must be >= 1".into()));
    }
    let mut m = IntMatrix::zeros(4 * n);
    for &(src, tgt, sign) in block_map(kind) {
        for i in 0..n {
            m.set(tgt * n + i, src * n + i, sign);
        }
    }
    Ok(StructureOperator { kind, n, matrix: m })
}

/// `diag(+1 (2n times), -1 (2n times))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeutralMetric {
    pub n: usize,
    pub diagonal: Vec<i64>,
}

impl NeutralMetric {
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("metric dimension n must be >= 1".into()));
        }
        let diagonal = (0..4 * n).map(|a| if a < 2 * n { 1 } else { -1 }).collect();
        Ok(Self { n, diagonal })
    }

    pub fn matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.diagonal.len());
        for (k, &d) in self.diagonal.iter().enumerate() {
            m.set(k, k, d);
        }
        m
    }

    pub fn signature(&self) -> (usize, usize) {
        let pos = self.diagonal.iter().filter(|&&d| d > 0).count();
        (pos, self.diagonal.len() - pos)
    }

    pub fn eval(&self, x: &[i64], y: &[i64]) -> i64 {
        self.diagonal
            .iter()
            .zip(x.iter().zip(y))
            .map(|(g, (a, b))| g * a * b)
            .sum()
    }
}

/// One named identity and whether it held.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub n: usize,
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

/// `F² = -I`, `G² = H² = I`, `FG = H`, `GF = -H` for a given triple.
pub fn check_quaternionic_relations(f: &IntMatrix, g: &IntMatrix, h: &IntMatrix, star: &str) -> Vec<RelationCheck> {
    let d = f.dim();
    let id = IntMatrix::identity(d);
    let minus_id = IntMatrix::scalar(d, -1);
    vec![
        RelationCheck {
            name: format!("F{star}^2 = -I"),
            holds: f.matmul(f) == minus_id,
        },
        RelationCheck {
            name: format!("G{star}^2 = I"),
            holds: g.matmul(g) == id,
        },
        RelationCheck {
            name: format!("H{star}^2 = I"),
            holds: h.matmul(h) == id,
        },
        RelationCheck {
            name: format!("F{star}G{star} = H{star}"),
            holds: f.matmul(g) == *h,
        },
        RelationCheck {
            name: format!("G{star}F{star} = -H{star}"),
            holds: g.matmul(f) == h.scaled(-1),
        },
    ]
}

/// All quaternionic relations for both the tangent and the dual triple.
pub fn verify_relations(n: usize) -> Result<RelationReport> {
    let m = |k| build_structure(k, n).map(|s| s.matrix);
    let mut checks =
        check_quaternionic_relations(&m(StructureKind::F)?, &m(StructureKind::G)?, &m(StructureKind::H)?, "");
    checks.extend(check_quaternionic_relations(
        &m(StructureKind::F_DUAL)?,
        &m(StructureKind::G_DUAL)?,
        &m(StructureKind::H_DUAL)?,
        "*",
    ));
    Ok(RelationReport { n, checks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub kind: StructureKind,
    pub n: usize,
    /// `+1` or `-1`: the sign `σ` tested in `AᵀgA = σ g`.
    pub expected_sign: i64,
    pub holds: bool,
}

/// Checks `AᵀgA = g` for `F` and `AᵀgA = -g` for `G`, `H` with the neutral metric.
pub fn metric_compatibility(kind: StructureKind, n: usize) -> Result<CompatibilityReport> {
    kind.require_tangent()?;
    let a = build_structure(kind, n)?.matrix;
    let g = NeutralMetric::new(n)?.matrix();
    let sign = kind.tag.metric_sign();
    let holds = a.transpose().matmul(&g).matmul(&a) == g.scaled(sign);
    Ok(CompatibilityReport {
        kind,
        n,
        expected_sign: sign,
        holds,
    })
}

/// `Ω[a][b] = g(A e_a, e_b)`, the matrix of `ω_A`. Equals `(gA)ᵀ`.
pub fn fundamental_form(kind: StructureKind, n: usize) -> Result<IntMatrix> {
    kind.require_tangent()?;
    let a = build_structure(kind, n)?;
    let metric = NeutralMetric::new(n)?;
    let d = 4 * n;
    let mut omega = IntMatrix::zeros(d);
    for col in 0..d {
        let (img, sign) = a.image_of_basis(col);
        // g(A e_col, e_b) is nonzero only for b = img.
        omega.set(col, img, sign * metric.diagonal[img]);
    }
    Ok(omega)
}
