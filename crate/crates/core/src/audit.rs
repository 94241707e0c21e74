//! The identity audit: every structural identity the mechanics rests on,
//! checked exactly where it is algebraic and to a stated tolerance where it
//! is numerical, plus the comparison of each stated equation table against
//! the equations derived from the structure matrices.
//!
//! Sampling uses a fixed-seed ChaCha stream, so reports are bit-identical
//! between runs.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::ScalarField;
use crate::forms::{
    constant_two_form, ext_d, form_to_matrix, lagrangian_two_form, vertical_differential,
    vertical_differential_coordinates, KForm,
};
use crate::hamiltonian::{canonical_two_form, liouville_one_form, HamiltonianSystem};
use crate::lagrangian::{Convention, LagrangianSystem};
use crate::poly::{rat, rat_int, PolyScalar, Rational};
use crate::split_quaternion::SplitQuaternion;
use crate::structure::{
    build_structure, fundamental_form, metric_compatibility, verify_relations, IntMatrix, StructureKind, StructureTag,
};
use crate::tables;

const SEED: u64 = 0x005E_ED0F_A0D1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A known disagreement between a stated table and the derivation.
    DocumentedDiscrepancy,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::DocumentedDiscrepancy => "discrepancy (documented)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    Exact,
    Mismatch,
    MaxAbs(f64),
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Exact => f.write_str("exact"),
            Measure::Mismatch => f.write_str("mismatch"),
            Measure::MaxAbs(e) => write!(f, "max_abs_error={e:.3e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    pub name: String,
    pub n: Option<usize>,
    pub status: Status,
    pub error: Measure,
    pub location: String,
}

impl fmt::Display for AuditRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n.map_or_else(String::new, |n| format!(" [n={n}]"));
        write!(
            f,
            "{}: {}{} ({}) @ {}",
            self.status, self.name, n, self.error, self.location
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AuditReport {
    pub records: Vec<AuditRecord>,
}

impl AuditReport {
    /// No record failed; documented discrepancies do not count as failures.
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn render(&self) -> String {
        let mut out: String = self.records.iter().map(|r| format!("{r}\n")).collect();
        out.push_str(&format!(
            "summary: {} records, {} pass, {} fail, {} documented discrepancies\n",
            self.records.len(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::DocumentedDiscrepancy)
        ));
        out
    }

    fn exact(&mut self, name: impl Into<String>, n: Option<usize>, holds: bool, location: &str) {
        self.records.push(AuditRecord {
            name: name.into(),
            n,
            status: if holds { Status::Pass } else { Status::Fail },
            error: if holds { Measure::Exact } else { Measure::Mismatch },
            location: location.into(),
        });
    }

    fn within(&mut self, name: impl Into<String>, n: usize, err: f64, tol: f64, location: &str) {
        self.records.push(AuditRecord {
            name: name.into(),
            n: Some(n),
            status: if err <= tol { Status::Pass } else { Status::Fail },
            error: Measure::MaxAbs(err),
            location: location.into(),
        });
    }
}

/// A small random rational in `[-5, 5]` with denominator up to 4.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.random_range(-5..=5), rng.random_range(1..=4))
}

/// A polynomial with `terms` random monomials of total degree `<= max_degree`.
pub fn random_polynomial(rng: &mut impl Rng, nvars: usize, max_degree: u32, terms: usize) -> PolyScalar {
    let mut p = PolyScalar::zero(nvars);
    for _ in 0..terms {
        let mut e = vec![0u32; nvars];
        let degree = rng.random_range(0..=max_degree);
        for _ in 0..degree {
            e[rng.random_range(0..nvars)] += 1;
        }
        p.add_term(e, random_rational(rng));
    }
    p
}

/// `½ xᵀ P x` with `P = BᵀB + dim·I` for a random small integer `B`.
pub fn random_positive_quadratic(rng: &mut impl Rng, dim: usize) -> PolyScalar {
    let b: Vec<Vec<i64>> = (0..dim)
        .map(|_| (0..dim).map(|_| rng.random_range(-2..=2)).collect())
        .collect();
    let p: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| {
                    let s: i64 = (0..dim).map(|k| b[k][r] * b[k][c]).sum();
                    rat_int(s + if r == c { dim as i64 } else { 0 })
                })
                .collect()
        })
        .collect();
    PolyScalar::quadratic_form(&p)
}

pub fn random_point(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn rational_point(rng: &mut impl Rng, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| random_rational(rng)).collect()
}

/// `AᵀP - PA` in exact arithmetic.
pub fn commutator_exact(a: &IntMatrix, p: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let d = a.dim();
    let pa = |r: usize, c: usize| -> Rational {
        (0..d).fold(Rational::zero(), |acc, k| {
            acc + &p[r][k] * Rational::from_integer(a.get(k, c).into())
        })
    };
    (0..d).map(|r| (0..d).map(|c| pa(c, r) - pa(r, c)).collect()).collect()
}

fn algebra_records(report: &mut AuditReport, rng: &mut impl Rng) {
    let location = "split-quaternion algebra";
    let basis: Vec<SplitQuaternion<i64>> = (0..4).map(SplitQuaternion::basis).collect();
    let mut assoc = true;
    let mut anti = true;
    for p in &basis {
        for q in &basis {
            anti &= p.times(q).conj() == q.conj().times(&p.conj());
            for r in &basis {
                assoc &= p.times(q).times(r) == p.times(&q.times(r));
            }
        }
    }
    report.exact("basis products are associative", None, assoc, location);
    report.exact("conjugation reverses products", None, anti, location);
    let mut mult = true;
    for _ in 0..200 {
        let p = SplitQuaternion::from_coeffs(std::array::from_fn(|_| random_rational(rng)));
        let q = SplitQuaternion::from_coeffs(std::array::from_fn(|_| random_rational(rng)));
        mult &= p.times(&q).norm_sq() == p.norm_sq() * q.norm_sq();
    }
    report.exact("norm is multiplicative (200 rational samples)", None, mult, location);
}

fn stated_matches_matrix(a: &IntMatrix, n: usize, entries: &[tables::BlockTriple]) -> bool {
    tables::expand(n, entries).into_iter().all(|(r, c, s)| a.get(r, c) == s)
}

fn tangent_records(report: &mut AuditReport, n: usize, rng: &mut impl Rng) -> Result<()> {
    let dim = 4 * n;
    let metric_loc = "metric compatibility";
    for c in verify_relations(n)?.checks {
        report.exact(c.name, Some(n), c.holds, "structure relations");
    }
    for tag in StructureTag::ALL {
        let kind = StructureKind::tangent(tag);
        let a = build_structure(kind, n)?.matrix;
        let compat = metric_compatibility(kind, n)?;
        let sign = if compat.expected_sign > 0 { "g" } else { "-g" };
        report.exact(format!("{tag}ᵀ g {tag} = {sign}"), Some(n), compat.holds, metric_loc);

        let omega = fundamental_form(kind, n)?;
        let closed = ext_d(&constant_two_form(&omega)?)?.is_zero();
        report.exact(
            format!("ω_{tag} antisymmetric and closed"),
            Some(n),
            omega.is_antisymmetric() && closed,
            "fundamental 2-forms",
        );

        let f = random_polynomial(rng, dim, 4, 6);
        report.exact(
            format!("d_{tag} coordinate formula = [i_{tag}, d]"),
            Some(n),
            vertical_differential(kind, &f)? == vertical_differential_coordinates(kind, &f)?,
            "vertical differential",
        );

        // V_A = s X^a ∂_b means A[b][a] = s
        let liouville = tables::expand(n, &tables::liouville_field_formula(tag))
            .into_iter()
            .all(|(x, d, s)| a.get(d, x) == s);
        report.exact(
            format!("Liouville field V_{tag} = {tag}X"),
            Some(n),
            liouville,
            "Liouville fields",
        );

        let l = random_polynomial(rng, dim, 4, 6);
        let phi = lagrangian_two_form(kind, &l)?;
        let hess = l.hessian();
        let mut matrix_ok = true;
        for _ in 0..3 {
            let pt = rational_point(rng, dim);
            let p: Vec<Vec<Rational>> = hess
                .iter()
                .map(|row| row.iter().map(|h| h.eval_rational(&pt)).collect())
                .collect();
            matrix_ok &= form_to_matrix(&phi, &pt)? == commutator_exact(&a, &p);
        }
        report.exact(
            format!("Φ_L^{tag} matrix = {tag}ᵀP - P{tag}"),
            Some(n),
            matrix_ok,
            "Lagrangian 2-forms",
        );
        report.exact(
            format!("dΦ_L^{tag} = 0"),
            Some(n),
            ext_d(&phi)?.is_zero(),
            "Lagrangian 2-forms",
        );

        el_record(report, tag, n, &a);

        let sys = LagrangianSystem::new(
            kind,
            ScalarField::polynomial(random_positive_quadratic(rng, dim)),
            Convention::Derived,
        )?;
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let x = random_point(rng, dim);
            let c = sys.canonical_rhs(&x)?;
            let i = sys.intrinsic_solve(&x)?;
            let scale = c.iter().fold(1e-300f64, |m, v| m.max(v.abs()));
            worst = worst.max(crate::linalg::max_abs_diff(&c, &i) / scale);
        }
        report.within(
            format!("intrinsic solve = canonical equations ({tag}, relative)"),
            n,
            worst,
            1e-10,
            "Lagrangian equations of motion",
        );
    }
    Ok(())
}

/// The stated Euler-Lagrange rows `d/dt ∂_a L = s ∂_c L` against the derived
/// `d/dt ∂_a L = (A∇L)_a`. For `F` the table carries the opposite overall
/// sign, which is reported as a documented discrepancy.
fn el_record(report: &mut AuditReport, tag: StructureTag, n: usize, a: &IntMatrix) {
    let stated = tables::euler_lagrange_system(tag);
    let location = format!("Euler-Lagrange system ({tag})");
    let name = format!("stated Euler-Lagrange equations ({tag}) = derived");
    if stated_matches_matrix(a, n, &stated) {
        report.exact(name, Some(n), true, &location);
        return;
    }
    let flipped: Vec<_> = stated.iter().map(|&(r, c, s)| (r, c, -s)).collect();
    let documented = tag == StructureTag::F && stated_matches_matrix(a, n, &flipped);
    report.records.push(AuditRecord {
        name: format!("{name} (differs by an overall sign)"),
        n: Some(n),
        status: if documented {
            Status::DocumentedDiscrepancy
        } else {
            Status::Fail
        },
        // coefficient difference between the two systems
        error: Measure::MaxAbs(2.0),
        location,
    });
}

fn dual_records(report: &mut AuditReport, n: usize, rng: &mut impl Rng) -> Result<()> {
    let dim = 4 * n;
    for tag in StructureTag::ALL {
        let kind = StructureKind::cotangent(tag);
        let lambda = liouville_one_form(kind, n)?;
        let m = canonical_two_form(kind, n)?;
        let stated = constant_two_form(&m)?;
        let minus_d_lambda = ext_d(&lambda)?.neg();
        report.exact(
            format!("-dλ_{tag}* = Φ_{tag}*"),
            Some(n),
            minus_d_lambda == stated,
            "dual symplectic forms",
        );
        report.exact(
            format!("dΦ_{tag}* = 0"),
            Some(n),
            ext_d(&stated)?.is_zero(),
            "dual symplectic forms",
        );

        let mut expected = KForm::zero(dim, 1)?;
        for (a, b, s) in tables::expand(n, &tables::dual_liouville_form(tag)) {
            expected.add_term(&[b], PolyScalar::var(dim, a).scale(&rat(s, 2)));
        }
        report.exact(
            format!("λ_{tag}* coordinate formula"),
            Some(n),
            lambda == expected,
            "dual Liouville forms",
        );

        // i_X Φ = Σ s X^b dx_a means M[b][a] = s
        let contraction = tables::expand(n, &tables::dual_contraction_formula(tag))
            .into_iter()
            .all(|(a, b, s)| m.get(b, a) == s);
        report.exact(
            format!("i_X Φ_{tag}* coordinate formula"),
            Some(n),
            contraction,
            "dual symplectic forms",
        );

        let field_table = stated_matches_matrix(&m, n, &tables::hamiltonian_field_formula(tag));
        let system_table = stated_matches_matrix(&m, n, &tables::hamilton_system(tag));
        report.exact(
            format!("stated Hamilton equations ({tag}*) = derived"),
            Some(n),
            field_table && system_table,
            &format!("Hamilton system ({tag}*)"),
        );

        let h = ScalarField::polynomial(random_polynomial(rng, dim, 4, 8));
        let sys = HamiltonianSystem::new(kind, h)?;
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let x = random_point(rng, dim);
            let closed = sys.vector_field(&x)?;
            let generic = sys.generic_field(&x)?;
            for (c, g) in closed.iter().zip(&generic) {
                worst = worst.max((c - g).abs() / c.abs().max(1.0));
            }
        }
        report.within(
            format!("closed-form Hamiltonian field ({tag}*) = solve of i_X Φ = dH"),
            n,
            worst,
            1e-12,
            "Hamiltonian vector fields",
        );
    }
    Ok(())
}

/// Runs the whole suite for `n = 1..=n_max`.
pub fn verify_all(n_max: usize) -> Result<AuditReport> {
    if n_max < 1 {
        return Err(crate::Error::InvalidArgument("n_max must be >= 1".into()));
    }
    let mut report = AuditReport::default();
    algebra_records(&mut report, &mut ChaCha8Rng::seed_from_u64(SEED));
    for n in 1..=n_max {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ n as u64);
        tangent_records(&mut report, n, &mut rng)?;
        dual_records(&mut report, n, &mut rng)?;
    }
    Ok(report)
}

/// `max |r|` over a residual series, `0` when empty.
pub fn max_abs(series: &[Vec<f64>]) -> f64 {
    series.iter().flatten().fold(0.0, |m, r| m.max(r.abs()))
}

/// Largest Euclidean norm of a residual sample.
pub fn max_norm(series: &[Vec<f64>]) -> f64 {
    series.iter().map(|r| crate::linalg::norm2(r)).fold(0.0, f64::max)
}
