//! Mechanics on flat para-quaternionic Kähler space `R^{4n}`.
//!
//! The crate is organised bottom-up:
//!
//! - [`split_quaternion`]: the algebra of split quaternions, `B^n` and `Sp(n, B)`.
//! - [`structure`]: the endomorphisms `F, G, H` and their duals as signed
//!   permutation matrices, the neutral metric and the fundamental 2-forms.
//! - [`poly`] and [`forms`]: exact polynomial differential forms with the
//!   vertical derivation and vertical differential of a structure.
//! - [`field`] and [`dual`]: numerically evaluated scalar fields with
//!   gradient and Hessian, backed by hyper-dual forward differentiation.
//! - [`integrators`]: fixed-step explicit and mass-matrix steppers.
//! - [`lagrangian`] and [`hamiltonian`]: equations of motion derived from the
//!   intrinsic equations `i_X Φ_L = dE_L` and `i_X Φ = dH`.
//! - [`audit`]: the exact identity suite and the comparison of the stated
//!   equation systems against the derived ones.
//!
//! Coordinates are 0-based in code. Display strings use the 1-based
//! `x_1 .. x_{4n}` labels.

// Index loops mirror the matrix notation throughout.
#![allow(clippy::needless_range_loop)]

pub mod audit;
pub mod dual;
pub mod error;
pub mod field;
pub mod forms;
pub mod hamiltonian;
pub mod integrators;
pub mod lagrangian;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod split_quaternion;
pub mod structure;
pub mod tables;

pub use error::{Error, Result};
pub use field::{EvalResult, ScalarField};
pub use forms::{KForm, SymVectorField};
pub use hamiltonian::HamiltonianSystem;
pub use integrators::{Method, StepperConfig, Trajectory};
pub use lagrangian::{Convention, LagrangianSystem};
pub use poly::{PolyScalar, Rational};
pub use split_quaternion::{BMatrix, BVector, SplitQuaternion, SquareClass};
pub use structure::{NeutralMetric, StructureKind, StructureOperator, StructureTag};
