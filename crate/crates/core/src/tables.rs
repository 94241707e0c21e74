//! Coordinate formulas for each structure, written out block by block.
//!
//! Everything here is data transcribed from the component formulas of the
//! mechanical systems: the coordinate expression of each vertical
//! differential, the Liouville fields, the stated Euler-Lagrange and
//! Hamilton systems, and the Liouville forms and symplectic forms of the dual
//! structures. None of it is derived from the structure matrices; the audit
//! compares these tables with what the matrices imply.
//!
//! Blocks are numbered `0..4` for `x_i, x_{n+i}, x_{2n+i}, x_{3n+i}`; every
//! entry expands to `n` coordinate entries, one per `i`.

use crate::structure::StructureTag;

/// `(a, b, sign)` read as `sign * ∂f/∂x_{b-block} dx_{a-block}`.
pub type BlockTriple = (usize, usize, i64);

/// Coordinate expression of the vertical differential `d_A f`:
/// entries `(coframe block, derivative block, sign)`.
pub fn vertical_differential_formula(tag: StructureTag) -> [BlockTriple; 4] {
    match tag {
        StructureTag::F => [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)],
        StructureTag::G => [(0, 2, 1), (1, 3, -1), (2, 0, 1), (3, 1, -1)],
        StructureTag::H => [(0, 3, 1), (1, 2, 1), (2, 1, 1), (3, 0, 1)],
    }
}

/// Liouville field `V_A = A(X)`: entries `(X block, ∂ block, sign)`,
/// i.e. `sign * X^{a} ∂/∂x_{b}`.
pub fn liouville_field_formula(tag: StructureTag) -> [BlockTriple; 4] {
    match tag {
        StructureTag::F => [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)],
        StructureTag::G => [(0, 2, 1), (1, 3, -1), (2, 0, 1), (3, 1, -1)],
        StructureTag::H => [(0, 3, 1), (1, 2, 1), (2, 1, 1), (3, 0, 1)],
    }
}

/// Stated Euler-Lagrange systems `d/dt(∂L/∂x_a) - sign * ∂L/∂x_c = 0`:
/// entries `(equation block a, gradient block c, sign)`.
pub fn euler_lagrange_system(tag: StructureTag) -> [BlockTriple; 4] {
    match tag {
        StructureTag::F => [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)],
        StructureTag::G => [(0, 2, 1), (1, 3, -1), (2, 0, 1), (3, 1, -1)],
        StructureTag::H => [(0, 3, 1), (1, 2, 1), (2, 1, 1), (3, 0, 1)],
    }
}

/// Closed-form Hamiltonian vector fields `X = Σ sign * ∂H/∂x_c ∂/∂x_a`:
/// entries `(component block a, gradient block c, sign)`.
pub fn hamiltonian_field_formula(tag: StructureTag) -> [BlockTriple; 4] {
    match tag {
        StructureTag::F => [(0, 1, -1), (1, 0, 1), (2, 3, -1), (3, 2, 1)],
        StructureTag::G => [(0, 2, -1), (1, 3, 1), (2, 0, 1), (3, 1, -1)],
        StructureTag::H => [(0, 3, -1), (1, 2, -1), (2, 1, 1), (3, 0, 1)],
    }
}

/// Stated Hamilton systems `dx_a/dt = sign * ∂H/∂x_c`:
/// entries `(equation block a, gradient block c, sign)`.
pub fn hamilton_system(tag: StructureTag) -> [BlockTriple; 4] {
    match tag {
        StructureTag::F => [(0, 1, -1), (1, 0, 1), (2, 3, -1), (3, 2, 1)],
        StructureTag::G => [(0, 2, -1), (1, 3, 1), (2, 0, 1), (3, 1, -1)],
        StructureTag::H => [(0, 3, -1), (1, 2, -1), (2, 1, 1), (3, 0, 1)],
    }
}

/// Contraction `i_X Φ_{A*}`: entries `(coframe block, X block, sign)`,
/// i.e. `sign * X^{b} dx_{a}`.
pub fn dual_contraction_formula(tag: StructureTag) -> [BlockTriple; 4] {
    match tag {
        StructureTag::F => [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)],
        StructureTag::G => [(0, 2, 1), (2, 0, -1), (3, 1, 1), (1, 3, -1)],
        StructureTag::H => [(0, 3, 1), (3, 0, -1), (1, 2, 1), (2, 1, -1)],
    }
}

/// Symplectic forms `Φ_{A*} = Σ dx_{a} ∧ dx_{b}`: entries `(a block, b block)`.
pub fn dual_symplectic_form(tag: StructureTag) -> [(usize, usize); 2] {
    match tag {
        StructureTag::F => [(1, 0), (3, 2)],
        StructureTag::G => [(2, 0), (1, 3)],
        StructureTag::H => [(3, 0), (2, 1)],
    }
}

/// Liouville forms `λ_{A*} = ½ Σ sign * x_{a} dx_{b}`: entries
/// `(coefficient block a, coframe block b, sign)`.
pub fn dual_liouville_form(tag: StructureTag) -> [BlockTriple; 4] {
    match tag {
        StructureTag::F => [(0, 1, 1), (1, 0, -1), (2, 3, 1), (3, 2, -1)],
        StructureTag::G => [(0, 2, 1), (1, 3, -1), (2, 0, -1), (3, 1, 1)],
        StructureTag::H => [(0, 3, 1), (1, 2, 1), (2, 1, -1), (3, 0, -1)],
    }
}

/// Base 1-forms `ω_{A*} = ½ Σ sign_b x_b dx_b`; one sign per block.
///
/// `G*` and `H*` share the same expression while `F*` is all-plus.
pub fn dual_base_form_signs(tag: StructureTag) -> [i64; 4] {
    match tag {
        StructureTag::F => [1, 1, 1, 1],
        StructureTag::G | StructureTag::H => [1, 1, -1, -1],
    }
}

/// Expands block triples to 0-based coordinate triples for dimension `n`.
pub fn expand(n: usize, entries: &[BlockTriple]) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::with_capacity(entries.len() * n);
    for &(a, b, s) in entries {
        for i in 0..n {
            out.push((a * n + i, b * n + i, s));
        }
    }
    out
}
