//! Matrices and vectors over the algebra, and matrix-valued symbols.
//!
//! Vectors are columns and `e` acts on the left: `E = { v : e v = v }` for a
//! self-adjoint idempotent `e`. Matrix symbols also act on the left, so a
//! compressed symbol `e rho e` maps every vector into `E`.

mod basis;
mod matrix;
mod symbol;
mod vector;

pub use basis::{load_idempotent, scalar_idempotent_basis};
pub use matrix::{idempotent_check, MatrixElement};
pub use symbol::{
    apply_matrix, matrix_adjoint_expansion, matrix_adjoint_oracle, matrix_compose_expansion, matrix_compose_oracle,
    matrix_gns_adjoint, matrix_symbol_from_specs, module_boundedness_check, module_rellich_extract,
    scalar_adjoint_via_matrix, MatrixExpansionResult, MatrixSymbol,
};
pub use vector::{matrix_times_vector, module_inner, module_inner_s, module_norm_s, project, ModuleVector};
