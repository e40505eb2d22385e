//! Operator action `P_rho(a) = sum_m rho(m) a_m U^m`, exact adjoint and
//! composition symbols, and their asymptotic expansions
//!
//! ```text
//! sigma(P^*)     ~ sum_l (1/l!) d^l delta^l (rho(xi))^*
//! sigma(P_phi P_rho) ~ sum_l (1/l!) d^l phi(xi) delta^l rho(xi)
//! ```
//!
//! with `l! = l_1! ... l_n!`.

mod action;
mod expansion;
mod remainder;

pub use action::{apply, gns_adjoint_symbol, operator_matrix, symbol_of_operator};
pub use expansion::{adjoint_expansion, adjoint_oracle, compose_expansion, compose_oracle, ExpansionResult};
pub use remainder::{
    remainder_order_fit, taylor_identity_residual, taylor_remainder, ExpansionKind, RemainderFit, EXACT_RESIDUAL,
};
