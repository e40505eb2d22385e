//! Finite-support arithmetic of the smooth noncommutative torus.
//!
//! Elements are finitely supported sums `sum_m a_m U^m` over normal-ordered
//! words `U^m = U_1^{m_1} ... U_n^{m_n}`. Multiplication is the twisted
//! convolution induced by `U_k U_j = e^{2 pi i theta_{j,k}} U_j U_k`, with
//! the normal-ordering phase
//!
//! ```text
//! w(m, k) = exp(2 pi i sum_{j<l} theta_{j,l} m_l k_j),   U^m U^k = w(m, k) U^{m+k}.
//! ```

mod element;
mod gns;
mod index;
mod theta;

pub use element::{TorusElement, PRUNE_TOL};
pub use gns::{cstar_norm_bounds, gns_matrix, NormBounds};
pub use index::{box_modes, indices_of_total, indices_up_to, MultiIndex};
pub use theta::{normal_phase, Phase, Theta};
