//! Dense complex linear algebra on labeled qubit registers.

mod eigh;
mod operator;
mod state;
mod trace;

pub use eigh::{eigh, eigh_raw, evolve, propagator, Eigen, OFF_DIAG_TOL};
pub(crate) use operator::check_labels;
pub use operator::{kron, kron_with_capacity, DenseOperator, Pauli, HERMITIAN_TOL, MAX_DIM};
pub use state::{overlap, StateVector, NORM_TOL};
pub use trace::{density_matrix, partial_trace, PartialTrace};

pub use num_complex::Complex64 as C64;
