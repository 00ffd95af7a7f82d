//! Exact computation of annihilators of differential forms and of kernels of
//! `Omega^n(F) -> Omega^n(K)` for function field extensions of quasilinear
//! p-forms over `F = F_p(t_1,...,t_m)`, with a characteristic-2 layer for
//! bilinear Pfister forms.
//!
//! Every closed-form description has a brute-force counterpart obtained by
//! solving the defining linear system directly; [`campaign`] runs seeded
//! randomized comparisons between the two.

pub mod base_field;
pub mod campaign;
pub mod char2;
pub mod differential;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod p_linear;
pub mod quasilinear;
pub mod random;

pub use error::{Error, Result};
