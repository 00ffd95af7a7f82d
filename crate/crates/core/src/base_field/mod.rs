//! Exact arithmetic in `F = F_p(t_1,...,t_m)`.

mod field;
mod gcd;
mod gf;
mod modgcd;
mod parse;
mod poly;
mod rational;

pub use field::{is_prime, Field, FieldDescriptor};
pub use gcd::poly_gcd;
pub use parse::parse_expr;
pub use poly::{Monomial, Polynomial};
pub use rational::{rf_arith, ArithOp, RationalFunction};

/// Partial derivative of `a` with respect to the variable with 0-based index `i`.
pub fn partial_derivative(a: &RationalFunction, i: usize) -> RationalFunction {
    a.partial_derivative(i)
}

/// p-th root of `a`, or `NotAPthPower` when `a` is not in `F^p`.
pub fn pth_root(a: &RationalFunction) -> crate::Result<RationalFunction> {
    a.pth_root()
}
