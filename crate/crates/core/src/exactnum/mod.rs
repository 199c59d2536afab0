//! Exact scalars: rationals, dense rational polynomials and cyclotomic fields.

pub mod cyclotomic;
pub mod format;
pub mod poly;
pub mod rational;

pub use cyclotomic::{
    check_root_sum_identity, cyc_arith, cyclotomic_polynomial, CycOp, CyclotomicNumber,
};
pub use poly::QPoly;
pub use rational::Rational;
