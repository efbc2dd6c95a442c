//! Maass lifts of elliptic newforms to `U(2,2)` over an imaginary quadratic
//! field of prime discriminant, hermitian Hecke operators acting on their
//! Fourier coefficients, descent back to `q`-expansions, the base-change
//! factorization of the standard Euler factors, and congruence depths.
//!
//! Everything is exact: coefficients live in `Q[x]/(m)`, optionally tensored
//! with a cyclotomic field for class-group character values.

pub mod arith;
pub mod congr;
pub mod elliptic;
pub mod hecke;
pub mod hermitian;
pub mod lfun;
pub mod maass;
pub mod quadfield;
pub mod ring;
