//! Exact generating series for genus-zero quantum K-theory of projective
//! complete intersections and toric fibrations.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactnum`]: rationals, rational polynomials, cyclotomic fields.
//! * [`coeffring`]: truncated rings `ℚ[u_1..u_K]/(u_i^{n_i+1})` with `P_i = 1 - u_i`.
//! * [`qring`]: rational functions of `q` with factored denominators and the
//!   polarization split.
//! * [`series`]: Novikov-truncated series of such functions.
//! * [`ifunctions`]: J- and I-function generators.
//! * [`invariants`]: residue pairing and one-point invariant extraction.
//! * [`operators`]: exact checks of the q-Gamma, Euler–Maclaurin, Möbius and
//!   pole-cancellation identities.
//! * [`cli`]: the `qkgw` command line front end.

pub mod cli;
pub mod coeffring;
pub mod exactnum;
pub mod ifunctions;
pub mod invariants;
pub mod operators;
pub mod qring;
pub mod series;

mod error;

pub use error::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;
