//! Decide whether the invertible points of an affine matrix variety form a
//! linear algebraic group.
//!
//! Given `n` and polynomials `f_1, …, f_r` in the `n²` entries of a generic
//! matrix, the library decides (with exact arithmetic over `Q` or `F_p`)
//! whether `V*(I) = V(I) ∩ GL(n)` is closed under taking the identity,
//! inverses and products, over the algebraic closure of the coefficient
//! field. Every test is reduced to radical membership, which in turn is
//! decided by a Gröbner basis computation with the Rabinowitsch trick.
//!
//! The polynomial machinery is generic over [`coeff::Field`]; the aliases
//! below name the two instantiations the tool uses.

pub mod cli;
pub mod coeff;
pub mod decide;
pub mod groebner;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod symmat;

pub use coeff::{Field, FieldTag, Fp, PrimeModulus, Rational};
pub use decide::{DecisionReport, Decider, DecideOptions, Verdict};
pub use groebner::{Budget, GbError, GroebnerBasis};
pub use parse::{parse_poly, parse_problem, AnyProblem, ParseError, ProblemSpec};
pub use poly::{Monomial, MonomialOrder, OrderKind, Polynomial, VarRing};

/// Rational coefficients.
pub type Q = Rational;
/// Polynomials over `Q`.
pub type QPoly = Polynomial<Rational>;
/// Polynomials over a prime field.
pub type FpPoly = Polynomial<Fp>;
/// Problems over `Q`.
pub type QProblem = ProblemSpec<Rational>;
/// Problems over a prime field.
pub type FpProblem = ProblemSpec<Fp>;
