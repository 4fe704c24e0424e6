//! Exact computations on monomial ideals over a polynomial ring
//! `S = K[x_1, ..., x_n]`: Borel type predicates, the sequential chain of
//! saturations, Castelnuovo-Mumford regularity by three independent routes,
//! associated primes and multigraded Betti numbers.
//!
//! Everything is combinatorial except the Betti oracle, whose ranks are
//! taken over `QQ`. The linear algebra there is generic over the scalar;
//! the aliases below fix the concrete choices.

pub mod ass;
pub mod betti;
pub mod borel;
pub mod chain;
pub mod error;
pub mod generate;
pub mod ideal;
pub mod linalg;
pub mod monomial;
pub mod parse;
pub mod regularity;
pub mod verify;

/// Exponent of a single variable.
pub type Exponent = u32;
/// Machine integer tried first by the fraction-free rank route.
pub type OracleInt = i64;
/// Overflow fallback for the fraction-free route.
pub type Integer = num_bigint::BigInt;
/// Field used by the Gaussian elimination route.
pub type Rational = num_rational::BigRational;

pub use ass::{
    associated_primes, irreducible_decomposition, renumber, AssociatedPrimes, Permutation,
};
pub use betti::{betti_table, reg_oracle, BettiTable, OracleBudget};
pub use borel::{
    is_borel_type_exchange, is_borel_type_star, is_stable, is_strongly_stable, BorelWitness,
};
pub use chain::{build_chain, reg_via_chain, SValue, SequentialChain};
pub use error::{Error, Result};
pub use ideal::MonomialIdeal;
pub use monomial::{Monomial, RingContext};
pub use parse::{parse_ideal, parse_monomial};
pub use regularity::{reg_auto, reg_via_truncation, Method, RegularityReport};
