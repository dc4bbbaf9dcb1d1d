//! Robustness analysis for finite-state transducers.
//!
//! The central question: given a transducer `T`, input and output similarity
//! functions, and a constant `K`, is `T` K-Lipschitz robust, i.e. does
//! `d_out([[T]](s), [[T]](t)) <= K * d_in(s, t)` hold for all input pairs in
//! the domain? The library provides the decision procedures, the witness
//! machinery that backs every negative answer with a concrete input pair,
//! and brute-force oracles used to cross-check both.
//!
//! Weights are exact rationals throughout; see [`numeric`] for why floats
//! are ruled out. The convenience aliases at the crate root fix the scalar
//! to [`num::BigRational`].

pub mod alphabet;
mod error;
pub mod fst;
pub mod numeric;
pub mod similarity;
pub mod wa;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

/// Exact rational scalar used by the concrete aliases.
pub type Q = num::BigRational;
/// Rational extended with the two infinities.
pub type Value = numeric::Ext<Q>;
/// Weighted automaton over exact rationals.
pub type Wa = wa::WeightedAutomaton<Q>;
/// Value function over exact rationals.
pub type ValueFn = wa::ValueFunction<Q>;
