//! Exact arithmetic in the integer quaternion rings `LQ_{a,b}` and a
//! constructive sums-of-three-squares pipeline for them.
//!
//! `LQ_{a,b}` is the ring of quaternions with integer coefficients over the
//! basis `1, i, j, k`, subject to `i^2 = -a`, `j^2 = -b`, `ij = -ji = k`
//! (so `k^2 = -ab`). The crate provides:
//!
//! - [`ring`]: the value types [`RingParams`] and [`Quaternion`] with exact
//!   (overflow-checked) multiplication and squaring, and the membership test
//!   for the subgroup generated by squares.
//! - [`modular`]: constructive proper representations of integers by the
//!   diagonal form `x0^2 - a*y1^2 - b*y2^2 - ab*y3^2` modulo `p^2`, modulo
//!   `2^nu`, their CRT gluing, and the combined condition modulo
//!   `2^4*a^2*b^2` under which the form represents an integer globally.
//! - [`solver`]: bounded search for exact integer solutions of the form,
//!   plus square-factor stripping and a modular obstruction finder for sums
//!   of two squares.
//! - [`decompose`]: writing elements of the square subgroup as sums of three
//!   quaternion squares, a classifier for the Waring number `g_{a,b}(2)`,
//!   and a deterministic survey harness.
//! - [`density`]: the strongly-carefree-couple constant `K`, the coverage
//!   density `9K/8`, and exact pair counts by sieve.

pub mod arith;
pub mod decompose;
pub mod density;
mod error;
pub mod modular;
pub mod ring;
pub mod solver;

pub use decompose::{
    classify_waring, survey, three_square_decompose, DecompositionTriple, GValue, RingFilter,
    SurveyItem, SurveyStatus, VerdictBasis, WaringVerdict,
};
pub use density::{carefree_constant, empirical_counts, sweep_csv, CarefreeEstimate, PairCounts};
pub use error::{Error, Result};
pub use modular::{
    exhaustive_proper_rep, glue, hensel_lift, proper_rep_mod_2nu, proper_rep_mod_p2,
    watson_condition, DiagonalForm, ModularRepresentation, TwoAdicLevel,
};
pub use ring::{in_square_subgroup, multiply, square, Quaternion, RingParams};
pub use solver::{
    represent_integer, represent_two_squares, strip_square_factor, two_square_obstruction,
    IntegerRepresentation, OnExhaustion, SearchPolicy,
};
