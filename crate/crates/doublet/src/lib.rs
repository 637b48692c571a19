//! Exact-arithmetic characters, Kostka-type multiplicity polynomials and
//! fusion decompositions for the doublet algebra of `(1,p)` logarithmic
//! models.
//!
//! All computations are exact: `q`-exponents are integers in units of
//! `1/(4p)` and coefficients are arbitrary-precision integers carrying a
//! Laurent-polynomial grading in `z` (the `sl(2)` Cartan direction).
//!
//! The crate is organized along the objects it computes:
//! - [`series`]: sparse exact arithmetic for `z`-Laurent coefficients and
//!   truncated `q`-series.
//! - [`qcomb`]: Gaussian binomials, q-Pochhammer and eta-product inverses,
//!   q-supernomial coefficients.
//! - [`model`]: the Gordon matrix, conformal dimensions and the standard
//!   label vectors of the model at a fixed `p`.
//! - [`characters`]: theta-form and fermionic-form characters of the
//!   irreducible, Verma, projective and coinvariant modules.
//! - [`kostka`]: the multiplicity polynomials and their alternating-sum
//!   counterparts.
//! - [`fusion`]: the fusion ring on the simple and projective objects and
//!   graded decompositions of tensor powers.
//! - [`verify`]: identity-verification suites with counterexample
//!   localization.

pub mod characters;
pub mod cli;
pub mod fusion;
pub mod kostka;
pub mod model;
pub mod qcomb;
pub mod series;
pub mod verify;

pub use model::ModelParams;
pub use series::{QPoly, QSeries, ZLaurent};

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Param(String),

    #[error("exponent denominator mismatch: {lhs} vs {rhs}")]
    ModelMismatch { lhs: i64, rhs: i64 },

    #[error("insufficient truncation: need order {required} in units of 1/{denom}, have {have}")]
    Truncation { required: i64, have: i64, denom: i64 },

    #[error("closed forms are only available for p in {{2, 3}}, got p = {0}")]
    UnsupportedP(i64),
}

/// Maps `f` over `items` and merges the resulting term maps by exact
/// addition. Addition is associative and commutative, so the merge order
/// (and hence the thread schedule) cannot change the result.
#[cfg(feature = "parallel")]
pub(crate) fn map_merge<T, K, V, F, M>(items: Vec<T>, f: F, merge_into: M) -> std::collections::BTreeMap<K, V>
where
    T: Send,
    K: Ord + Send,
    V: Send,
    F: Fn(T) -> std::collections::BTreeMap<K, V> + Sync + Send,
    M: Fn(&mut std::collections::BTreeMap<K, V>, std::collections::BTreeMap<K, V>) + Sync + Send,
{
    use rayon::prelude::*;
    items
        .into_par_iter()
        .map(f)
        .reduce(std::collections::BTreeMap::new, |mut acc, part| {
            merge_into(&mut acc, part);
            acc
        })
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_merge<T, K, V, F, M>(items: Vec<T>, f: F, merge_into: M) -> std::collections::BTreeMap<K, V>
where
    K: Ord,
    F: Fn(T) -> std::collections::BTreeMap<K, V>,
    M: Fn(&mut std::collections::BTreeMap<K, V>, std::collections::BTreeMap<K, V>),
{
    let mut acc = std::collections::BTreeMap::new();
    for item in items {
        merge_into(&mut acc, f(item));
    }
    acc
}
