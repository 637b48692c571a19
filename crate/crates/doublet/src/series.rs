//! Exact arithmetic for Laurent polynomials in `z` and truncated Laurent
//! series in `q` with fractional exponents stored as integers over a fixed
//! denominator `4p`.
//!
//! Three value types:
//! - [`ZLaurent`]: Laurent polynomial in `z` with `BigInt` coefficients.
//!   Carries the `sl(2)` Cartan grading of a single `q`-coefficient.
//! - [`QSeries`]: truncated Laurent series in `q` whose coefficients are
//!   `ZLaurent` values. Exponents are integers in units of `1/(4p)`.
//! - [`QPoly`]: exact (untruncated) finite Laurent polynomial in `q`, same
//!   exponent units, same coefficient type.
//!
//! Invariants:
//! - No stored coefficient is zero.
//! - All arithmetic is exact; there is no floating point anywhere.
//! - A `QSeries` knows the window `[min_exp, trunc)` on which its
//!   coefficients are valid and refuses to answer outside it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::Error;

/// Laurent polynomial in `z` with arbitrary-precision integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl ZLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// `c * z^exp`.
    pub fn monomial(exp: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut out = Self::zero();
        for (e, c) in pairs {
            out.add_term(e, BigInt::from(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }

    /// Exact convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Evaluation at `z = 1`: the sum of all coefficients.
    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// The substitution `z -> z^{-1}`.
    pub fn conjugate(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.conjugate()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

impl fmt::Display for ZLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in self.terms.iter().rev() {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            match (e, c == &BigInt::one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{c}*z")?,
                (_, true) => write!(f, "z^{e}")?,
                (_, false) => write!(f, "{c}*z^{e}")?,
            }
        }
        Ok(())
    }
}

/// Term of a serialized `q`/`z` polynomial or series: the coefficient of
/// `q^{qnum/denom} z^{z}`, written as a decimal string so that round-trips
/// are bit-exact at any size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub qnum: i64,
    pub z: i64,
    pub c: String,
}

fn records_from_map(terms: &BTreeMap<i64, ZLaurent>) -> Vec<TermRecord> {
    let mut out = Vec::new();
    for (&q, zl) in terms {
        for (&z, c) in zl.iter() {
            out.push(TermRecord {
                qnum: q,
                z,
                c: c.to_string(),
            });
        }
    }
    out
}

fn map_from_records(records: &[TermRecord]) -> Result<BTreeMap<i64, ZLaurent>, Error> {
    let mut terms: BTreeMap<i64, ZLaurent> = BTreeMap::new();
    for r in records {
        let c: BigInt = r
            .c
            .parse()
            .map_err(|_| Error::Param(format!("bad coefficient {:?}", r.c)))?;
        terms.entry(r.qnum).or_default().add_term(r.z, c);
    }
    terms.retain(|_, zl| !zl.is_zero());
    Ok(terms)
}

/// Sentinel truncation order for series that are known exactly (the zero
/// series produced by multiplying with an exactly-zero polynomial).
pub const EXACT: i64 = i64::MAX / 4;

/// Truncated Laurent series in `q`.
///
/// Exponents are integers in units of `1/denom` with `denom = 4p` fixed by
/// the ambient model. Coefficients are valid exactly on `[min_exp, trunc)`;
/// below `min_exp` the series is known to vanish, at `trunc` and above it is
/// unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    denom: i64,
    min_exp: i64,
    trunc: i64,
    terms: BTreeMap<i64, ZLaurent>,
}

impl QSeries {
    pub fn new(denom: i64, min_exp: i64, trunc: i64) -> Self {
        assert!(denom > 0, "exponent denominator must be positive");
        Self {
            denom,
            min_exp,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    /// The zero series known to all orders.
    pub fn exact_zero(denom: i64) -> Self {
        Self::new(denom, EXACT, EXACT)
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &ZLaurent)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c * q^{qexp} z^{zexp}`, silently dropping exponents at or above
    /// the truncation order.
    pub fn add_term(&mut self, qexp: i64, zexp: i64, c: BigInt) {
        if c.is_zero() || qexp >= self.trunc {
            return;
        }
        assert!(
            qexp >= self.min_exp,
            "term q^{qexp} below the declared support floor {}",
            self.min_exp
        );
        let entry = self.terms.entry(qexp).or_default();
        entry.add_term(zexp, c);
        if entry.is_zero() {
            self.terms.remove(&qexp);
        }
    }

    pub fn add_zl(&mut self, qexp: i64, zl: &ZLaurent) {
        for (&z, c) in zl.iter() {
            self.add_term(qexp, z, c.clone());
        }
    }

    /// Coefficient of `q^{qexp}`; refuses to answer at or beyond the
    /// truncation order.
    pub fn coeff(&self, qexp: i64) -> Result<ZLaurent, Error> {
        if qexp >= self.trunc {
            return Err(Error::Truncation {
                required: qexp + 1,
                have: self.trunc,
                denom: self.denom,
            });
        }
        Ok(self.terms.get(&qexp).cloned().unwrap_or_default())
    }

    fn check_denom(&self, other: i64) -> Result<(), Error> {
        if self.denom != other {
            return Err(Error::ModelMismatch {
                lhs: self.denom,
                rhs: other,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_denom(other.denom)?;
        let mut out = Self::new(
            self.denom,
            self.min_exp.min(other.min_exp),
            self.trunc.min(other.trunc),
        );
        for (&q, zl) in self.terms.iter().chain(other.terms.iter()) {
            if q < out.trunc {
                out.add_zl(q, zl);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::new(self.denom, self.min_exp, self.trunc);
        out.terms = self.terms.iter().map(|(&q, zl)| (q, zl.neg())).collect();
        out
    }

    /// Exact product on the largest provably valid window:
    /// `trunc = min(a.trunc + b.min_exp, b.trunc + a.min_exp)`.
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_denom(other.denom)?;
        let trunc = (self.trunc.saturating_add(other.min_exp))
            .min(other.trunc.saturating_add(self.min_exp))
            .min(EXACT);
        let min_exp = self.min_exp.saturating_add(other.min_exp).min(EXACT);
        let mut out = Self::new(self.denom, min_exp, trunc);
        for (&q1, zl1) in &self.terms {
            for (&q2, zl2) in &other.terms {
                if q1 + q2 < trunc {
                    out.add_zl(q1 + q2, &zl1.mul(zl2));
                }
            }
        }
        Ok(out)
    }

    /// Exact product with an untruncated polynomial. The truncation order
    /// shifts by the minimum exponent of `k` (negative exponents shrink the
    /// valid window, positive ones extend it).
    pub fn mul_poly(&self, k: &QPoly) -> Result<Self, Error> {
        self.check_denom(k.denom)?;
        let Some(kmin) = k.min_qexp() else {
            return Ok(Self::exact_zero(self.denom));
        };
        let trunc = self.trunc.saturating_add(kmin).min(EXACT);
        let min_exp = self.min_exp.saturating_add(kmin).min(EXACT);
        let mut out = Self::new(self.denom, min_exp, trunc);
        for (&q1, zl1) in &self.terms {
            for (&q2, zl2) in &k.terms {
                if q1 + q2 < trunc {
                    out.add_zl(q1 + q2, &zl1.mul(zl2));
                }
            }
        }
        Ok(out)
    }

    /// Like [`QSeries::mul_poly`] but demands the result stay valid up to
    /// `desired_trunc`, reporting the required input order on failure.
    pub fn mul_poly_to(&self, k: &QPoly, desired_trunc: i64) -> Result<Self, Error> {
        let out = self.mul_poly(k)?;
        if out.trunc < desired_trunc {
            return Err(Error::Truncation {
                required: desired_trunc.saturating_sub(k.min_qexp().unwrap_or(0)),
                have: self.trunc,
                denom: self.denom,
            });
        }
        Ok(out)
    }

    /// Shift by `q^{qexp} * zl`, exact.
    pub fn mul_monomial(&self, qexp: i64, zl: &ZLaurent) -> Self {
        if zl.is_zero() {
            return Self::exact_zero(self.denom);
        }
        let mut out = Self::new(
            self.denom,
            self.min_exp.saturating_add(qexp).min(EXACT),
            self.trunc.saturating_add(qexp).min(EXACT),
        );
        for (&q, v) in &self.terms {
            out.add_zl(q + qexp, &v.mul(zl));
        }
        out
    }

    /// Restricts the valid window to `[min_exp, new_trunc)`.
    pub fn truncate(&self, new_trunc: i64) -> Self {
        let mut out = Self::new(self.denom, self.min_exp, self.trunc.min(new_trunc));
        for (&q, zl) in &self.terms {
            if q < out.trunc {
                out.terms.insert(q, zl.clone());
            }
        }
        out
    }

    pub fn substitute_z_inv(&self) -> Self {
        let mut out = Self::new(self.denom, self.min_exp, self.trunc);
        out.terms = self
            .terms
            .iter()
            .map(|(&q, zl)| (q, zl.conjugate()))
            .collect();
        out
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        records_from_map(&self.terms)
    }

    /// Rebuilds a series from serialized terms; window data is supplied by
    /// the caller since the record list carries only coefficients.
    pub fn from_records(
        denom: i64,
        min_exp: i64,
        trunc: i64,
        records: &[TermRecord],
    ) -> Result<Self, Error> {
        let mut out = Self::new(denom, min_exp, trunc);
        out.terms = map_from_records(records)?;
        if let Some((&q, _)) = out.terms.iter().next_back() {
            if q >= trunc {
                return Err(Error::Param(format!(
                    "term q^{q} at or above truncation {trunc}"
                )));
            }
        }
        if let Some((&q, _)) = out.terms.iter().next() {
            if q < min_exp {
                return Err(Error::Param(format!(
                    "term q^{q} below support floor {min_exp}"
                )));
            }
        }
        Ok(out)
    }

    /// First `(q, z)` position, in lexicographic order, where the two series
    /// disagree on the common valid window, together with both coefficients.
    pub fn first_discrepancy(&self, other: &Self) -> Option<(i64, i64, BigInt, BigInt)> {
        let hi = self.trunc.min(other.trunc);
        let mut qs: Vec<i64> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .filter(|&q| q < hi)
            .collect();
        qs.sort_unstable();
        qs.dedup();
        for q in qs {
            let a = self.terms.get(&q).cloned().unwrap_or_default();
            let b = other.terms.get(&q).cloned().unwrap_or_default();
            if a == b {
                continue;
            }
            let mut zs: Vec<i64> = a.iter().chain(b.iter()).map(|(&z, _)| z).collect();
            zs.sort_unstable();
            zs.dedup();
            for z in zs {
                let ca = a.coeff(z);
                let cb = b.coeff(z);
                if ca != cb {
                    return Some((q, z, ca, cb));
                }
            }
        }
        None
    }

    /// Equality of all coefficients on the common valid window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_discrepancy(other).is_none()
    }
}

/// Exact finite Laurent polynomial in `q` with `ZLaurent` coefficients,
/// exponents in units of `1/denom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    denom: i64,
    terms: BTreeMap<i64, ZLaurent>,
}

impl QPoly {
    pub fn zero(denom: i64) -> Self {
        assert!(denom > 0);
        Self {
            denom,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(denom: i64) -> Self {
        let mut p = Self::zero(denom);
        p.add_term(0, 0, BigInt::one());
        p
    }

    /// `c * q^{qexp} z^{zexp}`.
    pub fn monomial(denom: i64, qexp: i64, zexp: i64, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(denom);
        p.add_term(qexp, zexp, c.into());
        p
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &ZLaurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, qexp: i64) -> ZLaurent {
        self.terms.get(&qexp).cloned().unwrap_or_default()
    }

    pub fn coeff_qz(&self, qexp: i64, zexp: i64) -> BigInt {
        self.terms
            .get(&qexp)
            .map(|zl| zl.coeff(zexp))
            .unwrap_or_else(BigInt::zero)
    }

    pub fn min_qexp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_qexp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, qexp: i64, zexp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(qexp).or_default();
        entry.add_term(zexp, c);
        if entry.is_zero() {
            self.terms.remove(&qexp);
        }
    }

    pub fn add_zl(&mut self, qexp: i64, zl: &ZLaurent) {
        for (&z, c) in zl.iter() {
            self.add_term(qexp, z, c.clone());
        }
    }

    /// Adds `factor * q^{qshift} z^{zexp} * sum_k dense[k] q^{k*step}`.
    /// Used to fold dense integer-exponent polynomials (q-binomial products)
    /// into fractional-exponent accumulators.
    pub fn add_dense(&mut self, dense: &[BigInt], qshift: i64, step: i64, zexp: i64, factor: &BigInt) {
        for (k, c) in dense.iter().enumerate() {
            if !c.is_zero() {
                self.add_term(qshift + (k as i64) * step, zexp, c * factor);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.denom != other.denom {
            return Err(Error::ModelMismatch {
                lhs: self.denom,
                rhs: other.denom,
            });
        }
        let mut out = self.clone();
        for (&q, zl) in &other.terms {
            out.add_zl(q, zl);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            denom: self.denom,
            terms: self.terms.iter().map(|(&q, zl)| (q, zl.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        if self.denom != other.denom {
            return Err(Error::ModelMismatch {
                lhs: self.denom,
                rhs: other.denom,
            });
        }
        let mut out = Self::zero(self.denom);
        for (&q1, zl1) in &self.terms {
            for (&q2, zl2) in &other.terms {
                out.add_zl(q1 + q2, &zl1.mul(zl2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.denom);
        }
        Self {
            denom: self.denom,
            terms: self.terms.iter().map(|(&q, zl)| (q, zl.scale(c))).collect(),
        }
    }

    /// Multiplies by `q^{qexp}`, exact.
    pub fn shift_q(&self, qexp: i64) -> Self {
        Self {
            denom: self.denom,
            terms: self.terms.iter().map(|(&q, zl)| (q + qexp, zl.clone())).collect(),
        }
    }

    /// The substitution `q -> q^{-1}`: all `q`-exponents negate, the `z`
    /// content is untouched.
    pub fn substitute_qinv(&self) -> Self {
        Self {
            denom: self.denom,
            terms: self.terms.iter().map(|(&q, zl)| (-q, zl.clone())).collect(),
        }
    }

    pub fn substitute_z_inv(&self) -> Self {
        Self {
            denom: self.denom,
            terms: self.terms.iter().map(|(&q, zl)| (q, zl.conjugate())).collect(),
        }
    }

    /// Evaluation at `q = 1`, leaving the `z` grading.
    pub fn eval_q_one(&self) -> ZLaurent {
        let mut out = ZLaurent::zero();
        for zl in self.terms.values() {
            out = out.add(zl);
        }
        out
    }

    /// Evaluation at `q = z = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.terms.values().map(|zl| zl.eval_one()).sum()
    }

    pub fn is_z_symmetric(&self) -> bool {
        self.terms.values().all(|zl| zl.is_symmetric())
    }

    pub fn is_z_free(&self) -> bool {
        self.terms.values().all(|zl| zl.iter().all(|(&z, _)| z == 0))
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|zl| zl.all_nonnegative())
    }

    /// Reads the polynomial as a series valid on `[min_exp, trunc)`.
    pub fn to_series(&self, min_exp: i64, trunc: i64) -> QSeries {
        let mut out = QSeries::new(self.denom, min_exp.min(self.min_qexp().unwrap_or(min_exp)), trunc);
        for (&q, zl) in &self.terms {
            if q < trunc {
                out.terms.insert(q, zl.clone());
            }
        }
        out
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        records_from_map(&self.terms)
    }

    pub fn from_records(denom: i64, records: &[TermRecord]) -> Result<Self, Error> {
        Ok(Self {
            denom,
            terms: map_from_records(records)?,
        })
    }
}

fn fmt_qpower(f: &mut fmt::Formatter<'_>, num: i64, denom: i64) -> fmt::Result {
    if num == 0 {
        return write!(f, "1");
    }
    let g = gcd(num.unsigned_abs(), denom.unsigned_abs()) as i64;
    let (n, d) = (num / g, denom / g);
    if d == 1 {
        write!(f, "q^{n}")
    } else {
        write!(f, "q^({n}/{d})")
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&q, zl) in &self.terms {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            if zl.num_terms() == 1 && zl.coeff(0) == BigInt::one() && q != 0 {
                fmt_qpower(f, q, self.denom)?;
            } else if q == 0 {
                write!(f, "({zl})")?;
            } else {
                write!(f, "({zl})*")?;
                fmt_qpower(f, q, self.denom)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&q, zl) in &self.terms {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "({zl})*")?;
            fmt_qpower(f, q, self.denom)?;
        }
        if first {
            write!(f, "0")?;
        }
        if self.trunc < EXACT {
            write!(f, " + O(")?;
            fmt_qpower(f, self.trunc, self.denom)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zl(pairs: &[(i64, i64)]) -> ZLaurent {
        ZLaurent::from_terms(pairs.iter().copied())
    }

    #[test]
    fn zl_add_disjoint_and_cancelling() {
        let a = zl(&[(1, 1), (-1, 1)]);
        let b = zl(&[(0, 1)]);
        assert_eq!(a.add(&b), zl(&[(1, 1), (0, 1), (-1, 1)]));

        let z = zl(&[(1, 1)]);
        assert!(z.add(&z.neg()).is_zero());

        assert_eq!(a.add(&a), zl(&[(1, 2), (-1, 2)]));
    }

    #[test]
    fn zl_mul_examples() {
        let a = zl(&[(1, 1), (-1, 1)]);
        assert_eq!(a.mul(&a), zl(&[(2, 1), (0, 2), (-2, 1)]));

        let b = zl(&[(2, 1), (0, 1), (-2, 1)]);
        assert_eq!(a.mul(&b), zl(&[(3, 1), (1, 2), (-1, 2), (-3, 1)]));

        assert!(a.mul(&ZLaurent::zero()).is_zero());
    }

    #[test]
    fn zl_eval_one() {
        assert_eq!(zl(&[(1, 1), (-1, 1)]).eval_one(), BigInt::from(2));
        assert_eq!(zl(&[(2, 1), (0, 2), (-2, 1)]).eval_one(), BigInt::from(4));
        assert_eq!(ZLaurent::zero().eval_one(), BigInt::zero());
    }

    #[test]
    fn zl_conjugate() {
        assert_eq!(zl(&[(2, 1), (0, 1)]).conjugate(), zl(&[(-2, 1), (0, 1)]));
        let sym = zl(&[(1, 1), (-1, 1)]);
        assert_eq!(sym.conjugate(), sym);
        assert_eq!(zl(&[(3, 3)]).conjugate(), zl(&[(-3, 3)]));
    }

    #[test]
    fn qs_mul_basic() {
        // (1 + q)^2 truncated at q^3, denom 4 (p = 1 stand-in for plain powers).
        let mut a = QSeries::new(4, 0, 12);
        a.add_term(0, 0, 1.into());
        a.add_term(4, 0, 1.into());
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.trunc(), 12);
        assert_eq!(sq.coeff(0).unwrap(), ZLaurent::one());
        assert_eq!(sq.coeff(4).unwrap(), ZLaurent::constant(2));
        assert_eq!(sq.coeff(8).unwrap(), ZLaurent::one());
    }

    #[test]
    fn qs_mul_geometric_inverse() {
        // (1 + q + q^2 + ...) * (1 - q) = 1 up to the truncation.
        let mut geo = QSeries::new(4, 0, 12);
        for k in 0..3 {
            geo.add_term(4 * k, 0, 1.into());
        }
        let mut one_minus_q = QSeries::new(4, 0, 12);
        one_minus_q.add_term(0, 0, 1.into());
        one_minus_q.add_term(4, 0, (-1).into());
        let prod = geo.mul(&one_minus_q).unwrap();
        assert_eq!(prod.coeff(0).unwrap(), ZLaurent::one());
        assert!(prod.coeff(4).unwrap().is_zero());
        assert!(prod.coeff(8).unwrap().is_zero());
    }

    #[test]
    fn qs_mul_exponent_units() {
        // q^{1/4} z * q^{1/4} z^{-1} = q^{1/2} (denominator 4).
        let mut a = QSeries::new(4, 1, 100);
        a.add_term(1, 1, 1.into());
        let mut b = QSeries::new(4, 1, 100);
        b.add_term(1, -1, 1.into());
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.coeff(2).unwrap(), ZLaurent::one());
        assert_eq!(prod.num_terms(), 1);
    }

    #[test]
    fn qs_denominator_mismatch() {
        let a = QSeries::new(8, 0, 10);
        let b = QSeries::new(12, 0, 10);
        assert!(matches!(a.mul(&b), Err(Error::ModelMismatch { .. })));
    }

    #[test]
    fn qs_mul_poly_shift_and_identity() {
        let mut chi = QSeries::new(4, 0, 40);
        for k in 0..10 {
            chi.add_term(4 * k, 0, 1.into());
        }
        let qinv = QPoly::monomial(4, -4, 0, 1);
        let shifted = chi.mul_poly(&qinv).unwrap();
        assert_eq!(shifted.trunc(), 36);
        assert_eq!(shifted.min_exp(), -4);

        let one = QPoly::one(4);
        assert_eq!(chi.mul_poly(&one).unwrap(), chi);
    }

    #[test]
    fn qs_mul_poly_margin() {
        // Desired order q^4 needs the input known to q^5 when the factor
        // reaches down to q^{-1}: 1+q+q^2+q^3+q^4 times (q^{-1}+1).
        let mut a = QSeries::new(4, 0, 20);
        for k in 0..5 {
            a.add_term(4 * k, 0, 1.into());
        }
        let mut k = QPoly::zero(4);
        k.add_term(-4, 0, 1.into());
        k.add_term(0, 0, 1.into());
        let prod = a.mul_poly_to(&k, 16).unwrap();
        assert_eq!(prod.trunc(), 16);
        assert_eq!(prod.coeff(-4).unwrap(), ZLaurent::one());
        for e in [0, 4, 8, 12] {
            assert_eq!(prod.coeff(e).unwrap(), ZLaurent::constant(2), "at q-exp {e}");
        }
        assert!(prod.coeff(16).is_err());

        // Insufficient margin reports the required order.
        let short = a.truncate(12);
        match short.mul_poly_to(&k, 16) {
            Err(Error::Truncation { required, .. }) => assert_eq!(required, 20),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn qs_zero_poly_times_series_is_exact_zero() {
        let mut a = QSeries::new(4, 0, 12);
        a.add_term(0, 0, 1.into());
        let z = QPoly::zero(4);
        let prod = a.mul_poly(&z).unwrap();
        assert!(prod.is_zero());
        assert_eq!(prod.trunc(), EXACT);
        // Adding the exact zero must not shrink the window.
        let sum = a.add(&prod).unwrap();
        assert_eq!(sum.trunc(), 12);
    }

    #[test]
    fn qpoly_substitute_qinv() {
        let mut k = QPoly::zero(12);
        k.add_term(24, 0, 1.into());
        k.add_term(12, 0, 1.into());
        k.add_term(0, 0, 1.into());
        let inv = k.substitute_qinv();
        assert_eq!(inv.coeff_qz(-24, 0), BigInt::one());
        assert_eq!(inv.coeff_qz(-12, 0), BigInt::one());
        assert_eq!(inv.coeff_qz(0, 0), BigInt::one());

        // q^{3/4}(z + z^{-1}) at p = 3: exponent 9 over denominator 12.
        let mut f = QPoly::zero(12);
        f.add_term(9, 1, 1.into());
        f.add_term(9, -1, 1.into());
        let finv = f.substitute_qinv();
        assert_eq!(finv.coeff_qz(-9, 1), BigInt::one());
        assert_eq!(finv.coeff_qz(-9, -1), BigInt::one());

        assert!(QPoly::zero(12).substitute_qinv().is_zero());
        assert_eq!(f.substitute_qinv().substitute_qinv(), f);
    }

    #[test]
    fn record_round_trip() {
        let mut k = QPoly::zero(12);
        k.add_term(9, 1, 1.into());
        k.add_term(9, -1, 1.into());
        k.add_term(-3, 0, BigInt::from(-7));
        let records = k.to_records();
        let back = QPoly::from_records(12, &records).unwrap();
        assert_eq!(back, k);

        let json = serde_json::to_string(&records).unwrap();
        let parsed: Vec<TermRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn coeff_beyond_trunc_errors() {
        let s = QSeries::new(4, 0, 8);
        assert!(s.coeff(7).is_ok());
        assert!(matches!(s.coeff(8), Err(Error::Truncation { .. })));
    }
}
