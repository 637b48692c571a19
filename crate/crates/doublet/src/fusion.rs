//! The fusion ring on the simple objects `X_1..X_p` and projective covers
//! `P_1..P_{p-1}` (with `P_p` identified with the Steinberg module `X_p`),
//! together with graded decompositions of tensor powers.
//!
//! Products are computed through a Verma-expansion calculus: each object is
//! the class of one or two Verma objects `V_j`, Verma classes multiply by
//! the free Clebsch-Gordan rule, and indices beyond `p` reduce through the
//! reflection walls
//!
//! ```text
//!   V_{kp}     = k * P_p,
//!   V_{kp + t} = k * P_{p-t} - V_{kp - t},    1 <= t <= p-1.
//! ```
//!
//! This reproduces the simple-by-simple product table exactly and is
//! consistent with every closed-form tensor-power decomposition; see the
//! unit tests, which pin a table of golden products derived from those
//! closed forms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::kostka;
use crate::model::{ModelParams, NVector};
use crate::series::QPoly;
use crate::Error;

/// A basis object of the fusion ring. `P_p` is normalized to `X_p` on
/// construction (the Steinberg module is its own projective cover).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FusionObject {
    X(i64),
    P(i64),
}

impl FusionObject {
    pub fn simple(mp: &ModelParams, s: i64) -> Result<Self, Error> {
        check_s(mp, s, mp.p())?;
        Ok(FusionObject::X(s))
    }

    pub fn projective(mp: &ModelParams, s: i64) -> Result<Self, Error> {
        check_s(mp, s, mp.p())?;
        if s == mp.p() {
            Ok(FusionObject::X(s))
        } else {
            Ok(FusionObject::P(s))
        }
    }

    pub fn label(&self) -> i64 {
        match self {
            FusionObject::X(s) | FusionObject::P(s) => *s,
        }
    }
}

impl fmt::Display for FusionObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FusionObject::X(s) => write!(f, "X{s}"),
            FusionObject::P(s) => write!(f, "P{s}"),
        }
    }
}

fn check_s(mp: &ModelParams, s: i64, hi: i64) -> Result<(), Error> {
    if s < 1 || s > hi {
        return Err(Error::Param(format!(
            "object label must satisfy 1 <= s <= {hi} at p = {}, got {s}",
            mp.p()
        )));
    }
    Ok(())
}

/// Formal non-negative combination of fusion objects.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FusionVector(pub BTreeMap<FusionObject, BigInt>);

impl FusionVector {
    pub fn unit() -> Self {
        let mut v = FusionVector::default();
        v.add(FusionObject::X(1), BigInt::one());
        v
    }

    pub fn single(obj: FusionObject) -> Self {
        let mut v = FusionVector::default();
        v.add(obj, BigInt::one());
        v
    }

    pub fn add(&mut self, obj: FusionObject, mult: BigInt) {
        if mult.is_zero() {
            return;
        }
        let entry = self.0.entry(obj).or_insert_with(BigInt::zero);
        *entry += mult;
        if entry.is_zero() {
            self.0.remove(&obj);
        }
    }

    pub fn multiplicity(&self, obj: &FusionObject) -> BigInt {
        self.0.get(obj).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FusionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (obj, mult) in &self.0 {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            if mult == &BigInt::one() {
                write!(f, "{obj}")?;
            } else {
                write!(f, "{mult}*{obj}")?;
            }
        }
        Ok(())
    }
}

/// Verma-class content of a basis object.
fn verma_parts(p: i64, obj: FusionObject) -> Vec<i64> {
    match obj {
        FusionObject::X(s) => vec![s],
        FusionObject::P(s) if s == p => vec![p],
        FusionObject::P(s) => vec![s, 2 * p - s],
    }
}

/// Reduces a signed combination of Verma classes to the object basis.
/// Panics if a negative simple multiplicity survives, which would signal an
/// inconsistent reduction.
fn reduce_verma(p: i64, mut mu: BTreeMap<i64, BigInt>) -> FusionVector {
    use num_traits::Signed;
    let mut out = FusionVector::default();
    while let Some((&j, _)) = mu.iter().next_back() {
        let c = mu.remove(&j).unwrap();
        if c.is_zero() {
            continue;
        }
        if j < p {
            assert!(!c.is_negative(), "negative simple multiplicity {c} at V_{j}");
            out.add(FusionObject::X(j), c);
            continue;
        }
        let k = j / p;
        let t = j - k * p;
        if t == 0 {
            // V_{kp} = k P_p.
            out.add(FusionObject::X(p), BigInt::from(k) * &c);
        } else {
            // V_{kp+t} = k P_{p-t} - V_{kp-t}.
            out.add(FusionObject::P(p - t), BigInt::from(k) * &c);
            let entry = mu.entry(k * p - t).or_insert_with(BigInt::zero);
            *entry -= &c;
        }
    }
    out
}

/// Fusion product of two basis objects.
pub fn tensor(mp: &ModelParams, a: FusionObject, b: FusionObject) -> FusionVector {
    let p = mp.p();
    let mut mu: BTreeMap<i64, BigInt> = BTreeMap::new();
    for &i in &verma_parts(p, a) {
        for &j in &verma_parts(p, b) {
            // Clebsch-Gordan: V_i V_j = V_{|i-j|+1} + ... + V_{i+j-1}.
            let mut l = (i - j).abs() + 1;
            while l < i + j {
                *mu.entry(l).or_insert_with(BigInt::zero) += 1;
                l += 2;
            }
        }
    }
    reduce_verma(p, mu)
}

/// `X_r (x) X_s`.
pub fn tensor_xx(mp: &ModelParams, r: i64, s: i64) -> Result<FusionVector, Error> {
    check_s(mp, r, mp.p())?;
    check_s(mp, s, mp.p())?;
    Ok(tensor(mp, FusionObject::X(r), FusionObject::X(s)))
}

/// `X_r (x) P_s` with `s <= p-1`.
pub fn tensor_xp(mp: &ModelParams, r: i64, s: i64) -> Result<FusionVector, Error> {
    check_s(mp, r, mp.p())?;
    check_s(mp, s, mp.p() - 1)?;
    Ok(tensor(mp, FusionObject::X(r), FusionObject::P(s)))
}

/// `P_r (x) P_s` with `r, s <= p-1`; symmetric in its arguments.
pub fn tensor_pp(mp: &ModelParams, r: i64, s: i64) -> Result<FusionVector, Error> {
    check_s(mp, r, mp.p() - 1)?;
    check_s(mp, s, mp.p() - 1)?;
    Ok(tensor(mp, FusionObject::P(r), FusionObject::P(s)))
}

/// Bilinear extension of the product to formal combinations.
pub fn tensor_vectors(mp: &ModelParams, a: &FusionVector, b: &FusionVector) -> FusionVector {
    let mut out = FusionVector::default();
    for (oa, ma) in &a.0 {
        for (ob, mb) in &b.0 {
            let prod = tensor(mp, *oa, *ob);
            for (obj, mult) in prod.0 {
                out.add(obj, mult * ma * mb);
            }
        }
    }
    out
}

/// Ungraded decomposition of `X_2^{n_2} (x) ... (x) X_p^{n_p}`, folding the
/// factors left to right.
pub fn decompose_power(mp: &ModelParams, n: &NVector) -> Result<FusionVector, Error> {
    if n.len() != (mp.p() - 1) as usize {
        return Err(Error::Param(format!(
            "n must have {} components, got {}",
            mp.p() - 1,
            n.len()
        )));
    }
    let mut acc = FusionVector::unit();
    for (i, &count) in n.0.iter().enumerate() {
        let factor = FusionVector::single(FusionObject::X(i as i64 + 2));
        for _ in 0..count {
            acc = tensor_vectors(mp, &factor, &acc);
        }
    }
    Ok(acc)
}

/// Graded decomposition: multiplicity polynomials (in `q^{-1}`) attached to
/// each summand of the tensor power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDecomposition(pub BTreeMap<FusionObject, QPoly>);

impl GradedDecomposition {
    /// Forgets the grading: every polynomial evaluated at `q = z = 1`.
    pub fn ungraded(&self) -> FusionVector {
        let mut out = FusionVector::default();
        for (obj, poly) in &self.0 {
            out.add(*obj, poly.eval_one());
        }
        out
    }
}

/// Full graded decomposition of the tensor power labelled by `n`: the
/// irreducible summands carry the inverted Kostka-type polynomials, the
/// projective summands the inverted lattice-sum polynomials.
pub fn graded_decomposition(mp: &ModelParams, n: &NVector) -> Result<GradedDecomposition, Error> {
    let polys = kostka::multiplicities(mp, n)?;
    let mut out = BTreeMap::new();
    for s in 1..mp.p() {
        let kb = polys.kbar[(s - 1) as usize].substitute_qinv();
        if !kb.is_zero() {
            out.insert(FusionObject::X(s), kb);
        }
    }
    for s in 1..=mp.p() {
        let kh = polys.khat[(s - 1) as usize].substitute_qinv();
        if !kh.is_zero() {
            let obj = if s == mp.p() {
                FusionObject::X(s)
            } else {
                FusionObject::P(s)
            };
            out.insert(obj, kh);
        }
    }
    Ok(GradedDecomposition(out))
}

fn exact_div(value: BigInt, by: i64) -> BigInt {
    let (q, r) = num_integer_div_rem(value, BigInt::from(by));
    assert!(r.is_zero(), "closed form produced a non-integer multiplicity");
    q
}

fn num_integer_div_rem(a: BigInt, b: BigInt) -> (BigInt, BigInt) {
    let q = &a / &b;
    let r = &a - &q * &b;
    (q, r)
}

/// Closed-form multiplicity counts for `p = 2` and `p = 3`, evaluated
/// exactly in integer arithmetic. Valid for every non-negative `n`.
pub fn closed_form_counts(mp: &ModelParams, n: &NVector) -> Result<FusionVector, Error> {
    let p = mp.p();
    let mut out = FusionVector::default();
    match p {
        2 => {
            let k = n.0[0] as i64;
            if k == 0 {
                out.add(FusionObject::X(1), BigInt::one());
            } else if k % 2 == 1 {
                out.add(FusionObject::X(2), BigInt::from(2).pow((k - 1) as u32));
            } else {
                out.add(FusionObject::P(1), BigInt::from(2).pow((k - 2) as u32));
            }
        }
        3 => {
            let k = n.0[0] as i64;
            let m = n.0[1] as i64;
            let two_k = BigInt::from(2).pow(k as u32);
            let sign = if k % 2 == 0 { 1i64 } else { -1 };
            match m {
                0 => {
                    // Pure power of the two-dimensional generator.
                    out.add(FusionObject::X(1), BigInt::from((1 + sign) / 2));
                    out.add(FusionObject::X(2), BigInt::from((1 - sign) / 2));
                    out.add(
                        FusionObject::X(3),
                        exact_div(&two_k + BigInt::from(sign * (3 * k - 1)), 9),
                    );
                    out.add(
                        FusionObject::P(1),
                        exact_div(
                            &two_k * 8 + BigInt::from(sign * (19 - 48 * k + 18 * k * k) - 27),
                            216,
                        ),
                    );
                    out.add(
                        FusionObject::P(2),
                        exact_div(
                            &two_k * 16 + BigInt::from(sign * (11 + 12 * k - 18 * k * k) - 27),
                            216,
                        ),
                    );
                }
                1 => {
                    out.add(
                        FusionObject::X(3),
                        exact_div(&two_k + BigInt::from(2 * sign), 3),
                    );
                    out.add(
                        FusionObject::P(1),
                        exact_div(&two_k + BigInt::from(sign * (3 * k - 1)), 9),
                    );
                    out.add(
                        FusionObject::P(2),
                        exact_div(&two_k * 2 - BigInt::from(sign * (3 * k + 2)), 9),
                    );
                }
                2 => {
                    out.add(FusionObject::X(3), two_k.clone());
                    out.add(
                        FusionObject::P(1),
                        exact_div(&two_k + BigInt::from(2 * sign), 3),
                    );
                    out.add(
                        FusionObject::P(2),
                        exact_div(&two_k * 2 - BigInt::from(2 * sign), 3),
                    );
                }
                _ => {
                    let three = BigInt::from(3).pow((m - 3) as u32);
                    out.add(FusionObject::X(3), &two_k * &three * 3);
                    out.add(FusionObject::P(1), &two_k * &three);
                    out.add(FusionObject::P(2), &two_k * &three * 2);
                }
            }
        }
        other => return Err(Error::UnsupportedP(other)),
    }
    Ok(out)
}
