//! Model data for a fixed `p >= 2`: the Gordon matrix, conformal
//! dimensions, central charge and the standard label vectors of induced
//! modules.
//!
//! Index order is `(+, -, 1, ..., p-1)` everywhere. Label-vector components
//! are half-integers by construction and are stored as twice-values; the
//! Gordon matrix is stored doubled for the same reason.

use crate::Error;

/// Sign selecting one of the two Verma-module structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(Error::Param(format!("bad sign {other:?}, expected + or -"))),
        }
    }
}

/// A `p+1`-component label vector in twice-value storage, indexed
/// `(+, -, 1, ..., p-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelVector(pub Vec<i64>);

impl LabelVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Components as exact halves: `(numerator, 2)`.
    pub fn halves(&self) -> &[i64] {
        &self.0
    }
}

/// Non-negative multiplicities `(n_2, ..., n_p)` of the tensor factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NVector(pub Vec<u32>);

impl NVector {
    pub fn zeros(p: i64) -> Self {
        NVector(vec![0; (p - 1) as usize])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The weight `|n| = sum_{j=2}^{p} (j-1) n_j`.
    pub fn weight(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as i64 + 1) * v as i64)
            .sum()
    }

    /// Component for the factor `X_j`, `2 <= j <= p`.
    pub fn get(&self, j: i64) -> u32 {
        self.0[(j - 2) as usize]
    }
}

/// Parameters of the model at a fixed `p`: everything downstream is derived
/// from these.
#[derive(Clone, Debug)]
pub struct ModelParams {
    p: i64,
    /// Twice the Gordon matrix, `(p+1) x (p+1)`.
    a2: Vec<Vec<i64>>,
    /// Four times the conformal dimensions of the generators.
    delta4: Vec<i64>,
    /// Twice the vector `v_1`.
    v1_2: Vec<i64>,
}

/// Builds the model data for `p >= 2`.
pub fn build_model(p: i64) -> Result<ModelParams, Error> {
    if p < 2 {
        return Err(Error::Param(format!("p must be at least 2, got {p}")));
    }
    let dim = (p + 1) as usize;
    let entry = |i: usize, j: usize| match (i, j) {
        (0..=1, 0..=1) => p,
        (0..=1, _) => 2 * (j as i64 - 1),
        (_, 0..=1) => 2 * (i as i64 - 1),
        _ => 4 * (i as i64 - 1).min(j as i64 - 1),
    };
    let a2: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| entry(i, j)).collect())
        .collect();
    let mut delta4 = vec![3 * p - 2, 3 * p - 2];
    for k in 1..p {
        delta4.push(8 * k);
    }
    let mut v1_2 = vec![p - 1, p - 1];
    for k in 1..p {
        v1_2.push(2 * k);
    }
    Ok(ModelParams { p, a2, delta4, v1_2 })
}

impl ModelParams {
    pub fn p(&self) -> i64 {
        self.p
    }

    /// The common exponent denominator `4p`.
    pub fn denom(&self) -> i64 {
        4 * self.p
    }

    pub fn dim(&self) -> usize {
        (self.p + 1) as usize
    }

    /// Twice the Gordon matrix entry.
    pub fn a2(&self, i: usize, j: usize) -> i64 {
        self.a2[i][j]
    }

    pub fn a2_matrix(&self) -> &[Vec<i64>] {
        &self.a2
    }

    /// Four times the conformal dimension of generator `i`.
    pub fn delta4(&self, i: usize) -> i64 {
        self.delta4[i]
    }

    /// Twice the vector `v_1 = ((p-1)/2, (p-1)/2, 1, 2, ..., p-1)`.
    pub fn v1_2(&self) -> LabelVector {
        LabelVector(self.v1_2.clone())
    }

    /// Central charge as an exact fraction `(numerator, p)`.
    pub fn central_charge(&self) -> (i64, i64) {
        (13 * self.p - 6 * self.p * self.p - 6, self.p)
    }

    /// Highest weight `Delta_{r,s}` in units of `1/(4p)`.
    pub fn delta_rs_units(&self, r: i64, s: i64) -> i64 {
        let p = self.p;
        p * p * (r * r - 1) + (s * s - 1) + 2 * p * (1 - r * s)
    }

    fn check_s(&self, s: i64) -> Result<(), Error> {
        if s < 1 || s > self.p {
            return Err(Error::Param(format!(
                "label s must satisfy 1 <= s <= {}, got {s}",
                self.p
            )));
        }
        Ok(())
    }
}

/// Label vector of the irreducible module `X_s`:
/// `u_s = ((s-1)/2, (s-1)/2, 1, 2, ..., s-1, s-1, ..., s-1)`.
pub fn u_vac(mp: &ModelParams, s: i64) -> Result<LabelVector, Error> {
    mp.check_s(s)?;
    let mut v = vec![s - 1, s - 1];
    for k in 1..mp.p {
        v.push(2 * k.min(s - 1));
    }
    Ok(LabelVector(v))
}

/// Label vector of the Verma module: the `+` form is
/// `((s-1)/2, (s-1)/2 + p - s, s-1, ..., s-1)`; the `-` form swaps the
/// first two components.
pub fn u_verma(mp: &ModelParams, s: i64, sign: Sign) -> Result<LabelVector, Error> {
    mp.check_s(s)?;
    let lo = s - 1;
    let hi = s - 1 + 2 * (mp.p - s);
    let (a, b) = match sign {
        Sign::Plus => (lo, hi),
        Sign::Minus => (hi, lo),
    };
    let mut v = vec![a, b];
    for _ in 1..mp.p {
        v.push(2 * (s - 1));
    }
    Ok(LabelVector(v))
}

/// Label vector `u_{s,r} = ((s-rp-1)/2, ((r+2)p-s-1)/2, s-1, ..., s-1)`.
/// At `r = 0` this is the `+` Verma label; negative `r` reaches the `-`
/// Verma labels of `X_{p-s}`.
pub fn u_sr(mp: &ModelParams, s: i64, r: i64) -> Result<LabelVector, Error> {
    mp.check_s(s)?;
    let mut v = vec![s - r * mp.p - 1, (r + 2) * mp.p - s - 1];
    for _ in 1..mp.p {
        v.push(2 * (s - 1));
    }
    Ok(LabelVector(v))
}

/// Label vector `u = (1/2) m A` for `m = (0, 0, n_2, ..., n_p)`; equal to
/// `sum_j n_j u_j` componentwise.
pub fn u_of_n(mp: &ModelParams, n: &NVector) -> Result<LabelVector, Error> {
    if n.len() != (mp.p - 1) as usize {
        return Err(Error::Param(format!(
            "n must have {} components, got {}",
            mp.p - 1,
            n.len()
        )));
    }
    let dim = mp.dim();
    let mut u2 = vec![0i64; dim];
    for (a, slot) in u2.iter_mut().enumerate() {
        let mut acc = 0i64;
        for (i, &cnt) in n.0.iter().enumerate() {
            // m lives in the H-slots 2..dim; slot i corresponds to row i+2.
            acc += cnt as i64 * mp.a2(i + 2, a);
        }
        debug_assert!(acc % 2 == 0);
        *slot = acc / 2;
    }
    Ok(LabelVector(u2))
}

/// `v = -u + v_1`, the exponent vector entering the fermionic character sum.
pub fn v_of_u(mp: &ModelParams, u: &LabelVector) -> LabelVector {
    LabelVector(
        mp.v1_2
            .iter()
            .zip(&u.0)
            .map(|(v1, u)| v1 - u)
            .collect(),
    )
}

/// The vector `v_s` attached to the irreducible character of `X_s`.
pub fn v_irr(mp: &ModelParams, s: i64) -> Result<LabelVector, Error> {
    Ok(v_of_u(mp, &u_vac(mp, s)?))
}
