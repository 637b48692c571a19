//! q-binomial coefficients, q-Pochhammer inverses, the eta-product inverse
//! and q-supernomial coefficients.
//!
//! Gaussian binomials follow the vanishing convention: the value is the zero
//! polynomial whenever either argument is fractional or negative, or the
//! bottom exceeds the top. All half-integer arguments are passed as
//! twice-values so the guards stay in integer arithmetic.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::series::{QPoly, QSeries};

/// Dense coefficient vector of the Gaussian binomial `[n choose m]_q` for
/// integers `0 <= m <= n`; index `k` holds the coefficient of `q^k`.
///
/// Memoized globally: callers across threads share read access, which is the
/// hot path once the table is warm.
type GaussianCache = RwLock<HashMap<(u32, u32), Arc<Vec<BigInt>>>>;

fn gaussian_dense(n: u32, m: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<GaussianCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));

    let m = m.min(n - m); // symmetry halves the table
    if let Some(hit) = cache.read().unwrap().get(&(n, m)) {
        return hit.clone();
    }

    let value: Arc<Vec<BigInt>> = if m == 0 {
        Arc::new(vec![BigInt::one()])
    } else {
        // Pascal recurrence [n m] = [n-1 m-1] + q^m [n-1 m].
        let low = gaussian_dense(n - 1, m - 1);
        let high = if m < n {
            Some(gaussian_dense(n - 1, m))
        } else {
            None
        };
        let deg = (m * (n - m)) as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (k, c) in low.iter().enumerate() {
            out[k] += c;
        }
        if let Some(high) = high {
            for (k, c) in high.iter().enumerate() {
                out[k + m as usize] += c;
            }
        }
        Arc::new(out)
    };

    cache.write().unwrap().insert((n, m), value.clone());
    value
}

/// Gaussian binomial with twice-value arguments: `qbin2(2n, 2m)` is
/// `[n choose m]_q`. Returns the zero polynomial whenever `n` or `m` is
/// fractional or negative, or `m > n`.
pub fn qbin2(n2: i64, m2: i64, denom: i64) -> QPoly {
    if n2 < 0 || m2 < 0 || m2 > n2 || n2 % 2 != 0 || m2 % 2 != 0 {
        return QPoly::zero(denom);
    }
    let dense = gaussian_dense((n2 / 2) as u32, (m2 / 2) as u32);
    let mut out = QPoly::zero(denom);
    out.add_dense(&dense, 0, denom, 0, &BigInt::one());
    out
}

/// Gaussian binomial of integer arguments in ambient exponent units.
pub fn qbin(n: i64, m: i64, denom: i64) -> QPoly {
    qbin2(2 * n, 2 * m, denom)
}

pub(crate) fn gaussian_dense_guarded(n2: i64, m2: i64) -> Option<Arc<Vec<BigInt>>> {
    if n2 < 0 || m2 < 0 || m2 > n2 || n2 % 2 != 0 || m2 % 2 != 0 {
        return None;
    }
    Some(gaussian_dense((n2 / 2) as u32, (m2 / 2) as u32))
}

/// Dense expansion of `1 / ((1-q)(1-q^2)...(1-q^n))` to `len` coefficients.
pub(crate) fn pochhammer_inv_dense(n: u32, len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = BigInt::one();
    // Multiply by 1/(1-q^j): prefix-sum with stride j.
    for j in 1..=n as usize {
        if j >= len {
            break;
        }
        for k in j..len {
            let prev = out[k - j].clone();
            out[k] += prev;
        }
    }
    out
}

/// `1 / prod_{j=1}^{n} (1 - q^j)` as a series truncated at `trunc` (units of
/// `1/denom`; the expansion itself has integer `q`-powers).
pub fn qpochhammer_inv(n: u32, trunc: i64, denom: i64) -> QSeries {
    let len = dense_len(trunc, denom);
    let dense = pochhammer_inv_dense(n, len);
    dense_to_series(&dense, trunc, denom)
}

/// Partition numbers `p(0), ..., p(len-1)` by the pentagonal-number
/// recurrence.
pub(crate) fn partition_numbers(len: usize) -> Vec<BigInt> {
    let mut table = vec![BigInt::zero(); len];
    if len == 0 {
        return table;
    }
    table[0] = BigInt::one();
    for i in 1..len {
        let mut sum = BigInt::zero();
        let mut k: i64 = 1;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > i as i64 {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            sum += sign * &table[i - g1 as usize];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= i as i64 {
                sum += sign * &table[i - g2 as usize];
            }
            k += 1;
        }
        table[i] = sum;
    }
    table
}

/// `1 / prod_{n>=1} (1 - q^n)`: the partition generating function, truncated
/// at `trunc` in units of `1/denom`.
pub fn eta_product_inv(trunc: i64, denom: i64) -> QSeries {
    let dense = partition_numbers(dense_len(trunc, denom));
    dense_to_series(&dense, trunc, denom)
}

fn dense_len(trunc: i64, denom: i64) -> usize {
    if trunc <= 0 {
        0
    } else {
        ((trunc - 1) / denom + 1) as usize
    }
}

fn dense_to_series(dense: &[BigInt], trunc: i64, denom: i64) -> QSeries {
    let mut out = QSeries::new(denom, 0, trunc);
    for (k, c) in dense.iter().enumerate() {
        out.add_term(k as i64 * denom, 0, c.clone());
    }
    out
}

/// Weight `|m| = sum_k k*m[k]` of a supernomial column vector, stored
/// 1-based: position `k` (from 1) holds the number of `(k+1)`-dimensional
/// factors.
pub fn supernomial_weight(m: &[u32]) -> i64 {
    m.iter()
        .enumerate()
        .map(|(i, &v)| (i as i64 + 1) * v as i64)
        .sum()
}

/// q-supernomial coefficient for the column vector `m` (length `p-1`,
/// 1-based as above) at half-integer index `a = a2/2`.
///
/// Zero whenever `|2a| > |m|` or the parity of `2a` disagrees with `|m|`.
/// The sum over interior indices is finite: every Gaussian-binomial bottom
/// must stay within its top.
pub fn qsupernomial(m: &[u32], a2: i64, denom: i64) -> QPoly {
    let weight = supernomial_weight(m);
    let mut out = QPoly::zero(denom);
    if a2.abs() > weight || (a2 - weight).rem_euclid(2) != 0 {
        return out;
    }
    let cols = m.len();
    if cols == 0 {
        if a2 == 0 {
            return QPoly::one(denom);
        }
        return out;
    }
    // Row sums T_r = sum_l min(r,l) m_l of the weight matrix.
    let t: Vec<i64> = (1..=cols as i64)
        .map(|r| {
            m.iter()
                .enumerate()
                .map(|(i, &v)| r.min(i as i64 + 1) * v as i64)
                .sum()
        })
        .collect();
    let total: i64 = (a2 + weight) / 2;

    // j[cols-1] is bounded by m[cols-1]; each lower j by its binomial top.
    let mut j = vec![0i64; cols];
    fn recurse(
        m: &[u32],
        t: &[i64],
        j: &mut Vec<i64>,
        level: usize,
        remaining: i64,
        denom: i64,
        out: &mut QPoly,
    ) {
        let cols = m.len();
        if remaining < 0 {
            return;
        }
        if level == 0 {
            // Last slot: j[0] forced by the total constraint.
            j[0] = remaining;
            let top = m[0] as i64 + if cols > 1 { j[1] } else { 0 };
            if j[0] > top {
                return;
            }
            let mut exponent = 0i64;
            for i in 0..cols.saturating_sub(1) {
                exponent += (t[i + 1] - t[i] - j[i + 1]) * j[i];
            }
            let mut dense: Vec<BigInt> = vec![BigInt::one()];
            for i in 0..cols {
                let top_i = m[i] as i64 + if i + 1 < cols { j[i + 1] } else { 0 };
                match crate::qcomb::gaussian_dense_guarded(2 * top_i, 2 * j[i]) {
                    Some(b) => dense = dense_mul(&dense, &b),
                    None => return,
                }
            }
            out.add_dense(&dense, exponent * denom, denom, 0, &BigInt::one());
            return;
        }
        let top = m[level] as i64 + if level + 1 < cols { j[level + 1] } else { 0 };
        for v in 0..=top.min(remaining) {
            j[level] = v;
            recurse(m, t, j, level - 1, remaining - v, denom, out);
        }
    }
    recurse(m, &t, &mut j, cols - 1, total, denom, &mut out);
    out
}

pub(crate) fn dense_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    out
}
