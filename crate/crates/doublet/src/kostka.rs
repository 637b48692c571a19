//! Multiplicity polynomials of tensor-power decompositions: the projective
//! multiplicities (a Gordon-matrix lattice sum), the irreducible
//! multiplicities (a shifted level-restricted Kostka polynomial), and their
//! alternating-sum counterparts built from q-supernomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::model::{v_irr, ModelParams, NVector};
use crate::qcomb::{dense_mul, gaussian_dense_guarded, qsupernomial, supernomial_weight};
use crate::series::{QPoly, ZLaurent};
use crate::Error;

fn check_range(mp: &ModelParams, ell: i64, hi: i64) -> Result<(), Error> {
    if ell < 1 || ell > hi {
        return Err(Error::Param(format!(
            "label must satisfy 1 <= ell <= {hi} at p = {}, got {ell}",
            mp.p()
        )));
    }
    Ok(())
}

/// Twice the vector `(1/2) m A - v_ell - v_1` with `m = (0, 0, n_2...n_p)`:
/// the Gaussian-binomial tops of the lattice sum are this minus `s A - s`.
fn top_base2(mp: &ModelParams, ell: i64, n: &NVector) -> Result<Vec<i64>, Error> {
    let u2 = crate::model::u_of_n(mp, n)?; // twice (1/2) m A
    let vl2 = v_irr(mp, ell)?;
    let v12 = mp.v1_2();
    Ok((0..mp.dim())
        .map(|a| u2.0[a] - vl2.0[a] - v12.0[a])
        .collect())
}

/// Graded multiplicity of the projective summand `P_ell` in the tensor
/// power labelled by `n`, before the `q -> q^{-1}` substitution of the
/// decomposition. Exact lattice sum
/// `sum_s z^{s_+ - s_-} q^{(1/2) s A s + v_ell . s} prod_a [top_a, s_a]_q`
/// over the finite box where no binomial guard fires.
pub fn khat(mp: &ModelParams, ell: i64, n: &NVector) -> Result<QPoly, Error> {
    khat_capped(mp, ell, n, None)
}

/// Like [`khat`] but discards everything at or above `cap` (units of
/// `1/(4p)`) when a cap is given: exponents only grow along the lattice
/// walk, so a head window can be computed for very large `n` without
/// materializing the full polynomial.
pub fn khat_capped(
    mp: &ModelParams,
    ell: i64,
    n: &NVector,
    cap: Option<i64>,
) -> Result<QPoly, Error> {
    check_range(mp, ell, mp.p())?;
    let denom = mp.denom();
    let dim = mp.dim();
    let base2 = top_base2(mp, ell, n)?;
    let vl2 = v_irr(mp, ell)?;

    // s_b * A2_{ab} <= base2_a for every a bounds each coordinate; entries
    // of A2 are at least 1.
    let bound: Vec<i64> = (0..dim)
        .map(|b| {
            (0..dim)
                .map(|a| {
                    if base2[a] < 0 {
                        0
                    } else {
                        base2[a] / mp.a2(a, b)
                    }
                })
                .min()
                .unwrap_or(0)
        })
        .collect();

    struct Ctx<'a> {
        mp: &'a ModelParams,
        base2: &'a [i64],
        vl2: &'a [i64],
        bound: &'a [i64],
        denom: i64,
        cap: Option<i64>,
    }

    // A term survives its binomial guards only if (s A2)_a <= base2_a for
    // every slot, so the partial row sums prune the search exactly. The
    // partial exponent is monotone along the walk (all matrix entries and
    // linear coefficients are non-negative), so a cap prunes too.
    fn descend(
        ctx: &Ctx,
        coords: &mut Vec<i64>,
        partial_sa2: &[i64],
        partial_e: i64,
        out: &mut QPoly,
    ) {
        let dim = ctx.mp.dim();
        let depth = coords.len();
        if depth == dim {
            // tops2_a = base2_a - (s A2)_a + 2 s_a; fractional or negative
            // tops vanish via the guard.
            let mut dense: Vec<BigInt> = vec![BigInt::one()];
            for a in 0..dim {
                let top2 = ctx.base2[a] - partial_sa2[a] + 2 * coords[a];
                match gaussian_dense_guarded(top2, 2 * coords[a]) {
                    Some(b) => dense = dense_mul(&dense, &b),
                    None => return,
                }
                if let Some(cap) = ctx.cap {
                    let keep = ((cap - partial_e) / ctx.denom + 1).max(0) as usize;
                    dense.truncate(keep);
                    if dense.is_empty() {
                        return;
                    }
                }
            }
            let zexp = coords[0] - coords[1];
            out.add_dense(&dense, partial_e, ctx.denom, zexp, &BigInt::one());
            return;
        }
        let p = ctx.mp.p();
        for v in 0..=ctx.bound[depth] {
            let next: Vec<i64> = (0..dim)
                .map(|a| partial_sa2[a] + ctx.mp.a2(a, depth) * v)
                .collect();
            if (0..dim).any(|a| next[a] > ctx.base2[a]) {
                // All matrix entries are positive, so larger v only worsens it.
                break;
            }
            // Exponent increment: diagonal + cross with chosen coordinates + linear.
            let mut de = p * ctx.mp.a2(depth, depth) * v * v + 2 * p * ctx.vl2[depth] * v;
            for (b, &sb) in coords.iter().enumerate() {
                de += 2 * p * ctx.mp.a2(depth, b) * v * sb;
            }
            let e = partial_e + de;
            if let Some(cap) = ctx.cap {
                if e > cap {
                    break;
                }
            }
            coords.push(v);
            descend(ctx, coords, &next, e, out);
            coords.pop();
        }
    }

    let ctx = Ctx {
        mp,
        base2: &base2,
        vl2: &vl2.0,
        bound: &bound,
        denom,
        cap,
    };

    // Parallel over the two outermost coordinates; exact addition merges
    // safely.
    let mut tops: Vec<(i64, i64)> = Vec::new();
    for s0 in 0..=bound[0] {
        for s1 in 0..=bound[1] {
            tops.push((s0, s1));
        }
    }
    let merged: BTreeMap<(i64, i64), BigInt> = crate::map_merge(
        tops,
        |(s0, s1)| {
            let mut local = QPoly::zero(denom);
            let p = mp.p();
            let partial: Vec<i64> = (0..dim)
                .map(|a| mp.a2(a, 0) * s0 + mp.a2(a, 1) * s1)
                .collect();
            let e01 = p * (mp.a2(0, 0) * s0 * s0 + mp.a2(1, 1) * s1 * s1 + 2 * mp.a2(0, 1) * s0 * s1)
                + 2 * p * (vl2.0[0] * s0 + vl2.0[1] * s1);
            let within_cap = cap.is_none_or(|c| e01 <= c);
            if within_cap && (0..dim).all(|a| partial[a] <= base2[a]) {
                let mut coords = vec![s0, s1];
                descend(&ctx, &mut coords, &partial, e01, &mut local);
            }
            let mut map = BTreeMap::new();
            for (&q, zl) in local.iter() {
                for (&z, c) in zl.iter() {
                    map.insert((q, z), c.clone());
                }
            }
            map
        },
        |acc, part| {
            for (k, v) in part {
                let entry = acc.entry(k).or_insert_with(BigInt::zero);
                *entry += v;
            }
        },
    );

    let mut out = QPoly::zero(denom);
    for ((q, z), c) in merged {
        out.add_term(q, z, c);
    }
    Ok(out)
}

/// Standard level-restricted Kostka polynomial `K^{(k)}_{ell, u}`:
/// sum over non-negative `s` with `2|s| = |u| - ell`, weight matrix
/// `min(i,j)`, linear part `v_i = max(i - k + ell, 0)`.
pub fn kostka_level_restricted(k: usize, ell: i64, u: &[u32], denom: i64) -> QPoly {
    assert_eq!(u.len(), k, "u must have k components");
    let mut out = QPoly::zero(denom);
    let total: i64 = u.iter().enumerate().map(|(i, &v)| (i as i64 + 1) * v as i64).sum();
    if total < ell || (total - ell) % 2 != 0 {
        return out;
    }
    let target = (total - ell) / 2;
    if k == 0 {
        if target == 0 {
            return QPoly::one(denom);
        }
        return out;
    }
    let v: Vec<i64> = (1..=k as i64).map(|i| (i - k as i64 + ell).max(0)).collect();

    fn abar(i: i64, j: i64) -> i64 {
        i.min(j)
    }

    fn descend(
        k: usize,
        u: &[u32],
        v: &[i64],
        target: i64,
        s: &mut Vec<i64>,
        out: &mut QPoly,
        denom: i64,
    ) {
        let depth = s.len();
        if depth == k {
            let total: i64 = s.iter().enumerate().map(|(i, &x)| (i as i64 + 1) * x).sum();
            if total != target {
                return;
            }
            let mut dense: Vec<BigInt> = vec![BigInt::one()];
            for a in 0..k {
                // top_a = e_a . ((u - 2s) Abar - v + s)
                let mut top = 0i64;
                for i in 0..k {
                    top += (u[i] as i64 - 2 * s[i]) * abar(i as i64 + 1, a as i64 + 1);
                }
                top += -v[a] + s[a];
                match gaussian_dense_guarded(2 * top, 2 * s[a]) {
                    Some(b) => dense = dense_mul(&dense, &b),
                    None => return,
                }
            }
            let mut quad = 0i64;
            for i in 0..k {
                for j in 0..k {
                    quad += s[i] * s[j] * abar(i as i64 + 1, j as i64 + 1);
                }
            }
            let lin: i64 = (0..k).map(|i| v[i] * s[i]).sum();
            out.add_dense(&dense, (quad + lin) * denom, denom, 0, &BigInt::one());
            return;
        }
        // Weighted coordinate bound: (depth+1) * s_depth <= remaining weight.
        let used: i64 = s.iter().enumerate().map(|(i, &x)| (i as i64 + 1) * x).sum();
        let maxv = (target - used) / (depth as i64 + 1);
        for x in 0..=maxv.max(0) {
            s.push(x);
            descend(k, u, v, target, s, out, denom);
            s.pop();
        }
    }

    let mut s = Vec::new();
    descend(k, u, &v, target, &mut s, &mut out, denom);
    out
}

/// Graded multiplicity of the irreducible summand `X_ell` (`ell < p`):
/// zero when `n_p > 0`, otherwise the level `p-2` restricted Kostka
/// polynomial of the shortened vector with a grading shift.
pub fn kbar(mp: &ModelParams, ell: i64, n: &NVector) -> Result<QPoly, Error> {
    check_range(mp, ell, mp.p() - 1)?;
    let denom = mp.denom();
    if *n.0.last().unwrap_or(&0) > 0 {
        return Ok(QPoly::zero(denom));
    }
    let weight = n.weight();
    let k = (mp.p() - 2) as usize;
    let shorter = &n.0[..k];
    let inner = kostka_level_restricted(k, ell - 1, shorter, denom);
    // Prefactor q^{(ell - |n| - 1)/2}; the inner polynomial vanishes unless
    // the exponent is an integer.
    let shift = 2 * mp.p() * (ell - weight - 1);
    Ok(inner.shift_q(shift))
}

/// All multiplicity polynomials of one tensor power: `khat[s]` for
/// `s = 1..p` and `kbar[s]` for `s = 1..p-1`.
#[derive(Clone, Debug)]
pub struct MultiplicityPolys {
    pub khat: Vec<QPoly>,
    pub kbar: Vec<QPoly>,
}

pub fn multiplicities(mp: &ModelParams, n: &NVector) -> Result<MultiplicityPolys, Error> {
    let khats = (1..=mp.p())
        .map(|s| khat(mp, s, n))
        .collect::<Result<Vec<_>, _>>()?;
    let kbars = (1..mp.p())
        .map(|s| kbar(mp, s, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MultiplicityPolys {
        khat: khats,
        kbar: kbars,
    })
}

/// Alternating-sum form of the projective multiplicity, assembled per
/// `z`-power from supernomial differences along the resolution of the
/// irreducible module. Agreement with [`khat`] is the numerical content of
/// the exactness conjecture for coinvariants.
pub fn khat_felder(mp: &ModelParams, s: i64, m: &NVector) -> Result<QPoly, Error> {
    check_range(mp, s, mp.p())?;
    let p = mp.p();
    let denom = mp.denom();
    let mvec = &m.0;
    let weight = supernomial_weight(mvec);
    let prefactor = p * (p - 2 - 2 * weight) - mp.delta_rs_units(1, s);

    // For fixed r, supernomial support pins w = j + n + r to a finite
    // window; enumerate the splits of w - r into two odd positive parts.
    // The window is the union of both alternating groups' supports.
    let w_lo = (-weight - s - 1).div_euclid(p) - 1;
    let w_hi = (weight + s + 1).div_euclid(p) + 1;

    let inner = |r: i64| -> QPoly {
        let mut acc = QPoly::zero(denom);
        for w in w_lo..=w_hi {
            let nj = w - r;
            if nj < 2 {
                continue;
            }
            // First group: supernomial difference at (-s -+ 1 + p w)/2.
            let diff_a = qsupernomial(mvec, -s - 1 + p * w, denom)
                .sub(&qsupernomial(mvec, -s + 1 + p * w, denom))
                .expect("same denominator");
            let diff_b = qsupernomial(mvec, s - 1 + p * w, denom)
                .sub(&qsupernomial(mvec, s + 1 + p * w, denom))
                .expect("same denominator");
            if diff_a.is_zero() && diff_b.is_zero() {
                continue;
            }
            let mut j = 1i64;
            while j < nj {
                let n = nj - j;
                if n >= 1 && n % 2 == 1 {
                    if !diff_a.is_zero() {
                        let e = prefactor + mp.delta_rs_units(j + r, s)
                            + mp.delta_rs_units(n, s - p * (j + r))
                            - mp.delta_rs_units(1, -s + p * (j + r + 1));
                        acc = acc.add(&diff_a.shift_q(e)).expect("same denom");
                    }
                    if !diff_b.is_zero() {
                        let e = prefactor + mp.delta_rs_units(j + r + 1, p - s)
                            + mp.delta_rs_units(n, -s - p * (j + r))
                            - mp.delta_rs_units(1, s + p * (j + r + 1));
                        acc = acc.sub(&diff_b.shift_q(e)).expect("same denom");
                    }
                }
                j += 2;
            }
        }
        acc
    };

    collect_z_scan(denom, weight, s, p, inner)
}

/// Simplified alternating form, valid when `m_p > 0`.
pub fn khat_felder_simplified(mp: &ModelParams, s: i64, m: &NVector) -> Result<QPoly, Error> {
    check_range(mp, s, mp.p())?;
    let p = mp.p();
    let denom = mp.denom();
    if *m.0.last().unwrap_or(&0) == 0 {
        return Err(Error::Param(
            "the simplified alternating form requires m_p > 0".into(),
        ));
    }
    let mut shorter = m.0.clone();
    *shorter.last_mut().unwrap() -= 1;
    let weight = supernomial_weight(&shorter);
    let delta_1s = mp.delta_rs_units(1, s);

    let inner = |r: i64| -> QPoly {
        let mut acc = QPoly::zero(denom);
        let mut j = 1i64;
        loop {
            // Arguments -s + p(j+r) and s + p(j+r), twice the half-integer
            // supernomial index.
            let a1 = -s + p * (j + r);
            let a2 = s + p * (j + r);
            if a1 > weight && a2 > weight {
                break;
            }
            let t1 = qsupernomial(&shorter, a1, denom);
            if !t1.is_zero() {
                let e = mp.delta_rs_units(j + r, s) - delta_1s;
                acc = acc.add(&t1.shift_q(e)).expect("same denom");
            }
            let t2 = qsupernomial(&shorter, a2, denom);
            if !t2.is_zero() {
                let e = mp.delta_rs_units(j + r + 1, p - s) - delta_1s;
                acc = acc.sub(&t2.shift_q(e)).expect("same denom");
            }
            j += 2;
        }
        acc
    };

    collect_z_scan(denom, weight, s, p, inner)
}

/// Assembles `sum_{r>=0} inner(r) (z^r + z^{-r})` (with the `r = 0` slice
/// taken once): the alternating coefficient formulas are oriented along the
/// resolution direction and give `[z^r]` for non-negative `r`; the negative
/// powers are filled in by the `z`-symmetry of the multiplicity polynomial.
fn collect_z_scan(
    denom: i64,
    weight: i64,
    s: i64,
    p: i64,
    inner: impl Fn(i64) -> QPoly,
) -> Result<QPoly, Error> {
    let mut r_hi = (weight + s) / p + 4;
    let mut out = QPoly::zero(denom);
    let mut r = 0i64;
    while r <= r_hi {
        let part = inner(r);
        if !part.is_zero() {
            for (&q, zl) in part.iter() {
                for (&z0, c) in zl.iter() {
                    debug_assert_eq!(z0, 0);
                    out.add_term(q, r, c.clone());
                    if r > 0 {
                        out.add_term(q, -r, c.clone());
                    }
                }
            }
            if r >= r_hi - 1 {
                r_hi += 2;
            }
        }
        r += 1;
    }
    Ok(out)
}

/// Steinberg multiplicity via the manifestly `z`-symmetric double sum.
pub fn khat_steinberg(mp: &ModelParams, m: &NVector) -> Result<QPoly, Error> {
    let p = mp.p();
    let denom = mp.denom();
    let mvec = &m.0;
    let weight = supernomial_weight(mvec);
    let delta_1p = mp.delta_rs_units(1, p);
    // -(|m| - p + 1)/2 in units.
    let shift = -2 * p * (weight - p + 1);
    let mut out = QPoly::zero(denom);

    // r = 0 piece.
    let mut j = 0i64;
    loop {
        let a_lo = 2 * p * j + p - 1; // twice pj + (p-1)/2
        let a_hi = 2 * p * j + p + 1;
        if a_lo > weight && a_hi > weight {
            break;
        }
        let diff = qsupernomial(mvec, a_lo, denom)
            .sub(&qsupernomial(mvec, a_hi, denom))
            .expect("same denom");
        if !diff.is_zero() {
            let e = mp.delta_rs_units(2 * j + 1, p) - delta_1p + shift + 4 * p * p * j;
            out = out.add(&diff.shift_q(e)).expect("same denom");
        }
        j += 1;
    }

    // r >= 1: (z^r + z^{-r}) pieces.
    let mut r = 1i64;
    loop {
        let mut any = false;
        let mut j = 0i64;
        let mut row = QPoly::zero(denom);
        loop {
            let a_lo = 2 * p * j + p * r + p - 1;
            let a_hi = 2 * p * j + p * r + p + 1;
            if a_lo > weight && a_hi > weight {
                break;
            }
            let diff = qsupernomial(mvec, a_lo, denom)
                .sub(&qsupernomial(mvec, a_hi, denom))
                .expect("same denom");
            if !diff.is_zero() {
                any = true;
                let e = mp.delta_rs_units(2 * j + r + 1, p) - delta_1p
                    + shift
                    + 4 * p * p * j
                    + 2 * p * p * r;
                row = row.add(&diff.shift_q(e)).expect("same denom");
            }
            j += 1;
        }
        for (&q, zl) in row.iter() {
            for (&z0, c) in zl.iter() {
                debug_assert_eq!(z0, 0);
                out.add_term(q, r, c.clone());
                out.add_term(q, -r, c.clone());
            }
        }
        if !any && 2 * p * r + p - 1 > weight {
            break;
        }
        r += 1;
    }
    Ok(out)
}

/// Steinberg multiplicity in its short form, valid when `m_p > 0`:
/// `sum_j z^j q^{Delta_{j+1,p} - Delta_{1,p}}` times the supernomial of the
/// shortened vector at index `p j / 2`.
pub fn khat_steinberg_simplified(mp: &ModelParams, m: &NVector) -> Result<QPoly, Error> {
    let p = mp.p();
    let denom = mp.denom();
    if *m.0.last().unwrap_or(&0) == 0 {
        return Err(Error::Param(
            "the simplified Steinberg form requires m_p > 0".into(),
        ));
    }
    let mut shorter = m.0.clone();
    *shorter.last_mut().unwrap() -= 1;
    let weight = supernomial_weight(&shorter);
    let delta_1p = mp.delta_rs_units(1, p);
    let mut out = QPoly::zero(denom);
    let jmax = weight / p + 1;
    for j in -jmax..=jmax {
        let t = qsupernomial(&shorter, p * j, denom);
        if t.is_zero() {
            continue;
        }
        let e = mp.delta_rs_units(j + 1, p) - delta_1p;
        for (&q, zl) in t.iter() {
            for (&z0, c) in zl.iter() {
                debug_assert_eq!(z0, 0);
                out.add_term(q + e, j, c.clone());
            }
        }
    }
    Ok(out)
}

/// Convenience: evaluate a multiplicity polynomial at `q = z = 1`.
pub fn ungraded_count(poly: &QPoly) -> BigInt {
    poly.eval_one()
}

/// Convenience: the `z`-graded multiplicity at `q = 1`.
pub fn z_graded_count(poly: &QPoly) -> ZLaurent {
    poly.eval_q_one()
}
