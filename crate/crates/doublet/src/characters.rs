//! Character series: theta-form irreducible characters, their split into
//! the two triplet-algebra families, Gordon-matrix fermionic characters,
//! projective and Verma characters, and coinvariant characters.
//!
//! All characters are normalized by the conformal dimension of the cyclic
//! vector, so every series starts at `q^0` unless a grading shift is part of
//! its definition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::model::{u_verma, v_of_u, LabelVector, ModelParams, NVector, Sign};
use crate::qcomb::{eta_product_inv, pochhammer_inv_dense, qsupernomial, supernomial_weight};
use crate::series::{QPoly, QSeries, ZLaurent};
use crate::Error;

/// Which theta-index parity feeds the `+` family of triplet characters.
///
/// The two families partition the irreducible character by the parity of the
/// theta index `n`; the assignment below (`+` takes even `n`) is the one
/// under which the large-`n` limits of the multiplicity polynomials land on
/// the stated family for odd `p`. Flipping this constant swaps the families
/// everywhere.
pub const W_PLUS_TAKES_EVEN_THETA_INDEX: bool = true;

/// Character of the `n`-dimensional `sl(2)` multiplet: `n` powers of `z`
/// stepping by 2, symmetric about `z^0`.
fn sl2_multiplet(n: i64) -> ZLaurent {
    let mut out = ZLaurent::zero();
    let mut e = -(n - 1);
    while e < n {
        out.add_term(e, BigInt::from(1));
        e += 2;
    }
    out
}

/// Exponents of the two theta terms at index `n`, in units of `1/(4p)`:
/// `E_-(n) = (p n^2 - 2 n s + 2 s - p)/4` and `E_+` with the opposite middle
/// sign. `E_-(1) = 0` anchors the normalization.
fn theta_exponents(p: i64, n: i64, s: i64) -> (i64, i64) {
    let base = p * (p * n * n + 2 * s - p);
    (base - 2 * p * n * s, base + 2 * p * n * s)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ThetaParity {
    All,
    Even,
    Odd,
}

fn chi_theta_sum(mp: &ModelParams, s: i64, parity: ThetaParity, trunc: i64) -> QSeries {
    let denom = mp.denom();
    let eta_inv = eta_product_inv(trunc, denom);
    let mut out = QSeries::new(denom, 0, trunc);
    let mut n = 1i64;
    loop {
        let (e_minus, e_plus) = theta_exponents(mp.p(), n, s);
        if e_minus >= trunc {
            break;
        }
        let take = match parity {
            ThetaParity::All => true,
            ThetaParity::Even => n % 2 == 0,
            ThetaParity::Odd => n % 2 == 1,
        };
        if take {
            let multiplet = sl2_multiplet(n);
            for (&k, c) in eta_inv.iter() {
                let c0 = c.coeff(0);
                for (exp, sign) in [(e_minus, 1), (e_plus, -1)] {
                    let e = exp + k;
                    if e < trunc {
                        for (&z, cm) in multiplet.iter() {
                            out.add_term(e, z, cm * &c0 * sign);
                        }
                    }
                }
            }
        }
        n += 1;
    }
    out
}

/// Normalized character of the irreducible module `X_s` in theta form.
pub fn chi_irreducible(mp: &ModelParams, s: i64, trunc: i64) -> Result<QSeries, Error> {
    check_s(mp, s)?;
    Ok(chi_theta_sum(mp, s, ThetaParity::All, trunc))
}

/// One of the two triplet-algebra characters sitting inside `X_s`: the
/// restriction of the theta sum to indices of a single parity.
pub fn chi_w(mp: &ModelParams, s: i64, sign: Sign, trunc: i64) -> Result<QSeries, Error> {
    check_s(mp, s)?;
    let plus_parity = if W_PLUS_TAKES_EVEN_THETA_INDEX {
        ThetaParity::Even
    } else {
        ThetaParity::Odd
    };
    let parity = match sign {
        Sign::Plus => plus_parity,
        Sign::Minus => match plus_parity {
            ThetaParity::Even => ThetaParity::Odd,
            _ => ThetaParity::Even,
        },
    };
    Ok(chi_theta_sum(mp, s, parity, trunc))
}

fn check_s(mp: &ModelParams, s: i64) -> Result<(), Error> {
    if s < 1 || s > mp.p() {
        return Err(Error::Param(format!(
            "label s must satisfy 1 <= s <= {}, got {s}",
            mp.p()
        )));
    }
    Ok(())
}

/// Minimum over non-negative integers of the one-dimensional exponent
/// contribution `p*a2*n^2 + 2p*v2*n` (units of `1/(4p)`).
fn parabola_min(p: i64, a2: i64, v2: i64) -> i64 {
    if v2 >= 0 {
        return 0;
    }
    // Vertex at n = -v2/a2; check the two neighbouring integers.
    let f = |n: i64| p * a2 * n * n + 2 * p * v2 * n;
    let lo = (-v2) / a2;
    f(lo).min(f(lo + 1)).min(0)
}

fn coordinate_bound(p: i64, a2: i64, v2: i64, budget: i64) -> i64 {
    let f = |n: i64| p * a2 * n * n + 2 * p * v2 * n;
    // Walk past both the parabola dip and the budget crossing; the
    // sub-budget points then form a prefix of 0..n.
    let vertex = if v2 < 0 { -v2 / a2 + 1 } else { 0 };
    let mut n = 0;
    while f(n) < budget || n < vertex {
        n += 1;
        if n > 1_000_000 {
            panic!("runaway enumeration bound");
        }
    }
    n
}

/// Normalized character of the module induced from the label vector with
/// `v = -u + v_1`, as the Gordon-matrix lattice sum
/// `sum_n z^{n_+ - n_-} q^{(1/2) n A n + v.n} / prod_a (q)_{n_a}`.
///
/// The enumeration box is provably complete for the requested truncation:
/// off-diagonal entries of the Gordon matrix are non-negative, so the
/// exponent is bounded below by the sum of the one-dimensional parabolas.
pub fn chi_fermionic(mp: &ModelParams, v: &LabelVector, trunc: i64) -> QSeries {
    let p = mp.p();
    let denom = mp.denom();
    let dim = mp.dim();
    assert_eq!(v.len(), dim, "label vector has wrong length");

    let mins: Vec<i64> = (0..dim).map(|a| parabola_min(p, mp.a2(a, a), v.0[a])).collect();
    let floor: i64 = mins.iter().sum();
    if trunc <= floor {
        return QSeries::new(denom, floor, trunc);
    }
    // Suffix minima for pruning below.
    let mut suffix_min = vec![0i64; dim + 1];
    for a in (0..dim).rev() {
        suffix_min[a] = suffix_min[a + 1] + mins[a];
    }
    let bounds: Vec<i64> = (0..dim)
        .map(|a| {
            let budget = trunc - (floor - mins[a]);
            coordinate_bound(p, mp.a2(a, a), v.0[a], budget)
        })
        .collect();

    let poch_len = ((trunc - floor) / denom + 2) as usize;
    let poch: Vec<Vec<BigInt>> = (0..=bounds.iter().copied().max().unwrap_or(0))
        .map(|n| pochhammer_inv_dense(n as u32, poch_len))
        .collect();

    struct Ctx<'a> {
        mp: &'a ModelParams,
        v: &'a [i64],
        bounds: &'a [i64],
        suffix_min: &'a [i64],
        poch: &'a [Vec<BigInt>],
        trunc: i64,
        denom: i64,
    }

    // Depth-first over lattice coordinates; `exp` carries the exact partial
    // exponent including all cross terms among the chosen coordinates.
    fn descend(
        ctx: &Ctx,
        coords: &mut Vec<i64>,
        depth: usize,
        exp: i64,
        prefix: &[BigInt],
        out: &mut BTreeMap<i64, ZLaurent>,
    ) {
        let dim = ctx.mp.dim();
        if depth == dim {
            let zexp = coords[0] - coords[1];
            for (k, c) in prefix.iter().enumerate() {
                let e = exp + (k as i64) * ctx.denom;
                if e >= ctx.trunc {
                    break;
                }
                if !c.is_zero() {
                    out.entry(e).or_default().add_term(zexp, c.clone());
                }
            }
            return;
        }
        let p = ctx.mp.p();
        for n in 0..=ctx.bounds[depth] {
            let mut de = p * ctx.mp.a2(depth, depth) * n * n + 2 * p * ctx.v[depth] * n;
            for (b, &nb) in coords.iter().enumerate().take(depth) {
                de += 2 * p * ctx.mp.a2(depth, b) * n * nb;
            }
            let exp2 = exp + de;
            if exp2 + ctx.suffix_min[depth + 1] >= ctx.trunc {
                if de >= 0 && n > 0 {
                    // Exponent only grows with n from here on.
                    break;
                }
                continue;
            }
            coords.push(n);
            if n == 0 {
                descend(ctx, coords, depth + 1, exp2, prefix, out);
            } else {
                let updated = crate::qcomb::dense_mul(prefix, &ctx.poch[n as usize]);
                let cap = prefix.len().min(updated.len());
                descend(ctx, coords, depth + 1, exp2, &updated[..cap], out);
            }
            coords.pop();
        }
    }

    let ctx = Ctx {
        mp,
        v: &v.0,
        bounds: &bounds,
        suffix_min: &suffix_min,
        poch: &poch,
        trunc,
        denom,
    };

    let unit: Vec<BigInt> = {
        let mut u = vec![BigInt::zero(); poch_len];
        u[0] = BigInt::from(1);
        u
    };

    // Partition the two outermost coordinates; exact addition makes the
    // merge order immaterial.
    let mut tops: Vec<(i64, i64)> = Vec::new();
    for n0 in 0..=bounds[0] {
        for n1 in 0..=bounds[1] {
            tops.push((n0, n1));
        }
    }
    let terms = crate::map_merge(
        tops,
        |(n0, n1)| {
            let mut local = BTreeMap::new();
            let single = |a: usize, n: i64| p * mp.a2(a, a) * n * n + 2 * p * v.0[a] * n;
            let de = single(0, n0) + single(1, n1) + 2 * p * mp.a2(0, 1) * n0 * n1;
            if de + ctx.suffix_min[2] < ctx.trunc {
                let mut coords = vec![n0, n1];
                let prefix = match (n0, n1) {
                    (0, 0) => unit.clone(),
                    (_, 0) => ctx.poch[n0 as usize].clone(),
                    (0, _) => ctx.poch[n1 as usize].clone(),
                    _ => {
                        let full =
                            crate::qcomb::dense_mul(&ctx.poch[n0 as usize], &ctx.poch[n1 as usize]);
                        let cap = poch_len.min(full.len());
                        full[..cap].to_vec()
                    }
                };
                descend(&ctx, &mut coords, 2, de, &prefix, &mut local);
            }
            local
        },
        |acc: &mut BTreeMap<i64, ZLaurent>, part| {
            for (e, zl) in part {
                let entry = acc.entry(e).or_default();
                let merged = entry.add(&zl);
                *entry = merged;
            }
        },
    );

    let mut out = QSeries::new(denom, floor, trunc);
    for (e, zl) in terms {
        if !zl.is_zero() {
            out.add_zl(e, &zl);
        }
    }
    out
}

/// Character of the projective cover `P_s`. For `s < p` this is
/// `2 chi_s + q^{(2s-p)/4} (z + z^{-1}) chi_{p-s}`; the Steinberg cover is
/// the module itself, `psi_p = chi_p`.
pub fn psi_projective(mp: &ModelParams, s: i64, trunc: i64) -> Result<QSeries, Error> {
    check_s(mp, s)?;
    if s == mp.p() {
        return chi_irreducible(mp, s, trunc);
    }
    let shift = mp.p() * (2 * s - mp.p());
    let chi = chi_irreducible(mp, s, trunc)?;
    let two_chi = chi.add(&chi)?;
    let partner = chi_irreducible(mp, mp.p() - s, trunc - shift)?;
    let zfactor = ZLaurent::from_terms([(1, 1), (-1, 1)]);
    let shifted = partner.mul_monomial(shift, &zfactor);
    two_chi.add(&shifted.truncate(trunc))
}

/// Character of the Verma module: the fermionic sum with
/// `v = -u_verma(s, sign) + v_1`.
///
/// At `s = p` the two highest-weight structures coincide and the Verma
/// module is the Steinberg module itself; the degenerate label there is the
/// vacuum-family one (the constant tail of the generic label produces a
/// strictly larger induced module).
pub fn xi_verma(mp: &ModelParams, s: i64, sign: Sign, trunc: i64) -> Result<QSeries, Error> {
    check_s(mp, s)?;
    if s == mp.p() {
        return chi_irreducible(mp, s, trunc);
    }
    let v = v_of_u(mp, &u_verma(mp, s, sign)?);
    Ok(chi_fermionic(mp, &v, trunc))
}

/// Exact coinvariant character of the Verma module `Y^+_s` with respect to
/// the subalgebra labelled by `m`: a finite Laurent polynomial in `z` and
/// `q`. The minus structure is the image under `z -> z^{-1}`.
///
/// Evaluates the double sum over `r` and odd `j` with the inner `j`-sum
/// grouped per `z`-power; the scan stops once a widening margin of `r`
/// values on both sides contributes nothing.
pub fn xi_coinvariant_poly(
    mp: &ModelParams,
    s: i64,
    sign: Sign,
    m: &NVector,
) -> Result<QPoly, Error> {
    check_s(mp, s)?;
    let p = mp.p();
    let denom = mp.denom();
    let mvec: Vec<u32> = m.0.clone();
    let weight = supernomial_weight(&mvec);
    if weight == 0 {
        // Coinvariants with respect to the empty label are the whole
        // module; there is no polynomial to return.
        return Err(Error::Param(
            "coinvariant character requires a non-zero label vector m".into(),
        ));
    }
    // Global prefactor q^{(p-2-2|m|)/4 - 0} in units.
    let prefactor = p * (p - 2 - 2 * weight);
    let delta_1s = mp.delta_rs_units(1, s);

    let inner = |r: i64| -> QPoly {
        let mut acc = QPoly::zero(denom);
        // Supernomial arguments (-s + p(j+r) -+ 1)/2 must stay within the
        // weight window, bounding j for this r.
        let mut j = 1i64;
        loop {
            let w = j + r;
            let lo2 = -s + p * w - 1;
            let hi2 = -s + p * w + 1;
            if lo2 > weight && hi2 > weight {
                break;
            }
            if lo2 >= -weight || hi2 >= -weight {
                let diff = qsupernomial(&mvec, lo2, denom)
                    .sub(&qsupernomial(&mvec, hi2, denom))
                    .expect("same denominator");
                if !diff.is_zero() {
                    let e = prefactor + mp.delta_rs_units(r, s) - delta_1s
                        + mp.delta_rs_units(j, s - p * r)
                        - mp.delta_rs_units(1, -s + p * (r + 1));
                    acc = acc.add(&diff.shift_q(e)).expect("same denominator");
                }
            }
            j += 2;
        }
        acc
    };

    let mut out = QPoly::zero(denom);
    // Upward the inner sums vanish once the supernomial window is out of
    // reach; downward the per-z sums vanish beyond the finite support but
    // individual terms keep existing, so scan until a generous run of empty
    // rows and fail loudly if the support refuses to close.
    let quiet_margin = (weight + s) / p + 8;
    let mut r = 0i64;
    loop {
        let part = inner(r);
        if part.is_zero() && r > (weight + s + 1) / p + 1 {
            break;
        }
        add_z_row(&mut out, r, &part);
        r += 1;
    }
    let mut quiet = 0i64;
    let mut r = -1i64;
    while quiet < quiet_margin {
        let part = inner(r);
        if part.is_zero() {
            quiet += 1;
        } else {
            quiet = 0;
            add_z_row(&mut out, r, &part);
        }
        r -= 1;
        if r < -(weight + s + 64) {
            return Err(Error::Param(format!(
                "coinvariant support scan did not close by z^{r}; s={s}, m={:?}",
                m.0
            )));
        }
    }
    if sign == Sign::Minus {
        out = out.substitute_z_inv();
    }
    Ok(out)
}

fn add_z_row(out: &mut QPoly, r: i64, part: &QPoly) {
    for (&q, zl) in part.iter() {
        for (&z0, c) in zl.iter() {
            debug_assert_eq!(z0, 0);
            out.add_term(q, r, c.clone());
        }
    }
}

/// Simplified coinvariant character, valid when `m_p > 0`:
/// a single sum over `r` of `z^r q^{Delta_{r,s} - Delta_{1,s}}` times the
/// supernomial of the shortened vector.
pub fn xi_coinvariant_simplified(
    mp: &ModelParams,
    s: i64,
    sign: Sign,
    m: &NVector,
) -> Result<QPoly, Error> {
    check_s(mp, s)?;
    let p = mp.p();
    let denom = mp.denom();
    if *m.0.last().unwrap_or(&0) == 0 {
        return Err(Error::Param(
            "the simplified coinvariant form requires m_p > 0".into(),
        ));
    }
    let mut shorter = m.0.clone();
    *shorter.last_mut().unwrap() -= 1;
    let weight = supernomial_weight(&shorter);
    let delta_1s = mp.delta_rs_units(1, s);
    let mut out = QPoly::zero(denom);
    // Argument p*r - s (twice the supernomial index) must lie in the window.
    let mut r = -(weight + s) / p - 2;
    let r_max = (weight + s) / p + 2;
    while r <= r_max {
        let a2 = p * r - s;
        let t = qsupernomial(&shorter, a2, denom);
        if !t.is_zero() {
            let e = mp.delta_rs_units(r, s) - delta_1s;
            for (&q, zl) in t.iter() {
                for (&z0, c) in zl.iter() {
                    debug_assert_eq!(z0, 0);
                    out.add_term(q + e, r, c.clone());
                }
            }
        }
        r += 1;
    }
    if sign == Sign::Minus {
        out = out.substitute_z_inv();
    }
    Ok(out)
}

/// Coinvariant character as a truncated series, for the character interface.
pub fn xi_coinvariant(
    mp: &ModelParams,
    s: i64,
    sign: Sign,
    m: &NVector,
    trunc: i64,
) -> Result<QSeries, Error> {
    let poly = xi_coinvariant_poly(mp, s, sign, m)?;
    Ok(poly.to_series(poly.min_qexp().unwrap_or(0).min(0), trunc))
}

/// Kinds of character series the model exposes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharKind {
    Irreducible,
    WPlus,
    WMinus,
    Fermionic,
    Projective,
    Verma,
    Coinvariant,
}

impl std::str::FromStr for CharKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "irreducible" => CharKind::Irreducible,
            "w-plus" => CharKind::WPlus,
            "w-minus" => CharKind::WMinus,
            "fermionic" => CharKind::Fermionic,
            "projective" => CharKind::Projective,
            "verma" => CharKind::Verma,
            "coinvariant" => CharKind::Coinvariant,
            other => {
                return Err(Error::Param(format!(
                    "unknown character kind {other:?}; expected one of irreducible, \
                     w-plus, w-minus, fermionic, projective, verma, coinvariant"
                )))
            }
        })
    }
}

/// A fully-specified character computation.
#[derive(Clone, Debug)]
pub struct CharacterRequest {
    pub kind: CharKind,
    pub s: Option<i64>,
    pub sign: Option<Sign>,
    pub n: Option<NVector>,
    pub m: Option<NVector>,
    pub trunc: i64,
}

/// Dispatches a character request against a model.
pub fn compute(mp: &ModelParams, req: &CharacterRequest) -> Result<QSeries, Error> {
    if req.trunc < 1 {
        return Err(Error::Param("truncation order must be at least 1".into()));
    }
    let need_s = || req.s.ok_or_else(|| Error::Param("this kind requires --s".into()));
    let need_sign = || {
        req.sign
            .ok_or_else(|| Error::Param("this kind requires --sign".into()))
    };
    match req.kind {
        CharKind::Irreducible => chi_irreducible(mp, need_s()?, req.trunc),
        CharKind::WPlus => chi_w(mp, need_s()?, Sign::Plus, req.trunc),
        CharKind::WMinus => chi_w(mp, need_s()?, Sign::Minus, req.trunc),
        CharKind::Fermionic => {
            let n = req
                .n
                .as_ref()
                .ok_or_else(|| Error::Param("kind fermionic requires --n".into()))?;
            let u = crate::model::u_of_n(mp, n)?;
            Ok(chi_fermionic(mp, &v_of_u(mp, &u), req.trunc))
        }
        CharKind::Projective => psi_projective(mp, need_s()?, req.trunc),
        CharKind::Verma => xi_verma(mp, need_s()?, need_sign()?, req.trunc),
        CharKind::Coinvariant => {
            let m = req
                .m
                .as_ref()
                .ok_or_else(|| Error::Param("kind coinvariant requires --m".into()))?;
            let sign = req.sign.unwrap_or(Sign::Plus);
            xi_coinvariant(mp, need_s()?, sign, m, req.trunc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model, u_vac, v_irr};

    fn coeff(series: &QSeries, qexp: i64) -> ZLaurent {
        series.coeff(qexp).unwrap()
    }

    #[test]
    fn chi_irreducible_p2_head() {
        let mp = build_model(2).unwrap();
        let chi = chi_irreducible(&mp, 1, 3 * 8).unwrap();
        assert_eq!(coeff(&chi, 0), ZLaurent::one());
        assert_eq!(coeff(&chi, 8), ZLaurent::from_terms([(1, 1), (-1, 1)]));
        assert_eq!(
            coeff(&chi, 16),
            ZLaurent::from_terms([(1, 1), (0, 1), (-1, 1)])
        );
    }

    #[test]
    fn chi_normalization() {
        for p in 2..=5 {
            let mp = build_model(p).unwrap();
            for s in 1..=p {
                let chi = chi_irreducible(&mp, s, 2 * mp.denom()).unwrap();
                assert_eq!(coeff(&chi, 0), ZLaurent::one(), "p={p} s={s}");
            }
        }
    }

    #[test]
    fn chi_w_partition() {
        for p in [2, 3] {
            let mp = build_model(p).unwrap();
            let t = 8 * mp.denom();
            for s in 1..=p {
                let plus = chi_w(&mp, s, Sign::Plus, t).unwrap();
                let minus = chi_w(&mp, s, Sign::Minus, t).unwrap();
                let full = chi_irreducible(&mp, s, t).unwrap();
                assert_eq!(plus.add(&minus).unwrap(), full, "p={p} s={s}");
            }
        }
    }

    #[test]
    fn chi_w_family_heads() {
        // The family containing the odd theta indices holds the vacuum line;
        // with the current constant that family is the minus one.
        let mp = build_model(2).unwrap();
        let with_vacuum = chi_w(&mp, 1, Sign::Minus, 24).unwrap();
        assert_eq!(coeff(&with_vacuum, 0), ZLaurent::one());
        let other = chi_w(&mp, 1, Sign::Plus, 24).unwrap();
        assert!(coeff(&other, 0).is_zero());
        assert_eq!(coeff(&other, 8), ZLaurent::from_terms([(1, 1), (-1, 1)]));
    }

    #[test]
    fn fermionic_matches_theta_small() {
        let mp = build_model(2).unwrap();
        let t = 6 * mp.denom();
        let fer = chi_fermionic(&mp, &v_irr(&mp, 1).unwrap(), t);
        let the = chi_irreducible(&mp, 1, t).unwrap();
        assert!(fer.agrees_with(&the), "{fer} vs {the}");
    }

    #[test]
    fn fermionic_huge_label_is_one() {
        let mp = build_model(3).unwrap();
        let v = LabelVector(vec![200, 200, 200, 200]);
        let s = chi_fermionic(&mp, &v, 4 * mp.denom());
        assert_eq!(coeff(&s, 0), ZLaurent::one());
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn psi_steinberg_is_chi() {
        let mp = build_model(3).unwrap();
        let t = 4 * mp.denom();
        assert_eq!(
            psi_projective(&mp, 3, t).unwrap(),
            chi_irreducible(&mp, 3, t).unwrap()
        );
    }

    #[test]
    fn psi_p2_head() {
        // psi_1 = (2 + z + z^{-1}) chi_1 at p = 2: the shift exponent
        // (2s-p)/4 vanishes.
        let mp = build_model(2).unwrap();
        let t = 3 * mp.denom();
        let psi = psi_projective(&mp, 1, t).unwrap();
        assert_eq!(
            coeff(&psi, 0),
            ZLaurent::from_terms([(0, 2), (1, 1), (-1, 1)])
        );
    }

    #[test]
    fn psi_q0_z0_is_two() {
        for p in 2..=4 {
            let mp = build_model(p).unwrap();
            for s in 1..p {
                let psi = psi_projective(&mp, s, mp.denom()).unwrap();
                assert_eq!(coeff(&psi, 0).coeff(0), BigInt::from(2), "p={p} s={s}");
            }
        }
    }

    #[test]
    fn verma_z_swap() {
        for p in [2, 3] {
            let mp = build_model(p).unwrap();
            let t = 5 * mp.denom();
            for s in 1..=p {
                let plus = xi_verma(&mp, s, Sign::Plus, t).unwrap();
                let minus = xi_verma(&mp, s, Sign::Minus, t).unwrap();
                assert_eq!(plus.substitute_z_inv(), minus, "p={p} s={s}");
            }
        }
    }

    #[test]
    fn verma_steinberg_is_irreducible() {
        for p in [2, 3, 4] {
            let mp = build_model(p).unwrap();
            let t = 4 * mp.denom();
            let xi = xi_verma(&mp, p, Sign::Plus, t).unwrap();
            let chi = chi_irreducible(&mp, p, t).unwrap();
            assert!(xi.agrees_with(&chi), "p={p}");
        }
    }

    #[test]
    fn verma_p2_head() {
        // Y_1^+ at p = 2 opens with two states at level zero: the cyclic
        // vector and one z^{-1} partner.
        let mp = build_model(2).unwrap();
        let xi = xi_verma(&mp, 1, Sign::Plus, 2 * mp.denom()).unwrap();
        assert_eq!(coeff(&xi, 0), ZLaurent::from_terms([(0, 1), (-1, 1)]));
    }

    #[test]
    fn coinvariant_single_steinberg_factor() {
        // m = e_p at p = 2, s = 2: only r = 1 survives, giving plain z.
        let mp = build_model(2).unwrap();
        let xi = xi_coinvariant_poly(&mp, 2, Sign::Plus, &NVector(vec![1])).unwrap();
        let mut expect = QPoly::zero(mp.denom());
        expect.add_term(0, 1, 1.into());
        assert_eq!(xi, expect);
        let minus = xi_coinvariant_poly(&mp, 2, Sign::Minus, &NVector(vec![1])).unwrap();
        assert_eq!(minus, expect.substitute_z_inv());
    }

    #[test]
    fn coinvariant_infinite_support_is_reported() {
        // With no Steinberg column the inner sums have a single surviving
        // supernomial window and nothing to cancel against: the coinvariant
        // space is infinite-dimensional and the scan must refuse cleanly.
        let mp = build_model(3).unwrap();
        let err = xi_coinvariant_poly(&mp, 1, Sign::Plus, &NVector(vec![1, 0]));
        assert!(matches!(err, Err(crate::Error::Param(_))), "{err:?}");
        let err = xi_coinvariant_poly(&mp, 1, Sign::Plus, &NVector(vec![0, 0]));
        assert!(matches!(err, Err(crate::Error::Param(_))), "{err:?}");
    }

    #[test]
    fn coinvariant_full_equals_simplified() {
        for (p, ms) in [
            (2, vec![vec![1u32], vec![2], vec![3]]),
            (3, vec![vec![0, 1], vec![1, 1], vec![2, 1], vec![0, 2]]),
        ] {
            let mp = build_model(p).unwrap();
            for mv in ms {
                let m = NVector(mv.clone());
                for s in 1..=p {
                    let full = xi_coinvariant_poly(&mp, s, Sign::Plus, &m).unwrap();
                    let simp = xi_coinvariant_simplified(&mp, s, Sign::Plus, &m).unwrap();
                    assert_eq!(full, simp, "p={p} s={s} m={mv:?}");
                }
            }
        }
    }

    #[test]
    fn characters_are_z_symmetric() {
        for p in [2, 3] {
            let mp = build_model(p).unwrap();
            let t = 5 * mp.denom();
            for s in 1..=p {
                let chi = chi_irreducible(&mp, s, t).unwrap();
                assert_eq!(chi.substitute_z_inv(), chi);
                let psi = psi_projective(&mp, s, t).unwrap();
                assert_eq!(psi.substitute_z_inv(), psi);
                let fer = chi_fermionic(&mp, &v_of_u(&mp, &u_vac(&mp, s).unwrap()), t);
                assert_eq!(fer.substitute_z_inv(), fer);
            }
        }
    }

    #[test]
    fn character_coefficients_nonnegative() {
        for p in [2, 3] {
            let mp = build_model(p).unwrap();
            let t = 6 * mp.denom();
            for s in 1..=p {
                for series in [
                    chi_irreducible(&mp, s, t).unwrap(),
                    psi_projective(&mp, s, t).unwrap(),
                    xi_verma(&mp, s, Sign::Plus, t).unwrap(),
                ] {
                    for (_, zl) in series.iter() {
                        assert!(zl.all_nonnegative());
                    }
                }
            }
        }
    }
}
