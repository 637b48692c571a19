//! Acceptance suite: one test per shipping criterion, each printing a
//! PASS line with its timing. Every assertion is exact; there are no
//! tolerances anywhere.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion lines.

use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use doublet::characters::{chi_fermionic, chi_irreducible};
use doublet::fusion::{
    closed_form_counts, decompose_power, graded_decomposition, tensor, tensor_vectors,
    FusionObject, FusionVector,
};
use doublet::kostka::{kbar, khat};
use doublet::model::{build_model, v_irr, NVector};
use doublet::qcomb::qbin;
use doublet::series::{QPoly, ZLaurent};
use doublet::verify::{
    verify_felder, verify_fermionic_vs_theta, verify_ising, verify_limits, verify_main_identity,
    verify_supernomial_identity,
};

fn report(criterion: &str, started: Instant, target: &str) {
    println!(
        "PASS {criterion} ({:.2}s, target {target})",
        started.elapsed().as_secs_f64()
    );
}

/// All vectors (n_2, ..., n_p) with weighted size sum (j-1) n_j <= max.
fn nvectors_up_to(p: i64, max: i64) -> Vec<NVector> {
    let mut out = Vec::new();
    let len = (p - 1) as usize;
    let mut current = vec![0u32; len];
    fn rec(current: &mut Vec<u32>, idx: usize, budget: i64, out: &mut Vec<NVector>) {
        if idx == current.len() {
            out.push(NVector(current.clone()));
            return;
        }
        let weight = idx as i64 + 1;
        for v in 0..=(budget / weight) {
            current[idx] = v as u32;
            rec(current, idx + 1, budget - v * weight, out);
        }
        current[idx] = 0;
    }
    rec(&mut current, 0, max, &mut out);
    out
}

fn poly_from(denom: i64, terms: &[(i64, i64, i64)]) -> QPoly {
    let mut p = QPoly::zero(denom);
    for &(qnum, z, c) in terms {
        p.add_term(qnum, z, c.into());
    }
    p
}

/// Criterion 1: the displayed graded decompositions of the low tensor
/// powers of the two-dimensional generator at p = 3, including fractional
/// q-powers and the (z + z^{-1}) factors, exactly.
#[test]
fn criterion_1_intro_golden_table() {
    let started = Instant::now();
    let mp = build_model(3).unwrap();
    let d = mp.denom(); // 12

    use FusionObject::{P, X};
    type Row = (Vec<u32>, Vec<(FusionObject, QPoly)>);
    // Displayed multiplicities in q^{-1}: qnum values are units of 1/12.
    let table: Vec<Row> = vec![
        (vec![1, 0], vec![(X(2), poly_from(d, &[(0, 0, 1)]))]),
        (
            vec![2, 0],
            vec![
                (X(1), poly_from(d, &[(0, 0, 1)])),
                (X(3), poly_from(d, &[(0, 0, 1)])),
            ],
        ),
        (
            vec![3, 0],
            vec![
                (X(2), poly_from(d, &[(-12, 0, 1)])),
                (P(2), poly_from(d, &[(0, 0, 1)])),
            ],
        ),
        (
            vec![4, 0],
            vec![
                (X(1), poly_from(d, &[(-24, 0, 1)])),
                (P(1), poly_from(d, &[(0, 0, 1)])),
                (X(3), poly_from(d, &[(-24, 0, 1), (-12, 0, 1), (0, 0, 1)])),
            ],
        ),
        (
            vec![5, 0],
            vec![
                (X(2), poly_from(d, &[(-48, 0, 1)])),
                (
                    P(2),
                    poly_from(d, &[(-36, 0, 1), (-24, 0, 1), (-12, 0, 1), (0, 0, 1)]),
                ),
                (X(3), poly_from(d, &[(-9, 1, 1), (-9, -1, 1)])),
            ],
        ),
        (
            vec![6, 0],
            vec![
                (X(1), poly_from(d, &[(-72, 0, 1)])),
                (
                    P(1),
                    poly_from(d, &[(-48, 0, 1), (-36, 0, 1), (-24, 0, 1), (0, 0, 1)]),
                ),
                (P(2), poly_from(d, &[(-15, 1, 1), (-15, -1, 1)])),
                (
                    X(3),
                    poly_from(
                        d,
                        &[
                            (-72, 0, 1),
                            (-60, 0, 1),
                            (-48, 0, 2),
                            (-36, 0, 1),
                            (-24, 0, 2),
                            (-12, 0, 1),
                            (0, 0, 1),
                        ],
                    ),
                ),
            ],
        ),
    ];

    for (nv, expected) in table {
        let graded = graded_decomposition(&mp, &NVector(nv.clone())).unwrap();
        assert_eq!(
            graded.0.len(),
            expected.len(),
            "summand count for n={nv:?}: got {:?}",
            graded.0.keys().collect::<Vec<_>>()
        );
        for (obj, poly) in expected {
            assert_eq!(
                graded.0.get(&obj),
                Some(&poly),
                "multiplicity of {obj} in n={nv:?}"
            );
        }
    }
    assert!(started.elapsed().as_secs_f64() < 5.0, "runtime target");
    report("criterion 1: intro golden table (p=3, powers 1..6)", started, "<5s");
}

/// Criterion 2: closed-form multiplicity counts against the folded tensor
/// products, p = 2 up to the 14th power and all displayed p = 3 families.
#[test]
fn criterion_2_closed_forms() {
    let started = Instant::now();
    let mp2 = build_model(2).unwrap();
    for k in 0..=14u32 {
        let n = NVector(vec![k]);
        assert_eq!(
            decompose_power(&mp2, &n).unwrap(),
            closed_form_counts(&mp2, &n).unwrap(),
            "p=2 n={k}"
        );
    }
    let mp3 = build_model(3).unwrap();
    for k in 0..=12u32 {
        for m in 0..=12u32 {
            if k + m > 12 {
                continue;
            }
            let n = NVector(vec![k, m]);
            assert_eq!(
                decompose_power(&mp3, &n).unwrap(),
                closed_form_counts(&mp3, &n).unwrap(),
                "p=3 n=({k},{m})"
            );
        }
    }
    report("criterion 2: closed-form counts (p=2 n<=14, p=3 n+m<=12)", started, "exact");
}

/// Criterion 3: fermionic lattice form against the theta form of every
/// irreducible character, twenty integer q-powers deep, for p = 2..5.
#[test]
fn criterion_3_fermionic_vs_theta() {
    let started = Instant::now();
    for p in 2..=5 {
        let mp = build_model(p).unwrap();
        let trunc = 20 * mp.denom();
        for s in 1..=p {
            let report = verify_fermionic_vs_theta(&mp, s, trunc).unwrap();
            assert!(report.passed(), "p={p} s={s}: {report:?}");
        }
    }
    assert!(started.elapsed().as_secs_f64() < 60.0, "runtime target");
    report("criterion 3: fermionic = theta (p=2..5, 20 q-powers)", started, "<60s");
}

/// Criterion 4: the decomposition identity for every tensor power of
/// weighted size at most 5, fifteen integer q-powers deep, p = 2..4.
#[test]
fn criterion_4_main_identity() {
    let started = Instant::now();
    for p in 2..=4 {
        let mp = build_model(p).unwrap();
        let trunc = 15 * mp.denom();
        for n in nvectors_up_to(p, 5) {
            let report = verify_main_identity(&mp, &n, trunc).unwrap();
            assert!(report.passed(), "p={p} n={:?}: {report:?}", n.0);
        }
    }
    assert!(started.elapsed().as_secs_f64() < 300.0, "runtime target");
    report(
        "criterion 4: decomposition identity (p=2..4, |n|<=5, 15 q-powers)",
        started,
        "<5min",
    );
}

/// Criterion 5: the supernomial contraction identity for every m with a
/// positive last component and weighted size at most 8, all indices.
#[test]
fn criterion_5_supernomial_identity() {
    let started = Instant::now();
    for p in 2..=4 {
        let mp = build_model(p).unwrap();
        for m in nvectors_up_to(p, 8) {
            if *m.0.last().unwrap() == 0 {
                continue;
            }
            let report = verify_supernomial_identity(&mp, &m).unwrap();
            assert!(report.passed(), "p={p} m={:?}: {report:?}", m.0);
        }
    }
    report("criterion 5: supernomial identity (p=2..4, |m|<=8)", started, "exact");
}

/// Criterion 6 (conjecture tier): alternating-sum multiplicity formulas
/// against the direct lattice sums for p = 2, 3 and |m| <= 5, including
/// the short forms where they apply.
#[test]
fn criterion_6_conjecture_tier() {
    let started = Instant::now();
    for p in 2..=3 {
        let mp = build_model(p).unwrap();
        for m in nvectors_up_to(p, 5) {
            for s in 1..=p {
                let report = verify_felder(&mp, s, &m).unwrap();
                assert!(
                    report.passed(),
                    "conjecture-tier finding at p={p} s={s} m={:?}: {report:?}",
                    m.0
                );
            }
        }
    }
    report("criterion 6: alternating-sum formulas, conjecture tier (p=2,3, |m|<=5)", started, "exact");
}

/// Criterion 7: the p = 4 irreducible multiplicities along (m,0,0) against
/// the closed product formulas, and stabilization of the shifted heads.
#[test]
fn criterion_7_ising() {
    let started = Instant::now();
    let report7 = verify_ising(10).unwrap();
    assert!(report7.passed(), "{report7:?}");
    report("criterion 7: p=4 product formulas and stable heads (m<=10)", started, "exact");
}

/// Criterion 8: stabilization of the multiplicity polynomials along growing
/// n for p = 2 and 3, ten integer q-powers deep, against the
/// parity-selected characters.
#[test]
fn criterion_8_limits() {
    let started = Instant::now();
    for p in 2..=3 {
        let mp = build_model(p).unwrap();
        let trunc = 10 * mp.denom();
        for s in 1..=p {
            for direction in 0..(p - 1) as usize {
                let report = verify_limits(&mp, s, direction, 2, trunc).unwrap();
                assert!(report.passed(), "p={p} s={s} dir={direction}: {report:?}");
            }
        }
    }
    report("criterion 8: limit stabilization (p=2,3, 10 q-powers)", started, "exact");
}

/// Criterion 9: property suites. Gaussian-binomial laws on 500 random
/// instances, ring axioms on random Laurent polynomials, fusion ring
/// commutativity/associativity through p = 5, z-symmetry of the projective
/// multiplicities, and graded-ungraded consistency for p <= 4, |n| <= 6.
#[test]
fn criterion_9_property_suites() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x1f2e3d4c);

    // Gaussian binomial symmetry, Pascal recurrence, degree, q = 1 value.
    let denom = 8;
    for _ in 0..500 {
        let n = rng.gen_range(0..=24i64);
        let m = rng.gen_range(0..=n);
        let a = qbin(n, m, denom);
        assert_eq!(a, qbin(n, n - m, denom), "symmetry ({n},{m})");
        assert!(a.all_nonnegative(), "nonnegative ({n},{m})");
        assert_eq!(a.max_qexp().unwrap(), m * (n - m) * denom, "degree ({n},{m})");
        if m > 0 && m < n {
            let rhs = qbin(n - 1, m - 1, denom)
                .add(&qbin(n - 1, m, denom).shift_q(m * denom))
                .unwrap();
            assert_eq!(a, rhs, "Pascal ({n},{m})");
        }
        let mut binom = BigInt::from(1);
        for j in 0..m {
            binom = binom * BigInt::from(n - j) / BigInt::from(j + 1);
        }
        assert_eq!(a.eval_one(), binom, "q=1 ({n},{m})");
    }

    // Ring axioms on random z-Laurent polynomials, and the evaluation and
    // conjugation homomorphisms.
    let random_zl = |rng: &mut StdRng| {
        let mut zl = ZLaurent::zero();
        for _ in 0..rng.gen_range(0..5) {
            zl.add_term(rng.gen_range(-4..=4), BigInt::from(rng.gen_range(-9..=9i64)));
        }
        zl
    };
    for _ in 0..200 {
        let (a, b, c) = (random_zl(&mut rng), random_zl(&mut rng), random_zl(&mut rng));
        assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert_eq!(a.mul(&b).eval_one(), a.eval_one() * b.eval_one());
        assert_eq!(a.conjugate().conjugate(), a);
        assert_eq!(a.mul(&b).conjugate(), a.conjugate().mul(&b.conjugate()));
    }

    // Fusion ring: X1 unit, commutativity and associativity on all triples.
    for p in 2..=5 {
        let mp = build_model(p).unwrap();
        let mut objects = vec![];
        for s in 1..=p {
            objects.push(FusionObject::X(s));
        }
        for s in 1..p {
            objects.push(FusionObject::P(s));
        }
        for &a in &objects {
            assert_eq!(
                tensor(&mp, FusionObject::X(1), a),
                FusionVector::single(a),
                "unit at p={p}"
            );
            for &b in &objects {
                assert_eq!(tensor(&mp, a, b), tensor(&mp, b, a), "p={p} {a} {b}");
                for &c in &objects {
                    let left = tensor_vectors(&mp, &tensor(&mp, a, b), &FusionVector::single(c));
                    let right = tensor_vectors(&mp, &FusionVector::single(a), &tensor(&mp, b, c));
                    assert_eq!(left, right, "associativity p={p} ({a} {b}) {c}");
                }
            }
        }
    }

    // z-symmetry of every projective multiplicity in the identity-suite
    // instance set, and graded-ungraded consistency.
    for p in 2..=4 {
        let mp = build_model(p).unwrap();
        for n in nvectors_up_to(p, 6) {
            for s in 1..=p {
                let k = khat(&mp, s, &n).unwrap();
                assert!(k.is_z_symmetric(), "khat symmetry p={p} s={s} n={:?}", n.0);
            }
            for s in 1..p {
                assert!(
                    kbar(&mp, s, &n).unwrap().is_z_free(),
                    "kbar z-free p={p} s={s} n={:?}",
                    n.0
                );
            }
            let graded = graded_decomposition(&mp, &n).unwrap();
            let folded = decompose_power(&mp, &n).unwrap();
            assert_eq!(graded.ungraded(), folded, "q=z=1 at p={p} n={:?}", n.0);
        }
    }

    report("criterion 9: property suites", started, "exact");
}

/// Exactness guard used by several criteria: the fermionic and theta routes
/// compute through entirely different code paths, so a passing comparison
/// pins both. This test checks the comparison machinery itself reports the
/// first discrepancy faithfully on a deliberately broken pair.
#[test]
fn discrepancy_localization_reports_first_failure() {
    let mp = build_model(2).unwrap();
    let trunc = 4 * mp.denom();
    let good = chi_irreducible(&mp, 1, trunc).unwrap();
    let fermionic = chi_fermionic(&mp, &v_irr(&mp, 1).unwrap(), trunc);
    assert!(good.agrees_with(&fermionic));

    let mut broken = fermionic.clone();
    broken.add_term(2 * mp.denom(), 0, BigInt::from(7));
    let (qnum, z, lhs, rhs) = good.first_discrepancy(&broken).unwrap();
    assert_eq!((qnum, z), (2 * mp.denom(), 0));
    assert_eq!(rhs - lhs, BigInt::from(7));
}
