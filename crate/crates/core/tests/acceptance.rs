//! Acceptance suite: one test per criterion, each printing a PASS line
//! (visible with `cargo test --test acceptance -- --nocapture`). Tolerances
//! and ranges are pinned here, not configurable.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quaring::arith::{gcd, is_squarefree};
use quaring::{
    carefree_constant, empirical_counts, exhaustive_proper_rep, glue, hensel_lift, multiply,
    proper_rep_mod_2nu, proper_rep_mod_p2, represent_integer, survey, three_square_decompose,
    watson_condition, DiagonalForm, Error, ModularRepresentation, Quaternion, RingFilter,
    RingParams, SearchPolicy, TwoAdicLevel,
};

/// Square-free pairs with gcd <= 2, both entries up to `max`.
fn guaranteed_rings(max: i64) -> Vec<RingParams> {
    let mut out = Vec::new();
    for a in 1..=max {
        for b in 1..=max {
            if is_squarefree(a) && is_squarefree(b) && gcd(a, b) <= 2 {
                out.push(RingParams::new(a, b).unwrap());
            }
        }
    }
    out
}

fn squarefree_values(limit: i64) -> Vec<i64> {
    (-limit..=limit).filter(|&d| is_squarefree(d)).collect()
}

/// Independent verification of a triple: multiply each part by itself (not
/// the squaring shortcut) and compare the componentwise sum with alpha.
fn assert_triple_exact(ring: &RingParams, alpha: &Quaternion, parts: [&Quaternion; 3]) {
    let mut sum = [0i128; 4];
    for part in parts {
        let sq = multiply(part, part, ring).unwrap();
        for (acc, c) in sum.iter_mut().zip(sq.components()) {
            *acc += c as i128;
        }
    }
    let want: Vec<i128> = alpha.components().iter().map(|&c| c as i128).collect();
    assert_eq!(sum.to_vec(), want, "triple mismatch for alpha = {alpha}");
}

/// Criterion 1: every element of the square subgroup with coefficients in
/// [-25, 25] decomposes into three squares on every guaranteed ring with
/// a, b <= 20 (all real elements, plus 500 random elements per ring).
/// Zero failures allowed.
#[test]
fn criterion_1_three_square_decomposition_desk_scale() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut attempts = 0u64;

    for ring in guaranteed_rings(20) {
        for real in -25i64..=25 {
            let alpha = Quaternion::from_real(real);
            let triple = three_square_decompose(&alpha, &ring, None)
                .unwrap_or_else(|e| panic!("({}, {}) alpha={alpha}: {e}", ring.a(), ring.b()));
            assert_triple_exact(&ring, &alpha, [&triple.x(), &triple.y(), &triple.z()]);
            attempts += 1;
        }
        for _ in 0..500 {
            let alpha = Quaternion::new(
                rng.random_range(-25..=25),
                2 * rng.random_range(-12..=12),
                2 * rng.random_range(-12..=12),
                2 * rng.random_range(-12..=12),
            );
            let triple = three_square_decompose(&alpha, &ring, None)
                .unwrap_or_else(|e| panic!("({}, {}) alpha={alpha}: {e}", ring.a(), ring.b()));
            assert_triple_exact(&ring, &alpha, [&triple.x(), &triple.y(), &triple.z()]);
            attempts += 1;
        }
    }

    println!("criterion 1 (three-square decomposition, {attempts} elements): PASS");
}

fn odd_primes_dividing(ab: i64) -> Vec<i64> {
    quaring::arith::odd_prime_factors(ab)
}

/// Criterion 2: the constructive mod-p^2 and mod-2^nu representations agree
/// with the exhaustive oracle (both verify, and the oracle confirms
/// existence) across the whole small family. Zero discrepancies.
#[test]
fn criterion_2_modular_oracle_equivalence() {
    let mut p2_checked = 0u64;
    let mut two_adic_checked = 0u64;

    for ring in guaranteed_rings(10) {
        let form = DiagonalForm::from_ring(&ring).unwrap();
        let ab = ring.ab().unwrap();

        for p in odd_primes_dividing(ab) {
            for &d in &squarefree_values(50) {
                let rep = proper_rep_mod_p2(d, p, &ring)
                    .unwrap_or_else(|e| panic!("p2 ({},{}) p={p} d={d}: {e}", ring.a(), ring.b()));
                rep.verify(&form).unwrap();
                assert_eq!(rep.modulus(), p * p);
                let oracle = exhaustive_proper_rep(d, p * p, &form).unwrap();
                assert!(
                    oracle.is_some(),
                    "oracle missing a proper rep mod {} for d={d}",
                    p * p
                );
                p2_checked += 1;
            }
        }

        let level = TwoAdicLevel::from_ring(&ring).unwrap();
        for d in -50i64..=50 {
            if d.rem_euclid(4) == 0 {
                continue;
            }
            let rep = proper_rep_mod_2nu(d, &ring)
                .unwrap_or_else(|e| panic!("2nu ({},{}) d={d}: {e}", ring.a(), ring.b()));
            rep.verify(&form).unwrap();
            assert_eq!(rep.modulus(), level.modulus());
            assert!(level.modulus() <= 256);
            let oracle = exhaustive_proper_rep(d, level.modulus(), &form).unwrap();
            assert!(
                oracle.is_some(),
                "oracle missing a proper rep mod {} for d={d}",
                level.modulus()
            );
            two_adic_checked += 1;
        }
    }

    println!(
        "criterion 2 (modular oracle equivalence, {p2_checked} mod-p^2 + {two_adic_checked} mod-2^nu): PASS"
    );
}

/// Criterion 3: 1000 randomized gluings of criterion-2 outputs satisfy the
/// combined congruence and gcd = 1.
#[test]
fn criterion_3_gluing_property_suite() {
    let rings = guaranteed_rings(10);
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    let mut done = 0u64;

    while done < 1000 {
        let ring = rings[rng.random_range(0..rings.len())];
        let ab = ring.ab().unwrap();
        let d = loop {
            let d = rng.random_range(-50i64..=50);
            if is_squarefree(d) {
                break d;
            }
        };

        let form = DiagonalForm::from_ring(&ring).unwrap();
        let mut reps: Vec<ModularRepresentation> = vec![proper_rep_mod_2nu(d, &ring).unwrap()];
        for p in odd_primes_dividing(ab) {
            reps.push(proper_rep_mod_p2(d, p, &ring).unwrap());
        }
        if reps.len() < 2 {
            continue;
        }
        let i = rng.random_range(0..reps.len());
        let j = loop {
            let j = rng.random_range(0..reps.len());
            if j != i {
                break j;
            }
        };

        let glued = glue(&reps[i], &reps[j], &form).unwrap();
        assert_eq!(glued.modulus(), reps[i].modulus() * reps[j].modulus());
        glued.verify(&form).unwrap();
        done += 1;
    }

    println!("criterion 3 (gluing property suite, {done} instances): PASS");
}

/// Criterion 4: the combined modular condition verifies and the bounded
/// search then finds an exact solution with max_x0 = |d| + ab + 100.
#[test]
fn criterion_4_watson_end_to_end() {
    let mut checked = 0u64;
    for ring in guaranteed_rings(6) {
        let form = DiagonalForm::from_ring(&ring).unwrap();
        let ab = ring.ab().unwrap();
        for &d in &squarefree_values(30) {
            let witness = watson_condition(d, &ring)
                .unwrap_or_else(|e| panic!("watson ({},{}) d={d}: {e}", ring.a(), ring.b()));
            witness.verify(&form).unwrap();
            assert_eq!(witness.modulus(), 16 * ring.a().pow(2) * ring.b().pow(2));

            let policy = SearchPolicy::failing(d.abs() + ab + 100).unwrap();
            let rep = represent_integer(d, &ring, &policy)
                .unwrap_or_else(|e| panic!("search ({},{}) d={d}: {e}", ring.a(), ring.b()));
            assert_eq!(form.eval(&rep.tuple()).unwrap(), d as i128);
            checked += 1;
        }
    }
    println!("criterion 4 (modular condition realized by search, {checked} values): PASS");
}

/// Criterion 5: the Euler-product constant at cutoff 10^5 reproduces
/// K = 0.286747 within 1e-5 and 9K/8 = 0.322590 within 2e-5.
#[test]
fn criterion_5_density_constants() {
    let est = carefree_constant(100_000).unwrap();
    let k_err = (est.k_value - 0.286747).abs();
    let nine_err = (est.nine_eighths - 0.322590).abs();
    assert!(k_err <= 1e-5, "K = {} (err {k_err:e})", est.k_value);
    assert!(
        nine_err <= 2e-5,
        "9K/8 = {} (err {nine_err:e})",
        est.nine_eighths
    );
    println!(
        "criterion 5 (density constants: K = {:.6}, 9K/8 = {:.6}): PASS",
        est.k_value, est.nine_eighths
    );
}

/// Criterion 6: exact pair counts at x = 2000 sit within the finite-x
/// tolerances of the asymptotics.
#[test]
fn criterion_6_empirical_density() {
    let counts = empirical_counts(2000).unwrap();
    let xsq = 2000.0f64 * 2000.0;

    let density = counts.c as f64 / xsq;
    assert!(
        (density - 0.286747).abs() <= 0.01,
        "C/x^2 = {density} too far from K"
    );

    let parity_ratio = counts.c_ev as f64 / counts.c_od as f64;
    assert!(
        (parity_ratio - 1.0).abs() <= 0.05,
        "C_ev/C_od = {parity_ratio}"
    );

    let gcd2_ratio = (counts.cc - counts.c) as f64 * 8.0 / counts.c as f64;
    assert!(
        (gcd2_ratio - 1.0).abs() <= 0.16,
        "(CC - C) * 8 / C = {gcd2_ratio}"
    );

    println!(
        "criterion 6 (empirical density at x=2000: C/x^2 = {density:.6}, ev/od = {parity_ratio:.4}, gcd2 ratio = {gcd2_ratio:.4}): PASS"
    );
}

/// Criterion 7: 500 random Hensel instances with valid preconditions lift
/// correctly; violations are rejected with the matching error.
#[test]
fn criterion_7_hensel_lifting() {
    let primes: Vec<i64> = (3..=97).filter(|&n| quaring::arith::is_prime(n)).collect();
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut done = 0u64;

    while done < 500 {
        let p = primes[rng.random_range(0..primes.len())];
        let c = rng.random_range(0..p);
        let h1: i64 = rng.random_range(-50..=50);
        let h2: i64 = rng.random_range(-50..=50);
        // force h(c) = 0 (mod p) by solving for the constant term, then
        // shift it by a random multiple of p
        let h0 = -(h1 * c + h2 * c * c) + p * rng.random_range(-20..=20);
        if (h1 + 2 * h2 * c).rem_euclid(p) == 0 {
            continue;
        }
        let h = [h0, h1, h2];
        let gamma = hensel_lift(&h, c, p).unwrap();
        assert!((0..p * p).contains(&gamma));
        assert_eq!(gamma.rem_euclid(p), c.rem_euclid(p));
        let eval = (h[0] as i128
            + h[1] as i128 * gamma as i128
            + h[2] as i128 * gamma as i128 * gamma as i128)
            .rem_euclid((p * p) as i128);
        assert_eq!(eval, 0, "h({gamma}) != 0 mod {}^2", p);
        done += 1;
    }

    // precondition violations
    assert_eq!(
        hensel_lift(&[-2, 0, 1], 1, 7),
        Err(Error::HenselNotARoot { c: 1, p: 7 })
    );
    assert_eq!(
        hensel_lift(&[0, 0, 1], 0, 5),
        Err(Error::HenselDerivativeVanishes { c: 0, p: 5 })
    );
    assert_eq!(
        hensel_lift(&[-1, 0, 1], 1, 6),
        Err(Error::NotOddPrime { n: 6 })
    );

    println!("criterion 7 (hensel lifting, {done} random instances): PASS");
}

/// Criterion 8: the survey is byte-identical across repeated runs and
/// across parallelism settings.
#[test]
fn criterion_8_survey_determinism() {
    let to_bytes = |items: &[quaring::SurveyItem]| -> Vec<u8> {
        let mut out = Vec::new();
        for item in items {
            out.extend_from_slice(serde_json::to_string(item).unwrap().as_bytes());
            out.push(b'\n');
        }
        out
    };

    let first = to_bytes(&survey(4, 4, 3, RingFilter::All, None, 1));
    let second = to_bytes(&survey(4, 4, 3, RingFilter::All, None, 1));
    let parallel = to_bytes(&survey(4, 4, 3, RingFilter::All, None, 4));
    let more_parallel = to_bytes(&survey(4, 4, 3, RingFilter::All, None, 8));

    assert_eq!(first, second, "repeated runs diverged");
    assert_eq!(first, parallel, "jobs=4 diverged from jobs=1");
    assert_eq!(first, more_parallel, "jobs=8 diverged from jobs=1");
    assert!(!first.is_empty());

    println!(
        "criterion 8 (survey determinism, {} bytes x 4 runs): PASS",
        first.len()
    );
}
