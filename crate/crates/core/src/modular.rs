//! Constructive proper representations of integers by the diagonal form
//! `f(x0, y1, y2, y3) = c0*x0^2 + c1*y1^2 + c2*y2^2 + c3*y3^2` modulo `p^2`,
//! modulo `2^nu`, and glued to the combined modulus `2^4*a^2*b^2`.
//!
//! A representation is *proper* when the residue tuple has gcd 1. Every
//! constructor in this module verifies the congruence and the gcd before
//! returning; an improper tuple is never emitted. Residues are canonical
//! (reduced into `[0, modulus)`) with two sanctioned exceptions: the trivial
//! modulus-1 certificate uses the tuple `(0, 0, 0, 1)`, and the gluing
//! repair may push the first coordinate above the modulus to restore
//! properness while preserving the congruence.

use serde::Serialize;

use crate::arith::{gcd, gcd4, is_prime, is_squarefree, mod_inv, odd_prime_factors, reduce_mod};
use crate::error::{Error, Result};
use crate::ring::RingParams;

/// Coefficients of a diagonal quaternary form, all nonzero and not all of
/// one sign. The main pipeline instantiates `(1, -a, -b, -ab)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagonalForm {
    coeffs: [i64; 4],
}

impl DiagonalForm {
    pub fn new(c0: i64, c1: i64, c2: i64, c3: i64) -> Result<Self> {
        let coeffs = [c0, c1, c2, c3];
        if coeffs.contains(&0) {
            return Err(Error::InvalidForm("all four coefficients must be nonzero"));
        }
        if coeffs.iter().all(|&c| c > 0) || coeffs.iter().all(|&c| c < 0) {
            return Err(Error::InvalidForm(
                "coefficients must not all have the same sign",
            ));
        }
        Ok(DiagonalForm { coeffs })
    }

    /// The pipeline form `x0^2 - a*y1^2 - b*y2^2 - ab*y3^2`.
    pub fn from_ring(ring: &RingParams) -> Result<Self> {
        let ab = ring.ab()?;
        DiagonalForm::new(1, -ring.a(), -ring.b(), -ab)
    }

    pub fn coeffs(&self) -> [i64; 4] {
        self.coeffs
    }

    /// Exact evaluation with `i128` intermediates.
    pub fn eval(&self, r: &[i64; 4]) -> Result<i128> {
        let mut acc: i128 = 0;
        for (c, x) in self.coeffs.iter().zip(r) {
            let sq = (*x as i128)
                .checked_mul(*x as i128)
                .ok_or(Error::Overflow)?;
            let term = (*c as i128).checked_mul(sq).ok_or(Error::Overflow)?;
            acc = acc.checked_add(term).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    /// Evaluation reduced into `[0, m)`; never overflows for any `i64` input
    /// because every intermediate is reduced.
    pub fn eval_mod(&self, r: &[i64; 4], m: i64) -> i64 {
        debug_assert!(m >= 1);
        let m128 = m as i128;
        let mut acc: i128 = 0;
        for (c, x) in self.coeffs.iter().zip(r) {
            let xr = (*x as i128).rem_euclid(m128);
            let sq = (xr * xr).rem_euclid(m128);
            let term = ((*c as i128).rem_euclid(m128) * sq).rem_euclid(m128);
            acc = (acc + term).rem_euclid(m128);
        }
        acc as i64
    }
}

/// A residue 4-tuple certifying `f(residues) = value (mod modulus)` with
/// `gcd(residues) = 1`. Fields are immutable after the checked construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularRepresentation {
    modulus: i64,
    value: i64,
    residues: [i64; 4],
}

impl ModularRepresentation {
    /// Checked constructor: verifies nonnegativity, the congruence under
    /// `form`, and properness. Callers are responsible for canonical
    /// reduction (see the module notes for the two exceptions).
    pub fn new(form: &DiagonalForm, residues: [i64; 4], modulus: i64, value: i64) -> Result<Self> {
        if modulus < 1 {
            return Err(Error::InvalidForm("modulus must be positive"));
        }
        if residues.iter().any(|&r| r < 0) {
            return Err(Error::CongruenceFailed);
        }
        let rep = ModularRepresentation {
            modulus,
            value,
            residues,
        };
        rep.verify(form)?;
        Ok(rep)
    }

    /// The conventional proper representation of any value modulo 1.
    pub fn trivial(value: i64) -> Self {
        ModularRepresentation {
            modulus: 1,
            value,
            residues: [0, 0, 0, 1],
        }
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn residues(&self) -> [i64; 4] {
        self.residues
    }

    /// Re-checks the defining congruence and the gcd condition.
    pub fn verify(&self, form: &DiagonalForm) -> Result<()> {
        if form.eval_mod(&self.residues, self.modulus) != self.value.rem_euclid(self.modulus) {
            return Err(Error::CongruenceFailed);
        }
        if gcd4(&self.residues) != 1 {
            return Err(Error::ImproperRepresentation);
        }
        Ok(())
    }
}

/// The exact power of 2 in `2^4*a^2*b^2`: `2^nu` is 16, 64, or 256 for
/// square-free `a`, `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoAdicLevel {
    nu: u32,
    modulus: i64,
}

impl TwoAdicLevel {
    pub fn from_ring(ring: &RingParams) -> Result<Self> {
        let nu = 4 + 2 * ring.a().trailing_zeros() + 2 * ring.b().trailing_zeros();
        if nu >= 63 {
            return Err(Error::Overflow);
        }
        Ok(TwoAdicLevel {
            nu,
            modulus: 1i64 << nu,
        })
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }
}

fn is_odd_prime(p: i64) -> bool {
    p % 2 == 1 && is_prime(p)
}

/// One-step Hensel lift for a quadratic `h(x) = h[0] + h[1]*x + h[2]*x^2`.
///
/// Given `h(c) = 0 (mod p)` and `h'(c) != 0 (mod p)` for an odd prime `p`,
/// returns the unique `gamma` in `[0, p^2)` with `gamma = c (mod p)` and
/// `h(gamma) = 0 (mod p^2)`, computed by solving the linear congruence for
/// the correction term (no search).
pub fn hensel_lift(h: &[i64; 3], c: i64, p: i64) -> Result<i64> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime { n: p });
    }
    let p2 = p.checked_mul(p).ok_or(Error::Overflow)?;
    let c0 = c.rem_euclid(p);

    let eval_mod_p2 = |x: i64| -> i64 {
        let x = x as i128;
        reduce_mod(
            h[0] as i128 + (h[1] as i128) * x + (h[2] as i128) * x * x,
            p2,
        )
    };

    let hc = eval_mod_p2(c0);
    if hc % p != 0 {
        return Err(Error::HenselNotARoot { c, p });
    }
    let deriv = reduce_mod(h[1] as i128 + 2 * (h[2] as i128) * (c0 as i128), p);
    if deriv == 0 {
        return Err(Error::HenselDerivativeVanishes { c, p });
    }

    // h(c0 + t*p) = h(c0) + h'(c0)*t*p (mod p^2); solve for t mod p.
    let w = hc / p;
    let t = reduce_mod(
        (-(w as i128)).rem_euclid(p as i128)
            * mod_inv(deriv, p).expect("derivative is a unit mod p") as i128,
        p,
    );
    let gamma = c0 + t * p;
    debug_assert_eq!(eval_mod_p2(gamma), 0);
    debug_assert_eq!(gamma.rem_euclid(p), c0);
    Ok(gamma)
}

/// The least residue attained by both maps, with the least witnesses.
///
/// `left` and `right` each enumerate `(p+1)/2` residues mod `p` (squares on
/// one side, shifted squares on the other), so the intersection is nonempty
/// by pigeonhole; an empty intersection is a defect, not an error.
fn intersect_residue_sets(
    p: i64,
    left: impl Fn(i64) -> i64,
    right: impl Fn(i64) -> i64,
) -> (i64, i64, i64) {
    let half = (p - 1) / 2;
    let collect = |map: &dyn Fn(i64) -> i64| -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = (0..=half).map(|beta| (map(beta), beta)).collect();
        v.sort_unstable();
        v.dedup_by_key(|e| e.0);
        v
    };
    let lv = collect(&left);
    let rv = collect(&right);

    let (mut i, mut j) = (0usize, 0usize);
    while i < lv.len() && j < rv.len() {
        match lv[i].0.cmp(&rv[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return (lv[i].0, lv[i].1, rv[j].1),
        }
    }
    unreachable!("two sets of (p+1)/2 residues mod p must intersect");
}

/// Proper representation of a square-free `d` modulo `p^2` for an odd prime
/// `p` dividing `ab`, following the two-case construction: intersect the
/// quadratic-residue sets, Hensel-lift the nondegenerate variable, and plant
/// `p` in an unused slot to force properness.
pub fn proper_rep_mod_p2(d: i64, p: i64, ring: &RingParams) -> Result<ModularRepresentation> {
    if !is_odd_prime(p) {
        return Err(Error::NotOddPrime { n: p });
    }
    if !is_squarefree(d) {
        return Err(Error::NotSquareFree { d });
    }
    if !ring.theorem_applicable() {
        return Err(Error::TheoremNotApplicable {
            a: ring.a(),
            b: ring.b(),
        });
    }
    let ab = ring.ab()?;
    if ab % p != 0 {
        return Err(Error::PrimeNotDividingAb { p, ab });
    }

    // gcd(a, b) <= 2 and p odd, so p divides exactly one of a, b. The
    // construction below assumes p | b; when p | a instead, swap the roles
    // of (a, y1) and (b, y2), under which f is invariant.
    let swapped = ring.a() % p == 0;
    let (ca, cb) = if swapped {
        (ring.b(), ring.a())
    } else {
        (ring.a(), ring.b())
    };

    let mut residues = rep_p2_oriented(d, p, ca, cb)?;
    if swapped {
        residues.swap(1, 2);
    }

    let p2 = p.checked_mul(p).ok_or(Error::Overflow)?;
    ModularRepresentation::new(&DiagonalForm::from_ring(ring)?, residues, p2, d)
}

/// Core of `proper_rep_mod_p2` in the orientation `p | b`, `p` coprime to
/// `a`. Returns the residue tuple in slot order `(x0, y1, y2, y3)`.
fn rep_p2_oriented(d: i64, p: i64, a: i64, b: i64) -> Result<[i64; 4]> {
    let p2 = p.checked_mul(p).ok_or(Error::Overflow)?;
    debug_assert_eq!(b % p, 0);
    debug_assert_ne!(a % p, 0);

    if d.rem_euclid(p) != 0 {
        // Case 1: find (beta0, beta1) with d + a*beta1^2 = beta0^2 (mod p).
        let (value, beta0, beta1) = intersect_residue_sets(
            p,
            |beta| reduce_mod((beta as i128) * (beta as i128), p),
            |beta| reduce_mod(d as i128 + (a as i128) * (beta as i128) * (beta as i128), p),
        );

        if value != 0 {
            // Case 1a: lift x0 in h(x) = x^2 - a*beta1^2 - d.
            let c0 = reduce_mod(
                -((a as i128) * (beta1 as i128) * (beta1 as i128) + d as i128),
                p2,
            );
            let delta0 = hensel_lift(&[c0, 0, 1], beta0, p)?;
            Ok([delta0, beta1, p, 0])
        } else {
            // Case 1b: beta0 = 0, so d = -a*beta1^2 (mod p); lift y1 in
            // h(x) = a*x^2 + d. beta1 != 0 here, else d = 0 (mod p).
            assert_ne!(beta1.rem_euclid(p), 0, "case 1b requires beta1 a unit");
            let delta1 = hensel_lift(
                &[reduce_mod(d as i128, p2), 0, reduce_mod(a as i128, p2)],
                beta1,
                p,
            )?;
            Ok([0, delta1, p, 0])
        }
    } else {
        // Case 2: p | d and p^2 does not divide d (d is square-free).
        // With b = p*bh and d = p*dh, solve -(bh^-1*dh + a*beta3^2) = beta2^2
        // (mod p) and read the congruence back mod p^2.
        let bh = b / p;
        let dh = d / p;
        assert_ne!(bh.rem_euclid(p), 0, "b square-free forces b/p a unit mod p");
        assert_ne!(dh.rem_euclid(p), 0, "d square-free forces d/p a unit mod p");
        let inv = mod_inv(bh, p).expect("unit mod p");
        let shift = reduce_mod((inv as i128) * (dh as i128), p);

        let (_, beta2, beta3) = intersect_residue_sets(
            p,
            |beta| reduce_mod((beta as i128) * (beta as i128), p),
            |beta| {
                reduce_mod(
                    -(shift as i128 + (a as i128) * (beta as i128) * (beta as i128)),
                    p,
                )
            },
        );
        assert!(
            beta2.rem_euclid(p) != 0 || beta3.rem_euclid(p) != 0,
            "d square-free forces one of beta2, beta3 a unit"
        );
        Ok([0, p, beta2, beta3])
    }
}

/// Least `x` in `[0, 2^nu)` with `x^2 = u (mod 2^nu)`, for `u = 1 (mod 8)`
/// and `nu >= 3`. Iterated 2-adic lifting from mod 8 upward; no search.
fn sqrt_one_mod_8(u: i64, nu: u32) -> i64 {
    assert!(nu >= 3);
    let m = 1i64 << nu;
    let u = u.rem_euclid(m);
    assert_eq!(u % 8, 1, "the two-adic square root needs u = 1 (mod 8)");

    let mut x: i64 = 1;
    for t in 3..nu {
        let step = 1i128 << (t + 1);
        if ((x as i128) * (x as i128) - u as i128).rem_euclid(step) != 0 {
            x += 1i64 << (t - 1);
        }
    }
    // The four roots mod 2^nu are {x, -x, x + 2^(nu-1), -x + 2^(nu-1)};
    // canonicalize to the least.
    let half = m >> 1;
    [x, m - x, (x + half) % m, (m - x + half) % m]
        .into_iter()
        .filter(|&c| ((c as i128) * (c as i128) - u as i128).rem_euclid(m as i128) == 0)
        .min()
        .expect("x itself verifies")
}

/// Replaces `tuple[slot]` (currently odd) so the congruence `f = d` holds
/// mod `2^nu`, given that it already holds mod `2^(3 + v2(c_slot))`. The new
/// value is again odd.
fn lift_slot(form: &DiagonalForm, tuple: &mut [i64; 4], slot: usize, d: i64, nu: u32) {
    let m = 1i64 << nu;
    let c = form.coeffs()[slot];
    let e = c.trailing_zeros();
    assert!(nu >= e + 3, "lift needs at least three spare bits");
    let c_odd = c / (1i64 << e);

    debug_assert_eq!(tuple[slot] % 2, 1, "lifted slot must hold an odd value");

    // Required contribution of the slot: R = d - (f - c*t^2) mod 2^nu.
    let t = tuple[slot] as i128;
    let rest = form.eval_mod(tuple, m) as i128 - ((c as i128) * t * t).rem_euclid(m as i128);
    let r = (d as i128 - rest).rem_euclid(m as i128) as i64;
    assert_eq!(
        r % (1i64 << e),
        0,
        "base congruence must determine the slot contribution 2-adically"
    );

    let sub = 1i64 << (nu - e);
    let u = reduce_mod(
        ((r >> e) as i128) * mod_inv(c_odd.rem_euclid(sub), sub).expect("odd unit") as i128,
        sub,
    );
    tuple[slot] = sqrt_one_mod_8(u, nu - e);
    debug_assert_eq!(form.eval_mod(tuple, m), d.rem_euclid(m));
}

/// Restores `gcd = 1` without touching the congruence: if the tuple shares a
/// factor (necessarily odd, since one slot is odd), plant a power of two in
/// the first zero slot whose squared contribution vanishes mod `2^nu`.
fn ensure_proper_2adic(form: &DiagonalForm, tuple: &mut [i64; 4], nu: u32) {
    if gcd4(tuple) == 1 {
        return;
    }
    let slot = tuple
        .iter()
        .position(|&v| v == 0)
        .expect("an improper two-adic tuple always has a zero slot");
    let e = form.coeffs()[slot].trailing_zeros();
    let k = (nu - e).div_ceil(2);
    tuple[slot] = 1i64 << k;
    assert_eq!(gcd4(tuple), 1, "planting a 2-power must fix the gcd");
}

/// Lexicographically first assignment from the per-slot candidate lists that
/// satisfies `f = d (mod base_mod)`. The candidate shapes come from the
/// case analysis; a miss is a defect in the case split, so callers assert.
fn base_search(
    form: &DiagonalForm,
    d: i64,
    base_mod: i64,
    ranges: [&[i64]; 4],
) -> Option<[i64; 4]> {
    let target = d.rem_euclid(base_mod);
    for &v0 in ranges[0] {
        for &v1 in ranges[1] {
            for &v2 in ranges[2] {
                for &v3 in ranges[3] {
                    let t = [v0, v1, v2, v3];
                    if form.eval_mod(&t, base_mod) == target {
                        return Some(t);
                    }
                }
            }
        }
    }
    None
}

/// Case 1 (`a`, `b` odd, modulus 16): exactly three of `1, -a, -b, -ab`
/// share a residue mod 4. Setting the right number of those variables to 1
/// matches `d` mod 4, the leftover slot set to 2 or 4 matches mod 8, and the
/// two-adic lift of one odd slot finishes mod 16. The leftover power of two
/// also pins the gcd to 1.
fn rep_2nu_case1(form: &DiagonalForm, d: i64) -> [i64; 4] {
    let coeffs = form.coeffs();
    let mut ones: Vec<usize> = Vec::new();
    let mut threes: Vec<usize> = Vec::new();
    for (i, &c) in coeffs.iter().enumerate() {
        match c.rem_euclid(4) {
            1 => ones.push(i),
            3 => threes.push(i),
            _ => unreachable!("odd coefficients only in case 1"),
        }
    }
    let (trio, leftover) = if ones.len() == 3 {
        (ones, threes[0])
    } else {
        assert_eq!(threes.len(), 3, "one or three coefficients are 1 mod 4");
        (threes, ones[0])
    };

    let eps = coeffs[trio[0]].rem_euclid(4);
    let k = (d.rem_euclid(4) * eps).rem_euclid(4) as usize;
    assert!((1..=3).contains(&k), "d = 0 (mod 4) was excluded upstream");

    let mut tuple = [0i64; 4];
    let mut sum: i64 = 0;
    for &idx in trio.iter().take(k) {
        tuple[idx] = 1;
        sum += coeffs[idx];
    }
    let diff = (d - sum).rem_euclid(8);
    assert!(diff == 0 || diff == 4, "trio choice matches d mod 4");
    tuple[leftover] = if diff == 0 { 4 } else { 2 };
    debug_assert_eq!(form.eval_mod(&tuple, 8), d.rem_euclid(8));

    lift_slot(form, &mut tuple, trio[0], d, 4);
    ensure_proper_2adic(form, &mut tuple, 4);
    tuple
}

/// Case 2 (`a` odd, `b = 2 mod 4`, modulus 64), oriented form. Odd `d` is
/// solved mod 8 with `x0` odd and lifted through `x0`; `d = 2 (mod 4)` is
/// solved mod 16 with `y2` odd and the other slots even, then lifted through
/// `y2` (whose coefficient carries one factor of 2).
fn rep_2nu_case2(form: &DiagonalForm, d: i64, nu: u32) -> [i64; 4] {
    let small = [0i64, 1, 2];
    let even = [0i64, 2];
    let mut tuple;
    let lifted;
    if d.rem_euclid(2) == 1 {
        tuple = base_search(form, d, 8, [&[1], &small, &small, &small])
            .expect("odd d is representable mod 8 with x0 odd");
        lifted = 0;
    } else {
        tuple = base_search(form, d, 16, [&even, &even, &[1], &even])
            .expect("d = 2 (mod 4) is representable mod 16 with y2 odd");
        lifted = 2;
    }
    lift_slot(form, &mut tuple, lifted, d, nu);
    ensure_proper_2adic(form, &mut tuple, nu);
    tuple
}

/// Case 3 (`a = b = 2 mod 4`, modulus 256). Odd `d` needs only `y1, y3` in
/// `{0, 1}` mod 8 before the lift. Even `d` (necessarily `2 mod 4`) forces
/// `x0` even; halving the equation yields the form
/// `2*w^2 - (a/2)*y1^2 - (b/2)*y2^2 - 2*(a/2)*(b/2)*y3^2` with an odd target
/// `d/2` mod 128, which has the case-2 coefficient pattern and is solved the
/// same way before mapping back through `x0 = 2w`.
fn rep_2nu_case3(form: &DiagonalForm, a: i64, b: i64, d: i64) -> Result<[i64; 4]> {
    if d.rem_euclid(2) == 1 {
        let zero_one = [0i64, 1];
        let mut tuple = base_search(form, d, 8, [&[1], &zero_one, &[0], &zero_one])
            .expect("odd d is representable mod 8 with y1, y3 in {0, 1}");
        lift_slot(form, &mut tuple, 0, d, 8);
        ensure_proper_2adic(form, &mut tuple, 8);
        return Ok(tuple);
    }

    let ah = a / 2;
    let bh = b / 2;
    let half_form = DiagonalForm::new(2, -ah, -bh, -2 * ah * bh)?;
    let target = d / 2;
    debug_assert_eq!(target.rem_euclid(2), 1);

    let small = [0i64, 1, 2];
    let (mut tuple, lifted) =
        match base_search(&half_form, target, 8, [&small, &[1], &small, &small]) {
            Some(t) => (t, 1),
            None => (
                base_search(&half_form, target, 8, [&small, &small, &[1], &small])
                    .expect("an odd target is representable mod 8 with y1 or y2 odd"),
                2,
            ),
        };
    lift_slot(&half_form, &mut tuple, lifted, target, 7);
    ensure_proper_2adic(&half_form, &mut tuple, 7);

    let full = [2 * tuple[0], tuple[1], tuple[2], tuple[3]];
    assert_eq!(
        gcd4(&full),
        1,
        "doubling the even slot preserves properness"
    );
    debug_assert_eq!(form.eval_mod(&full, 256), d.rem_euclid(256));
    Ok(full)
}

/// Proper representation of `d` modulo `2^nu`, where `2^nu` is the exact
/// power of 2 in `2^4*a^2*b^2`. Requires `d != 0 (mod 4)`; callers strip
/// square factors of 4 first.
pub fn proper_rep_mod_2nu(d: i64, ring: &RingParams) -> Result<ModularRepresentation> {
    if !ring.theorem_applicable() {
        return Err(Error::TheoremNotApplicable {
            a: ring.a(),
            b: ring.b(),
        });
    }
    if d.rem_euclid(4) == 0 {
        return Err(Error::DivisibleByFour { d });
    }

    let level = TwoAdicLevel::from_ring(ring)?;
    let form = DiagonalForm::from_ring(ring)?;
    let (a, b) = (ring.a(), ring.b());

    let residues = match (a % 2, b % 2) {
        (1, 1) => rep_2nu_case1(&form, d),
        (1, 0) => rep_2nu_case2(&form, d, level.nu()),
        (0, 1) => {
            // Swap the roles of (a, y1) and (b, y2); f is invariant under it.
            let oriented = DiagonalForm::new(1, -b, -a, -a * b)?;
            let mut t = rep_2nu_case2(&oriented, d, level.nu());
            t.swap(1, 2);
            t
        }
        (0, 0) => rep_2nu_case3(&form, a, b, d)?,
        _ => unreachable!("parities are 0 or 1"),
    };

    ModularRepresentation::new(&form, residues, level.modulus(), d)
}

/// Largest divisor of `f` coprime to `d`.
fn largest_coprime_factor(f: i64, d: i64) -> i64 {
    debug_assert!(f >= 1);
    let mut e = f;
    loop {
        let g = gcd(e, d);
        if g == 1 {
            return e;
        }
        e /= g;
    }
}

/// Glues proper representations of the same value modulo coprime `m` and `n`
/// into one modulo `mn`: combine coordinatewise by CRT
/// (`gamma_i = n*t*alpha_i + m*s*beta_i` with `ms = 1 mod n`, `nt = 1 mod m`),
/// then, if the combined tuple shares a factor `D > 1`, add `E*mn` to the
/// first coordinate where `E` is the largest factor of
/// `gcd(gamma_1, gamma_2, gamma_3)` coprime to `D`.
pub fn glue(
    rep_m: &ModularRepresentation,
    rep_n: &ModularRepresentation,
    form: &DiagonalForm,
) -> Result<ModularRepresentation> {
    let (m, n) = (rep_m.modulus(), rep_n.modulus());
    if gcd(m, n) != 1 {
        return Err(Error::ModuliNotCoprime { m, n });
    }
    if rep_m.value() != rep_n.value() {
        return Err(Error::ValueMismatch {
            left: rep_m.value(),
            right: rep_n.value(),
        });
    }
    rep_m.verify(form)?;
    rep_n.verify(form)?;

    let mn = m.checked_mul(n).ok_or(Error::Overflow)?;
    let s = mod_inv(m.rem_euclid(n), n).expect("coprime moduli");
    let t = mod_inv(n.rem_euclid(m), m).expect("coprime moduli");

    let alpha = rep_m.residues();
    let beta = rep_n.residues();
    let mut gamma = [0i64; 4];
    for i in 0..4 {
        let combined = (n as i128) * (t as i128) * (alpha[i] as i128)
            + (m as i128) * (s as i128) * (beta[i] as i128);
        gamma[i] = reduce_mod(combined, mn);
        debug_assert_eq!(gamma[i].rem_euclid(m), alpha[i].rem_euclid(m));
        debug_assert_eq!(gamma[i].rem_euclid(n), beta[i].rem_euclid(n));
    }

    let d_gcd = gcd4(&gamma);
    if d_gcd != 1 {
        assert_eq!(
            gcd(d_gcd, mn),
            1,
            "a shared factor of a glued tuple is coprime to mn when the inputs are proper"
        );
        let f_gcd = gcd4(&[0, gamma[1], gamma[2], gamma[3]]);
        assert!(f_gcd >= 1, "pure slots cannot all vanish when D > 1");
        let e = largest_coprime_factor(f_gcd, d_gcd);
        let repaired = (gamma[0] as i128) + (e as i128) * (mn as i128);
        gamma[0] = i64::try_from(repaired).map_err(|_| Error::Overflow)?;
        assert_eq!(gcd4(&gamma), 1, "the repair restores properness");
    }

    ModularRepresentation::new(form, gamma, mn, rep_m.value())
}

/// The combined modular condition: a proper representation of square-free
/// `d` modulo `2^4*a^2*b^2`, glued from the two-adic representation and one
/// mod-`p^2` representation per odd prime `p` dividing `ab`. Under the
/// hypotheses this modulus is exactly `2^nu` times the product of those
/// `p^2`, and success here guarantees the form represents `d` over the
/// integers.
pub fn watson_condition(d: i64, ring: &RingParams) -> Result<ModularRepresentation> {
    if !ring.theorem_applicable() {
        return Err(Error::TheoremNotApplicable {
            a: ring.a(),
            b: ring.b(),
        });
    }
    if !is_squarefree(d) {
        return Err(Error::NotSquareFree { d });
    }

    let form = DiagonalForm::from_ring(ring)?;
    let ab = ring.ab()?;
    let mut acc = proper_rep_mod_2nu(d, ring)?;
    for p in odd_prime_factors(ab) {
        let rep_p = proper_rep_mod_p2(d, p, ring)?;
        acc = glue(&acc, &rep_p, &form)?;
    }

    let a2 = ring.a().checked_mul(ring.a()).ok_or(Error::Overflow)?;
    let b2 = ring.b().checked_mul(ring.b()).ok_or(Error::Overflow)?;
    let watson_modulus = a2
        .checked_mul(b2)
        .and_then(|v| v.checked_mul(16))
        .ok_or(Error::Overflow)?;
    assert_eq!(
        acc.modulus(),
        watson_modulus,
        "the glued modulus must equal 2^4*a^2*b^2 exactly"
    );
    Ok(acc)
}

/// Budget guard for the exhaustive scan: `modulus^4` tuples.
const EXHAUSTIVE_BUDGET: i128 = 1 << 36;

/// Test oracle: scans residue 4-tuples mod `modulus` and returns the
/// lexicographically least proper representation of `d`, or `None` when no
/// proper representation exists. Reserved for validation; the constructive
/// operations above never fall back to it.
pub fn exhaustive_proper_rep(
    d: i64,
    modulus: i64,
    form: &DiagonalForm,
) -> Result<Option<ModularRepresentation>> {
    if modulus < 1 {
        return Err(Error::InvalidForm("modulus must be positive"));
    }
    if modulus == 1 {
        return Ok(Some(ModularRepresentation::trivial(d)));
    }
    if (modulus as i128).pow(4) > EXHAUSTIVE_BUDGET {
        return Err(Error::BudgetExceeded(
            "modulus^4 above the exhaustive-scan budget",
        ));
    }

    let target = d.rem_euclid(modulus);
    let c = form.coeffs();
    let sq_mod = |coef: i64, r: i64| -> i64 {
        reduce_mod((coef as i128) * (r as i128) * (r as i128), modulus)
    };

    // Bucket the back half c2*r2^2 + c3*r3^2 by value; pairs are pushed in
    // lexicographic (r2, r3) order.
    let mut buckets: Vec<Vec<(i64, i64)>> = vec![Vec::new(); modulus as usize];
    for r2 in 0..modulus {
        let t2 = sq_mod(c[2], r2);
        for r3 in 0..modulus {
            let v = (t2 + sq_mod(c[3], r3)).rem_euclid(modulus);
            buckets[v as usize].push((r2, r3));
        }
    }

    for r0 in 0..modulus {
        let t0 = sq_mod(c[0], r0);
        for r1 in 0..modulus {
            let need = (target - t0 - sq_mod(c[1], r1)).rem_euclid(modulus);
            for &(r2, r3) in &buckets[need as usize] {
                let tuple = [r0, r1, r2, r3];
                if gcd4(&tuple) == 1 {
                    return Ok(Some(ModularRepresentation::new(form, tuple, modulus, d)?));
                }
            }
        }
    }
    Ok(None)
}
