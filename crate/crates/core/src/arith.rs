//! Small exact-integer helpers shared across the crate.

/// Greatest common divisor, always nonnegative. `gcd(0, 0) = 0`.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

/// gcd of a residue 4-tuple; 0 when all entries are 0.
pub fn gcd4(r: &[i64; 4]) -> i64 {
    r.iter().copied().fold(0, gcd)
}

/// Extended Euclid: returns `(g, s, t)` with `a*s + b*t = g = gcd(a, b)`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Inverse of `a` modulo `m > 0`, in `[0, m)`. `None` when `gcd(a, m) != 1`.
pub fn mod_inv(a: i64, m: i64) -> Option<i64> {
    let (g, s, _) = ext_gcd(a.rem_euclid(m), m);
    if g != 1 {
        None
    } else {
        Some(s.rem_euclid(m))
    }
}

/// `v mod m` reduced into `[0, m)` with `i128` intermediates.
pub fn reduce_mod(v: i128, m: i64) -> i64 {
    debug_assert!(m >= 1);
    v.rem_euclid(m as i128) as i64
}

/// Whether `n` is square-free. `0` is not; `±1` are. Sign is ignored.
pub fn is_squarefree(n: i64) -> bool {
    let mut n = n.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Trial-division primality test for `n >= 2`.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut p = 5i64;
    while p * p <= n {
        if n % p == 0 || n % (p + 2) == 0 {
            return false;
        }
        p += 6;
    }
    true
}

/// Odd prime factors of `n`, ascending, without multiplicity.
pub fn odd_prime_factors(n: i64) -> Vec<i64> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    while n.is_multiple_of(2) {
        n /= 2;
    }
    let mut p = 3u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p as i64);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 2;
    }
    if n > 1 {
        out.push(n as i64);
    }
    out
}
