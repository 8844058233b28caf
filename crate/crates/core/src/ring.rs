//! The rings `LQ_{a,b}` and their squaring structure.
//!
//! A quaternion here is an integer 4-tuple over the basis `1, i, j, k` with
//! `i^2 = -a`, `j^2 = -b`, `ij = -ji = k`. All arithmetic is exact: checked
//! `i64` operations report [`Error::Overflow`] instead of wrapping.

use std::fmt;
use std::str::FromStr;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::arith::{gcd, is_squarefree};
use crate::error::{Error, Result};

/// The pair `(a, b)` defining `LQ_{a,b}`, together with the derived
/// classification used by the theorem-guided operations.
///
/// Any positive pair is accepted; operations that rely on the guarantee
/// (square-free `a`, `b` with `gcd(a, b) <= 2`) check
/// [`theorem_applicable`](RingParams::theorem_applicable) themselves, while
/// pure-search operations work on every positive pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingParams {
    a: i64,
    b: i64,
}

impl RingParams {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a < 1 || b < 1 {
            return Err(Error::InvalidRing { a, b });
        }
        Ok(RingParams { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `a * b`, checked.
    pub fn ab(&self) -> Result<i64> {
        self.a.checked_mul(self.b).ok_or(Error::Overflow)
    }

    pub fn a_squarefree(&self) -> bool {
        is_squarefree(self.a)
    }

    pub fn b_squarefree(&self) -> bool {
        is_squarefree(self.b)
    }

    pub fn gcd(&self) -> i64 {
        gcd(self.a, self.b)
    }

    /// Whether the pair satisfies the hypotheses under which every element of
    /// the square subgroup is a sum of three squares: `a`, `b` square-free
    /// and `gcd(a, b) <= 2`.
    pub fn theorem_applicable(&self) -> bool {
        self.a_squarefree() && self.b_squarefree() && self.gcd() <= 2
    }
}

/// An element `x0 + x1*i + x2*j + x3*k` of `LQ_{a,b}`.
///
/// The value is plain data and carries no ring reference; the ring is an
/// explicit argument to every operation that needs one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Quaternion {
    /// Real part.
    pub x0: i64,
    /// Coefficient of `i`.
    pub x1: i64,
    /// Coefficient of `j`.
    pub x2: i64,
    /// Coefficient of `k`.
    pub x3: i64,
}

impl Quaternion {
    pub const fn new(x0: i64, x1: i64, x2: i64, x3: i64) -> Self {
        Quaternion { x0, x1, x2, x3 }
    }

    pub const fn zero() -> Self {
        Quaternion::new(0, 0, 0, 0)
    }

    pub const fn from_real(r: i64) -> Self {
        Quaternion::new(r, 0, 0, 0)
    }

    pub const fn components(&self) -> [i64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    /// Zero pure part.
    pub fn is_real(&self) -> bool {
        self.x1 == 0 && self.x2 == 0 && self.x3 == 0
    }

    /// Zero real part.
    pub fn is_pure(&self) -> bool {
        self.x0 == 0
    }

    pub fn is_zero(&self) -> bool {
        *self == Quaternion::zero()
    }
}

/// Text format is the comma-separated 4-tuple `x0,x1,x2,x3`, real part first.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.x0, self.x1, self.x2, self.x3)
    }
}

impl FromStr for Quaternion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::ParseQuaternion(s.to_string());
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(err());
        }
        let mut c = [0i64; 4];
        for (slot, part) in c.iter_mut().zip(&parts) {
            *slot = part.trim().parse::<i64>().map_err(|_| err())?;
        }
        Ok(Quaternion::new(c[0], c[1], c[2], c[3]))
    }
}

/// JSON form is the 4-element array `[x0, x1, x2, x3]`.
impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(4))?;
        for c in self.components() {
            seq.serialize_element(&c)?;
        }
        seq.end()
    }
}

fn ck_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn ck_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn ck_sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

/// The product of `p` and `q` in `LQ_{a,b}`.
///
/// Expanding the basis relations gives, for `r = p * q`:
///
/// ```text
/// r0 = p0*q0 - a*p1*q1 - b*p2*q2 - a*b*p3*q3
/// r1 = p0*q1 + p1*q0 + b*(p2*q3 - p3*q2)
/// r2 = p0*q2 + p2*q0 + a*(p3*q1 - p1*q3)
/// r3 = p0*q3 + p3*q0 + p1*q2 - p2*q1
/// ```
pub fn multiply(p: &Quaternion, q: &Quaternion, ring: &RingParams) -> Result<Quaternion> {
    let (a, b) = (ring.a, ring.b);
    let ab = ring.ab()?;

    let r0 = ck_sub(
        ck_sub(
            ck_sub(ck_mul(p.x0, q.x0)?, ck_mul(a, ck_mul(p.x1, q.x1)?)?)?,
            ck_mul(b, ck_mul(p.x2, q.x2)?)?,
        )?,
        ck_mul(ab, ck_mul(p.x3, q.x3)?)?,
    )?;
    let r1 = ck_add(
        ck_add(ck_mul(p.x0, q.x1)?, ck_mul(p.x1, q.x0)?)?,
        ck_mul(b, ck_sub(ck_mul(p.x2, q.x3)?, ck_mul(p.x3, q.x2)?)?)?,
    )?;
    let r2 = ck_add(
        ck_add(ck_mul(p.x0, q.x2)?, ck_mul(p.x2, q.x0)?)?,
        ck_mul(a, ck_sub(ck_mul(p.x3, q.x1)?, ck_mul(p.x1, q.x3)?)?)?,
    )?;
    let r3 = ck_add(
        ck_add(ck_mul(p.x0, q.x3)?, ck_mul(p.x3, q.x0)?)?,
        ck_sub(ck_mul(p.x1, q.x2)?, ck_mul(p.x2, q.x1)?)?,
    )?;

    Ok(Quaternion::new(r0, r1, r2, r3))
}

/// The square of `x` in `LQ_{a,b}` via the closed form
/// `x^2 = (x0^2 - a*x1^2 - b*x2^2 - ab*x3^2) + 2*x0*(x1*i + x2*j + x3*k)`.
///
/// Agrees with `multiply(x, x, ring)` for every input.
pub fn square(x: &Quaternion, ring: &RingParams) -> Result<Quaternion> {
    let (a, b) = (ring.a, ring.b);
    let ab = ring.ab()?;

    let r0 = ck_sub(
        ck_sub(
            ck_sub(ck_mul(x.x0, x.x0)?, ck_mul(a, ck_mul(x.x1, x.x1)?)?)?,
            ck_mul(b, ck_mul(x.x2, x.x2)?)?,
        )?,
        ck_mul(ab, ck_mul(x.x3, x.x3)?)?,
    )?;
    let twice_x0 = ck_mul(2, x.x0)?;
    Ok(Quaternion::new(
        r0,
        ck_mul(twice_x0, x.x1)?,
        ck_mul(twice_x0, x.x2)?,
        ck_mul(twice_x0, x.x3)?,
    ))
}

/// Membership in the additive subgroup generated by squares: all three pure
/// coefficients even, real part unrestricted. Independent of `a` and `b`.
pub fn in_square_subgroup(alpha: &Quaternion) -> bool {
    alpha.x1 % 2 == 0 && alpha.x2 % 2 == 0 && alpha.x3 % 2 == 0
}
