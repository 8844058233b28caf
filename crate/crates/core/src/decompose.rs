//! Sums of three squares in `LQ_{a,b}` and the Waring-number classifier.
//!
//! For `alpha = a0 + 2*a1*i + 2*a2*j + 2*a3*k` in the square subgroup, take
//! `z = 1 + a1*i + a2*j + a3*k`; then `alpha - z^2` is an integer `d`, and an
//! exact solution of the diagonal form at `d` supplies a strictly real `x`
//! and a strictly pure `y` with `x^2 + y^2 + z^2 = alpha`.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::ring::{in_square_subgroup, square, Quaternion, RingParams};
use crate::solver::{represent_two_squares, SearchPolicy};

/// A verified decomposition `alpha = x^2 + y^2 + z^2`.
///
/// `z` always has real part exactly 1 and pure part equal to half of
/// `alpha`'s pure part; alternative real parts are deliberately not tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionTriple {
    x: Quaternion,
    y: Quaternion,
    z: Quaternion,
    alpha: Quaternion,
    ring: RingParams,
}

impl DecompositionTriple {
    pub fn x(&self) -> Quaternion {
        self.x
    }

    pub fn y(&self) -> Quaternion {
        self.y
    }

    pub fn z(&self) -> Quaternion {
        self.z
    }

    pub fn alpha(&self) -> Quaternion {
        self.alpha
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    /// Re-checks `x^2 + y^2 + z^2 = alpha` exactly.
    pub fn verify(&self) -> Result<()> {
        let xs = square(&self.x, &self.ring)?;
        let ys = square(&self.y, &self.ring)?;
        let zs = square(&self.z, &self.ring)?;
        let sum: Vec<i128> = (0..4)
            .map(|i| {
                xs.components()[i] as i128 + ys.components()[i] as i128 + zs.components()[i] as i128
            })
            .collect();
        let target: Vec<i128> = self.alpha.components().iter().map(|&c| c as i128).collect();
        if sum == target {
            Ok(())
        } else {
            Err(Error::CongruenceFailed)
        }
    }
}

/// Writes `alpha` (which must lie in the square subgroup) as a sum of three
/// squares. `policy` bounds the inner search; `None` uses the desk-scale
/// default for the derived integer.
///
/// Outside the guaranteed family (square-free `a`, `b` with gcd at most 2)
/// this is best-effort: the search may exhaust its bound, and that outcome
/// is reported, not papered over.
///
/// ```
/// use quaring::{three_square_decompose, Quaternion, RingParams};
///
/// let ring = RingParams::new(1, 1).unwrap();
/// let seven = Quaternion::from_real(7);
/// let t = three_square_decompose(&seven, &ring, None).unwrap();
/// // 7 = 3^2 + (i + j + k)^2 + 1^2
/// assert_eq!(t.x(), Quaternion::from_real(3));
/// assert_eq!(t.y(), Quaternion::new(0, 1, 1, 1));
/// assert_eq!(t.z(), Quaternion::from_real(1));
/// ```
pub fn three_square_decompose(
    alpha: &Quaternion,
    ring: &RingParams,
    policy: Option<&SearchPolicy>,
) -> Result<DecompositionTriple> {
    if !in_square_subgroup(alpha) {
        return Err(Error::NotInSquareSubgroup);
    }

    let z = Quaternion::new(1, alpha.x1 / 2, alpha.x2 / 2, alpha.x3 / 2);
    let z_sq = square(&z, ring)?;
    let d = alpha.x0.checked_sub(z_sq.x0).ok_or(Error::Overflow)?;

    let default_policy;
    let policy = match policy {
        Some(p) => p,
        None => {
            default_policy = SearchPolicy::default_for(d, ring);
            &default_policy
        }
    };

    let (x, y) = represent_two_squares(d, ring, policy)?;
    let triple = DecompositionTriple {
        x,
        y,
        z,
        alpha: *alpha,
        ring: *ring,
    };
    triple
        .verify()
        .expect("a solution of f = d always assembles into a verified triple");
    Ok(triple)
}

/// The classifier's answer for `g_{a,b}(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GValue {
    Three,
    Five,
    Unknown,
}

impl GValue {
    pub fn as_number(&self) -> Option<u8> {
        match self {
            GValue::Three => Some(3),
            GValue::Five => Some(5),
            GValue::Unknown => None,
        }
    }
}

/// Which known result backs the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictBasis {
    /// Square-free `a`, `b` with `gcd(a, b) <= 2`: every element of the
    /// square subgroup is a sum of three squares.
    SquarefreeGcdCriterion,
    /// `a = b = 0 (mod 4)`: five squares are needed and suffice.
    DivisibleByFourCriterion,
    /// No covered criterion applies; only empirical search data.
    EmpiricalOnly,
}

impl VerdictBasis {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictBasis::SquarefreeGcdCriterion => "squarefree_gcd_criterion",
            VerdictBasis::DivisibleByFourCriterion => "divisible_by_four_criterion",
            VerdictBasis::EmpiricalOnly => "empirical_only",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WaringVerdict {
    pub g_value: GValue,
    pub basis: VerdictBasis,
}

/// Classifies `g_{a,b}(2)` from the two known families; everything else is
/// `Unknown` and left to empirical search.
pub fn classify_waring(ring: &RingParams) -> WaringVerdict {
    if ring.theorem_applicable() {
        WaringVerdict {
            g_value: GValue::Three,
            basis: VerdictBasis::SquarefreeGcdCriterion,
        }
    } else if ring.a() % 4 == 0 && ring.b() % 4 == 0 {
        WaringVerdict {
            g_value: GValue::Five,
            basis: VerdictBasis::DivisibleByFourCriterion,
        }
    } else {
        WaringVerdict {
            g_value: GValue::Unknown,
            basis: VerdictBasis::EmpiricalOnly,
        }
    }
}

/// Restricts which rings a survey visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingFilter {
    All,
    /// Only rings where the three-squares guarantee holds.
    TheoremApplicable,
    /// Only rings outside the guarantee (the open cases).
    NotTheoremApplicable,
}

impl RingFilter {
    fn admits(&self, ring: &RingParams) -> bool {
        match self {
            RingFilter::All => true,
            RingFilter::TheoremApplicable => ring.theorem_applicable(),
            RingFilter::NotTheoremApplicable => !ring.theorem_applicable(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurveyStatus {
    Ok,
    Fail,
}

/// One survey outcome. Failures are data (the open rings are expected to
/// produce some), so they ride in the stream rather than aborting it. Each
/// item is marked with the classification basis of its ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyItem {
    pub a: i64,
    pub b: i64,
    pub alpha: Quaternion,
    pub status: SurveyStatus,
    pub basis: VerdictBasis,
    pub x: Option<Quaternion>,
    pub y: Option<Quaternion>,
    pub z: Option<Quaternion>,
    /// Stable error text, present only on failures.
    pub error: Option<String>,
}

/// JSON line shape:
/// `{"a":..,"b":..,"alpha":[..],"status":"ok|fail","basis":..,"x":[..],"y":[..],"z":[..]}`
/// with `x`, `y`, `z` null and an extra `"error"` field on failures.
impl Serialize for SurveyItem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = if self.error.is_some() { 9 } else { 8 };
        let mut s = serializer.serialize_struct("SurveyItem", n)?;
        s.serialize_field("a", &self.a)?;
        s.serialize_field("b", &self.b)?;
        s.serialize_field("alpha", &self.alpha)?;
        s.serialize_field(
            "status",
            match self.status {
                SurveyStatus::Ok => "ok",
                SurveyStatus::Fail => "fail",
            },
        )?;
        s.serialize_field("basis", self.basis.as_str())?;
        s.serialize_field("x", &self.x)?;
        s.serialize_field("y", &self.y)?;
        s.serialize_field("z", &self.z)?;
        if let Some(err) = &self.error {
            s.serialize_field("error", err)?;
        }
        s.end()
    }
}

fn survey_one(ring: &RingParams, alpha: &Quaternion, policy: Option<&SearchPolicy>) -> SurveyItem {
    let basis = classify_waring(ring).basis;
    match three_square_decompose(alpha, ring, policy) {
        Ok(triple) => SurveyItem {
            a: ring.a(),
            b: ring.b(),
            alpha: *alpha,
            status: SurveyStatus::Ok,
            basis,
            x: Some(triple.x()),
            y: Some(triple.y()),
            z: Some(triple.z()),
            error: None,
        },
        Err(e) => SurveyItem {
            a: ring.a(),
            b: ring.b(),
            alpha: *alpha,
            status: SurveyStatus::Fail,
            basis,
            x: None,
            y: None,
            z: None,
            error: Some(e.to_string()),
        },
    }
}

/// Attempts a three-squares decomposition for every ring `1 <= a <= max_a`,
/// `1 <= b <= max_b` admitted by `filter` and every `alpha` in the square
/// subgroup with `|components| <= max_coeff`.
///
/// Ordering is deterministic and independent of `jobs`: rings lexicographic
/// in `(a, b)`, then `alpha` lexicographic in its components. With
/// `jobs > 1` the items are processed on a thread pool but collected in the
/// same order.
pub fn survey(
    max_a: i64,
    max_b: i64,
    max_coeff: i64,
    filter: RingFilter,
    policy: Option<SearchPolicy>,
    jobs: usize,
) -> Vec<SurveyItem> {
    let mut tasks: Vec<(RingParams, Quaternion)> = Vec::new();
    let c = max_coeff.max(0);
    let half = c / 2;
    for a in 1..=max_a {
        for b in 1..=max_b {
            let ring = RingParams::new(a, b).expect("positive by construction");
            if !filter.admits(&ring) {
                continue;
            }
            for x0 in -c..=c {
                for h1 in -half..=half {
                    for h2 in -half..=half {
                        for h3 in -half..=half {
                            tasks.push((ring, Quaternion::new(x0, 2 * h1, 2 * h2, 2 * h3)));
                        }
                    }
                }
            }
        }
    }

    if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            tasks
                .par_iter()
                .map(|(ring, alpha)| survey_one(ring, alpha, policy.as_ref()))
                .collect()
        })
    } else {
        tasks
            .iter()
            .map(|(ring, alpha)| survey_one(ring, alpha, policy.as_ref()))
            .collect()
    }
}
