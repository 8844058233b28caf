//! Python bindings: thin functional wrappers over the core library.
//!
//! Quaternions cross the boundary as 4-tuples `(x0, x1, x2, x3)`, modular
//! certificates as dicts `{"modulus", "value", "residues"}`, and exact
//! solutions as dicts `{"d", "a", "b", "tuple"}`. Precondition violations
//! raise `ValueError`; exhausted searches and scan budgets raise
//! `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use quaring::{
    DiagonalForm, Error, ModularRepresentation, Quaternion, RingFilter, RingParams, SearchPolicy,
    SurveyStatus,
};

type Quad = (i64, i64, i64, i64);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::SearchBoundExceeded { .. } | Error::BudgetExceeded(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn ring(a: i64, b: i64) -> PyResult<RingParams> {
    RingParams::new(a, b).map_err(to_py_err)
}

fn quat(q: Quad) -> Quaternion {
    Quaternion::new(q.0, q.1, q.2, q.3)
}

fn quad(q: &Quaternion) -> Quad {
    (q.x0, q.x1, q.x2, q.x3)
}

fn policy(d: i64, ring: &RingParams, max_x0: Option<i64>) -> PyResult<SearchPolicy> {
    match max_x0 {
        Some(bound) => SearchPolicy::failing(bound).map_err(to_py_err),
        None => Ok(SearchPolicy::default_for(d, ring)),
    }
}

fn rep_dict<'py>(py: Python<'py>, rep: &ModularRepresentation) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("modulus", rep.modulus())?;
    out.set_item("value", rep.value())?;
    out.set_item("residues", rep.residues().to_vec())?;
    Ok(out)
}

/// Dict form of a modular certificate, as produced by the functions here.
#[derive(FromPyObject)]
struct RepIn {
    #[pyo3(item("modulus"))]
    modulus: i64,
    #[pyo3(item("value"))]
    value: i64,
    #[pyo3(item("residues"))]
    residues: [i64; 4],
}

/// Product in LQ_{a,b}: i^2 = -a, j^2 = -b, ij = -ji = k.
#[pyfunction]
fn multiply(p: Quad, q: Quad, a: i64, b: i64) -> PyResult<Quad> {
    let r = ring(a, b)?;
    quaring::multiply(&quat(p), &quat(q), &r)
        .map(|out| quad(&out))
        .map_err(to_py_err)
}

/// Square in LQ_{a,b}; agrees with `multiply(x, x, a, b)`.
#[pyfunction]
fn square(x: Quad, a: i64, b: i64) -> PyResult<Quad> {
    let r = ring(a, b)?;
    quaring::square(&quat(x), &r)
        .map(|out| quad(&out))
        .map_err(to_py_err)
}

/// Membership in the subgroup generated by squares (all pure coefficients
/// even); independent of a and b.
#[pyfunction]
fn in_square_subgroup(alpha: Quad) -> bool {
    quaring::in_square_subgroup(&quat(alpha))
}

/// One-step Hensel lift of the quadratic h = (h0, h1, h2) at the root c mod
/// the odd prime p; returns gamma in [0, p^2).
#[pyfunction]
fn hensel_lift(h: (i64, i64, i64), c: i64, p: i64) -> PyResult<i64> {
    quaring::hensel_lift(&[h.0, h.1, h.2], c, p).map_err(to_py_err)
}

/// Proper representation of square-free d mod p^2 for an odd prime p | ab.
#[pyfunction]
fn proper_rep_mod_p2(
    py: Python<'_>,
    d: i64,
    p: i64,
    a: i64,
    b: i64,
) -> PyResult<Bound<'_, PyDict>> {
    let r = ring(a, b)?;
    let rep = quaring::proper_rep_mod_p2(d, p, &r).map_err(to_py_err)?;
    rep_dict(py, &rep)
}

/// Proper representation of d (not 0 mod 4) mod the power of 2 in
/// 2^4 a^2 b^2.
#[pyfunction]
fn proper_rep_mod_2nu(py: Python<'_>, d: i64, a: i64, b: i64) -> PyResult<Bound<'_, PyDict>> {
    let r = ring(a, b)?;
    let rep = quaring::proper_rep_mod_2nu(d, &r).map_err(to_py_err)?;
    rep_dict(py, &rep)
}

/// Glues two proper representations of the same value at coprime moduli.
#[pyfunction]
fn glue<'py>(
    py: Python<'py>,
    rep_m: RepIn,
    rep_n: RepIn,
    a: i64,
    b: i64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = ring(a, b)?;
    let form = DiagonalForm::from_ring(&r).map_err(to_py_err)?;
    let m = ModularRepresentation::new(&form, rep_m.residues, rep_m.modulus, rep_m.value)
        .map_err(to_py_err)?;
    let n = ModularRepresentation::new(&form, rep_n.residues, rep_n.modulus, rep_n.value)
        .map_err(to_py_err)?;
    let glued = quaring::glue(&m, &n, &form).map_err(to_py_err)?;
    rep_dict(py, &glued)
}

/// The combined certificate mod 2^4 a^2 b^2; success guarantees the form
/// represents d over the integers.
#[pyfunction]
fn watson_condition(py: Python<'_>, d: i64, a: i64, b: i64) -> PyResult<Bound<'_, PyDict>> {
    let r = ring(a, b)?;
    let rep = quaring::watson_condition(d, &r).map_err(to_py_err)?;
    rep_dict(py, &rep)
}

/// Exhaustive oracle: least proper representation of d mod modulus under
/// the diagonal form with the given coefficients, or None.
#[pyfunction]
fn exhaustive_proper_rep(
    py: Python<'_>,
    d: i64,
    modulus: i64,
    coeffs: (i64, i64, i64, i64),
) -> PyResult<Option<Bound<'_, PyDict>>> {
    let form = DiagonalForm::new(coeffs.0, coeffs.1, coeffs.2, coeffs.3).map_err(to_py_err)?;
    match quaring::exhaustive_proper_rep(d, modulus, &form).map_err(to_py_err)? {
        Some(rep) => Ok(Some(rep_dict(py, &rep)?)),
        None => Ok(None),
    }
}

/// Writes d = m^2 * d0 with d0 square-free; returns (m, d0).
#[pyfunction]
fn strip_square_factor(d: i64) -> PyResult<(i64, i64)> {
    quaring::strip_square_factor(d).map_err(to_py_err)
}

/// Canonical exact solution of x0^2 - a*y1^2 - b*y2^2 - ab*y3^2 = d.
#[pyfunction]
#[pyo3(signature = (d, a, b, max_x0=None))]
fn represent_integer(
    py: Python<'_>,
    d: i64,
    a: i64,
    b: i64,
    max_x0: Option<i64>,
) -> PyResult<Bound<'_, PyDict>> {
    let r = ring(a, b)?;
    let p = policy(d, &r, max_x0)?;
    let rep = quaring::represent_integer(d, &r, &p).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("d", rep.d())?;
    out.set_item("a", a)?;
    out.set_item("b", b)?;
    out.set_item("tuple", rep.tuple().to_vec())?;
    Ok(out)
}

/// Splits d into x^2 + y^2 with x strictly real and y strictly pure.
#[pyfunction]
#[pyo3(signature = (d, a, b, max_x0=None))]
fn represent_two_squares(d: i64, a: i64, b: i64, max_x0: Option<i64>) -> PyResult<(Quad, Quad)> {
    let r = ring(a, b)?;
    let p = policy(d, &r, max_x0)?;
    let (x, y) = quaring::represent_two_squares(d, &r, &p).map_err(to_py_err)?;
    Ok((quad(&x), quad(&y)))
}

/// Least integer residue class mod `modulus` unreachable as a sum of two
/// quaternion squares, or None when every class is covered.
#[pyfunction]
fn two_square_obstruction(a: i64, b: i64, modulus: i64) -> PyResult<Option<i64>> {
    let r = ring(a, b)?;
    quaring::two_square_obstruction(&r, modulus).map_err(to_py_err)
}

/// Writes alpha (in the square subgroup) as x^2 + y^2 + z^2.
#[pyfunction]
#[pyo3(signature = (alpha, a, b, max_x0=None))]
fn three_square_decompose(
    py: Python<'_>,
    alpha: Quad,
    a: i64,
    b: i64,
    max_x0: Option<i64>,
) -> PyResult<Bound<'_, PyDict>> {
    let r = ring(a, b)?;
    let built;
    let pol = match max_x0 {
        Some(bound) => {
            built = SearchPolicy::failing(bound).map_err(to_py_err)?;
            Some(&built)
        }
        None => None,
    };
    let triple = quaring::three_square_decompose(&quat(alpha), &r, pol).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("a", a)?;
    out.set_item("b", b)?;
    out.set_item("alpha", quad(&triple.alpha()))?;
    out.set_item("x", quad(&triple.x()))?;
    out.set_item("y", quad(&triple.y()))?;
    out.set_item("z", quad(&triple.z()))?;
    Ok(out)
}

/// Classification of g_{a,b}(2): {"g": 3 | 5 | None, "basis": str}.
#[pyfunction]
fn classify_waring(py: Python<'_>, a: i64, b: i64) -> PyResult<Bound<'_, PyDict>> {
    let r = ring(a, b)?;
    let verdict = quaring::classify_waring(&r);
    let out = PyDict::new(py);
    out.set_item("g", verdict.g_value.as_number())?;
    out.set_item("basis", verdict.basis.as_str())?;
    Ok(out)
}

/// Deterministic survey over rings up to (max_a, max_b) and subgroup
/// elements with |components| <= max_coeff; returns a list of dicts.
#[pyfunction]
#[pyo3(signature = (max_a, max_b, max_coeff, jobs=1))]
fn survey(
    py: Python<'_>,
    max_a: i64,
    max_b: i64,
    max_coeff: i64,
    jobs: usize,
) -> PyResult<Bound<'_, PyList>> {
    let items = quaring::survey(max_a, max_b, max_coeff, RingFilter::All, None, jobs);
    let list = PyList::empty(py);
    for item in items {
        let entry = PyDict::new(py);
        entry.set_item("a", item.a)?;
        entry.set_item("b", item.b)?;
        entry.set_item("alpha", quad(&item.alpha))?;
        entry.set_item(
            "status",
            if item.status == SurveyStatus::Ok {
                "ok"
            } else {
                "fail"
            },
        )?;
        entry.set_item("basis", item.basis.as_str())?;
        entry.set_item("x", item.x.map(|q| quad(&q)))?;
        entry.set_item("y", item.y.map(|q| quad(&q)))?;
        entry.set_item("z", item.z.map(|q| quad(&q)))?;
        if let Some(err) = item.error {
            entry.set_item("error", err)?;
        }
        list.append(entry)?;
    }
    Ok(list)
}

/// Truncated Euler product for the strongly-carefree constant K, plus 9K/8
/// and the tail bound.
#[pyfunction]
fn carefree_constant(py: Python<'_>, prime_cutoff: u64) -> PyResult<Bound<'_, PyDict>> {
    let est = quaring::carefree_constant(prime_cutoff).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("prime_cutoff", est.prime_cutoff)?;
    out.set_item("k_value", est.k_value)?;
    out.set_item("tail_bound", est.tail_bound)?;
    out.set_item("nine_eighths", est.nine_eighths)?;
    Ok(out)
}

/// Exact pair counts up to x: strongly carefree couples, their parity
/// split, and the gcd <= 2 superset.
#[pyfunction]
fn empirical_counts(py: Python<'_>, x: u32) -> PyResult<Bound<'_, PyDict>> {
    let counts = quaring::empirical_counts(x).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("x", counts.x)?;
    out.set_item("c", counts.c)?;
    out.set_item("c_ev", counts.c_ev)?;
    out.set_item("c_od", counts.c_od)?;
    out.set_item("cc", counts.cc)?;
    Ok(out)
}

/// CSV sweep table over the given bounds.
#[pyfunction]
fn sweep_csv(xs: Vec<u32>) -> PyResult<String> {
    quaring::sweep_csv(&xs).map_err(to_py_err)
}

#[pymodule]
fn quaring_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(multiply, m)?)?;
    m.add_function(wrap_pyfunction!(square, m)?)?;
    m.add_function(wrap_pyfunction!(in_square_subgroup, m)?)?;
    m.add_function(wrap_pyfunction!(hensel_lift, m)?)?;
    m.add_function(wrap_pyfunction!(proper_rep_mod_p2, m)?)?;
    m.add_function(wrap_pyfunction!(proper_rep_mod_2nu, m)?)?;
    m.add_function(wrap_pyfunction!(glue, m)?)?;
    m.add_function(wrap_pyfunction!(watson_condition, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_proper_rep, m)?)?;
    m.add_function(wrap_pyfunction!(strip_square_factor, m)?)?;
    m.add_function(wrap_pyfunction!(represent_integer, m)?)?;
    m.add_function(wrap_pyfunction!(represent_two_squares, m)?)?;
    m.add_function(wrap_pyfunction!(two_square_obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(three_square_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(classify_waring, m)?)?;
    m.add_function(wrap_pyfunction!(survey, m)?)?;
    m.add_function(wrap_pyfunction!(carefree_constant, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_counts, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    Ok(())
}
