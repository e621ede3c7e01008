//! Python bindings: curves, their Jacobians, two-variable zeta numerators
//! and factor counting.

use std::sync::Arc;

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use twozeta::abs_irr;
use twozeta::bipoly::BiPoly;
use twozeta::curve::HyperellipticModel;
use twozeta::jacobian::{group_add, group_neg, jacobian_elements, place_to_jacobian, scalar_mul, MumfordRep};
use twozeta::measure::{counting_data, CountingData};
use twozeta::parse::parse_curve_spec;
use twozeta::places::enumerate_places;
use twozeta::qpoly::Rational;
use twozeta::report::{run_analyze, run_verify, RunConfig, DEFAULT_MAX_WORK};
use twozeta::zeta_two::numerator_p;
use twozeta::Error;

fn to_py(e: Error) -> PyErr {
    if e.exit_code() == 2 {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

/// An odd-degree hyperelliptic curve `y^2 + h y = f` over `F_q`.
#[pyclass(frozen)]
struct Curve {
    model: Arc<HyperellipticModel>,
    data: CountingData,
    max_work: u64,
}

#[pymethods]
impl Curve {
    #[new]
    #[pyo3(signature = (spec, max_work = DEFAULT_MAX_WORK))]
    fn new(spec: &str, max_work: u64) -> PyResult<Self> {
        let parsed = parse_curve_spec(spec).map_err(to_py)?;
        let model = HyperellipticModel::from_spec(&parsed, max_work).map_err(to_py)?;
        let data = counting_data(&model, max_work).map_err(to_py)?;
        Ok(Curve {
            model: Arc::new(model),
            data,
            max_work,
        })
    }

    #[getter]
    fn genus(&self) -> usize {
        self.model.genus()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.model.q()
    }

    /// `a_1 .. a_n`, the point counts over `F_{q^m}`.
    fn point_counts(&self, n: usize) -> Vec<BigInt> {
        self.data.l.point_counts(n)
    }

    fn l_polynomial(&self) -> Vec<BigInt> {
        self.data.l.coeffs().to_vec()
    }

    fn class_number(&self) -> BigInt {
        twozeta::zeta_one::class_number(&self.data.l)
    }

    /// Rows `n`, columns `nu`: number of degree-`n` classes with `nu` sections.
    fn strata(&self) -> Vec<Vec<u64>> {
        self.data.strata.rows().to_vec()
    }

    /// Numerator `P(T, u)` as `[i][j] -> coefficient of T^i u^j` strings.
    fn numerator(&self) -> PyResult<Vec<Vec<String>>> {
        let z = numerator_p(&self.data.measure).map_err(to_py)?;
        Ok(z.numerator().matrix().iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect())
    }

    fn numerator_text(&self) -> PyResult<String> {
        Ok(numerator_p(&self.data.measure).map_err(to_py)?.numerator().to_string())
    }

    /// Every element of the Jacobian over the base field.
    fn jacobian(&self) -> PyResult<Vec<JacobianElement>> {
        let els = jacobian_elements(&self.model, self.max_work).map_err(to_py)?;
        Ok(els.into_iter().map(|rep| self.element(rep)).collect())
    }

    /// Classes `[P - deg(P) inf]` of the places of degree `d`.
    fn place_classes(&self, d: usize) -> PyResult<Vec<JacobianElement>> {
        let table = enumerate_places(&self.model, d.max(1), self.max_work).map_err(to_py)?;
        Ok(table
            .of_degree(d)
            .iter()
            .map(|p| self.element(place_to_jacobian(p, &self.model)))
            .collect())
    }

    fn identity(&self) -> JacobianElement {
        self.element(MumfordRep::identity())
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.model.describe())
    }
}

impl Curve {
    fn element(&self, rep: MumfordRep) -> JacobianElement {
        JacobianElement {
            model: self.model.clone(),
            rep,
        }
    }
}

/// A reduced Mumford pair; supports `+`, unary `-`, `*` by an integer.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct JacobianElement {
    model: Arc<HyperellipticModel>,
    rep: MumfordRep,
}

#[pymethods]
impl JacobianElement {
    fn is_identity(&self) -> bool {
        self.rep.is_identity()
    }

    fn __add__(&self, other: &JacobianElement) -> JacobianElement {
        JacobianElement {
            model: self.model.clone(),
            rep: group_add(&self.rep, &other.rep, &self.model),
        }
    }

    fn __neg__(&self) -> JacobianElement {
        JacobianElement {
            model: self.model.clone(),
            rep: group_neg(&self.rep, &self.model),
        }
    }

    fn __mul__(&self, n: BigInt) -> JacobianElement {
        JacobianElement {
            model: self.model.clone(),
            rep: scalar_mul(&self.rep, &n, &self.model),
        }
    }

    fn __rmul__(&self, n: BigInt) -> JacobianElement {
        self.__mul__(n)
    }

    fn __eq__(&self, other: &JacobianElement) -> bool {
        self.rep == other.rep
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.rep.hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.rep.encode(&self.model)
    }

    fn __repr__(&self) -> String {
        format!("JacobianElement({})", self.rep.encode(&self.model))
    }
}

fn bipoly(terms: Vec<(usize, usize, BigInt)>) -> BiPoly {
    let mut p = BiPoly::zero();
    for (i, j, c) in terms {
        p.add_term(i, j, &Rational::from_integer(c));
    }
    p
}

/// Number of absolutely irreducible factors of `sum c T^i u^j`.
#[pyfunction]
fn abs_factor_count(terms: Vec<(usize, usize, BigInt)>) -> PyResult<usize> {
    Ok(abs_irr::abs_factor_count(&bipoly(terms)).map_err(to_py)?.abs_factor_count)
}

#[pyfunction]
fn is_squarefree(terms: Vec<(usize, usize, BigInt)>) -> bool {
    abs_irr::squarefree_check(&bipoly(terms))
}

fn config(spec: &str, base_change: u32, series_order: Option<usize>, max_work: u64) -> RunConfig {
    RunConfig {
        base_change,
        series_order,
        max_work,
        ..RunConfig::curve(spec)
    }
}

/// Full analysis; returns the canonical machine report.
#[pyfunction]
#[pyo3(signature = (spec, base_change = 1, series_order = None, max_work = DEFAULT_MAX_WORK))]
fn analyze(spec: &str, base_change: u32, series_order: Option<usize>, max_work: u64) -> PyResult<String> {
    let report = run_analyze(&config(spec, base_change, series_order, max_work)).map_err(to_py)?;
    Ok(report.to_machine())
}

/// Exit status of a verification run: 0 when every check passes.
#[pyfunction]
#[pyo3(signature = (spec, base_change = 1, max_work = DEFAULT_MAX_WORK))]
fn verify(spec: &str, base_change: u32, max_work: u64) -> i32 {
    run_verify(&config(spec, base_change, None, max_work))
}

#[pymodule]
pub fn twozeta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Curve>()?;
    m.add_class::<JacobianElement>()?;
    m.add_function(wrap_pyfunction!(abs_factor_count, m)?)?;
    m.add_function(wrap_pyfunction!(is_squarefree, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
