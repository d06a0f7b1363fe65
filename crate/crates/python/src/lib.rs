//! Python bindings: `import pyisoformal`.
// pyo3 0.22 macro expansion trips this lint on every PyResult return.
#![allow(clippy::useless_conversion)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Duration;

use isoformal::cartanmodel::{DegreeFact, Verdict};
use isoformal::catalog::{run_catalog, Bounds, Catalog, Report};
use isoformal::exactpoly::Polynomial;
use isoformal::groebner::{buchberger_in, ideal_member, MonomialOrder};
use isoformal::liegroups::make_group;
use isoformal::{check_space, oracle_space, BorelBase, SpaceQuery};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: isoformal::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn query(
    group: &str,
    subgroup: &str,
    embedding: Option<&str>,
    facts: Option<Vec<String>>,
    budget: u64,
) -> PyResult<SpaceQuery> {
    let mut q = SpaceQuery::new(group, subgroup, embedding);
    q.budget = Duration::from_secs(budget);
    for f in facts.unwrap_or_default() {
        q.facts.push(match f.as_str() {
            "killing-form" => DegreeFact::KillingForm,
            other => return Err(PyValueError::new_err(format!("unknown fact `{other}`"))),
        });
    }
    Ok(q)
}

/// Formality verdict for one space.
#[pyclass(name = "Verdict", module = "pyisoformal", frozen)]
struct PyVerdict(Verdict);

#[pymethods]
impl PyVerdict {
    #[getter]
    fn space(&self) -> String {
        self.0.space.clone()
    }

    /// `yes`, `no-witness-found` or `not-applicable`.
    #[getter]
    fn formal(&self) -> String {
        self.0.formal.to_string()
    }

    #[getter]
    fn equivariantly_formal(&self) -> String {
        self.0.equivariantly_formal.to_string()
    }

    #[getter]
    fn route(&self) -> Option<String> {
        self.0.route.map(|r| r.to_string())
    }

    /// Coefficients, lowest degree first.
    #[getter]
    fn poincare(&self) -> Option<Vec<u64>> {
        self.0.poincare.clone()
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.0.notes.clone()
    }

    fn all_yes(&self) -> bool {
        self.0.all_yes()
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.0).expect("verdict serializes")
    }

    fn __repr__(&self) -> String {
        format!(
            "Verdict({}, formal={}, equivariantly_formal={}, route={})",
            self.0.space,
            self.0.formal,
            self.0.equivariantly_formal,
            self.route().unwrap_or_else(|| "-".into())
        )
    }
}

#[pyfunction]
#[pyo3(signature = (group, subgroup, embedding=None, facts=None, budget=60))]
fn check(
    group: &str,
    subgroup: &str,
    embedding: Option<&str>,
    facts: Option<Vec<String>>,
    budget: u64,
) -> PyResult<PyVerdict> {
    let q = query(group, subgroup, embedding, facts, budget)?;
    check_space(&q).map(PyVerdict).map_err(err)
}

/// Betti numbers up to `max_degree` and whether restriction to the fiber is onto.
#[pyfunction]
#[pyo3(signature = (group, subgroup, embedding, max_degree, base="torus"))]
fn oracle(
    group: &str,
    subgroup: &str,
    embedding: &str,
    max_degree: u32,
    base: &str,
) -> PyResult<(Vec<u64>, bool)> {
    let base = match base {
        "torus" => BorelBase::Torus,
        "invariant" => BorelBase::Invariant,
        other => return Err(PyValueError::new_err(format!("unknown base `{other}`"))),
    };
    let q = SpaceQuery::new(group, subgroup, Some(embedding));
    let r = oracle_space(&q, max_degree, base).map_err(err)?;
    Ok((r.betti, r.surjective))
}

#[pyfunction]
fn weyl_order(group: &str) -> PyResult<u128> {
    make_group(group).map(|g| g.weyl_order()).map_err(err)
}

/// Exact polynomial in `t1..tn`, e.g. `Polynomial("t1^2 - 1/2*t2", 2)`.
#[pyclass(name = "Polynomial", module = "pyisoformal", frozen)]
#[derive(Clone)]
struct PyPolynomial(Polynomial);

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(text: &str, nvars: usize) -> PyResult<Self> {
        Polynomial::parse(text, nvars)
            .map(PyPolynomial)
            .map_err(err)
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.0.nvars()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __add__(&self, other: &PyPolynomial) -> PyResult<PyPolynomial> {
        self.0.checked_add(&other.0).map(PyPolynomial).map_err(err)
    }

    fn __sub__(&self, other: &PyPolynomial) -> PyResult<PyPolynomial> {
        self.0.checked_sub(&other.0).map(PyPolynomial).map_err(err)
    }

    fn __mul__(&self, other: &PyPolynomial) -> PyResult<PyPolynomial> {
        self.0.checked_mul(&other.0).map(PyPolynomial).map_err(err)
    }

    fn __eq__(&self, other: &PyPolynomial) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial(\"{}\", {})", self.0, self.0.nvars())
    }
}

fn polys(gens: Vec<PyPolynomial>) -> Vec<Polynomial> {
    gens.into_iter().map(|p| p.0).collect()
}

/// Reduced grevlex Gröbner basis.
#[pyfunction]
fn groebner_basis(gens: Vec<PyPolynomial>, nvars: usize) -> PyResult<Vec<PyPolynomial>> {
    let gb = buchberger_in(&polys(gens), nvars, MonomialOrder::grevlex()).map_err(err)?;
    Ok(gb.generators().iter().cloned().map(PyPolynomial).collect())
}

#[pyfunction]
fn ideal_contains(p: &PyPolynomial, gens: Vec<PyPolynomial>) -> PyResult<bool> {
    ideal_member(&p.0, &polys(gens))
        .map(|c| c.member)
        .map_err(err)
}

#[pyclass(name = "Report", module = "pyisoformal", frozen)]
struct PyReport(Report);

#[pymethods]
impl PyReport {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyReport> {
        Report::from_json(text).map(PyReport).map_err(err)
    }

    fn all_passed(&self) -> bool {
        self.0.all_passed()
    }

    /// Instance, pass and failure tallies as a dict.
    fn counts(&self) -> BTreeMap<String, usize> {
        let c = &self.0.counts;
        BTreeMap::from([
            ("instances".into(), c.instances),
            ("passed".into(), c.passed),
            ("inconclusive".into(), c.inconclusive),
            ("errors".into(), c.errors),
            ("route_mismatches".into(), c.route_mismatches),
            ("recheck_failures".into(), c.recheck_failures),
            ("oracle_runs".into(), c.oracle_runs),
            ("oracle_failures".into(), c.oracle_failures),
        ])
    }

    #[getter]
    fn failures(&self) -> Vec<String> {
        self.0.failures.clone()
    }

    fn spaces(&self) -> Vec<String> {
        self.0.instances.iter().map(|i| i.space.clone()).collect()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn table(&self) -> String {
        self.0.table()
    }
}

#[pyfunction]
#[pyo3(signature = (max_rank=8, oracle_dimension=None, family=None, path=None, budget=60))]
fn catalog_run(
    py: Python<'_>,
    max_rank: usize,
    oracle_dimension: Option<u32>,
    family: Option<String>,
    path: Option<PathBuf>,
    budget: u64,
) -> PyResult<PyReport> {
    let catalog = match path {
        Some(p) => Catalog::load(&p),
        None => Catalog::load_default(),
    }
    .map_err(err)?;
    let bounds = Bounds {
        max_rank,
        oracle_dimension,
        budget_seconds: budget,
        family_filter: family,
    };
    py.allow_threads(|| run_catalog(&catalog, &bounds))
        .map(PyReport)
        .map_err(err)
}

#[pymodule]
fn pyisoformal(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVerdict>()?;
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(weyl_order, m)?)?;
    m.add_function(wrap_pyfunction!(groebner_basis, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_contains, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_run, m)?)?;
    Ok(())
}
