//! Python bindings: categories, closed invariants, the extended functor and
//! the axiom verifier.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use tqft::diagram::parse_diagram;
use tqft::report;
use tqft::surgery::tau_closed_detail;
use tqft::tqft2::functor::{multi_indices, parse_cobordism, x_blocks, x_one_morphism};
use tqft::tqft2::twovect::twomatrix_multiply;
use tqft::tqft2::types::{compose_types, DecoratedType};
use tqft::tqft2::verify::{verify_axioms, SampleSet};
use tqft::{bundled_category, parse_category, Error, ModularCategoryData, Scalar};

create_exception!(ribbon_tqft, InputError, PyValueError);
create_exception!(ribbon_tqft, DomainError, PyRuntimeError);

fn py_err(e: Error) -> PyErr {
    if e.is_input_error() {
        InputError::new_err(e.to_string())
    } else {
        DomainError::new_err(e.to_string())
    }
}

fn rows(m: &nalgebra::DMatrix<Scalar>) -> Vec<Vec<Scalar>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()
}

/// A validated modular category.
#[pyclass(name = "Category", module = "ribbon_tqft", frozen)]
struct PyCategory {
    inner: ModularCategoryData,
}

#[pymethods]
impl PyCategory {
    /// One of the bundled categories: "trivial", "semion", "fibonacci".
    #[staticmethod]
    fn bundled(name: &str) -> PyResult<Self> {
        Ok(Self { inner: bundled_category(name).map_err(py_err)? })
    }

    /// Parse a category from its JSON text. Validation is separate.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: parse_category(text).map_err(py_err)? })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels.clone()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn twists(&self) -> Vec<Scalar> {
        self.inner.twist.clone()
    }

    #[getter]
    fn quantum_dimensions(&self) -> Vec<Scalar> {
        self.inner.qdim.clone()
    }

    #[getter]
    fn global_dimension(&self) -> Scalar {
        self.inner.rank_d()
    }

    #[getter]
    fn gauss_sum(&self) -> PyResult<Scalar> {
        self.inner.delta().map_err(py_err)
    }

    fn fusion(&self, i: usize, j: usize, k: usize) -> PyResult<u32> {
        let r = self.inner.rank();
        if i >= r || j >= r || k >= r {
            return Err(InputError::new_err(format!("label index out of range for rank {r}")));
        }
        Ok(self.inner.n(i, j, k))
    }

    /// Unnormalized S-matrix as nested lists.
    fn s_matrix(&self) -> Vec<Vec<Scalar>> {
        rows(&self.inner.s_tilde())
    }

    /// `(all_passed, json_report)` for the category axioms.
    fn validate(&self) -> (bool, String) {
        let v = self.inner.validate();
        (v.all_passed(), report::to_string(&report::category(&self.inner, &v)))
    }

    /// `τ` of a closed ribbon diagram given in the diagram text format.
    fn tau(&self, diagram: &str) -> PyResult<Scalar> {
        let d = parse_diagram(diagram).map_err(py_err)?;
        Ok(tau_closed_detail(&self.inner, &d).map_err(py_err)?.tau)
    }

    /// JSON report with `tau`, `bracket`, `sigma` and `mu`.
    fn closed_invariant(&self, diagram: &str) -> PyResult<String> {
        let d = parse_diagram(diagram).map_err(py_err)?;
        let inv = tau_closed_detail(&self.inner, &d).map_err(py_err)?;
        Ok(report::to_string(&report::closed(&self.inner, &inv)))
    }

    /// All blocks of the functor on a cobordism file.
    fn eval_functor(&self, cobordism: &str) -> PyResult<Vec<Block>> {
        let c = parse_cobordism(cobordism).map_err(py_err)?;
        let grid = x_blocks(&self.inner, &c).map_err(py_err)?;
        let ri = multi_indices(self.inner.rank(), c.bottom.m);
        let ci = multi_indices(self.inner.rank(), c.bottom.n);
        let name = |v: &[usize]| v.iter().map(|&l| self.inner.labels[l].clone()).collect();
        let mut out = Vec::new();
        for (r, row) in grid.iter().enumerate() {
            for (k, b) in row.iter().enumerate() {
                out.push(Block {
                    i: name(&ri[r]),
                    j: name(&ci[k]),
                    sigma: b.sigma,
                    mu: b.mu,
                    matrix: rows(&b.assembled()),
                });
            }
        }
        Ok(out)
    }

    /// Same blocks as a JSON report.
    fn eval_functor_json(&self, cobordism: &str) -> PyResult<String> {
        let c = parse_cobordism(cobordism).map_err(py_err)?;
        let grid = x_blocks(&self.inner, &c).map_err(py_err)?;
        let ri = multi_indices(self.inner.rank(), c.bottom.m);
        let ci = multi_indices(self.inner.rank(), c.bottom.n);
        let v = serde_json::json!({
            "schema": report::SCHEMA,
            "command": "eval-functor",
            "category": self.inner.name,
            "bottom": c.bottom.to_string(),
            "top": c.top.to_string(),
            "blocks": report::block_grid(&self.inner, &grid, &ri, &ci),
        });
        Ok(report::to_string(&v))
    }

    /// Dimensions of the 2-matrix assigned to a decorated type.
    fn one_morphism_dims(&self, t: &PyType) -> PyResult<Vec<Vec<usize>>> {
        Ok(x_one_morphism(&self.inner, &t.inner).map_err(py_err)?.dims())
    }

    /// `(composite, product_dims, composite_dims)`.
    fn compose_types(&self, first: &PyType, second: &PyType) -> PyResult<(PyType, Vec<Vec<usize>>, Vec<Vec<usize>>)> {
        let c = compose_types(&first.inner, &second.inner).map_err(py_err)?;
        let a = x_one_morphism(&self.inner, &first.inner).map_err(py_err)?;
        let b = x_one_morphism(&self.inner, &second.inner).map_err(py_err)?;
        let prod = twomatrix_multiply(&a, &b).map_err(py_err)?;
        let direct = x_one_morphism(&self.inner, &c).map_err(py_err)?;
        Ok((PyType { inner: c }, prod.dims(), direct.dims()))
    }

    /// Run the axiom verifier; `samples` are extra cobordism texts.
    #[pyo3(signature = (samples = Vec::new(), tolerance = None))]
    fn verify(&self, py: Python<'_>, samples: Vec<String>, tolerance: Option<f64>) -> PyResult<(bool, String)> {
        let mut set = SampleSet::default();
        for (k, s) in samples.iter().enumerate() {
            set.cobordisms.push((format!("sample{k}"), parse_cobordism(s).map_err(py_err)?));
        }
        let tol = tolerance.unwrap_or(self.inner.tolerance);
        let cat = &self.inner;
        let (outcomes, ledger) = py.detach(|| verify_axioms(cat, &set, tol));
        let ok = outcomes.iter().all(|o| o.passed);
        Ok((ok, report::to_string(&report::axioms(cat, &outcomes, &ledger))))
    }

    fn __repr__(&self) -> String {
        format!("Category({:?}, rank={})", self.inner.name, self.inner.rank())
    }
}

/// One block `X(M)_{ij}` with `i`, `j` as label tuples.
#[pyclass(module = "ribbon_tqft", frozen, get_all)]
struct Block {
    i: Vec<String>,
    j: Vec<String>,
    sigma: i64,
    mu: usize,
    matrix: Vec<Vec<Scalar>>,
}

#[pymethods]
impl Block {
    fn __repr__(&self) -> String {
        let n = self.matrix.len();
        let m = self.matrix.first().map_or(0, Vec::len);
        format!("Block(i={:?}, j={:?}, {n}x{m})", self.i, self.j)
    }
}

/// A decorated type such as `(1,1; 1, (tau,+))`.
#[pyclass(name = "DecoratedType", module = "ribbon_tqft", frozen, eq, hash)]
#[derive(PartialEq, Eq, Hash)]
struct PyType {
    inner: DecoratedType,
}

#[pymethods]
impl PyType {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self { inner: text.parse().map_err(py_err)? })
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    fn compose(&self, other: &PyType) -> PyResult<PyType> {
        Ok(PyType { inner: compose_types(&self.inner, &other.inner).map_err(py_err)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DecoratedType({:?})", self.inner.to_string())
    }
}

#[pymodule]
fn ribbon_tqft(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCategory>()?;
    m.add_class::<PyType>()?;
    m.add_class::<Block>()?;
    m.add("InputError", m.py().get_type::<InputError>())?;
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add("BUNDLED", tqft::mtc::BUNDLED.to_vec())?;
    Ok(())
}
