//! Python bindings: `import tensorcat`.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde_json::Value;

use tensorcat::algebra::{self, AlgebraObject};
use tensorcat::category::{self as cat, CategoryData, CategoryFile};
use tensorcat::center::{self, CenterData};
use tensorcat::diagram::{self, vertex_env};
use tensorcat::local_modules;
use tensorcat::{braided, C64};

create_exception!(tensorcat, TensorcatError, PyException);

fn err(e: tensorcat::Error) -> PyErr {
    TensorcatError::new_err(e.to_string())
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    match v {
        Value::Null => Ok(py.None()),
        Value::Bool(b) => b.into_py_any(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_py_any(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_py_any(py),
        },
        Value::String(s) => s.into_py_any(py),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_py_any(py)
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_py_any(py)
        }
    }
}

fn report<T: serde::Serialize>(py: Python<'_>, r: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(r).map_err(|e| TensorcatError::new_err(e.to_string()))?;
    to_py(py, &v)
}

fn rows(m: &nalgebra::DMatrix<C64>) -> Vec<Vec<C64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// A (braided) unitary fusion category given by skeletal data.
#[pyclass(frozen, name = "Category")]
struct PyCategory {
    cd: CategoryData,
}

impl PyCategory {
    fn label(&self, name: &str) -> PyResult<usize> {
        self.cd
            .ring
            .label_index(name)
            .ok_or_else(|| TensorcatError::new_err(format!("unknown label `{name}`")))
    }

    fn labels_of(&self, sub: Vec<String>) -> PyResult<Vec<usize>> {
        sub.iter().map(|s| self.label(s)).collect()
    }

    fn names(&self, xs: &[usize]) -> Vec<String> {
        xs.iter().map(|&x| self.cd.label(x).to_string()).collect()
    }
}

#[pymethods]
impl PyCategory {
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        Ok(PyCategory { cd: cat::catalog(name).map_err(err)? })
    }

    #[staticmethod]
    fn catalog_names() -> Vec<&'static str> {
        cat::catalog_names().map(|e| e.name).collect()
    }

    #[staticmethod]
    #[pyo3(signature = (path, validate = true))]
    fn load(path: &str, validate: bool) -> PyResult<Self> {
        Ok(PyCategory { cd: cat::load_category(path, validate).map_err(err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (text, validate = true))]
    fn from_json(text: &str, validate: bool) -> PyResult<Self> {
        Ok(PyCategory { cd: cat::load_category_str(text, validate).map_err(err)? })
    }

    fn to_json(&self) -> String {
        cat::save_category_string(&self.cd)
    }

    #[getter]
    fn rank(&self) -> usize {
        self.cd.rank()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.cd.ring.labels().to_vec()
    }

    #[getter]
    fn dims(&self) -> Vec<f64> {
        self.cd.dims.dims.clone()
    }

    #[getter]
    fn global_dim(&self) -> f64 {
        self.cd.global_dim()
    }

    #[getter]
    fn braided(&self) -> bool {
        self.cd.is_braided()
    }

    fn fuse(&self, a: &str, b: &str) -> PyResult<Vec<String>> {
        Ok(self.names(self.cd.fuse(self.label(a)?, self.label(b)?)))
    }

    /// Coherence violations as dicts; empty for valid data.
    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        report(py, &self.cd.validate())
    }

    fn twists(&self) -> PyResult<Vec<C64>> {
        Ok(braided::twists(&self.cd).map_err(err)?.theta)
    }

    #[pyo3(signature = (normalized = true))]
    fn s_matrix(&self, normalized: bool) -> PyResult<Vec<Vec<C64>>> {
        let s = braided::s_matrix(&self.cd).map_err(err)?;
        Ok(rows(&if normalized { s.normalized(self.cd.global_dim()) } else { s.s }))
    }

    fn characters(&self) -> PyResult<Vec<Vec<C64>>> {
        Ok(rows(&braided::gamma_characters(&self.cd).map_err(err)?.gamma))
    }

    fn is_nondegenerate(&self) -> PyResult<bool> {
        braided::is_nondegenerate(&self.cd).map_err(err)
    }

    fn muger_centralizer(&self, sub: Vec<String>) -> PyResult<Vec<String>> {
        let sub = self.labels_of(sub)?;
        Ok(self.names(&braided::muger_centralizer(&self.cd, &sub).map_err(err)?))
    }

    fn find_centralizing_object(&self, sub: Vec<String>) -> PyResult<Option<String>> {
        let sub = self.labels_of(sub)?;
        let found = braided::find_centralizing_object(&self.cd, &sub).map_err(err)?;
        Ok(found.map(|x| self.cd.label(x).to_string()))
    }

    fn kappa(&self, g: &str) -> PyResult<C64> {
        cat::kappa_of(&self.cd, self.label(g)?).map_err(err)
    }

    fn reverse(&self) -> PyResult<Self> {
        Ok(PyCategory { cd: cat::reverse_braiding(&self.cd).map_err(err)? })
    }

    fn deligne(&self, other: &PyCategory) -> PyResult<Self> {
        Ok(PyCategory { cd: cat::deligne_product_data(&self.cd, &other.cd).map_err(err)? })
    }

    fn canonical_algebra(&self, x: &str) -> PyResult<PyAlgebra> {
        Ok(PyAlgebra { alg: algebra::canonical_algebra(&self.cd, self.label(x)?).map_err(err)? })
    }

    fn subgroup_algebra(&self, subgroup: Vec<String>) -> PyResult<PyAlgebra> {
        let h = self.labels_of(subgroup)?;
        Ok(PyAlgebra { alg: algebra::pointed_subgroup_algebra(&self.cd, &h).map_err(err)? })
    }

    /// Evaluates a diagram with `v[a,b,c]` vertices bound; returns `{source, target, blocks, scalar}`.
    fn evaluate(&self, py: Python<'_>, expr: &str) -> PyResult<Py<PyAny>> {
        let mv = diagram::evaluate_str(expr, &self.cd, &vertex_env(&self.cd.ring)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("source", self.names(&mv.source))?;
        d.set_item("target", self.names(&mv.target))?;
        let blocks = PyDict::new(py);
        for (c, b) in mv.blocks.iter().enumerate().filter(|(_, b)| !b.is_empty()) {
            blocks.set_item(self.cd.label(c), rows(b))?;
        }
        d.set_item("blocks", blocks)?;
        d.set_item("scalar", mv.scalar())?;
        Ok(d.into_any().unbind())
    }

    fn __repr__(&self) -> String {
        format!("Category(rank={}, labels={:?})", self.cd.rank(), self.cd.ring.labels())
    }
}

/// A multiplicity-free algebra object with multiplication coefficients μ.
#[pyclass(frozen, name = "Algebra")]
struct PyAlgebra {
    alg: AlgebraObject,
}

#[pymethods]
impl PyAlgebra {
    #[getter]
    fn support(&self) -> Vec<usize> {
        self.alg.support.clone()
    }

    fn dim(&self, cat: &PyCategory) -> f64 {
        algebra::algebra_dim(&cat.cd, &self.alg)
    }

    fn verify_qsystem(&self, py: Python<'_>, cat: &PyCategory) -> PyResult<Py<PyAny>> {
        report(py, &algebra::verify_qsystem(&cat.cd, &self.alg).map_err(err)?)
    }

    fn is_commutative(&self, cat: &PyCategory) -> PyResult<(bool, f64)> {
        algebra::is_commutative(&cat.cd, &self.alg).map_err(err)
    }

    /// Supports (as label lists) of the simple local modules.
    #[pyo3(signature = (cat, seed = 0))]
    fn local_modules(&self, cat: &PyCategory, seed: u64) -> PyResult<Vec<Vec<String>>> {
        let data = local_modules::enumerate_local_modules_with(&cat.cd, &self.alg, seed, local_modules::DEDUP_TOL).map_err(err)?;
        Ok(data.simples.iter().map(|m| cat.names(&m.support())).collect())
    }

    fn condense(&self, py: Python<'_>, cat: &PyCategory) -> PyResult<Py<PyAny>> {
        report(py, &local_modules::condensation_identity_check(&cat.cd, &self.alg).map_err(err)?)
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.alg.to_file()).expect("algebra serializes")
    }
}

/// Simples and modular data of the Drinfeld center.
#[pyclass(frozen, name = "Center")]
struct PyCenter {
    cd: CategoryData,
    z: CenterData,
}

#[pymethods]
impl PyCenter {
    #[new]
    #[pyo3(signature = (cat, seed = 0))]
    fn new(py: Python<'_>, cat: &PyCategory, seed: u64) -> PyResult<Self> {
        let cd = cat.cd.clone();
        let z = py
            .detach(|| center::build_tube_algebra(&cd).and_then(|t| center::decompose_center(&cd, &t, seed)))
            .map_err(err)?;
        Ok(PyCenter { cd, z })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.z.rank()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.z.labels.clone()
    }

    #[getter]
    fn dims(&self) -> Vec<f64> {
        self.z.dims()
    }

    #[getter]
    fn twists(&self) -> Vec<C64> {
        self.z.twists()
    }

    #[getter]
    fn underlying(&self) -> Vec<Vec<usize>> {
        self.z.simples.iter().map(|s| s.underlying.clone()).collect()
    }

    fn s_matrix(&self) -> Vec<Vec<C64>> {
        rows(&self.z.normalized_s())
    }

    #[getter]
    fn presentation(&self) -> Option<String> {
        self.z.presentation.as_ref().map(|p| p.description.clone())
    }

    fn theorem_c(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        report(py, &center::theorem_c_report(&self.cd, &self.z).map_err(err)?)
    }

    /// The presentation category of Z(C) and the Lagrangian algebra I(1) in it.
    fn lagrangian(&self) -> PyResult<(PyCategory, PyAlgebra)> {
        let (cd, alg) = center::lagrangian_algebra(&self.z).map_err(err)?;
        Ok((PyCategory { cd }, PyAlgebra { alg }))
    }

    fn partial_category_json(&self) -> PyResult<String> {
        let file: CategoryFile = self.z.to_partial_file().map_err(err)?;
        serde_json::to_string_pretty(&file).map_err(|e| TensorcatError::new_err(e.to_string()))
    }
}

/// Runs the command line with `args` (without the program name); returns `(exit_code, stdout)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let code = tensorcat::cli::run(std::iter::once("tensorcat".to_string()).chain(args), &mut out, &mut errs);
    (code, String::from_utf8_lossy(&out).into_owned())
}

#[pymodule(name = "tensorcat")]
fn tensorcat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TensorcatError", m.py().get_type::<TensorcatError>())?;
    m.add_class::<PyCategory>()?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyCenter>()?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
