//! Python bindings for `circular_seriation`.

use circular_seriation as cs;
use circular_seriation::cli::{format_matrix, parse_matrix, TreeDocument};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    circular_seriation,
    NotRobinsonError,
    PyValueError,
    "The matrix is not a relabelling of a strict circular Robinson matrix."
);

fn py_err(e: cs::Error) -> PyErr {
    match e {
        cs::Error::NotStrictPreCircularRobinson(msg) => NotRobinsonError::new_err(msg),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn perm(v: Vec<usize>) -> PyResult<cs::Permutation> {
    cs::Permutation::new(v).map_err(py_err)
}

fn perm_lists(s: &cs::SolutionSet) -> Vec<Vec<usize>> {
    s.iter().map(|p| p.as_slice().to_vec()).collect()
}

fn family(name: &str) -> PyResult<cs::DissimilarityFamily> {
    name.parse().map_err(py_err)
}

/// Symmetric nonnegative matrix with zero diagonal.
#[pyclass(name = "DissimilarityMatrix", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMatrix(cs::DissimilarityMatrix);

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        cs::DissimilarityMatrix::from_rows(&rows)
            .map(PyMatrix)
            .map_err(py_err)
    }

    /// Parses comma- or whitespace-separated rows.
    #[staticmethod]
    #[pyo3(signature = (text, round=None))]
    fn from_text(text: &str, round: Option<u32>) -> PyResult<Self> {
        parse_matrix(text, round).map(PyMatrix).map_err(py_err)
    }

    fn to_text(&self) -> String {
        format_matrix(&self.0)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn get(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.0.n();
        if i >= n || j >= n {
            return Err(py_err(cs::Error::IndexOutOfRange { index: i.max(j), n }));
        }
        Ok(self.0.get(i, j))
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.0.rows()
    }

    /// The matrix `(i, j) ↦ D(p[i], p[j])`.
    fn conjugate(&self, p: Vec<usize>) -> PyResult<Self> {
        self.0.conjugate(&perm(p)?).map(PyMatrix).map_err(py_err)
    }

    #[pyo3(signature = (strict=false))]
    fn is_circular_robinson(&self, strict: bool) -> bool {
        cs::is_circular_robinson(&self.0, strict)
    }

    #[pyo3(signature = (strict=false))]
    fn is_linear_robinson(&self, strict: bool) -> bool {
        cs::is_linear_robinson(&self.0, strict)
    }

    #[pyo3(signature = (ordering, strict=true))]
    fn verify_ordering(&self, ordering: Vec<usize>, strict: bool) -> PyResult<bool> {
        cs::verify_ordering(&self.0, &perm(ordering)?, strict).map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.0.n()
    }

    fn __repr__(&self) -> String {
        format!("DissimilarityMatrix(n={})", self.0.n())
    }
}

/// Tree of Q-nodes whose leaf orders are the represented orderings.
#[pyclass(name = "QTree", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyQTree(cs::QTree);

#[pymethods]
impl PyQTree {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        TreeDocument::from_json(text)
            .and_then(|d| d.to_tree())
            .map(PyQTree)
            .map_err(py_err)
    }

    fn to_json(&self) -> String {
        TreeDocument::from_tree(&self.0).to_json()
    }

    fn leaves(&self) -> Vec<usize> {
        self.0.leaves()
    }

    /// Nodes whose children may still be reversed.
    fn reversible_count(&self) -> usize {
        self.0.reversible_count()
    }

    fn depth(&self) -> usize {
        self.0.depth()
    }

    /// Orderings represented by the tree and whether the cap truncated them.
    #[pyo3(signature = (cap=cs::DEFAULT_ENUMERATION_CAP))]
    fn enumerate(&self, cap: usize) -> PyResult<(Vec<Vec<usize>>, bool)> {
        let e = self.0.enumerate_orderings(cap).map_err(py_err)?;
        Ok((perm_lists(&e.orderings), e.overflow))
    }

    fn __repr__(&self) -> String {
        format!("QTree({})", self.to_json())
    }
}

#[pyclass(name = "SeriationResult", frozen)]
struct PyResultObj(cs::SeriationResult);

#[pymethods]
impl PyResultObj {
    #[getter]
    fn tree(&self) -> PyQTree {
        PyQTree(self.0.tree.clone())
    }

    #[getter]
    fn representative(&self) -> Vec<usize> {
        self.0.representative().into_vec()
    }

    /// Every solving ordering (rotations and reflections included) and
    /// whether the cap truncated the tree enumeration.
    #[pyo3(signature = (cap=cs::DEFAULT_ENUMERATION_CAP))]
    fn solutions(&self, cap: usize) -> PyResult<(Vec<Vec<usize>>, bool)> {
        let (s, overflow) = self.0.solutions(cap).map_err(py_err)?;
        Ok((perm_lists(&s), overflow))
    }

    #[getter]
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = &self.0.stats;
        let d = PyDict::new(py);
        d.set_item("n", s.n)?;
        d.set_item("accesses", s.accesses)?;
        d.set_item("verification_accesses", s.verification_accesses)?;
        let mut levels = Vec::with_capacity(s.levels.len());
        for l in &s.levels {
            let ld = PyDict::new(py);
            ld.set_item("trees", l.trees)?;
            ld.set_item("components", l.components)?;
            ld.set_item("accesses", l.accesses)?;
            ld.set_item("max_border", l.max_border)?;
            ld.set_item("leaf_sets", l.leaf_sets.clone())?;
            levels.push(ld);
        }
        d.set_item("levels", levels)?;
        Ok(d)
    }
}

/// Runs the quadratic seriation algorithm; raises `NotRobinsonError` when
/// no strict circular Robinson ordering exists.
#[pyfunction]
fn seriate(py: Python<'_>, matrix: &PyMatrix) -> PyResult<PyResultObj> {
    let d = matrix.0.clone();
    py.detach(move || cs::recursive_seriation(&d))
        .map(PyResultObj)
        .map_err(py_err)
}

/// All solving orderings by exhaustive search (at most 10 objects).
#[pyfunction]
fn brute_force_solutions(matrix: &PyMatrix) -> PyResult<Vec<Vec<usize>>> {
    cs::brute_force_solutions(&matrix.0)
        .map(|s| perm_lists(&s))
        .map_err(py_err)
}

/// `(unimodal, strict, modes)` for a sequence.
#[pyfunction]
fn is_unimodal(seq: Vec<f64>) -> PyResult<(bool, bool, Vec<usize>)> {
    let r = cs::is_unimodal(&seq).map_err(py_err)?;
    Ok((r.unimodal, r.strict, r.modes))
}

#[pyfunction]
fn kendall_tau(a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
    cs::kendall_tau(&perm(a)?, &perm(b)?).map_err(py_err)
}

/// Kendall-tau distance minimised over rotations and reflections.
#[pyfunction]
fn kendall_tau_dihedral(a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
    cs::kendall_tau_dihedral(&perm(a)?, &perm(b)?).map_err(py_err)
}

#[pyfunction]
fn solution_diameter(orderings: Vec<Vec<usize>>) -> PyResult<f64> {
    let s = orderings
        .into_iter()
        .map(perm)
        .collect::<PyResult<cs::SolutionSet>>()?;
    cs::solution_diameter(&s).map_err(py_err)
}

#[pyfunction]
fn sample_uniform(n: usize, seed: u64) -> PyResult<Vec<f64>> {
    cs::sample_uniform(n, seed)
        .map(|s| s.points)
        .map_err(py_err)
}

/// Dissimilarity matrix of points on the circle and the ordering that
/// sorts them.
#[pyfunction]
#[pyo3(signature = (points, family="arc"))]
fn build_matrix(points: Vec<f64>, family: &str) -> PyResult<(PyMatrix, Vec<usize>)> {
    let sample = cs::CircleSample::new(points, 0).map_err(py_err)?;
    let (d, order) = cs::build_matrix(&sample, &self::family(family)?).map_err(py_err)?;
    Ok((PyMatrix(d), order.into_vec()))
}

/// Rows of the diameter-rate table as dictionaries.
#[pyfunction]
#[pyo3(signature = (ns, trials, family="arc", seed=0))]
fn rate_experiment<'py>(
    py: Python<'py>,
    ns: Vec<usize>,
    trials: usize,
    family: &str,
    seed: u64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let fam = self::family(family)?;
    let table = py
        .detach(|| cs::rate_experiment(&ns, trials, &fam, seed))
        .map_err(py_err)?;
    table
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("n", r.n)?;
            d.set_item("trials", r.trials)?;
            d.set_item("mean_diam", r.mean_diam)?;
            d.set_item("std_diam", r.std_diam)?;
            d.set_item("norm_stat", r.norm_stat)?;
            d.set_item("mean_eps", r.mean_eps)?;
            d.set_item("skipped", r.skipped)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "circular_seriation")]
fn circular_seriation_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NotRobinsonError", m.py().get_type::<NotRobinsonError>())?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyQTree>()?;
    m.add_class::<PyResultObj>()?;
    m.add_function(wrap_pyfunction!(seriate, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(is_unimodal, m)?)?;
    m.add_function(wrap_pyfunction!(kendall_tau, m)?)?;
    m.add_function(wrap_pyfunction!(kendall_tau_dihedral, m)?)?;
    m.add_function(wrap_pyfunction!(solution_diameter, m)?)?;
    m.add_function(wrap_pyfunction!(sample_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(build_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(rate_experiment, m)?)?;
    Ok(())
}
