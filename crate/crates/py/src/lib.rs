//! Python bindings. Rationals cross the boundary as `"p/q"` strings and
//! structured reports as plain dicts.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use nilcons_core::liealg::{build_model, LieAlgebraModel, Preset};
use nilcons_core::nilcons::Verdict;
use nilcons_core::orbits;
use nilcons_core::parabolic::{parabolic_decomposition, ParabolicDecomposition};
use nilcons_core::scalar::{fmt_q, parse_q, Q};
use nilcons_core::subspec::resolve_subspace;
use nilcons_core::verify::{run_suite, VerifyOptions};

fn err(e: nilcons_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_vec(v: &[String], dim: usize) -> PyResult<Vec<Q>> {
    if v.len() != dim {
        return Err(PyValueError::new_err(format!("expected {dim} coordinates, got {}", v.len())));
    }
    v.iter().map(|s| parse_q(s).ok_or_else(|| PyValueError::new_err(format!("bad rational '{s}'")))).collect()
}

fn show(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

/// A preset real semisimple Lie algebra with its Cartan and restricted root data.
#[pyclass(frozen)]
struct Model {
    inner: Arc<LieAlgebraModel>,
}

#[pymethods]
impl Model {
    #[new]
    #[pyo3(signature = (preset, n=None))]
    fn new(preset: &str, n: Option<usize>) -> PyResult<Self> {
        let p = Preset::parse(preset, n).map_err(err)?;
        Ok(Model { inner: Arc::new(build_model(p).map_err(err)?) })
    }

    #[getter]
    fn preset(&self) -> String {
        self.inner.preset.to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels.clone()
    }

    #[getter]
    fn dim_p(&self) -> usize {
        self.inner.p.dim()
    }

    /// `[(label, multiplicity)]` over the positive restricted roots.
    fn positive_roots(&self) -> Vec<(String, usize)> {
        let m = &self.inner;
        m.root_system
            .positive_roots
            .iter()
            .map(|r| (nilcons_core::rootsys::root_label(r), m.datum.multiplicity(r)))
            .collect()
    }

    fn bracket(&self, x: Vec<String>, y: Vec<String>) -> PyResult<Vec<String>> {
        let d = self.inner.dim;
        Ok(show(&self.inner.bracket(&parse_vec(&x, d)?, &parse_vec(&y, d)?)))
    }

    fn theta(&self, x: Vec<String>) -> PyResult<Vec<String>> {
        Ok(show(&self.inner.theta_apply(&parse_vec(&x, self.inner.dim)?)))
    }

    fn inner_product(&self, x: Vec<String>, y: Vec<String>) -> PyResult<String> {
        let d = self.inner.dim;
        Ok(fmt_q(&self.inner.inner_product(&parse_vec(&x, d)?, &parse_vec(&y, d)?)))
    }

    /// Exhaustive Jacobi, θ-automorphism and invariance checks.
    fn structure_holds(&self) -> bool {
        let m = &self.inner;
        m.jacobi_defect().is_none() && m.theta_automorphism_defect().is_none() && m.ad_invariance_defect().is_none()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn decompose(&self, j: usize) -> PyResult<Decomposition> {
        Ok(Decomposition { inner: parabolic_decomposition(self.inner.clone(), j).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Model('{}', dim={})", self.inner.preset, self.inner.dim)
    }
}

/// The parabolic subalgebra attached to one simple root.
#[pyclass(frozen)]
struct Decomposition {
    inner: ParabolicDecomposition,
}

#[pymethods]
impl Decomposition {
    #[getter]
    fn j(&self) -> usize {
        self.inner.j
    }

    fn summary<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.summary())
    }

    /// `{level: dimension}` of the gradation of `𝔫ⱼ`.
    fn gradation(&self) -> Vec<(usize, usize)> {
        self.inner.gradation.iter().map(|(k, v)| (*k, v.dim())).collect()
    }

    /// Nilpotent construction report for a subspace in the textual mini-language.
    #[pyo3(signature = (v, samples=32, seed=0))]
    fn nilcheck<'py>(&self, py: Python<'py>, v: &str, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let sub = resolve_subspace(&self.inner, v).map_err(err)?;
        let report = sub.check(&self.inner, samples, seed).map_err(err)?;
        let out = to_py(py, &report)?;
        let outcome = match report.outcome() {
            Verdict::Transitive => "Transitive",
            Verdict::NotTransitive => "NotTransitive",
            Verdict::Unknown => "Unknown",
        };
        out.set_item("outcome", outcome)?;
        Ok(out)
    }

    /// Singular orbit dimension and cohomogeneity bound of `𝔥^Λ_{j,0} = (𝔤ⱼ ∩ 𝔨ⱼ) ⊕ 𝔞ⱼ ⊕ 𝔫ⱼ`.
    #[pyo3(signature = (probes=16, seed=0))]
    fn canonical_extension<'py>(&self, py: Python<'py>, probes: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let pd = &self.inner;
        let spec = orbits::canonical_extension(pd, &orbits::boundary_isotropy(pd), "H^Λ_{j,0}").map_err(err)?;
        let p = orbits::default_probes(&pd.model, probes, seed);
        let est = orbits::cohomogeneity_estimate(&pd.model, &spec.h, &p).map_err(err)?;
        to_py(py, &est)
    }
}

/// Runs the acceptance suite, optionally restricted to one preset.
#[pyfunction]
#[pyo3(signature = (preset=None, n=None, seed=0, samples=32))]
fn verify<'py>(py: Python<'py>, preset: Option<&str>, n: Option<usize>, seed: u64, samples: usize) -> PyResult<Bound<'py, PyAny>> {
    let mut opts = match preset {
        Some(tag) => VerifyOptions::only(Preset::parse(tag, n).map_err(err)?),
        None => VerifyOptions::default(),
    };
    opts.seed = seed;
    opts.samples = samples;
    let report = py.detach(|| run_suite(opts));
    to_py(py, &report)
}

#[pymodule]
fn nilcons(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<Decomposition>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
