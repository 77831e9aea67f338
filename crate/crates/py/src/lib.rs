//! Python bindings for `agcode`.
//!
//! Field elements, points and matrix entries cross the boundary as their
//! canonical integer encodings.

use agcode::analysis::{self, AnalysisError, DEFAULT_MESSAGE_GUARD};
use agcode::construction::{self, ConstructionError};
use agcode::gf::FieldElement;
use agcode::schema::{CodeFile, InstanceFile};
use agcode::{Family, FieldSpec};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(
    pyagcode,
    ConditionFailed,
    PyException,
    "A hypothesis of the construction does not hold."
);

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn construction_err(e: ConstructionError) -> PyErr {
    match e {
        ConstructionError::ConditionFailed(_) | ConstructionError::NotGroundValued { .. } => {
            ConditionFailed::new_err(e.to_string())
        }
        other => value_err(other),
    }
}

fn analysis_err(e: AnalysisError) -> PyErr {
    match e {
        AnalysisError::BoundViolated { .. } => ConditionFailed::new_err(e.to_string()),
        other => value_err(other),
    }
}

/// The finite field `F_{p^k}`.
#[pyclass(frozen, skip_from_py_object, module = "pyagcode")]
#[derive(Clone)]
pub struct Field {
    inner: FieldSpec,
}

impl Field {
    fn element(&self, enc: u64) -> PyResult<FieldElement> {
        self.inner.decode(enc).map_err(value_err)
    }
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (p, k = 1, modulus = None))]
    fn new(p: u64, k: u32, modulus: Option<Vec<u64>>) -> PyResult<Self> {
        let inner = match modulus {
            Some(m) => {
                let f = FieldSpec::with_modulus(p, m).map_err(value_err)?;
                if f.k() != k {
                    return Err(value_err(format!("modulus has degree {}, not {k}", f.k())));
                }
                f
            }
            None => FieldSpec::new(p, k).map_err(value_err)?,
        };
        Ok(Field { inner })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.inner.order()
    }

    /// Coefficients of the defining polynomial, constant term first.
    #[getter]
    fn modulus(&self) -> Vec<u64> {
        self.inner.modulus().to_vec()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok((&self.element(a)? + &self.element(b)?).enc())
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok((&self.element(a)? - &self.element(b)?).enc())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u64> {
        Ok((&self.element(a)? * &self.element(b)?).enc())
    }

    fn inv(&self, a: u64) -> PyResult<u64> {
        Ok(self.element(a)?.inv().map_err(value_err)?.enc())
    }

    fn pow(&self, a: u64, n: u64) -> PyResult<u64> {
        Ok(self.element(a)?.pow(n).enc())
    }

    /// Smallest-encoded element of exact multiplicative order `n`.
    fn root_of_unity(&self, n: u64) -> PyResult<u64> {
        Ok(self.inner.root_of_unity(n).map_err(value_err)?.enc())
    }

    fn __repr__(&self) -> String {
        format!("Field({}, {})", self.inner.p(), self.inner.k())
    }

    fn __eq__(&self, other: &Field) -> bool {
        self.inner == other.inner
    }
}

/// A curve with Galois-point groups and base points `Q`, `Q'`.
#[pyclass(frozen, skip_from_py_object, module = "pyagcode")]
#[derive(Clone)]
pub struct Instance {
    inner: construction::Instance,
}

#[pymethods]
impl Instance {
    /// One of the families `fermat`, `projline`, `bf`.
    #[staticmethod]
    #[pyo3(signature = (family, q, m = None))]
    fn builtin(family: &str, q: u64, m: Option<u32>) -> PyResult<Self> {
        let family: Family = family.parse().map_err(value_err)?;
        let mut inner = construction::Instance::builtin(family, q).map_err(construction_err)?;
        if let Some(m) = m {
            inner = inner.with_multiplier(m).map_err(construction_err)?;
        }
        Ok(Instance { inner })
    }

    /// Parses an instance file.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file: InstanceFile = serde_json::from_str(text).map_err(value_err)?;
        let inner = file.to_instance().map_err(value_err)?;
        Ok(Instance { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from_instance(&self.inner))
            .expect("serializable")
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label().to_string()
    }

    #[getter]
    fn ground_field(&self) -> Field {
        Field {
            inner: self.inner.ground().clone(),
        }
    }

    #[getter]
    fn working_field(&self) -> Field {
        Field {
            inner: self.inner.working().clone(),
        }
    }

    #[getter]
    fn q_point(&self) -> Vec<u64> {
        self.inner.q_point().enc()
    }

    #[getter]
    fn q_prime(&self) -> Vec<u64> {
        self.inner.q_prime().enc()
    }

    #[getter]
    fn group_orders(&self) -> Vec<usize> {
        self.inner.groups().iter().map(|g| g.order()).collect()
    }

    /// Every computable hypothesis as `(condition, passed, detail)`.
    fn verify(&self) -> PyResult<Vec<(String, bool, String)>> {
        let checks = construction::verify(&self.inner).map_err(construction_err)?;
        Ok(checks
            .into_iter()
            .map(|c| (c.condition, c.passed, c.detail))
            .collect())
    }

    /// Builds the code; raises `ConditionFailed` if a hypothesis fails.
    fn build(&self) -> PyResult<Code> {
        let built = construction::build_code(&self.inner).map_err(construction_err)?;
        Ok(Code {
            file: CodeFile::new(&self.inner, &built),
            built,
        })
    }

    fn __repr__(&self) -> String {
        format!("Instance({:?})", self.inner.label())
    }
}

/// A constructed evaluation code.
#[pyclass(module = "pyagcode")]
pub struct Code {
    built: construction::Construction,
    file: CodeFile,
}

#[pymethods]
impl Code {
    #[getter]
    fn n(&self) -> usize {
        self.built.code.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.built.code.k()
    }

    #[getter]
    fn distance_bound(&self) -> i64 {
        self.built.code.distance_bound()
    }

    #[getter]
    fn distance_exact(&self) -> Option<usize> {
        self.built.code.distance_exact()
    }

    #[getter]
    fn field(&self) -> Field {
        Field {
            inner: self.built.code.field().clone(),
        }
    }

    #[getter]
    fn e(&self) -> u32 {
        self.built.e()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.built.multiplier
    }

    #[getter]
    fn group_order(&self) -> usize {
        self.built.group.order()
    }

    /// Evaluation points as encoded coordinate lists, in column order.
    #[getter]
    fn points(&self) -> Vec<Vec<u64>> {
        self.file.points.clone()
    }

    /// Generator matrix as encoded rows.
    #[getter]
    fn matrix(&self) -> Vec<Vec<u64>> {
        self.file.matrix.clone()
    }

    /// Exact minimum distance by enumerating every message; the result is
    /// also stored on the code.
    #[pyo3(signature = (max_messages = DEFAULT_MESSAGE_GUARD))]
    fn min_distance(&mut self, py: Python<'_>, max_messages: u64) -> PyResult<usize> {
        let code = &self.built.code;
        let rep = py
            .detach(|| analysis::min_distance_exact(code, max_messages))
            .map_err(analysis_err)?;
        self.built
            .code
            .set_distance_exact(rep.distance)
            .map_err(analysis_err)?;
        self.file.distance_exact = Some(rep.distance);
        self.file.distance = Some(rep.clone());
        Ok(rep.distance)
    }

    /// Whether `<G1, G2>` acts faithfully by code automorphisms; returns
    /// `(passed, group_order, image_order)`.
    fn faithful(&self) -> PyResult<(bool, usize, usize)> {
        let rep =
            analysis::verify_faithful(&self.built.group, self.built.orbit(), &self.built.code)
                .map_err(analysis_err)?;
        Ok((rep.passed, rep.group_order, rep.image_order))
    }

    /// Encodes a message given as encoded coefficients, one per generator row.
    fn encode(&self, message: Vec<u64>) -> PyResult<Vec<u64>> {
        let code = &self.built.code;
        if message.len() != code.nominal_rows() {
            return Err(value_err(format!(
                "expected {} coefficients, got {}",
                code.nominal_rows(),
                message.len()
            )));
        }
        let msg = message
            .iter()
            .map(|&x| code.field().decode(x))
            .collect::<Result<Vec<_>, _>>()
            .map_err(value_err)?;
        Ok(code.encode(&msg).iter().map(FieldElement::enc).collect())
    }

    fn to_json(&self) -> String {
        self.file.to_json()
    }

    fn __repr__(&self) -> String {
        let code = &self.built.code;
        format!(
            "Code([{}, {}] over F_{}, d >= {})",
            code.n(),
            code.k(),
            code.field().order(),
            code.distance_bound()
        )
    }
}

/// Shortcut for `Instance.builtin(family, q, m).build()`.
#[pyfunction]
#[pyo3(signature = (family, q, m = None))]
fn construct(family: &str, q: u64, m: Option<u32>) -> PyResult<Code> {
    Instance::builtin(family, q, m)?.build()
}

#[pymodule]
pub fn pyagcode(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Instance>()?;
    m.add_class::<Code>()?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add("ConditionFailed", m.py().get_type::<ConditionFailed>())?;
    Ok(())
}
