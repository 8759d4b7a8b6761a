//! Python bindings for the exact integrable-systems engine.
//!
//! Structured values cross the boundary as the same JSON documents the CLI
//! uses; rationals are strings "p/q". Each wrapper class owns the exact Rust
//! value, so chained operations stay in exact arithmetic.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use satokp::grassmann as gr;
use satokp::kp;
use satokp::pdo;
use satokp::series::{format_rational, parse_rational, VectorLaurent};
use satokp::spectral as sp;
use satokp::verify;

fn err(e: satokp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_json(s: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(s).map_err(|e| PyValueError::new_err(format!("malformed JSON: {e}")))
}

/// A matrix pseudo-differential operator with exact rational coefficients.
#[pyclass(name = "MatrixPdo", skip_from_py_object)]
#[derive(Clone)]
struct PyMatrixPdo {
    inner: pdo::MatrixPdo,
}

#[pymethods]
impl PyMatrixPdo {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyMatrixPdo { inner: pdo::MatrixPdo::from_json(&parse_json(s)?).map_err(err)? })
    }

    #[staticmethod]
    fn identity(n: usize, x_cap: usize) -> Self {
        PyMatrixPdo { inner: pdo::MatrixPdo::identity(n, x_cap) }
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn mul(&self, other: &PyMatrixPdo) -> PyResult<Self> {
        Ok(PyMatrixPdo { inner: self.inner.compose(&other.inner).map_err(err)? })
    }

    fn add(&self, other: &PyMatrixPdo) -> PyResult<Self> {
        Ok(PyMatrixPdo { inner: self.inner.add(&other.inner).map_err(err)? })
    }

    fn adjoint(&self) -> Self {
        PyMatrixPdo { inner: self.inner.adjoint() }
    }

    /// Boundary symbol: the operator reduced mod x·(operators), as JSON.
    fn rho(&self) -> String {
        let sym = self.inner.rho();
        let entries: Vec<serde_json::Value> = sym
            .entries
            .iter()
            .map(|row| serde_json::Value::Array(row.iter().map(|s| s.to_json()).collect()))
            .collect();
        serde_json::json!({ "n": sym.n, "entries": entries }).to_string()
    }

    /// Apply to a vector of Laurent series (JSON in, JSON out).
    fn act(&self, f_json: &str) -> PyResult<String> {
        let f = VectorLaurent::from_json(&parse_json(f_json)?).map_err(err)?;
        Ok(self.inner.act(&f).map_err(err)?.to_json().to_string())
    }

    fn invert_monic(&self, floor: i64) -> PyResult<Self> {
        Ok(PyMatrixPdo { inner: self.inner.invert_monic(floor).map_err(err)? })
    }

    fn agrees_with(&self, other: &PyMatrixPdo) -> bool {
        self.inner.agrees_with(&other.inner)
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }
}

/// Residue pairing of two Laurent-series vectors (JSON), as "p/q".
#[pyfunction]
fn pairing(f_json: &str, g_json: &str) -> PyResult<String> {
    let f = VectorLaurent::from_json(&parse_json(f_json)?).map_err(err)?;
    let g = VectorLaurent::from_json(&parse_json(g_json)?).map_err(err)?;
    Ok(format_rational(&pdo::pairing(&f, &g).map_err(err)?))
}

/// A finite-window Grassmannian point in canonical form.
#[pyclass(name = "GrassmannPoint", skip_from_py_object)]
#[derive(Clone)]
struct PyGrassmannPoint {
    inner: gr::GrassmannPoint,
}

#[pymethods]
impl PyGrassmannPoint {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyGrassmannPoint { inner: gr::GrassmannPoint::from_json(&parse_json(s)?).map_err(err)? })
    }

    #[staticmethod]
    fn standard(n: usize, m_depth: i64, n_height: i64) -> PyResult<Self> {
        Ok(PyGrassmannPoint { inner: gr::GrassmannPoint::standard(n, m_depth, n_height).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    /// (kernel dimension, cokernel dimension, index) of the window projection.
    fn fredholm(&self) -> (usize, usize, i64) {
        let fd = self.inner.fredholm_data();
        (fd.kernel_basis.len(), fd.cokernel_basis.len(), fd.index)
    }

    /// Residue-pairing orthogonal complement, windows swapped.
    fn perp(&self) -> PyResult<Self> {
        Ok(PyGrassmannPoint { inner: self.inner.perp().map_err(err)? })
    }

    fn __eq__(&self, other: &PyGrassmannPoint) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "GrassmannPoint(n={}, M={}, N={}, {} generators)",
            self.inner.n(),
            self.inner.m_depth(),
            self.inner.n_height(),
            self.inner.generators().len()
        )
    }
}

/// Point spanned by a monic order-0 operator acting on the standard basis.
#[pyfunction]
fn from_dressing(s: &PyMatrixPdo, m_depth: i64, n_height: i64) -> PyResult<PyGrassmannPoint> {
    Ok(PyGrassmannPoint { inner: gr::from_dressing(&s.inner, m_depth, n_height).map_err(err)? })
}

/// Recover the monic operator from a big-cell point.
#[pyfunction]
fn to_dressing(w: &PyGrassmannPoint, order_lo: i64, x_cap: usize) -> PyResult<PyMatrixPdo> {
    Ok(PyMatrixPdo { inner: gr::to_dressing(&w.inner, order_lo, x_cap).map_err(err)? })
}

/// Lax operator S·(I∂)·S⁻¹ certified down to `floor`.
#[pyfunction]
fn dress(s: &PyMatrixPdo, floor: i64) -> PyResult<PyMatrixPdo> {
    let d = kp::DressingOperator::new(s.inner.clone()).map_err(err)?;
    Ok(PyMatrixPdo { inner: kp::dress(&d, floor).map_err(err)?.pdo().clone() })
}

/// First-order flow vector field for component `comp` (0-based), ∂-power `power`.
#[pyfunction]
fn kp_vector_field(s: &PyMatrixPdo, comp: usize, power: u32, floor: i64) -> PyResult<PyMatrixPdo> {
    let d = kp::DressingOperator::new(s.inner.clone()).map_err(err)?;
    Ok(PyMatrixPdo { inner: kp::kp_vector_field(&d, comp, power, floor).map_err(err)? })
}

/// Taylor expansion of the evolved dressing operator; `times_json` is
/// {"t_cap": int, "times": {"i,j": "p/q"}} with 1-based labels. Returns the
/// JSON pair {"s": ..., "y": ...} of t-expansions.
#[pyfunction]
fn evolve(s: &PyMatrixPdo, times_json: &str, floor: i64) -> PyResult<String> {
    let d = kp::DressingOperator::new(s.inner.clone()).map_err(err)?;
    let t = kp::FlowTimes::from_json(&parse_json(times_json)?).map_err(err)?;
    let (s_def, y_def) = kp::evolve(&d, &t, floor).map_err(err)?;
    Ok(serde_json::json!({ "s": s_def.to_json(), "y": y_def.to_json() }).to_string())
}

/// Certify the twisted self-adjointness locus; returns
/// (holds, lax_holds, [block checks]).
#[pyfunction]
fn sp_check(s: &PyMatrixPdo, m: usize, floor: i64) -> PyResult<(bool, bool, [bool; 3])> {
    let d = kp::DressingOperator::new(s.inner.clone()).map_err(err)?;
    let cert = kp::sp_check(&d, m, floor).map_err(err)?;
    Ok((cert.holds, cert.lax_holds, cert.blocks))
}

/// Project a monic seed onto the twisted self-adjointness locus.
#[pyfunction]
fn sp_seed(seed: &PyMatrixPdo, m: usize, depth: usize) -> PyResult<PyMatrixPdo> {
    Ok(PyMatrixPdo { inner: kp::sp_seed(&seed.inner, m, depth).map_err(err)?.into_pdo() })
}

/// Evolve on the locus with mirror-paired times.
#[pyfunction]
fn sp_evolve(s: &PyMatrixPdo, times_json: &str, m: usize, floor: i64) -> PyResult<String> {
    let d = kp::DressingOperator::new(s.inner.clone()).map_err(err)?;
    let t = kp::FlowTimes::from_json(&parse_json(times_json)?).map_err(err)?;
    let (s_def, y_def) = kp::sp_evolve(&d, &t, m, floor).map_err(err)?;
    Ok(serde_json::json!({ "s": s_def.to_json(), "y": y_def.to_json() }).to_string())
}

/// A matrix of Laurent polynomials in the spectral parameter.
#[pyclass(name = "HiggsMatrix", skip_from_py_object)]
#[derive(Clone)]
struct PyHiggsMatrix {
    inner: sp::HiggsMatrix,
}

#[pymethods]
impl PyHiggsMatrix {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyHiggsMatrix { inner: sp::HiggsMatrix::from_json(&parse_json(s)?).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    /// Characteristic coefficients (s_1, ..., s_n).
    fn hitchin(&self) -> PyHitchinPoint {
        PyHitchinPoint { inner: sp::hitchin_map(&self.inner) }
    }
}

/// Characteristic coefficients of a spectral curve.
#[pyclass(name = "HitchinPoint", skip_from_py_object)]
#[derive(Clone)]
struct PyHitchinPoint {
    inner: sp::HitchinPoint,
}

#[pymethods]
impl PyHitchinPoint {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyHitchinPoint { inner: sp::HitchinPoint::from_json(&parse_json(s)?).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    /// Weighted scaling s_i ↦ λ^i s_i; λ is "p/q".
    fn scale(&self, lam: &str) -> PyResult<Self> {
        let lam = parse_rational(lam).map_err(err)?;
        Ok(PyHitchinPoint { inner: sp::weighted_scale(&lam, &self.inner) })
    }

    /// Serre-dual point s_i ↦ (-1)^i s_i.
    fn dual(&self) -> Self {
        PyHitchinPoint { inner: sp::serre_dual_point(&self.inner) }
    }

    /// Membership in the symplectic locus (odd coefficients vanish).
    fn sp_membership(&self) -> PyResult<bool> {
        sp::sp_membership(&self.inner).map_err(err)
    }

    /// Discriminant-type resultant of the characteristic polynomial, as JSON.
    fn resultant(&self) -> String {
        sp::ramification_resultant(&self.inner).to_json().to_string()
    }

    /// Rational branches of the characteristic polynomial over the formal
    /// disc, each a JSON Laurent polynomial truncated at `prec`.
    fn hensel(&self, prec: i64) -> PyResult<Vec<String>> {
        let branches = sp::hensel_split(&self.inner, prec).map_err(err)?;
        Ok(branches.iter().map(|b| b.to_json().to_string()).collect())
    }

    fn __eq__(&self, other: &PyHitchinPoint) -> bool {
        self.inner == other.inner
    }
}

/// Dimension/degree/genus formulas for the moduli data, as a JSON record.
#[pyfunction]
#[pyo3(signature = (n, g, d, m=None))]
fn numerology(n: i64, g: i64, d: i64, m: Option<i64>) -> PyResult<String> {
    Ok(sp::numerology(n, g, d, m).map_err(err)?.to_json().to_string())
}

/// Run a named verification suite; returns (passed, cases, failures).
#[pyfunction]
fn run_suite(name: &str, seed: u64) -> PyResult<(bool, usize, Vec<String>)> {
    let report = verify::run_suite(name, seed).map_err(err)?;
    Ok((report.passed(), report.cases, report.failures))
}

/// The registered verification suite names, in criterion order.
#[pyfunction]
fn suite_names() -> Vec<&'static str> {
    verify::SUITES.to_vec()
}

#[pymodule]
fn satokp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrixPdo>()?;
    m.add_class::<PyGrassmannPoint>()?;
    m.add_class::<PyHiggsMatrix>()?;
    m.add_class::<PyHitchinPoint>()?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    m.add_function(wrap_pyfunction!(from_dressing, m)?)?;
    m.add_function(wrap_pyfunction!(to_dressing, m)?)?;
    m.add_function(wrap_pyfunction!(dress, m)?)?;
    m.add_function(wrap_pyfunction!(kp_vector_field, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(sp_check, m)?)?;
    m.add_function(wrap_pyfunction!(sp_seed, m)?)?;
    m.add_function(wrap_pyfunction!(sp_evolve, m)?)?;
    m.add_function(wrap_pyfunction!(numerology, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(suite_names, m)?)?;
    Ok(())
}
