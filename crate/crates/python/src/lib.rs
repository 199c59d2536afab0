//! Python bindings. Exact rationals cross the boundary as `"p/q"` strings;
//! structured values round-trip through the same JSON the CLI emits.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qkgw_core::coeffring::{RingElement, RingSpec};
use qkgw_core::exactnum::rational::{parse, to_string, Rational};
use qkgw_core::exactnum::QPoly;
use qkgw_core::ifunctions::{self, GeometrySpec, ToricFibrationSpec};
use qkgw_core::invariants;
use qkgw_core::operators;
use qkgw_core::qring::{self, qf_equal};
use qkgw_core::series::NovikovSeries;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rationals(v: &[String]) -> PyResult<Vec<Rational>> {
    v.iter().map(|s| parse(s).map_err(err)).collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(to_string).collect()
}

/// A rational function of `q` with `K⁰` coefficients and factored denominator.
#[pyclass(name = "QFunction", module = "qkgw", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyQFunction {
    inner: qring::QFunction,
}

#[pymethods]
impl PyQFunction {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyQFunction {
            inner: serde_json::from_str(s).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(err)
    }

    /// Reduced-fraction string; `None` unless the coefficient ring is `ℚ`.
    #[pyo3(signature = (unicode = true))]
    fn reduced(&self, unicode: bool) -> Option<String> {
        self.inner.reduced_string(unicode)
    }

    fn is_proper(&self) -> bool {
        self.inner.is_proper()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Value at `q = 0` as a JSON ring element.
    fn eval_q0(&self) -> PyResult<String> {
        let v = self.inner.eval_q0().map_err(err)?;
        serde_json::to_string(&v).map_err(err)
    }

    /// `(plus, minus)`: the Laurent-polynomial part as JSON and the proper part.
    fn split(&self) -> PyResult<(String, PyQFunction)> {
        let (plus, minus) = qring::split_polarization(&self.inner).map_err(err)?;
        Ok((
            serde_json::to_string(&plus).map_err(err)?,
            PyQFunction { inner: minus },
        ))
    }

    fn adams(&self, k: u32) -> PyResult<PyQFunction> {
        if k == 0 {
            return Err(PyValueError::new_err("k must be positive"));
        }
        Ok(PyQFunction {
            inner: qring::qf_adams(k, &self.inner),
        })
    }

    fn __add__(&self, other: &PyQFunction) -> PyResult<PyQFunction> {
        Ok(PyQFunction {
            inner: self.inner.try_add(&other.inner).map_err(err)?,
        })
    }

    fn __sub__(&self, other: &PyQFunction) -> PyResult<PyQFunction> {
        Ok(PyQFunction {
            inner: self.inner.try_sub(&other.inner).map_err(err)?,
        })
    }

    fn __mul__(&self, other: &PyQFunction) -> PyResult<PyQFunction> {
        Ok(PyQFunction {
            inner: self.inner.try_mul(&other.inner).map_err(err)?,
        })
    }

    fn __eq__(&self, other: &PyQFunction) -> bool {
        qf_equal(&self.inner, &other.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("QFunction({})", self.inner)
    }
}

/// Build `Σ_e c_e q^e / ∏ (1 - q^r)^m` over `ℚ`.
#[pyfunction]
fn scalar_qfunction(
    numerator: Vec<(i64, String)>,
    denominator: Vec<(u32, u32)>,
) -> PyResult<PyQFunction> {
    let pt = RingSpec::point();
    let terms = numerator
        .into_iter()
        .map(|(e, c)| Ok((e, RingElement::scalar(&pt, parse(&c).map_err(err)?))))
        .collect::<PyResult<Vec<_>>>()?;
    let num = qring::LaurentPoly::from_terms(&pt, terms).map_err(err)?;
    let den = denominator
        .into_iter()
        .map(|(r, m)| qring::DenFactor::new(RingElement::one(&pt), r, m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    Ok(PyQFunction {
        inner: qring::QFunction::new(num, den).map_err(err)?,
    })
}

/// A Novikov-truncated series `Σ_d Q^d f_d(q)`.
#[pyclass(name = "Series", module = "qkgw", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySeries {
    inner: NovikovSeries,
}

#[pymethods]
impl PySeries {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PySeries {
            inner: serde_json::from_str(s).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(err)
    }

    fn degrees(&self) -> Vec<Vec<i64>> {
        self.inner.iter().map(|(d, _)| d.clone()).collect()
    }

    fn get(&self, degree: Vec<i64>) -> PyQFunction {
        PyQFunction {
            inner: self.inner.get(&degree),
        }
    }

    fn ring(&self) -> Vec<u32> {
        self.inner.spec().orders().to_vec()
    }

    fn truncation(&self) -> Vec<(i64, i64)> {
        self.inner.truncation().clone()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner.equals(&other.inner)
    }
}

#[pyfunction]
fn j_projective(n: u32, trunc: i64) -> PyResult<PySeries> {
    Ok(PySeries {
        inner: ifunctions::j_projective(n, trunc).map_err(err)?,
    })
}

#[pyfunction]
fn j_product(dims: Vec<u32>, trunc: i64) -> PyResult<PySeries> {
    Ok(PySeries {
        inner: ifunctions::j_product(&dims, trunc).map_err(err)?,
    })
}

/// I-function of the complete intersection of degree-`l_j` hypersurfaces in `ℙᴺ`.
#[pyfunction]
fn i_complete_intersection(n: u32, degrees: Vec<i64>, trunc: i64) -> PyResult<PySeries> {
    let g = GeometrySpec::projective(n, &degrees, trunc);
    Ok(PySeries {
        inner: ifunctions::i_complete_intersection(&g).map_err(err)?,
    })
}

/// Toric I-function from a JSON fibration spec.
#[pyfunction]
fn i_toric_fibration(spec_json: &str) -> PyResult<PySeries> {
    let spec: ToricFibrationSpec = serde_json::from_str(spec_json).map_err(err)?;
    Ok(PySeries {
        inner: ifunctions::i_toric_fibration(&spec).map_err(err)?,
    })
}

/// Toric presentation of `ℙᴺ` over a point.
#[pyfunction]
fn toric_projective(n: u32, trunc: i64) -> PyResult<PySeries> {
    let spec = ToricFibrationSpec::over_point(
        vec![vec![1; n as usize + 1]],
        vec![n + 1],
        vec![(0, trunc)],
    )
    .map_err(err)?;
    Ok(PySeries {
        inner: ifunctions::i_toric_fibration(&spec).map_err(err)?,
    })
}

/// Rows `(class, invariant string, value, value at q=0)` for `P^a`, `a = 0..=dim`.
#[pyfunction]
fn one_point_degree_one(
    n: u32,
    degrees: Vec<i64>,
) -> PyResult<Vec<(String, String, PyQFunction, String)>> {
    let rows = invariants::one_point_degree_one(n, &degrees).map_err(err)?;
    Ok(rows
        .into_iter()
        .map(|r| {
            (
                format!("P^{}", r.class_exponent),
                r.value.reduced_string(true).unwrap_or_default(),
                PyQFunction { inner: r.value },
                to_string(&r.at_q0),
            )
        })
        .collect())
}

/// `χ(ℙᴺ, P^a·∏(1 - P^{l_j}))`.
#[pyfunction]
#[pyo3(signature = (n, p_exponent = 0, degrees = vec![]))]
fn euler_char(n: u32, p_exponent: i64, degrees: Vec<i64>) -> PyResult<String> {
    let spec = RingSpec::projective(n);
    let a = RingElement::p(&spec, 0).pow(p_exponent).map_err(err)?;
    Ok(to_string(
        &invariants::euler_char(n, &a, &degrees).map_err(err)?,
    ))
}

#[pyfunction]
fn gram_matrix(n: u32, degrees: Vec<i64>) -> PyResult<Vec<Vec<String>>> {
    Ok(invariants::gram_matrix(n, &degrees)
        .map_err(err)?
        .iter()
        .map(|r| strings(r))
        .collect())
}

#[pyfunction]
fn dual_basis_roundtrip(n: u32, degrees: Vec<i64>) -> PyResult<bool> {
    invariants::dual_basis_roundtrip(n, &degrees).map_err(err)
}

/// Bernoulli numbers `B_0..B_{2M}` with `B_1 = +1/2`.
#[pyfunction]
fn bernoulli(m: usize) -> Vec<String> {
    strings(&operators::bernoulli(m).numbers)
}

/// Euler–Maclaurin expansion of `f` (ascending coefficients), keyed by power of `z`.
#[pyfunction]
fn euler_maclaurin(f: Vec<String>, z_order: usize) -> PyResult<Vec<(i64, Vec<String>)>> {
    let p = QPoly::new(rationals(&f)?);
    Ok(operators::euler_maclaurin(&p, z_order)
        .into_iter()
        .map(|(e, c)| (e, strings(c.coeffs())))
        .collect())
}

#[pyfunction]
fn euler_maclaurin_oracle_check(f: Vec<String>, z_order: usize) -> PyResult<bool> {
    Ok(operators::euler_maclaurin_oracle_check(
        &QPoly::new(rationals(&f)?),
        z_order,
    ))
}

#[pyfunction]
fn gamma_telescoping_check(m: u32, x_degree: usize) -> PyResult<bool> {
    operators::gamma_telescoping_check(m, x_degree).map_err(err)
}

#[pyfunction]
fn lefschetz_operator_equivalence(n: u32, l: i64, max_degree: i64) -> PyResult<bool> {
    operators::lefschetz_operator_equivalence(n, l, max_degree).map_err(err)
}

#[pyfunction]
fn mobius_invert(s: Vec<String>) -> PyResult<Vec<String>> {
    Ok(strings(&operators::mobius_invert(&rationals(&s)?)))
}

/// Regularity at `q = 1` of the `"R"` or `"box"` pole series.
#[pyfunction]
fn check_regular_at_one(kind: &str, k: u64, l_max: u64) -> PyResult<bool> {
    let ps = match kind {
        "R" => operators::pole_series_r(k, l_max),
        "box" => operators::pole_series_box(k, l_max),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown pole series `{other}`"
            )))
        }
    }
    .map_err(err)?;
    operators::check_regular_at_one(&ps).map_err(err)
}

#[pymodule]
fn qkgw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQFunction>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(scalar_qfunction, m)?)?;
    m.add_function(wrap_pyfunction!(j_projective, m)?)?;
    m.add_function(wrap_pyfunction!(j_product, m)?)?;
    m.add_function(wrap_pyfunction!(i_complete_intersection, m)?)?;
    m.add_function(wrap_pyfunction!(i_toric_fibration, m)?)?;
    m.add_function(wrap_pyfunction!(toric_projective, m)?)?;
    m.add_function(wrap_pyfunction!(one_point_degree_one, m)?)?;
    m.add_function(wrap_pyfunction!(euler_char, m)?)?;
    m.add_function(wrap_pyfunction!(gram_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(dual_basis_roundtrip, m)?)?;
    m.add_function(wrap_pyfunction!(bernoulli, m)?)?;
    m.add_function(wrap_pyfunction!(euler_maclaurin, m)?)?;
    m.add_function(wrap_pyfunction!(euler_maclaurin_oracle_check, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_telescoping_check, m)?)?;
    m.add_function(wrap_pyfunction!(lefschetz_operator_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(mobius_invert, m)?)?;
    m.add_function(wrap_pyfunction!(check_regular_at_one, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
