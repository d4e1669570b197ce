//! Python bindings. Scalars cross the boundary as `int`, `"num/den"` strings
//! or, for `GF(p^k)` with `k > 1`, coefficient lists; reports come back as
//! plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyFloat, PyInt, PyList, PyString};
use serde_json::Value;

use trapgeom::matrix::{Matrix, MatrixTorsorSpace};
use trapgeom::planes::{self, DesarguesMode, ScanMode};
use trapgeom::scalars::{FieldSpec, Scalar, ScalarField};
use trapgeom::scene::{self, Backend};
use trapgeom::torsor::{
    check_commutative, check_idempotent, check_klein_symmetry, check_para_associative,
    check_translations_invertible, PropertyReport,
};
use trapgeom::trapezoid::{self as tz, AffineFunctional, TrapezoidTorsor};
use trapgeom::verify::{self, VerifyOptions};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (_, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => PyFloat::new(py, n.as_f64().unwrap_or(f64::NAN)).into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    if obj.is_none() {
        return Ok(Value::Null);
    }
    if let Ok(b) = obj.cast::<PyBool>() {
        return Ok(Value::Bool(b.is_true()));
    }
    if obj.cast::<PyInt>().is_ok() {
        let i: i64 = obj.extract()?;
        return Ok(Value::from(i));
    }
    if let Ok(f) = obj.cast::<PyFloat>() {
        return Ok(Value::from(f.value()));
    }
    if let Ok(s) = obj.cast::<PyString>() {
        return Ok(Value::String(s.to_str()?.to_string()));
    }
    if let Ok(d) = obj.cast::<PyDict>() {
        let mut m = serde_json::Map::new();
        for (k, v) in d.iter() {
            m.insert(k.extract::<String>()?, from_py(&v)?);
        }
        return Ok(Value::Object(m));
    }
    let items: Vec<Bound<'_, PyAny>> = obj.extract()?;
    Ok(Value::Array(items.iter().map(from_py).collect::<PyResult<_>>()?))
}

fn scalar(field: &ScalarField, obj: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    field.scalar_from_json(&from_py(obj)?).map_err(err)
}

fn point(field: &ScalarField, obj: &Bound<'_, PyAny>) -> PyResult<Vec<Scalar>> {
    let items: Vec<Bound<'_, PyAny>> = obj.extract()?;
    items.iter().map(|c| scalar(field, c)).collect()
}

/// Like [`Scalar::to_json`], but prime-field elements become plain integers.
fn scalar_json(s: &Scalar) -> Value {
    match s.field().spec() {
        FieldSpec::Finite { k: 1, .. } => Value::from(s.to_string().parse::<u64>().expect("prime field element")),
        _ => s.to_json(),
    }
}

fn point_to_py<'py>(py: Python<'py>, p: &[Scalar]) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &Value::Array(p.iter().map(scalar_json).collect()))
}

fn report_to_py<'py>(py: Python<'py>, r: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(r).map_err(err)?)
}

fn parse_field(spec: &str) -> PyResult<ScalarField> {
    ScalarField::from_spec(&spec.parse().map_err(err)?).map_err(err)
}

/// An exact field: `"rational"`, `"gf7"`, `"gf9"`, ...
#[pyclass(name = "Field", frozen)]
struct PyField {
    inner: ScalarField,
}

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (spec = "rational"))]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyField {
            inner: parse_field(spec)?,
        })
    }

    /// `None` for the rationals.
    #[getter]
    fn order(&self) -> Option<u32> {
        self.inner.order()
    }

    /// Every element of a finite field.
    fn elements<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let els = self.inner.elements().map_err(err)?;
        els.iter().map(|e| to_py(py, &scalar_json(e))).collect()
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner)
    }
}

/// The trapezoid law `(xyz) = α(z)α(y)⁻¹(x − y) + z` on `{α ≠ 0}`.
#[pyclass(name = "TrapezoidTorsor", frozen)]
struct PyTrapezoid {
    field: ScalarField,
    alpha: AffineFunctional<Scalar>,
    torsor: TrapezoidTorsor,
}

#[pymethods]
impl PyTrapezoid {
    /// `alpha` is `[c₁, …, cₙ, c₀]` for `α(x) = Σ cᵢxᵢ + c₀`; the default is `α(x) = x₂` on the plane.
    #[new]
    #[pyo3(signature = (field = "rational", alpha = None))]
    fn new(field: &str, alpha: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let field = parse_field(field)?;
        let alpha = match alpha {
            None => AffineFunctional::coordinate(2, 1, &field.zero()),
            Some(obj) => {
                let mut cs = point(&field, obj)?;
                let c0 = cs.pop().ok_or_else(|| err("alpha needs at least two coefficients"))?;
                AffineFunctional::new(cs, c0).map_err(err)?
            }
        };
        let torsor = TrapezoidTorsor::new(field.clone(), alpha.clone());
        Ok(PyTrapezoid { field, alpha, torsor })
    }

    fn alpha<'py>(&self, py: Python<'py>, x: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let x = point(&self.field, x)?;
        if x.len() != self.alpha.dim() {
            return Err(err("dimension mismatch"));
        }
        to_py(py, &scalar_json(&self.alpha.eval(&x)))
    }

    /// `(xyz)`.
    fn eval<'py>(
        &self,
        py: Python<'py>,
        x: &Bound<'_, PyAny>,
        y: &Bound<'_, PyAny>,
        z: &Bound<'_, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let f = &self.field;
        let w = tz::trapezoid(&point(f, x)?, &point(f, y)?, &point(f, z)?, &self.alpha).map_err(err)?;
        point_to_py(py, &w)
    }

    /// `x·z = (xez)`.
    fn product<'py>(
        &self,
        py: Python<'py>,
        x: &Bound<'_, PyAny>,
        z: &Bound<'_, PyAny>,
        e: &Bound<'_, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let f = &self.field;
        let w = tz::group_product(&point(f, x)?, &point(f, z)?, &point(f, e)?, &self.alpha).map_err(err)?;
        point_to_py(py, &w)
    }

    fn inverse<'py>(&self, py: Python<'py>, x: &Bound<'_, PyAny>, e: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let f = &self.field;
        let w = tz::inverse(&point(f, x)?, &point(f, e)?, &self.alpha).map_err(err)?;
        point_to_py(py, &w)
    }

    fn power<'py>(&self, py: Python<'py>, x: &Bound<'_, PyAny>, n: i64, e: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let f = &self.field;
        let w = tz::power(&point(f, x)?, n, &point(f, e)?, &self.alpha).map_err(err)?;
        point_to_py(py, &w)
    }

    /// `[[r, s], [0, 1]]` with `ρ(z)(t) = rt + s` on the boundary; needs `α(e) = 1`.
    fn ga1_matrix<'py>(&self, py: Python<'py>, z: &Bound<'_, PyAny>, e: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let f = &self.field;
        let m = tz::ga1_matrix(&point(f, z)?, &point(f, e)?, &self.alpha).map_err(err)?;
        let rows: Vec<Value> = m.iter().map(|r| Value::Array(r.iter().map(scalar_json).collect())).collect();
        to_py(py, &Value::Array(rows))
    }

    /// `{"n", "k", "n_right"}` with `g = n·k = k·n_right`; needs `α(e) = 1`.
    fn semidirect<'py>(&self, py: Python<'py>, g: &Bound<'_, PyAny>, e: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyDict>> {
        let f = &self.field;
        let parts = tz::semidirect_decompose(&point(f, g)?, &point(f, e)?, &self.alpha, None).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("n", point_to_py(py, &parts.n)?)?;
        d.set_item("k", point_to_py(py, &parts.k)?)?;
        d.set_item("n_right", point_to_py(py, &parts.n_right)?)?;
        Ok(d)
    }

    /// Runs one property checker: idempotent, para-associative, klein-symmetry,
    /// commutative or translations-invertible.
    #[pyo3(signature = (property, samples = 1000, seed = 42))]
    fn check<'py>(&self, py: Python<'py>, property: &str, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let law = &self.torsor;
        let r = py.detach(|| check_named(law, property, samples, seed))?;
        report_to_py(py, &r)
    }
}

fn check_named<L: trapgeom::torsor::TernaryLaw>(law: &L, property: &str, samples: usize, seed: u64) -> PyResult<PropertyReport> {
    Ok(match property {
        "idempotent" => check_idempotent(law, samples, seed),
        "para-associative" => check_para_associative(law, samples, seed),
        "klein-symmetry" => check_klein_symmetry(law, samples, seed),
        "commutative" => check_commutative(law, samples, seed),
        "translations-invertible" => check_translations_invertible(law, samples, seed),
        other => return Err(err(format!("unknown property '{other}'"))),
    })
}

/// `(X − Y)(AY)⁻¹(AZ) + Z` on `{X : det(AX) ≠ 0}`.
#[pyclass(name = "MatrixTorsor", frozen)]
struct PyMatrixTorsor {
    space: MatrixTorsorSpace,
}

fn matrix(field: &ScalarField, obj: &Bound<'_, PyAny>) -> PyResult<Matrix<Scalar>> {
    let rows: Vec<Bound<'_, PyAny>> = obj.extract()?;
    let rows = rows.iter().map(|r| point(field, r)).collect::<PyResult<Vec<_>>>()?;
    Matrix::from_rows(rows).map_err(err)
}

fn matrix_to_py<'py>(py: Python<'py>, m: &Matrix<Scalar>) -> PyResult<Bound<'py, PyAny>> {
    let rows = (0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_json).collect()));
    to_py(py, &Value::Array(rows.collect()))
}

#[pymethods]
impl PyMatrixTorsor {
    #[new]
    #[pyo3(signature = (anchor, field = "rational"))]
    fn new(anchor: &Bound<'_, PyAny>, field: &str) -> PyResult<Self> {
        let field = parse_field(field)?;
        let anchor = matrix(&field, anchor)?;
        Ok(PyMatrixTorsor {
            space: MatrixTorsorSpace::new(field, anchor).map_err(err)?,
        })
    }

    fn eval<'py>(
        &self,
        py: Python<'py>,
        x: &Bound<'_, PyAny>,
        y: &Bound<'_, PyAny>,
        z: &Bound<'_, PyAny>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let f = self.space.field();
        let w = self
            .space
            .trapezoid(&matrix(f, x)?, &matrix(f, y)?, &matrix(f, z)?)
            .map_err(err)?;
        matrix_to_py(py, &w)
    }

    /// `AX`.
    fn alpha<'py>(&self, py: Python<'py>, x: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let ax = self.space.alpha(&matrix(self.space.field(), x)?).map_err(err)?;
        matrix_to_py(py, &ax)
    }

    #[pyo3(signature = (property, samples = 1000, seed = 42))]
    fn check<'py>(&self, py: Python<'py>, property: &str, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let space = &self.space;
        let r = py.detach(|| {
            if property == "a-homomorphism" {
                Ok(verify::a_homomorphism(space, samples, seed))
            } else {
                check_named(space, property, samples, seed)
            }
        })?;
        report_to_py(py, &r)
    }
}

/// A finite affine or projective plane on points `0..n`.
#[pyclass(name = "FinitePlane", frozen)]
struct PyPlane {
    plane: planes::FinitePlane,
}

#[pymethods]
impl PyPlane {
    /// `AG(2, q)`.
    #[staticmethod]
    fn affine(q: u32) -> PyResult<Self> {
        let field = ScalarField::gf(q).map_err(err)?;
        Ok(PyPlane {
            plane: planes::build_affine_plane(&field).map_err(err)?,
        })
    }

    /// `PG(2, q)`, the completion of `AG(2, q)`.
    #[staticmethod]
    fn projective(q: u32) -> PyResult<Self> {
        let ag = Self::affine(q)?;
        Ok(PyPlane {
            plane: planes::projective_completion(&ag.plane).map_err(err)?,
        })
    }

    /// The projective Hall plane of order 9.
    #[staticmethod]
    fn hall9() -> PyResult<Self> {
        Ok(PyPlane {
            plane: planes::build_hall_plane_9().map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: Value = serde_json::from_str(text).map_err(err)?;
        Ok(PyPlane {
            plane: planes::FinitePlane::from_json(&v).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        self.plane.to_json().to_string()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.plane.order()
    }

    #[getter]
    fn num_points(&self) -> usize {
        self.plane.num_points()
    }

    #[getter]
    fn num_lines(&self) -> usize {
        self.plane.num_lines()
    }

    fn lines(&self) -> Vec<Vec<u32>> {
        self.plane.lines().to_vec()
    }

    fn join(&self, p: u32, q: u32) -> Option<u32> {
        self.plane.join(p, q)
    }

    fn meet(&self, l: u32, m: u32) -> Option<u32> {
        self.plane.meet(l, m)
    }

    /// Affine or projective axioms, according to the plane's kind.
    fn check_axioms<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = match self.plane.kind() {
            planes::PlaneKind::Affine => planes::check_affine_axioms(&self.plane),
            planes::PlaneKind::Projective => planes::check_projective_axioms(&self.plane),
        };
        report_to_py(py, &r)
    }

    /// Exhaustive when `samples` is `None`.
    #[pyo3(signature = (samples = None, seed = 0))]
    fn check_desargues<'py>(&self, py: Python<'py>, samples: Option<usize>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let mode = match samples {
            None => DesarguesMode::Exhaustive,
            Some(samples) => DesarguesMode::Sampled { samples, seed },
        };
        let plane = &self.plane;
        let r = py.detach(|| planes::check_desargues(plane, mode)).map_err(err)?;
        report_to_py(py, &r)
    }

    /// `(xo(upv)) = ((xou)pv)` for the law with lines `a`, `b` removed;
    /// exhaustive when `budget` is `None`.
    #[pyo3(signature = (a, b, budget = None, seed = 0))]
    fn check_associativity<'py>(
        &self,
        py: Python<'py>,
        a: u32,
        b: u32,
        budget: Option<usize>,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mode = match budget {
            None => ScanMode::Exhaustive,
            Some(budget) => ScanMode::Sampled { budget, seed },
        };
        let plane = &self.plane;
        let r = py.detach(|| planes::check_associativity(plane, a, b, mode)).map_err(err)?;
        report_to_py(py, &r)
    }

    fn __repr__(&self) -> String {
        format!(
            "FinitePlane(order={}, points={}, lines={})",
            self.plane.order(),
            self.plane.num_points(),
            self.plane.num_lines()
        )
    }
}

/// A construction scene; see the JSON scene format.
#[pyclass(name = "Scene")]
struct PyScene {
    scene: scene::Scene,
}

#[pymethods]
impl PyScene {
    #[new]
    fn new(json: &str) -> PyResult<Self> {
        Ok(PyScene {
            scene: scene::Scene::from_json_str(json).map_err(err)?,
        })
    }

    /// One of the bundled demo scenes.
    #[staticmethod]
    fn demo(name: &str) -> PyResult<Self> {
        let text = scene::demo(name).ok_or_else(|| err(format!("unknown demo '{name}'")))?;
        Self::new(text)
    }

    #[staticmethod]
    fn demo_names() -> Vec<&'static str> {
        scene::DEMOS.iter().map(|(n, _)| *n).collect()
    }

    /// Moves a free point (`{"x": .., "y": ..}`) or replaces a free line.
    fn set_object(&mut self, id: &str, value: &Bound<'_, PyAny>) -> PyResult<()> {
        self.scene.set_free_object(id, &from_py(value)?).map_err(err)
    }

    #[pyo3(signature = (backend = "exact"))]
    fn evaluate<'py>(&self, py: Python<'py>, backend: &str) -> PyResult<Bound<'py, PyAny>> {
        let backend: Backend = backend.parse().map_err(err)?;
        let scene = &self.scene;
        let result = py.detach(|| scene::evaluate(scene, backend));
        to_py(py, &result.to_json())
    }

    fn to_json(&self) -> String {
        self.scene.to_json().to_string()
    }
}

/// Runs a verification suite and returns the run as a dict.
#[pyfunction]
#[pyo3(signature = (suite, field = "rational", samples = 10_000, seed = 42, order = 3, plane = "pg", budget = None))]
fn run_verification<'py>(
    py: Python<'py>,
    suite: &str,
    field: &str,
    samples: usize,
    seed: u64,
    order: u32,
    plane: &str,
    budget: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = VerifyOptions {
        field: field.parse().map_err(err)?,
        samples,
        seed,
        order,
        plane: plane.parse().map_err(err)?,
        budget,
    };
    let suite: verify::Suite = suite.parse().map_err(err)?;
    let run = py.detach(|| verify::run_suite(suite, &opts)).map_err(err)?;
    to_py(py, &run.to_json())
}

#[pymodule]
fn pytrapgeom(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyTrapezoid>()?;
    m.add_class::<PyMatrixTorsor>()?;
    m.add_class::<PyPlane>()?;
    m.add_class::<PyScene>()?;
    m.add_function(wrap_pyfunction!(run_verification, m)?)?;
    Ok(())
}
