//! Python bindings: catalog rows, Riccati branches, solutions, equivalence
//! group elements, residual sweeps and the numerical solver.

use gbe_core::ansatz::{build_solution, rational_solution, xi_solution, RiccatiBranch, SolutionField};
use gbe_core::catalog::{all_cases, get_case, CatalogEntry};
use gbe_core::equivalence::EquivalenceElement;
use gbe_core::numsolve::{compare, convergence_study, solve_ibvp, IbvpSpec};
use gbe_core::verify::{case_residual, gbe_residual, sweep, Check};
use gbe_core::{Point, Region, ScalarField};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts anything serializable to Python objects through `json.loads`.
fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn region(r: Option<(f64, f64, f64, f64)>, default: Region) -> PyResult<Region> {
    match r {
        None => Ok(default),
        Some((t0, t1, x0, x1)) => {
            let r = Region::new(t0, t1, x0, x1);
            if r.is_valid() {
                Ok(r)
            } else {
                Err(err(format!("invalid region {r}")))
            }
        }
    }
}

fn check(which: &str) -> PyResult<Check> {
    Ok(match which {
        "gbe" => Check::Gbe,
        "pfde" => Check::Pfde,
        "potential" => Check::Potential,
        "reduced" => Check::Reduced,
        "determining" => Check::Determining,
        other => return Err(err(format!("unknown check '{other}'"))),
    })
}

fn jet_dict<'py>(py: Python<'py>, field: &ScalarField, t: f64, x: f64) -> PyResult<Bound<'py, PyAny>> {
    let j = field.eval_jet(Point::new(t, x)).map_err(err)?;
    let map: serde_json::Map<String, serde_json::Value> = gbe_core::Jet3::PARTIAL_NAMES
        .iter()
        .zip(j.partials())
        .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
        .collect();
    to_py(py, &map)
}

/// A catalog row (f, ξ, θ).
#[pyclass(name = "Case", frozen)]
struct PyCase {
    entry: CatalogEntry,
}

#[pymethods]
impl PyCase {
    #[new]
    #[pyo3(signature = (id, lambda_=None))]
    fn new(id: i64, lambda_: Option<f64>) -> PyResult<Self> {
        Ok(Self { entry: get_case(id, lambda_).map_err(err)? })
    }

    #[getter]
    fn id(&self) -> u8 {
        self.entry.id
    }

    #[getter]
    fn region(&self) -> (f64, f64, f64, f64) {
        let r = self.entry.region;
        (r.t0, r.t1, r.x0, r.x1)
    }

    #[getter]
    fn formulas(&self) -> (&'static str, &'static str, &'static str) {
        (self.entry.f_expr, self.entry.xi_expr, self.entry.theta_expr)
    }

    #[getter]
    fn singular_set(&self) -> String {
        self.entry.singular_description.clone()
    }

    fn is_valid(&self, t: f64, x: f64) -> bool {
        self.entry.is_valid(Point::new(t, x))
    }

    fn f(&self, t: f64, x: f64) -> PyResult<f64> {
        self.entry.f.value(Point::new(t, x)).map_err(err)
    }

    fn xi(&self, t: f64, x: f64) -> PyResult<f64> {
        self.entry.xi.value(Point::new(t, x)).map_err(err)
    }

    fn theta(&self, t: f64, x: f64) -> PyResult<f64> {
        self.entry.theta.value(Point::new(t, x)).map_err(err)
    }

    /// Partial derivatives through order 3 of `field` ("f", "xi" or "theta").
    fn jet<'py>(&self, py: Python<'py>, field: &str, t: f64, x: f64) -> PyResult<Bound<'py, PyAny>> {
        let f = match field {
            "f" => &self.entry.f,
            "xi" => &self.entry.xi,
            "theta" => &self.entry.theta,
            other => return Err(err(format!("unknown field '{other}'"))),
        };
        jet_dict(py, f, t, x)
    }

    /// Sweeps one residual family over a grid and returns the report.
    #[pyo3(signature = (which, region=None, n_t=50, n_x=50))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        which: &str,
        region: Option<(f64, f64, f64, f64)>,
        n_t: usize,
        n_x: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let r = self::region(region, self.entry.region)?;
        let rep = sweep(case_residual(&self.entry, check(which)?, None), r, n_t, n_x).map_err(err)?;
        to_py(py, &rep)
    }

    fn __repr__(&self) -> String {
        format!("Case({}: f = {})", self.entry.id, self.entry.f_expr)
    }
}

/// A solution u together with the arbitrary element f it solves for.
#[pyclass(name = "Solution", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySolution {
    sol: SolutionField,
    region: Region,
}

#[pymethods]
impl PySolution {
    /// u = φ(θ) on catalog row `case` with Riccati branch (ν, c1, c2).
    #[staticmethod]
    #[pyo3(signature = (case, nu, c1, c2, lambda_=None))]
    fn phi(case: i64, nu: f64, c1: f64, c2: f64, lambda_: Option<f64>) -> PyResult<Self> {
        let e = get_case(case, lambda_).map_err(err)?;
        let b = RiccatiBranch::new(nu, c1, c2).map_err(err)?;
        Ok(Self { sol: build_solution(&e, b), region: e.region })
    }

    /// u = ξ of catalog row `case`.
    #[staticmethod]
    #[pyo3(signature = (case, lambda_=None))]
    fn xi(case: i64, lambda_: Option<f64>) -> PyResult<Self> {
        let e = get_case(case, lambda_).map_err(err)?;
        Ok(Self { sol: xi_solution(&e), region: e.region })
    }

    /// u = (x + c1)/(t + c2) with the f of catalog row `case`.
    #[staticmethod]
    fn rational(case: i64, c1: f64, c2: f64) -> PyResult<Self> {
        let e = get_case(case, None).map_err(err)?;
        Ok(Self { sol: rational_solution(c1, c2, &e.f), region: e.region })
    }

    #[getter]
    fn provenance(&self) -> String {
        self.sol.provenance.clone()
    }

    fn u(&self, t: f64, x: f64) -> PyResult<f64> {
        self.sol.u.value(Point::new(t, x)).map_err(err)
    }

    fn f(&self, t: f64, x: f64) -> PyResult<f64> {
        self.sol.f.value(Point::new(t, x)).map_err(err)
    }

    fn jet<'py>(&self, py: Python<'py>, t: f64, x: f64) -> PyResult<Bound<'py, PyAny>> {
        jet_dict(py, &self.sol.u, t, x)
    }

    /// Scaled residual |u_t + u u_x + f u_xx| / (1 + Σ|terms|).
    fn residual(&self, t: f64, x: f64) -> PyResult<f64> {
        Ok(gbe_residual(&self.sol.u, &self.sol.f, Point::new(t, x)).map_err(err)?.scaled())
    }

    /// Values of u on a grid, as a list of (t, x, u) rows.
    #[pyo3(signature = (region=None, n_t=11, n_x=11))]
    fn grid(&self, region: Option<(f64, f64, f64, f64)>, n_t: usize, n_x: usize) -> PyResult<Vec<(f64, f64, f64)>> {
        let r = self::region(region, self.region)?;
        r.grid(n_t, n_x)
            .into_iter()
            .map(|p| Ok((p.t, p.x, self.sol.u.value(p).map_err(err)?)))
            .collect()
    }

    /// The image of this solution under an equivalence transformation.
    fn transform(&self, g: &PyElement) -> PyResult<Self> {
        let r = self.region;
        let corners = [(r.t0, r.x0), (r.t0, r.x1), (r.t1, r.x0), (r.t1, r.x1)];
        let mut img = Region::new(f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (t, x) in corners {
            let p = g.g.apply_point(Point::new(t, x)).map_err(err)?;
            img = Region::new(img.t0.min(p.t), img.t1.max(p.t), img.x0.min(p.x), img.x1.max(p.x));
        }
        Ok(Self { sol: g.g.transform_solution(&self.sol), region: img })
    }

    #[pyo3(signature = (which="gbe", region=None, n_t=50, n_x=50))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        which: &str,
        region: Option<(f64, f64, f64, f64)>,
        n_t: usize,
        n_x: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        if which != "gbe" {
            return Err(err("solutions only support the 'gbe' residual"));
        }
        let r = self::region(region, self.region)?;
        let (u, f) = (self.sol.u.clone(), self.sol.f.clone());
        let rep = sweep(move |p| Ok(gbe_residual(&u, &f, p)?.scaled()), r, n_t, n_x).map_err(err)?;
        to_py(py, &rep)
    }

    /// Integrates the manufactured problem and returns the grid, scheme
    /// description and final-time errors.
    #[pyo3(signature = (region=None, n_x=64, n_out=11, dt_safety=0.9))]
    fn solve<'py>(
        &self,
        py: Python<'py>,
        region: Option<(f64, f64, f64, f64)>,
        n_x: usize,
        n_out: usize,
        dt_safety: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let r = self::region(region, self.region)?;
        let mut spec = IbvpSpec::manufactured(&self.sol, r, n_x);
        spec.n_out = n_out;
        spec.dt_safety = dt_safety;
        let num = py.detach(|| solve_ibvp(&spec)).map_err(err)?;
        let errors = compare(&num, &self.sol).map_err(err)?;
        to_py(py, &serde_json::json!({ "solution": num, "errors": errors }))
    }

    #[pyo3(signature = (region=None, resolutions=vec![32, 64, 128], dt_safety=0.9))]
    fn convergence<'py>(
        &self,
        py: Python<'py>,
        region: Option<(f64, f64, f64, f64)>,
        resolutions: Vec<usize>,
        dt_safety: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let r = self::region(region, self.region)?;
        let sol = self.sol.clone();
        let rep = py
            .detach(|| convergence_study(&sol, r, dt_safety, &resolutions))
            .map_err(err)?;
        to_py(py, &rep)
    }

    fn __repr__(&self) -> String {
        format!("Solution({})", self.sol.provenance)
    }
}

/// An element of the equivalence group.
#[pyclass(name = "Element", frozen)]
struct PyElement {
    g: EquivalenceElement,
}

#[pymethods]
impl PyElement {
    #[new]
    #[allow(clippy::too_many_arguments)]
    fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, mu0: f64, mu1: f64, kappa: f64) -> PyResult<Self> {
        Ok(Self {
            g: EquivalenceElement::new(alpha, beta, gamma, delta, mu0, mu1, kappa).map_err(err)?,
        })
    }

    #[staticmethod]
    fn identity() -> Self {
        Self { g: EquivalenceElement::identity() }
    }

    #[staticmethod]
    fn galilean_boost(mu: f64) -> PyResult<Self> {
        Ok(Self { g: EquivalenceElement::galilean_boost(mu).map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { g: serde_json::from_str(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.g).map_err(err)
    }

    /// (α, β, γ, δ, μ0, μ1, κ) after normalization.
    #[getter]
    fn params(&self) -> [f64; 7] {
        self.g.params()
    }

    #[getter]
    fn f_factor(&self) -> f64 {
        self.g.f_factor()
    }

    /// `self ∘ other`.
    fn compose(&self, other: &PyElement) -> Self {
        Self { g: self.g.compose(&other.g) }
    }

    fn inverse(&self) -> Self {
        Self { g: self.g.inverse() }
    }

    fn apply_point(&self, t: f64, x: f64) -> PyResult<(f64, f64)> {
        let p = self.g.apply_point(Point::new(t, x)).map_err(err)?;
        Ok((p.t, p.x))
    }

    fn apply_u(&self, t: f64, x: f64, u: f64) -> PyResult<f64> {
        self.g.apply_u(Point::new(t, x), u).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.g)
    }
}

/// φ(ω) of the Riccati branch (ν, c1, c2).
#[pyfunction]
fn phi(nu: f64, c1: f64, c2: f64, omega: f64) -> PyResult<f64> {
    RiccatiBranch::new(nu, c1, c2).map_err(err)?.phi(omega).map_err(err)
}

/// φ' - φ²/2 - 2ν at ω.
#[pyfunction]
fn riccati_residual(nu: f64, c1: f64, c2: f64, omega: f64) -> PyResult<f64> {
    RiccatiBranch::new(nu, c1, c2).map_err(err)?.riccati_residual(omega).map_err(err)
}

/// Summaries of every catalog row.
#[pyfunction]
#[pyo3(signature = (lambda_=None))]
fn list_cases(py: Python<'_>, lambda_: Option<f64>) -> PyResult<Bound<'_, PyAny>> {
    let rows: Vec<_> = all_cases(lambda_).map_err(err)?.iter().map(CatalogEntry::summary).collect();
    to_py(py, &rows)
}

#[pymodule]
fn gbe(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCase>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PyElement>()?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(riccati_residual, m)?)?;
    m.add_function(wrap_pyfunction!(list_cases, m)?)?;
    Ok(())
}
