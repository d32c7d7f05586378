//! The seventeen exact triples (f, ξ, θ).
//!
//! Each θ solves the potential fast diffusion equation θ_t = θ_xx/θ_x, and
//! f = -1/θ_x, ξ = -θ_t/θ_x. The operator ∂_t + ξ∂_x is then a reduction
//! operator of u_t + u u_x + f u_xx = 0.
//!
//! Domains of validity are our own choice: every denominator (and θ_x) is
//! kept at least [`EPS_DEN`] away from zero. Evaluating a field outside its
//! domain fails with [`EvalError::Singular`].

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::jets::{Antiderivative, EvalError, Jet3, Point, ScalarField, UnivariateFn};
use crate::region::Region;

/// Margin kept between valid points and the zero sets of denominators.
pub const EPS_DEN: f64 = 1e-8;

pub const CASE_COUNT: u8 = 17;

/// λ used for Case 5 when none is given.
pub const DEFAULT_LAMBDA: f64 = 1.0;

/// Case 5: the integral term of θ vanishes at w = x/t = 2.
pub const CASE5_REFERENCE: f64 = 2.0;

const QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("case {0} does not exist (valid cases are 1..=17)")]
    UnknownCase(i64),
    #[error("lambda is only a parameter of case 5, not case {0}")]
    UnexpectedLambda(u8),
    #[error("lambda = {0} puts a zero of w - 1 + lambda e^(-w) at the reference point w = 2")]
    DegenerateLambda(f64),
    #[error("check is only defined for lambda = 0, got {0}")]
    NotReducible(f64),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

type Predicate = Arc<dyn Fn(Point) -> bool + Send + Sync>;

/// A function whose zero set is part of a row's singular set.
type Guard = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

fn guard(g: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Guard {
    Arc::new(g)
}

/// One row of the table.
#[derive(Clone)]
pub struct CatalogEntry {
    pub id: u8,
    pub f: ScalarField,
    pub xi: ScalarField,
    pub theta: ScalarField,
    /// Case 5 only.
    pub lambda: Option<f64>,
    pub f_expr: &'static str,
    pub xi_expr: &'static str,
    pub theta_expr: &'static str,
    pub singular_description: String,
    /// A rectangle on which every grid node is valid, used as the default
    /// sweep region.
    pub region: Region,
    valid: Predicate,
    guards: Vec<Guard>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("id", &self.id)
            .field("f", &self.f_expr)
            .field("xi", &self.xi_expr)
            .field("theta", &self.theta_expr)
            .field("lambda", &self.lambda)
            .finish()
    }
}

impl CatalogEntry {
    pub fn is_valid(&self, p: Point) -> bool {
        p.is_finite() && (self.valid)(p)
    }

    pub fn check(&self, p: Point) -> Result<(), EvalError> {
        if self.is_valid(p) {
            Ok(())
        } else {
            Err(EvalError::Singular {
                t: p.t,
                x: p.x,
                set: self.singular_description.clone(),
            })
        }
    }

    pub fn validity(&self) -> impl Fn(Point) -> bool + Send + Sync + 'static {
        let v = self.valid.clone();
        move |p| p.is_finite() && v(p)
    }

    /// Checks that `region` avoids the singular set: every node of an
    /// `n × n` grid must be valid and no singular curve may pass between
    /// neighbouring nodes.
    pub fn check_region(&self, region: Region, n: usize) -> Result<(), EvalError> {
        let n = n.max(2);
        let grid = region.grid(n, n);
        for &p in &grid {
            self.check(p)?;
        }
        let crossing = |a: Point, b: Point| {
            self.guards.iter().any(|g| g(a).signum() != g(b).signum())
        };
        for i in 0..n {
            for j in 0..n {
                let p = grid[i * n + j];
                let right = (j + 1 < n).then(|| grid[i * n + j + 1]);
                let up = (i + 1 < n).then(|| grid[(i + 1) * n + j]);
                for q in [right, up].into_iter().flatten() {
                    if crossing(p, q) {
                        return Err(EvalError::Singular {
                            t: 0.5 * (p.t + q.t),
                            x: 0.5 * (p.x + q.x),
                            set: self.singular_description.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Reference point of the quadrature constant (Case 5 only).
    pub fn quadrature_reference(&self) -> Option<f64> {
        (self.id == 5).then_some(CASE5_REFERENCE)
    }

    pub fn summary(&self) -> CaseSummary {
        CaseSummary {
            id: self.id,
            f_expr: self.f_expr.to_string(),
            xi_expr: self.xi_expr.to_string(),
            theta_expr: self.theta_expr.to_string(),
            singular_description: self.singular_description.clone(),
            lambda: self.lambda,
        }
    }
}

/// Serializable description of a catalog row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseSummary {
    pub id: u8,
    pub f_expr: String,
    pub xi_expr: String,
    pub theta_expr: String,
    pub singular_description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

fn far(v: f64) -> bool {
    v.abs() > EPS_DEN
}

struct Row {
    f: ScalarField,
    xi: ScalarField,
    theta: ScalarField,
    exprs: [&'static str; 3],
    singular: String,
    region: Region,
    valid: Predicate,
    guards: Vec<Guard>,
}

fn row<F, X, T>(
    f: F,
    xi: X,
    theta: T,
    exprs: [&'static str; 3],
    singular: &str,
    region: Region,
    guards: Vec<Guard>,
) -> Row
where
    F: Fn(Jet3, Jet3) -> Jet3 + Send + Sync + 'static,
    X: Fn(Jet3, Jet3) -> Jet3 + Send + Sync + 'static,
    T: Fn(Jet3, Jet3) -> Jet3 + Send + Sync + 'static,
{
    let gs = guards.clone();
    Row {
        f: ScalarField::from_expr(f),
        xi: ScalarField::from_expr(xi),
        theta: ScalarField::from_expr(theta),
        exprs,
        singular: singular.to_string(),
        region,
        valid: Arc::new(move |p| gs.iter().all(|g| far(g(p)))),
        guards,
    }
}

fn table_row(id: u8) -> Row {
    match id {
        1 => row(
            |t, x| -((t + x).exp() + 1.0),
            |t, x| (t + x).exp(),
            |t, x| -(t.exp() + (-x).exp()).ln(),
            ["-(1 + exp(t + x))", "exp(t + x)", "-ln(exp(t) + exp(-x))"],
            "none",
            Region::new(0.0, 1.0, -1.0, 1.0),
            Vec::new(),
        ),
        2 => row(
            |_, _| Jet3::constant(-1.0),
            |_, _| Jet3::constant(0.0),
            |_, x| x,
            ["-1", "0", "x"],
            "none",
            Region::new(0.0, 1.0, -2.0, 2.0),
            Vec::new(),
        ),
        3 => row(
            |t, x| (t + x).exp() - 1.0,
            |t, x| -(t + x).exp(),
            |t, x| -(t.exp() - (-x).exp()).ln_abs(),
            ["exp(t + x) - 1", "-exp(t + x)", "-ln|exp(t) - exp(-x)|"],
            "x + t = 0",
            Region::new(0.5, 1.5, 0.5, 2.0),
            vec![guard(|p| p.t.exp() - (-p.x).exp())],
        ),
        4 => row(
            |_, x| -(-x).exp(),
            |_, x| -(-x).exp(),
            |t, x| x.exp() + t,
            ["-exp(-x)", "-exp(-x)", "exp(x) + t"],
            "none",
            Region::new(0.0, 1.0, -1.0, 1.0),
            Vec::new(),
        ),
        5 => unreachable!("case 5 is parameterized by lambda"),
        6 => row(
            |t, x| (t * t - x * x) / (t * 2.0),
            |t, x| x / t,
            |t, x| (x - t).ln_abs() - (x + t).ln_abs(),
            ["(t^2 - x^2)/(2t)", "x/t", "ln|(x - t)/(x + t)|"],
            "t = 0, x = t, x = -t",
            Region::new(0.5, 1.0, 1.5, 3.0),
            vec![guard(|p| p.t), guard(|p| p.x - p.t), guard(|p| p.x + p.t)],
        ),
        7 => row(
            |t, x| -(x * x) / (t * 2.0),
            |t, x| x / t,
            |t, x| -(t * 2.0) / x,
            ["-x^2/(2t)", "x/t", "-2t/x"],
            "t = 0, x = 0",
            Region::new(1.0, 2.0, 1.0, 3.0),
            vec![guard(|p| p.t), guard(|p| p.x)],
        ),
        8 => row(
            |t, x| -(t * t + x * x) / (t * 2.0),
            |t, x| x / t,
            |t, x| (x / t).atan() * 2.0,
            ["-(t^2 + x^2)/(2t)", "x/t", "2 atan(x/t)"],
            "t = 0",
            Region::new(1.0, 2.0, -1.0, 1.0),
            vec![guard(|p| p.t)],
        ),
        9 => row(
            |t, x| -(x.cos() * x.cos()) / (t * 2.0),
            |t, x| -(x * 2.0).sin() / (t * 2.0),
            |t, x| t * x.tan() * 2.0,
            ["-cos(x)^2/(2t)", "-sin(2x)/(2t)", "2t tan(x)"],
            "t = 0, cos(x) = 0",
            Region::new(1.0, 2.0, -1.0, 1.0),
            vec![guard(|p| p.t), guard(|p| p.x.cos())],
        ),
        10 => row(
            |t, x| x.cosh() * x.cosh() / (t * 2.0),
            |t, x| -(x * 2.0).sinh() / (t * 2.0),
            |t, x| -(t * x.tanh() * 2.0),
            ["cosh(x)^2/(2t)", "-sinh(2x)/(2t)", "-2t tanh(x)"],
            "t = 0",
            Region::new(1.0, 2.0, -1.0, 1.0),
            vec![guard(|p| p.t)],
        ),
        11 => row(
            |t, x| -(x.sinh() * x.sinh()) / (t * 2.0),
            |t, x| (x * 2.0).sinh() / (t * 2.0),
            |t, x| -(t * x.coth() * 2.0),
            ["-sinh(x)^2/(2t)", "sinh(2x)/(2t)", "-2t coth(x)"],
            "t = 0, x = 0",
            Region::new(1.0, 2.0, 0.5, 2.0),
            vec![guard(|p| p.t), guard(|p| p.x.sinh())],
        ),
        12 => row(
            |t, x| ((x * 2.0).cos() - (t * 2.0).cos()) / ((t * 2.0).sin() * 2.0),
            |t, x| (x * 2.0).sin() / (t * 2.0).sin(),
            |t, x| (x - t).sin().ln_abs() - (x + t).sin().ln_abs(),
            [
                "(cos(2x) - cos(2t))/(2 sin(2t))",
                "sin(2x)/sin(2t)",
                "ln|sin(x - t)/sin(x + t)|",
            ],
            "sin(2t) = 0, sin(x - t) = 0, sin(x + t) = 0",
            Region::new(0.2, 0.5, 0.7, 1.3),
            vec![guard(|p| (2.0 * p.t).sin()), guard(|p| (p.x - p.t).sin()), guard(|p| (p.x + p.t).sin())],
        ),
        13 => row(
            |t, x| ((t * 2.0).cosh() - (x * 2.0).cosh()) / ((t * 2.0).sinh() * 2.0),
            |t, x| (x * 2.0).sinh() / (t * 2.0).sinh(),
            |t, x| (x - t).sinh().ln_abs() - (x + t).sinh().ln_abs(),
            [
                "(cosh(2t) - cosh(2x))/(2 sinh(2t))",
                "sinh(2x)/sinh(2t)",
                "ln|sinh(x - t)/sinh(x + t)|",
            ],
            "t = 0, x = t, x = -t",
            Region::new(0.2, 0.5, 0.7, 1.5),
            vec![guard(|p| (2.0 * p.t).sinh()), guard(|p| (p.x - p.t).sinh()), guard(|p| (p.x + p.t).sinh())],
        ),
        14 => row(
            |t, x| ((t * 2.0).sinh() - (x * 2.0).sinh()) / ((t * 2.0).cosh() * 2.0),
            |t, x| (x * 2.0).cosh() / (t * 2.0).cosh(),
            |t, x| (x - t).sinh().ln_abs() - (x + t).cosh().ln(),
            [
                "(sinh(2t) - sinh(2x))/(2 cosh(2t))",
                "cosh(2x)/cosh(2t)",
                "ln|sinh(x - t)/cosh(x + t)|",
            ],
            "x = t",
            Region::new(0.0, 0.5, 0.7, 1.5),
            vec![guard(|p| (p.x - p.t).sinh())],
        ),
        15 => row(
            |t, x| ((t * 2.0).cosh() + (x * 2.0).cosh()) / ((t * 2.0).sinh() * 2.0),
            |t, x| -(x * 2.0).sinh() / (t * 2.0).sinh(),
            |t, x| (x - t).cosh().ln() - (x + t).cosh().ln(),
            [
                "(cosh(2t) + cosh(2x))/(2 sinh(2t))",
                "-sinh(2x)/sinh(2t)",
                "ln|cosh(x - t)/cosh(x + t)|",
            ],
            "t = 0",
            Region::new(0.2, 0.8, -1.0, 1.0),
            vec![guard(|p| (2.0 * p.t).sinh())],
        ),
        16 => row(
            |t, x| ((t * 2.0).cos() - (x * 2.0).cosh()) / ((t * 2.0).sin() * 2.0),
            |t, x| (x * 2.0).sinh() / (t * 2.0).sin(),
            |t, x| (t.cot() * x.tanh()).atan() * 2.0,
            [
                "(cos(2t) - cosh(2x))/(2 sin(2t))",
                "sinh(2x)/sin(2t)",
                "2 atan(cot(t) tanh(x))",
            ],
            "sin(2t) = 0",
            Region::new(0.3, 1.2, -1.0, 1.0),
            vec![guard(|p| (2.0 * p.t).sin())],
        ),
        17 => row(
            |t, x| -((t * 2.0).cosh() - (x * 2.0).cos()) / ((t * 2.0).sinh() * 2.0),
            |t, x| (x * 2.0).sin() / (t * 2.0).sinh(),
            |t, x| (t.coth() * x.tan()).atan() * 2.0,
            [
                "-(cosh(2t) - cos(2x))/(2 sinh(2t))",
                "sin(2x)/sinh(2t)",
                "2 atan(coth(t) tan(x))",
            ],
            "t = 0, cos(x) = 0",
            Region::new(0.3, 1.0, -1.0, 1.0),
            vec![guard(|p| (2.0 * p.t).sinh()), guard(|p| p.x.cos())],
        ),
        _ => unreachable!(),
    }
}

/// Denominator `w - 1 + λ e^{-w}` of the Case 5 integrand.
fn case5_den(lambda: f64, w: f64) -> f64 {
    w - 1.0 + lambda * (-w).exp()
}

fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (g(mid) > 0.0) == (glo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Connected component of `{w : w - 1 + λ e^{-w} ≠ 0}` containing w = 2.
pub fn case5_component(lambda: f64) -> Result<(f64, f64), CatalogError> {
    let den = |w| case5_den(lambda, w);
    if !lambda.is_finite() {
        return Err(CatalogError::DegenerateLambda(lambda));
    }
    if lambda == 0.0 {
        return Ok((1.0, f64::INFINITY));
    }
    if lambda > 0.0 {
        // convex, minimum ln λ at w = ln λ
        let wmin = lambda.ln();
        return Ok(if lambda > 1.0 {
            (f64::NEG_INFINITY, f64::INFINITY)
        } else if lambda == 1.0 {
            (0.0, f64::INFINITY)
        } else {
            (bisect(den, wmin, 1.0), f64::INFINITY)
        });
    }
    // λ < 0: increasing
    let d2 = den(CASE5_REFERENCE);
    if d2 == 0.0 {
        return Err(CatalogError::DegenerateLambda(lambda));
    }
    if d2 > 0.0 {
        let mut lo = CASE5_REFERENCE - 1.0;
        while den(lo) > 0.0 {
            lo -= 2.0 * (CASE5_REFERENCE - lo);
        }
        Ok((bisect(den, lo, CASE5_REFERENCE), f64::INFINITY))
    } else {
        let mut hi = CASE5_REFERENCE + 1.0;
        while den(hi) < 0.0 {
            hi += 2.0 * (hi - CASE5_REFERENCE);
        }
        Ok((f64::NEG_INFINITY, bisect(den, CASE5_REFERENCE, hi)))
    }
}

fn case5_row(lambda: f64) -> Result<Row, CatalogError> {
    let (lo, hi) = case5_component(lambda)?;
    let integrand = UnivariateFn::from_expr(move |w| (w - 1.0 + (-w).exp() * lambda).recip());
    let big = Antiderivative::new(integrand, CASE5_REFERENCE, QUAD_TOL).into_fn();

    let f = ScalarField::from_expr(move |t, x| t - x - t * (-(x / t)).exp() * lambda);
    let xi = ScalarField::from_expr(move |t, x| 1.0 - (-(x / t)).exp() * lambda);
    let theta = ScalarField::new(move |t, x| Ok(t.ln_abs() + big.eval_jet(x / t)?));
    let valid = move |p: Point| {
        if !far(p.t) {
            return false;
        }
        let w = p.x / p.t;
        w > lo && w < hi && far(case5_den(lambda, w))
    };
    let fmt_bound = |b: f64| {
        if b.is_finite() {
            format!("{b:.6}")
        } else if b > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    };
    Ok(Row {
        f,
        xi,
        theta,
        exprs: [
            "t - x - lambda t exp(-x/t)",
            "1 - lambda exp(-x/t)",
            "ln|t| + int_2^(x/t) dw/(w - 1 + lambda exp(-w))",
        ],
        singular: format!(
            "t = 0, or x/t outside ({}, {}) (component of w - 1 + lambda e^(-w) != 0 containing w = 2)",
            fmt_bound(lo),
            fmt_bound(hi)
        ),
        region: Region::new(1.0, 2.0, 1.0, 3.0),
        valid: Arc::new(valid),
        guards: vec![guard(|p| p.t), guard(move |p| case5_den(lambda, p.x / p.t))],
    })
}

/// Catalog row `id`; `lambda` must be given only for case 5 (default
/// [`DEFAULT_LAMBDA`]).
pub fn get_case(id: i64, lambda: Option<f64>) -> Result<CatalogEntry, CatalogError> {
    if !(1..=i64::from(CASE_COUNT)).contains(&id) {
        return Err(CatalogError::UnknownCase(id));
    }
    let id = id as u8;
    let (row, lambda) = if id == 5 {
        let l = lambda.unwrap_or(DEFAULT_LAMBDA);
        (case5_row(l)?, Some(l))
    } else {
        if lambda.is_some() {
            return Err(CatalogError::UnexpectedLambda(id));
        }
        (table_row(id), None)
    };
    let valid = row.valid.clone();
    let restrict = |field: ScalarField| {
        let v = valid.clone();
        field.with_domain(move |p| v(p), row.singular.clone())
    };
    Ok(CatalogEntry {
        id,
        f: restrict(row.f),
        xi: restrict(row.xi),
        theta: restrict(row.theta),
        lambda,
        f_expr: row.exprs[0],
        xi_expr: row.exprs[1],
        theta_expr: row.exprs[2],
        singular_description: row.singular,
        region: row.region,
        valid,
        guards: row.guards,
    })
}

/// All seventeen rows; `lambda` applies to case 5.
pub fn all_cases(lambda: Option<f64>) -> Result<Vec<CatalogEntry>, CatalogError> {
    (1..=i64::from(CASE_COUNT))
        .map(|id| get_case(id, if id == 5 { lambda } else { None }))
        .collect()
}

/// Point values `(f, ξ, θ)` of case `id` at `p`.
pub fn eval_case(id: i64, p: Point, lambda: Option<f64>) -> Result<(f64, f64, f64), CatalogError> {
    let entry = get_case(id, lambda)?;
    entry.check(p)?;
    Ok((entry.f.value(p)?, entry.xi.value(p)?, entry.theta.value(p)?))
}

/// At λ = 0 the Case 5 integral is ln|w - 1|, so θ = ln|x - t| plus the
/// constant fixed by the reference point (-ln|w0 - 1| = 0 for w0 = 2).
/// Returns the absolute difference after that alignment.
pub fn case5_theta_reduction_check(p: Point, lambda: f64) -> Result<f64, CatalogError> {
    if lambda != 0.0 {
        return Err(CatalogError::NotReducible(lambda));
    }
    let entry = get_case(5, Some(0.0))?;
    entry.check(p)?;
    let theta = entry.theta.value(p)?;
    let offset = -(CASE5_REFERENCE - 1.0).abs().ln();
    Ok((theta - ((p.x - p.t).abs().ln() + offset)).abs())
}
