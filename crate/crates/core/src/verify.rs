//! Residual operators for the generalized Burgers equation, the potential
//! (generalized) fast diffusion equations, the potential system, the reduced
//! determining system and the full determining system of reduction
//! operators ∂_t + ξ∂_x + η∂_u, plus grid sweeps.
//!
//! Every residual is reported with the scale `1 + Σ|terms|` of its additive
//! terms; tolerances apply to `|value| / scale`.
//!
//! The `*_jets` functions take precomputed jets, so the same formulas can be
//! fed exact jets or finite-difference jets.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ansatz::SolutionField;
use crate::catalog::{CatalogEntry, EPS_DEN};
use crate::jets::{EvalError, Jet3, Point, ScalarField, UnivariateFn};
use crate::region::Region;

/// Default sample values of u for the last determining equation. Its
/// residual is a polynomial of degree at most 4 in u, so vanishing at five
/// distinct values means vanishing identically.
pub const DEFAULT_U_SAMPLES: [f64; 5] = [-2.0, -0.5, 0.0, 0.5, 2.0];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("theta_x vanishes at {0}")]
    DegenerateGradient(Point),
    #[error("arbitrary element f vanishes at {0}")]
    VanishingF(Point),
    #[error("denominator a t^2 + (b1 + b2) t + c vanishes identically")]
    DegenerateOperator,
    #[error("grid needs at least 2x2 nodes, got {0}x{1}")]
    GridTooSmall(usize, usize),
    #[error("no valid point in {region} on a {n_t}x{n_x} grid")]
    EmptySweep { region: Region, n_t: usize, n_x: usize },
}

/// A signed residual and the scale it is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub scale: f64,
}

impl Residual {
    pub fn from_terms(terms: &[f64]) -> Self {
        Self {
            value: terms.iter().sum(),
            scale: 1.0 + terms.iter().map(|v| v.abs()).sum::<f64>(),
        }
    }

    /// `|value| / scale`.
    pub fn scaled(&self) -> f64 {
        self.value.abs() / self.scale
    }
}

fn max_scaled(rs: &[Residual]) -> f64 {
    rs.iter().map(Residual::scaled).fold(0.0, f64::max)
}

// ---- jet-level formulas ----

/// u_t + u u_x + f u_xx.
pub fn gbe_jets(u: &Jet3, f: &Jet3) -> Residual {
    Residual::from_terms(&[u.d_t(), u.v() * u.d_x(), f.v() * u.d_xx()])
}

fn gradient(theta: &Jet3, p: Point) -> Result<f64, VerifyError> {
    let tx = theta.d_x();
    if tx == 0.0 {
        Err(VerifyError::DegenerateGradient(p))
    } else {
        Ok(tx)
    }
}

/// θ_t - θ_xx/θ_x.
pub fn pfde_jets(theta: &Jet3, p: Point) -> Result<Residual, VerifyError> {
    let tx = gradient(theta, p)?;
    Ok(Residual::from_terms(&[theta.d_t(), -theta.d_xx() / tx]))
}

/// θ_t - θ_xx/θ_x - h(θ) θ_x, with `h` already evaluated at θ.
pub fn gfde_jets(theta: &Jet3, h_of_theta: f64, p: Point) -> Result<Residual, VerifyError> {
    let tx = gradient(theta, p)?;
    Ok(Residual::from_terms(&[
        theta.d_t(),
        -theta.d_xx() / tx,
        -h_of_theta * tx,
    ]))
}

fn nonzero_f(f: &Jet3, p: Point) -> Result<f64, VerifyError> {
    if f.v() == 0.0 {
        Err(VerifyError::VanishingF(p))
    } else {
        Ok(f.v())
    }
}

/// (θ_t - ξ/f, θ_x + 1/f).
pub fn potential_jets(
    theta: &Jet3,
    f: &Jet3,
    xi: &Jet3,
    p: Point,
) -> Result<(Residual, Residual), VerifyError> {
    let fv = nonzero_f(f, p)?;
    Ok((
        Residual::from_terms(&[theta.d_t(), -xi.v() / fv]),
        Residual::from_terms(&[theta.d_x(), 1.0 / fv]),
    ))
}

/// (f_t + ξ f_x - ξ_x f, ξ_t + ξ ξ_x + f ξ_xx).
pub fn reduced_jets(f: &Jet3, xi: &Jet3) -> (Residual, Residual) {
    (
        Residual::from_terms(&[f.d_t(), xi.v() * f.d_x(), -xi.d_x() * f.v()]),
        gbe_jets(xi, f),
    )
}

/// Jets of the coefficient functions ξ¹, ξ⁰, η¹, η⁰ at one point.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientJets {
    pub xi1: Jet3,
    pub xi0: Jet3,
    pub eta1: Jet3,
    pub eta0: Jet3,
}

/// The five determining equations, the last one maximized over the u
/// samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeterminingResiduals {
    pub a: Residual,
    pub b: Residual,
    pub c: Residual,
    pub d: Residual,
    pub e: Residual,
}

impl DeterminingResiduals {
    pub fn all(&self) -> [Residual; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    pub fn max_scaled(&self) -> f64 {
        max_scaled(&self.all())
    }
}

pub fn determining_jets(
    f: &Jet3,
    k: &CoefficientJets,
    u_samples: &[f64],
    p: Point,
) -> Result<DeterminingResiduals, VerifyError> {
    let fv = nonzero_f(f, p)?;
    let (x1, x0, e1, e0) = (k.xi1, k.xi0, k.eta1, k.eta0);
    let s = x1.v();
    let z = x0.v();
    let ft_f = f.d_t() / fv;
    let fx_f = f.d_x() / fv;

    let a = Residual::from_terms(&[2.0 * s * s * s, -s * s, -s]);
    let b = Residual::from_terms(&[
        -f.d_x() * s * s,
        f.d_x() * s,
        s * z * (2.0 * s + 1.0),
        4.0 * fv * s * x1.d_x(),
    ]);
    let c = Residual::from_terms(&[
        ft_f * (s - 1.0),
        -2.0 * fx_f * s * z,
        -fx_f * z,
        3.0 * fv * x1.d_xx(),
        2.0 * x1.d_x() * z,
        2.0 * s * x0.d_x(),
        (2.0 * s + 1.0) * e1.v(),
        -x1.d_t(),
        x0.d_x(),
    ]);
    let d = Residual::from_terms(&[
        x0.d_t(),
        2.0 * z * x0.d_x(),
        fv * x0.d_xx(),
        -e0.v() * (2.0 * s + 1.0),
        -ft_f * z,
        -fx_f * z * z,
        -2.0 * fv * e1.d_x(),
    ]);

    // η(t, x; u) as a jet in (t, x) for each fixed u. ξ¹_x is exact
    // through order 2, which is all η_xx needs.
    let x1_x = x1.diff_x();
    let cubic = x1 * (x1 - 1.0) / (*f * 3.0);
    let quadratic = x1_x + x1 * x0 / *f;
    let mut e = Residual::from_terms(&[0.0]);
    for &u in u_samples {
        let eta = cubic * (u * u * u) + quadratic * (u * u) + e1 * u + e0;
        let xi = s * u + z;
        let xi_x = x1.d_x() * u + x0.d_x();
        let r = Residual::from_terms(&[
            eta.d_t(),
            u * eta.d_x(),
            fv * eta.d_xx(),
            2.0 * xi_x * eta.v(),
            -ft_f * eta.v(),
            -fx_f * xi * eta.v(),
        ]);
        if r.scaled() >= e.scaled() {
            e = r;
        }
    }
    Ok(DeterminingResiduals { a, b, c, d, e })
}

// ---- field-level operations ----

pub fn gbe_residual(u: &ScalarField, f: &ScalarField, p: Point) -> Result<Residual, VerifyError> {
    Ok(gbe_jets(&u.eval_jet(p)?, &f.eval_jet(p)?))
}

pub fn pfde_residual(theta: &ScalarField, p: Point) -> Result<Residual, VerifyError> {
    pfde_jets(&theta.eval_jet(p)?, p)
}

pub fn gfde_residual(
    theta: &ScalarField,
    h: &UnivariateFn,
    p: Point,
) -> Result<Residual, VerifyError> {
    let th = theta.eval_jet(p)?;
    gfde_jets(&th, h.value(th.v())?, p)
}

pub fn potential_residual(
    theta: &ScalarField,
    f: &ScalarField,
    xi: &ScalarField,
    p: Point,
) -> Result<(Residual, Residual), VerifyError> {
    potential_jets(&theta.eval_jet(p)?, &f.eval_jet(p)?, &xi.eval_jet(p)?, p)
}

pub fn reduced_system_residual(
    f: &ScalarField,
    xi: &ScalarField,
    p: Point,
) -> Result<(Residual, Residual), VerifyError> {
    Ok(reduced_jets(&f.eval_jet(p)?, &xi.eval_jet(p)?))
}

/// Coefficients of a reduction operator with τ = 1:
/// ξ = ξ¹u + ξ⁰ and
/// η = ξ¹(ξ¹ - 1)/(3f) u³ + (ξ¹_x + ξ¹ξ⁰/f) u² + η¹u + η⁰.
#[derive(Clone, Debug)]
pub struct ReductionOperatorCoefficients {
    pub xi1: ScalarField,
    pub xi0: ScalarField,
    pub eta1: ScalarField,
    pub eta0: ScalarField,
}

impl ReductionOperatorCoefficients {
    /// ∂_t + ξ(t, x)∂_x.
    pub fn from_xi(xi: &ScalarField) -> Self {
        Self {
            xi1: ScalarField::constant(0.0),
            xi0: xi.clone(),
            eta1: ScalarField::constant(0.0),
            eta0: ScalarField::constant(0.0),
        }
    }

    /// ∂_t + u∂_x, common to every equation of the class.
    pub fn common() -> Self {
        Self {
            xi1: ScalarField::constant(1.0),
            xi0: ScalarField::constant(0.0),
            eta1: ScalarField::constant(0.0),
            eta0: ScalarField::constant(0.0),
        }
    }

    pub fn eval(&self, p: Point) -> Result<CoefficientJets, EvalError> {
        Ok(CoefficientJets {
            xi1: self.xi1.eval_jet(p)?,
            xi0: self.xi0.eval_jet(p)?,
            eta1: self.eta1.eval_jet(p)?,
            eta0: self.eta0.eval_jet(p)?,
        })
    }
}

pub fn determining_residuals(
    f: &ScalarField,
    coeffs: &ReductionOperatorCoefficients,
    p: Point,
    u_samples: &[f64],
) -> Result<DeterminingResiduals, VerifyError> {
    determining_jets(&f.eval_jet(p)?, &coeffs.eval(p)?, u_samples, p)
}

/// Reduction operators with ξ¹ = 0 and ξ⁰_xx = 0:
/// Q = ∂_t + ((at + b1)x + d1 t + d0)/D ∂_x + (-(at + b2)u + ax + d1)/D ∂_u,
/// D = at² + (b1 + b2)t + c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct LinearReductionOperator {
    pub a: f64,
    pub b1: f64,
    pub b2: f64,
    pub c: f64,
    pub d0: f64,
    pub d1: f64,
}

pub fn linear_operator_fields(
    q: &LinearReductionOperator,
) -> Result<ReductionOperatorCoefficients, VerifyError> {
    let q = *q;
    if q.a == 0.0 && q.b1 + q.b2 == 0.0 && q.c == 0.0 {
        return Err(VerifyError::DegenerateOperator);
    }
    let den = move |t: Jet3| t * t * q.a + t * (q.b1 + q.b2) + q.c;
    let guard = move |p: Point| {
        (q.a * p.t * p.t + (q.b1 + q.b2) * p.t + q.c).abs() > EPS_DEN
    };
    let set = "a t^2 + (b1 + b2) t + c = 0";
    let field = |g: fn(&LinearReductionOperator, Jet3, Jet3) -> Jet3| {
        ScalarField::from_expr(move |t, x| g(&q, t, x) / den(t)).with_domain(guard, set)
    };
    Ok(ReductionOperatorCoefficients {
        xi1: ScalarField::constant(0.0),
        xi0: field(|q, t, x| (t * q.a + q.b1) * x + t * q.d1 + q.d0),
        eta1: field(|q, t, _| -(t * q.a + q.b2)),
        eta0: field(|q, _, x| x * q.a + q.d1),
    })
}

// ---- sweeps ----

/// Maximum scaled residual over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepReport {
    pub max_abs_residual: f64,
    pub argmax: Point,
    pub points_checked: usize,
    pub points_skipped: usize,
    pub scale_used: &'static str,
}

impl SweepReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_abs_residual <= tol
    }
}

/// Evaluates `residual` (already scaled) on the uniform `n_t × n_x` grid
/// of `region`, skipping points where it fails. The reduction takes the
/// largest value, ties going to the lexicographically smallest point, so
/// the report does not depend on how rayon splits the work.
pub fn sweep<F>(residual: F, region: Region, n_t: usize, n_x: usize) -> Result<SweepReport, VerifyError>
where
    F: Fn(Point) -> Result<f64, VerifyError> + Sync,
{
    if n_t < 2 || n_x < 2 {
        return Err(VerifyError::GridTooSmall(n_t, n_x));
    }
    type Acc = (Option<(f64, usize)>, usize, usize);
    let better = |a: Option<(f64, usize)>, b: Option<(f64, usize)>| match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                Some(y)
            } else {
                Some(x)
            }
        }
    };
    let (best, checked, skipped): Acc = (0..n_t * n_x)
        .into_par_iter()
        .map(|k| {
            let p = region.grid_point(k / n_x, k % n_x, n_t, n_x);
            match residual(p) {
                Ok(r) => {
                    let r = if r.is_nan() { f64::INFINITY } else { r };
                    (Some((r, k)), 1, 0)
                }
                Err(_) => (None, 0, 1),
            }
        })
        .reduce(
            || (None, 0, 0),
            |a, b| (better(a.0, b.0), a.1 + b.1, a.2 + b.2),
        );
    let Some((max, k)) = best else {
        return Err(VerifyError::EmptySweep { region, n_t, n_x });
    };
    Ok(SweepReport {
        max_abs_residual: max,
        argmax: region.grid_point(k / n_x, k % n_x, n_t, n_x),
        points_checked: checked,
        points_skipped: skipped,
        scale_used: "relative",
    })
}

/// Residual families that can be swept over a catalog row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// u_t + u u_x + f u_xx for a supplied solution.
    Gbe,
    /// θ_t - θ_xx/θ_x.
    Pfde,
    /// θ_t - ξ/f and θ_x + 1/f.
    Potential,
    /// f_t + ξf_x - ξ_x f and ξ_t + ξξ_x + fξ_xx.
    Reduced,
    /// The five determining equations with ξ¹ = 0, ξ⁰ = ξ, η = 0.
    Determining,
}

/// Scaled-residual closure of `check` for `entry`. [`Check::Gbe`] uses
/// `solution`, or u = ξ when none is given.
pub fn case_residual(
    entry: &CatalogEntry,
    check: Check,
    solution: Option<&SolutionField>,
) -> Box<dyn Fn(Point) -> Result<f64, VerifyError> + Send + Sync> {
    let e = entry.clone();
    match check {
        Check::Gbe => {
            let (u, f) = match solution {
                Some(s) => (s.u.clone(), s.f.clone()),
                None => (e.xi.clone(), e.f.clone()),
            };
            Box::new(move |p| Ok(gbe_residual(&u, &f, p)?.scaled()))
        }
        Check::Pfde => Box::new(move |p| Ok(pfde_residual(&e.theta, p)?.scaled())),
        Check::Potential => Box::new(move |p| {
            let (r1, r2) = potential_residual(&e.theta, &e.f, &e.xi, p)?;
            Ok(max_scaled(&[r1, r2]))
        }),
        Check::Reduced => Box::new(move |p| {
            let (r3, r4) = reduced_system_residual(&e.f, &e.xi, p)?;
            Ok(max_scaled(&[r3, r4]))
        }),
        Check::Determining => {
            let coeffs = ReductionOperatorCoefficients::from_xi(&e.xi);
            Box::new(move |p| {
                Ok(determining_residuals(&e.f, &coeffs, p, &DEFAULT_U_SAMPLES)?.max_scaled())
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{rational_solution, RiccatiBranch, build_solution};
    use crate::catalog::get_case;

    #[test]
    fn gbe_rational_solution_vanishes() {
        let s = rational_solution(1.0, 2.0, &ScalarField::constant(0.3));
        let r = gbe_residual(&s.u, &s.f, Point::new(0.0, 0.0)).unwrap();
        assert!(r.value.abs() < 1e-15);
    }

    #[test]
    fn gbe_tanh_front() {
        let u = ScalarField::x().map(|x| x.tanh() * -2.0);
        let r = gbe_residual(&u, &ScalarField::constant(-1.0), Point::new(1.0, 0.3)).unwrap();
        assert!(r.value.abs() <= 1e-12);
    }

    #[test]
    fn gbe_non_solution() {
        let r = gbe_residual(&ScalarField::x(), &ScalarField::constant(-1.0), Point::new(0.0, 2.0))
            .unwrap();
        assert_eq!(r.value, 2.0);
    }

    #[test]
    fn pfde_examples() {
        let p = Point::new(1.0, 2.0);
        assert_eq!(pfde_residual(&ScalarField::x(), p).unwrap().value, 0.0);
        let th7 = -2.0 * ScalarField::t() / ScalarField::x();
        assert_eq!(pfde_residual(&th7, p).unwrap().value, 0.0);
        let tx = ScalarField::t() + ScalarField::x();
        assert_eq!(pfde_residual(&tx, Point::new(0.3, -0.4)).unwrap().value, 1.0);
        assert!(matches!(
            pfde_residual(&ScalarField::t(), p),
            Err(VerifyError::DegenerateGradient(_))
        ));
    }

    #[test]
    fn gfde_examples() {
        let p = Point::new(0.5, 0.25);
        let h0 = UnivariateFn::constant(0.0);
        let e = get_case(7, None).unwrap();
        let p7 = Point::new(1.2, 1.7);
        assert_eq!(
            gfde_residual(&e.theta, &h0, p7).unwrap().value,
            pfde_residual(&e.theta, p7).unwrap().value
        );
        let h1 = UnivariateFn::constant(1.0);
        assert_eq!(gfde_residual(&ScalarField::x(), &h1, p).unwrap().value, -1.0);
        // θ~ = θ(t, x + 3t) solves the equation with h = 3
        let boosted = ScalarField::x().compose(&ScalarField::t(), &(ScalarField::x() + 3.0 * ScalarField::t()));
        let h3 = UnivariateFn::constant(3.0);
        assert_eq!(gfde_residual(&boosted, &h3, p).unwrap().value, 0.0);
    }

    #[test]
    fn potential_examples() {
        let p = Point::new(1.0, 2.0);
        for id in [2, 7] {
            let e = get_case(id, None).unwrap();
            let (r1, r2) = potential_residual(&e.theta, &e.f, &e.xi, p).unwrap();
            assert_eq!((r1.value, r2.value), (0.0, 0.0));
        }
        let (_, r2) = potential_residual(
            &ScalarField::x(),
            &ScalarField::constant(1.0),
            &ScalarField::constant(0.0),
            p,
        )
        .unwrap();
        assert_eq!(r2.value, 2.0);
        assert!(matches!(
            potential_residual(&ScalarField::x(), &ScalarField::constant(0.0), &ScalarField::x(), p),
            Err(VerifyError::VanishingF(_))
        ));
    }

    #[test]
    fn reduced_examples() {
        let p = Point::new(1.0, 2.0);
        let e7 = get_case(7, None).unwrap();
        let (r3, r4) = reduced_system_residual(&e7.f, &e7.xi, p).unwrap();
        assert_eq!((r3.value, r4.value), (0.0, 0.0));
        let (r3, _) =
            reduced_system_residual(&ScalarField::constant(-1.0), &ScalarField::x(), p).unwrap();
        assert_eq!(r3.value, 1.0);
    }

    #[test]
    fn determining_first_equation_rejects_half() {
        let coeffs = ReductionOperatorCoefficients {
            xi1: ScalarField::constant(0.5),
            ..ReductionOperatorCoefficients::common()
        };
        let r = determining_residuals(&ScalarField::constant(-1.0), &coeffs, Point::new(1.0, 1.0), &DEFAULT_U_SAMPLES)
            .unwrap();
        assert_eq!(r.a.value, -0.5);
    }

    #[test]
    fn linear_operator_examples() {
        let p = Point::new(0.7, 1.3);
        let q = LinearReductionOperator { a: 0.0, b1: 0.0, b2: 0.0, c: 1.0, d0: 0.0, d1: 0.0 };
        let k = linear_operator_fields(&q).unwrap().eval(p).unwrap();
        assert_eq!((k.xi0.v(), k.eta1.v(), k.eta0.v()), (0.0, 0.0, 0.0));
        // ∂_t is a reduction operator of any t-independent equation
        let f = ScalarField::x().map(|x| -(x.cosh()));
        let r = determining_residuals(&f, &linear_operator_fields(&q).unwrap(), p, &DEFAULT_U_SAMPLES)
            .unwrap();
        assert_eq!(r.max_scaled(), 0.0);

        let q = LinearReductionOperator { a: 0.0, b1: 1.0, b2: 0.0, c: 1.0, d0: 0.0, d1: 0.0 };
        let k = linear_operator_fields(&q).unwrap().eval(p).unwrap();
        assert!((k.xi0.v() - 1.3 / 1.7).abs() < 1e-15);
        assert_eq!((k.eta1.v(), k.eta0.v()), (0.0, 0.0));

        let q = LinearReductionOperator { a: 0.0, b1: 0.0, b2: 0.0, c: 0.0, d0: 1.0, d1: 1.0 };
        assert_eq!(linear_operator_fields(&q).unwrap_err(), VerifyError::DegenerateOperator);
    }

    #[test]
    fn sweep_reports_skips() {
        let e = get_case(7, None).unwrap();
        let rep = sweep(case_residual(&e, Check::Pfde, None), Region::new(1.0, 2.0, -1.0, 1.0), 10, 11)
            .unwrap();
        assert!(rep.points_skipped > 0);
        assert_eq!(rep.points_checked + rep.points_skipped, 110);
        let only_singular = sweep(
            case_residual(&e, Check::Pfde, None),
            Region::new(1.0, 2.0, -1e-9, 1e-9),
            3,
            2,
        );
        assert!(matches!(only_singular, Err(VerifyError::EmptySweep { .. })));
        assert!(matches!(
            sweep(|_| Ok(0.0), Region::new(0.0, 1.0, 0.0, 1.0), 1, 5),
            Err(VerifyError::GridTooSmall(1, 5))
        ));
    }

    #[test]
    fn sweep_tie_break_is_lexicographic() {
        let rep = sweep(|_| Ok(1.0), Region::new(0.0, 1.0, 0.0, 1.0), 4, 4).unwrap();
        assert_eq!(rep.argmax, Point::new(0.0, 0.0));
        let rep = sweep(|p| Ok(p.x), Region::new(0.0, 1.0, 0.0, 1.0), 4, 4).unwrap();
        assert_eq!(rep.argmax, Point::new(0.0, 1.0));
    }

    #[test]
    fn case2_tanh_sweep() {
        let e = get_case(2, None).unwrap();
        let s = build_solution(&e, RiccatiBranch::new(-1.0, 1.0, 1.0).unwrap());
        let rep = sweep(case_residual(&e, Check::Gbe, Some(&s)), Region::new(0.0, 1.0, -2.0, 2.0), 50, 50)
            .unwrap();
        assert!(rep.max_abs_residual <= 1e-12, "{rep:?}");
        let json = serde_json::to_value(rep).unwrap();
        assert_eq!(json["scale_used"], "relative");
        assert!(json["argmax"]["t"].is_number());
    }
}
