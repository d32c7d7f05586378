//! Method-of-lines integration of u_t = -u u_x - f u_xx on a rectangle with
//! Dirichlet data: central differences in space (skew-symmetric form of
//! the advection term), classical RK4 in time.
//! Used to cross-check exact solutions against an independent solver.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ansatz::SolutionField;
use crate::jets::{EvalError, Point, ScalarField};
use crate::region::Region;

/// Errors below this are treated as roundoff when judging a study.
pub const ROUNDOFF_FLOOR: f64 = 1e-11;

/// Time samples used to check the sign of f before integrating.
const SIGN_CHECK_TIMES: usize = 65;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumsolveError {
    #[error("f = {f} >= 0 at (t, x) = ({t}, {x}); forward integration needs f < 0 on the whole region")]
    NotWellPosed { t: f64, x: f64, f: f64 },
    #[error("solution blew up after t = {last_stable_t}")]
    BlowUp { last_stable_t: f64 },
    #[error("invalid problem: {0}")]
    InvalidSpec(String),
    #[error("convergence study needs at least 3 resolutions, each at least twice the previous; got {0:?}")]
    BadResolutions(Vec<usize>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

pub type Profile = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Initial and boundary data.
#[derive(Clone)]
pub enum IbvpData {
    /// Data sampled from an exact solution.
    Manufactured(SolutionField),
    /// u(t0, x), u(t, x0) and u(t, x1).
    Explicit {
        initial: Profile,
        left: Profile,
        right: Profile,
    },
}

impl fmt::Debug for IbvpData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IbvpData::Manufactured(s) => write!(f, "Manufactured({})", s.provenance),
            IbvpData::Explicit { .. } => write!(f, "Explicit"),
        }
    }
}

impl IbvpData {
    fn initial(&self, t0: f64, x: f64) -> Result<f64, EvalError> {
        match self {
            IbvpData::Manufactured(s) => s.u.value(Point::new(t0, x)),
            IbvpData::Explicit { initial, .. } => finite(initial(x), t0, x),
        }
    }

    fn boundary(&self, t: f64, x: f64, left: bool) -> Result<f64, EvalError> {
        match self {
            IbvpData::Manufactured(s) => s.u.value(Point::new(t, x)),
            IbvpData::Explicit { left: l, right: r, .. } => {
                finite(if left { l(t) } else { r(t) }, t, x)
            }
        }
    }
}

fn finite(v: f64, t: f64, x: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { t, x })
    }
}

#[derive(Debug, Clone)]
pub struct IbvpSpec {
    pub f: ScalarField,
    pub region: Region,
    /// Number of spatial cells; the mesh has `n_x + 1` nodes.
    pub n_x: usize,
    pub dt_safety: f64,
    /// Number of output time levels, including both ends.
    pub n_out: usize,
    pub data: IbvpData,
}

impl IbvpSpec {
    pub fn new(f: ScalarField, region: Region, n_x: usize, data: IbvpData) -> Self {
        Self {
            f,
            region,
            n_x,
            dt_safety: 0.9,
            n_out: 11,
            data,
        }
    }

    /// Manufactured problem for `sol`, using its own f.
    pub fn manufactured(sol: &SolutionField, region: Region, n_x: usize) -> Self {
        Self::new(sol.f.clone(), region, n_x, IbvpData::Manufactured(sol.clone()))
    }

    fn validate(&self) -> Result<(), NumsolveError> {
        if !self.region.is_valid() {
            return Err(NumsolveError::InvalidSpec(format!("region {}", self.region)));
        }
        if self.n_x < 8 {
            return Err(NumsolveError::InvalidSpec(format!("n_x = {} < 8", self.n_x)));
        }
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return Err(NumsolveError::InvalidSpec(format!(
                "dt_safety = {} outside (0, 1]",
                self.dt_safety
            )));
        }
        if self.n_out < 2 {
            return Err(NumsolveError::InvalidSpec(format!("n_out = {} < 2", self.n_out)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericSolution {
    pub times: Vec<f64>,
    pub xs: Vec<f64>,
    /// `values[k][i]` is u at `times[k]`, `xs[i]`.
    pub values: Vec<Vec<f64>>,
    pub steps: usize,
    pub dt: f64,
    pub scheme: String,
}

impl NumericSolution {
    pub fn final_values(&self) -> &[f64] {
        self.values.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// CSV with header `t,x,u`, time-major, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,x,u")?;
        for (t, row) in self.times.iter().zip(&self.values) {
            for (x, u) in self.xs.iter().zip(row) {
                writeln!(w, "{t:.16e},{x:.16e},{u:.16e}")?;
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("ascii output")
    }
}

struct Mesh {
    xs: Vec<f64>,
}

fn f_row(f: &ScalarField, t: f64, xs: &[f64], out: &mut [f64]) -> Result<(), NumsolveError> {
    for (o, &x) in out.iter_mut().zip(xs) {
        let v = f.value(Point::new(t, x))?;
        if v >= 0.0 {
            return Err(NumsolveError::NotWellPosed { t, x, f: v });
        }
        *o = v;
    }
    Ok(())
}

fn rhs(u: &[f64], f: &[f64], dx: f64, out: &mut [f64]) {
    let n = u.len();
    out[0] = 0.0;
    out[n - 1] = 0.0;
    let (inv2dx, invdx2) = (0.5 / dx, 1.0 / (dx * dx));
    for i in 1..n - 1 {
        // skew-symmetric split u u_x = (u u_x + (u^2)_x) / 3, both centred
        let adv = (u[i] + u[i + 1] + u[i - 1]) * (u[i + 1] - u[i - 1]) * inv2dx / 3.0;
        let uxx = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * invdx2;
        out[i] = -adv - f[i] * uxx;
    }
}

impl IbvpSpec {
    fn pin(&self, t: f64, mesh: &Mesh, u: &mut [f64]) -> Result<(), NumsolveError> {
        let n = u.len();
        u[0] = self.data.boundary(t, mesh.xs[0], true)?;
        u[n - 1] = self.data.boundary(t, mesh.xs[n - 1], false)?;
        Ok(())
    }
}

/// Integrates `spec` from t0 to t1.
pub fn solve_ibvp(spec: &IbvpSpec) -> Result<NumericSolution, NumsolveError> {
    spec.validate()?;
    let r = spec.region;
    let n = spec.n_x + 1;
    let dx = (r.x1 - r.x0) / spec.n_x as f64;
    let xs: Vec<f64> = (0..n).map(|i| r.grid_point(0, i, 1, n).x).collect();
    let mesh = Mesh { xs };

    // sign of f and the size of |f| and |u| for the step bound
    let mut f_max: f64 = 0.0;
    let mut u_max: f64 = 0.0;
    let mut frow = vec![0.0; n];
    for k in 0..SIGN_CHECK_TIMES {
        let t = r.grid_point(k, 0, SIGN_CHECK_TIMES, 1).t;
        f_row(&spec.f, t, &mesh.xs, &mut frow)?;
        f_max = frow.iter().fold(f_max, |m, v| m.max(v.abs()));
        u_max = u_max
            .max(spec.data.boundary(t, r.x0, true)?.abs())
            .max(spec.data.boundary(t, r.x1, false)?.abs());
    }
    let mut u = mesh
        .xs
        .iter()
        .map(|&x| spec.data.initial(r.t0, x))
        .collect::<Result<Vec<_>, _>>()?;
    u_max = u.iter().fold(u_max, |m, v| m.max(v.abs()));

    let dt_max = spec.dt_safety * (dx * dx / (2.0 * f_max)).min(dx / (1.0 + u_max));
    let intervals = spec.n_out - 1;
    let span = (r.t1 - r.t0) / intervals as f64;
    let per_interval = (span / dt_max).ceil().max(1.0) as usize;
    let steps = per_interval * intervals;
    let dt = (r.t1 - r.t0) / steps as f64;

    let mut times = vec![r.t0];
    let mut values = vec![u.clone()];
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut stage = vec![0.0; n];
    let (mut f0, mut fh, mut f1) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut last_stable_t = r.t0;
    for step in 0..steps {
        let t = r.t0 + step as f64 * dt;
        let th = t + 0.5 * dt;
        let tn = if step + 1 == steps { r.t1 } else { t + dt };
        f_row(&spec.f, t, &mesh.xs, &mut f0)?;
        f_row(&spec.f, th, &mesh.xs, &mut fh)?;
        f_row(&spec.f, tn, &mesh.xs, &mut f1)?;

        rhs(&u, &f0, dx, &mut k1);
        for i in 0..n {
            stage[i] = u[i] + 0.5 * dt * k1[i];
        }
        spec.pin(th, &mesh, &mut stage)?;
        rhs(&stage, &fh, dx, &mut k2);
        for i in 0..n {
            stage[i] = u[i] + 0.5 * dt * k2[i];
        }
        spec.pin(th, &mesh, &mut stage)?;
        rhs(&stage, &fh, dx, &mut k3);
        for i in 0..n {
            stage[i] = u[i] + dt * k3[i];
        }
        spec.pin(tn, &mesh, &mut stage)?;
        rhs(&stage, &f1, dx, &mut k4);
        for i in 0..n {
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        spec.pin(tn, &mesh, &mut u)?;
        if u.iter().any(|v| !v.is_finite()) {
            return Err(NumsolveError::BlowUp { last_stable_t });
        }
        last_stable_t = tn;
        if (step + 1) % per_interval == 0 {
            times.push(tn);
            values.push(u.clone());
        }
    }

    Ok(NumericSolution {
        times,
        xs: mesh.xs,
        values,
        steps,
        dt,
        scheme: format!(
            "method of lines, central differences (n_x = {}, dx = {dx:e}), RK4 (dt = {dt:e}, {steps} steps)",
            spec.n_x
        ),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorNorms {
    pub max_err: f64,
    /// Root mean square over the final time level.
    pub l2_err: f64,
}

/// Max and RMS error of the final time level against `exact`.
pub fn compare(num: &NumericSolution, exact: &SolutionField) -> Result<ErrorNorms, NumsolveError> {
    let t = *num.times.last().ok_or_else(|| NumsolveError::InvalidSpec("empty solution".into()))?;
    let mut max_err: f64 = 0.0;
    let mut sq = 0.0;
    for (&x, &u) in num.xs.iter().zip(num.final_values()) {
        let e = (u - exact.u.value(Point::new(t, x))?).abs();
        max_err = max_err.max(e);
        sq += e * e;
    }
    Ok(ErrorNorms {
        max_err,
        l2_err: (sq / num.xs.len() as f64).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_x: usize,
    pub dx: f64,
    pub max_err: f64,
    pub l2_err: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of log(max_err) against log(dx); `None` when
    /// the errors sit at roundoff.
    pub observed_order: Option<f64>,
    pub degenerate: bool,
    pub non_monotone: bool,
}

impl ConvergenceReport {
    pub fn final_max_err(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.max_err)
    }
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Solves the manufactured problem of `exact` on `region` at each spatial
/// resolution and fits the observed order.
pub fn convergence_study(
    exact: &SolutionField,
    region: Region,
    dt_safety: f64,
    resolutions: &[usize],
) -> Result<ConvergenceReport, NumsolveError> {
    if resolutions.len() < 3 || resolutions.windows(2).any(|w| w[1] < 2 * w[0]) {
        return Err(NumsolveError::BadResolutions(resolutions.to_vec()));
    }
    let rows = resolutions
        .par_iter()
        .map(|&n_x| {
            let mut spec = IbvpSpec::manufactured(exact, region, n_x);
            spec.dt_safety = dt_safety;
            spec.n_out = 2;
            let num = solve_ibvp(&spec)?;
            let e = compare(&num, exact)?;
            Ok(ConvergenceRow {
                n_x,
                dx: (region.x1 - region.x0) / n_x as f64,
                max_err: e.max_err,
                l2_err: e.l2_err,
                steps: num.steps,
            })
        })
        .collect::<Result<Vec<_>, NumsolveError>>()?;
    let degenerate = rows.iter().all(|r| r.max_err <= ROUNDOFF_FLOOR);
    let non_monotone = rows.windows(2).any(|w| w[1].max_err >= w[0].max_err);
    let observed_order = (!degenerate).then(|| {
        let lx: Vec<f64> = rows.iter().map(|r| r.dx.ln()).collect();
        let ly: Vec<f64> = rows.iter().map(|r| r.max_err.ln()).collect();
        ls_slope(&lx, &ly)
    });
    Ok(ConvergenceReport {
        rows,
        observed_order,
        degenerate,
        non_monotone: non_monotone && !degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_solution, RiccatiBranch};
    use crate::catalog::get_case;

    fn zero_solution(f: ScalarField) -> SolutionField {
        SolutionField {
            u: ScalarField::constant(0.0),
            f,
            provenance: "zero".into(),
        }
    }

    #[test]
    fn case2_tanh_error_bound() {
        let e = get_case(2, None).unwrap();
        let s = build_solution(&e, RiccatiBranch::new(-1.0, 1.0, 1.0).unwrap());
        let region = Region::new(0.0, 1.0, -2.0, 2.0);
        let num = solve_ibvp(&IbvpSpec::manufactured(&s, region, 64)).unwrap();
        let err = compare(&num, &s).unwrap();
        assert!(err.max_err <= 5e-4, "{err:?}");
        assert!(err.max_err > 0.0);
        assert!(err.l2_err <= err.max_err);
        assert_eq!(num.times.len(), 11);
        assert_eq!(*num.times.last().unwrap(), 1.0);
    }

    #[test]
    fn positive_f_is_rejected() {
        let s = zero_solution(ScalarField::constant(1.0));
        let spec = IbvpSpec::manufactured(&s, Region::new(0.0, 1.0, 0.0, 1.0), 16);
        assert!(matches!(solve_ibvp(&spec), Err(NumsolveError::NotWellPosed { .. })));
        // f changes sign inside the region
        let s = zero_solution(ScalarField::x() - 0.5);
        let spec = IbvpSpec::manufactured(&s, Region::new(0.0, 1.0, 0.0, 1.0), 16);
        assert!(matches!(solve_ibvp(&spec), Err(NumsolveError::NotWellPosed { .. })));
    }

    #[test]
    fn zero_data_stays_zero() {
        let f = ScalarField::x().map(|x| -(x.cosh()));
        let s = zero_solution(f);
        let mut spec = IbvpSpec::manufactured(&s, Region::new(0.0, 1.0, -1.0, 1.0), 128);
        spec.n_out = 2;
        let num = solve_ibvp(&spec).unwrap();
        assert!(num.steps >= 10_000, "{}", num.steps);
        assert!(num.final_values().iter().all(|&v| v == 0.0));
        assert_eq!(compare(&num, &s).unwrap(), ErrorNorms { max_err: 0.0, l2_err: 0.0 });
    }

    #[test]
    fn invalid_specs() {
        let s = zero_solution(ScalarField::constant(-1.0));
        let r = Region::new(0.0, 1.0, 0.0, 1.0);
        assert!(matches!(
            solve_ibvp(&IbvpSpec::manufactured(&s, r, 4)),
            Err(NumsolveError::InvalidSpec(_))
        ));
        let mut spec = IbvpSpec::manufactured(&s, r, 16);
        spec.dt_safety = 1.5;
        assert!(matches!(solve_ibvp(&spec), Err(NumsolveError::InvalidSpec(_))));
    }

    #[test]
    fn explicit_data_matches_manufactured() {
        let e = get_case(2, None).unwrap();
        let s = build_solution(&e, RiccatiBranch::new(-1.0, 1.0, 1.0).unwrap());
        let region = Region::new(0.0, 0.5, -2.0, 2.0);
        let u = s.u.clone();
        let prof = |x: f64| -> Profile {
            let u = u.clone();
            Arc::new(move |t| u.value(Point::new(t, x)).unwrap())
        };
        let u0 = s.u.clone();
        let data = IbvpData::Explicit {
            initial: Arc::new(move |x| u0.value(Point::new(0.0, x)).unwrap()),
            left: prof(-2.0),
            right: prof(2.0),
        };
        let a = solve_ibvp(&IbvpSpec::new(s.f.clone(), region, 32, data)).unwrap();
        let b = solve_ibvp(&IbvpSpec::manufactured(&s, region, 32)).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn csv_layout() {
        let s = zero_solution(ScalarField::constant(-1.0));
        let mut spec = IbvpSpec::manufactured(&s, Region::new(0.0, 1.0, 0.0, 1.0), 8);
        spec.n_out = 3;
        let csv = solve_ibvp(&spec).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 3 * 9);
        assert_eq!(lines[0], "t,x,u");
        assert_eq!(lines[1], "0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0");
    }

    #[test]
    fn zero_study_is_degenerate() {
        let s = zero_solution(ScalarField::constant(-1.0));
        let rep = convergence_study(&s, Region::new(0.0, 0.2, 0.0, 1.0), 0.9, &[16, 32, 64]).unwrap();
        assert!(rep.degenerate);
        assert_eq!(rep.observed_order, None);
        assert!(!rep.non_monotone);
    }

    #[test]
    fn study_needs_doubling_resolutions() {
        let s = zero_solution(ScalarField::constant(-1.0));
        let r = Region::new(0.0, 0.2, 0.0, 1.0);
        assert!(matches!(
            convergence_study(&s, r, 0.9, &[16, 32]),
            Err(NumsolveError::BadResolutions(_))
        ));
        assert!(matches!(
            convergence_study(&s, r, 0.9, &[16, 24, 64]),
            Err(NumsolveError::BadResolutions(_))
        ));
    }

    #[test]
    fn slope_of_exact_power_law() {
        let xs: Vec<f64> = [0.1f64, 0.05, 0.025].iter().map(|v| v.ln()).collect();
        let ys: Vec<f64> = [0.1f64, 0.05, 0.025].iter().map(|v| (3.0 * v * v).ln()).collect();
        assert!((ls_slope(&xs, &ys) - 2.0).abs() < 1e-12);
    }
}
