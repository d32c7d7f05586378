//! The equivalence group of the class u_t + u u_x + f u_xx = 0.
//!
//! An element acts by
//!
//! ```text
//! t~ = (αt + β)/(γt + δ)
//! x~ = (κx + μ1 t + μ0)/(γt + δ)
//! u~ = (κ(γt + δ)u - κγx + μ1 δ - μ0 γ)/(αδ - βγ)
//! f~ = κ²/(αδ - βγ) f
//! ```
//!
//! The seven parameters are defined up to a common nonzero factor. Elements
//! are stored normalized to αδ - βγ = ±1 with the first nonzero of
//! (α, β, γ, δ) positive.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ansatz::SolutionField;
use crate::catalog::EPS_DEN;
use crate::jets::{EvalError, Jet3, Point, Real, ScalarField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquivalenceError {
    #[error("alpha*delta - beta*gamma must be nonzero")]
    DegenerateMobius,
    #[error("kappa must be nonzero")]
    ZeroKappa,
    #[error("group parameters must be finite")]
    NonFinite,
    #[error("gamma*t + delta vanishes at t = {t}")]
    ProjectiveSingularity { t: f64 },
}

impl From<EquivalenceError> for EvalError {
    fn from(e: EquivalenceError) -> Self {
        EvalError::Domain(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct RawElement {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    mu0: f64,
    mu1: f64,
    kappa: f64,
}

/// An element of the equivalence group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct EquivalenceElement {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    mu0: f64,
    mu1: f64,
    kappa: f64,
}

impl TryFrom<RawElement> for EquivalenceElement {
    type Error = EquivalenceError;
    fn try_from(r: RawElement) -> Result<Self, Self::Error> {
        Self::new(r.alpha, r.beta, r.gamma, r.delta, r.mu0, r.mu1, r.kappa)
    }
}

impl From<EquivalenceElement> for RawElement {
    fn from(g: EquivalenceElement) -> Self {
        RawElement {
            alpha: g.alpha,
            beta: g.beta,
            gamma: g.gamma,
            delta: g.delta,
            mu0: g.mu0,
            mu1: g.mu1,
            kappa: g.kappa,
        }
    }
}

impl EquivalenceElement {
    /// Validates and normalizes the parameters.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        mu0: f64,
        mu1: f64,
        kappa: f64,
    ) -> Result<Self, EquivalenceError> {
        let all = [alpha, beta, gamma, delta, mu0, mu1, kappa];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(EquivalenceError::NonFinite);
        }
        let det = alpha * delta - beta * gamma;
        if det == 0.0 {
            return Err(EquivalenceError::DegenerateMobius);
        }
        if kappa == 0.0 {
            return Err(EquivalenceError::ZeroKappa);
        }
        let lead = [alpha, beta, gamma, delta]
            .into_iter()
            .find(|v| *v != 0.0)
            .unwrap_or(1.0);
        // already-normalized input is kept bit for bit, so that
        // serialization round trips exactly
        let s = if (det.abs() - 1.0).abs() <= 1e-12 {
            lead.signum()
        } else {
            lead.signum() / det.abs().sqrt()
        };
        Ok(Self {
            alpha: s * alpha,
            beta: s * beta,
            gamma: s * gamma,
            delta: s * delta,
            mu0: s * mu0,
            mu1: s * mu1,
            kappa: s * kappa,
        })
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0).expect("identity is valid")
    }

    /// t~ = t, x~ = x + μt, u~ = u + μ, f~ = f.
    pub fn galilean_boost(mu: f64) -> Result<Self, EquivalenceError> {
        Self::new(1.0, 0.0, 0.0, 1.0, 0.0, mu, 1.0)
    }

    /// Parameters `[α, β, γ, δ, μ0, μ1, κ]` after normalization.
    pub fn params(&self) -> [f64; 7] {
        [
            self.alpha, self.beta, self.gamma, self.delta, self.mu0, self.mu1, self.kappa,
        ]
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn mu0(&self) -> f64 {
        self.mu0
    }
    pub fn mu1(&self) -> f64 {
        self.mu1
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// αδ - βγ (±1 after normalization).
    pub fn det(&self) -> f64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    /// The factor κ²/(αδ - βγ) multiplying f.
    pub fn f_factor(&self) -> f64 {
        self.kappa * self.kappa / self.det()
    }

    fn check_time(&self, t: f64) -> Result<(), EquivalenceError> {
        if (self.gamma * t + self.delta).abs() > EPS_DEN {
            Ok(())
        } else {
            Err(EquivalenceError::ProjectiveSingularity { t })
        }
    }

    /// The point map on any [`Real`] scalar, without singularity checks.
    pub fn map_point<T: Real>(&self, t: T, x: T) -> (T, T) {
        let den = t * self.gamma + self.delta;
        (
            (t * self.alpha + self.beta) / den,
            (x * self.kappa + t * self.mu1 + self.mu0) / den,
        )
    }

    /// The induced map on u, without singularity checks.
    pub fn map_u<T: Real>(&self, t: T, x: T, u: T) -> T {
        let den = t * self.gamma + self.delta;
        (den * u * self.kappa - x * (self.kappa * self.gamma) + self.mu1 * self.delta
            - self.mu0 * self.gamma)
            / self.det()
    }

    pub fn apply_point(&self, p: Point) -> Result<Point, EquivalenceError> {
        self.check_time(p.t)?;
        let (t, x) = self.map_point(p.t, p.x);
        Ok(Point::new(t, x))
    }

    pub fn apply_u(&self, p: Point, u: f64) -> Result<f64, EquivalenceError> {
        self.check_time(p.t)?;
        Ok(self.map_u(p.t, p.x, u))
    }

    pub fn inverse(&self) -> Self {
        let det = self.det();
        let k = self.kappa;
        Self::new(
            self.delta,
            -self.beta,
            -self.gamma,
            self.alpha,
            (self.mu1 * self.beta - self.mu0 * self.alpha) / k,
            (self.mu0 * self.gamma - self.mu1 * self.delta) / k,
            det / k,
        )
        .expect("inverse of a valid element is valid")
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let (a1, b1, c1, d1) = (self.alpha, self.beta, self.gamma, self.delta);
        let (a2, b2, c2, d2) = (other.alpha, other.beta, other.gamma, other.delta);
        let g = Self::new(
            a1 * a2 + b1 * c2,
            a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2,
            c1 * b2 + d1 * d2,
            self.kappa * other.mu0 + self.mu1 * b2 + self.mu0 * d2,
            self.kappa * other.mu1 + self.mu1 * a2 + self.mu0 * c2,
            self.kappa * other.kappa,
        );
        // product of invertible Möbius matrices and nonzero κ's
        assert!(g.is_ok(), "composition of valid elements degenerated");
        g.unwrap()
    }

    /// Preimage jets `(t, x)` of the tilde-coordinate jets.
    fn pull_back(&self, inv: &Self, tt: Jet3, xt: Jet3) -> Result<(Jet3, Jet3), EvalError> {
        inv.check_time(tt.v()).map_err(|_| EvalError::Singular {
            t: tt.v(),
            x: xt.v(),
            set: "preimage at infinity (gamma t + delta = 0)".into(),
        })?;
        let (t, x) = inv.map_point(tt, xt);
        self.check_time(t.v())?;
        Ok((t, x))
    }

    /// f~(t~, x~) = κ²/(αδ - βγ) f(t, x) with (t, x) the preimage.
    pub fn transform_f(&self, f: &ScalarField) -> ScalarField {
        let g = *self;
        let inv = self.inverse();
        let f = f.clone();
        let factor = self.f_factor();
        ScalarField::new(move |tt, xt| {
            let (t, x) = g.pull_back(&inv, tt, xt)?;
            Ok(f.eval_at(t, x)? * factor)
        })
    }

    /// Pushes a solution of the equation with arbitrary element f to a
    /// solution of the equation with [`Self::transform_f`] of f.
    pub fn transform_solution(&self, sol: &SolutionField) -> SolutionField {
        let g = *self;
        let inv = self.inverse();
        let u = sol.u.clone();
        let u_new = ScalarField::new(move |tt, xt| {
            let (t, x) = g.pull_back(&inv, tt, xt)?;
            let uj = u.eval_at(t, x)?;
            Ok(g.map_u(t, x, uj))
        });
        SolutionField {
            u: u_new,
            f: self.transform_f(&sol.f),
            provenance: format!("{} pushed through {}", sol.provenance, self),
        }
    }

    /// Action-level comparison at a point.
    pub fn acts_like(&self, other: &Self, p: Point, u: f64, tol: f64) -> bool {
        match (
            self.apply_point(p),
            other.apply_point(p),
            self.apply_u(p, u),
            other.apply_u(p, u),
        ) {
            (Ok(a), Ok(b), Ok(ua), Ok(ub)) => {
                let close = |x: f64, y: f64| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()));
                close(a.t, b.t)
                    && close(a.x, b.x)
                    && close(ua, ub)
                    && close(self.f_factor(), other.f_factor())
            }
            _ => false,
        }
    }
}

impl std::fmt::Display for EquivalenceElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "G~(alpha={}, beta={}, gamma={}, delta={}, mu0={}, mu1={}, kappa={})",
            self.alpha, self.beta, self.gamma, self.delta, self.mu0, self.mu1, self.kappa
        )
    }
}
