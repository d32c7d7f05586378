//! Closed-form solution families.
//!
//! With f = -1/θ_x for a solution θ of θ_t = θ_xx/θ_x, the ansatz
//! u = φ(θ(t, x)) reduces the generalized Burgers equation to
//! φ'' - φφ' = 0, whose first integral is the Riccati equation
//! φ' = φ²/2 + 2ν. Its three solution branches are implemented here,
//! together with the universal rational family and the ξ-as-solution
//! construction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{CatalogEntry, EPS_DEN};
use crate::jets::{EvalError, Jet3, Point, Real, ScalarField};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnsatzError {
    #[error("c1 and c2 must not both vanish")]
    ZeroConstants,
    #[error("branch parameters must be finite")]
    NonFinite,
    #[error("omega = {omega} is a pole of phi")]
    Pole { omega: f64 },
}

/// Which closed form of φ applies, by the sign of ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    /// ν < 0: hyperbolic tangent type, ϰ = √(-ν).
    Hyperbolic,
    /// ν = 0: rational.
    Rational,
    /// ν > 0: tangent type, k = √ν.
    Trigonometric,
}

/// Integration constant ν and the family constants (c1, c2).
///
/// Only the ratio c1 : c2 matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiccatiBranch {
    pub nu: f64,
    pub c1: f64,
    pub c2: f64,
}

impl RiccatiBranch {
    pub fn new(nu: f64, c1: f64, c2: f64) -> Result<Self, AnsatzError> {
        if !(nu.is_finite() && c1.is_finite() && c2.is_finite()) {
            return Err(AnsatzError::NonFinite);
        }
        if c1 == 0.0 && c2 == 0.0 {
            return Err(AnsatzError::ZeroConstants);
        }
        Ok(Self { nu, c1, c2 })
    }

    pub fn kind(&self) -> BranchKind {
        if self.nu < 0.0 {
            BranchKind::Hyperbolic
        } else if self.nu == 0.0 {
            BranchKind::Rational
        } else {
            BranchKind::Trigonometric
        }
    }

    /// A branch with the given ν ≠ 0 whose φ tends to the ν = 0 branch with
    /// constants `(c1, c2)` as ν → 0.
    ///
    /// Matching convention (first order in √|ν|):
    /// ν < 0: c1' = (c1 + c2/ϰ)/2, c2' = (c1 - c2/ϰ)/2;
    /// ν > 0: c1' = c1, c2' = c2/k.
    pub fn continued(nu: f64, c1: f64, c2: f64) -> Result<Self, AnsatzError> {
        if nu < 0.0 {
            let kap = (-nu).sqrt();
            Self::new(nu, 0.5 * (c1 + c2 / kap), 0.5 * (c1 - c2 / kap))
        } else if nu > 0.0 {
            Self::new(nu, c1, c2 / nu.sqrt())
        } else {
            Self::new(nu, c1, c2)
        }
    }

    /// φ(ω) on any [`Real`] scalar; fails at poles.
    pub fn phi_generic<T: Real>(&self, omega: T) -> Result<T, AnsatzError> {
        let (c1, c2) = (self.c1, self.c2);
        let pole = || AnsatzError::Pole { omega: omega.re() };
        let guard = |den: f64, scale: f64| {
            if den.abs() > EPS_DEN * scale && den.is_finite() {
                Ok(())
            } else {
                Err(pole())
            }
        };
        match self.kind() {
            BranchKind::Hyperbolic => {
                let kap = (-self.nu).sqrt();
                // scaled by e^{∓ϰω} so neither exponential overflows
                let (a, b) = if omega.re() >= 0.0 {
                    (T::cst(c1), (omega * (-2.0 * kap)).exp() * c2)
                } else {
                    ((omega * (2.0 * kap)).exp() * c1, T::cst(c2))
                };
                let den = a + b;
                guard(den.re(), a.re().abs() + b.re().abs())?;
                Ok((a - b) / den * (-2.0 * kap))
            }
            BranchKind::Rational => {
                let den = omega * c2 + c1;
                guard(den.re(), c1.abs() + (c2 * omega.re()).abs())?;
                Ok(T::cst(-2.0 * c2) / den)
            }
            BranchKind::Trigonometric => {
                let k = self.nu.sqrt();
                let (s, c) = ((omega * k).sin(), (omega * k).cos());
                let den = c * c1 + s * c2;
                guard(den.re(), c1.abs() + c2.abs())?;
                Ok((s * c1 - c * c2) / den * (2.0 * k))
            }
        }
    }

    pub fn phi(&self, omega: f64) -> Result<f64, AnsatzError> {
        self.phi_generic(omega)
    }

    pub fn phi_jet(&self, omega: Jet3) -> Result<Jet3, AnsatzError> {
        self.phi_generic(omega)
    }

    /// dφ/dω from the differentiated closed form of each branch.
    pub fn phi_prime(&self, omega: f64) -> Result<f64, AnsatzError> {
        // shares the pole check with phi
        self.phi(omega)?;
        let (c1, c2) = (self.c1, self.c2);
        Ok(match self.kind() {
            BranchKind::Hyperbolic => {
                // -8ϰ² c1 c2 / (c1 e^{ϰω} + c2 e^{-ϰω})², written with e^{-2ϰ|ω|}
                let kap = (-self.nu).sqrt();
                let e = (-2.0 * kap * omega.abs()).exp();
                let den = if omega >= 0.0 { c1 + c2 * e } else { c1 * e + c2 };
                -8.0 * kap * kap * c1 * c2 * e / (den * den)
            }
            BranchKind::Rational => {
                let den = c1 + c2 * omega;
                2.0 * c2 * c2 / (den * den)
            }
            BranchKind::Trigonometric => {
                let k = self.nu.sqrt();
                let den = c1 * (k * omega).cos() + c2 * (k * omega).sin();
                2.0 * k * k * (c1 * c1 + c2 * c2) / (den * den)
            }
        })
    }

    /// φ' - φ²/2 - 2ν, which vanishes for every branch.
    pub fn riccati_residual(&self, omega: f64) -> Result<f64, AnsatzError> {
        let p = self.phi(omega)?;
        Ok(self.phi_prime(omega)? - 0.5 * p * p - 2.0 * self.nu)
    }
}

/// A field u(t, x) claimed to solve u_t + u u_x + f u_xx = 0 for the
/// attached f.
#[derive(Clone, Debug)]
pub struct SolutionField {
    pub u: ScalarField,
    pub f: ScalarField,
    pub provenance: String,
}

/// u = φ(θ(t, x)) for a catalog row, solving the equation with f = -1/θ_x.
///
/// Poles of φ inside the row's domain make evaluation fail there; the
/// solution is still returned and simply has a smaller valid set.
pub fn build_solution(entry: &CatalogEntry, branch: RiccatiBranch) -> SolutionField {
    let theta = entry.theta.clone();
    let u = ScalarField::new(move |t, x| {
        let w = theta.eval_at(t, x)?;
        branch.phi_jet(w).map_err(|e| EvalError::Singular {
            t: t.v(),
            x: x.v(),
            set: e.to_string(),
        })
    });
    SolutionField {
        u,
        f: entry.f.clone(),
        provenance: format!(
            "case {} with phi(nu={}, c1={}, c2={})",
            entry.id, branch.nu, branch.c1, branch.c2
        ),
    }
}

/// u = (x + c1)/(t + c2), a solution for every f (u_xx = 0 and
/// u_t + u u_x = 0 identically).
pub fn rational_solution(c1: f64, c2: f64, f: &ScalarField) -> SolutionField {
    let u = ScalarField::from_expr(move |t, x| (x + c1) / (t + c2))
        .with_domain(move |p: Point| (p.t + c2).abs() > EPS_DEN, format!("t = {}", -c2));
    SolutionField {
        u,
        f: f.clone(),
        provenance: format!("rational (x + {c1})/(t + {c2})"),
    }
}

/// u = ξ = -θ_t/θ_x, which solves the same equation as the φ family.
pub fn xi_solution(entry: &CatalogEntry) -> SolutionField {
    SolutionField {
        u: entry.xi.clone(),
        f: entry.f.clone(),
        provenance: format!("case {} with u = xi", entry.id),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_case;

    #[test]
    fn zero_solution_when_c2_vanishes() {
        let b = RiccatiBranch::new(0.0, 1.0, 0.0).unwrap();
        for w in [-3.0, 0.0, 2.5] {
            assert_eq!(b.phi(w).unwrap(), 0.0);
        }
    }

    #[test]
    fn hyperbolic_branch_is_tanh() {
        let b = RiccatiBranch::new(-1.0, 1.0, 1.0).unwrap();
        assert_eq!(b.phi(0.0).unwrap(), 0.0);
        assert!((b.phi(1.0).unwrap() + 2.0 * 1f64.tanh()).abs() < 1e-15);
        let sech2 = 1.0 / 1f64.cosh().powi(2);
        assert!((b.phi_prime(1.0).unwrap() + 2.0 * sech2).abs() < 1e-15);
    }

    #[test]
    fn trigonometric_branch_is_tan() {
        let b = RiccatiBranch::new(1.0, 1.0, 0.0).unwrap();
        assert!((b.phi(std::f64::consts::FRAC_PI_4).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(b.phi(0.0).unwrap(), 0.0);
        assert_eq!(b.phi_prime(0.0).unwrap(), 2.0);
        assert_eq!(b.riccati_residual(0.0).unwrap(), 0.0);
    }

    #[test]
    fn rational_branch_values() {
        let b = RiccatiBranch::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(b.phi(0.0).unwrap(), -2.0);
        assert_eq!(b.phi_prime(0.0).unwrap(), 2.0);
        assert_eq!(b.riccati_residual(0.0).unwrap(), 0.0);
    }

    #[test]
    fn poles_are_errors() {
        let b = RiccatiBranch::new(0.0, 1.0, 1.0).unwrap();
        assert!(matches!(b.phi(-1.0), Err(AnsatzError::Pole { .. })));
        let b = RiccatiBranch::new(1.0, 1.0, 0.0).unwrap();
        assert!(b.phi(std::f64::consts::FRAC_PI_2).is_err());
        let b = RiccatiBranch::new(-1.0, 1.0, -1.0).unwrap();
        assert!(b.phi(0.0).is_err());
    }

    #[test]
    fn invalid_branches() {
        assert_eq!(RiccatiBranch::new(1.0, 0.0, 0.0).unwrap_err(), AnsatzError::ZeroConstants);
        assert_eq!(RiccatiBranch::new(f64::NAN, 1.0, 0.0).unwrap_err(), AnsatzError::NonFinite);
    }

    #[test]
    fn continued_branches_approach_rational() {
        let zero = RiccatiBranch::new(0.0, 1.0, 0.5).unwrap();
        for nu in [-1e-6, 1e-6] {
            let b = RiccatiBranch::continued(nu, 1.0, 0.5).unwrap();
            for w in [-1.0, 0.0, 0.7, 1.5] {
                assert!((b.phi(w).unwrap() - zero.phi(w).unwrap()).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn xi_solution_case7_is_x_over_t() {
        let e = get_case(7, None).unwrap();
        let s = xi_solution(&e);
        assert_eq!(s.u.value(Point::new(2.0, 3.0)).unwrap(), 1.5);
    }

    #[test]
    fn rational_solution_pole() {
        let s = rational_solution(1.0, 2.0, &ScalarField::constant(-1.0));
        assert!(s.u.eval_jet(Point::new(-2.0, 0.0)).is_err());
        assert_eq!(s.u.value(Point::new(0.0, 1.0)).unwrap(), 1.0);
    }

    #[test]
    fn built_solution_is_phi_of_theta() {
        let e = get_case(2, None).unwrap();
        let b = RiccatiBranch::new(-1.0, 1.0, 1.0).unwrap();
        let s = build_solution(&e, b);
        let v = s.u.value(Point::new(1.0, 0.3)).unwrap();
        assert!((v + 2.0 * 0.3f64.tanh()).abs() < 1e-15);
    }
}
