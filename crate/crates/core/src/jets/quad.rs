use super::{EvalError, Jet3, UnivariateFn};

/// Widest sub-interval handed to the double-exponential rule in one piece.
const MAX_PIECE: f64 = 2.0;

/// `G(w) = ∫_{w0}^{w} g(s) ds` for a closed-form integrand `g`.
///
/// The value comes from adaptive quadrature; the jet's derivatives are the
/// integrand and its derivatives, so they are exact.
#[derive(Clone, Debug)]
pub struct Antiderivative {
    integrand: UnivariateFn,
    reference: f64,
    tol: f64,
}

impl Antiderivative {
    pub fn new(integrand: UnivariateFn, reference: f64, tol: f64) -> Self {
        Self {
            integrand,
            reference,
            tol,
        }
    }

    pub fn reference(&self) -> f64 {
        self.reference
    }

    pub fn value(&self, w: f64) -> Result<f64, EvalError> {
        let (a, b, sign) = if w >= self.reference {
            (self.reference, w, 1.0)
        } else {
            (w, self.reference, -1.0)
        };
        if a == b {
            return Ok(0.0);
        }
        let pieces = ((b - a) / MAX_PIECE).ceil().max(1.0) as usize;
        let width = (b - a) / pieces as f64;
        let piece_tol = self.tol / pieces as f64;
        let g = |s: f64| self.integrand.value(s).unwrap_or(f64::NAN);
        let mut total = 0.0;
        let mut estimate = 0.0;
        for k in 0..pieces {
            let lo = a + k as f64 * width;
            let hi = if k + 1 == pieces { b } else { lo + width };
            let out = quadrature::integrate(g, lo, hi, piece_tol);
            total += out.integral;
            estimate += out.error_estimate;
        }
        if !(estimate <= self.tol) || !total.is_finite() {
            return Err(EvalError::Quadrature { estimate });
        }
        Ok(sign * total)
    }

    /// `G` composed with the jet `w`.
    pub fn eval_jet(&self, w: Jet3) -> Result<Jet3, EvalError> {
        let g = self.integrand.derivatives(w.v())?;
        let value = self.value(w.v())?;
        Ok(w.chain([value, g[0], g[1], g[2]]))
    }

    pub fn into_fn(self) -> UnivariateFn {
        UnivariateFn::new(move |w| self.eval_jet(w))
    }
}
