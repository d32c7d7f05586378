use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::{EvalError, Jet3, Point};

type JetFn = dyn Fn(Jet3, Jet3) -> Result<Jet3, EvalError> + Send + Sync;
type UniFn = dyn Fn(Jet3) -> Result<Jet3, EvalError> + Send + Sync;

/// A scalar field u(t, x) evaluated through jets.
///
/// The wrapped closure receives the coordinate jets and returns the field's
/// jet, so composition with other maps of the plane is just a call with
/// different input jets.
#[derive(Clone)]
pub struct ScalarField {
    f: Arc<JetFn>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ScalarField(..)")
    }
}

impl ScalarField {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(Jet3, Jet3) -> Result<Jet3, EvalError> + Send + Sync + 'static,
    {
        Self { f: Arc::new(f) }
    }

    /// Field from an infallible jet expression.
    pub fn from_expr<F>(f: F) -> Self
    where
        F: Fn(Jet3, Jet3) -> Jet3 + Send + Sync + 'static,
    {
        Self::new(move |t, x| Ok(f(t, x)))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_expr(move |_, _| Jet3::constant(c))
    }

    pub fn t() -> Self {
        Self::from_expr(|t, _| t)
    }

    pub fn x() -> Self {
        Self::from_expr(|_, x| x)
    }

    /// Exact jet of the field at `p`.
    pub fn eval_jet(&self, p: Point) -> Result<Jet3, EvalError> {
        if !p.is_finite() {
            return Err(EvalError::NonFinitePoint { t: p.t, x: p.x });
        }
        self.eval_at(Jet3::var_t(p.t), Jet3::var_x(p.x))
    }

    /// Evaluates the field with arbitrary input jets (composition).
    pub fn eval_at(&self, t: Jet3, x: Jet3) -> Result<Jet3, EvalError> {
        let out = (self.f)(t, x)?;
        if out.is_finite() {
            Ok(out)
        } else {
            Err(EvalError::NonFinite { t: t.v(), x: x.v() })
        }
    }

    pub fn value(&self, p: Point) -> Result<f64, EvalError> {
        if !p.is_finite() {
            return Err(EvalError::NonFinitePoint { t: p.t, x: p.x });
        }
        let out = (self.f)(Jet3::constant(p.t), Jet3::constant(p.x))?.v();
        if out.is_finite() {
            Ok(out)
        } else {
            Err(EvalError::NonFinite { t: p.t, x: p.x })
        }
    }

    /// `g ∘ self` for a univariate jet map `g`.
    pub fn map<G>(&self, g: G) -> Self
    where
        G: Fn(Jet3) -> Jet3 + Send + Sync + 'static,
    {
        let f = self.f.clone();
        Self::new(move |t, x| Ok(g(f(t, x)?)))
    }

    pub fn then(&self, g: &UnivariateFn) -> Self {
        let f = self.f.clone();
        let g = g.clone();
        Self::new(move |t, x| g.eval_jet(f(t, x)?))
    }

    /// `self(T(t, x), X(t, x))`.
    pub fn compose(&self, t_map: &ScalarField, x_map: &ScalarField) -> Self {
        let (f, tm, xm) = (self.f.clone(), t_map.f.clone(), x_map.f.clone());
        Self::new(move |t, x| f(tm(t, x)?, xm(t, x)?))
    }

    /// Restricts the field to the points where `valid` holds; elsewhere
    /// evaluation fails with [`EvalError::Singular`] naming `set`.
    pub fn with_domain<P>(&self, valid: P, set: impl Into<String>) -> Self
    where
        P: Fn(Point) -> bool + Send + Sync + 'static,
    {
        let f = self.f.clone();
        let set: Arc<str> = set.into().into();
        Self::new(move |t, x| {
            let p = Point::new(t.v(), x.v());
            if valid(p) {
                f(t, x)
            } else {
                Err(EvalError::Singular {
                    t: p.t,
                    x: p.x,
                    set: set.to_string(),
                })
            }
        })
    }

    fn zip<G>(&self, other: &ScalarField, g: G) -> Self
    where
        G: Fn(Jet3, Jet3) -> Jet3 + Send + Sync + 'static,
    {
        let (a, b) = (self.f.clone(), other.f.clone());
        Self::new(move |t, x| Ok(g(a(t, x)?, b(t, x)?)))
    }
}

macro_rules! field_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                self.zip(&rhs, |a, b| a $op b)
            }
        }
        impl $tr<&ScalarField> for &ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: &ScalarField) -> ScalarField {
                self.zip(rhs, |a, b| a $op b)
            }
        }
        impl $tr<f64> for ScalarField {
            type Output = ScalarField;
            fn $method(self, rhs: f64) -> ScalarField {
                self.map(move |a| a $op rhs)
            }
        }
        impl $tr<ScalarField> for f64 {
            type Output = ScalarField;
            fn $method(self, rhs: ScalarField) -> ScalarField {
                rhs.map(move |a| self $op a)
            }
        }
    };
}

field_binop!(Add, add, +);
field_binop!(Sub, sub, -);
field_binop!(Mul, mul, *);
field_binop!(Div, div, /);

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.map(|a| -a)
    }
}

/// A smooth function of one variable, evaluated through jets.
#[derive(Clone)]
pub struct UnivariateFn {
    g: Arc<UniFn>,
}

impl fmt::Debug for UnivariateFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("UnivariateFn(..)")
    }
}

impl UnivariateFn {
    pub fn new<G>(g: G) -> Self
    where
        G: Fn(Jet3) -> Result<Jet3, EvalError> + Send + Sync + 'static,
    {
        Self { g: Arc::new(g) }
    }

    pub fn from_expr<G>(g: G) -> Self
    where
        G: Fn(Jet3) -> Jet3 + Send + Sync + 'static,
    {
        Self::new(move |w| Ok(g(w)))
    }

    pub fn constant(c: f64) -> Self {
        Self::from_expr(move |_| Jet3::constant(c))
    }

    pub fn eval_jet(&self, w: Jet3) -> Result<Jet3, EvalError> {
        let out = (self.g)(w)?;
        if out.is_finite() {
            Ok(out)
        } else {
            Err(EvalError::NonFinite { t: f64::NAN, x: w.v() })
        }
    }

    pub fn value(&self, w: f64) -> Result<f64, EvalError> {
        Ok(self.eval_jet(Jet3::constant(w))?.v())
    }

    /// Value and first three derivatives at `w`.
    pub fn derivatives(&self, w: f64) -> Result<[f64; 4], EvalError> {
        let j = self.eval_jet(Jet3::var_x(w))?;
        Ok([j.v(), j.d_x(), j.d_xx(), j.d_xxx()])
    }
}
