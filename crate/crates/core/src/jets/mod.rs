//! Third-order jets of scalar fields on the (t, x) plane.
//!
//! A [`Jet3`] carries the truncated bivariate Taylor polynomial of a field
//! around a point, up to total order 3. Arithmetic and elementary functions
//! propagate the Taylor coefficients forward, so evaluating a closed-form
//! expression on coordinate jets yields its exact partial derivatives (to
//! roundoff). [`ScalarField`] wraps such expressions; [`fd_jet`] is the
//! finite-difference oracle used to check them.

mod fd;
mod field;
mod quad;

pub use fd::fd_jet;
pub use field::{ScalarField, UnivariateFn};
pub use quad::Antiderivative;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while evaluating a field.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("point ({t}, {x}) is not finite")]
    NonFinitePoint { t: f64, x: f64 },
    #[error("non-finite value at ({t}, {x}) (division by zero or log of zero)")]
    NonFinite { t: f64, x: f64 },
    #[error("singular point ({t}, {x}): {set}")]
    Singular { t: f64, x: f64, set: String },
    #[error("quadrature did not reach tolerance: estimate {estimate:e}")]
    Quadrature { estimate: f64 },
    #[error("{0}")]
    Domain(String),
}

/// A point of the (t, x) plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub t: f64,
    pub x: f64,
}

impl Point {
    pub fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.t, self.x)
    }
}

/// Monomial exponents `(t-power, x-power)` in storage order.
const EXPONENTS: [(u8, u8); 10] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

const fn index_of(i: u8, j: u8) -> usize {
    let mut k = 0;
    while k < 10 {
        if EXPONENTS[k].0 == i && EXPONENTS[k].1 == j {
            return k;
        }
        k += 1;
    }
    panic!("monomial out of range")
}

const PRODUCT_TERMS: usize = 35;

/// `(out, lhs, rhs)` triples of the truncated product.
const PRODUCT_TABLE: [(u8, u8, u8); PRODUCT_TERMS] = {
    let mut table = [(0u8, 0u8, 0u8); PRODUCT_TERMS];
    let mut n = 0;
    let mut a = 0;
    while a < 10 {
        let mut b = 0;
        while b < 10 {
            let i = EXPONENTS[a].0 + EXPONENTS[b].0;
            let j = EXPONENTS[a].1 + EXPONENTS[b].1;
            if i + j <= 3 {
                table[n] = (index_of(i, j) as u8, a as u8, b as u8);
                n += 1;
            }
            b += 1;
        }
        a += 1;
    }
    assert!(n == PRODUCT_TERMS);
    table
};

/// Value and partial derivatives up to total order 3 of a scalar field of
/// (t, x) at one point.
///
/// Stored as Taylor coefficients; the accessors convert to partial
/// derivatives (`d_tt = 2 c_{20}`, `d_ttx = 2 c_{21}`, and so on).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    c: [f64; 10],
}

impl Default for Jet3 {
    fn default() -> Self {
        Self::constant(0.0)
    }
}

impl Jet3 {
    pub const fn constant(v: f64) -> Self {
        let mut c = [0.0; 10];
        c[0] = v;
        Self { c }
    }

    /// The coordinate field `t` expanded at `t0`.
    pub const fn var_t(t0: f64) -> Self {
        let mut c = [0.0; 10];
        c[0] = t0;
        c[1] = 1.0;
        Self { c }
    }

    /// The coordinate field `x` expanded at `x0`.
    pub const fn var_x(x0: f64) -> Self {
        let mut c = [0.0; 10];
        c[0] = x0;
        c[2] = 1.0;
        Self { c }
    }

    /// Builds a jet from partial derivatives.
    #[allow(clippy::too_many_arguments)]
    pub fn from_partials(
        v: f64,
        d_t: f64,
        d_x: f64,
        d_tt: f64,
        d_tx: f64,
        d_xx: f64,
        d_ttt: f64,
        d_ttx: f64,
        d_txx: f64,
        d_xxx: f64,
    ) -> Self {
        Self {
            c: [
                v,
                d_t,
                d_x,
                d_tt / 2.0,
                d_tx,
                d_xx / 2.0,
                d_ttt / 6.0,
                d_ttx / 2.0,
                d_txx / 2.0,
                d_xxx / 6.0,
            ],
        }
    }

    pub fn v(&self) -> f64 {
        self.c[0]
    }
    pub fn d_t(&self) -> f64 {
        self.c[1]
    }
    pub fn d_x(&self) -> f64 {
        self.c[2]
    }
    pub fn d_tt(&self) -> f64 {
        2.0 * self.c[3]
    }
    pub fn d_tx(&self) -> f64 {
        self.c[4]
    }
    pub fn d_xx(&self) -> f64 {
        2.0 * self.c[5]
    }
    pub fn d_ttt(&self) -> f64 {
        6.0 * self.c[6]
    }
    pub fn d_ttx(&self) -> f64 {
        2.0 * self.c[7]
    }
    pub fn d_txx(&self) -> f64 {
        2.0 * self.c[8]
    }
    pub fn d_xxx(&self) -> f64 {
        6.0 * self.c[9]
    }

    /// All ten entries as partial derivatives, in the order
    /// `v, d_t, d_x, d_tt, d_tx, d_xx, d_ttt, d_ttx, d_txx, d_xxx`.
    pub fn partials(&self) -> [f64; 10] {
        [
            self.v(),
            self.d_t(),
            self.d_x(),
            self.d_tt(),
            self.d_tx(),
            self.d_xx(),
            self.d_ttt(),
            self.d_ttx(),
            self.d_txx(),
            self.d_xxx(),
        ]
    }

    /// Names matching [`Jet3::partials`].
    pub const PARTIAL_NAMES: [&'static str; 10] = [
        "v", "d_t", "d_x", "d_tt", "d_tx", "d_xx", "d_ttt", "d_ttx", "d_txx", "d_xxx",
    ];

    /// Total differentiation order of each entry of [`Jet3::partials`].
    pub const PARTIAL_ORDERS: [usize; 10] = [0, 1, 1, 2, 2, 2, 3, 3, 3, 3];

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// Jet of `∂_t` of the field. Exact through order 2; the order-3
    /// entries are unknown and set to zero.
    pub fn diff_t(&self) -> Self {
        self.diff(true)
    }

    /// Jet of `∂_x` of the field. Exact through order 2.
    pub fn diff_x(&self) -> Self {
        self.diff(false)
    }

    fn diff(&self, along_t: bool) -> Self {
        let mut out = [0.0; 10];
        for (k, &(i, j)) in EXPONENTS.iter().enumerate() {
            if i + j >= 3 {
                continue;
            }
            let (src, factor) = if along_t {
                (index_of(i + 1, j), f64::from(i + 1))
            } else {
                (index_of(i, j + 1), f64::from(j + 1))
            };
            out[k] = factor * self.c[src];
        }
        Self { c: out }
    }

    /// Composition with a univariate function given its value and first three
    /// derivatives at `self.v()`.
    pub fn chain(&self, f: [f64; 4]) -> Self {
        let mut d = *self;
        d.c[0] = 0.0;
        let d2 = d * d;
        let d3 = d2 * d;
        let mut out = [0.0; 10];
        for k in 0..10 {
            out[k] = f[1] * d.c[k] + 0.5 * f[2] * d2.c[k] + f[3] / 6.0 * d3.c[k];
        }
        out[0] = f[0];
        Self { c: out }
    }

    pub fn recip(&self) -> Self {
        let r = 1.0 / self.c[0];
        self.chain([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn exp(&self) -> Self {
        let e = self.c[0].exp();
        self.chain([e, e, e, e])
    }

    /// Natural logarithm; NaN for non-positive values.
    pub fn ln(&self) -> Self {
        let a = self.c[0];
        if a <= 0.0 {
            return Self::constant(f64::NAN);
        }
        self.ln_abs()
    }

    /// `ln|a|`; the derivatives are those of `ln a` regardless of sign.
    pub fn ln_abs(&self) -> Self {
        let a = self.c[0];
        let r = 1.0 / a;
        self.chain([a.abs().ln(), r, -r * r, 2.0 * r * r * r])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.chain([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.c[0].sin_cos();
        self.chain([c, -s, -c, s])
    }

    pub fn tan(&self) -> Self {
        let t = self.c[0].tan();
        let s = 1.0 + t * t;
        self.chain([t, s, 2.0 * t * s, (2.0 + 6.0 * t * t) * s])
    }

    pub fn cot(&self) -> Self {
        let c = 1.0 / self.c[0].tan();
        let s = 1.0 + c * c;
        self.chain([c, -s, 2.0 * c * s, -(2.0 + 6.0 * c * c) * s])
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.chain([s, c, s, c])
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.chain([c, s, c, s])
    }

    pub fn tanh(&self) -> Self {
        let t = self.c[0].tanh();
        self.hyperbolic_tan_like(t)
    }

    pub fn coth(&self) -> Self {
        let c = 1.0 / self.c[0].tanh();
        self.hyperbolic_tan_like(c)
    }

    // tanh and coth both satisfy y' = 1 - y^2.
    fn hyperbolic_tan_like(&self, y: f64) -> Self {
        let s = 1.0 - y * y;
        self.chain([y, s, -2.0 * y * s, (6.0 * y * y - 2.0) * s])
    }

    pub fn atan(&self) -> Self {
        let a = self.c[0];
        let q = 1.0 / (1.0 + a * a);
        self.chain([
            a.atan(),
            q,
            -2.0 * a * q * q,
            (6.0 * a * a - 2.0) * q * q * q,
        ])
    }

    pub fn powi(&self, n: i32) -> Self {
        let a = self.c[0];
        let nf = f64::from(n);
        self.chain([
            a.powi(n),
            nf * a.powi(n - 1),
            nf * (nf - 1.0) * a.powi(n - 2),
            nf * (nf - 1.0) * (nf - 2.0) * a.powi(n - 3),
        ])
    }

    pub fn sqrt(&self) -> Self {
        let a = self.c[0];
        let s = a.sqrt();
        self.chain([s, 0.5 / s, -0.25 / (s * a), 0.375 / (s * a * a)])
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(mut self, rhs: Jet3) -> Jet3 {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        self
    }
}

impl AddAssign for Jet3 {
    fn add_assign(&mut self, rhs: Jet3) {
        *self = *self + rhs;
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(mut self, rhs: Jet3) -> Jet3 {
        for (a, b) in self.c.iter_mut().zip(rhs.c) {
            *a -= b;
        }
        self
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        let mut out = [0.0; 10];
        for &(k, a, b) in PRODUCT_TABLE.iter() {
            out[k as usize] += self.c[a as usize] * rhs.c[b as usize];
        }
        Jet3 { c: out }
    }
}

impl Div for Jet3 {
    type Output = Jet3;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet3) -> Jet3 {
        self * rhs.recip()
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(mut self) -> Jet3 {
        for a in self.c.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Add<f64> for Jet3 {
    type Output = Jet3;
    fn add(mut self, rhs: f64) -> Jet3 {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet3 {
    type Output = Jet3;
    fn sub(mut self, rhs: f64) -> Jet3 {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(mut self, rhs: f64) -> Jet3 {
        for a in self.c.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl Div<f64> for Jet3 {
    type Output = Jet3;
    fn div(self, rhs: f64) -> Jet3 {
        self * (1.0 / rhs)
    }
}

impl Add<Jet3> for f64 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        rhs + self
    }
}

impl Sub<Jet3> for f64 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        -rhs + self
    }
}

impl Mul<Jet3> for f64 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        rhs * self
    }
}

impl Div<Jet3> for f64 {
    type Output = Jet3;
    fn div(self, rhs: Jet3) -> Jet3 {
        rhs.recip() * self
    }
}

/// Scalars that formulas can be written against once and evaluated either
/// on plain numbers or on jets.
pub trait Real:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    /// The point value (the jet's constant term).
    fn re(&self) -> f64;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
}

impl Real for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn re(&self) -> f64 {
        *self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

impl Real for Jet3 {
    fn cst(v: f64) -> Self {
        Jet3::constant(v)
    }
    fn re(&self) -> f64 {
        self.v()
    }
    fn exp(self) -> Self {
        Jet3::exp(&self)
    }
    fn sin(self) -> Self {
        Jet3::sin(&self)
    }
    fn cos(self) -> Self {
        Jet3::cos(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_coordinates() {
        let t = Jet3::var_t(2.0);
        let x = Jet3::var_x(3.0);
        let p = t * t * x;
        assert_eq!(p.v(), 12.0);
        assert_eq!(p.d_t(), 12.0);
        assert_eq!(p.d_x(), 4.0);
        assert_eq!(p.d_tt(), 6.0);
        assert_eq!(p.d_tx(), 4.0);
        assert_eq!(p.d_ttx(), 2.0);
        assert_eq!(p.d_ttt(), 0.0);
        assert_eq!(p.d_xx(), 0.0);
    }

    #[test]
    fn diff_x_lowers_order() {
        // x^3 t: d/dx = 3 x^2 t
        let t = Jet3::var_t(1.5);
        let x = Jet3::var_x(2.0);
        let f = x * x * x * t;
        let g = f.diff_x();
        assert_eq!(g.v(), 18.0);
        assert_eq!(g.d_x(), 18.0);
        assert_eq!(g.d_t(), 12.0);
        assert_eq!(g.d_xx(), 9.0);
        assert_eq!(g.d_tx(), 12.0);
        assert_eq!(g.d_xxx(), 0.0);
    }

    #[test]
    fn elementary_functions_first_derivative() {
        let x = Jet3::var_x(0.7);
        let cases: [(Jet3, f64); 9] = [
            (x.exp(), 0.7f64.exp()),
            (x.ln(), 1.0 / 0.7),
            (x.sin(), 0.7f64.cos()),
            (x.cos(), -0.7f64.sin()),
            (x.tan(), 1.0 / 0.7f64.cos().powi(2)),
            (x.cot(), -1.0 / 0.7f64.sin().powi(2)),
            (x.tanh(), 1.0 / 0.7f64.cosh().powi(2)),
            (x.coth(), -1.0 / 0.7f64.sinh().powi(2)),
            (x.atan(), 1.0 / (1.0 + 0.49)),
        ];
        for (j, d) in cases {
            assert!((j.d_x() - d).abs() < 1e-14, "{} vs {}", j.d_x(), d);
        }
    }

    #[test]
    fn third_derivatives_of_atan_and_tan() {
        let x = Jet3::var_x(0.3);
        let a = x.atan();
        let q = 1.0 / (1.0 + 0.09);
        assert!((a.d_xxx() - (6.0 * 0.09 - 2.0) * q * q * q).abs() < 1e-14);
        // tan''' = 2 sec^2 (sec^2 + 2 tan^2) ... check against sin/cos route
        let t1 = x.tan();
        let t2 = x.sin() / x.cos();
        for (a, b) in t1.partials().iter().zip(t2.partials()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn ln_of_negative_is_nan_but_ln_abs_is_not() {
        let x = Jet3::var_x(-2.0);
        assert!(x.ln().v().is_nan());
        let l = x.ln_abs();
        assert!((l.v() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(l.d_x(), -0.5);
    }

    #[test]
    fn powi_and_sqrt_match_products() {
        let x = Jet3::var_x(1.7) + Jet3::var_t(0.2);
        let a = x.powi(3);
        let b = x * x * x;
        for (p, q) in a.partials().iter().zip(b.partials()) {
            assert!((p - q).abs() < 1e-12);
        }
        let s = x.sqrt();
        let back = s * s;
        for (p, q) in back.partials().iter().zip(x.partials()) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn from_partials_round_trips() {
        let vals = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
        let j = Jet3::from_partials(
            vals[0], vals[1], vals[2], vals[3], vals[4], vals[5], vals[6], vals[7], vals[8],
            vals[9],
        );
        assert_eq!(j.partials(), vals);
    }
}
