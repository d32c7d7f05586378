use super::{EvalError, Jet3, Point, ScalarField};

/// Central-difference approximation of every [`Jet3`] entry.
///
/// Only point values of `field` are used, so this is independent of the jet
/// arithmetic it is meant to check. First and second derivatives use step
/// `h`; third derivatives use step `h^0.8` because their roundoff grows
/// like `eps / step^3`. All stencils are second-order accurate.
pub fn fd_jet(field: &ScalarField, p: Point, h: f64) -> Result<Jet3, EvalError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(EvalError::Domain(format!("finite-difference step must be positive, got {h}")));
    }
    let val = |dt: f64, dx: f64| field.value(Point::new(p.t + dt, p.x + dx));

    let v = val(0.0, 0.0)?;

    let (tp, tm) = (val(h, 0.0)?, val(-h, 0.0)?);
    let (xp, xm) = (val(0.0, h)?, val(0.0, -h)?);
    let d_t = (tp - tm) / (2.0 * h);
    let d_x = (xp - xm) / (2.0 * h);
    let d_tt = (tp - 2.0 * v + tm) / (h * h);
    let d_xx = (xp - 2.0 * v + xm) / (h * h);
    let d_tx = (val(h, h)? - val(h, -h)? - val(-h, h)? + val(-h, -h)?) / (4.0 * h * h);

    let k = h.powf(0.8);
    let third = |along_t: bool| -> Result<f64, EvalError> {
        let at = |s: f64| if along_t { val(s * k, 0.0) } else { val(0.0, s * k) };
        Ok((at(2.0)? - 2.0 * at(1.0)? + 2.0 * at(-1.0)? - at(-2.0)?) / (2.0 * k * k * k))
    };
    let d_ttt = third(true)?;
    let d_xxx = third(false)?;

    // d_ttx: central difference in x of the second t-difference, and the mirror.
    let second_t_at = |dx: f64| -> Result<f64, EvalError> {
        Ok((val(k, dx)? - 2.0 * val(0.0, dx)? + val(-k, dx)?) / (k * k))
    };
    let second_x_at = |dt: f64| -> Result<f64, EvalError> {
        Ok((val(dt, k)? - 2.0 * val(dt, 0.0)? + val(dt, -k)?) / (k * k))
    };
    let d_ttx = (second_t_at(k)? - second_t_at(-k)?) / (2.0 * k);
    let d_txx = (second_x_at(k)? - second_x_at(-k)?) / (2.0 * k);

    Ok(Jet3::from_partials(
        v, d_t, d_x, d_tt, d_tx, d_xx, d_ttt, d_ttx, d_txx, d_xxx,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_second_derivative() {
        let f = ScalarField::x() * ScalarField::x();
        let j = fd_jet(&f, Point::new(0.0, 3.0), 1e-4).unwrap();
        assert!((j.d_xx() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn constant_field_derivatives_vanish() {
        let j = fd_jet(&ScalarField::constant(7.25), Point::new(0.5, -0.5), 1e-3).unwrap();
        assert_eq!(j.v(), 7.25);
        for d in &j.partials()[1..] {
            assert!(d.abs() < 1e-9);
        }
    }

    #[test]
    fn case7_theta_agrees_with_jets() {
        let theta = -2.0 * ScalarField::t() / ScalarField::x();
        let p = Point::new(1.0, 2.0);
        let exact = theta.eval_jet(p).unwrap().partials();
        let approx = fd_jet(&theta, p, 1e-4).unwrap().partials();
        for k in 0..10 {
            let tol = if Jet3::PARTIAL_ORDERS[k] <= 2 { 1e-5 } else { 1e-3 };
            assert!(
                (exact[k] - approx[k]).abs() <= tol,
                "{}: {} vs {}",
                Jet3::PARTIAL_NAMES[k],
                exact[k],
                approx[k]
            );
        }
    }

    #[test]
    fn stencil_leaving_domain_errors() {
        let f = ScalarField::x().with_domain(|p| p.x > 0.0, "x <= 0");
        assert!(fd_jet(&f, Point::new(0.0, 1e-3), 1e-2).is_err());
    }

    #[test]
    fn rejects_nonpositive_step() {
        assert!(fd_jet(&ScalarField::x(), Point::new(0.0, 0.0), 0.0).is_err());
    }
}
