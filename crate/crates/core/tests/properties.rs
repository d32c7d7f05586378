use gbe_core::ansatz::{build_solution, rational_solution, RiccatiBranch};
use gbe_core::catalog::get_case;
use gbe_core::equivalence::EquivalenceElement;
use gbe_core::jets::{fd_jet, Jet3};
use gbe_core::verify::{sweep, Residual};
use gbe_core::{Point, Region, ScalarField};
use proptest::prelude::*;

fn element() -> impl Strategy<Value = EquivalenceElement> {
    (
        prop::array::uniform4(-2.0f64..2.0),
        -2.0f64..2.0,
        -2.0f64..2.0,
        prop_oneof![-2.0f64..-0.3, 0.3f64..2.0],
    )
        .prop_filter_map("degenerate", |(m, mu0, mu1, k)| {
            if (m[0] * m[3] - m[1] * m[2]).abs() < 0.2 {
                return None;
            }
            EquivalenceElement::new(m[0], m[1], m[2], m[3], mu0, mu1, k).ok()
        })
}

fn jet() -> impl Strategy<Value = Jet3> {
    prop::array::uniform10(-3.0f64..3.0).prop_map(|c| {
        Jet3::from_partials(c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7], c[8], c[9])
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #[test]
    fn jet_products_commute_and_associate(a in jet(), b in jet(), c in jet()) {
        let l = (a * b) * c;
        let r = a * (b * c);
        let s = b * a;
        for k in 0..10 {
            prop_assert!(close(l.partials()[k], r.partials()[k], 1e-12));
            prop_assert!(close((a * b).partials()[k], s.partials()[k], 1e-14));
        }
    }

    #[test]
    fn exp_ln_round_trip(v in 0.1f64..5.0, dt in -1.0f64..1.0, dx in -1.0f64..1.0) {
        let j = Jet3::var_t(0.0) * dt + Jet3::var_x(0.0) * dx + v;
        let back = j.ln().exp();
        for k in 0..10 {
            prop_assert!(close(back.partials()[k], j.partials()[k], 1e-12));
        }
    }

    #[test]
    fn element_inverse_undoes_action(g in element(), t in -1.0f64..1.0, x in -2.0f64..2.0, u in -2.0f64..2.0) {
        let p = Point::new(t, x);
        prop_assume!(g.apply_point(p).is_ok());
        let q = g.apply_point(p).unwrap();
        let v = g.apply_u(p, u).unwrap();
        let inv = g.inverse();
        prop_assume!(inv.apply_point(q).is_ok());
        let back = inv.apply_point(q).unwrap();
        prop_assert!(close(back.t, t, 1e-9) && close(back.x, x, 1e-9));
        prop_assert!(close(inv.apply_u(q, v).unwrap(), u, 1e-9));
    }

    #[test]
    fn element_json_round_trip(g in element()) {
        let text = serde_json::to_string(&g).unwrap();
        let h: EquivalenceElement = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(g, h);
    }

    #[test]
    fn rational_solution_any_f(
        c1 in -2.0f64..2.0, c2 in 0.5f64..2.0, a in -2.0f64..2.0,
        t in 0.0f64..2.0, x in -2.0f64..2.0,
    ) {
        let f = ScalarField::from_expr(move |t, x| (t * a + x).sin() - 2.0);
        let s = rational_solution(c1, c2, &f);
        let r = gbe_core::verify::gbe_residual(&s.u, &s.f, Point::new(t, x)).unwrap();
        prop_assert!(r.scaled() <= 1e-13);
    }

    #[test]
    fn riccati_branches_join_continuously(c1 in 0.5f64..2.0, c2 in -0.4f64..0.4, w in -0.3f64..0.3) {
        let at = |nu: f64| RiccatiBranch::continued(nu, c1, c2).unwrap().phi(w).unwrap();
        let zero = at(0.0);
        prop_assert!((at(-1e-7) - zero).abs() <= 1e-5 * (1.0 + zero.abs()));
        prop_assert!((at(1e-7) - zero).abs() <= 1e-5 * (1.0 + zero.abs()));
    }

    #[test]
    fn case7_solutions_solve(nu in -1.0f64..1.0, c1 in 0.5f64..2.0, c2 in -0.3f64..0.3, t in 1.0f64..2.0, x in 1.0f64..3.0) {
        let e = get_case(7, None).unwrap();
        let s = build_solution(&e, RiccatiBranch::new(nu, c1, c2).unwrap());
        if let Ok(r) = gbe_core::verify::gbe_residual(&s.u, &s.f, Point::new(t, x)) {
            prop_assert!(r.scaled() <= 1e-11);
        }
    }

    #[test]
    fn residual_scale_bounds_value(terms in prop::collection::vec(-1e3f64..1e3, 1..8)) {
        let r = Residual::from_terms(&terms);
        prop_assert!(r.scaled() < 1.0);
        prop_assert!(r.scale >= 1.0);
    }

    #[test]
    fn fd_matches_jets_on_polynomials(a in prop::array::uniform4(-2.0f64..2.0), t in -1.0f64..1.0, x in -1.0f64..1.0) {
        let f = ScalarField::from_expr(move |t, x| t * t * x * a[0] + x * x * x * a[1] + t * a[2] + a[3]);
        let p = Point::new(t, x);
        let exact = f.eval_jet(p).unwrap().partials();
        let approx = fd_jet(&f, p, 1e-4).unwrap().partials();
        for k in 0..10 {
            prop_assert!((exact[k] - approx[k]).abs() <= 1e-4 * (1.0 + exact[k].abs()), "{k}: {} vs {}", exact[k], approx[k]);
        }
    }
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let e = get_case(13, None).unwrap();
    let s = build_solution(&e, RiccatiBranch::new(1.0, 1.0, 1.0).unwrap());
    let run = |threads: usize| {
        let (u, f) = (s.u.clone(), s.f.clone());
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                sweep(
                    move |p| Ok(gbe_core::verify::gbe_residual(&u, &f, p)?.scaled()),
                    e.region,
                    40,
                    40,
                )
                .unwrap()
            })
    };
    let one = run(1);
    for n in [2, 3, 8] {
        assert_eq!(run(n), one);
    }
}

#[test]
fn sweep_argmax_lies_in_region() {
    let r = Region::new(0.0, 1.0, -1.0, 1.0);
    let rep = sweep(|p| Ok((p.x - 0.3).abs() + p.t), r, 11, 21).unwrap();
    assert_eq!(rep.argmax, Point::new(1.0, -1.0));
    assert!(r.contains(rep.argmax));
}
