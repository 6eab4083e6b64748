use proptest::prelude::*;

use ybmap_core::algebra::{dual_eval_with_params, Expr, LaurentMatrix, LaurentPoly, Rational};
use ybmap_core::catalog::{dihedral_linear_matrix, resolve, PairState};
use ybmap_core::leaves::{
    check_leaf_commutation, iterate_orbit, quadratic_residual, solve_quadratic, LeafPairing,
};
use ybmap_core::verify::{check_reversibility, check_yb_equation, TripleState};
use ybmap_core::Error;

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, rational()), 0..4).prop_map(LaurentPoly::from_terms)
}

fn laurent_matrix() -> impl Strategy<Value = LaurentMatrix> {
    prop::collection::vec(laurent(), 4).prop_map(|e| {
        LaurentMatrix::from_rows(vec![
            vec![e[0].clone(), e[1].clone()],
            vec![e[2].clone(), e[3].clone()],
        ])
        .unwrap()
    })
}

fn point(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), len)
}

fn pair4() -> impl Strategy<Value = PairState<Rational>> {
    (point(2), point(2), rational(), rational())
        .prop_map(|(x, y, a, b)| PairState::new(x, y).unwrap().with_params(a, b))
}

/// Singular draws are discarded rather than counted.
fn off_locus<T>(r: Result<T, Error>) -> Result<T, TestCaseError> {
    match r {
        Err(e) if e.is_singular() => Err(TestCaseError::reject("singular")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
        Ok(v) => Ok(v),
    }
}

proptest! {
    #[test]
    fn rational_addition_is_associative(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
    }

    #[test]
    fn rational_multiplication_distributes(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn rational_inverse(a in nonzero_rational()) {
        prop_assert_eq!(&a * &a.recip().unwrap(), Rational::one());
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn laurent_ring_laws(p in laurent(), q in laurent(), r in laurent()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn laurent_evaluation_is_a_homomorphism(p in laurent(), q in laurent(), l in nonzero_rational()) {
        let prod = (&p * &q).eval(&l).unwrap();
        prop_assert_eq!(prod, &p.eval(&l).unwrap() * &q.eval(&l).unwrap());
    }

    #[test]
    fn laurent_matrix_laws(a in laurent_matrix(), b in laurent_matrix(), c in laurent_matrix()) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(ab.det(), &a.det() * &b.det());
        prop_assert_eq!(ab.trace(), b.mul(&a).unwrap().trace());
    }

    #[test]
    fn dual_gradient_matches_finite_differences(
        x in prop::collection::vec(-2.0f64..2.0, 4),
        a in 0.5f64..3.0,
        b in 0.5f64..3.0,
    ) {
        let map = resolve("adler-yamilov").unwrap();
        let point: Vec<Rational> = x.iter().map(|v| Rational::from_f64(*v).unwrap()).collect();
        let params = [Rational::from_f64(a).unwrap(), Rational::from_f64(b).unwrap()];
        for inv in &map.invariants {
            let (_, grad) = dual_eval_with_params(&inv.expr, &point, &params).unwrap();
            for (i, g) in grad.iter().enumerate() {
                let h = 1e-5;
                let mut up = x.clone();
                let mut down = x.clone();
                up[i] += h;
                down[i] -= h;
                let f = |p: &[f64]| inv.expr.eval(p, &[a, b]).unwrap();
                let fd = (f(&up) - f(&down)) / (2.0 * h);
                let exact = g.to_f64();
                prop_assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{} d{}: {} vs {}", inv.name, i, fd, exact);
            }
        }
    }

    #[test]
    fn dual_product_rule(x in point(3)) {
        let f = Expr::var(0) * Expr::var(1) + Expr::var(2);
        let g = Expr::var(1) - Expr::var(2) * Expr::var(0);
        let (fv, df) = dual_eval_with_params(&f, &x, &[]).unwrap();
        let (gv, dg) = dual_eval_with_params(&g, &x, &[]).unwrap();
        let (_, dfg) = dual_eval_with_params(&(f * g), &x, &[]).unwrap();
        for i in 0..3 {
            prop_assert_eq!(dfg[i].clone(), &(&fv * &dg[i]) + &(&gv * &df[i]));
        }
    }

    #[test]
    fn dihedral_linear_is_linear(
        s in pair4(), t in point(4), alpha in rational(), beta in rational()
    ) {
        let map = resolve("dihedral-linear").unwrap();
        let (a, b) = s.params.clone().unwrap();
        let m = off_locus(dihedral_linear_matrix(&a, &b))?;
        let t = PairState::new(t[..2].to_vec(), t[2..].to_vec()).unwrap().with_params(a, b);
        let img_s = map.evaluate(&s).unwrap();
        let img_t = map.evaluate(&t).unwrap();

        let flat = s.flatten();
        let by_matrix: Vec<Rational> = m
            .iter()
            .map(|row| row.iter().zip(&flat).map(|(c, v)| c * v).sum())
            .collect();
        prop_assert_eq!(&by_matrix, &img_s.flatten());

        let combo = |p: &[Rational], q: &[Rational]| -> Vec<Rational> {
            p.iter().zip(q).map(|(x, y)| &(&alpha * x) + &(&beta * y)).collect()
        };
        let mixed_in = combo(&s.flatten(), &t.flatten());
        let mixed = PairState::new(mixed_in[..2].to_vec(), mixed_in[2..].to_vec())
            .unwrap()
            .with_params(s.params.clone().unwrap().0, s.params.clone().unwrap().1);
        prop_assert_eq!(map.evaluate(&mixed).unwrap().flatten(), combo(&img_s.flatten(), &img_t.flatten()));
    }

    #[test]
    fn adler_yamilov_yb_on_arbitrary_triples(
        x in point(2), y in point(2), z in point(2),
        a in rational(), b in rational(), c in rational()
    ) {
        let map = resolve("adler-yamilov").unwrap();
        let t = TripleState { x, y, z, params: Some((a, b, c)) };
        prop_assert!(off_locus(check_yb_equation(&map, &t))?);
    }

    #[test]
    fn dnls4_reversible(s in pair4()) {
        let map = resolve("dnls4").unwrap();
        prop_assert!(off_locus(check_reversibility(&map, &s))?);
    }

    #[test]
    fn leaves_commute(s in pair4()) {
        for (m4, m6) in [("adler-yamilov", "nls6"), ("dnls4", "dnls6-reparam")] {
            let (m4, m6) = (resolve(m4).unwrap(), resolve(m6).unwrap());
            prop_assert!(off_locus(check_leaf_commutation(&m4, &m6, &s, LeafPairing::Straight))?);
        }
    }

    #[test]
    fn quadratic_roots_satisfy_their_equation(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
        if let Ok(roots) = solve_quadratic(a, b, c) {
            for x in roots.all() {
                prop_assert!(quadratic_residual(a, b, c, x) <= 1e-12, "root {} of {} {} {}", x, a, b, c);
            }
        }
    }

    #[test]
    fn exact_orbits_do_not_drift(s in pair4()) {
        let map = resolve("dnls4").unwrap();
        let orbit = off_locus(iterate_orbit(&map, &s, 10).map_err(|e| match e {
            Error::NearSingularAbort { guard, .. } => Error::SingularLocus { guard },
            e => e,
        }))?;
        for name in &orbit.names {
            prop_assert_eq!(orbit.max_drift(name), Some(0.0));
        }
    }
}
