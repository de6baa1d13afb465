use affina_core::{Jet2, Var};
use proptest::prelude::*;

fn jet(order: usize) -> impl Strategy<Value = Jet2> {
    let n = (order + 1) * (order + 2) / 2;
    prop::collection::vec(-2.0f64..2.0, n).prop_map(move |c| {
        let mut j = Jet2::zero(order);
        let mut it = c.into_iter();
        for d in 0..=order {
            for k in 0..=d {
                j.set_coeff(d - k, k, it.next().unwrap());
            }
        }
        j
    })
}

fn assert_close(a: &Jet2, b: &Jet2, tol: f64) {
    assert_eq!(a.order(), b.order());
    for ((i, j, x), (_, _, y)) in a.terms().zip(b.terms()) {
        assert!((x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())), "u^{i}v^{j}: {x} vs {y}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms((a, b, c) in (0usize..7).prop_flat_map(|o| (jet(o), jet(o), jet(o)))) {
        let order = a.order();
        assert_close(&(&a + &b), &(&b + &a), 0.0);
        assert_close(&(&a * &b), &(&b * &a), 1e-12);
        assert_close(&(&(&a * &b) * &c), &(&a * &(&b * &c)), 1e-12);
        assert_close(&(&(&a + &b) + &c), &(&a + &(&b + &c)), 1e-12);
        assert_close(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)), 1e-12);
        assert_close(&(&a - &a), &Jet2::zero(order), 0.0);
        assert_close(&(&a * &Jet2::constant(order, 1.0)), &a, 0.0);
    }

    #[test]
    fn mixed_partials_commute(a in jet(6)) {
        let uv = a.partial(Var::U).partial(Var::V);
        let vu = a.partial(Var::V).partial(Var::U);
        assert_close(&uv, &vu, 0.0);
    }

    #[test]
    fn square_then_sqrt(mut a in jet(5), c0 in 0.5f64..3.0) {
        a.set_coeff(0, 0, c0);
        let back = a.pow(2.0).unwrap().pow(0.5).unwrap();
        assert_close(&back, &a, 1e-10);
    }

    #[test]
    fn shift_matches_evaluation(a in jet(5), du in -0.5f64..0.5, dv in -0.5f64..0.5, x in -0.5f64..0.5, y in -0.5f64..0.5) {
        let s = a.shift(du, dv);
        let want = a.eval(du + x, dv + y);
        prop_assert!((s.eval(x, y) - want).abs() <= 1e-10 * (1.0 + want.abs()));
    }
}

/// Jet of `(1 + u - 2v)^{-1/2} / (1 - u/2 + v)` against the function itself.
#[test]
fn evaluation_convergence_order() {
    let f = |u: f64, v: f64| (1.0 + u - 2.0 * v).powf(-0.5) / (1.0 - 0.5 * u + v);
    for order in 1..=4 {
        let u = Jet2::var(order, Var::U);
        let v = Jet2::var(order, Var::V);
        let base = &(&u - &v.scale(2.0)) + &Jet2::constant(order, 1.0);
        let den = &(&v - &u.scale(0.5)) + &Jet2::constant(order, 1.0);
        let j = base.pow(-0.5).unwrap().try_div(&den).unwrap();
        for dir in [[1.0, 0.0], [0.0, 1.0], [0.6, -0.8]] {
            let err = |h: f64| (j.eval(h * dir[0], h * dir[1]) - f(h * dir[0], h * dir[1])).abs();
            let (h1, h2) = (1e-2, 5e-3);
            let rate = (err(h1) / err(h2)).log2();
            assert!(rate >= order as f64 + 0.5, "order {order}, dir {dir:?}: rate {rate}");
        }
    }
}

#[test]
fn mismatched_orders_are_errors() {
    let a = Jet2::constant(2, 1.0);
    let b = Jet2::constant(3, 1.0);
    assert!(a.try_add(&b).is_err());
    assert!(a.try_mul(&b).is_err());
}

#[test]
fn fractional_power_of_negative_constant_fails() {
    let a = Jet2::constant(3, -1.0);
    assert!(a.pow(0.5).is_err());
    assert!(Jet2::zero(3).pow(-1.0).is_err());
    assert_eq!(Jet2::zero(3).pow(0.0).unwrap().constant_term(), 1.0);
}
