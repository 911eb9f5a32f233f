use pinchuk::arith::{int, rat, rational_sqrt, Rational};
use pinchuk::elimination::b_membership;
use pinchuk::system::{g_map, psi, ACurve, PinchukSystem};
use pinchuk::MultiPoly;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn psi_inverts_fh(x in rational(), y in rational()) {
        let (f, h) = PinchukSystem::fh(&x, &y);
        prop_assume!(f != int(0));
        prop_assert_eq!(psi(&f, &h).unwrap(), (x.clone(), y.clone()));
        prop_assert_eq!(g_map(&f, &h).unwrap(), PinchukSystem::apply_f(&x, &y));
    }

    #[test]
    fn g_lands_on_w_zero(f in rational(), h in rational()) {
        prop_assume!(b_membership(&f, &h).is_none());
        let (a, b) = g_map(&f, &h).unwrap();
        let w = PinchukSystem::shared().elim.w_at(&a, &b);
        prop_assert_eq!(w.eval(&f), int(0));
    }

    #[test]
    fn a1_is_two_to_one(t in 1i64..=40, d in 1i64..=9) {
        // b = −(t/d)², both parameters ±t/d
        let tbar = rat(t, d);
        let b = -(&tbar * &tbar);
        let root = rational_sqrt(&-b.clone()).unwrap();
        let p = ACurve::A1.point(&root).unwrap();
        let q = ACurve::A1.point(&-root.clone()).unwrap();
        prop_assert_ne!(&p, &q);
        prop_assert_eq!(PinchukSystem::apply_f(&p.0, &p.1), (int(0), b.clone()));
        prop_assert_eq!(PinchukSystem::apply_f(&q.0, &q.1), (int(0), b));
    }
}

#[test]
fn a_curve_identities_in_tbar() {
    let sys = PinchukSystem::shared();
    for curve in [ACurve::A1, ACurve::A2] {
        let (fnum, fden) = curve.pull_back(&sys.f);
        assert!(fnum.is_zero(), "f on {curve:?}");
        let (hnum, hden) = curve.pull_back(&sys.h);
        let (qnum, qden) = curve.pull_back(&sys.q);
        let tb = pinchuk::UniPoly::x();
        let want_h = match curve {
            ACurve::A1 => pinchuk::UniPoly::zero(),
            ACurve::A2 => -&hden,
        };
        assert_eq!(hnum, want_h);
        assert_eq!(qnum, -&(&(&tb * &tb) * &qden));
        assert!(!fden.is_zero());
    }
}

#[test]
fn q_vanishes_on_the_map() {
    // Q(f, h, q) as a polynomial in x, y
    let sys = PinchukSystem::shared();
    let q_elim: &MultiPoly = &sys.elim.q;
    let composed = q_elim
        .substitute(&[("fb", &sys.f), ("hb", &sys.h), ("qb", &sys.q)])
        .unwrap();
    assert!(composed.is_zero());
}

#[test]
fn jacobian_positive_on_grid() {
    let sys = PinchukSystem::shared();
    assert!(!sys.jac.is_zero());
    let (min, nodes) = sys.jacobian_grid_min(&int(-5), &int(5), 100);
    assert_eq!(nodes, 101 * 101);
    assert!(min > int(0), "min {min}");
}
