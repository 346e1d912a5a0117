mod common;

use common::{manifold, MANIFOLDS};
use dbcalc::complex::cup;
use dbcalc::cover::Support;
use dbcalc::currents::{
    bump, canonical_current_of_cycle, current_from_field, dual_current_from_cycle, dual_transformation_between,
    eval_current_on_dualfield_raw, eval_dualcurrent_on_field, eval_dualcurrent_on_field_raw, mu_map,
    unit_dual_field, GaugeCurrent,
};
use dbcalc::cycles::{decompose_cycle, holonomy, integrate_raw, Assignment};
use dbcalc::db::{
    db_cap, db_product, eval_on_unit, eval_on_unit_raw, eval_on_unit_reduced, extended_db_product, reduce_top_current,
};
use dbcalc::error::Error;
use dbcalc::gauge::field_from_form;
use dbcalc::random::{
    random_current, random_current_transformation, random_cycle, random_dual_current,
    random_dual_current_transformation, random_dual_field, random_dual_transformation, random_field,
    random_transformation, Gen,
};
use dbcalc::rmodz::{is_integer, q, RmodZ};
use proptest::prelude::*;

#[test]
fn bumps_integrate_to_one_on_open_stars() {
    for name in MANIFOLDS {
        let m = manifold(name);
        for d in 0..=m.dim() {
            for sigma in m.simplices(d).iter().take(6) {
                let b = bump(&m, sigma);
                assert_eq!(b.eval(&m.fundamental()), q(1));
                assert!(b.support().all(|t| sigma.iter().all(|v| t.contains(v))));
            }
        }
    }
}

#[test]
fn unit_dual_field_satisfies_descent() {
    for name in MANIFOLDS {
        let m = manifold(name);
        let u = unit_dual_field(&m);
        assert!(u.check_descent(&m), "{name}");
        assert_eq!(u.bottom, m.partition().m);
        assert!(dual_transformation_between(&m, &u).unwrap().is_none(), "{name}: the unit is not trivial");
    }
}

#[test]
fn fields_read_as_currents() {
    for name in MANIFOLDS {
        let m = manifold(name);
        let mut g = Gen::new(12);
        for p in 0..m.dim() {
            let a = random_field(&m, p, &mut g).unwrap();
            let c = current_from_field(&m, &a).unwrap();
            assert!(c.check_descent(&m), "{name} p={p}");
            assert_eq!(c.q, (m.dim() - p - 1) as i64);
            assert_eq!(c.top, a.top);
        }
    }
}

#[test]
fn decomposed_cycles_evaluate_to_their_holonomy() {
    for name in MANIFOLDS {
        let m = manifold(name);
        let mut g = Gen::new(14);
        for p in 0..m.dim() {
            let a = random_field(&m, p, &mut g).unwrap();
            let z = random_cycle(&m, p, &mut g);
            let d = decompose_cycle(&m, &z, Assignment::MinVertex).unwrap();
            let c = dual_current_from_cycle(&d);
            assert!(c.check_descent(&m));
            assert_eq!(eval_dualcurrent_on_field_raw(&c, &a).unwrap(), integrate_raw(&a, &d).unwrap());
        }
    }
}

#[test]
fn canonical_currents_of_cycles() {
    let m = manifold("torus2");
    let mut g = Gen::new(15);
    for p in 0..2 {
        for _ in 0..4 {
            let z = random_cycle(&m, p, &mut g);
            let zc = canonical_current_of_cycle(&m, &z).unwrap();
            assert!(zc.check_descent(&m));
            let img = mu_map(&m, &zc, m.partition()).unwrap();
            assert!(img.check_descent(&m));
            let a = random_field(&m, p, &mut g).unwrap();
            let hol = holonomy(&m, &a, &z).unwrap();
            assert_eq!(eval_dualcurrent_on_field(&img, &a).unwrap(), hol);
            assert_eq!(eval_on_unit(&extended_db_product(&m, &zc, &a).unwrap(), m.partition()).unwrap(), hol);
        }
    }
    assert!(canonical_current_of_cycle(&m, &m.fundamental()).is_err());
}

#[test]
fn degree_mismatches_are_reported() {
    let m = manifold("torus3");
    let mut g = Gen::new(2);
    let a = random_field(&m, 1, &mut g).unwrap();
    let c = random_current(&m, 0, &mut g).unwrap();
    let d = random_dual_field(&m, 1, &mut g).unwrap();
    assert!(matches!(eval_current_on_dualfield_raw(&c, &d), Err(Error::DegreeMismatch { .. })));
    assert!(matches!(extended_db_product(&m, &c, &a), Err(Error::DegreeMismatch { .. })));
    assert!(matches!(eval_on_unit_raw(&c, m.partition()), Err(Error::DegreeMismatch { .. })));
    assert!(matches!(reduce_top_current(&m, &c), Err(Error::DegreeMismatch { .. })));
    assert!(GaugeCurrent::zero(3, 3).is_err());
}

#[test]
fn form_pairs_on_the_unit() {
    for name in MANIFOLDS {
        let m = manifold(name);
        let n = m.dim();
        let mut g = Gen::new(19);
        for p in 0..n {
            let alpha = g.cochain(&m, p, 8);
            let beta = g.cochain(&m, n - p - 1, 8);
            let (a, b) = (field_from_form(&m, &alpha), field_from_form(&m, &beta));
            let c = current_from_field(&m, &db_product(&m, &b, &a).unwrap()).unwrap();
            let expected = cup(&m, &beta, &alpha.coboundary(&m)).eval(&m.fundamental());
            let mu = m.partition();
            assert_eq!(eval_on_unit(&c, mu).unwrap(), RmodZ::from_q(&expected), "{name} p={p}");
            assert_eq!(eval_on_unit_reduced(&m, &c, mu).unwrap(), RmodZ::from_q(&expected), "{name} p={p}");
        }
    }
}

fn space() -> impl Strategy<Value = &'static str> {
    prop::sample::select(MANIFOLDS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_objects_satisfy_descent(name in space(), seed in any::<u64>(), deg in 0usize..4) {
        let m = manifold(name);
        let n = m.dim();
        prop_assume!(deg <= n);
        let mut g = Gen::new(seed);
        let cq = deg as i64 - 1;
        prop_assert!(random_current(&m, cq, &mut g).unwrap().check_descent(&m));
        prop_assert!(random_current_transformation(&m, cq, &mut g).unwrap().current(&m).check_descent(&m));
        prop_assert!(random_dual_field(&m, cq, &mut g).unwrap().check_descent(&m));
        let t = random_dual_transformation(&m, cq, &mut g);
        prop_assert!(t.is_admissible(&m) && t.field(&m).check_descent(&m));
        prop_assert!(random_dual_current(&m, deg, &mut g).unwrap().check_descent(&m));
        let s = random_dual_current_transformation(&m, deg, &mut g);
        prop_assert!(s.is_admissible() && s.current().check_descent(&m));
    }

    #[test]
    fn transformations_evaluate_to_integers(name in space(), seed in any::<u64>(), p in 0usize..3) {
        let m = manifold(name);
        prop_assume!(p < m.dim());
        let mut g = Gen::new(seed);
        let pq = p as i64;
        let c = random_current(&m, pq, &mut g).unwrap();
        let d = random_dual_field(&m, pq, &mut g).unwrap();
        let tc = random_current_transformation(&m, pq, &mut g).unwrap().current(&m);
        let td = random_dual_transformation(&m, pq, &mut g).field(&m);
        prop_assert!(is_integer(&eval_current_on_dualfield_raw(&tc, &d).unwrap()));
        prop_assert!(is_integer(&eval_current_on_dualfield_raw(&c, &td).unwrap()));
        let a = random_field(&m, p, &mut g).unwrap();
        let zc = random_dual_current(&m, p, &mut g).unwrap();
        let ta = random_transformation(&m, p, &mut g).field(&m);
        let tz = random_dual_current_transformation(&m, p, &mut g).current();
        prop_assert!(is_integer(&eval_dualcurrent_on_field_raw(&zc, &ta).unwrap()));
        prop_assert!(is_integer(&eval_dualcurrent_on_field_raw(&tz, &a).unwrap()));
    }

    #[test]
    fn dual_transformations_are_recognised(name in space(), seed in any::<u64>(), deg in 0usize..4) {
        let m = manifold(name);
        prop_assume!(deg <= m.dim());
        let mut g = Gen::new(seed);
        let t = random_dual_transformation(&m, deg as i64 - 1, &mut g);
        let f = t.field(&m);
        let back = dual_transformation_between(&m, &f).unwrap();
        prop_assert!(back.is_some());
        prop_assert_eq!(back.unwrap().field(&m), f);
    }

    #[test]
    fn cap_with_the_unit_is_adjoint_to_the_product(name in space(), seed in any::<u64>(), p in 0usize..3) {
        let m = manifold(name);
        let n = m.dim();
        prop_assume!(p < n);
        let mut g = Gen::new(seed);
        let a = random_field(&m, p, &mut g).unwrap();
        let b = random_field(&m, n - p - 1, &mut g).unwrap();
        let capped = db_cap(&m, &a, m.partition()).unwrap();
        prop_assert!(capped.check_descent(&m));
        let lhs = dbcalc::db::product_on_unit_raw(&m, &b, &a).unwrap();
        let rhs = eval_current_on_dualfield_raw(&current_from_field(&m, &b).unwrap(), &capped).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduced_evaluation_agrees(name in space(), seed in any::<u64>()) {
        let m = manifold(name);
        let mut g = Gen::new(seed);
        let c = random_current(&m, -1, &mut g).unwrap();
        let r = reduce_top_current(&m, &c).unwrap();
        prop_assert!(r.r.coboundary(&m).is_zero());
        prop_assert_eq!(eval_on_unit(&c, m.partition()).unwrap(), eval_on_unit_reduced(&m, &c, m.partition()).unwrap());
        prop_assert!(c.layers.iter().all(|l| l.supported(&m, Support::Open)));
    }
}
