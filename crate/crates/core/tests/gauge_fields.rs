mod common;

use common::{manifold, MANIFOLDS};
use dbcalc::complex::{Chain, Cochain};
use dbcalc::cover::{mu_sign, Support};
use dbcalc::error::Error;
use dbcalc::gauge::{
    class_of, curvature, field_from_curvature, field_from_flat_class, field_from_form, gauge_equivalent,
    torsion_flat_cochains, transformation_between, FlatClassRep, GaugeField,
};
use dbcalc::cycles::holonomy;
use dbcalc::homology::is_integral_periods;
use dbcalc::manifold::Manifold;
use dbcalc::random::{random_field, random_transformation, Gen};
use dbcalc::rmodz::{q, qr, RmodZ};
use proptest::prelude::*;

/// An integral closed (p+1)-cochain: a combination of cohomology
/// generators plus an exact integer part.
fn integral_curvature(m: &Manifold, p: usize, g: &mut Gen) -> Cochain {
    let mut f = Cochain::new(p + 1);
    for x in &m.cohomology(p + 1).free {
        f += &x.scale(&q(g.small_int(-2, 2)));
    }
    &f + &g.int_cochain(m, p, 3).coboundary(m)
}

#[test]
fn form_fields_satisfy_descent_and_have_the_form_as_curvature() {
    for name in MANIFOLDS {
        let m = manifold(name);
        let mut g = Gen::new(1);
        for p in 0..m.dim() {
            let chi = g.cochain(&m, p, 8);
            let a = field_from_form(&m, &chi);
            assert!(a.check_descent(&m), "{name} p={p}");
            assert_eq!(curvature(&m, &a).unwrap(), chi.coboundary(&m));
            assert!(class_of(&m, &a).free.iter().all(|c| *c == q(0)));
        }
    }
}

#[test]
fn curvature_descent_recovers_curvature_and_class() {
    for name in MANIFOLDS {
        let m = manifold(name);
        let mut g = Gen::new(2);
        for p in 0..m.dim() {
            let f = integral_curvature(&m, p, &mut g);
            let a = field_from_curvature(&m, &f, p).unwrap();
            assert!(a.check_descent(&m), "{name} p={p}");
            assert_eq!(curvature(&m, &a).unwrap(), f);
            assert!(a.top.is_integral());
            // The top cocycle represents the curvature class up to s_{p+1}.
            let signed = f.scale(&mu_sign(p + 1));
            assert_eq!(class_of(&m, &a).free, m.cohomology(p + 1).coordinates(&m, &signed).free, "{name} p={p}");
        }
    }
}

#[test]
fn curvature_without_integral_periods_is_rejected() {
    let m = manifold("torus2");
    let half = m.cohomology(2).free[0].scale(&qr(1, 2));
    assert!(!is_integral_periods(&m, &half));
    assert!(matches!(field_from_curvature(&m, &half, 1), Err(Error::Precondition(_))));
    let wrong = m.cohomology(1).free[0].clone();
    assert!(matches!(field_from_curvature(&m, &wrong, 1), Err(Error::DegreeMismatch { .. })));
}

#[test]
fn flat_field_holonomy_is_a_third_on_torus() {
    let m = manifold("torus2");
    let w = m.cohomology(1).free[0].scale(&qr(1, 3));
    let a = field_from_flat_class(&m, &FlatClassRep::from_cocycle(&w)).unwrap();
    assert!(a.check_descent(&m));
    assert!(curvature(&m, &a).unwrap().is_zero());
    let gens = m.homology(1).generators();
    let mut seen_third = false;
    for z in &gens {
        let expected = RmodZ::from_q(&w.eval(z));
        assert_eq!(holonomy(&m, &a, z).unwrap(), expected);
        seen_third |= expected == RmodZ::new(1, 3) || expected == RmodZ::new(2, 3);
    }
    assert!(seen_third);
}

#[test]
fn non_integral_flat_representative_is_rejected() {
    let m = manifold("circle:3");
    let r = Cochain::from_terms(0, [(vec![0], qr(1, 2))]);
    assert_eq!(field_from_flat_class(&m, &FlatClassRep { p: 0, r }), Err(Error::InvalidFlatClass));
}

#[test]
fn lens_space_torsion_sector_has_order_four() {
    let m = manifold("lens:4");
    let t = torsion_flat_cochains(&m, 1);
    assert_eq!(t.len(), 1);
    let (v, d) = &t[0];
    assert_eq!(*d, 4);
    assert!(v.coboundary(&m).scale(&qr(1, 4)).is_integral());
    let z = &m.homology(1).generators()[0];
    let fields: Vec<GaugeField> = (0..4)
        .map(|s| field_from_flat_class(&m, &FlatClassRep { p: 1, r: v.scale(&qr(s, 4)) }).unwrap())
        .collect();
    let hol: Vec<RmodZ> = fields.iter().map(|a| holonomy(&m, a, z).unwrap()).collect();
    assert!(!hol[1].is_zero());
    assert!((hol[1].clone() * 4).is_zero());
    assert!(!(hol[1].clone() * 2).is_zero());
    for i in 0..4 {
        assert!(fields[i].check_descent(&m));
        assert!(class_of(&m, &fields[i]).free.is_empty());
        for j in 0..4 {
            let e = gauge_equivalent(&m, &fields[i], &fields[j]).unwrap();
            assert_eq!(e.equivalent, i == j, "{i} {j}");
            assert_eq!(e.witness.is_some(), i == j);
        }
    }
}

#[test]
fn transformations_are_invisible_to_holonomy() {
    for name in MANIFOLDS {
        let m = manifold(name);
        let mut g = Gen::new(9);
        for p in 0..m.dim() {
            let t = random_transformation(&m, p, &mut g);
            let f = t.field(&m);
            assert!(f.check_descent(&m), "{name} p={p}");
            assert!(curvature(&m, &f).unwrap().is_zero());
            for z in m.homology(p).generators() {
                assert!(holonomy(&m, &f, &z).unwrap().is_zero());
            }
            let back = transformation_between(&m, &f).unwrap().expect("a transformation is recognised");
            assert_eq!(back.field(&m), f);
        }
    }
}

#[test]
fn supports_are_closed_stars() {
    let m = manifold("sphere:2");
    let mut g = Gen::new(4);
    let a = random_field(&m, 1, &mut g).unwrap();
    assert!(a.layers.iter().all(|l| l.supported(&m, Support::Closed)));
    let mut bad = a.clone();
    bad.layers[0].set(vec![0], Cochain::elementary(vec![1, 2]));
    assert!(!bad.check_descent(&m) || m.in_closed_star(&[0], &[1, 2]));
}

#[test]
fn minus_one_fields_compare_by_top() {
    let m = manifold("circle:3");
    let a = GaugeField { p: -1, layers: vec![], top: Cochain::from_terms(0, (0..3).map(|v| (vec![v], q(2)))) };
    assert!(a.check_descent(&m));
    assert!(gauge_equivalent(&m, &a, &a).unwrap().equivalent);
    assert!(!gauge_equivalent(&m, &a, &GaugeField::zero(-1)).unwrap().equivalent);
    assert!(transformation_between(&m, &a).is_err());
}

fn space() -> impl Strategy<Value = &'static str> {
    prop::sample::select(MANIFOLDS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_fields_satisfy_descent(name in space(), seed in any::<u64>(), p in 0usize..3) {
        let m = manifold(name);
        prop_assume!(p < m.dim());
        let mut g = Gen::new(seed);
        let a = random_field(&m, p, &mut g).unwrap();
        prop_assert!(a.check_descent(&m));
        let f = curvature(&m, &a).unwrap();
        prop_assert!(f.coboundary(&m).is_zero());
        prop_assert!(is_integral_periods(&m, &f));
    }

    #[test]
    fn equivalence_agrees_with_its_witness(name in space(), seed in any::<u64>(), p in 0usize..3, shift in any::<bool>()) {
        let m = manifold(name);
        prop_assume!(p < m.dim());
        let mut g = Gen::new(seed);
        let a = random_field(&m, p, &mut g).unwrap();
        let b = if shift {
            &a + &random_transformation(&m, p, &mut g).field(&m)
        } else {
            random_field(&m, p, &mut g).unwrap()
        };
        let e = gauge_equivalent(&m, &a, &b).unwrap();
        prop_assert_eq!(e.equivalent, e.witness.is_some());
        if shift {
            prop_assert!(e.equivalent);
        }
        if let Some(w) = e.witness {
            prop_assert_eq!(&b + &w.field(&m), a);
        }
    }

    #[test]
    fn holonomy_is_linear_in_the_field(name in space(), seed in any::<u64>(), p in 0usize..3) {
        let m = manifold(name);
        prop_assume!(p < m.dim());
        let mut g = Gen::new(seed);
        let a = random_field(&m, p, &mut g).unwrap();
        let b = random_field(&m, p, &mut g).unwrap();
        let z: Chain = dbcalc::random::random_cycle(&m, p, &mut g);
        let sum = holonomy(&m, &(&a + &b), &z).unwrap();
        prop_assert_eq!(sum, holonomy(&m, &a, &z).unwrap() + holonomy(&m, &b, &z).unwrap());
        prop_assert_eq!(holonomy(&m, &a.times(3), &z).unwrap(), holonomy(&m, &a, &z).unwrap() * 3);
    }
}
