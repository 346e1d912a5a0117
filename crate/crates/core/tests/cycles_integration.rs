mod common;

use common::{manifold, MANIFOLDS};
use dbcalc::complex::{Chain, Cochain};
use dbcalc::cycles::{decompose_cycle, degree_b0, holonomy, integrate, integrate_raw, Assignment};
use dbcalc::error::Error;
use dbcalc::gauge::{curvature, field_from_form};
use dbcalc::random::{random_cycle, random_field, Gen};
use dbcalc::rmodz::{q, qr, RmodZ};
use proptest::prelude::*;

#[test]
fn decomposition_of_the_circle() {
    let m = manifold("circle:3");
    let z = m.fundamental();
    for rule in [Assignment::MinVertex, Assignment::MaxVertex] {
        let d = decompose_cycle(&m, &z, rule).unwrap();
        assert!(d.check(&m, &z));
        assert_eq!(d.layers.len(), 2);
        assert!(d.bottom.is_integral() && d.bottom.boundary().unwrap().is_zero());
    }
}

#[test]
fn point_cycles_keep_their_degree() {
    let m = manifold("torus2");
    let z = Chain::from_terms(0, [(vec![2], q(3)), (vec![5], q(-1))]);
    let d = decompose_cycle(&m, &z, Assignment::MinVertex).unwrap();
    assert!(d.check(&m, &z));
    assert_eq!(degree_b0(&d.bottom).unwrap(), 2.into());
    let a = field_from_form(&m, &Cochain::from_terms(0, [(vec![2], qr(1, 5))]));
    assert_eq!(integrate(&a, &d).unwrap(), RmodZ::new(3, 5));
}

#[test]
fn invalid_cycles_are_rejected() {
    let m = manifold("torus2");
    let open = Chain::elementary(m.simplices(1)[0].clone());
    assert_eq!(decompose_cycle(&m, &open, Assignment::MinVertex), Err(Error::NotACycle));
    let half = m.fundamental().scale(&qr(1, 2));
    assert_eq!(decompose_cycle(&m, &half, Assignment::MinVertex), Err(Error::NotIntegral));
    assert!(degree_b0(&Chain::from_terms(0, [(vec![0], qr(1, 2))])).is_err());
    let a = field_from_form(&m, &Cochain::new(1));
    let d = decompose_cycle(&m, &m.fundamental(), Assignment::MinVertex).unwrap();
    assert!(matches!(integrate_raw(&a, &d), Err(Error::DegreeMismatch { .. })));
}

#[test]
fn form_holonomy_is_the_pairing() {
    for name in MANIFOLDS {
        let m = manifold(name);
        let mut g = Gen::new(6);
        for p in 0..m.dim() {
            for _ in 0..5 {
                let chi = g.cochain(&m, p, 10);
                let z = random_cycle(&m, p, &mut g);
                let a = field_from_form(&m, &chi);
                let d = decompose_cycle(&m, &z, Assignment::MaxVertex).unwrap();
                assert_eq!(integrate_raw(&a, &d).unwrap(), chi.eval(&z), "{name} p={p}");
            }
        }
    }
}

fn space() -> impl Strategy<Value = &'static str> {
    prop::sample::select(MANIFOLDS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decompositions_satisfy_their_identities(name in space(), seed in any::<u64>(), p in 0usize..4) {
        let m = manifold(name);
        prop_assume!(p <= m.dim());
        let mut g = Gen::new(seed);
        let z = random_cycle(&m, p, &mut g);
        for rule in [Assignment::MinVertex, Assignment::MaxVertex] {
            let d = decompose_cycle(&m, &z, rule).unwrap();
            prop_assert!(d.check(&m, &z));
        }
    }

    #[test]
    fn integral_does_not_depend_on_the_decomposition(name in space(), seed in any::<u64>(), p in 0usize..3) {
        let m = manifold(name);
        prop_assume!(p < m.dim());
        let mut g = Gen::new(seed);
        let a = random_field(&m, p, &mut g).unwrap();
        let z = random_cycle(&m, p, &mut g);
        let lo = integrate(&a, &decompose_cycle(&m, &z, Assignment::MinVertex).unwrap()).unwrap();
        let hi = integrate(&a, &decompose_cycle(&m, &z, Assignment::MaxVertex).unwrap()).unwrap();
        prop_assert_eq!(lo, hi);
    }

    #[test]
    fn boundaries_integrate_to_the_curvature_flux(name in space(), seed in any::<u64>(), p in 0usize..3) {
        let m = manifold(name);
        prop_assume!(p < m.dim());
        let mut g = Gen::new(seed);
        let a = random_field(&m, p, &mut g).unwrap();
        let c = g.int_chain(&m, p + 1, 4);
        let z = c.boundary().unwrap();
        let f = curvature(&m, &a).unwrap();
        prop_assert_eq!(holonomy(&m, &a, &z).unwrap(), RmodZ::from_q(&f.eval(&c)));
    }

    #[test]
    fn doubling_a_cycle_doubles_the_holonomy(name in space(), seed in any::<u64>(), p in 0usize..3) {
        let m = manifold(name);
        prop_assume!(p < m.dim());
        let mut g = Gen::new(seed);
        let a = random_field(&m, p, &mut g).unwrap();
        let z = random_cycle(&m, p, &mut g);
        let w = random_cycle(&m, p, &mut g);
        let h = |c: &Chain| holonomy(&m, &a, c).unwrap();
        prop_assert_eq!(h(&z.scale(&q(2))), h(&z) * 2);
        prop_assert_eq!(h(&(&z + &w)), h(&z) + h(&w));
    }
}
