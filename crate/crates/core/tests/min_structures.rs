use hnn_tower::minstruct::*;
use proptest::prelude::*;

fn omega_el() -> impl Strategy<Value = F2Element> {
    proptest::collection::btree_set(0u32..40, 0..6)
        .prop_map(|s| F2Element::from_points(Mode::Omega, s.into_iter().map(IndexPoint::Omega)).unwrap())
}

fn i_el() -> impl Strategy<Value = F2Element> {
    let point = prop_oneof![
        (0i64..30).prop_map(|k| IndexPoint::I(0, k)),
        (1u32..=4, -20i64..=20).prop_map(|(c, z)| IndexPoint::I(c, z)),
    ];
    proptest::collection::btree_set(point, 0..5).prop_map(|s| F2Element::from_points(Mode::I, s).unwrap())
}

fn any_el() -> impl Strategy<Value = F2Element> {
    prop_oneof![omega_el(), i_el()]
}

fn same_mode() -> impl Strategy<Value = (F2Element, F2Element, F2Element)> {
    prop_oneof![(omega_el(), omega_el(), omega_el()), (i_el(), i_el(), i_el())]
}

proptest! {
    #[test]
    fn group_laws((a, b, c) in same_mode()) {
        let s = |x: &F2Element, y: &F2Element| add(x, y).unwrap();
        prop_assert_eq!(s(&s(&a, &b), &c), s(&a, &s(&b, &c)));
        prop_assert_eq!(s(&a, &b), s(&b, &a));
        prop_assert!(s(&a, &a).is_zero());
    }

    #[test]
    fn less_respects_sim((a, b, c) in same_mode()) {
        if sim(&a, &b).unwrap() {
            prop_assert_eq!(less(&a, &c).unwrap(), less(&b, &c).unwrap());
            prop_assert_eq!(less(&c, &a).unwrap(), less(&c, &b).unwrap());
        }
    }

    #[test]
    fn sums_behave((a, b, _) in same_mode()) {
        let s = add(&a, &b).unwrap();
        if less(&a, &b).unwrap() {
            prop_assert!(sim(&s, &b).unwrap());
        }
        if sim(&a, &b).unwrap() && !a.is_zero() {
            prop_assert!(less(&s, &a).unwrap());
        }
    }

    #[test]
    fn gap_predicates_partition((a, b, _) in same_mode()) {
        if less(&a, &b).unwrap() {
            let hits = (0..64).filter(|&n| p_n(n, &a, &b).unwrap()).count();
            match chain_gap(&a, &b).unwrap() {
                Some(g) if g < 64 => prop_assert_eq!(hits, 1),
                _ => prop_assert_eq!(hits, 0),
            }
        } else {
            prop_assert!((0..16).all(|n| !p_n(n, &a, &b).unwrap()));
        }
    }

    #[test]
    fn display_parses_back(a in any_el()) {
        let back = F2Element::parse(&a.to_string(), a.mode()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn embedding_is_a_morphism(a in omega_el(), b in omega_el()) {
        let (ea, eb) = (embed(&a), embed(&b));
        prop_assert_eq!(embed(&add(&a, &b).unwrap()), add(&ea, &eb).unwrap());
        prop_assert_eq!(less(&a, &b).unwrap(), less(&ea, &eb).unwrap());
        prop_assert_eq!(chain_gap(&a, &b).unwrap(), chain_gap(&ea, &eb).unwrap());
    }
}

#[test]
fn modes_do_not_mix() {
    let a: F2Element = "{1}".parse().unwrap();
    let b: F2Element = "{(1,1)}".parse().unwrap();
    assert_eq!(add(&a, &b), Err(MinError::ModeMismatch));
    assert_eq!(less(&a, &b), Err(MinError::ModeMismatch));
}

#[test]
fn full_suites_pass() {
    let omega = axiom_suite(Mode::Omega, 8);
    assert_eq!(omega.domain_size, 256);
    assert!(omega.passed(), "{omega:?}");
    let i = axiom_suite(Mode::I, 3);
    assert!(i.passed(), "{i:?}");
    assert!(p_n_matches_oracle(6, 8).is_empty());
    assert!(embedding_check(6));
}

#[test]
fn zero_is_its_own_class() {
    let z = F2Element::zero(Mode::Omega);
    assert!(sim(&z, &z).unwrap());
    assert!(!less(&add(&z, &z).unwrap(), &z).unwrap());
}
