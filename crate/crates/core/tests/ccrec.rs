use lfcc_core::cartan::{dynkin_cartan, preset_orientation, CartanData, IndexSequence, OrientationPreset, RankVector};
use lfcc_core::ccrec::{
    cc_from_f, cc_of_sequence, f_of_e, rank2_cc, rank2_symbol, rank2_tower, reflect_symbol,
    symbol_of_sequence, CcError, Direction, FPoly, SymbolKind,
};
use lfcc_core::cluster::{
    enumerate_finite_type_variables, non_initial, rank2_variables, variable_along,
    DEFAULT_SEED_BUDGET,
};
use lfcc_core::laurent::LaurentPoly;
use lfcc_core::Exec;

fn x(s: &str) -> LaurentPoly {
    LaurentPoly::parse(s, 2).unwrap()
}

fn rv(v: &[i64]) -> RankVector {
    RankVector(v.to_vec())
}

fn h() -> CartanData {
    CartanData::rank2(2, 3, 3, 2).unwrap()
}

/// The printed closed form of `x_5` for `(b, c) = (2, 3)`.
fn x5_closed_form() -> LaurentPoly {
    let u = x("1 + x2^3");
    let num = &(&(&x("x1^6") + &(&x("3*x1^4") * &u)) + &(&x("3*x1^2") * &u.pow(3))) + &u.pow(5);
    num.exact_div(&x("x1^5*x2^3")).unwrap()
}

#[test]
fn simple_symbol() {
    let s = f_of_e(&h(), 0);
    assert_eq!(s.rank(), Some(&rv(&[1, 0])));
    assert_eq!(s.f_poly().unwrap().to_string(), "1 + y1");
    assert_eq!(cc_from_f(&s).unwrap(), x("x1^-1 + x1^-1*x2^3"));
}

#[test]
fn injective_hull_of_e2() {
    let star = h().reflect_orientation(0).unwrap();
    let s = reflect_symbol(&f_of_e(&star, 1), 0, Direction::Plus).unwrap();
    assert_eq!(s.cd, h());
    assert_eq!(s.rank(), Some(&rv(&[2, 1])));
    let f = s.f_poly().unwrap();
    assert_eq!(f.to_string(), "1 + y2 + 2*y1*y2 + y1^2*y2");
    assert_eq!(f.coeff(&rv(&[1, 1])), 2);
    assert_eq!(f.coeff(&rv(&[0, 1])), 1);
    assert_eq!(f.coeff(&rv(&[2, 1])), 1);
    assert_eq!(f.coeff(&rv(&[1, 0])), 0);
    assert_eq!(
        cc_from_f(&s).unwrap(),
        x("x1^2 + x2^6 + 1 + 2*x2^3").exact_div(&x("x1^2*x2")).unwrap()
    );

    let s25 = reflect_symbol(&s, 1, Direction::Plus).unwrap();
    assert_eq!(s25.rank(), Some(&rv(&[2, 5])));
}

#[test]
fn m5_from_e1() {
    let n = reflect_symbol(&f_of_e(&h(), 0), 1, Direction::Plus).unwrap();
    assert_eq!(n.rank(), Some(&rv(&[1, 3])));
    let s5 = reflect_symbol(&n, 0, Direction::Plus).unwrap();
    assert_eq!(s5.cd, h());
    assert_eq!(s5.rank(), Some(&rv(&[5, 3])));
    let x5 = cc_from_f(&s5).unwrap();
    assert_eq!(x5, x5_closed_form());
    assert_eq!(x5.d_vector(), vec![5, 3]);
}

#[test]
fn reflecting_e_k_at_k_gives_the_initial_variable() {
    for k in 0..2 {
        let cd = if k == 1 { h() } else { h().reflect_orientation(0).unwrap() };
        let s = reflect_symbol(&f_of_e(&cd, k), k, Direction::Plus).unwrap();
        assert_eq!(s.kind, SymbolKind::InitialVariable(k));
        assert_eq!(cc_from_f(&s).unwrap(), LaurentPoly::var(2, k));
        let back = reflect_symbol(&s, k, Direction::Minus).unwrap();
        assert_eq!(back, f_of_e(&cd, k));
    }
}

#[test]
fn wrong_vertex_kind_is_rejected() {
    let s = f_of_e(&h(), 0);
    assert!(matches!(
        reflect_symbol(&s, 0, Direction::Plus),
        Err(CcError::NotSinkOrSource { .. })
    ));
    assert!(matches!(
        reflect_symbol(&s, 1, Direction::Minus),
        Err(CcError::NotSinkOrSource { .. })
    ));
}

#[test]
fn rank2_values() {
    assert_eq!(rank2_cc(2, 3, 3, 2, 3).unwrap(), x("x1^-1 + x1^-1*x2^3"));
    assert_eq!(rank2_cc(2, 3, 3, 2, 0).unwrap(), x("x2^-1 + x1^2*x2^-1"));
    assert_eq!(rank2_cc(2, 3, 3, 2, 5).unwrap(), x5_closed_form());
    assert_eq!(rank2_symbol(2, 3, 3, 2, 4).unwrap().rank(), Some(&rv(&[2, 1])));
    assert_eq!(rank2_symbol(2, 3, 3, 2, -1).unwrap().rank(), Some(&rv(&[1, 3])));
    for n in [1, 2] {
        assert!(matches!(rank2_symbol(2, 3, 3, 2, n), Err(CcError::Domain(_))));
    }
    assert!(matches!(rank2_symbol(1, 2, 2, 1, 3), Err(CcError::Domain(_))));
    assert!(matches!(rank2_symbol(2, 3, 1, 1, 3), Err(CcError::Domain(_))));
}

#[test]
fn tower_matches_recurrence_on_a_short_range() {
    for (b, c, c1, c2) in [(2, 3, 3, 2), (1, 4, 4, 1), (2, 2, 1, 1), (2, 2, 2, 2)] {
        let tower = rank2_tower(b, c, c1, c2, -4, 7).unwrap();
        let xs = rank2_variables(b, c, -4, 7).unwrap();
        assert_eq!(tower.len(), 10);
        for (n, sym) in &tower {
            assert_eq!(cc_from_f(sym).unwrap(), xs[n], "({b},{c},{c1},{c2}) n={n}");
            assert_eq!(*sym, rank2_symbol(b, c, c1, c2, *n).unwrap());
        }
    }
}

#[test]
fn support_box_and_corners() {
    let tower = rank2_tower(3, 3, 1, 1, -5, 8).unwrap();
    for sym in tower.values() {
        let f = sym.f_poly().unwrap();
        f.check_box(sym.rank().unwrap()).unwrap();
        assert!(f.is_positive());
    }
    let bad = FPoly::new(x("1 + 2*x1")).unwrap();
    assert!(matches!(bad.check_box(&rv(&[1, 0])), Err(CcError::InvariantViolated(_))));
    assert!(FPoly::new(x("1 + x1^-1")).is_none());
}

#[test]
fn length_one_sequences() {
    let c = dynkin_cartan('B', 3).unwrap();
    let cd = CartanData::with_minimal_symmetrizer(c.clone(), preset_orientation(&c, OrientationPreset::Ascending)).unwrap();
    for i in 0..3 {
        let s = symbol_of_sequence(&cd, &IndexSequence(vec![i])).unwrap();
        assert_eq!(s, f_of_e(&cd, i));
    }
}

#[test]
fn a2_sequence_agrees_with_mutation() {
    let a2 = CartanData::new(vec![vec![2, -1], vec![-1, 2]], vec![1, 1], [(1, 0)]).unwrap();
    let seq = IndexSequence(vec![1, 0]);
    assert_eq!(cc_of_sequence(&a2, &seq).unwrap(), variable_along(a2.b_matrix(), &seq.0).unwrap());
}

#[test]
fn b2_sequences_give_the_four_cluster_variables() {
    let b2 = CartanData::new(vec![vec![2, -1], vec![-2, 2]], vec![2, 1], [(1, 0)]).unwrap();
    let vars = enumerate_finite_type_variables(b2.b_matrix(), DEFAULT_SEED_BUDGET, Exec::Sequential).unwrap();
    let mut expected = non_initial(&vars);
    let mut got = Vec::new();
    for beta in b2.positive_roots().unwrap() {
        let seq = b2.find_adapted_sequence(&beta).unwrap();
        let cc = cc_of_sequence(&b2, &seq).unwrap();
        assert_eq!(cc.d_vector(), beta.0);
        got.push(cc);
    }
    let key = |p: &LaurentPoly| p.to_string();
    got.sort_by_key(key);
    expected.sort_by_key(key);
    assert_eq!(got, expected);
}

#[test]
fn non_admissible_sequences_are_rejected() {
    let c = dynkin_cartan('A', 3).unwrap();
    let cd = CartanData::with_minimal_symmetrizer(c.clone(), preset_orientation(&c, OrientationPreset::Ascending)).unwrap();
    assert!(matches!(
        symbol_of_sequence(&cd, &IndexSequence(vec![1, 0])),
        Err(CcError::NotAdmissible(_))
    ));
}

#[test]
fn sink_then_source_round_trip() {
    let tower = rank2_tower(2, 3, 3, 2, -3, 7).unwrap();
    for sym in tower.values() {
        for k in 0..2 {
            if sym.cd.is_sink(k) && sym.rank() != Some(&RankVector::simple(2, k)) {
                let up = reflect_symbol(sym, k, Direction::Plus).unwrap();
                assert_eq!(up.rank(), Some(&sym.cd.reflect_root(k, sym.rank().unwrap())));
                assert_eq!(&reflect_symbol(&up, k, Direction::Minus).unwrap(), sym);
            }
        }
    }
}
