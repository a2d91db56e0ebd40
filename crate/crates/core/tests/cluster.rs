use std::collections::HashSet;

use lfcc_core::cartan::{dynkin_cartan, preset_orientation, CartanData, OrientationPreset};
use lfcc_core::cluster::{
    enumerate_finite_type_variables, mutate_matrix, non_initial, rank2_variable, rank2_variables,
    skew_symmetrizer, variable_along, ClusterError, Seed, DEFAULT_SEED_BUDGET,
};
use lfcc_core::laurent::LaurentPoly;
use lfcc_core::Exec;

fn p(s: &str) -> LaurentPoly {
    LaurentPoly::parse(s, 2).unwrap()
}

fn b23() -> Vec<Vec<i64>> {
    vec![vec![0, -2], vec![3, 0]]
}

#[test]
fn rank2_matrix_mutation_flips_sign() {
    assert_eq!(mutate_matrix(&b23(), 0), vec![vec![0, 2], vec![-3, 0]]);
    assert_eq!(mutate_matrix(&b23(), 1), vec![vec![0, 2], vec![-3, 0]]);
}

#[test]
fn matrix_mutation_rule_on_a3() {
    let b = vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]];
    // μ_2 by hand: b13 += sgn(b12)[b12 b23]_+ = 1
    assert_eq!(mutate_matrix(&b, 1), vec![vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]);
}

#[test]
fn seed_mutations() {
    let s = Seed::initial(b23()).unwrap();
    assert_eq!(s.mutate(0).unwrap().vars()[0], p("x1^-1 + x1^-1*x2^3"));
    assert_eq!(s.mutate(1).unwrap().vars()[1], p("x2^-1 + x1^2*x2^-1"));
    assert_eq!(variable_along(&b23(), &[0]).unwrap(), p("x1^-1 + x1^-1*x2^3"));
    assert_eq!(variable_along(&b23(), &[1, 1]).unwrap(), LaurentPoly::var(2, 1));
    assert_eq!(variable_along(&b23(), &[]), Err(ClusterError::EmptyPath));
    assert!(matches!(s.mutate(2), Err(ClusterError::IndexOutOfRange(2))));
    assert_eq!(
        Seed::initial(vec![vec![0, 1], vec![1, 0]]).unwrap_err(),
        ClusterError::NotSkewSymmetrizable
    );
}

#[test]
fn a2_path_gives_the_middle_variable() {
    let a2 = CartanData::new(vec![vec![2, -1], vec![-1, 2]], vec![1, 1], [(1, 0)]).unwrap();
    let x = variable_along(a2.b_matrix(), &[1, 0]).unwrap();
    assert_eq!(x.d_vector(), vec![1, 1]);
}

#[test]
fn rank2_recurrence_values() {
    assert_eq!(rank2_variable(2, 3, 3).unwrap(), p("x1^-1 + x1^-1*x2^3"));
    let x4 = p("x1^2 + x2^6 + 1 + 2*x2^3").exact_div(&p("x1^2*x2")).unwrap();
    assert_eq!(rank2_variable(2, 3, 4).unwrap(), x4);
    let u = p("1 + x2^3");
    let num = &(&(&p("x1^6") + &(&p("3*x1^4") * &u)) + &(&p("3*x1^2") * &u.pow(3))) + &u.pow(5);
    assert_eq!(rank2_variable(2, 3, 5).unwrap(), num.exact_div(&p("x1^5*x2^3")).unwrap());
    assert_eq!(rank2_variable(2, 3, 0).unwrap(), p("x2^-1 + x1^2*x2^-1"));
}

#[test]
fn rank2_exchange_identity() {
    let one = LaurentPoly::one(2);
    for (b, c) in [(1, 4), (2, 2), (2, 3), (3, 2), (1, 5), (3, 3)] {
        let xs = rank2_variables(b, c, -6, 9).unwrap();
        for n in -5i64..9 {
            let e = if n.rem_euclid(2) == 1 { b } else { c };
            let lhs = &xs[&(n - 1)] * &xs[&(n + 1)];
            let rhs = &one + &xs[&n].pow(e as u32);
            assert_eq!(lhs, rhs, "(b,c)=({b},{c}), n={n}");
        }
    }
}

#[test]
fn rank2_recurrence_agrees_with_seed_mutation() {
    for (b, c) in [(2, 3), (1, 4), (2, 2)] {
        let bm = vec![vec![0, -b], vec![c, 0]];
        let xs = rank2_variables(b, c, -4, 8).unwrap();
        // x_{n+1} replaces the older of the two slots; alternate directions
        let mut path = Vec::new();
        for n in 3..=8 {
            path.push(if n % 2 == 1 { 0 } else { 1 });
            assert_eq!(variable_along(&bm, &path).unwrap(), xs[&n], "({b},{c}) n={n}");
        }
        let mut path = Vec::new();
        for n in (-4..=0).rev() {
            path.push(if n % 2 == 0 { 1 } else { 0 });
            assert_eq!(variable_along(&bm, &path).unwrap(), xs[&n], "({b},{c}) n={n}");
        }
    }
}

#[test]
fn a2_variables_match_the_classical_list() {
    let b = vec![vec![0, 1], vec![-1, 0]];
    let vars = enumerate_finite_type_variables(&b, DEFAULT_SEED_BUDGET, Exec::Sequential).unwrap();
    let expected: HashSet<LaurentPoly> = [
        "x1",
        "x2",
        "x1^-1 + x1^-1*x2",
        "x2^-1 + x1*x2^-1",
        "x1^-1*x2^-1 + x2^-1 + x1^-1",
    ]
    .iter()
    .map(|s| p(s))
    .collect();
    assert_eq!(vars.into_iter().collect::<HashSet<_>>(), expected);
}

#[test]
fn finite_type_counts() {
    let cases = [('A', 2, 5, 3), ('B', 2, 6, 4), ('G', 2, 8, 6), ('A', 3, 9, 6), ('B', 3, 12, 9), ('C', 3, 12, 9)];
    for (kind, n, total, non_init) in cases {
        let c = dynkin_cartan(kind, n).unwrap();
        let cd = CartanData::with_minimal_symmetrizer(c.clone(), preset_orientation(&c, OrientationPreset::Ascending)).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let vars = enumerate_finite_type_variables(cd.b_matrix(), DEFAULT_SEED_BUDGET, exec).unwrap();
            assert_eq!(vars.len(), total, "{kind}{n}");
            assert_eq!(non_initial(&vars).len(), non_init, "{kind}{n}");
        }
    }
    let g2 = vec![vec![0, -1], vec![3, 0]];
    let vars = enumerate_finite_type_variables(&g2, DEFAULT_SEED_BUDGET, Exec::Parallel).unwrap();
    assert_eq!((vars.len(), non_initial(&vars).len()), (8, 6));
}

#[test]
fn seed_budget_is_enforced() {
    assert_eq!(
        enumerate_finite_type_variables(&b23(), 10, Exec::Sequential),
        Err(ClusterError::EnumerationBudgetExceeded(10))
    );
}

#[test]
fn skew_symmetrizers() {
    assert_eq!(skew_symmetrizer(&b23()), Some(vec![3, 2]));
    assert_eq!(skew_symmetrizer(&vec![vec![0, 1], vec![1, 0]]), None);
}
