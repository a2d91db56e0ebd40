use std::collections::BTreeMap;

use lfcc_core::laurent::{LaurentError, LaurentPoly};
use malachite::num::arithmetic::traits::Pow;
use malachite::Integer;

fn p(s: &str, n: usize) -> LaurentPoly {
    LaurentPoly::parse(s, n).unwrap()
}

#[test]
fn additive_inverse_and_unit_monomial() {
    let x1 = LaurentPoly::var(2, 0);
    assert!((&x1 - &x1).is_zero());
    let inv = p("x1^-1", 2);
    assert!((&inv * &x1).is_one());
}

#[test]
fn binomial_square() {
    let f = p("1 + x2", 2).pow(2);
    assert_eq!(f, p("1 + 2*x2 + x2^2", 2));
    assert_eq!(f.pow(0), LaurentPoly::one(2));
}

#[test]
fn exact_division_by_monomial_and_square() {
    let q = p("1 + x2^3", 2).exact_div(&LaurentPoly::var(2, 0)).unwrap();
    assert_eq!(q.to_string(), "x1^-1 + x1^-1*x2^3");
    let q = p("1 + 2*x1 + x1^2", 1).exact_div(&p("1 + x1", 1)).unwrap();
    assert_eq!(q, p("1 + x1", 1));
}

#[test]
fn inexact_division_is_reported() {
    let f = p("x1^2 + x2^6 + 1 + 2*x2^3", 2);
    let g = p("1 + x2^3", 2);
    assert_eq!(f.exact_div(&g), Err(LaurentError::NonExactDivision));
    assert_eq!(f.exact_div(&LaurentPoly::zero(2)), Err(LaurentError::DivisionByZero));
}

#[test]
fn division_with_negative_exponents() {
    let f = p("x1^-3*x2 + 7*x2^-2 - x1*x2^4", 2);
    let g = p("x1^-1 - 2*x2^2 + x1*x2^-1", 2);
    let prod = &f * &g;
    assert_eq!(prod.exact_div(&g).unwrap(), f);
    assert_eq!(prod.exact_div(&f).unwrap(), g);
}

#[test]
fn substitution() {
    let x1 = LaurentPoly::var(3, 0);
    let subs = BTreeMap::from([(0, (p("1 + x2^3", 3), LaurentPoly::var(3, 2)))]);
    let out = x1.subst_frac(&subs).unwrap();
    assert_eq!(out, p("x3^-1 + x2^3*x3^-1", 3));

    let one = &x1 * &p("x1^-1", 3);
    assert!(one.subst_frac(&subs).unwrap().is_one());
}

#[test]
fn non_laurent_substitution_fails() {
    let f = p("x1^-1", 2);
    let subs = BTreeMap::from([(0, (p("1 + x2", 2), LaurentPoly::one(2)))]);
    assert_eq!(f.subst_frac(&subs), Err(LaurentError::NonLaurentResult));
}

#[test]
fn canonical_strings() {
    assert_eq!(LaurentPoly::zero(2).to_string(), "0");
    assert_eq!(p("x1^-1*x2^3 + x1^-1", 2).to_string(), "x1^-1 + x1^-1*x2^3");
    assert_eq!(p("1 + y2", 2).to_string_with('y'), "1 + y2");
    assert_eq!(p("-3*x1 + 2 - x2^-1", 2).to_string(), "-x2^-1 + 2 - 3*x1");
}

#[test]
fn canonical_string_round_trip() {
    for s in ["0", "1", "-x1^-2*x2^5 + 12345678901234567890123*x2", "x1^-1 + x1^-1*x2^3"] {
        let f = p(s, 2);
        assert_eq!(p(&f.to_string(), 2), f);
    }
}

#[test]
fn parse_errors() {
    assert!(matches!(LaurentPoly::parse("x3", 2), Err(LaurentError::Parse { .. })));
    assert!(matches!(LaurentPoly::parse("1 +", 2), Err(LaurentError::Parse { .. })));
    assert!(matches!(LaurentPoly::parse("x1^", 2), Err(LaurentError::Parse { .. })));
}

#[test]
fn d_vectors() {
    assert_eq!(LaurentPoly::var(2, 0).d_vector(), vec![-1, 0]);
    // x_4 and x_5 of the (2,3) recurrence, written out by hand
    let x4 = p("x1^-2*x2^-1 + x2^-1 + 2*x1^-2*x2^2 + x1^-2*x2^5", 2);
    assert_eq!(x4.d_vector(), vec![2, 1]);
    let inner = p("1 + x2^3", 2);
    let x5_num = &(&(&p("x1^6", 2) + &(&p("3*x1^4", 2) * &inner))
        + &(&p("3*x1^2", 2) * &inner.pow(3)))
        + &inner.pow(5);
    let x5 = x5_num.exact_div(&p("x1^5*x2^3", 2)).unwrap();
    assert_eq!(x5.d_vector(), vec![5, 3]);
}

#[test]
fn big_coefficients_do_not_overflow() {
    let f = p("1 + 3*x1 + x2^-1", 2).pow(60);
    let top = f.coeff(&[60, 0]);
    assert_eq!(top, Integer::from(3u32).pow(60));
    assert_eq!(f.exact_div(&p("1 + 3*x1 + x2^-1", 2).pow(59)).unwrap(), p("1 + 3*x1 + x2^-1", 2));
}
