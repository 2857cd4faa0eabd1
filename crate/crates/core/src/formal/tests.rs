use std::collections::BTreeMap;

use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::exact::{binom, rat, sign_pow};

const XYZ: [Var; 3] = [Var::X0, Var::X1, Var::X2];

fn e3(a: i64, b: i64, c: i64) -> Exponent {
    [a, b, c]
}

fn e12(a: i64, b: i64) -> Exponent {
    [0, a, b]
}

fn bx12(lo: i64, hi: i64) -> ExponentBox {
    ExponentBox::cube(&[Var::X1, Var::X2], lo, hi).unwrap()
}

/// Independent oracle: generates the terms of a series by running over
/// the summation indices and keeps those landing in the box.
struct Oracle {
    bx: ExponentBox,
    terms: BTreeMap<Exponent, Rational>,
}

impl Oracle {
    fn new(bx: &ExponentBox) -> Self {
        Oracle {
            bx: bx.clone(),
            terms: BTreeMap::new(),
        }
    }

    fn add(&mut self, e: Exponent, c: Rational) {
        if self.bx.contains(&e) {
            *self.terms.entry(e).or_insert_with(Rational::zero) += c;
        }
    }

    fn window(self) -> LaurentWindow {
        LaurentWindow::from_terms(self.bx, self.terms).unwrap()
    }
}

/// `x0^-1 delta((x1 - x2)/x0)` by summing `(x1-x2)^n x0^(-n-1)` over a
/// range of `n` wide enough to cover the box. With `flipped`, it is
/// `x0^-1 delta((x2 - x1)/(-x0))` instead.
fn oracle_delta_x0(bx: &ExponentBox, flipped: bool, r: i64) -> LaurentWindow {
    let mut o = Oracle::new(bx);
    for n in -r..=r {
        for m in 0..=2 * r {
            let c = binom(n, m as u32) * sign_pow(m);
            if flipped {
                // (x2 - x1)^n (-x0)^(-n) x0^-1
                o.add(e3(-n - 1, m, n - m), c * sign_pow(n));
            } else {
                o.add(e3(-n - 1, n - m, m), c);
            }
        }
    }
    o.window()
}

#[test]
fn iota_examples() {
    let bx = bx12(-3, 3);
    let w = iota_expand(Var::X1, Var::X2, 2, &bx).unwrap();
    assert_eq!(w.coeff(&e12(2, 0)), Some(rat(1)));
    assert_eq!(w.coeff(&e12(1, 1)), Some(rat(-2)));
    assert_eq!(w.coeff(&e12(0, 2)), Some(rat(1)));
    assert_eq!(w.terms().count(), 3);

    let w = iota_expand(Var::X1, Var::X2, -1, &bx).unwrap();
    for m in 0..=2 {
        assert_eq!(w.coeff(&e12(-1 - m, m)), Some(rat(1)));
    }
    assert_eq!(w.terms().count(), 3);

    let w = iota_expand(Var::X2, Var::X1, -1, &bx).unwrap();
    for b in -3..=3 {
        assert_eq!(w.coeff(&e12(-1, b)), Some(rat(0)));
    }
    assert!(w.terms().all(|(e, _)| e[1] >= 0));
}

#[test]
fn untracked_outside_box() {
    let w = iota_expand(Var::X1, Var::X2, -1, &bx12(-3, 3)).unwrap();
    assert_eq!(w.coeff(&e12(-10, 9)), None);
}

#[test]
fn expand_examples() {
    let e = parse_expr("delta(x1/x2) * x2^-1").unwrap();
    let w = expand(&e, &bx12(-5, 5)).unwrap();
    assert_eq!(w.coeff(&e12(3, -4)), Some(rat(1)));
    assert_eq!(w.coeff(&e12(3, -3)), Some(rat(0)));

    let cube = ExponentBox::cube(&XYZ, -3, 3).unwrap();
    let e = parse_expr("x0^-1 * delta((x1-x2)/x0)").unwrap();
    assert_eq!(expand(&e, &cube).unwrap().coeff(&e3(-1, 0, 0)), Some(rat(1)));

    let e = parse_expr("x2^-1 * delta((x1-x0)/x2)").unwrap();
    let w = expand(&e, &cube).unwrap();
    // n = -1, m = 0 term of sum_n (x1-x0)^n x2^(-n-1)
    assert_eq!(w.coeff(&e3(0, -1, 0)), Some(rat(1)));
    let mut o = Oracle::new(&cube);
    for n in -8..=8i64 {
        for m in 0..=8i64 {
            o.add(e3(m, n - m, -n - 1), binom(n, m as u32) * sign_pow(m));
        }
    }
    assert_eq!(w, o.window());
}

#[test]
fn expand_matches_generating_oracle() {
    let cube = ExponentBox::cube(&XYZ, -4, 4).unwrap();
    let cases = [
        ("x0^-1 * delta((x1-x2)/x0)", false),
        ("x0^-1 * delta((x2-x1)/(-x0))", true),
    ];
    for (src, flipped) in cases {
        let w = expand(&parse_expr(src).unwrap(), &cube).unwrap();
        assert_eq!(w, oracle_delta_x0(&cube, flipped, 12), "{src}");
    }
}

#[test]
fn identity_examples() {
    for id in suite::STANDARD {
        let rep = id.check(5).unwrap();
        assert!(rep.passed(), "{}", rep.summary_line());
    }
    let rep = check_identity(
        "negative control",
        &parse_expr("delta(x1/x2) * x2^-1").unwrap(),
        &DeltaExpr::zero(),
        &bx12(-3, 3),
    )
    .unwrap();
    assert!(!rep.passed());
    assert!(rep.mismatches.iter().any(|m| m.exponent == e12(0, -1)));
    assert_eq!(rep.first_mismatch().unwrap().exponent, e12(-3, 2));
}

#[test]
fn substitution_needs_the_delta() {
    let rep = suite::SUBSTITUTION_WITHOUT_DELTA.check(4).unwrap();
    assert!(!rep.passed());
    let all = suite::run(4).unwrap();
    assert!(all.iter().all(IdentityReport::passed));
    assert!(all[0].note.as_deref().unwrap().contains("required"));
}

#[test]
fn fundamental_property_examples() {
    let bx = bx12(-4, 4);
    for terms in [
        vec![(e12(1, 0), rat(1)), (e12(0, 1), rat(-1))],
        vec![(e12(0, 0), rat(1))],
        vec![(e12(1, 1), rat(1))],
    ] {
        let x = LaurentWindow::from_terms(bx.clone(), terms).unwrap();
        let rep = fundamental_delta_property(&x, SupportAssertion::Finite, &bx).unwrap();
        assert!(rep.passed(), "{}", rep.summary_line());
    }
    // x1 - x2 kills the delta: both sides vanish
    let x = LaurentWindow::from_terms(bx.clone(), vec![(e12(1, 0), rat(1)), (e12(0, 1), rat(-1))]).unwrap();
    let lhs = DeltaExpr::product(vec![
        parse_expr("x1 - x2").unwrap(),
        parse_expr("delta(x1/x2)").unwrap(),
    ]);
    assert_eq!(expand(&lhs, &bx).unwrap().terms().count(), 0);
    assert_eq!(
        fundamental_delta_property(&x, SupportAssertion::Windowed, &bx).unwrap_err(),
        Error::UnsupportedInput("the limit x1 -> x2 needs a Laurent polynomial; assert finite support".into())
    );
}

#[test]
fn x1x2_equals_x2_squared_against_delta() {
    let bx = bx12(-5, 5);
    let a = expand(&parse_expr("x1 * x2 * delta(x1/x2)").unwrap(), &bx).unwrap();
    let b = expand(&parse_expr("x2^2 * delta(x1/x2)").unwrap(), &bx).unwrap();
    assert_eq!(a, b);
    let mut o = Oracle::new(&bx);
    for n in -20..=20 {
        o.add(e12(n, 2 - n), rat(1));
    }
    assert_eq!(a, o.window());
}

#[test]
fn product_errors() {
    let bx = bx12(-2, 2);
    let two = parse_expr("delta(x1/x2) * delta(x1/x2)");
    assert_eq!(two.unwrap_err(), Error::IllFormedProduct);
    let e = DeltaExpr::product(vec![
        parse_expr("delta(x1/x2)").unwrap(),
        parse_expr("(x1-x2)^-1").unwrap(),
    ]);
    assert!(matches!(expand(&e, &bx), Err(Error::UnsupportedProduct(_))));
    let e = DeltaExpr::product(vec![
        parse_expr("(x1-x2)^-1").unwrap(),
        parse_expr("(x2-x1)^-1").unwrap(),
    ]);
    assert!(matches!(expand(&e, &bx), Err(Error::UnsupportedProduct(_))));
}

#[test]
fn parse_errors_carry_positions() {
    match parse_expr("x1 * \n  delta(x1 x2)") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 12)),
        other => panic!("{other:?}"),
    }
    match parse_expr("x3") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 1)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_expr("(x1*x2)^2"), Err(Error::Parse { .. })));
    assert!(matches!(parse_expr("delta(x1/x1)"), Err(Error::Parse { .. })));
    assert!(matches!(parse_expr("x1 )"), Err(Error::Parse { .. })));
}

#[test]
fn parse_keeps_written_order() {
    let bx = bx12(-3, 3);
    let a = expand(&parse_expr("(x2 - x1)^-1").unwrap(), &bx).unwrap();
    let b = iota_expand(Var::X2, Var::X1, -1, &bx).unwrap();
    assert_eq!(a, b);
    let c = expand(&parse_expr("-(x1 - x2)^-1").unwrap(), &bx).unwrap();
    assert_ne!(a, c);
    let q = expand(&parse_expr("3/4 * x1^2 - x2").unwrap(), &bx).unwrap();
    assert_eq!(q.coeff(&e12(2, 0)), Some(crate::exact::ratio(3, 4)));
    assert_eq!(q.coeff(&e12(0, 1)), Some(rat(-1)));
}

#[test]
fn box_validation() {
    assert!(ExponentBox::new(&[(Var::X1, 2, 1)]).is_err());
    assert!(ExponentBox::new(&[(Var::X1, 0, 1), (Var::X1, 0, 1)]).is_err());
    let bx = bx12(0, 1);
    assert!(LaurentWindow::from_terms(bx, vec![(e12(2, 0), rat(1))]).is_err());
}

proptest! {
    #[test]
    fn iota_agrees_with_binomial_theorem(n in 0i64..=6, lo in -8i64..=0) {
        let bx = bx12(lo, 8);
        let w = iota_expand(Var::X1, Var::X2, n, &bx).unwrap();
        let mut o = Oracle::new(&bx);
        for m in 0..=n {
            o.add(e12(n - m, m), binom(n, m as u32) * sign_pow(m));
        }
        prop_assert_eq!(w, o.window());
    }

    #[test]
    fn iota_inverse_powers_cancel(n in -4i64..=4, lo in -6i64..=-1, hi in 1i64..=6) {
        let bx = bx12(lo, hi);
        let b = Binomial::difference(Var::X1, Var::X2).unwrap();
        let e = DeltaExpr::product(vec![DeltaExpr::iota(b, n), DeltaExpr::iota(b, -n)]);
        let w = expand(&e, &bx).unwrap();
        let one = LaurentWindow::from_terms(bx, vec![(e12(0, 0), Rational::one())]).unwrap();
        prop_assert_eq!(w, one);
    }

    #[test]
    fn fundamental_property_random(terms in proptest::collection::vec(((-3i64..=3, -3i64..=3), -5i64..=5), 0..6)) {
        let bx = bx12(-6, 6);
        let x = LaurentWindow::from_terms(bx.clone(), terms.into_iter().map(|((a, b), c)| (e12(a, b), rat(c)))).unwrap();
        let rep = fundamental_delta_property(&x, SupportAssertion::Finite, &bx).unwrap();
        prop_assert!(rep.passed());
    }
}
