use vachi::formal::suite::{self, SUBSTITUTION_WITHOUT_DELTA};
use vachi::formal::{fundamental_delta_property, ExponentBox, LaurentWindow, SupportAssertion, Var};
use vachi::exact::rat;

#[test]
fn standard_identities_hold_on_the_cube() {
    let reports = suite::run(6).unwrap();
    assert_eq!(reports.len(), 3);
    for r in &reports {
        assert!(r.passed(), "{}", r.summary_line());
    }
    assert!(!SUBSTITUTION_WITHOUT_DELTA.check(6).unwrap().passed());
}

#[test]
fn fundamental_property_on_a_fixed_polynomial() {
    let xb = ExponentBox::new(&[(Var::X1, -2, 2), (Var::X2, -2, 2)]).unwrap();
    let x = LaurentWindow::from_terms(xb, [([0, 2, -1], rat(3)), ([0, -1, 0], rat(-2)), ([0, 0, 0], rat(1))]).unwrap();
    let bx = ExponentBox::cube(&[Var::X1, Var::X2], -6, 6).unwrap();
    let rep = fundamental_delta_property(&x, SupportAssertion::Finite, &bx).unwrap();
    assert!(rep.passed(), "{}", rep.summary_line());
    assert!(fundamental_delta_property(&x, SupportAssertion::Windowed, &bx).is_err());
}
