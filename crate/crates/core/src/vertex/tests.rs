use std::collections::BTreeMap;

use proptest::prelude::*;

use super::checks::jacobi_box;
use super::*;
use crate::corpus::{a3, a3_algebra, bump, trivial, truncated_poly};
use crate::exact::{rat, ratio, Poly, Rational};
use crate::report::WindowOverride;

const T0: usize = 0;
const T1: usize = 1;
const T2: usize = 2;

/// Elements of `Q[t]/(t^3)` as coefficient triples.
type El = [Rational; 3];

fn el(a: i64, b: i64, c: i64) -> El {
    [rat(a), rat(b), rat(c)]
}

fn el_mul(x: &El, y: &El) -> El {
    let mut out = el(0, 0, 0);
    for i in 0..3 {
        for j in 0..3 - i {
            out[i + j] += &x[i] * &y[j];
        }
    }
    out
}

/// `t^2 d/dt`: only the linear coefficient survives, landing on `t^2`.
fn el_d(x: &El) -> El {
    [rat(0), rat(0), x[1].clone()]
}

/// `u_n v` straight from the commutative formula.
fn oracle_mode(u: &El, n: i64, v: &El) -> El {
    if n >= 0 {
        return el(0, 0, 0);
    }
    let k = (-1 - n) as u32;
    let mut du = u.clone();
    let mut fact = rat(1);
    for s in 1..=k {
        du = el_d(&du);
        fact *= rat(s as i64);
    }
    let prod = el_mul(&du, v);
    [&prod[0] / &fact, &prod[1] / &fact, &prod[2] / &fact]
}

fn to_vec(x: &El) -> Vector {
    Vector::from_rationals(x.to_vec())
}

fn basis_el(i: usize) -> El {
    let mut x = el(0, 0, 0);
    x[i] = rat(1);
    x
}

fn none() -> WindowOverride {
    WindowOverride::none()
}

#[test]
fn a3_table_matches_oracle() {
    let v = a3();
    for i in 0..3 {
        for j in 0..3 {
            for n in -6..=3 {
                let want = to_vec(&oracle_mode(&basis_el(i), n, &basis_el(j)));
                let got = v.entry(i, n, j).cloned().unwrap_or_else(|| Vector::zero(3));
                assert_eq!(got, want, "({i},{n},{j})");
            }
        }
    }
    assert_eq!(v.table().len(), 7);
}

#[test]
fn vertex_coeff_examples() {
    let v = a3();
    let b = |i| v.basis(i);
    assert_eq!(v.vertex_coeff(&b(T1), -1, &b(T1)), b(T2));
    assert_eq!(v.vertex_coeff(&b(T1), -2, &b(T0)), b(T2));
    assert!(v.vertex_coeff(&b(T1), 0, &b(T1)).is_zero());
}

#[test]
fn apply_d_examples() {
    let v = a3();
    assert_eq!(v.apply_d(&v.basis(T1)), v.basis(T2));
    assert!(v.apply_d(&v.basis(T0)).is_zero());
    let vz = v.tensor_with_ox().unwrap();
    let ze0 = Vector::from_polys(vec![Poly::z(), Poly::zero(), Poly::zero()]);
    assert_eq!(vz.apply_d(&ze0), vz.basis(T0));
}

#[test]
fn truncation_examples() {
    let v = a3();
    let rep = v.check_truncation();
    assert!(rep.passed());
    assert_eq!(v.support_hull(), (-2, -1));
    assert!(v.declared_bounds().unwrap().values().all(|&(_, hi)| hi == -1));

    let stray = v.with_entry((T1, 0, T1), v.basis(T0)).unwrap();
    let rep = stray.check_truncation();
    let w = rep.witness().expect("stray entry is reported");
    assert_eq!(w.indices, vec![("n".to_string(), 0)]);
    assert_eq!(w.basis[0].1, "t");

    let empty = VAData::new(CoeffRing::Q, vec![], Derivation::zero(0), vec![], None).unwrap();
    for rep in empty.check_all(&none()) {
        assert!(rep.passed(), "{}", rep.summary_line());
    }
}

#[test]
fn d_derivative_examples() {
    let v = a3();
    // (Dt)_{-1} 1 = t^2 = -(-1) t_{-2} 1
    let lhs = v.vertex_coeff(&v.apply_d(&v.basis(T1)), -1, &v.basis(T0));
    assert_eq!(lhs, v.vertex_coeff(&v.basis(T1), -2, &v.basis(T0)));
    assert!(v.check_d_derivative(&none()).passed());

    let zeroed = v.with_derivation(Derivation::zero(3)).unwrap();
    let rep = zeroed.check_d_derivative(&none());
    let w = rep.witness().expect("zeroed D breaks the D-derivative property");
    assert_eq!(w.basis, vec![("u".into(), "t".into()), ("v".into(), "1".into())]);
}

#[test]
fn skew_examples() {
    let v = a3();
    let rep = v.check_skew_symmetry(&none());
    assert!(rep.passed(), "{}", rep.summary_line());
    // D^2 kills every value of A3, so the window reaches two below the support
    assert_eq!(rep.window[0].lo, -4);
    let bumped = bump(&v, (T1, -2, T0), 0);
    assert!(!bumped.check_skew_symmetry(&none()).passed());
}

#[test]
fn jacobi_examples() {
    let v = a3();
    let (t1, t2, t3) = jacobi_terms(&v, (T0, T1, T0), (-1, -1, -1));
    assert_eq!(t1, v.basis(T2));
    assert!(t2.is_zero());
    assert_eq!(t2.sub(&t3), v.basis(T2));
    let (t1, t2, t3) = jacobi_terms(&v, (T1, T1, T1), (-1, -1, -1));
    assert!(t1.is_zero() && t2.sub(&t3).is_zero());
    assert!(v.check_jacobi(&none()).passed());
    let rep = v.check_jacobi(&none());
    assert_eq!(rep.label, "jac-comp");
}

#[test]
fn every_unit_bump_is_detected() {
    let v = a3();
    for (key, m) in crate::corpus::unit_mutations(&v) {
        let (_, verdict) = va_checks(&m, &none());
        assert!(
            !(verdict.d_derivative && verdict.skew && verdict.jacobi),
            "mutation at {key:?} went unnoticed"
        );
    }
}

#[test]
fn scalar_bump_of_t_t_is_a_valid_algebra() {
    // t_{-1} t = 2 t^2 is the commutative vertex algebra of t * t = 2 t^2
    // with the same D, isomorphic to A3 after rescaling t.
    let v = a3();
    let m = v.with_entry((T1, -1, T1), v.basis(T2).scale(&rat(2))).unwrap();
    assert!(va_checks(&m, &none()).1.all());
    let mut alg = a3_algebra();
    alg.mult[1][1] = alg.mult[1][1].scale(&rat(2));
    assert_eq!(make_commutative_va(&alg).unwrap().table(), m.table());
}

#[test]
fn commutative_constructor_errors() {
    let mut alg = truncated_poly(3, &[rat(1)]);
    assert_eq!(make_commutative_va(&alg).unwrap_err(), Error::NotADerivation(1, 2));

    alg = a3_algebra();
    alg.mult[0][1] = Vector::zero(3);
    assert_eq!(make_commutative_va(&alg).unwrap_err(), Error::NotCommutative(0, 1));

    alg = a3_algebra();
    alg.mult[1][1] = alg.mult[1][1].scale(&rat(2));
    alg.mult[0][0] = Vector::basis(3, 1);
    assert!(matches!(
        make_commutative_va(&alg).unwrap_err(),
        Error::NotAssociative(..) | Error::NotCommutative(..)
    ));

    // D(1) = 1 on Q is not a derivation.
    let q = CommutativeAlgebra {
        basis_names: vec!["1".into()],
        mult: vec![vec![Vector::basis(1, 0)]],
        derivation: Derivation::new(vec![Vector::basis(1, 0)]),
    };
    assert_eq!(make_commutative_va(&q).unwrap_err(), Error::NotADerivation(0, 0));

    // The ideal (t) in Q[t]/(t^2) with D(t) = t: a derivation, not nilpotent.
    let ideal = CommutativeAlgebra {
        basis_names: vec!["t".into()],
        mult: vec![vec![Vector::zero(1)]],
        derivation: Derivation::new(vec![Vector::basis(1, 0)]),
    };
    assert!(matches!(make_commutative_va(&ideal).unwrap_err(), Error::NotNilpotent(_)));
}

#[test]
fn trivial_algebra() {
    let v = trivial();
    assert_eq!(v.table().len(), 1);
    assert_eq!(v.entry(0, -1, 0), Some(&v.basis(0)));
    assert!(va_checks(&v, &none()).1.all());
}

#[test]
fn tensor_with_ox_examples() {
    let v = a3().tensor_with_ox().unwrap();
    let zt = Vector::from_polys(vec![Poly::zero(), Poly::z(), Poly::zero()]);
    let z2t2 = Vector::from_polys(vec![Poly::zero(), Poly::zero(), Poly::from_ints(&[0, 0, 1])]);
    assert_eq!(v.vertex_coeff(&zt, -1, &zt), z2t2);
    assert!(va_checks(&v, &none()).1.all());
    assert!(v.tensor_with_ox().is_err());
}

#[test]
fn infinite_support_is_rejected() {
    // D rotating e0 and e1 is never nilpotent on a nonzero value.
    let d = Derivation::new(vec![Vector::from_ints(&[0, 1]), Vector::from_ints(&[1, 0])]);
    let err = VAData::new(
        CoeffRing::Q,
        VAData::default_names(2),
        d,
        vec![((0, -1, 0), Vector::from_ints(&[1, 0]))],
        None,
    )
    .unwrap_err();
    assert!(matches!(err, Error::InfiniteSupport { i: 0, n: -1, j: 0, .. }));
}

#[test]
fn change_basis_round_trip() {
    let v = a3();
    let m = QMatrix::from_rows(vec![
        vec![rat(1), rat(1), rat(0)],
        vec![rat(0), rat(2), rat(-1)],
        vec![rat(0), rat(0), ratio(1, 2)],
    ]);
    let w = v.change_basis(&m, VAData::default_names(3)).unwrap();
    assert!(va_checks(&w, &none()).1.all());
    let back = w
        .change_basis(&m.inverse().unwrap(), v.basis_names().to_vec())
        .unwrap();
    assert_eq!(back.table(), v.table());
    assert_eq!(back.derivation(), v.derivation());
}

#[test]
fn window_override_only_widens() {
    let v = a3();
    let rep = v.check_skew_symmetry(&WindowOverride::uniform(-1, 5));
    assert_eq!((rep.window[0].lo, rep.window[0].hi), (-4, 5));
    assert!(rep.passed());
    let rep = v.check_jacobi(&WindowOverride::uniform(-6, 6));
    assert!(rep.passed());
    assert_eq!(rep.window[2].lo, -6);
}

fn small_poly() -> impl Strategy<Value = Poly> {
    proptest::collection::vec(-3i64..=3, 0..=4).prop_map(|c| Poly::from_ints(&c))
}

fn qz_vec() -> impl Strategy<Value = Vector> {
    proptest::collection::vec(small_poly(), 3).prop_map(Vector::from_polys)
}

/// Random table of rank 2 with modes in `[-2, 0]`; `D = 0`.
fn random_table() -> impl Strategy<Value = VAData> {
    proptest::collection::btree_map((0usize..2, -2i64..=0, 0usize..2), (-2i64..=2, -2i64..=2), 1..6).prop_map(
        |m: BTreeMap<Key, (i64, i64)>| {
            VAData::new(
                CoeffRing::Q,
                VAData::default_names(2),
                Derivation::zero(2),
                m.into_iter().map(|(k, (a, b))| (k, Vector::from_ints(&[a, b]))),
                None,
            )
            .unwrap()
        },
    )
}

fn jac(v: &VAData, t: (usize, usize, usize), p: (i64, i64, i64)) -> Vector {
    let (t1, t2, t3) = jacobi_terms(v, t, p);
    t1.sub(&t2).sum(&t3)
}

proptest! {
    #[test]
    fn bilinear_over_qz(f in small_poly(), g in small_poly(), u in qz_vec(), w in qz_vec(), n in -3i64..=0) {
        let v = a3().tensor_with_ox().unwrap();
        let lhs = v.vertex_coeff(&u.mul_poly(&f), n, &w.mul_poly(&g));
        let rhs = v.vertex_coeff(&u, n, &w).mul_poly(&(&f * &g));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jacobi_defect_recursion(v in random_table(), l in -4i64..=3, m in -4i64..=3, n in -4i64..=3,
                               i in 0usize..2, j in 0usize..2, k in 0usize..2) {
        let t = (i, j, k);
        let lhs = jac(&v, t, (l + 1, m, n));
        let rhs = jac(&v, t, (l, m + 1, n)).sub(&jac(&v, t, (l, m, n + 1)));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Any Jacobi defect in a wide box already shows up in the swept box.
    #[test]
    fn swept_box_sees_every_defect(v in random_table()) {
        let (a, b) = v.support_hull();
        let [la, ma, na] = jacobi_box(a, b);
        let in_sweep = |p: (i64, i64, i64)| {
            let s = p.0 + p.1 + p.2;
            la.range().contains(&p.0) && ma.range().contains(&p.1) && na.range().contains(&p.2)
                && (2 * a..=2 * b).contains(&s)
        };
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let t = (i, j, k);
                    let mut wide = false;
                    let mut swept = false;
                    for l in -7..=5 {
                        for m in -7..=5 {
                            for n in -7..=5 {
                                if !jac(&v, t, (l, m, n)).is_zero() {
                                    wide = true;
                                    swept |= in_sweep((l, m, n));
                                }
                            }
                        }
                    }
                    prop_assert!(!wide || swept, "defect outside the swept box for {:?}", t);
                }
            }
        }
    }
}
