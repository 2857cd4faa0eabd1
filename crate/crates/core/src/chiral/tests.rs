use proptest::prelude::*;

use super::*;
use crate::corpus::{a3, random_corpus};
use crate::exact::{binom, factorial, rat, Poly, Rational};
use crate::report::WindowOverride;
use crate::vertex::VAData;

const ONE: usize = 0;
const T: usize = 1;
const T2: usize = 2;

/// Elements of `Q[t]/(t^3)` as coefficient triples.
type El = [Rational; 3];

fn el_mul(x: &El, y: &El) -> El {
    let mut out = [rat(0), rat(0), rat(0)];
    for i in 0..3 {
        for j in 0..3 - i {
            out[i + j] += &x[i] * &y[j];
        }
    }
    out
}

fn el_d(x: &El) -> El {
    [rat(0), rat(0), x[1].clone()]
}

fn el_of(v: &Vector) -> El {
    [v.coord(0).coeff(0), v.coord(1).coeff(0), v.coord(2).coeff(0)]
}

fn to_vec(x: &El) -> Vector {
    Vector::from_rationals(x.to_vec())
}

/// `u_p v = D^(-1-p) u / (-1-p)! * v` in `A3`.
fn oracle_mode(u: &El, p: i64, v: &El) -> El {
    if p >= 0 {
        return [rat(0), rat(0), rat(0)];
    }
    let k = (-1 - p) as u32;
    let mut du = u.clone();
    for _ in 0..k {
        du = el_d(&du);
    }
    let f = Rational::from_integer(factorial(k));
    el_mul(&du, v).map(|c| c / &f)
}

/// `B^n_m(u, v) = (-1)^m / m! u_{n+m} v`.
fn oracle_b(u: &El, n: i64, m: u32, v: &El) -> El {
    let c = sign(m as i64) / Rational::from_integer(factorial(m));
    oracle_mode(u, n + m as i64, v).map(|x| x * &c)
}

fn sign(n: i64) -> Rational {
    if n.rem_euclid(2) == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

fn basis_el(i: usize) -> El {
    let mut x = [rat(0), rat(0), rat(0)];
    x[i] = rat(1);
    x
}

/// Closed-form data with `m = 0` layer the vertex-algebra table.
fn from_va(va: &VAData) -> ChiralData {
    ChiralData::new(
        va.basis_names().to_vec(),
        va.derivation().clone(),
        va.table().iter().map(|(k, v)| (*k, v.clone())),
        std::iter::empty(),
        va.declared_bounds().cloned(),
    )
    .unwrap()
}

fn a3c() -> ChiralData {
    from_va(&a3())
}

fn b(i: usize) -> Vector {
    Vector::basis(3, i)
}

fn sec(layers: &[(u32, Vector)]) -> DiagSection {
    DiagSection::from_layers(3, layers.iter().cloned())
}

fn v(c: &[i64]) -> Vector {
    Vector::from_ints(c)
}

fn none() -> WindowOverride {
    WindowOverride::none()
}

#[test]
fn mu_eval_examples() {
    let a = a3c();
    let g = ChiralGenerator::new(-2, b(T), b(ONE));
    assert_eq!(a.mu_eval(&g), sec(&[(0, b(T2)), (1, b(T).neg())]));
    assert!(a.mu_eval(&ChiralGenerator::new(0, b(T), b(T))).is_zero());
    assert_eq!(a.mu_eval(&ChiralGenerator::new(-1, b(T), b(T))), sec(&[(0, b(T2))]));
}

#[test]
fn b_family_matches_oracle() {
    let a = a3c();
    for i in 0..3 {
        for j in 0..3 {
            for n in -6..=2 {
                for m in 0..8 {
                    let want = to_vec(&oracle_b(&basis_el(i), n, m, &basis_el(j)));
                    assert_eq!(a.b(i, j, n, m), want, "({i},{j},{n},{m})");
                }
            }
        }
    }
}

#[test]
fn diag_op_examples() {
    let a = v(&[1, 2, 0]);
    assert_eq!(diag_mul_z12(&sec(&[(1, a.clone())])), sec(&[(0, a.neg())]));
    assert!(diag_mul_z12(&sec(&[(0, a.clone())])).is_zero());
    assert_eq!(diag_mul_z12(&sec(&[(2, a.clone())])), sec(&[(1, a.scale(&rat(-2)))]));

    assert_eq!(diag_apply_d1(&sec(&[(0, a.clone())])), sec(&[(1, a.clone())]));
    assert!(diag_apply_d1(&DiagSection::zero(3)).is_zero());
    let c = v(&[0, 0, 5]);
    assert_eq!(
        diag_apply_d1(&sec(&[(0, a.clone()), (1, c.clone())])),
        sec(&[(1, a.clone()), (2, c)])
    );

    let d = a3().derivation().clone();
    assert_eq!(
        diag_apply_d2(&sec(&[(0, a.clone())]), &d),
        sec(&[(0, d.apply(&a)), (1, a.neg())])
    );
    assert_eq!(diag_apply_d2(&sec(&[(0, b(ONE))]), &d), sec(&[(1, b(ONE).neg())]));
}

#[test]
fn diag_sections_drop_zero_layers() {
    let a = v(&[1, 0, 0]);
    let s = sec(&[(0, a.clone()), (0, a.neg()), (3, Vector::zero(3))]);
    assert!(s.is_zero());
    assert_eq!(s, DiagSection::zero(3));
}

#[test]
fn dmodule_passes_on_a3() {
    let reports = a3c().check_dmodule_morphism(&none());
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
    assert_eq!(reports[0].window[0].lo, -4);
    assert_eq!(reports[0].window[0].hi, 0);
}

#[test]
fn bumped_layer_breaks_recursion() {
    let a = a3c().with_correction((T, ONE, -1, 1), &b(ONE)).unwrap();
    assert!(!a.is_closed_form());
    let reports = a.check_dmodule_morphism(&none());
    assert!(!reports[0].passed());
    assert_eq!(reports[0].label, "expl-exp4");
}

#[test]
fn rank_zero_passes_vacuously() {
    let a = ChiralData::new(vec![], Derivation::zero(0), [], [], None).unwrap();
    let (reports, verdicts) = chiral_checks(&a, &none());
    assert!(verdicts.all());
    assert_eq!(reports.len(), 5);
}

#[test]
fn skew_passes_on_a3() {
    let a = a3c();
    let rep = a.check_chiral_skew(&none());
    assert!(rep.passed(), "{rep}");
    assert_eq!(rep.window[0].lo, -2 - 2 - 1);
}

#[test]
fn skew_example_t_one() {
    let a = a3c();
    // B^{-2}_0(1, t) = 0 and B^{-2}_1(1, t) = -t, so the swapped side is
    // d2 of {0: -t}.
    assert_eq!(a.b(ONE, T, -2, 0), Vector::zero(3));
    assert_eq!(a.b(ONE, T, -2, 1), b(T).neg());
    let swapped = a.mu_swapped(-2, &b(T), &b(ONE));
    assert_eq!(swapped, sec(&[(0, b(T2).neg()), (1, b(T))]));
    assert_eq!(swapped, a.mu(-2, &b(T), &b(ONE)).scale(&rat(-1)));
    // the m = 0 extraction
    let mut ext = Vector::zero(3);
    for k in 0..3 {
        ext.add_assign(&a.derivation().apply_pow(&a.b(ONE, T, -2, k), k));
    }
    assert_eq!(ext.scale(&rat(-1)), a.b(T, ONE, -2, 0));
}

#[test]
fn negated_pair_fails_skew() {
    let a = a3c().with_pair_negated(T, ONE);
    let rep = a.check_chiral_skew(&none());
    assert!(!rep.passed());
    let w = rep.witness().unwrap();
    assert_eq!(w.basis[0].1, "1");
    assert_eq!(w.basis[1].1, "t");
}

#[test]
fn compose_examples() {
    let a = a3c();
    let left = compose_left(&a, -1, -1, -1, &b(ONE), &b(T), &b(ONE));
    assert_eq!(left.layer(0, 0), b(T2));
    let right = compose_right(&a, -1, -1, -1, &b(ONE), &b(T), &b(ONE));
    assert_eq!(right.layer(0, 0), Vector::zero(3));
    let (sign, p1, p2, p3, su, sv, sw) = sigma12_triple(-1, -1, -1, &b(ONE), &b(T), &b(ONE));
    assert_eq!(sign, rat(-1));
    let swapped = compose_right(&a, p1, p2, p3, &su, &sv, &sw);
    assert_eq!(swapped.layer(0, 0), b(T2));
    // t^2 = 0 - (-1) t^2
    assert_eq!(left, right.sub(&swapped.transpose().scale(&sign)));
}

#[test]
fn compose_vanishes_above_band() {
    let a = a3c();
    let (_, hi) = a.band();
    for m in hi + 1..hi + 4 {
        for i in 0..3 {
            for j in 0..3 {
                assert!(compose_left(&a, m, m, m, &b(i), &b(j), &b(T)).is_zero());
                assert!(compose_right(&a, m, m, m, &b(i), &b(j), &b(T)).is_zero());
            }
        }
    }
}

#[test]
fn sigma12_examples() {
    let (u, w, x) = (b(ONE), b(T), b(T2));
    let (s, m1, m2, m3, a, bb, c) = sigma12_triple(-1, -1, -1, &u, &w, &x);
    assert_eq!((s, m1, m2, m3), (rat(-1), -1, -1, -1));
    assert_eq!((a, bb, c.clone()), (w.clone(), u.clone(), x.clone()));
    assert_eq!(sigma12_triple(0, 3, -2, &u, &w, &x).0, rat(1));
    let (s1, n1, n2, n3, a1, b1, c1) = sigma12_triple(3, 1, -2, &u, &w, &x);
    let (s2, q1, q2, q3, a2, b2, c2) = sigma12_triple(n1, n2, n3, &a1, &b1, &c1);
    assert_eq!(s1 * s2, rat(1));
    assert_eq!((q1, q2, q3), (3, 1, -2));
    assert_eq!((a2, b2, c2), (u, w, x));
}

/// Layer `(k, l)` of `mu(mu(u, v), w)` straight from the modes:
/// `(-1)^(k+l)/(k! l!) sum_i C(m3+k, i) (u_{m1+i} v)_{m2+m3+k+l-i} w`.
fn oracle_left(m: (i64, i64, i64), u: &El, v: &El, w: &El, k: u32, l: u32) -> El {
    let (m1, m2, m3) = m;
    let mut out = [rat(0), rat(0), rat(0)];
    // u_{m1+i} v = 0 once m1 + i >= 0
    for i in 0..(-m1).max(0) as u32 {
        let c = binom(m3 + k as i64, i);
        let inner = oracle_mode(u, m1 + i as i64, v);
        let term = oracle_mode(&inner, m2 + m3 + (k + l) as i64 - i as i64, w);
        for s in 0..3 {
            out[s] += &c * &term[s];
        }
    }
    let f = sign((k + l) as i64) / Rational::from_integer(factorial(k) * factorial(l));
    out.map(|x| x * &f)
}

/// Layer `(k, l)` of `mu(u, mu(v, w))`.
fn oracle_right(m: (i64, i64, i64), u: &El, v: &El, w: &El, k: u32, l: u32) -> El {
    let (m1, m2, m3) = m;
    let mut out = [rat(0), rat(0), rat(0)];
    for i in 0..(-m2 - l as i64).max(0) as u32 {
        let c = sign(i as i64) * binom(m1, i);
        let inner = oracle_mode(v, m2 + i as i64 + l as i64, w);
        let term = oracle_mode(u, m1 + m3 - i as i64 + k as i64, &inner);
        for s in 0..3 {
            out[s] += &c * &term[s];
        }
    }
    let f = sign((k + l) as i64) / Rational::from_integer(factorial(k) * factorial(l));
    out.map(|x| x * &f)
}

#[test]
fn compositions_match_mode_oracle() {
    let a = a3c();
    for m1 in -3..=1 {
        for m2 in -3..=1 {
            for m3 in -3..=1 {
                for i in 0..3 {
                    for j in 0..3 {
                        for k in 0..3 {
                            let (x, y, z) = (basis_el(i), basis_el(j), basis_el(k));
                            let left = compose_left(&a, m1, m2, m3, &b(i), &b(j), &b(k));
                            let right = compose_right(&a, m1, m2, m3, &b(i), &b(j), &b(k));
                            for p in 0..8 {
                                for q in 0..8 {
                                    let want = oracle_left((m1, m2, m3), &x, &y, &z, p, q);
                                    assert_eq!(el_of(&left.layer(p, q)), want, "left {m1} {m2} {m3} {i}{j}{k} ({p},{q})");
                                    let want = oracle_right((m1, m2, m3), &x, &y, &z, p, q);
                                    assert_eq!(el_of(&right.layer(p, q)), want, "right {m1} {m2} {m3} {i}{j}{k} ({p},{q})");
                                }
                            }
                            assert!(left.layers().keys().all(|&(p, q)| p < 8 && q < 8));
                            assert!(right.layers().keys().all(|&(p, q)| p < 8 && q < 8));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn jacobi_passes_on_a3() {
    let rep = a3c().check_chiral_jacobi(&none());
    assert!(rep.passed(), "{rep}");
    assert_eq!(rep.label, "operad1/operad2");
}

#[test]
fn mutated_family_fails_jacobi() {
    let va = crate::corpus::bump(&a3(), (T, -1, T), 0);
    let rep = from_va(&va).check_chiral_jacobi(&none());
    assert!(!rep.passed());
}

#[test]
fn all_checks_pass_on_random_corpus() {
    for (name, va) in random_corpus(11, 4) {
        let (reports, verdicts) = chiral_checks(&from_va(&va), &none());
        assert!(verdicts.all(), "{name}: {reports:?}");
    }
}

#[test]
fn explicit_only_data_is_never_closed() {
    let a = ChiralData::from_explicit(
        vec!["x".into()],
        Derivation::zero(1),
        [((0, 0, -1, 0), Vector::from_ints(&[1]))],
        None,
    )
    .unwrap();
    let (_, verdicts) = chiral_checks(&a, &none());
    assert!(!verdicts.recursion);
}

#[test]
fn non_nilpotent_values_are_rejected() {
    // D = d/dz on Q[z] is nilpotent on each polynomial, but D e0 = e0 is not
    let d = Derivation::new(vec![Vector::from_ints(&[1])]);
    let err = ChiralData::new(vec!["x".into()], d, [((0, -1, 0), Vector::from_ints(&[1]))], [], None);
    assert!(matches!(err, Err(crate::Error::InfiniteSupport { .. })));
}

#[test]
fn polynomial_coefficients_extend_bilinearly() {
    let a = a3c();
    let z = Poly::z();
    let u = b(T).mul_poly(&z);
    let w = b(ONE).mul_poly(&(&z * &z));
    let got = a.mu(-2, &u, &w);
    let want = a.mu(-2, &b(T), &b(ONE)).layers().iter().fold(DiagSection::zero(3), |acc, (&k, x)| {
        acc.add(&DiagSection::from_layers(3, [(k, x.mul_poly(&(&z * &(&z * &z))))]))
    });
    assert_eq!(got, want);
}

fn arb_vec() -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i64..=3, 3).prop_map(|c| Vector::from_ints(&c))
}

fn arb_section() -> impl Strategy<Value = DiagSection> {
    prop::collection::vec((0u32..5, arb_vec()), 0..5).prop_map(|ls| DiagSection::from_layers(3, ls))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d1_z12_bracket_is_identity(s in arb_section()) {
        let lhs = s.mul_z12().apply_d1().sub(&s.apply_d1().mul_z12());
        prop_assert_eq!(lhs, s);
    }

    #[test]
    fn d1_plus_d2_is_d(s in arb_section()) {
        let d = a3().derivation().clone();
        prop_assert_eq!(s.apply_d1().add(&s.apply_d2(&d)), s.apply_d_layerwise(&d));
    }

    #[test]
    fn d2_is_additive(s in arb_section(), t in arb_section()) {
        let d = a3().derivation().clone();
        prop_assert_eq!(s.add(&t).apply_d2(&d), s.apply_d2(&d).add(&t.apply_d2(&d)));
    }

    #[test]
    fn compositions_are_trilinear(
        u in arb_vec(), v in arb_vec(), w in arb_vec(), w2 in arb_vec(),
        c in -3i64..=3, m in (-3i64..=0, -3i64..=0, -3i64..=0),
    ) {
        let a = a3c();
        let (m1, m2, m3) = m;
        let ws = w.scale(&rat(c)).sum(&w2);
        for f in [compose_left, compose_right] {
            let lhs = f(&a, m1, m2, m3, &u, &v, &ws);
            let rhs = f(&a, m1, m2, m3, &u, &v, &w).scale(&rat(c)).add(&f(&a, m1, m2, m3, &u, &v, &w2));
            prop_assert_eq!(lhs, rhs);
            let us = u.scale(&rat(c));
            let lhs = f(&a, m1, m2, m3, &us, &v, &w);
            prop_assert_eq!(lhs, f(&a, m1, m2, m3, &u, &v, &w).scale(&rat(c)));
        }
    }

    #[test]
    fn accepted_families_follow_the_recursion(seed in 0u64..500) {
        for (_, va) in random_corpus(seed, 3) {
            let a = from_va(&va);
            let reports = a.check_dmodule_morphism(&none());
            prop_assert!(reports.iter().all(|r| r.passed()));
            let r = a.rank();
            let (lo, hi) = a.band();
            for i in 0..r {
                for j in 0..r {
                    for n in lo - 3..=hi + 1 {
                        for k in 0..5u32 {
                            let want = a.b(i, j, k as i64 + n, 0)
                                .scale(&(sign(k as i64) / Rational::from_integer(factorial(k))));
                            prop_assert_eq!(a.b(i, j, n, k), want);
                        }
                    }
                }
            }
        }
    }
}
