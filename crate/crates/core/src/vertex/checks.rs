use num_traits::Zero;
use rayon::prelude::*;

use super::VAData;
use crate::exact::{binom, inv_factorial, sign_pow, Rational};
use crate::linear::Vector;
use crate::report::{first_failure, Axis, CheckReport, Outcome, Witness, WindowOverride};

/// Pass/fail per axiom, in the order truncation, D-derivative, skew, Jacobi.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VaVerdicts {
    pub truncation: bool,
    pub d_derivative: bool,
    pub skew: bool,
    pub jacobi: bool,
}

impl VaVerdicts {
    pub fn all(&self) -> bool {
        self.truncation && self.d_derivative && self.skew && self.jacobi
    }
}

/// Runs all four checkers.
pub fn va_checks(v: &VAData, over: &WindowOverride) -> (Vec<CheckReport>, VaVerdicts) {
    let reports = vec![
        v.check_truncation(),
        v.check_d_derivative(over),
        v.check_skew_symmetry(over),
        v.check_jacobi(over),
    ];
    let verdicts = VaVerdicts {
        truncation: reports[0].passed(),
        d_derivative: reports[1].passed(),
        skew: reports[2].passed(),
        jacobi: reports[3].passed(),
    };
    (reports, verdicts)
}

/// The three sums of the componentwise Jacobi identity for basis elements
/// `u = e_i, v = e_j, w = e_k`:
///
/// `t1 = sum_p C(m,p) (u_{l+p} v)_{m+n-p} w`,
/// `t2 = sum_p (-1)^p C(l,p) u_{m+l-p} (v_{n+p} w)`,
/// `t3 = (-1)^l sum_p (-1)^p C(l,p) v_{n+l-p} (u_{m+p} w)`.
///
/// The identity reads `t1 = t2 - t3`. Every sum runs only over indices
/// where the inner mode lies in the support hull, so it is finite.
pub fn jacobi_terms(
    va: &VAData,
    (i, j, k): (usize, usize, usize),
    (l, m, n): (i64, i64, i64),
) -> (Vector, Vector, Vector) {
    let (a, b) = va.support_hull();
    let r = va.rank();
    let mut t1 = Vector::zero(r);
    for p in (a - l).max(0)..=(b - l) {
        let c = binom(m, p as u32);
        if c.is_zero() {
            continue;
        }
        let x = va.entry(i, l + p, j).cloned().unwrap_or_else(|| Vector::zero(r));
        t1.add_rat_scaled(&c, &va.mode_basis_right(&x, m + n - p, k));
    }
    let mut t2 = Vector::zero(r);
    for p in (a - n).max(0)..=(b - n) {
        let c = binom(l, p as u32) * sign_pow(p);
        if c.is_zero() {
            continue;
        }
        let y = va.entry(j, n + p, k).cloned().unwrap_or_else(|| Vector::zero(r));
        t2.add_rat_scaled(&c, &va.mode_basis_left(i, m + l - p, &y));
    }
    let mut t3 = Vector::zero(r);
    for p in (a - m).max(0)..=(b - m) {
        let c = binom(l, p as u32) * sign_pow(p) * sign_pow(l);
        if c.is_zero() {
            continue;
        }
        let y = va.entry(i, m + p, k).cloned().unwrap_or_else(|| Vector::zero(r));
        t3.add_rat_scaled(&c, &va.mode_basis_left(j, n + l - p, &y));
    }
    (t1, t2, t3)
}

/// Box swept by the Jacobi checker for support hull `[a, b]`.
///
/// Write `J = t1 - t2 + t3`. Every term has total mode `l + m + n`, so `J`
/// vanishes off the slabs `2a <= l+m+n <= 2b`. Pascal's rule applied to
/// each sum gives `J(l+1,m,n) = J(l,m+1,n) - J(l,m,n+1)`, so on a slab a
/// row in `l` vanishes once the row above vanishes and one point of it
/// does. With `h = max(b+1, 0)`, the row `l = h` can only be nonzero for
/// `m` in `[a-h, b]`, and at `m = h` every row `l < a-h` vanishes term by
/// term. Checking row `h` and the column `m = h` down to `l = a-h` thus
/// forces `J = 0` everywhere; the box below contains all of those points.
pub(crate) fn jacobi_box(a: i64, b: i64) -> [Axis; 3] {
    let h = (b + 1).max(0);
    [
        Axis::new("l", a - h, h),
        Axis::new("m", a - h, h),
        Axis::new("n", 2 * a - 2 * h, 2 * b - 2 * a + 2 * h),
    ]
}

fn basis_pair(va: &VAData, x: (&str, usize), y: (&str, usize)) -> Vec<(String, String)> {
    vec![
        (x.0.to_string(), va.name(x.1).to_string()),
        (y.0.to_string(), va.name(y.1).to_string()),
    ]
}

fn sides(va: &VAData, lhs: &Vector, rhs: &Vector) -> String {
    format!(
        "lhs {}, rhs {}",
        lhs.display_with(va.basis_names()),
        rhs.display_with(va.basis_names())
    )
}

impl VAData {
    /// Every stored entry lies inside the declared bounds of its pair.
    pub fn check_truncation(&self) -> CheckReport {
        let (a, b) = self.support_hull();
        let mut rep = CheckReport::new("truncation", "lower truncation", vec![Axis::new("n", a, b)]);
        let bad = self.table.keys().find(|&&(i, n, j)| match &self.bounds {
            None => false,
            Some(bd) => match bd.get(&(i, j)) {
                Some(&(lo, hi)) => n < lo || n > hi,
                None => true,
            },
        });
        if let Some(&(i, n, j)) = bad {
            rep = rep.with_outcome(Outcome::Fail(Witness {
                basis: basis_pair(self, ("u", i), ("v", j)),
                indices: vec![("n".into(), n)],
                detail: "nonzero entry outside the declared bounds".into(),
            }));
        }
        rep.note(format!("the table is finite: u_n v = 0 for n > {b} and n < {a}"))
    }

    /// `(Du)_{n+1} v = -(n+1) u_n v` for basis `u, v`.
    pub fn check_d_derivative(&self, over: &WindowOverride) -> CheckReport {
        let (a, b) = self.support_hull();
        let axis = over.apply(Axis::new("n", a - 1, b + 1));
        let r = self.rank();
        let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).collect();
        let found: Vec<Option<Witness>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let du = self.apply_d(&self.basis(i));
                for n in axis.range() {
                    let lhs = self.mode_basis_right(&du, n + 1, j);
                    let rhs = self
                        .entry(i, n, j)
                        .map(|v| v.scale(&Rational::from_integer((-(n + 1)).into())))
                        .unwrap_or_else(|| Vector::zero(r));
                    if lhs != rhs {
                        return Some(Witness {
                            basis: basis_pair(self, ("u", i), ("v", j)),
                            indices: vec![("n".into(), n)],
                            detail: sides(self, &lhs, &rhs),
                        });
                    }
                }
                None
            })
            .collect();
        CheckReport::new("d-derivative", "l-1-0", vec![axis])
            .with_outcome(first_failure(found))
            .note(format!(
                "for n < {} and n > {} both modes n and n+1 lie outside [{a},{b}]",
                a - 1,
                b
            ))
    }

    /// `u_m v = sum_k (-1)^(k+m+1)/k! D^k (v_{k+m} u)` for basis `u, v`.
    pub fn check_skew_symmetry(&self, over: &WindowOverride) -> CheckReport {
        let (a, b) = self.support_hull();
        let s = self.shift as i64;
        let axis = over.apply(Axis::new("m", a - s, b));
        let r = self.rank();
        let pairs: Vec<(usize, usize)> = (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).collect();
        let found: Vec<Option<Witness>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                for m in axis.range() {
                    let lhs = self.entry(i, m, j).cloned().unwrap_or_else(|| Vector::zero(r));
                    let mut rhs = Vector::zero(r);
                    for k in (a - m).max(0)..=(b - m) {
                        if let Some(x) = self.entry(j, k + m, i) {
                            let c = sign_pow(k + m + 1) * inv_factorial(k as u32);
                            rhs.add_rat_scaled(&c, &self.d.apply_pow(x, k as u32));
                        }
                    }
                    if lhs != rhs {
                        return Some(Witness {
                            basis: basis_pair(self, ("u", i), ("v", j)),
                            indices: vec![("m".into(), m)],
                            detail: sides(self, &lhs, &rhs),
                        });
                    }
                }
                None
            })
            .collect();
        CheckReport::new("skew-symmetry", "skew", vec![axis])
            .with_outcome(first_failure(found))
            .note(format!("for m > {b} every mode k+m exceeds {b}"))
            .note(format!(
                "for m < {} the left side is zero and D^k kills each value since k > {s}",
                a - s
            ))
    }

    /// Componentwise Jacobi identity for all basis triples.
    pub fn check_jacobi(&self, over: &WindowOverride) -> CheckReport {
        let (a, b) = self.support_hull();
        let [la, ma, na] = jacobi_box(a, b);
        let (la, ma, na) = (over.apply(la), over.apply(ma), over.apply(na));
        let r = self.rank();
        let triples: Vec<(usize, usize, usize)> = (0..r)
            .flat_map(|i| (0..r).flat_map(move |j| (0..r).map(move |k| (i, j, k))))
            .collect();
        let found: Vec<Option<Witness>> = triples
            .par_iter()
            .map(|&(i, j, k)| {
                for l in la.range() {
                    for m in ma.range() {
                        for n in na.range() {
                            let s = l + m + n;
                            if s < 2 * a || s > 2 * b {
                                continue;
                            }
                            let (t1, t2, t3) = jacobi_terms(self, (i, j, k), (l, m, n));
                            let rhs = t2.sub(&t3);
                            if t1 != rhs {
                                return Some(Witness {
                                    basis: vec![
                                        ("u".into(), self.name(i).to_string()),
                                        ("v".into(), self.name(j).to_string()),
                                        ("w".into(), self.name(k).to_string()),
                                    ],
                                    indices: vec![("l".into(), l), ("m".into(), m), ("n".into(), n)],
                                    detail: sides(self, &t1, &rhs),
                                });
                            }
                        }
                    }
                }
                None
            })
            .collect();
        CheckReport::new("jacobi", "jac-comp", vec![la, ma, na])
            .with_outcome(first_failure(found))
            .note(format!(
                "every term has total mode l+m+n, so only {} <= l+m+n <= {} can be nonzero",
                2 * a,
                2 * b
            ))
            .note("the recursion J(l+1,m,n) = J(l,m+1,n) - J(l,m,n+1) propagates the checked row and column to all l, m")
    }

    pub fn check_all(&self, over: &WindowOverride) -> Vec<CheckReport> {
        va_checks(self, over).0
    }
}
