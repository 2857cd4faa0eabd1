use rayon::prelude::*;

use super::{compose_left, compose_right, sigma12_triple, ChiralData, DiagSection};
use crate::exact::{rat, sign_pow};
use crate::linear::Vector;
use crate::report::{first_failure, Axis, CheckReport, Witness, WindowOverride};
use crate::vertex::checks::jacobi_box;

/// Pass/fail per chiral axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChiralVerdicts {
    /// `mu(n+1) = (z1 - z2) mu(n)`.
    pub recursion: bool,
    /// Compatibility with `d/dz1`.
    pub d1: bool,
    /// Compatibility with `d/dz2`.
    pub d2: bool,
    pub skew: bool,
    pub jacobi: bool,
}

impl ChiralVerdicts {
    pub fn all(&self) -> bool {
        self.recursion && self.d1 && self.d2 && self.skew && self.jacobi
    }

    /// `mu` is a morphism of D-modules.
    pub fn dmodule(&self) -> bool {
        self.recursion && self.d1 && self.d2
    }
}

/// Runs the D-module, skew and Jacobi checkers.
pub fn chiral_checks(a: &ChiralData, over: &WindowOverride) -> (Vec<CheckReport>, ChiralVerdicts) {
    let mut reports = a.check_dmodule_morphism(over);
    reports.push(a.check_chiral_skew(over));
    reports.push(a.check_chiral_jacobi(over));
    let verdicts = ChiralVerdicts {
        recursion: reports[0].passed(),
        d1: reports[1].passed(),
        d2: reports[2].passed(),
        skew: reports[3].passed(),
        jacobi: reports[4].passed(),
    };
    (reports, verdicts)
}

fn pairs(r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).collect()
}

fn sides(a: &ChiralData, lhs: &DiagSection, rhs: &DiagSection) -> String {
    format!(
        "lhs {}, rhs {}",
        lhs.display_with(a.basis_names()),
        rhs.display_with(a.basis_names())
    )
}

impl ChiralData {
    /// One pass over all basis pairs and the rows of `axis`, comparing
    /// `lhs(i, j, n)` with `rhs(i, j, n)`.
    fn sweep_pairs<F>(&self, check: &str, label: &str, axis: Axis, f: F) -> CheckReport
    where
        F: Fn(usize, usize, i64) -> (DiagSection, DiagSection) + Sync,
    {
        let found: Vec<Option<Witness>> = pairs(self.rank())
            .par_iter()
            .map(|&(i, j)| {
                for n in axis.range() {
                    let (lhs, rhs) = f(i, j, n);
                    if lhs != rhs {
                        return Some(Witness {
                            basis: vec![
                                ("u".into(), self.name(i).to_string()),
                                ("v".into(), self.name(j).to_string()),
                            ],
                            indices: vec![("n".into(), n)],
                            detail: sides(self, &lhs, &rhs),
                        });
                    }
                }
                None
            })
            .collect();
        CheckReport::new(check, label, vec![axis]).with_outcome(first_failure(found))
    }

    /// Rows swept by the D-module checks.
    ///
    /// On the generating part each identity, in layer `k` of row `n`,
    /// depends only on `p = n + k` and can fail only for `p` in
    /// `[dmin - 1, dmax]`. A failure at `p` shows in every row `n <= p`,
    /// in particular in a row below all explicit corrections, so the rows
    /// below stay silent.
    fn dmodule_rows(&self, over: &WindowOverride) -> Axis {
        let (lo, hi) = self.band();
        let (mut a, mut b) = (lo - 2, hi + 1);
        if let Some((el, eh)) = self.explicit_rows() {
            a = a.min(el - 2);
            b = b.max(eh);
        }
        over.apply(Axis::new("n", a, b))
    }

    /// The three D-module identities, as three reports:
    /// `mu(n+1, u, v) = (z1 - z2) mu(n, u, v)`,
    /// `d1 mu(n+1, u, v) = (n+1) mu(n, u, v) + mu(n+1, Du, v)` and
    /// `d2 mu(n+1, u, v) = -(n+1) mu(n, u, v) + mu(n+1, u, Dv)`.
    pub fn check_dmodule_morphism(&self, over: &WindowOverride) -> Vec<CheckReport> {
        let axis = self.dmodule_rows(over);
        let d = self.derivation();
        let (lo, hi) = self.band();
        let note = format!("on the generating part a failure at p = n + k in [{}, {hi}] is seen in every row n <= p", lo - 1);
        let recursion = self
            .sweep_pairs("d-module recursion", "expl-exp4", axis.clone(), |i, j, n| {
                let (u, v) = (self.basis(i), self.basis(j));
                (self.mu(n + 1, &u, &v), self.mu(n, &u, &v).mul_z12())
            })
            .note("the generating part satisfies the recursion identically");
        let d1 = self
            .sweep_pairs("d-module d1", "l-1-1", axis.clone(), |i, j, n| {
                let (u, v) = (self.basis(i), self.basis(j));
                let lhs = self.mu(n + 1, &u, &v).apply_d1();
                let rhs = self
                    .mu(n, &u, &v)
                    .scale(&rat(n + 1))
                    .add(&self.mu(n + 1, &d.apply(&u), &v));
                (lhs, rhs)
            })
            .note(note.clone());
        let d2 = self
            .sweep_pairs("d-module d2", "l-1-1 (z2)", axis, |i, j, n| {
                let (u, v) = (self.basis(i), self.basis(j));
                let lhs = self.mu(n + 1, &u, &v).apply_d2(d);
                let rhs = self
                    .mu(n, &u, &v)
                    .scale(&rat(-(n + 1)))
                    .add(&self.mu(n + 1, &u, &d.apply(&v)));
                (lhs, rhs)
            })
            .note(note);
        vec![recursion, d1, d2]
    }

    /// `(mu o sigma12)(g) = (-1)^n sum_m d2^m (x) B^n_m(v, u)`, rewritten
    /// in `d1` form.
    pub fn mu_swapped(&self, n: i64, u: &Vector, v: &Vector) -> DiagSection {
        let d = self.derivation();
        let mut out = DiagSection::zero(self.rank());
        for m in self.layers_for(n) {
            let mut s = DiagSection::from_layers(self.rank(), [(0, self.b_vec(v, n, m, u))]);
            for _ in 0..m {
                s = s.apply_d2(d);
            }
            out = out.add(&s);
        }
        out.scale(&sign_pow(n))
    }

    /// `mu o sigma12 = -mu` on every basis generator. Layer zero of this
    /// identity is the extraction `B^n_0(u, v) = (-1)^(n+1) sum_k D^k
    /// B^n_k(v, u)`, which is reported separately when it fails.
    pub fn check_chiral_skew(&self, over: &WindowOverride) -> CheckReport {
        let (lo, hi) = self.band();
        let s = self.derivation_shift() as i64;
        let (mut a, mut b) = (lo - s - 1, hi + 1);
        if let Some((el, eh)) = self.explicit_rows() {
            a = a.min(el - 1);
            b = b.max(eh);
        }
        let axis = over.apply(Axis::new("n", a, b));
        let d = self.derivation();
        let found: Vec<Option<Witness>> = pairs(self.rank())
            .par_iter()
            .map(|&(i, j)| {
                let (u, v) = (self.basis(i), self.basis(j));
                for n in axis.range() {
                    let lhs = self.mu_swapped(n, &u, &v);
                    let rhs = self.mu(n, &u, &v).scale(&rat(-1));
                    if lhs == rhs {
                        continue;
                    }
                    let b0 = self.b_vec(&u, n, 0, &v);
                    let mut ext = Vector::zero(self.rank());
                    for k in self.layers_for(n) {
                        ext.add_assign(&d.apply_pow(&self.b_vec(&v, n, k, &u), k));
                    }
                    let ext = ext.scale(&sign_pow(n + 1));
                    let detail = if b0 != ext {
                        format!(
                            "skew3: B^n_0(u,v) = {}, extracted {}",
                            b0.display_with(self.basis_names()),
                            ext.display_with(self.basis_names())
                        )
                    } else {
                        format!("skew2: {}", sides(self, &lhs, &rhs))
                    };
                    return Some(Witness {
                        basis: vec![
                            ("u".into(), self.name(i).to_string()),
                            ("v".into(), self.name(j).to_string()),
                        ],
                        indices: vec![("n".into(), n)],
                        detail,
                    });
                }
                None
            })
            .collect();
        CheckReport::new("chiral skew-symmetry", "skew2", vec![axis])
            .with_outcome(first_failure(found))
            .note(format!(
                "on the generating part layer k of row n is skew-symmetry at p = n + k, which can fail only for p in [{}, {hi}]",
                lo - s
            ))
            .note(format!("for n > {hi} both sides are empty"))
    }

    /// `mu(mu(u, v), w) = mu(u, mu(v, w)) - mu(u, mu(v, w)) o sigma12` on all
    /// basis triples. The permuted composition is taken with `d1` and `d2`
    /// exchanged, since the swap exchanges the first two points.
    pub fn check_chiral_jacobi(&self, over: &WindowOverride) -> CheckReport {
        let (lo, hi) = self.band();
        let [la, ma, na] = jacobi_box(lo, hi);
        let ax1 = over.apply(Axis::new("m1", la.lo, la.hi));
        let ax3 = over.apply(Axis::new("m3", ma.lo, ma.hi));
        let ax2 = over.apply(Axis::new("m2", na.lo, na.hi));
        let r = self.rank();
        let triples: Vec<(usize, usize, usize)> = (0..r)
            .flat_map(|i| (0..r).flat_map(move |j| (0..r).map(move |k| (i, j, k))))
            .collect();
        let found: Vec<Option<Witness>> = triples
            .par_iter()
            .map(|&(i, j, k)| {
                let (u, v, w) = (self.basis(i), self.basis(j), self.basis(k));
                for m1 in ax1.range() {
                    for m2 in ax2.range() {
                        for m3 in ax3.range() {
                            let total = m1 + m2 + m3;
                            if total < 2 * lo || total > 2 * hi {
                                continue;
                            }
                            let lhs = compose_left(self, m1, m2, m3, &u, &v, &w);
                            let (sign, p1, p2, p3, su, sv, sw) = sigma12_triple(m1, m2, m3, &u, &v, &w);
                            let swapped = compose_right(self, p1, p2, p3, &su, &sv, &sw).transpose();
                            let rhs = compose_right(self, m1, m2, m3, &u, &v, &w).sub(&swapped.scale(&sign));
                            if lhs != rhs {
                                return Some(Witness {
                                    basis: vec![
                                        ("u".into(), self.name(i).to_string()),
                                        ("v".into(), self.name(j).to_string()),
                                        ("w".into(), self.name(k).to_string()),
                                    ],
                                    indices: vec![("m1".into(), m1), ("m2".into(), m2), ("m3".into(), m3)],
                                    detail: format!(
                                        "lhs {}, rhs {}",
                                        lhs.display_with(self.basis_names()),
                                        rhs.display_with(self.basis_names())
                                    ),
                                });
                            }
                        }
                    }
                }
                None
            })
            .collect();
        CheckReport::new("chiral jacobi", "operad1/operad2", vec![ax1, ax2, ax3])
            .with_outcome(first_failure(found))
            .note("on the generating part layer (k, l) at (m1, m2, m3) is the componentwise Jacobi identity at (m1, m3 + k, m2 + l)")
            .note(format!(
                "only {} <= m1+m2+m3 <= {} is swept; layer (0, 0) over the box then covers the Jacobi certificate",
                2 * lo,
                2 * hi
            ))
    }

    pub fn check_all(&self, over: &WindowOverride) -> Vec<CheckReport> {
        chiral_checks(self, over).0
    }
}
