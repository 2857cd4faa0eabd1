//! Closed-form coefficient evaluation for compiled [`DeltaExpr`] trees.
//!
//! Each node carries an over-approximation of its support as a union of
//! cones `base + sum t_j d_j`. Products use the cones to enumerate exactly
//! the finitely many factor exponents that can contribute to a coefficient.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::expr::{Binomial, DeltaExpr, Ratio, SignedVar};
use super::{Exponent, Var};
use crate::error::{Error, Result};
use crate::exact::{binom, rat, Rational};

#[derive(Clone, Debug)]
struct Cone {
    base: Exponent,
    /// Direction and whether it may be used with negative multiples.
    dirs: Vec<(Exponent, bool)>,
}

impl Cone {
    fn point(base: Exponent) -> Self {
        Cone { base, dirs: Vec::new() }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Scalar(Rational),
    Monomial(Exponent),
    Iota(Binomial, i64),
    Delta(Ratio),
    Sum(Vec<(Rational, Series)>),
    Product(Box<Series>, Box<Series>),
    Derivative(Var, Box<Series>),
}

#[derive(Clone, Debug)]
pub(crate) struct Series {
    node: Node,
    support: Vec<Cone>,
}

fn add(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: &Exponent, b: &Exponent) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn others_zero(e: &Exponent, used: &[Var]) -> bool {
    Var::ALL
        .iter()
        .filter(|v| !used.contains(v))
        .all(|v| e[v.index()] == 0)
}

fn sign_inv_pow(s: SignedVar, n: i64) -> Rational {
    // (+-1)^(-n) = (+-1)^n
    s.sign_pow(n)
}

impl Series {
    pub(crate) fn compile(expr: &DeltaExpr) -> Result<Series> {
        expr.validate()?;
        Series::build(expr)
    }

    fn build(expr: &DeltaExpr) -> Result<Series> {
        Ok(match expr {
            DeltaExpr::Scalar(c) => Series {
                node: Node::Scalar(c.clone()),
                support: vec![Cone::point([0; 3])],
            },
            DeltaExpr::Monomial(e) => Series {
                node: Node::Monomial(*e),
                support: vec![Cone::point(*e)],
            },
            DeltaExpr::Iota { base, exponent } => {
                let mut b = [0; 3];
                b[base.first.var.index()] = *exponent;
                let mut d = [0; 3];
                d[base.first.var.index()] = -1;
                d[base.second.var.index()] = 1;
                Series {
                    node: Node::Iota(*base, *exponent),
                    support: vec![Cone {
                        base: b,
                        dirs: vec![(d, false)],
                    }],
                }
            }
            DeltaExpr::Delta(r) => {
                let cone = match r {
                    Ratio::Single { num, den } => {
                        let mut d = [0; 3];
                        d[num.var.index()] = 1;
                        d[den.var.index()] = -1;
                        Cone {
                            base: [0; 3],
                            dirs: vec![(d, true)],
                        }
                    }
                    Ratio::Binomial { num, den } => {
                        let mut d = [0; 3];
                        d[num.first.var.index()] = 1;
                        d[den.var.index()] = -1;
                        let mut s = [0; 3];
                        s[num.first.var.index()] = -1;
                        s[num.second.var.index()] = 1;
                        Cone {
                            base: [0; 3],
                            dirs: vec![(d, true), (s, false)],
                        }
                    }
                };
                Series {
                    node: Node::Delta(*r),
                    support: vec![cone],
                }
            }
            DeltaExpr::Sum(ts) => {
                let mut terms = Vec::new();
                let mut support = Vec::new();
                for (c, t) in ts {
                    if c.is_zero() {
                        continue;
                    }
                    let s = Series::build(t)?;
                    support.extend(s.support.iter().cloned());
                    terms.push((c.clone(), s));
                }
                Series {
                    node: Node::Sum(terms),
                    support,
                }
            }
            DeltaExpr::Product(fs) => {
                let mut acc = Series {
                    node: Node::Scalar(Rational::one()),
                    support: vec![Cone::point([0; 3])],
                };
                for f in fs {
                    acc = Series::product(acc, Series::build(f)?)?;
                }
                acc
            }
            DeltaExpr::Derivative(v, e) => {
                let inner = Series::build(e)?;
                let support = inner
                    .support
                    .iter()
                    .map(|c| Cone {
                        base: sub(&c.base, &v.unit()),
                        dirs: c.dirs.clone(),
                    })
                    .collect();
                Series {
                    node: Node::Derivative(*v, Box::new(inner)),
                    support,
                }
            }
        })
    }

    fn is_finite(&self) -> bool {
        self.support.iter().all(|c| c.dirs.is_empty())
    }

    fn product(f: Series, g: Series) -> Result<Series> {
        if !f.is_finite() && !g.is_finite() {
            let two_sided = f
                .support
                .iter()
                .chain(&g.support)
                .any(|c| c.dirs.iter().any(|d| d.1));
            if two_sided {
                return Err(Error::UnsupportedProduct(
                    "a delta function can only be multiplied by a Laurent polynomial".into(),
                ));
            }
            if grading(&f, &g).is_none() {
                return Err(Error::UnsupportedProduct(
                    "the two expansions point in incompatible directions".into(),
                ));
            }
        }
        let mut support = Vec::new();
        for a in &f.support {
            for b in &g.support {
                let mut dirs = a.dirs.clone();
                dirs.extend(b.dirs.iter().cloned());
                support.push(Cone {
                    base: add(&a.base, &b.base),
                    dirs,
                });
            }
        }
        Ok(Series {
            node: Node::Product(Box::new(f), Box::new(g)),
            support,
        })
    }

    pub(crate) fn coeff(&self, e: &Exponent) -> Rational {
        match &self.node {
            Node::Scalar(c) => {
                if *e == [0; 3] {
                    c.clone()
                } else {
                    Rational::zero()
                }
            }
            Node::Monomial(m) => {
                if e == m {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Node::Iota(b, n) => iota_coeff(b, *n, e),
            Node::Delta(r) => delta_coeff(r, e),
            Node::Sum(ts) => ts
                .iter()
                .map(|(c, s)| {
                    let x = s.coeff(e);
                    if x.is_zero() {
                        x
                    } else {
                        c * x
                    }
                })
                .sum(),
            Node::Derivative(v, s) => {
                let k = e[v.index()] + 1;
                if k == 0 {
                    return Rational::zero();
                }
                s.coeff(&add(e, &v.unit())) * rat(k)
            }
            Node::Product(f, g) => product_coeff(f, g, e),
        }
    }
}

fn iota_coeff(b: &Binomial, n: i64, e: &Exponent) -> Rational {
    let (a, s) = (b.first, b.second);
    if !others_zero(e, &[a.var, s.var]) {
        return Rational::zero();
    }
    let m = e[s.var.index()];
    if m < 0 || e[a.var.index()] != n - m {
        return Rational::zero();
    }
    binom(n, m as u32) * a.sign_pow(n - m) * s.sign_pow(m)
}

fn delta_coeff(r: &Ratio, e: &Exponent) -> Rational {
    match r {
        Ratio::Single { num, den } => {
            if !others_zero(e, &[num.var, den.var]) {
                return Rational::zero();
            }
            let n = e[num.var.index()];
            if e[den.var.index()] != -n {
                return Rational::zero();
            }
            num.sign_pow(n) * sign_inv_pow(*den, n)
        }
        Ratio::Binomial { num, den } => {
            if !others_zero(e, &[num.first.var, num.second.var, den.var]) {
                return Rational::zero();
            }
            let n = -e[den.var.index()];
            iota_coeff(num, n, &{
                let mut x = *e;
                x[den.var.index()] = 0;
                x
            }) * sign_inv_pow(*den, n)
        }
    }
}

/// A weight vector that is strictly positive on every direction of both
/// supports, so that only finitely many splittings `e = p + q` exist.
fn grading(f: &Series, g: &Series) -> Option<Exponent> {
    let dirs: Vec<Exponent> = f
        .support
        .iter()
        .chain(&g.support)
        .flat_map(|c| c.dirs.iter().map(|d| d.0))
        .collect();
    let range = -3..=3i64;
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                let w = [a, b, c];
                if dirs.iter().all(|d| dot(&w, d) > 0) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn product_coeff(f: &Series, g: &Series, e: &Exponent) -> Rational {
    let mut candidates: BTreeSet<Exponent> = BTreeSet::new();
    if f.is_finite() {
        candidates.extend(f.support.iter().map(|c| c.base));
    } else if g.is_finite() {
        candidates.extend(g.support.iter().map(|c| sub(e, &c.base)));
    } else {
        let w = grading(f, g).expect("checked when the product was built");
        let floor_g = g.support.iter().map(|c| dot(&w, &c.base)).min().unwrap_or(0);
        for cone in &f.support {
            let budget = dot(&w, e) - floor_g - dot(&w, &cone.base);
            enumerate_cone(cone, &w, budget, &mut candidates);
        }
    }
    let mut total = Rational::zero();
    for p in candidates {
        let a = f.coeff(&p);
        if a.is_zero() {
            continue;
        }
        let b = g.coeff(&sub(e, &p));
        if !b.is_zero() {
            total += a * b;
        }
    }
    total
}

fn enumerate_cone(cone: &Cone, w: &Exponent, budget: i64, out: &mut BTreeSet<Exponent>) {
    fn go(dirs: &[(Exponent, bool)], w: &Exponent, budget: i64, at: Exponent, out: &mut BTreeSet<Exponent>) {
        match dirs.split_first() {
            None => {
                out.insert(at);
            }
            Some(((d, _), rest)) => {
                let step = dot(w, d);
                let mut t = 0;
                let mut p = at;
                while t * step <= budget {
                    go(rest, w, budget - t * step, p, out);
                    p = add(&p, d);
                    t += 1;
                }
            }
        }
    }
    if budget >= 0 {
        go(&cone.dirs, w, budget, cone.base, out);
    }
}
