//! Formal Laurent distributions in `x0, x1, x2`.
//!
//! Expressions ([`DeltaExpr`]) are kept symbolic; [`expand`] evaluates their
//! coefficients on a finite [`ExponentBox`]. Every coefficient is computed
//! as an exact finite sum, so a window is a faithful finite shadow of the
//! underlying formal series, never an approximation of it.

mod expr;
mod parse;
mod series;
pub mod suite;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};

pub use expr::{Binomial, DeltaExpr, Ratio, SignedVar};
pub use parse::parse_expr;

/// Exponent tuple, indexed by [`Var::index`].
pub type Exponent = [i64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    X0,
    X1,
    X2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X0, Var::X1, Var::X2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn unit(self) -> Exponent {
        let mut e = [0; 3];
        e[self.index()] = 1;
        e
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X0 => "x0",
            Var::X1 => "x1",
            Var::X2 => "x2",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive exponent bounds for an ordered subset of the variables.
/// Variables outside the subset are pinned to exponent 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentBox {
    vars: Vec<Var>,
    lo: Exponent,
    hi: Exponent,
}

impl ExponentBox {
    pub fn new(ranges: &[(Var, i64, i64)]) -> Result<Self> {
        let mut lo = [0; 3];
        let mut hi = [0; 3];
        let mut vars = Vec::new();
        for &(v, l, h) in ranges {
            if vars.contains(&v) {
                return Err(Error::contract(format!("variable {v} bounded twice")));
            }
            if l > h {
                return Err(Error::contract(format!("empty range [{l},{h}] for {v}")));
            }
            vars.push(v);
            lo[v.index()] = l;
            hi[v.index()] = h;
        }
        Ok(ExponentBox { vars, lo, hi })
    }

    /// Same range `[lo, hi]` for each listed variable.
    pub fn cube(vars: &[Var], lo: i64, hi: i64) -> Result<Self> {
        let ranges: Vec<_> = vars.iter().map(|&v| (v, lo, hi)).collect();
        ExponentBox::new(&ranges)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn bounds(&self, v: Var) -> (i64, i64) {
        (self.lo[v.index()], self.hi[v.index()])
    }

    pub fn contains(&self, e: &Exponent) -> bool {
        (0..3).all(|k| self.lo[k] <= e[k] && e[k] <= self.hi[k])
    }

    pub fn len(&self) -> usize {
        (0..3).map(|k| (self.hi[k] - self.lo[k] + 1) as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All exponents in the box, lexicographic in the declared variable order.
    pub fn points(&self) -> Vec<Exponent> {
        let mut out = vec![[0i64; 3]];
        for &v in &self.vars {
            let k = v.index();
            out = out
                .into_iter()
                .flat_map(|e| {
                    (self.lo[k]..=self.hi[k]).map(move |x| {
                        let mut e = e;
                        e[k] = x;
                        e
                    })
                })
                .collect();
        }
        out
    }

    pub fn format_exponent(&self, e: &Exponent) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .map(|v| format!("{}^{}", v, e[v.index()]))
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// Finite window onto a formal series: exact coefficients for every
/// exponent inside `box`, nothing known outside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentWindow {
    bx: ExponentBox,
    coeffs: BTreeMap<Exponent, Rational>,
}

impl LaurentWindow {
    pub fn new(bx: ExponentBox) -> Self {
        LaurentWindow {
            bx,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a window from explicit terms; keys must lie in the box.
    pub fn from_terms(bx: ExponentBox, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Result<Self> {
        let mut w = LaurentWindow::new(bx);
        for (e, c) in terms {
            w.set(e, c)?;
        }
        Ok(w)
    }

    pub fn exponent_box(&self) -> &ExponentBox {
        &self.bx
    }

    pub fn set(&mut self, e: Exponent, c: Rational) -> Result<()> {
        if !self.bx.contains(&e) {
            return Err(Error::contract(format!(
                "key {} outside window",
                self.bx.format_exponent(&e)
            )));
        }
        if c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
        Ok(())
    }

    /// `None` for untracked exponents (outside the box).
    pub fn coeff(&self, e: &Exponent) -> Option<Rational> {
        if self.bx.contains(e) {
            Some(self.coeffs.get(e).cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    /// Nonzero tracked coefficients in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.coeffs.iter()
    }

    /// Exponents in the box where the two windows differ, in the box's
    /// iteration order.
    pub fn differing(&self, other: &LaurentWindow) -> Result<Vec<Exponent>> {
        if self.bx != other.bx {
            return Err(Error::contract("windows over different boxes are not comparable"));
        }
        let mut keys: Vec<Exponent> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort_by_key(|e| self.order_key(e));
        keys.dedup();
        Ok(keys
            .into_iter()
            .filter(|e| self.coeffs.get(e) != other.coeffs.get(e))
            .collect())
    }

    fn order_key(&self, e: &Exponent) -> Vec<i64> {
        self.bx.vars.iter().map(|v| e[v.index()]).collect()
    }
}

/// Evaluates `expr` on every exponent of `bx`.
pub fn expand(expr: &DeltaExpr, bx: &ExponentBox) -> Result<LaurentWindow> {
    let series = series::Series::compile(expr)?;
    let mut w = LaurentWindow::new(bx.clone());
    for e in bx.points() {
        let c = series.coeff(&e);
        if !c.is_zero() {
            w.coeffs.insert(e, c);
        }
    }
    Ok(w)
}

/// Truncation of `iota(first - second)^n`, expanded in nonnegative powers
/// of `second`.
pub fn iota_expand(first: Var, second: Var, n: i64, bx: &ExponentBox) -> Result<LaurentWindow> {
    let b = Binomial::difference(first, second)?;
    expand(&DeltaExpr::iota(b, n), bx)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub exponent: Exponent,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of comparing two expansions on one box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub exponent_box: ExponentBox,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.mismatches.first()
    }

    pub fn summary_line(&self) -> String {
        let ranges: Vec<String> = self
            .exponent_box
            .vars
            .iter()
            .map(|&v| {
                let (l, h) = self.exponent_box.bounds(v);
                format!("{v} in [{l},{h}]")
            })
            .collect();
        let line = match self.first_mismatch() {
            None => format!("{}: PASS, box {}", self.name, ranges.join(", ")),
            Some(m) => format!(
                "{}: FAIL, {} differing coefficients, first at {} (lhs {}, rhs {}), box {}",
                self.name,
                self.mismatches.len(),
                self.exponent_box.format_exponent(&m.exponent),
                m.lhs,
                m.rhs,
                ranges.join(", ")
            ),
        };
        match &self.note {
            Some(n) => format!("{line} ({n})"),
            None => line,
        }
    }
}

/// Coefficient-wise comparison of two expressions on `bx`.
pub fn check_identity(name: &str, lhs: &DeltaExpr, rhs: &DeltaExpr, bx: &ExponentBox) -> Result<IdentityReport> {
    let l = expand(lhs, bx)?;
    let r = expand(rhs, bx)?;
    let mismatches = l
        .differing(&r)?
        .into_iter()
        .map(|e| Mismatch {
            exponent: e,
            lhs: format_rational(&l.coeff(&e).unwrap_or_default()),
            rhs: format_rational(&r.coeff(&e).unwrap_or_default()),
        })
        .collect();
    Ok(IdentityReport {
        name: name.to_string(),
        exponent_box: bx.clone(),
        mismatches,
        note: None,
    })
}

/// What the caller knows about the support of a window handed to
/// [`fundamental_delta_property`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportAssertion {
    /// All nonzero coefficients are inside the box: the window is the whole
    /// Laurent polynomial.
    Finite,
    /// Only a window of a possibly infinite series.
    Windowed,
}

/// Checks `X(x1,x2) delta(x1/x2) = X(x2,x2) delta(x1/x2)` on `bx` for a
/// Laurent polynomial `X` in `x1, x2`.
pub fn fundamental_delta_property(
    x: &LaurentWindow,
    support: SupportAssertion,
    bx: &ExponentBox,
) -> Result<IdentityReport> {
    if support != SupportAssertion::Finite {
        return Err(Error::UnsupportedInput(
            "the limit x1 -> x2 needs a Laurent polynomial; assert finite support".into(),
        ));
    }
    if x.terms().any(|(e, _)| e[Var::X0.index()] != 0) {
        return Err(Error::UnsupportedInput("X may only involve x1 and x2".into()));
    }
    let delta = DeltaExpr::delta(Ratio::single(SignedVar::pos(Var::X1), SignedVar::pos(Var::X2))?);
    let lhs_x = DeltaExpr::sum(x.terms().map(|(e, c)| (c.clone(), DeltaExpr::monomial(*e))).collect());
    let rhs_x = DeltaExpr::sum(
        x.terms()
            .map(|(e, c)| {
                let mut m = [0; 3];
                m[Var::X2.index()] = e[Var::X1.index()] + e[Var::X2.index()];
                (c.clone(), DeltaExpr::monomial(m))
            })
            .collect(),
    );
    check_identity(
        "fundamental delta property",
        &DeltaExpr::product(vec![lhs_x, delta.clone()]),
        &DeltaExpr::product(vec![rhs_x, delta]),
        bx,
    )
}

#[cfg(test)]
mod tests;
