use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{Exponent, Var};
use crate::error::{Error, Result};
use crate::exact::{format_rational, Rational};

/// `+x` or `-x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedVar {
    pub var: Var,
    pub negative: bool,
}

impl SignedVar {
    pub fn pos(var: Var) -> Self {
        SignedVar { var, negative: false }
    }

    pub fn neg(var: Var) -> Self {
        SignedVar { var, negative: true }
    }

    /// `(+-1)^n`.
    pub(crate) fn sign_pow(self, n: i64) -> Rational {
        if self.negative && n.rem_euclid(2) == 1 {
            -Rational::one()
        } else {
            Rational::one()
        }
    }
}

impl fmt::Display for SignedVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-{}", self.var)
        } else {
            write!(f, "{}", self.var)
        }
    }
}

/// `first + second` in two distinct variables. Powers are always expanded
/// in nonnegative powers of `second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Binomial {
    pub first: SignedVar,
    pub second: SignedVar,
}

impl Binomial {
    pub fn new(first: SignedVar, second: SignedVar) -> Result<Self> {
        if first.var == second.var {
            return Err(Error::contract(format!(
                "binomial needs two distinct variables, got {} twice",
                first.var
            )));
        }
        Ok(Binomial { first, second })
    }

    /// `a - b`.
    pub fn difference(a: Var, b: Var) -> Result<Self> {
        Binomial::new(SignedVar::pos(a), SignedVar::neg(b))
    }
}

impl fmt::Display for Binomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.second.negative { '-' } else { '+' };
        write!(f, "{}{}{}", self.first, op, self.second.var)
    }
}

/// Argument of a delta atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ratio {
    /// `delta(a / c)`
    Single { num: SignedVar, den: SignedVar },
    /// `delta((a + b) / c)`
    Binomial { num: Binomial, den: SignedVar },
}

impl Ratio {
    pub fn single(num: SignedVar, den: SignedVar) -> Result<Self> {
        if num.var == den.var {
            return Err(Error::contract("delta ratio needs distinct variables"));
        }
        Ok(Ratio::Single { num, den })
    }

    pub fn binomial(num: Binomial, den: SignedVar) -> Result<Self> {
        if num.first.var == den.var || num.second.var == den.var {
            return Err(Error::contract("delta denominator must differ from numerator variables"));
        }
        Ok(Ratio::Binomial { num, den })
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = |d: &SignedVar| {
            if d.negative {
                format!("({d})")
            } else {
                d.to_string()
            }
        };
        match self {
            Ratio::Single { num, den: d } => write!(f, "{}/{}", num, den(d)),
            Ratio::Binomial { num, den: d } => write!(f, "({})/{}", num, den(d)),
        }
    }
}

/// Symbolic expression over formal delta functions.
///
/// Delta atoms stay symbolic until [`super::expand`], so derivatives can be
/// taken first. A product may hold at most one factor containing a delta.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaExpr {
    Scalar(Rational),
    /// `x0^a x1^b x2^c`
    Monomial(Exponent),
    /// `iota(base)^exponent`
    Iota { base: Binomial, exponent: i64 },
    Delta(Ratio),
    Sum(Vec<(Rational, DeltaExpr)>),
    Product(Vec<DeltaExpr>),
    Derivative(Var, Box<DeltaExpr>),
}

impl DeltaExpr {
    pub fn scalar(c: Rational) -> Self {
        DeltaExpr::Scalar(c)
    }

    pub fn zero() -> Self {
        DeltaExpr::Sum(Vec::new())
    }

    pub fn monomial(e: Exponent) -> Self {
        DeltaExpr::Monomial(e)
    }

    pub fn var_pow(v: Var, n: i64) -> Self {
        let mut e = [0; 3];
        e[v.index()] = n;
        DeltaExpr::Monomial(e)
    }

    pub fn iota(base: Binomial, exponent: i64) -> Self {
        DeltaExpr::Iota { base, exponent }
    }

    pub fn delta(r: Ratio) -> Self {
        DeltaExpr::Delta(r)
    }

    pub fn sum(terms: Vec<(Rational, DeltaExpr)>) -> Self {
        DeltaExpr::Sum(terms)
    }

    pub fn product(factors: Vec<DeltaExpr>) -> Self {
        DeltaExpr::Product(factors)
    }

    pub fn derivative(v: Var, e: DeltaExpr) -> Self {
        DeltaExpr::Derivative(v, Box::new(e))
    }

    pub fn contains_delta(&self) -> bool {
        match self {
            DeltaExpr::Delta(_) => true,
            DeltaExpr::Scalar(_) | DeltaExpr::Monomial(_) | DeltaExpr::Iota { .. } => false,
            DeltaExpr::Sum(ts) => ts.iter().any(|(_, t)| t.contains_delta()),
            DeltaExpr::Product(fs) => fs.iter().any(DeltaExpr::contains_delta),
            DeltaExpr::Derivative(_, e) => e.contains_delta(),
        }
    }

    /// Rejects products in which two factors carry delta atoms.
    pub fn validate(&self) -> Result<()> {
        match self {
            DeltaExpr::Scalar(_) | DeltaExpr::Monomial(_) | DeltaExpr::Iota { .. } | DeltaExpr::Delta(_) => Ok(()),
            DeltaExpr::Sum(ts) => ts.iter().try_for_each(|(_, t)| t.validate()),
            DeltaExpr::Derivative(_, e) => e.validate(),
            DeltaExpr::Product(fs) => {
                if fs.iter().filter(|f| f.contains_delta()).count() > 1 {
                    return Err(Error::IllFormedProduct);
                }
                fs.iter().try_for_each(DeltaExpr::validate)
            }
        }
    }
}

impl fmt::Display for DeltaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaExpr::Scalar(c) => write!(f, "{}", format_rational(c)),
            DeltaExpr::Monomial(e) => {
                let parts: Vec<String> = Var::ALL
                    .iter()
                    .filter(|v| e[v.index()] != 0)
                    .map(|v| format!("{}^{}", v, e[v.index()]))
                    .collect();
                if parts.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", parts.join(" * "))
                }
            }
            DeltaExpr::Iota { base, exponent } => write!(f, "({base})^{exponent}"),
            DeltaExpr::Delta(r) => write!(f, "delta({r})"),
            DeltaExpr::Sum(ts) => {
                if ts.is_empty() {
                    return write!(f, "0");
                }
                for (k, (c, t)) in ts.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    if c.is_one() {
                        write!(f, "{t}")?;
                    } else {
                        write!(f, "{} * ({t})", format_rational(c))?;
                    }
                }
                Ok(())
            }
            DeltaExpr::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| format!("({x})")).collect();
                write!(f, "{}", parts.join(" * "))
            }
            DeltaExpr::Derivative(v, e) => write!(f, "diff({v}, {e})"),
        }
    }
}

impl Add for DeltaExpr {
    type Output = DeltaExpr;
    fn add(self, rhs: DeltaExpr) -> DeltaExpr {
        DeltaExpr::Sum(vec![(Rational::one(), self), (Rational::one(), rhs)])
    }
}

impl Sub for DeltaExpr {
    type Output = DeltaExpr;
    fn sub(self, rhs: DeltaExpr) -> DeltaExpr {
        DeltaExpr::Sum(vec![(Rational::one(), self), (-Rational::one(), rhs)])
    }
}

impl Neg for DeltaExpr {
    type Output = DeltaExpr;
    fn neg(self) -> DeltaExpr {
        DeltaExpr::Sum(vec![(-Rational::one(), self)])
    }
}

impl Mul for DeltaExpr {
    type Output = DeltaExpr;
    fn mul(self, rhs: DeltaExpr) -> DeltaExpr {
        DeltaExpr::Product(vec![self, rhs])
    }
}

impl Default for DeltaExpr {
    fn default() -> Self {
        DeltaExpr::Scalar(Rational::zero())
    }
}
