//! Plain-text surface syntax for [`DeltaExpr`].
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' int)?
//! atom    := rational | var | 'delta' '(' ratio ')'
//!          | 'diff' '(' var ',' expr ')' | '(' expr ')'
//! ratio   := side '/' side
//! side    := var | '-' var | '(' linear ')'
//! var     := 'x0' | 'x1' | 'x2'
//! ```
//!
//! `(a + b)^n` and `(a - b)^n` with distinct variables denote the expansion
//! in nonnegative powers of `b`; other powers are only allowed on a single
//! variable. A delta ratio takes a single (signed) variable as denominator.

use num_traits::{One, Zero};

use super::expr::{Binomial, DeltaExpr, Ratio, SignedVar};
use super::Var;
use crate::error::{Error, Result};
use crate::exact::{parse_rational, rat, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            toks.push((Tok::Num(chars[start..i].iter().collect()), l0, c0));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            col += i - start;
            toks.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
            continue;
        }
        if "+-*/^(),".contains(c) {
            toks.push((Tok::Sym(c), l0, c0));
            col += 1;
            i += 1;
            continue;
        }
        return Err(Error::Parse {
            line: l0,
            column: c0,
            message: format!("unexpected character '{c}'"),
        });
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks, pos: 0 })
}

/// Linear combination of single variables in order of first appearance,
/// used to recognise binomials.
type Linear = Vec<(Var, Rational)>;

fn push_term(l: &mut Linear, v: Var, c: Rational) {
    match l.iter_mut().find(|(w, _)| *w == v) {
        Some((_, x)) => *x += c,
        None => l.push((v, c)),
    }
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (_, line, column) = &self.toks[self.pos];
        Err(Error::Parse {
            line: *line,
            column: *column,
            message: message.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<DeltaExpr> {
        let mut terms = vec![(Rational::one(), self.term()?)];
        loop {
            if self.eat('+') {
                terms.push((Rational::one(), self.term()?));
            } else if self.eat('-') {
                terms.push((-Rational::one(), self.term()?));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 && terms[0].0.is_one() {
            terms.pop().map(|t| t.1).unwrap_or_default()
        } else {
            DeltaExpr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<DeltaExpr> {
        let mut factors = vec![self.unary()?];
        while self.eat('*') {
            factors.push(self.unary()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap_or_default()
        } else {
            DeltaExpr::Product(factors)
        })
    }

    fn unary(&mut self) -> Result<DeltaExpr> {
        if self.eat('-') {
            Ok(DeltaExpr::Sum(vec![(-Rational::one(), self.unary()?)]))
        } else {
            self.power()
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek().clone() {
            Tok::Num(s) => match s.parse::<i64>() {
                Ok(n) => {
                    self.bump();
                    Ok(if neg { -n } else { n })
                }
                Err(_) => self.err("integer out of range"),
            },
            _ => self.err("expected an integer exponent"),
        }
    }

    fn var(&mut self) -> Result<Var> {
        match self.peek().clone() {
            Tok::Ident(s) => match var_named(&s) {
                Some(v) => {
                    self.bump();
                    Ok(v)
                }
                None => self.err(format!("unknown variable '{s}'")),
            },
            _ => self.err("expected a variable"),
        }
    }

    fn power(&mut self) -> Result<DeltaExpr> {
        let start = self.pos;
        let (atom, parenthesised) = self.atom()?;
        if !self.eat('^') {
            return Ok(atom);
        }
        let n = self.int()?;
        if let DeltaExpr::Monomial(e) = &atom {
            if e.iter().filter(|&&x| x != 0).count() == 1 && e.iter().any(|&x| x == 1) {
                return Ok(DeltaExpr::Monomial(e.map(|x| x * n)));
            }
        }
        if parenthesised {
            if let Some(lin) = linear(&atom) {
                if let Some(out) = linear_power(&lin, n)? {
                    return Ok(out);
                }
            }
        }
        self.pos = start;
        self.err("'^' applies only to a variable or to a binomial in two distinct variables")
    }

    fn atom(&mut self) -> Result<(DeltaExpr, bool)> {
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                let mut text = s;
                if self.eat('/') {
                    match self.bump() {
                        Tok::Num(d) => {
                            text = format!("{text}/{d}");
                        }
                        _ => return self.err("expected a denominator"),
                    }
                }
                match parse_rational(&text) {
                    Some(q) => Ok((DeltaExpr::Scalar(q), false)),
                    None => self.err("invalid rational"),
                }
            }
            Tok::Ident(s) if s == "delta" => {
                self.bump();
                self.expect('(')?;
                let r = self.ratio()?;
                self.expect(')')?;
                Ok((DeltaExpr::Delta(r), false))
            }
            Tok::Ident(s) if s == "diff" => {
                self.bump();
                self.expect('(')?;
                let v = self.var()?;
                self.expect(',')?;
                let e = self.expr()?;
                self.expect(')')?;
                Ok((DeltaExpr::derivative(v, e), false))
            }
            Tok::Ident(_) => {
                let v = self.var()?;
                Ok((DeltaExpr::var_pow(v, 1), false))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok((e, true))
            }
            Tok::End => self.err("unexpected end of input"),
            t => self.err(format!("unexpected token {t:?}")),
        }
    }

    fn side(&mut self) -> Result<Linear> {
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            match linear(&e) {
                Some(l) => Ok(l),
                None => self.err("delta arguments must be sums of signed variables"),
            }
        } else {
            let sign = if self.eat('-') { rat(-1) } else { rat(1) };
            let v = self.var()?;
            Ok(vec![(v, sign)])
        }
    }

    fn ratio(&mut self) -> Result<Ratio> {
        let num = self.side()?;
        self.expect('/')?;
        let den = self.side()?;
        let den = match signed_terms(&den).as_deref() {
            Some([d]) => *d,
            _ => return self.err("delta denominator must be a single signed variable"),
        };
        let r = match signed_terms(&num).as_deref() {
            Some([a]) => Ratio::single(*a, den),
            Some([a, b]) => Binomial::new(*a, *b).and_then(|b| Ratio::binomial(b, den)),
            _ => return self.err("delta numerator must be one or two signed variables"),
        };
        r.or_else(|e| self.err(e.to_string()))
    }
}

fn var_named(s: &str) -> Option<Var> {
    Var::ALL.into_iter().find(|v| v.name() == s)
}

/// Coefficients of `e` if it is a linear combination of bare variables.
fn linear(e: &DeltaExpr) -> Option<Linear> {
    match e {
        DeltaExpr::Monomial(m) => {
            let nz: Vec<Var> = Var::ALL.into_iter().filter(|v| m[v.index()] != 0).collect();
            match nz.as_slice() {
                [v] if m[v.index()] == 1 => Some(vec![(*v, Rational::one())]),
                _ => None,
            }
        }
        DeltaExpr::Sum(ts) => {
            let mut l = Linear::new();
            for (c, t) in ts {
                for (v, x) in linear(t)? {
                    push_term(&mut l, v, c * x);
                }
            }
            Some(l)
        }
        _ => None,
    }
}

/// Signed variables in written order if every nonzero coefficient is `+-1`.
fn signed_terms(l: &Linear) -> Option<Vec<SignedVar>> {
    let mut out = Vec::new();
    for (v, c) in l {
        if c.is_zero() {
            continue;
        }
        if c.is_one() {
            out.push(SignedVar::pos(*v));
        } else if *c == rat(-1) {
            out.push(SignedVar::neg(*v));
        } else {
            return None;
        }
    }
    Some(out)
}

fn linear_power(lin: &Linear, n: i64) -> Result<Option<DeltaExpr>> {
    match signed_terms(lin).as_deref() {
        Some([a]) => {
            let sign = a.sign_pow(n);
            Ok(Some(DeltaExpr::Sum(vec![(sign, DeltaExpr::var_pow(a.var, n))])))
        }
        Some([a, b]) => Ok(Some(DeltaExpr::iota(Binomial::new(*a, *b)?, n))),
        _ => Ok(None),
    }
}

/// Parses the surface syntax. Binomials written inside parentheses keep
/// their written order, so `(x1-x2)^-1` and `(-x2+x1)^-1` expand differently.
pub fn parse_expr(src: &str) -> Result<DeltaExpr> {
    let mut lx = lex(src)?;
    let e = lx.expr()?;
    if *lx.peek() != Tok::End {
        return lx.err("trailing input");
    }
    e.validate()?;
    Ok(e)
}
