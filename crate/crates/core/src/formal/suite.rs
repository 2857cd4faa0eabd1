//! Built-in delta-function identities.

use super::{check_identity, parse_expr, ExponentBox, IdentityReport, Var};
use crate::error::Result;

/// A named identity `lhs = rhs` in the surface syntax, checked over the
/// listed variables.
#[derive(Clone, Copy, Debug)]
pub struct Identity {
    pub name: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub vars: &'static [Var],
}

pub const SUBSTITUTION: Identity = Identity {
    name: "delta substitution",
    lhs: "x1^-1 * delta((x2+x0)/x1)",
    rhs: "x2^-1 * delta((x1-x0)/x2)",
    vars: &[Var::X0, Var::X1, Var::X2],
};

pub const THREE_TERM: Identity = Identity {
    name: "three-term delta identity",
    lhs: "x0^-1 * delta((x1-x2)/x0) - x0^-1 * delta((x2-x1)/(-x0))",
    rhs: "x2^-1 * delta((x1-x0)/x2)",
    vars: &[Var::X0, Var::X1, Var::X2],
};

pub const DERIVATIVE_TRANSPORT: Identity = Identity {
    name: "derivative transport",
    lhs: "diff(x1, x2^-1 * delta(x1/x2))",
    rhs: "-diff(x2, x2^-1 * delta(x1/x2))",
    vars: &[Var::X1, Var::X2],
};

/// The substitution identity with the delta dropped from the right-hand
/// side. It is false; the suite runs it to show the delta is needed.
pub const SUBSTITUTION_WITHOUT_DELTA: Identity = Identity {
    name: "delta substitution without delta on the right",
    lhs: "x1^-1 * delta((x2+x0)/x1)",
    rhs: "x2^-1 * (x1 - x0) * x2^-1",
    vars: &[Var::X0, Var::X1, Var::X2],
};

pub const STANDARD: [Identity; 3] = [SUBSTITUTION, THREE_TERM, DERIVATIVE_TRANSPORT];

impl Identity {
    pub fn check(&self, half_width: i64) -> Result<IdentityReport> {
        let bx = ExponentBox::cube(self.vars, -half_width, half_width)?;
        check_identity(self.name, &parse_expr(self.lhs)?, &parse_expr(self.rhs)?, &bx)
    }
}

/// Runs the standard identities on the cube `[-half_width, half_width]`.
pub fn run(half_width: i64) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for id in STANDARD {
        let mut rep = id.check(half_width)?;
        if id.name == SUBSTITUTION.name {
            let control = SUBSTITUTION_WITHOUT_DELTA.check(half_width)?;
            rep.note = Some(if control.passed() {
                "also holds without the delta on the right".into()
            } else {
                "the delta on the right is required; without it the sides differ".into()
            });
        }
        out.push(rep);
    }
    Ok(out)
}
