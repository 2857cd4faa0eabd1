//! The translation between vertex algebras over `Q[z]` and chiral algebras:
//! `B^n_m(u, v) = (-1)^m / m! u_{m+n} v` one way, `u_n v = B^n_0(u, v)` the
//! other.

use std::fmt;

use serde::Serialize;

use crate::chiral::{chiral_checks, ChiralData, ChiralVerdicts};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness, WindowOverride};
use crate::vertex::{va_checks, CoeffRing, VAData, VaVerdicts};

fn first_failed(reports: &[CheckReport]) -> Option<Error> {
    reports.iter().find(|r| !r.passed()).map(|r| Error::AxiomFailed {
        axiom: format!("{} ({})", r.check, r.label),
        witness: r.witness().map(|w| w.to_string()).unwrap_or_default(),
    })
}

/// The chiral family of a vertex algebra over `Q[z]`, with no axiom check.
pub fn va_to_chiral_unchecked(v: &VAData) -> Result<ChiralData> {
    if v.coeff_ring() != CoeffRing::Qz {
        return Err(Error::contract("translation needs an algebra over Q[z]; lift it with tensor_with_ox"));
    }
    ChiralData::new(
        v.basis_names().to_vec(),
        v.derivation().clone(),
        v.table().iter().map(|(k, x)| (*k, x.clone())),
        std::iter::empty(),
        v.declared_bounds().cloned(),
    )
}

/// Checks all four vertex algebra axioms, then translates.
pub fn va_to_chiral(v: &VAData) -> Result<ChiralData> {
    if v.coeff_ring() != CoeffRing::Qz {
        return Err(Error::contract("translation needs an algebra over Q[z]; lift it with tensor_with_ox"));
    }
    let (reports, _) = va_checks(v, &WindowOverride::none());
    if let Some(e) = first_failed(&reports) {
        return Err(e);
    }
    va_to_chiral_unchecked(v)
}

/// `u_n v = B^n_0(u, v)` with the same `D`, with no axiom check.
pub fn chiral_to_va_unchecked(a: &ChiralData) -> Result<VAData> {
    let r = a.rank();
    let (lo, hi) = a.band();
    let mut entries = Vec::new();
    if lo <= hi {
        for i in 0..r {
            for j in 0..r {
                for n in lo..=hi {
                    let x = a.b(i, j, n, 0);
                    if !x.is_zero() {
                        entries.push(((i, n, j), x));
                    }
                }
            }
        }
    }
    VAData::new(
        CoeffRing::Qz,
        a.basis_names().to_vec(),
        a.derivation().clone(),
        entries,
        a.declared_bounds().cloned(),
    )
}

/// Checks the D-module, skew and Jacobi axioms, then translates.
pub fn chiral_to_va(a: &ChiralData) -> Result<VAData> {
    let (reports, _) = chiral_checks(a, &WindowOverride::none());
    if let Some(e) = first_failed(&reports) {
        return Err(e);
    }
    chiral_to_va_unchecked(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationReport {
    pub direction: String,
    pub exact: bool,
    /// First mismatch, in key order.
    pub witness: Option<Witness>,
}

impl TranslationReport {
    pub fn summary_line(&self) -> String {
        match &self.witness {
            None => format!("roundtrip {}: EXACT", self.direction),
            Some(w) => format!("roundtrip {}: MISMATCH at {w}", self.direction),
        }
    }
}

impl fmt::Display for TranslationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.summary_line())
    }
}

fn mismatch(basis: Vec<(String, String)>, indices: Vec<(String, i64)>, detail: String) -> Option<Witness> {
    Some(Witness { basis, indices, detail })
}

/// First difference between two vertex algebras, tablewise.
pub fn va_difference(x: &VAData, y: &VAData) -> Option<Witness> {
    if x.basis_names() != y.basis_names() {
        return mismatch(vec![], vec![], "basis names differ".into());
    }
    if x.coeff_ring() != y.coeff_ring() {
        return mismatch(vec![], vec![], "coefficient rings differ".into());
    }
    for i in 0..x.rank() {
        if x.derivation().image(i) != y.derivation().image(i) {
            return mismatch(vec![("u".into(), x.name(i).into())], vec![], "D differs".into());
        }
    }
    let keys: std::collections::BTreeSet<_> = x.table().keys().chain(y.table().keys()).collect();
    for &(i, n, j) in keys {
        if x.entry(i, n, j) != y.entry(i, n, j) {
            return mismatch(
                vec![("u".into(), x.name(i).into()), ("v".into(), x.name(j).into())],
                vec![("n".into(), n)],
                "structure constants differ".into(),
            );
        }
    }
    if x.declared_bounds() != y.declared_bounds() {
        return mismatch(vec![], vec![], "support bounds differ".into());
    }
    None
}

/// First difference between two chiral families, tablewise. The stored
/// representation is unique, so this is equality of the whole family.
pub fn chiral_difference(x: &ChiralData, y: &ChiralData) -> Option<Witness> {
    if x.basis_names() != y.basis_names() {
        return mismatch(vec![], vec![], "basis names differ".into());
    }
    for i in 0..x.rank() {
        if x.derivation().image(i) != y.derivation().image(i) {
            return mismatch(vec![("u".into(), x.name(i).into())], vec![], "D differs".into());
        }
    }
    let keys: std::collections::BTreeSet<_> = x.generating().keys().chain(y.generating().keys()).collect();
    for &(i, n, j) in keys {
        if x.generating().get(&(i, n, j)) != y.generating().get(&(i, n, j)) {
            return mismatch(
                vec![("u".into(), x.name(i).into()), ("v".into(), x.name(j).into())],
                vec![("n".into(), n), ("m".into(), 0)],
                "B layers differ".into(),
            );
        }
    }
    let keys: std::collections::BTreeSet<_> = x.explicit().keys().chain(y.explicit().keys()).collect();
    for &(i, j, n, m) in keys {
        if x.explicit().get(&(i, j, n, m)) != y.explicit().get(&(i, j, n, m)) {
            return mismatch(
                vec![("u".into(), x.name(i).into()), ("v".into(), x.name(j).into())],
                vec![("n".into(), n), ("m".into(), m as i64)],
                "explicit B entries differ".into(),
            );
        }
    }
    if x.declared_bounds() != y.declared_bounds() {
        return mismatch(vec![], vec![], "support bounds differ".into());
    }
    None
}

/// `chiral_to_va(va_to_chiral(v)) == v`. Algebras over `Q` are lifted
/// first and compared after lifting.
pub fn roundtrip_va(v: &VAData) -> Result<TranslationReport> {
    let lifted = match v.coeff_ring() {
        CoeffRing::Q => v.tensor_with_ox()?,
        CoeffRing::Qz => v.clone(),
    };
    let back = chiral_to_va(&va_to_chiral(&lifted)?)?;
    let witness = va_difference(&lifted, &back);
    Ok(TranslationReport {
        direction: "va -> chiral -> va".into(),
        exact: witness.is_none(),
        witness,
    })
}

/// `va_to_chiral(chiral_to_va(a)) == a`: the family is recovered from its
/// `m = 0` layer alone.
pub fn roundtrip_chiral(a: &ChiralData) -> Result<TranslationReport> {
    let back = va_to_chiral(&chiral_to_va(a)?)?;
    let witness = chiral_difference(a, &back);
    Ok(TranslationReport {
        direction: "chiral -> va -> chiral".into(),
        exact: witness.is_none(),
        witness,
    })
}

/// Verdicts of corresponding axioms on both sides of the translation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub va: VaVerdicts,
    pub chiral: ChiralVerdicts,
}

impl CrossCheck {
    /// `(name, vertex side, chiral side)` for the three paired axioms.
    pub fn pairs(&self) -> [(&'static str, bool, bool); 3] {
        [
            ("d-derivative / d-module", self.va.d_derivative, self.chiral.recursion && self.chiral.d1),
            ("skew-symmetry", self.va.skew, self.chiral.skew),
            ("jacobi", self.va.jacobi, self.chiral.jacobi),
        ]
    }

    pub fn agree(&self) -> bool {
        self.pairs().iter().all(|(_, a, b)| a == b)
    }
}

/// Runs both checker suites on `v` and on its (unchecked) translation.
pub fn cross_check(v: &VAData, over: &WindowOverride) -> Result<CrossCheck> {
    let lifted = match v.coeff_ring() {
        CoeffRing::Q => v.tensor_with_ox()?,
        CoeffRing::Qz => v.clone(),
    };
    let (_, va) = va_checks(&lifted, over);
    let (_, chiral) = chiral_checks(&va_to_chiral_unchecked(&lifted)?, over);
    Ok(CrossCheck { va, chiral })
}
