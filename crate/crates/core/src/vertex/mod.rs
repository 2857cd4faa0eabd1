//! Vertex algebras without vacuum as finite structure-constant tables.
//!
//! An algebra is a free module with basis `e_0, ..., e_{r-1}` over `Q` or
//! `Q[z]`, a table `(i, n, j) -> (e_i)_n e_j` and an operator `D`.

pub(crate) mod checks;
mod commutative;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linear::{Derivation, QMatrix, Vector};

pub use checks::{jacobi_terms, va_checks, VaVerdicts};
pub use commutative::{make_commutative_va, CommutativeAlgebra};

/// Annihilation search depth for `D` on structure values.
pub const NILPOTENCY_CAP: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoeffRing {
    /// Plain vertex algebra over the rationals.
    Q,
    /// Over the affine line, `O(X) = Q[z]`.
    Qz,
}

impl CoeffRing {
    pub fn name(self) -> &'static str {
        match self {
            CoeffRing::Q => "Q",
            CoeffRing::Qz => "Q[z]",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "Q" => Some(CoeffRing::Q),
            "Q[z]" => Some(CoeffRing::Qz),
            _ => None,
        }
    }
}

pub type Key = (usize, i64, usize);

/// Structure constants of a vertex algebra without vacuum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VAData {
    coeff_ring: CoeffRing,
    basis_names: Vec<String>,
    d: Derivation,
    table: BTreeMap<Key, Vector>,
    bounds: Option<BTreeMap<(usize, usize), (i64, i64)>>,
    shift: u32,
}

impl VAData {
    /// Validates shapes and rejects tables on which `D` is not nilpotent.
    /// Zero entries are dropped. Declared bounds are kept as given; whether
    /// the table respects them is a checker question, not a shape one.
    pub fn new(
        coeff_ring: CoeffRing,
        basis_names: Vec<String>,
        d: Derivation,
        entries: impl IntoIterator<Item = (Key, Vector)>,
        bounds: Option<BTreeMap<(usize, usize), (i64, i64)>>,
    ) -> Result<Self> {
        let r = basis_names.len();
        if d.rank() != r || d.images().iter().any(|v| v.rank() != r) {
            return Err(Error::contract(format!("D must be a {r}x{r} matrix")));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &basis_names {
            if !seen.insert(name) {
                return Err(Error::contract(format!("duplicate basis name '{name}'")));
            }
        }
        if coeff_ring == CoeffRing::Q && !d.is_constant() {
            return Err(Error::contract("D has non-constant entries over Q"));
        }
        let mut table = BTreeMap::new();
        for ((i, n, j), v) in entries {
            if i >= r || j >= r || v.rank() != r {
                return Err(Error::contract(format!("structure entry ({i}, {n}, {j}) does not fit rank {r}")));
            }
            if coeff_ring == CoeffRing::Q && !v.is_constant() {
                return Err(Error::contract(format!("entry ({i}, {n}, {j}) is not constant over Q")));
            }
            if table.contains_key(&(i, n, j)) {
                return Err(Error::contract(format!("entry ({i}, {n}, {j}) given twice")));
            }
            if !v.is_zero() {
                table.insert((i, n, j), v);
            }
        }
        if let Some(b) = &bounds {
            for (&(i, j), &(lo, hi)) in b {
                if i >= r || j >= r || lo > hi {
                    return Err(Error::contract(format!("bad support bound for pair ({i}, {j})")));
                }
            }
        }
        let mut shift = 0;
        for (&(i, n, j), v) in &table {
            match d.annihilation_index(v, NILPOTENCY_CAP) {
                Some(k) => shift = shift.max(k),
                None => {
                    return Err(Error::InfiniteSupport {
                        i,
                        n,
                        j,
                        cap: NILPOTENCY_CAP,
                    })
                }
            }
        }
        Ok(VAData {
            coeff_ring,
            basis_names,
            d,
            table,
            bounds,
            shift,
        })
    }

    /// Default names `e0, e1, ...`.
    pub fn default_names(rank: usize) -> Vec<String> {
        (0..rank).map(|i| format!("e{i}")).collect()
    }

    pub fn rank(&self) -> usize {
        self.basis_names.len()
    }

    pub fn coeff_ring(&self) -> CoeffRing {
        self.coeff_ring
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis_names[i]
    }

    pub fn derivation(&self) -> &Derivation {
        &self.d
    }

    pub fn table(&self) -> &BTreeMap<Key, Vector> {
        &self.table
    }

    pub fn declared_bounds(&self) -> Option<&BTreeMap<(usize, usize), (i64, i64)>> {
        self.bounds.as_ref()
    }

    /// Largest `k` needed for `D^k` to kill every structure value.
    pub fn derivation_shift(&self) -> u32 {
        self.shift
    }

    pub fn basis(&self, i: usize) -> Vector {
        Vector::basis(self.rank(), i)
    }

    pub fn entry(&self, i: usize, n: i64, j: usize) -> Option<&Vector> {
        self.table.get(&(i, n, j))
    }

    /// Smallest and largest mode over declared bounds and stored entries;
    /// `(0, -1)` when there is nothing at all.
    pub fn support_hull(&self) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for &(_, n, _) in self.table.keys() {
            lo = lo.min(n);
            hi = hi.max(n);
        }
        if let Some(b) = &self.bounds {
            for &(l, h) in b.values() {
                lo = lo.min(l);
                hi = hi.max(h);
            }
        }
        if lo > hi {
            (0, -1)
        } else {
            (lo, hi)
        }
    }

    /// `(e_i)_n y` for an arbitrary vector `y`.
    pub fn mode_basis_left(&self, i: usize, n: i64, y: &Vector) -> Vector {
        let mut out = Vector::zero(self.rank());
        for (j, g) in y.coords().iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            if let Some(v) = self.table.get(&(i, n, j)) {
                out.add_scaled(g, v);
            }
        }
        out
    }

    /// `x_n (e_j)` for an arbitrary vector `x`.
    pub fn mode_basis_right(&self, x: &Vector, n: i64, j: usize) -> Vector {
        let mut out = Vector::zero(self.rank());
        for (i, f) in x.coords().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            if let Some(v) = self.table.get(&(i, n, j)) {
                out.add_scaled(f, v);
            }
        }
        out
    }

    /// The mode `u_n v`, extended bilinearly over the coefficient ring.
    pub fn vertex_coeff(&self, u: &Vector, n: i64, v: &Vector) -> Vector {
        let mut out = Vector::zero(self.rank());
        for (i, f) in u.coords().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (j, g) in v.coords().iter().enumerate() {
                if g.is_zero() {
                    continue;
                }
                if let Some(w) = self.table.get(&(i, n, j)) {
                    out.add_scaled(&(f * g), w);
                }
            }
        }
        out
    }

    pub fn apply_d(&self, u: &Vector) -> Vector {
        self.d.apply(u)
    }

    /// Same table read over `Q[z]`.
    pub fn tensor_with_ox(&self) -> Result<VAData> {
        if self.coeff_ring != CoeffRing::Q {
            return Err(Error::contract("tensor_with_ox expects an algebra over Q"));
        }
        let mut out = self.clone();
        out.coeff_ring = CoeffRing::Qz;
        Ok(out)
    }

    /// Re-expresses the algebra in the basis `f_a = sum_i m[a][i] e_i`.
    /// Declared bounds become the global hull for every pair.
    pub fn change_basis(&self, m: &QMatrix, names: Vec<String>) -> Result<VAData> {
        let r = self.rank();
        if m.size() != r || names.len() != r {
            return Err(Error::contract("change of basis has the wrong size"));
        }
        let to_new = m
            .transpose()
            .inverse()
            .ok_or_else(|| Error::contract("change of basis is singular"))?;
        let rows: Vec<Vector> = (0..r)
            .map(|a| Vector::from_rationals((0..r).map(|i| m.get(a, i).clone()).collect()))
            .collect();
        let images = rows.iter().map(|f| to_new.apply(&self.d.apply(f))).collect();
        let (lo, hi) = self.support_hull();
        let mut entries = Vec::new();
        if lo <= hi {
            for a in 0..r {
                for b in 0..r {
                    for n in lo..=hi {
                        let v = to_new.apply(&self.vertex_coeff(&rows[a], n, &rows[b]));
                        if !v.is_zero() {
                            entries.push(((a, n, b), v));
                        }
                    }
                }
            }
        }
        let bounds = self.bounds.as_ref().map(|_| {
            let mut b = BTreeMap::new();
            for a in 0..r {
                for c in 0..r {
                    b.insert((a, c), (lo, hi));
                }
            }
            b
        });
        VAData::new(self.coeff_ring, names, Derivation::new(images), entries, bounds)
    }

    /// Copy with one table entry replaced; a zero value removes it.
    pub fn with_entry(&self, key: Key, value: Vector) -> Result<VAData> {
        let mut entries: BTreeMap<Key, Vector> = self.table.clone();
        entries.insert(key, value);
        VAData::new(
            self.coeff_ring,
            self.basis_names.clone(),
            self.d.clone(),
            entries,
            self.bounds.clone(),
        )
    }

    /// Copy with a different `D`.
    pub fn with_derivation(&self, d: Derivation) -> Result<VAData> {
        VAData::new(
            self.coeff_ring,
            self.basis_names.clone(),
            d,
            self.table.clone(),
            self.bounds.clone(),
        )
    }

    /// Polynomial degree bound of all data, used by random tests.
    pub fn max_degree(&self) -> usize {
        self.table
            .values()
            .chain(self.d.images())
            .map(Vector::max_degree)
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests;
