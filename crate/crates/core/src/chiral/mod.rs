//! Chiral algebras on the affine line in the global-sections model.
//!
//! The chiral bracket `mu` is recorded by its values on generators
//! `(z1 - z2)^n (u (x) v)`:
//!
//! `mu((z1 - z2)^n (u (x) v)) = sum_m d1^m (x) Delta_*(B^n_m(u, v))`.
//!
//! A [`ChiralData`] stores the family `B` as a generating table `G` plus a
//! finite table `E` of explicit corrections:
//!
//! `B^n_m(e_i, e_j) = (-1)^m / m! G(i, n + m, j) + E(i, j, n, m)`.
//!
//! The `G` part satisfies the recursion `B^{n+1}_m = -(m+1) B^n_{m+1}`
//! identically, so a family with `E = 0` is determined by its `m = 0`
//! layer. A nonzero finite `E` always breaks the recursion somewhere.

mod checks;
mod compose;
mod section;
#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exact::{inv_factorial, rat, sign_pow, Rational};
use crate::linear::{Derivation, Vector};
use crate::vertex::NILPOTENCY_CAP;

pub use checks::{chiral_checks, ChiralVerdicts};
pub use compose::{compose_left, compose_right, sigma12_triple};
pub use section::{Diag3Section, DiagSection};

/// `(i, p, j)`: the `m = 0` value `B^p_0(e_i, e_j)` of the closed part.
pub type GenKey = (usize, i64, usize);
/// `(i, j, n, m)`: an explicit correction to `B^n_m(e_i, e_j)`.
pub type ExplicitKey = (usize, usize, i64, u32);

/// The generator `(z1 - z2)^n (u (x) v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiralGenerator {
    pub n: i64,
    pub u: Vector,
    pub v: Vector,
}

impl ChiralGenerator {
    pub fn new(n: i64, u: Vector, v: Vector) -> Self {
        ChiralGenerator { n, u, v }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiralData {
    basis_names: Vec<String>,
    d: Derivation,
    generating: BTreeMap<GenKey, Vector>,
    explicit: BTreeMap<ExplicitKey, Vector>,
    bounds: Option<BTreeMap<(usize, usize), (i64, i64)>>,
    shift: u32,
    band: (i64, i64),
}

impl ChiralData {
    /// Validates shapes and rejects data on which `D` is not nilpotent.
    /// Zero values are dropped.
    pub fn new(
        basis_names: Vec<String>,
        d: Derivation,
        generating: impl IntoIterator<Item = (GenKey, Vector)>,
        explicit: impl IntoIterator<Item = (ExplicitKey, Vector)>,
        bounds: Option<BTreeMap<(usize, usize), (i64, i64)>>,
    ) -> Result<Self> {
        let r = basis_names.len();
        if d.rank() != r || d.images().iter().any(|v| v.rank() != r) {
            return Err(Error::contract(format!("D must be a {r}x{r} matrix")));
        }
        let mut seen = BTreeSet::new();
        for name in &basis_names {
            if !seen.insert(name) {
                return Err(Error::contract(format!("duplicate basis name '{name}'")));
            }
        }
        let mut gen = BTreeMap::new();
        for ((i, p, j), v) in generating {
            if i >= r || j >= r || v.rank() != r {
                return Err(Error::contract(format!("B entry ({i}, {j}, n={p}, m=0) does not fit rank {r}")));
            }
            if gen.contains_key(&(i, p, j)) {
                return Err(Error::contract(format!("B entry ({i}, {j}, n={p}, m=0) given twice")));
            }
            if !v.is_zero() {
                gen.insert((i, p, j), v);
            }
        }
        let mut expl = BTreeMap::new();
        for ((i, j, n, m), v) in explicit {
            if i >= r || j >= r || v.rank() != r {
                return Err(Error::contract(format!("B entry ({i}, {j}, n={n}, m={m}) does not fit rank {r}")));
            }
            if expl.contains_key(&(i, j, n, m)) {
                return Err(Error::contract(format!("B entry ({i}, {j}, n={n}, m={m}) given twice")));
            }
            if !v.is_zero() {
                expl.insert((i, j, n, m), v);
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
        let values = gen
            .iter()
            .map(|(&(i, p, j), v)| (i, p, j, v))
            .chain(expl.iter().map(|(&(i, j, n, m), v)| (i, n + m as i64, j, v)));
        for (i, n, j, v) in values {
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
        let band = band_of(&gen, &expl, bounds.as_ref());
        Ok(ChiralData {
            basis_names,
            d,
            generating: gen,
            explicit: expl,
            bounds,
            shift,
            band,
        })
    }

    /// Data given entirely by an explicit finite table of `B^n_m`.
    pub fn from_explicit(
        basis_names: Vec<String>,
        d: Derivation,
        entries: impl IntoIterator<Item = (ExplicitKey, Vector)>,
        bounds: Option<BTreeMap<(usize, usize), (i64, i64)>>,
    ) -> Result<Self> {
        ChiralData::new(basis_names, d, std::iter::empty(), entries, bounds)
    }

    pub fn rank(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis_names[i]
    }

    pub fn basis(&self, i: usize) -> Vector {
        Vector::basis(self.rank(), i)
    }

    pub fn derivation(&self) -> &Derivation {
        &self.d
    }

    pub fn generating(&self) -> &BTreeMap<GenKey, Vector> {
        &self.generating
    }

    pub fn explicit(&self) -> &BTreeMap<ExplicitKey, Vector> {
        &self.explicit
    }

    pub fn declared_bounds(&self) -> Option<&BTreeMap<(usize, usize), (i64, i64)>> {
        self.bounds.as_ref()
    }

    /// True when the family is determined by its `m = 0` layer.
    pub fn is_closed_form(&self) -> bool {
        self.explicit.is_empty()
    }

    /// Largest annihilation index of `D` over all stored values.
    pub fn derivation_shift(&self) -> u32 {
        self.shift
    }

    /// Hull `[dmin, dmax]` of `n + m` over all nonzero `B^n_m`, widened by
    /// the declared bounds; `(0, -1)` when empty. `dmax` plays the role of
    /// the regularity bound: `B^n_m = 0` for `n > dmax`.
    pub fn band(&self) -> (i64, i64) {
        self.band
    }

    /// Range of `n` over explicit corrections, if there are any.
    pub fn explicit_rows(&self) -> Option<(i64, i64)> {
        let ns = self.explicit.keys().map(|&(_, _, n, _)| n);
        let lo = ns.clone().min()?;
        Some((lo, ns.max()?))
    }

    /// `B^n_m(e_i, e_j)`.
    pub fn b(&self, i: usize, j: usize, n: i64, m: u32) -> Vector {
        let mut out = match self.generating.get(&(i, n + m as i64, j)) {
            Some(g) => g.scale(&(sign_pow(m as i64) * inv_factorial(m))),
            None => Vector::zero(self.rank()),
        };
        if let Some(e) = self.explicit.get(&(i, j, n, m)) {
            out.add_assign(e);
        }
        out
    }

    /// `B^n_m(u, v)`, extended bilinearly over `Q[z]`.
    pub fn b_vec(&self, u: &Vector, n: i64, m: u32, v: &Vector) -> Vector {
        let mut out = Vector::zero(self.rank());
        let (lo, hi) = self.band();
        let p = n + m as i64;
        if p < lo || p > hi {
            return out;
        }
        for (i, f) in u.coords().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (j, g) in v.coords().iter().enumerate() {
                if !g.is_zero() {
                    out.add_scaled(&(f * g), &self.b(i, j, n, m));
                }
            }
        }
        out
    }

    /// Layers `m` with `B^n_m` possibly nonzero.
    pub fn layers_for(&self, n: i64) -> std::ops::RangeInclusive<u32> {
        let (lo, hi) = self.band();
        if n > hi {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        ((lo - n).max(0) as u32)..=((hi - n) as u32)
    }

    /// `mu((z1 - z2)^n (u (x) v))` as a section over the diagonal.
    pub fn mu_eval(&self, g: &ChiralGenerator) -> DiagSection {
        self.mu(g.n, &g.u, &g.v)
    }

    pub(crate) fn mu(&self, n: i64, u: &Vector, v: &Vector) -> DiagSection {
        DiagSection::from_layers(self.rank(), self.layers_for(n).map(|m| (m, self.b_vec(u, n, m, v))))
    }

    pub fn apply_d(&self, u: &Vector) -> Vector {
        self.d.apply(u)
    }

    /// Adds `delta` to `B^n_m(e_i, e_j)`.
    pub fn with_correction(&self, key: ExplicitKey, delta: &Vector) -> Result<ChiralData> {
        let mut expl = self.explicit.clone();
        let cur = expl.remove(&key).unwrap_or_else(|| Vector::zero(self.rank()));
        expl.insert(key, cur.sum(delta));
        ChiralData::new(
            self.basis_names.clone(),
            self.d.clone(),
            self.generating.clone(),
            expl,
            self.bounds.clone(),
        )
    }

    /// Negates `B^n_m(e_i, e_j)` for the single ordered pair `(i, j)`.
    pub fn with_pair_negated(&self, i: usize, j: usize) -> ChiralData {
        let mut out = self.clone();
        let minus = rat(-1);
        for (k, v) in out.generating.iter_mut() {
            if k.0 == i && k.2 == j {
                *v = v.scale(&minus);
            }
        }
        for (k, v) in out.explicit.iter_mut() {
            if k.0 == i && k.1 == j {
                *v = v.scale(&minus);
            }
        }
        out
    }

    /// The whole family scaled by `c`.
    pub fn scaled(&self, c: &Rational) -> Result<ChiralData> {
        ChiralData::new(
            self.basis_names.clone(),
            self.d.clone(),
            self.generating.iter().map(|(k, v)| (*k, v.scale(c))),
            self.explicit.iter().map(|(k, v)| (*k, v.scale(c))),
            self.bounds.clone(),
        )
    }
}

fn band_of(
    gen: &BTreeMap<GenKey, Vector>,
    expl: &BTreeMap<ExplicitKey, Vector>,
    bounds: Option<&BTreeMap<(usize, usize), (i64, i64)>>,
) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    let mut see = |p: i64| {
        lo = lo.min(p);
        hi = hi.max(p);
    };
    gen.keys().for_each(|&(_, p, _)| see(p));
    expl.keys().for_each(|&(_, _, n, m)| see(n + m as i64));
    if let Some(b) = bounds {
        for &(l, h) in b.values() {
            see(l);
            see(h);
        }
    }
    if lo > hi {
        (0, -1)
    } else {
        (lo, hi)
    }
}

/// Multiplication by `z1 - z2`.
pub fn diag_mul_z12(s: &DiagSection) -> DiagSection {
    s.mul_z12()
}

/// `d/dz1` on sections over the diagonal.
pub fn diag_apply_d1(s: &DiagSection) -> DiagSection {
    s.apply_d1()
}

/// `d/dz2` on sections over the diagonal, through `d1 + d2 = D`.
pub fn diag_apply_d2(s: &DiagSection, d: &Derivation) -> DiagSection {
    s.apply_d2(d)
}
