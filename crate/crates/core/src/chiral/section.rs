use std::collections::BTreeMap;
use std::fmt;

use crate::exact::{rat, Rational};
use crate::linear::{Derivation, Vector};

/// `sum_k d1^k (x) Delta_*(a_k)`: a section of the diagonal direct image,
/// stored by `d1`-degree. Zero layers are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagSection {
    rank: usize,
    layers: BTreeMap<u32, Vector>,
}

impl DiagSection {
    pub fn zero(rank: usize) -> Self {
        DiagSection {
            rank,
            layers: BTreeMap::new(),
        }
    }

    pub fn from_layers(rank: usize, layers: impl IntoIterator<Item = (u32, Vector)>) -> Self {
        let mut s = DiagSection::zero(rank);
        for (k, v) in layers {
            s.add_at(k, &v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layers(&self) -> &BTreeMap<u32, Vector> {
        &self.layers
    }

    pub fn layer(&self, k: u32) -> Vector {
        self.layers.get(&k).cloned().unwrap_or_else(|| Vector::zero(self.rank))
    }

    /// Adds `v` to layer `k`.
    pub fn add_at(&mut self, k: u32, v: &Vector) {
        self.add_scaled_at(k, &rat(1), v);
    }

    pub fn add_scaled_at(&mut self, k: u32, c: &Rational, v: &Vector) {
        if v.is_zero() {
            return;
        }
        let mut cur = self.layer(k);
        cur.add_rat_scaled(c, v);
        if cur.is_zero() {
            self.layers.remove(&k);
        } else {
            self.layers.insert(k, cur);
        }
    }

    pub fn add(&self, other: &DiagSection) -> DiagSection {
        let mut out = self.clone();
        for (&k, v) in &other.layers {
            out.add_at(k, v);
        }
        out
    }

    pub fn sub(&self, other: &DiagSection) -> DiagSection {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> DiagSection {
        DiagSection::from_layers(self.rank, self.layers.iter().map(|(&k, v)| (k, v.scale(c))))
    }

    /// Multiplication by `z1 - z2`: `out(k) = -(k+1) in(k+1)`.
    pub fn mul_z12(&self) -> DiagSection {
        DiagSection::from_layers(
            self.rank,
            self.layers
                .iter()
                .filter(|(&k, _)| k > 0)
                .map(|(&k, v)| (k - 1, v.scale(&rat(-(k as i64))))),
        )
    }

    /// `d/dz1`: raises every layer by one.
    pub fn apply_d1(&self) -> DiagSection {
        DiagSection {
            rank: self.rank,
            layers: self.layers.iter().map(|(&k, v)| (k + 1, v.clone())).collect(),
        }
    }

    /// `d/dz2 = (d/dz1 + d/dz2) - d/dz1`, where the sum acts through the
    /// diagonal as `D`: `out(k) += D in(k)`, `out(k+1) -= in(k)`.
    pub fn apply_d2(&self, d: &Derivation) -> DiagSection {
        let mut out = DiagSection::zero(self.rank);
        for (&k, v) in &self.layers {
            out.add_at(k, &d.apply(v));
            out.add_scaled_at(k + 1, &rat(-1), v);
        }
        out
    }

    /// Applies `D` to every layer.
    pub fn apply_d_layerwise(&self, d: &Derivation) -> DiagSection {
        DiagSection::from_layers(self.rank, self.layers.iter().map(|(&k, v)| (k, d.apply(v))))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> NamedSection<'a> {
        NamedSection { s: self, names }
    }
}

pub struct NamedSection<'a> {
    s: &'a DiagSection,
    names: &'a [String],
}

impl fmt::Display for NamedSection<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .s
            .layers
            .iter()
            .map(|(k, v)| format!("{k}: {}", v.display_with(self.names)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `sum_{k,l} d1^k d2^l (x) (Delta_3)_*(a_kl)`, stored by `(k, l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diag3Section {
    rank: usize,
    layers: BTreeMap<(u32, u32), Vector>,
}

impl Diag3Section {
    pub fn zero(rank: usize) -> Self {
        Diag3Section {
            rank,
            layers: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn layers(&self) -> &BTreeMap<(u32, u32), Vector> {
        &self.layers
    }

    pub fn layer(&self, k: u32, l: u32) -> Vector {
        self.layers.get(&(k, l)).cloned().unwrap_or_else(|| Vector::zero(self.rank))
    }

    pub fn add_scaled_at(&mut self, kl: (u32, u32), c: &Rational, v: &Vector) {
        if v.is_zero() || num_traits::Zero::is_zero(c) {
            return;
        }
        let mut cur = self.layer(kl.0, kl.1);
        cur.add_rat_scaled(c, v);
        if cur.is_zero() {
            self.layers.remove(&kl);
        } else {
            self.layers.insert(kl, cur);
        }
    }

    pub fn add(&self, other: &Diag3Section) -> Diag3Section {
        let mut out = self.clone();
        for (&kl, v) in &other.layers {
            out.add_scaled_at(kl, &rat(1), v);
        }
        out
    }

    pub fn sub(&self, other: &Diag3Section) -> Diag3Section {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Diag3Section {
        let mut out = Diag3Section::zero(self.rank);
        for (&kl, v) in &self.layers {
            out.add_scaled_at(kl, c, v);
        }
        out
    }

    /// Swaps the roles of `d1` and `d2`.
    pub fn transpose(&self) -> Diag3Section {
        Diag3Section {
            rank: self.rank,
            layers: self.layers.iter().map(|(&(k, l), v)| ((l, k), v.clone())).collect(),
        }
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> NamedSection3<'a> {
        NamedSection3 { s: self, names }
    }
}

pub struct NamedSection3<'a> {
    s: &'a Diag3Section,
    names: &'a [String],
}

impl fmt::Display for NamedSection3<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .s
            .layers
            .iter()
            .map(|((k, l), v)| format!("({k},{l}): {}", v.display_with(self.names)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
