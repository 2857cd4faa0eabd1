//! Coordinate vectors over `Q[z]` against a fixed finite basis, the
//! derivation `D`, and constant change-of-basis matrices.

use std::fmt;

use num_traits::{One, Zero};

use crate::exact::{format_rational, Poly, Rational};

/// Element of the free module `Q[z]^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector(Vec<Poly>);

impl Vector {
    pub fn zero(rank: usize) -> Self {
        Vector(vec![Poly::zero(); rank])
    }

    /// Basis vector `e_i`.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Vector::zero(rank);
        v.0[i] = Poly::one();
        v
    }

    pub fn from_polys(coords: Vec<Poly>) -> Self {
        Vector(coords)
    }

    pub fn from_rationals(coords: Vec<Rational>) -> Self {
        Vector(coords.into_iter().map(Poly::constant).collect())
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Vector(coords.iter().map(|&c| Poly::from_ints(&[c])).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Poly] {
        &self.0
    }

    pub fn coord(&self, i: usize) -> &Poly {
        &self.0[i]
    }

    pub fn coord_mut(&mut self, i: usize) -> &mut Poly {
        &mut self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(Poly::is_constant)
    }

    pub fn max_degree(&self) -> usize {
        self.0.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn add_assign(&mut self, other: &Vector) {
        debug_assert_eq!(self.rank(), other.rank());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a = &*a + b;
            }
        }
    }

    /// `self += f * other`.
    pub fn add_scaled(&mut self, f: &Poly, other: &Vector) {
        if f.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a = &*a + &(f * b);
            }
        }
    }

    /// `self += c * other` for a scalar `c`.
    pub fn add_rat_scaled(&mut self, c: &Rational, other: &Vector) {
        if c.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            if !b.is_zero() {
                *a = &*a + &b.scale(c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        Vector(self.0.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_poly(&self, f: &Poly) -> Vector {
        Vector(self.0.iter().map(|p| f * p).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|p| -p).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn sum(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Renders the vector in terms of basis names, e.g. `t^2 + (z)*t`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> NamedVector<'a> {
        NamedVector { v: self, names }
    }
}

pub struct NamedVector<'a> {
    v: &'a Vector,
    names: &'a [String],
}

impl fmt::Display for NamedVector<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, p) in self.v.0.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let name = self.names.get(i).map(String::as_str).unwrap_or("?");
            if p == &Poly::one() {
                write!(f, "{name}")?;
            } else if p == &-&Poly::one() {
                write!(f, "-{name}")?;
            } else if p.is_constant() {
                write!(f, "{}*{name}", format_rational(&p.coeff(0)))?;
            } else {
                write!(f, "({p})*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The operator `D` on `Q[z]^r`, acting by
/// `D(f e_i) = f' e_i + f D(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    images: Vec<Vector>,
}

impl Derivation {
    /// `images[i]` is `D(e_i)`.
    pub fn new(images: Vec<Vector>) -> Self {
        Derivation { images }
    }

    pub fn zero(rank: usize) -> Self {
        Derivation {
            images: vec![Vector::zero(rank); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Vector] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Vector {
        &self.images[i]
    }

    pub fn is_constant(&self) -> bool {
        self.images.iter().all(Vector::is_constant)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero(v.rank());
        for (i, f) in v.coords().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            *out.coord_mut(i) = out.coord(i) + &f.derive();
            out.add_scaled(f, &self.images[i]);
        }
        out
    }

    pub fn apply_pow(&self, v: &Vector, k: u32) -> Vector {
        let mut out = v.clone();
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = self.apply(&out);
        }
        out
    }

    /// Smallest `k` with `D^k v = 0`, searching up to `cap`.
    pub fn annihilation_index(&self, v: &Vector, cap: u32) -> Option<u32> {
        let mut cur = v.clone();
        for k in 0..=cap {
            if cur.is_zero() {
                return Some(k);
            }
            cur = self.apply(&cur);
        }
        None
    }
}

/// Square matrix over `Q`, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        };
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        QMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        let n = self.n;
        let mut out = vec![Rational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        QMatrix { n, entries: out }
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.n;
        let mut a: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut inv: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= p.clone();
                inv[col][j] /= p.clone();
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let (ac, ic) = (a[col][j].clone(), inv[col][j].clone());
                    a[r][j] -= &f * ac;
                    inv[r][j] -= &f * ic;
                }
            }
        }
        Some(QMatrix::from_rows(inv))
    }

    /// Coordinates of `v` after applying the matrix to the coordinate
    /// column: `out_i = sum_j M_ij v_j`.
    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let c = self.get(i, j);
                if !c.is_zero() {
                    let term = v.coord(j).scale(c);
                    *out.coord_mut(i) = out.coord(i) + &term;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> QMatrix {
        let n = self.n;
        QMatrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| self.get(j, i).clone()).collect())
                .collect(),
        )
    }
}
