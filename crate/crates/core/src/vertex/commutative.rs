use std::collections::BTreeMap;

use super::{CoeffRing, VAData};
use crate::error::{Error, Result};
use crate::exact::inv_factorial;
use crate::linear::{Derivation, Vector};

/// Finite-dimensional commutative associative algebra over `Q` with a
/// derivation, given by structure constants in a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutativeAlgebra {
    pub basis_names: Vec<String>,
    /// `mult[i][j] = e_i e_j`.
    pub mult: Vec<Vec<Vector>>,
    pub derivation: Derivation,
}

impl CommutativeAlgebra {
    pub fn rank(&self) -> usize {
        self.basis_names.len()
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let r = self.rank();
        let mut out = Vector::zero(r);
        for (i, f) in x.coords().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (j, g) in y.coords().iter().enumerate() {
                if !g.is_zero() {
                    out.add_scaled(&(f * g), &self.mult[i][j]);
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        let r = self.rank();
        let shape_ok = self.mult.len() == r
            && self.mult.iter().all(|row| row.len() == r && row.iter().all(|v| v.rank() == r && v.is_constant()))
            && self.derivation.rank() == r
            && self.derivation.is_constant();
        if !shape_ok {
            return Err(Error::contract(format!("multiplication and derivation must be constant {r}x{r} data")));
        }
        for i in 0..r {
            for j in 0..r {
                if self.mult[i][j] != self.mult[j][i] {
                    return Err(Error::NotCommutative(i, j));
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let left = self.mul(&self.mult[i][j], &Vector::basis(r, k));
                    let right = self.mul(&Vector::basis(r, i), &self.mult[j][k]);
                    if left != right {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        let d = &self.derivation;
        for i in 0..r {
            for j in 0..r {
                let lhs = d.apply(&self.mult[i][j]);
                let mut rhs = self.mul(d.image(i), &Vector::basis(r, j));
                rhs.add_assign(&self.mul(&Vector::basis(r, i), d.image(j)));
                if lhs != rhs {
                    return Err(Error::NotADerivation(i, j));
                }
            }
        }
        Ok(())
    }
}

/// The vertex algebra of a commutative algebra with nilpotent derivation:
/// `u_{-1-k} v = (D^k u / k!) v` and `u_n v = 0` for `n >= 0`.
///
/// With `D^N = 0` and `D^(N-1) != 0` the support is `[-N, -1]`, declared
/// for every pair.
pub fn make_commutative_va(alg: &CommutativeAlgebra) -> Result<VAData> {
    alg.validate()?;
    let r = alg.rank();
    let d = &alg.derivation;
    let cap = r as u32 + 1;
    let mut nil = 0;
    for i in 0..r {
        match d.annihilation_index(&Vector::basis(r, i), cap) {
            Some(k) => nil = nil.max(k),
            None => return Err(Error::NotNilpotent(cap as usize)),
        }
    }
    let mut entries = Vec::new();
    for i in 0..r {
        let mut du = Vector::basis(r, i);
        for k in 0..nil {
            let scaled = du.scale(&inv_factorial(k));
            for j in 0..r {
                let v = alg.mul(&scaled, &Vector::basis(r, j));
                if !v.is_zero() {
                    entries.push(((i, -1 - k as i64, j), v));
                }
            }
            du = d.apply(&du);
        }
    }
    let bounds = (nil > 0).then(|| {
        let mut b = BTreeMap::new();
        for i in 0..r {
            for j in 0..r {
                b.insert((i, j), (-(nil as i64), -1));
            }
        }
        b
    });
    VAData::new(CoeffRing::Q, alg.basis_names.clone(), d.clone(), entries, bounds)
}
