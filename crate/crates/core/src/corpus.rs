//! Example algebras: the truncated polynomial algebra `A3`, the trivial
//! algebra, seeded random commutative algebras with nilpotent derivations,
//! and single-constant mutations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{rat, Rational};
use crate::linear::{Derivation, QMatrix, Vector};
use crate::vertex::{make_commutative_va, CommutativeAlgebra, Key, VAData};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Multiplication table of a monomial algebra: `e_i e_j = e_{prod(i, j)}`.
fn monomial_mult(r: usize, prod: impl Fn(usize, usize) -> Option<usize>) -> Vec<Vec<Vector>> {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| match prod(i, j) {
                    Some(k) => Vector::basis(r, k),
                    None => Vector::zero(r),
                })
                .collect()
        })
        .collect()
}

/// `Q[t]/(t^k)` with `D = g(t) d/dt`, `g = sum_p g[p] t^p`.
pub fn truncated_poly(k: usize, g: &[Rational]) -> CommutativeAlgebra {
    let images = (0..k)
        .map(|p| {
            let mut v = Vector::zero(k);
            for (q, c) in g.iter().enumerate() {
                // p t^(p-1) * c t^q
                if p >= 1 && p - 1 + q < k {
                    let deg = p - 1 + q;
                    *v.coord_mut(deg) = v.coord(deg) + &crate::exact::Poly::constant(c * rat(p as i64));
                }
            }
            v
        })
        .collect();
    let basis_names = (0..k)
        .map(|p| match p {
            0 => "1".to_string(),
            1 => "t".to_string(),
            _ => format!("t^{p}"),
        })
        .collect();
    CommutativeAlgebra {
        basis_names,
        mult: monomial_mult(k, |i, j| (i + j < k).then_some(i + j)),
        derivation: Derivation::new(images),
    }
}

/// `Q[t]/(t^3)` with `D = t^2 d/dt`.
pub fn a3_algebra() -> CommutativeAlgebra {
    truncated_poly(3, &[rat(0), rat(0), rat(1)])
}

pub fn a3() -> VAData {
    make_commutative_va(&a3_algebra()).expect("A3 is a commutative algebra with nilpotent derivation")
}

/// The rank-one algebra `Q` with `D = 0`.
pub fn trivial() -> VAData {
    let alg = CommutativeAlgebra {
        basis_names: names(&["1"]),
        mult: vec![vec![Vector::basis(1, 0)]],
        derivation: Derivation::zero(1),
    };
    make_commutative_va(&alg).expect("Q is commutative")
}

/// `Q[s,t]/(s^2, t^2)` with `D(s) = alpha st`, `D(t) = beta st`.
pub fn dual_numbers_squared(alpha: Rational, beta: Rational) -> CommutativeAlgebra {
    // basis 1, s, t, st encoded as bitmasks 0, 1, 2, 3
    let mult = monomial_mult(4, |i, j| (i & j == 0).then_some(i | j));
    let images = vec![
        Vector::zero(4),
        Vector::from_rationals(vec![rat(0), rat(0), rat(0), alpha]),
        Vector::from_rationals(vec![rat(0), rat(0), rat(0), beta]),
        Vector::zero(4),
    ];
    CommutativeAlgebra {
        basis_names: names(&["1", "s", "t", "st"]),
        mult,
        derivation: Derivation::new(images),
    }
}

/// `Q x Q[t]/(t^2)` with `D = 0`.
pub fn split_sum() -> CommutativeAlgebra {
    let mult = monomial_mult(3, |i, j| match (i, j) {
        (0, 0) => Some(0),
        (1, 1) => Some(1),
        (1, 2) | (2, 1) => Some(2),
        _ => None,
    });
    CommutativeAlgebra {
        basis_names: names(&["a", "b", "bt"]),
        mult,
        derivation: Derivation::zero(3),
    }
}

/// The non-unital ideal `(t) / (t^4)` with `D = c t^2 d/dt`.
pub fn augmentation_ideal(c: Rational) -> CommutativeAlgebra {
    // basis t, t^2, t^3 at indices 0, 1, 2
    let mult = monomial_mult(3, |i, j| (i + j + 2 <= 3).then_some(i + j + 1));
    let images = (0..3)
        .map(|p| {
            let mut v = Vector::zero(3);
            if p + 1 < 3 {
                *v.coord_mut(p + 1) = crate::exact::Poly::constant(&c * rat(p as i64 + 1));
            }
            v
        })
        .collect();
    CommutativeAlgebra {
        basis_names: names(&["t", "t^2", "t^3"]),
        mult,
        derivation: Derivation::new(images),
    }
}

fn small_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    let n = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap_or(&1);
    let d = rng.gen_range(1..=2);
    Rational::new(n.into(), d.into())
}

/// Random invertible matrix with small integer entries.
pub fn random_invertible(r: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    loop {
        let m = QMatrix::from_rows(
            (0..r)
                .map(|_| (0..r).map(|_| rat(rng.gen_range(-2..=2))).collect())
                .collect(),
        );
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// `A3` re-expressed in a random basis `f_a = p_a(t)` with `deg p_a <= 2`.
pub fn a3_basis_change(seed: u64) -> VAData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = random_invertible(3, &mut rng);
    a3().change_basis(&m, names(&["f0", "f1", "f2"]))
        .expect("invertible change of basis")
}

/// Seeded random commutative algebra of rank at most 4, cycling through
/// the families above by `index`.
pub fn random_commutative(index: usize, rng: &mut ChaCha8Rng) -> CommutativeAlgebra {
    match index % 4 {
        0 => {
            let k = rng.gen_range(2..=4);
            let g = vec![rat(0), rat(0), small_nonzero(rng), rat(rng.gen_range(-2..=2))];
            truncated_poly(k, &g)
        }
        1 => dual_numbers_squared(small_nonzero(rng), small_nonzero(rng)),
        2 => split_sum(),
        _ => augmentation_ideal(small_nonzero(rng)),
    }
}

/// `count` random vertex algebras over `Q`; every second one is also put
/// through a random change of basis.
pub fn random_corpus(seed: u64, count: usize) -> Vec<(String, VAData)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|idx| {
            let alg = random_commutative(idx, &mut rng);
            let mut va = make_commutative_va(&alg).expect("random algebras are valid by construction");
            if idx % 2 == 1 {
                let m = random_invertible(va.rank(), &mut rng);
                let nm = (0..va.rank()).map(|a| format!("f{a}")).collect();
                va = va.change_basis(&m, nm).expect("invertible change of basis");
            }
            (format!("random_{idx}"), va)
        })
        .collect()
}

/// The fixture corpus: `A3`, the trivial algebra, `A3` in a random basis
/// and six random algebras.
pub fn fixtures() -> Vec<(String, VAData)> {
    let mut out = vec![
        ("a3".to_string(), a3()),
        ("trivial".to_string(), trivial()),
        ("a3_basis_change".to_string(), a3_basis_change(7)),
    ];
    out.extend(random_corpus(2024, 6));
    out
}

/// Adds one to coordinate `coord` of the entry at `key`.
pub fn bump(va: &VAData, key: Key, coord: usize) -> VAData {
    let mut v = va.entry(key.0, key.1, key.2).cloned().unwrap_or_else(|| Vector::zero(va.rank()));
    *v.coord_mut(coord) = v.coord(coord) + &crate::exact::Poly::one();
    va.with_entry(key, v).expect("a bumped entry keeps the shape")
}

/// Each nonzero entry of `va` with one added to its first coordinate.
pub fn unit_mutations(va: &VAData) -> Vec<(Key, VAData)> {
    va.table().keys().map(|&k| (k, bump(va, k, 0))).collect()
}

/// `count` seeded single-constant mutations: one added to a random
/// coordinate of a random entry whose mode lies within the support of
/// its pair.
pub fn random_mutations(va: &VAData, count: usize, seed: u64) -> Vec<(Key, usize, VAData)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = va.rank();
    let (a, b) = va.support_hull();
    let mut out = Vec::new();
    if r == 0 || a > b {
        return out;
    }
    while out.len() < count {
        let i = rng.gen_range(0..r);
        let j = rng.gen_range(0..r);
        let (lo, hi) = va
            .declared_bounds()
            .and_then(|bd| bd.get(&(i, j)).copied())
            .unwrap_or((a, b));
        let n = rng.gen_range(lo..=hi);
        let c = rng.gen_range(0..r);
        out.push(((i, n, j), c, bump(va, (i, n, j), c)));
    }
    out
}
