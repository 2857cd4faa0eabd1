//! The two compositions `mu(mu(., .), .)` and `mu(., mu(., .))` on triple
//! generators `(z1-z2)^{m1} (z2-z3)^{m2} (z1-z3)^{m3} (u (x) v (x) w)`,
//! as sections over the small diagonal.

use num_traits::Zero;

use super::{ChiralData, Diag3Section};
use crate::exact::{binom, sign_pow, Rational};
use crate::linear::Vector;

/// `sum_{i,k,l} C(m3+k, i) d1^k d2^l (x) C^{m1+i-k, m2+m3+k-i}_{kl}` with
/// `C^{n1 n2}_{kl} = B^{n2}_l(B^{n1}_k(u, v), w)`.
pub fn compose_left(a: &ChiralData, m1: i64, m2: i64, m3: i64, u: &Vector, v: &Vector, w: &Vector) -> Diag3Section {
    let mut out = Diag3Section::zero(a.rank());
    let (lo, hi) = a.band();
    if lo > hi {
        return out;
    }
    // B^{n1}_k(u, v) needs n1 + k = m1 + i in the band
    for i in (lo - m1).max(0)..=(hi - m1) {
        let n1k = m1 + i;
        // B^{n2}_l needs n2 = m2 + m3 + k - i <= hi
        let kmax = hi - m2 - m3 + i;
        if kmax < 0 {
            continue;
        }
        for k in 0..=kmax {
            let c = binom(m3 + k, i as u32);
            if c.is_zero() {
                continue;
            }
            let inner = a.b_vec(u, n1k - k, k as u32, v);
            if inner.is_zero() {
                continue;
            }
            let n2 = m2 + m3 + k - i;
            for l in a.layers_for(n2) {
                out.add_scaled_at((k as u32, l), &c, &a.b_vec(&inner, n2, l, w));
            }
        }
    }
    out
}

/// `sum_i (-1)^i C(m1, i) sum_{k,l} d1^k d2^l (x) E^{m1+m3-i, m2+i}_{kl}`
/// with `E^{n1 n2}_{kl} = B^{n1}_k(u, B^{n2}_l(v, w))`.
pub fn compose_right(a: &ChiralData, m1: i64, m2: i64, m3: i64, u: &Vector, v: &Vector, w: &Vector) -> Diag3Section {
    let mut out = Diag3Section::zero(a.rank());
    let (lo, hi) = a.band();
    if lo > hi {
        return out;
    }
    // n2 = m2 + i <= hi and n1 = m1 + m3 - i <= hi
    let imin = (m1 + m3 - hi).max(0);
    let mut imax = hi - m2;
    if m1 >= 0 {
        imax = imax.min(m1);
    }
    for i in imin..=imax {
        let c: Rational = sign_pow(i) * binom(m1, i as u32);
        if c.is_zero() {
            continue;
        }
        let (n1, n2) = (m1 + m3 - i, m2 + i);
        for l in a.layers_for(n2) {
            let inner = a.b_vec(v, n2, l, w);
            if inner.is_zero() {
                continue;
            }
            for k in a.layers_for(n1) {
                out.add_scaled_at((k, l), &c, &a.b_vec(u, n1, k, &inner));
            }
        }
    }
    out
}

/// Swapping the first two points sends the triple generator with data
/// `(m1, m2, m3, u, v, w)` to `(-1)^{m1}` times the one with data
/// `(m1, m3, m2, v, u, w)`.
#[allow(clippy::type_complexity)]
pub fn sigma12_triple(
    m1: i64,
    m2: i64,
    m3: i64,
    u: &Vector,
    v: &Vector,
    w: &Vector,
) -> (Rational, i64, i64, i64, Vector, Vector, Vector) {
    (sign_pow(m1), m1, m3, m2, v.clone(), u.clone(), w.clone())
}
