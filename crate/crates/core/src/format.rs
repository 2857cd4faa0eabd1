//! JSON spec files for vertex algebras and chiral families.
//!
//! Output is canonical: keys sorted, two-space indentation, a trailing
//! newline. Rationals are JSON integers when integral and `"p/q"` strings
//! otherwise; integers too large for `i64` are written as strings. A
//! polynomial is a scalar when constant and a coefficient list, low degree
//! first, otherwise.
//!
//! Vertex algebra:
//!
//! ```json
//! { "rank": 3, "coeff_ring": "Q", "basis_names": ["1", "t", "t^2"],
//!   "D": [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
//!   "structure": [{ "i": 1, "n": -2, "j": 0, "value": [0, 0, 1] }],
//!   "support_bounds": [{ "i": 0, "j": 0, "n_min": -2, "n_max": -1 }] }
//! ```
//!
//! `D[a]` is the image of basis vector `a`. Chiral families carry `B`
//! entries `{ i, j, n, m, value }`. With `"closed_form": true` every `B`
//! entry has `m = 0` and the higher layers follow from the recursion;
//! optional `B_explicit` entries are added on top. With `"closed_form":
//! false` the listed entries are the whole family.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chiral::ChiralData;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Poly, Rational};
use crate::linear::{Derivation, Vector};
use crate::vertex::{CoeffRing, VAData};

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn of(q: &Rational) -> Scalar {
        match q.is_integer().then(|| q.numer().to_i64()).flatten() {
            Some(n) => Scalar::Int(n),
            None => Scalar::Text(format_rational(q)),
        }
    }

    fn value(&self) -> Result<Rational> {
        match self {
            Scalar::Int(n) => Ok(Rational::from_integer((*n).into())),
            Scalar::Text(s) => parse_rational(s).ok_or_else(|| Error::contract(format!("'{s}' is not a rational number"))),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
enum PolyJson {
    Constant(Scalar),
    Coeffs(Vec<Scalar>),
}

impl PolyJson {
    fn of(p: &Poly) -> PolyJson {
        if p.is_constant() {
            PolyJson::Constant(Scalar::of(&p.coeff(0)))
        } else {
            PolyJson::Coeffs(p.coeffs().iter().map(Scalar::of).collect())
        }
    }

    fn value(&self) -> Result<Poly> {
        match self {
            PolyJson::Constant(s) => Ok(Poly::constant(s.value()?)),
            PolyJson::Coeffs(cs) => Ok(Poly::from_coeffs(cs.iter().map(Scalar::value).collect::<Result<_>>()?)),
        }
    }
}

fn vector_json(v: &Vector) -> Vec<PolyJson> {
    v.coords().iter().map(PolyJson::of).collect()
}

fn vector_value(v: &[PolyJson], rank: usize, what: &str) -> Result<Vector> {
    if v.len() != rank {
        return Err(Error::contract(format!("{what} has {} coordinates, expected {rank}", v.len())));
    }
    Ok(Vector::from_polys(v.iter().map(PolyJson::value).collect::<Result<_>>()?))
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct Bound {
    i: usize,
    j: usize,
    n_min: i64,
    n_max: i64,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct Entry {
    i: usize,
    n: i64,
    j: usize,
    value: Vec<PolyJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct BEntry {
    i: usize,
    j: usize,
    n: i64,
    m: u32,
    value: Vec<PolyJson>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct VaFile {
    rank: usize,
    coeff_ring: String,
    #[serde(default)]
    basis_names: Option<Vec<String>>,
    #[serde(rename = "D")]
    d: Vec<Vec<PolyJson>>,
    structure: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    support_bounds: Option<Vec<Bound>>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct ChiralFile {
    rank: usize,
    #[serde(default)]
    basis_names: Option<Vec<String>>,
    #[serde(rename = "D")]
    d: Vec<Vec<PolyJson>>,
    closed_form: bool,
    #[serde(rename = "B")]
    b: Vec<BEntry>,
    #[serde(rename = "B_explicit", default, skip_serializing_if = "Vec::is_empty")]
    b_explicit: Vec<BEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    support_bounds: Option<Vec<Bound>>,
}

fn parse_json<T: DeserializeOwned>(src: &str) -> Result<T> {
    serde_json::from_str(src).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Sorted keys, two-space indentation, trailing newline.
pub fn canonical_json<T: Serialize>(x: &T) -> String {
    let v: Value = serde_json::to_value(x).expect("spec files are plain data");
    let mut s = serde_json::to_string_pretty(&v).expect("values always serialize");
    s.push('\n');
    s
}

fn derivation_value(d: &[Vec<PolyJson>], rank: usize) -> Result<Derivation> {
    if d.len() != rank {
        return Err(Error::contract(format!("D has {} rows, expected {rank}", d.len())));
    }
    let images = d
        .iter()
        .enumerate()
        .map(|(a, row)| vector_value(row, rank, &format!("D[{a}]")))
        .collect::<Result<_>>()?;
    Ok(Derivation::new(images))
}

fn names_value(names: Option<Vec<String>>, rank: usize) -> Result<Vec<String>> {
    let names = names.unwrap_or_else(|| VAData::default_names(rank));
    if names.len() != rank {
        return Err(Error::contract(format!("{} basis names for rank {rank}", names.len())));
    }
    Ok(names)
}

fn bounds_json(b: Option<&BTreeMap<(usize, usize), (i64, i64)>>) -> Option<Vec<Bound>> {
    b.map(|b| {
        b.iter()
            .map(|(&(i, j), &(n_min, n_max))| Bound { i, j, n_min, n_max })
            .collect()
    })
}

fn bounds_value(b: Option<Vec<Bound>>) -> Result<Option<BTreeMap<(usize, usize), (i64, i64)>>> {
    let Some(b) = b else { return Ok(None) };
    let mut out = BTreeMap::new();
    for x in b {
        if out.insert((x.i, x.j), (x.n_min, x.n_max)).is_some() {
            return Err(Error::contract(format!("support bound for pair ({}, {}) given twice", x.i, x.j)));
        }
    }
    Ok(Some(out))
}

pub fn va_to_json(v: &VAData) -> String {
    let file = VaFile {
        rank: v.rank(),
        coeff_ring: v.coeff_ring().name().to_string(),
        basis_names: Some(v.basis_names().to_vec()),
        d: v.derivation().images().iter().map(vector_json).collect(),
        structure: v
            .table()
            .iter()
            .map(|(&(i, n, j), x)| Entry {
                i,
                n,
                j,
                value: vector_json(x),
            })
            .collect(),
        support_bounds: bounds_json(v.declared_bounds()),
    };
    canonical_json(&file)
}

pub fn va_from_json(src: &str) -> Result<VAData> {
    let f: VaFile = parse_json(src)?;
    let ring = CoeffRing::from_name(&f.coeff_ring)
        .ok_or_else(|| Error::contract(format!("unknown coefficient ring '{}'", f.coeff_ring)))?;
    let r = f.rank;
    let names = names_value(f.basis_names, r)?;
    let d = derivation_value(&f.d, r)?;
    let entries = f
        .structure
        .iter()
        .map(|e| Ok(((e.i, e.n, e.j), vector_value(&e.value, r, "structure value")?)))
        .collect::<Result<Vec<_>>>()?;
    VAData::new(ring, names, d, entries, bounds_value(f.support_bounds)?)
}

fn b_entries<'a>(it: impl Iterator<Item = ((usize, usize, i64, u32), &'a Vector)>) -> Vec<BEntry> {
    it.map(|((i, j, n, m), x)| BEntry {
        i,
        j,
        n,
        m,
        value: vector_json(x),
    })
    .collect()
}

pub fn chiral_to_json(a: &ChiralData) -> String {
    let gen = || a.generating().iter().map(|(&(i, p, j), x)| ((i, j, p, 0), x));
    let expl = || a.explicit().iter().map(|(&k, x)| (k, x));
    let closed = !a.generating().is_empty() || a.is_closed_form();
    let (b, b_explicit) = if closed {
        (b_entries(gen()), b_entries(expl()))
    } else {
        (b_entries(expl()), Vec::new())
    };
    let file = ChiralFile {
        rank: a.rank(),
        basis_names: Some(a.basis_names().to_vec()),
        d: a.derivation().images().iter().map(vector_json).collect(),
        closed_form: closed,
        b,
        b_explicit,
        support_bounds: bounds_json(a.declared_bounds()),
    };
    canonical_json(&file)
}

pub fn chiral_from_json(src: &str) -> Result<ChiralData> {
    let f: ChiralFile = parse_json(src)?;
    let r = f.rank;
    let names = names_value(f.basis_names, r)?;
    let d = derivation_value(&f.d, r)?;
    let value = |e: &BEntry| vector_value(&e.value, r, "B value");
    let mut generating = Vec::new();
    let mut explicit = Vec::new();
    if f.closed_form {
        for e in &f.b {
            if e.m != 0 {
                return Err(Error::contract(format!(
                    "closed-form B entry ({}, {}, n={}) has m = {}; only the m = 0 layer is stored",
                    e.i, e.j, e.n, e.m
                )));
            }
            generating.push(((e.i, e.n, e.j), value(e)?));
        }
    } else {
        for e in &f.b {
            explicit.push(((e.i, e.j, e.n, e.m), value(e)?));
        }
    }
    for e in &f.b_explicit {
        explicit.push(((e.i, e.j, e.n, e.m), value(e)?));
    }
    ChiralData::new(names, d, generating, explicit, bounds_value(f.support_bounds)?)
}

/// A spec file of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecFile {
    Va(VAData),
    Chiral(ChiralData),
}

/// Reads a file of either kind, telling them apart by the `B` key.
pub fn spec_from_json(src: &str) -> Result<SpecFile> {
    let v: Value = parse_json(src)?;
    if v.get("B").is_some() {
        chiral_from_json(src).map(SpecFile::Chiral)
    } else {
        va_from_json(src).map(SpecFile::Va)
    }
}
