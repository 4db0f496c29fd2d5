//! Brute-force ground truth over prime fields.
//!
//! Enumerates every `n×n` matrix over `F_p`, keeps those on which all
//! generators vanish, and tests the group axioms on the invertible part by
//! exhaustion.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::Fp;
use crate::parse::ProblemSpec;

pub const DEFAULT_ENUM_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration of {p}^{entries} matrices exceeds the cap of {cap}")]
    TooLarge { p: u64, entries: usize, cap: u64 },
}

/// Row-major `n×n` matrix with entries in `[0, p)`.
pub type Matrix = Vec<u64>;

#[derive(Debug, Clone)]
pub struct VarietySet {
    pub n: usize,
    pub p: u64,
    pub points: Vec<Matrix>,
    pub invertible: Vec<Matrix>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Determinant by Gaussian elimination.
pub fn det(m: &[u64], n: usize, p: u64) -> u64 {
    let mut a = m.to_vec();
    let mut d = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r * n + c] != 0) else {
            return 0;
        };
        if piv != c {
            for k in 0..n {
                a.swap(piv * n + k, c * n + k);
            }
            d = (p - d) % p;
        }
        let pv = a[c * n + c];
        d = mulmod(d, pv, p);
        let inv = invmod(pv, p);
        for r in c + 1..n {
            let f = mulmod(a[r * n + c], inv, p);
            if f == 0 {
                continue;
            }
            for k in c..n {
                let s = mulmod(f, a[c * n + k], p);
                a[r * n + k] = (a[r * n + k] + p - s) % p;
            }
        }
    }
    d
}

/// Inverse by Gauss-Jordan; `None` if singular.
pub fn inverse(m: &[u64], n: usize, p: u64) -> Option<Matrix> {
    let mut a = m.to_vec();
    let mut b: Matrix = (0..n * n).map(|k| u64::from(k % (n + 1) == 0)).collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| a[r * n + c] != 0)?;
        if piv != c {
            for k in 0..n {
                a.swap(piv * n + k, c * n + k);
                b.swap(piv * n + k, c * n + k);
            }
        }
        let inv = invmod(a[c * n + c], p);
        for k in 0..n {
            a[c * n + k] = mulmod(a[c * n + k], inv, p);
            b[c * n + k] = mulmod(b[c * n + k], inv, p);
        }
        for r in 0..n {
            if r == c || a[r * n + c] == 0 {
                continue;
            }
            let f = a[r * n + c];
            for k in 0..n {
                a[r * n + k] = (a[r * n + k] + p - mulmod(f, a[c * n + k], p)) % p;
                b[r * n + k] = (b[r * n + k] + p - mulmod(f, b[c * n + k], p)) % p;
            }
        }
    }
    Some(b)
}

pub fn product(a: &[u64], b: &[u64], n: usize, p: u64) -> Matrix {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u64;
            for k in 0..n {
                s = (s + mulmod(a[i * n + k], b[k * n + j], p)) % p;
            }
            out[i * n + j] = s;
        }
    }
    out
}

pub fn identity(n: usize) -> Matrix {
    (0..n * n).map(|k| u64::from(k % (n + 1) == 0)).collect()
}

/// A generator flattened to `(exponents, coefficient)` pairs for fast evaluation.
struct Compiled {
    terms: Vec<(Vec<(usize, u32)>, u64)>,
}

impl Compiled {
    fn eval(&self, point: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (exps, c) in &self.terms {
            let mut v = *c;
            for &(i, e) in exps {
                v = mulmod(v, powmod(point[i], e as u64, p), p);
                if v == 0 {
                    break;
                }
            }
            acc = (acc + v) % p;
        }
        acc
    }
}

/// `V(I) ∩ F_p^{n×n}` and its invertible part.
pub fn enumerate(spec: &ProblemSpec<Fp>, cap: u64) -> Result<VarietySet, OracleError> {
    let n = spec.n;
    let entries = n * n;
    let p = spec.ring.tag().characteristic();
    let total = u32::try_from(entries)
        .ok()
        .and_then(|e| p.checked_pow(e))
        .filter(|&t| t <= cap)
        .ok_or(OracleError::TooLarge { p, entries, cap })?;
    let gens: Vec<Compiled> = spec
        .generators
        .iter()
        .map(|g| Compiled {
            terms: g
                .terms()
                .iter()
                .map(|(m, c)| {
                    let exps = m.exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
                    (exps, c.value())
                })
                .collect(),
        })
        .collect();

    const CHUNK: u64 = 4096;
    let chunks = total.div_ceil(CHUNK);
    let mut points: Vec<Matrix> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            let gens = &gens;
            (lo..hi).filter_map(move |idx| {
                let mut pt = vec![0u64; entries];
                let mut r = idx;
                for slot in pt.iter_mut().rev() {
                    *slot = r % p;
                    r /= p;
                }
                gens.iter().all(|g| g.eval(&pt, p) == 0).then_some(pt)
            })
        })
        .collect();
    points.sort();
    let invertible = points.iter().filter(|m| det(m, n, p) != 0).cloned().collect();
    Ok(VarietySet { n, p, points, invertible })
}

/// Why the invertible part fails to be a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleWitness {
    NoIdentity,
    MissingInverse { of: Matrix },
    MissingProduct { a: Matrix, b: Matrix },
}

impl fmt::Display for OracleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleWitness::NoIdentity => write!(f, "no identity"),
            OracleWitness::MissingInverse { of } => write!(f, "inverse of {of:?} missing"),
            OracleWitness::MissingProduct { a, b } => write!(f, "product {a:?}·{b:?} missing"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub identity: bool,
    pub inversion: bool,
    pub multiplication: bool,
    pub group: bool,
    pub witness: Option<OracleWitness>,
    pub points: usize,
    pub invertible: usize,
}

impl VarietySet {
    fn invertible_set(&self) -> HashSet<&[u64]> {
        self.invertible.iter().map(|m| m.as_slice()).collect()
    }

    pub fn contains_identity(&self) -> bool {
        self.invertible.binary_search(&identity(self.n)).is_ok()
    }

    /// First invertible point whose inverse is not in the set.
    pub fn inversion_failure(&self) -> Option<&Matrix> {
        let set = self.invertible_set();
        self.invertible.iter().find(|m| {
            let inv = inverse(m, self.n, self.p).expect("invertible");
            !set.contains(inv.as_slice())
        })
    }

    /// First pair of invertible points whose product leaves the set.
    pub fn multiplication_failure(&self) -> Option<(&Matrix, &Matrix)> {
        let set = self.invertible_set();
        self.invertible.par_iter().find_map_first(|a| {
            self.invertible.iter().find(|b| !set.contains(product(a, b, self.n, self.p).as_slice())).map(|b| (a, b))
        })
    }

    /// Same question for all of `V`, singular points included.
    pub fn full_multiplication_failure(&self) -> Option<(&Matrix, &Matrix)> {
        let set: HashSet<&[u64]> = self.points.iter().map(|m| m.as_slice()).collect();
        self.points.par_iter().find_map_first(|a| {
            self.points.iter().find(|b| !set.contains(product(a, b, self.n, self.p).as_slice())).map(|b| (a, b))
        })
    }
}

pub fn is_group_bruteforce(vs: &VarietySet) -> OracleVerdict {
    let identity = vs.contains_identity();
    let inv_fail = vs.inversion_failure().cloned();
    let mul_fail = vs.multiplication_failure().map(|(a, b)| (a.clone(), b.clone()));
    let witness = if !identity {
        Some(OracleWitness::NoIdentity)
    } else if let Some(of) = inv_fail.clone() {
        Some(OracleWitness::MissingInverse { of })
    } else {
        mul_fail.clone().map(|(a, b)| OracleWitness::MissingProduct { a, b })
    };
    OracleVerdict {
        identity,
        inversion: inv_fail.is_none(),
        multiplication: mul_fail.is_none(),
        group: witness.is_none(),
        witness,
        points: vs.points.len(),
        invertible: vs.invertible.len(),
    }
}
