//! Finite-index sublattices of the Gaussian lattice `Z + Z*i`.
//!
//! A sublattice of index `d` has a unique basis `{(h, 0), (m, g)}` with
//! `h * g = d` and `0 <= m < h` (Hermite normal form). [`hnf_reduce`] brings
//! an arbitrary positively oriented basis to that form and
//! [`enumerate_sublattices`] lists every such triple.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("basis is not positively oriented (determinant {0})")]
    NonPositiveDeterminant(BigInt),
    #[error("sublattice index must be positive")]
    ZeroIndex,
    #[error("sublattice index {0} does not fit in 64 bits")]
    IndexOverflow(BigInt),
    #[error("invalid HNF triple h={h} m={m} g={g}: {reason}")]
    InvalidTriple {
        h: u64,
        m: u64,
        g: u64,
        reason: &'static str,
    },
}

/// An ordered pair of lattice vectors in coordinates w.r.t. `{1, i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis2 {
    pub v1: (BigInt, BigInt),
    pub v2: (BigInt, BigInt),
}

impl Basis2 {
    pub fn new(v1: (i64, i64), v2: (i64, i64)) -> Self {
        Basis2 {
            v1: (v1.0.into(), v1.1.into()),
            v2: (v2.0.into(), v2.1.into()),
        }
    }

    pub fn from_big(v1: (BigInt, BigInt), v2: (BigInt, BigInt)) -> Self {
        Basis2 { v1, v2 }
    }
}

impl fmt::Display for Basis2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({}, {}), ({}, {}))",
            self.v1.0, self.v1.1, self.v2.0, self.v2.1
        )
    }
}

/// Canonical sublattice `<(h, 0), (m, g)>` of index `h * g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "HnfRecord", try_from = "HnfRecord")]
pub struct HnfLattice {
    h: u64,
    m: u64,
    g: u64,
}

impl HnfLattice {
    pub fn new(h: u64, m: u64, g: u64) -> Result<Self, LatticeError> {
        let invalid = |reason| LatticeError::InvalidTriple { h, m, g, reason };
        if h == 0 || g == 0 {
            return Err(invalid("h and g must be positive"));
        }
        if m >= h {
            return Err(invalid("m must lie in [0, h)"));
        }
        if h.checked_mul(g).is_none() {
            return Err(invalid("index h*g overflows"));
        }
        Ok(HnfLattice { h, m, g })
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    pub fn index(&self) -> u64 {
        self.h * self.g
    }

    /// The basis `w1 = (h, 0)`, `w2 = (m, g)`.
    pub fn basis(&self) -> Basis2 {
        Basis2::from_big(
            (BigInt::from(self.h), BigInt::zero()),
            (BigInt::from(self.m), BigInt::from(self.g)),
        )
    }

    /// Whether the point `(x, y)` lies in the sublattice.
    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        // (x, y) = a*(h,0) + b*(m,g)  =>  b = y/g, then h | x - b*m
        let g = BigInt::from(self.g);
        if !y.is_multiple_of(&g) {
            return false;
        }
        let b = y / &g;
        (x - b * BigInt::from(self.m)).is_multiple_of(&BigInt::from(self.h))
    }
}

impl fmt::Display for HnfLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(h={}, m={}, g={})", self.h, self.m, self.g)
    }
}

#[derive(Serialize, Deserialize)]
struct HnfRecord {
    h: u64,
    m: u64,
    g: u64,
    d: u64,
}

impl From<HnfLattice> for HnfRecord {
    fn from(l: HnfLattice) -> Self {
        HnfRecord {
            h: l.h,
            m: l.m,
            g: l.g,
            d: l.index(),
        }
    }
}

impl TryFrom<HnfRecord> for HnfLattice {
    type Error = LatticeError;

    fn try_from(r: HnfRecord) -> Result<Self, Self::Error> {
        let l = HnfLattice::new(r.h, r.m, r.g)?;
        if l.index() != r.d {
            return Err(LatticeError::InvalidTriple {
                h: r.h,
                m: r.m,
                g: r.g,
                reason: "d does not equal h*g",
            });
        }
        Ok(l)
    }
}

/// `alpha*delta - beta*gamma` for `v1 = (alpha, beta)`, `v2 = (gamma, delta)`.
pub fn det(b: &Basis2) -> BigInt {
    &b.v1.0 * &b.v2.1 - &b.v1.1 * &b.v2.0
}

/// Extended Euclid: `(g, x, y)` with `a*x + b*y = g >= 0`.
fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut x0, mut x1) = (BigInt::one(), BigInt::zero());
    let (mut y0, mut y1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        let x2 = &x0 - &q * &x1;
        let y2 = &y0 - &q * &y1;
        r0 = std::mem::replace(&mut r1, r2);
        x0 = std::mem::replace(&mut x1, x2);
        y0 = std::mem::replace(&mut y1, y2);
    }
    if r0.is_negative() {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// Bezout pair for coprime `(b, d)` with `b*x + d*y = 1` and `|x|` minimal.
fn bezout_coprime(b: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
    let (_, mut x, _) = extended_gcd(b, d);
    if d.is_zero() {
        // b = +-1
        return (b.clone(), BigInt::zero());
    }
    let period = d.abs();
    x = x.mod_floor(&period);
    if &x * 2 > period {
        x -= &period;
    }
    let y = (BigInt::one() - b * &x) / d;
    (x, y)
}

/// Canonical HNF triple of the sublattice spanned by `b`.
pub fn hnf_reduce(b: &Basis2) -> Result<HnfLattice, LatticeError> {
    let index = det(b);
    if !index.is_positive() {
        return Err(LatticeError::NonPositiveDeterminant(index));
    }
    let (alpha, beta) = &b.v1;
    let (gamma, delta) = &b.v2;

    // det > 0 rules out beta = delta = 0, so g > 0.
    let g = beta.gcd(delta);
    let beta_p = beta / &g;
    let delta_p = delta / &g;
    let (x, y) = bezout_coprime(&beta_p, &delta_p);

    // w1 = delta' v1 - beta' v2 = (h, 0); w2 = x v1 + y v2 = (m0, g)
    let h = &delta_p * alpha - &beta_p * gamma;
    debug_assert_eq!(&h * &g, index);
    let m = (alpha * &x + gamma * &y).mod_floor(&h);

    let to_u64 = |v: &BigInt| v.to_u64().ok_or_else(|| LatticeError::IndexOverflow(index.clone()));
    let (h, m, g) = (to_u64(&h)?, to_u64(&m)?, to_u64(&g)?);
    if h.checked_mul(g).is_none() {
        return Err(LatticeError::IndexOverflow(index));
    }
    Ok(HnfLattice { h, m, g })
}

/// Whether two positively oriented bases span the same sublattice.
pub fn same_sublattice(a: &Basis2, b: &Basis2) -> Result<bool, LatticeError> {
    Ok(hnf_reduce(a)? == hnf_reduce(b)?)
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            small.push(k);
            if k != n / k {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Sum of the positive divisors of `d`.
pub fn sigma1(d: u64) -> Result<u64, LatticeError> {
    if d == 0 {
        return Err(LatticeError::ZeroIndex);
    }
    Ok(divisors(d).into_iter().sum())
}

/// All index-`d` sublattices, ordered lexicographically by `(h, m)`.
pub fn enumerate_sublattices(d: u64) -> Result<Vec<HnfLattice>, LatticeError> {
    if d == 0 {
        return Err(LatticeError::ZeroIndex);
    }
    let mut out = Vec::new();
    for h in divisors(d) {
        let g = d / h;
        out.extend((0..h).map(|m| HnfLattice { h, m, g }));
    }
    Ok(out)
}
