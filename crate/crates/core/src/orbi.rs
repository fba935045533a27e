//! Orbifold points of the pillowcase and the 4-point correlator count.
//!
//! The target is `C / (Lambda_0 x Z_2)` with `Lambda_0 = Z + Z*i`. Its four
//! cone points are the half-lattice cosets
//!
//! | point | coset of `Lambda_0` |
//! |-------|---------------------|
//! | X1    | `0`                 |
//! | X2    | `1/2`               |
//! | X3    | `(1 + i)/2`         |
//! | X4    | `i/2`               |
//!
//! A degree-`d` orbi-sphere with identity lift is determined by an index-`d`
//! sublattice `L` together with a marking permutation `tau` of the domain cone
//! points `y2, y3, y4`. Its first marked point always sits over `X1`. The
//! images of `y2 = w1/2`, `y3 = (w1 + w2)/2` and `y4 = w2/2` only depend on the
//! parities of `(h, m, g)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::lattice::{enumerate_sublattices, HnfLattice};
use crate::qseries::QSeries;
use crate::rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbiError {
    #[error("correlators are only counted in positive degree")]
    ZeroDegree,
    #[error("orbifold point index must be 1..=4, got {0}")]
    InvalidPoint(u8),
    #[error("malformed insertion list {0:?}: expected four comma-separated indices in 1..=4")]
    MalformedInsertions(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum OrbiPoint {
    X1,
    X2,
    X3,
    X4,
}

impl OrbiPoint {
    pub const ALL: [OrbiPoint; 4] = [OrbiPoint::X1, OrbiPoint::X2, OrbiPoint::X3, OrbiPoint::X4];

    /// Coset label in `(Z/2)^2`: the point is `(a + b i)/2 mod Lambda_0`.
    pub fn coset(self) -> (u8, u8) {
        match self {
            OrbiPoint::X1 => (0, 0),
            OrbiPoint::X2 => (1, 0),
            OrbiPoint::X3 => (1, 1),
            OrbiPoint::X4 => (0, 1),
        }
    }

    pub fn from_coset(a: u8, b: u8) -> Self {
        match (a & 1, b & 1) {
            (0, 0) => OrbiPoint::X1,
            (1, 0) => OrbiPoint::X2,
            (1, 1) => OrbiPoint::X3,
            _ => OrbiPoint::X4,
        }
    }

    /// 1-based label.
    pub fn label(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_label(i: u8) -> Result<Self, OrbiError> {
        match i {
            1..=4 => Ok(OrbiPoint::ALL[i as usize - 1]),
            _ => Err(OrbiError::InvalidPoint(i)),
        }
    }
}

impl From<OrbiPoint> for u8 {
    fn from(p: OrbiPoint) -> u8 {
        p.label()
    }
}

impl TryFrom<u8> for OrbiPoint {
    type Error = OrbiError;
    fn try_from(i: u8) -> Result<Self, OrbiError> {
        OrbiPoint::from_label(i)
    }
}

impl fmt::Display for OrbiPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.label())
    }
}

/// A permutation `tau` of `{2, 3, 4}`, placing the marked point `z_k` at the
/// domain cone point `y_{tau(k)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MarkingPermutation([u8; 3]);

impl MarkingPermutation {
    pub const IDENTITY: MarkingPermutation = MarkingPermutation([2, 3, 4]);
    /// The transposition `(3 4)`.
    pub const SWAP_34: MarkingPermutation = MarkingPermutation([2, 4, 3]);

    pub const ALL: [MarkingPermutation; 6] = [
        MarkingPermutation([2, 3, 4]),
        MarkingPermutation([2, 4, 3]),
        MarkingPermutation([3, 2, 4]),
        MarkingPermutation([3, 4, 2]),
        MarkingPermutation([4, 2, 3]),
        MarkingPermutation([4, 3, 2]),
    ];

    /// `(tau(2), tau(3), tau(4))`.
    pub fn images(&self) -> [u8; 3] {
        self.0
    }

    /// Given `(u(y2), u(y3), u(y4))`, the images `(u(z2), u(z3), u(z4))`.
    pub fn apply<T: Copy>(&self, at_y: [T; 3]) -> [T; 3] {
        self.0.map(|k| at_y[k as usize - 2])
    }
}

/// Insertions `(Delta_i, Delta_j, Delta_k, Delta_l)` at `z1..z4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InsertionTuple(pub [OrbiPoint; 4]);

impl InsertionTuple {
    pub fn from_labels(labels: [u8; 4]) -> Result<Self, OrbiError> {
        let mut pts = [OrbiPoint::X1; 4];
        for (p, l) in pts.iter_mut().zip(labels) {
            *p = OrbiPoint::from_label(l)?;
        }
        Ok(InsertionTuple(pts))
    }

    pub fn labels(&self) -> [u8; 4] {
        self.0.map(OrbiPoint::label)
    }

    /// All 256 ordered tuples, lexicographic in the labels.
    pub fn all() -> impl Iterator<Item = InsertionTuple> {
        (0..256usize).map(|code| {
            InsertionTuple([3, 2, 1, 0].map(|shift| OrbiPoint::ALL[(code >> (2 * shift)) & 3]))
        })
    }

    /// An equivalent tuple whose first entry is `X1`.
    ///
    /// Without an `X1`, every entry is moved by the half-period translation
    /// that sends the first entry to `X1`; otherwise the first `X1` is swapped
    /// to the front.
    pub fn normalized(&self) -> InsertionTuple {
        let mut pts = self.0;
        if !pts.contains(&OrbiPoint::X1) {
            let shift = HalfPeriod::sending_to_origin(pts[0]).expect("first entry is not X1");
            pts = pts.map(|p| shift.apply(p));
        }
        let pos = pts.iter().position(|&p| p == OrbiPoint::X1).expect("X1 present");
        pts.swap(0, pos);
        InsertionTuple(pts)
    }

    /// Tail `(ins2, ins3, ins4)`.
    pub fn tail(&self) -> [OrbiPoint; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }
}

impl FromStr for InsertionTuple {
    type Err = OrbiError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OrbiError::MalformedInsertions(s.to_string());
        let parts: Vec<u8> = s
            .split(',')
            .map(|p| p.trim().parse::<u8>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        let labels: [u8; 4] = parts.try_into().map_err(|_| bad())?;
        InsertionTuple::from_labels(labels).map_err(|_| bad())
    }
}

impl fmt::Display for InsertionTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.labels();
        write!(f, "<D{a}, D{b}, D{c}, D{d}>")
    }
}

/// Half-period translations of the target, each swapping the cone points in
/// pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HalfPeriod {
    /// `+ 1/2`
    Half,
    /// `+ (1 + i)/2`
    HalfPlus,
    /// `+ i/2`
    HalfI,
}

impl HalfPeriod {
    pub const ALL: [HalfPeriod; 3] = [HalfPeriod::Half, HalfPeriod::HalfPlus, HalfPeriod::HalfI];

    pub fn offset(self) -> (u8, u8) {
        match self {
            HalfPeriod::Half => (1, 0),
            HalfPeriod::HalfPlus => (1, 1),
            HalfPeriod::HalfI => (0, 1),
        }
    }

    pub fn apply(self, p: OrbiPoint) -> OrbiPoint {
        let (a, b) = p.coset();
        let (s, t) = self.offset();
        OrbiPoint::from_coset(a ^ s, b ^ t)
    }

    /// The translation mapping `p` to `X1`, if `p != X1`.
    pub fn sending_to_origin(p: OrbiPoint) -> Option<HalfPeriod> {
        HalfPeriod::ALL.into_iter().find(|h| h.apply(p) == OrbiPoint::X1)
    }
}

/// The permutation of `[X1, X2, X3, X4]` induced by a half-period shift.
pub fn translate_action(c: HalfPeriod) -> [OrbiPoint; 4] {
    OrbiPoint::ALL.map(|p| c.apply(p))
}

/// Images `(u(y2), u(y3), u(y4))` of the identity-lift map for `L`.
pub fn classify_images(l: &HnfLattice) -> [OrbiPoint; 3] {
    let (h, m, g) = ((l.h() & 1) as u8, (l.m() & 1) as u8, (l.g() & 1) as u8);
    [
        OrbiPoint::from_coset(h, 0),
        OrbiPoint::from_coset(h ^ m, g),
        OrbiPoint::from_coset(m, g),
    ]
}

fn tail_code(t: [OrbiPoint; 3]) -> usize {
    t.iter().fold(0, |acc, p| acc * 4 + *p as usize)
}

/// Counts of `(L, tau)` pairs in degree `d`, keyed by the marked images
/// `(u(z2), u(z3), u(z4))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedImageCounts {
    degree: u64,
    counts: [u64; 64],
}

impl MarkedImageCounts {
    pub fn compute(d: u64, perms: &[MarkingPermutation]) -> Result<Self, OrbiError> {
        let lattices = enumerate_sublattices(d).map_err(|_| OrbiError::ZeroDegree)?;
        let mut counts = [0u64; 64];
        for l in &lattices {
            let at_y = classify_images(l);
            for tau in perms {
                counts[tail_code(tau.apply(at_y))] += 1;
            }
        }
        Ok(MarkedImageCounts { degree: d, counts })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn get(&self, tail: [OrbiPoint; 3]) -> u64 {
        self.counts[tail_code(tail)]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The correlator for any insertion tuple.
    pub fn correlator(&self, ins: &InsertionTuple) -> u64 {
        self.get(ins.normalized().tail())
    }
}

/// `<Delta_i, Delta_j, Delta_k, Delta_l>_{0,4,d}` by enumeration of
/// `(sublattice, marking permutation)` pairs.
pub fn correlator(ins: &InsertionTuple, d: u64) -> Result<u64, OrbiError> {
    correlator_with(ins, d, &MarkingPermutation::ALL)
}

/// As [`correlator`], restricted to the given marking permutations.
pub fn correlator_with(
    ins: &InsertionTuple,
    d: u64,
    perms: &[MarkingPermutation],
) -> Result<u64, OrbiError> {
    if d == 0 {
        return Err(OrbiError::ZeroDegree);
    }
    Ok(MarkedImageCounts::compute(d, perms)?.correlator(ins))
}

pub fn correlator_series(ins: &InsertionTuple, trunc: usize) -> QSeries {
    correlator_series_with(ins, trunc, Exec::default())
}

/// Degrees `1..=trunc` are evaluated independently under `exec`.
pub fn correlator_series_with(ins: &InsertionTuple, trunc: usize, exec: Exec) -> QSeries {
    let degrees: Vec<u64> = (1..=trunc as u64).collect();
    let counts = exec.map_collect(degrees, |d| {
        correlator(ins, d).expect("positive degree")
    });
    let mut coeffs = vec![rational::int(0)];
    coeffs.extend(counts.into_iter().map(|c| rational::int(c as i64)));
    QSeries::from_coeffs(coeffs)
}

/// `sum_d |M_{0,4,d}(X1, *, *, *)| q^d`, summed over every ordered tuple with
/// first entry `X1`.
pub fn total_count_series(trunc: usize) -> QSeries {
    total_count_series_with(trunc, Exec::default())
}

pub fn total_count_series_with(trunc: usize, exec: Exec) -> QSeries {
    let degrees: Vec<u64> = (1..=trunc as u64).collect();
    let totals = exec.map_collect(degrees, |d| {
        let table = MarkedImageCounts::compute(d, &MarkingPermutation::ALL).expect("positive degree");
        InsertionTuple::all()
            .filter(|t| t.0[0] == OrbiPoint::X1)
            .map(|t| table.correlator(&t))
            .sum::<u64>()
    });
    let mut coeffs = vec![rational::int(0)];
    coeffs.extend(totals.into_iter().map(|c| rational::int(c as i64)));
    QSeries::from_coeffs(coeffs)
}
