//! Brute-force checkers for the counting claims.
//!
//! None of these reuse the reduction or classification code they check:
//! SL(2,Z) orbits are found by column moves on `i64` matrices rather than
//! through [`crate::lattice::hnf_reduce`], and cone-point images are
//! recomputed from exact rational coordinates rather than through
//! [`crate::orbi::classify_images`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::lattice::{enumerate_sublattices, HnfLattice};
use crate::orbi::{self, InsertionTuple, MarkedImageCounts, MarkingPermutation, OrbiPoint};
use crate::qseries::{divisor_series_even, divisor_series_odd, divisor_series_q4};
use crate::rational::{self, int, rat, Rational};

/// Largest degree for [`sl2_orbit_count`]: it scans `(2d + 1)^3` candidate
/// columns, about 15 600 at `d = 12`.
pub const SL2_ORBIT_MAX_DEGREE: u64 = 12;

/// Largest degree for [`rh_uniqueness_check`]: the search ranges over 256
/// assignments, `((d + 1)/2)^4` exponent vectors and a product of four
/// partition sets of at most `d/2`.
pub const RH_MAX_DEGREE: u64 = 9;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{check} is exhaustive only for 1 <= d <= {max}, got {d}")]
    OutOfRange {
        check: &'static str,
        d: u64,
        max: u64,
    },
}

fn check_range(check: &'static str, d: u64, max: u64) -> Result<(), OracleError> {
    if d == 0 || d > max {
        return Err(OracleError::OutOfRange { check, d, max });
    }
    Ok(())
}

/// Column normal form of `[[alpha, gamma], [beta, delta]]` (columns are the
/// basis vectors) under right multiplication by SL(2,Z).
///
/// Only two moves are used: `col2 -= k * col1` and
/// `(col1, col2) -> (col2, -col1)`. The result has `beta = 0`,
/// `alpha > 0` and `0 <= gamma < alpha`.
fn column_normal_form(mut alpha: i64, mut beta: i64, mut gamma: i64, mut delta: i64) -> (i64, i64, i64) {
    while beta != 0 {
        let k = delta.div_euclid(beta);
        gamma -= k * alpha;
        delta -= k * beta;
        (alpha, beta, gamma, delta) = (gamma, delta, -alpha, -beta);
    }
    if alpha < 0 {
        // the swap move applied twice negates both columns
        (alpha, gamma, delta) = (-alpha, -gamma, -delta);
    }
    let k = gamma.div_euclid(alpha);
    gamma -= k * alpha;
    (alpha, gamma, delta)
}

/// Normal forms `(alpha, gamma, delta)` of every integer matrix with entries
/// in `[-d, d]` and determinant `d`.
pub fn sl2_orbit_representatives(d: u64, exec: Exec) -> Result<BTreeSet<(i64, i64, i64)>, OracleError> {
    check_range("sl2_orbit_count", d, SL2_ORBIT_MAX_DEGREE)?;
    let n = d as i64;
    let alphas: Vec<i64> = (-n..=n).collect();
    let parts = exec.map_collect(alphas, |alpha| {
        let mut seen = BTreeSet::new();
        for beta in -n..=n {
            for gamma in -n..=n {
                // alpha*delta - beta*gamma = d
                let rhs = n + beta * gamma;
                let deltas: Vec<i64> = if alpha == 0 {
                    if rhs == 0 { (-n..=n).collect() } else { Vec::new() }
                } else if rhs % alpha == 0 && (rhs / alpha).abs() <= n {
                    vec![rhs / alpha]
                } else {
                    Vec::new()
                };
                for delta in deltas {
                    debug_assert_eq!(alpha * delta - beta * gamma, n);
                    seen.insert(column_normal_form(alpha, beta, gamma, delta));
                }
            }
        }
        seen
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Number of SL(2,Z)-orbits of integer matrices with determinant `d`.
pub fn sl2_orbit_count(d: u64) -> Result<u64, OracleError> {
    Ok(sl2_orbit_representatives(d, Exec::default())?.len() as u64)
}

/// Where each domain cone point lands, as rational coordinates mod `Z^2`.
fn half_lattice_points(l: &HnfLattice) -> [(Rational, Rational); 3] {
    let (h, m, g) = (l.h() as i64, l.m() as i64, l.g() as i64);
    [
        (rat(h, 2), int(0)),
        (rat(h + m, 2), rat(g, 2)),
        (rat(m, 2), rat(g, 2)),
    ]
}

fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// Cone points of the target as representatives in `[0, 1)^2`.
fn arrangement() -> [(OrbiPoint, (Rational, Rational)); 4] {
    [
        (OrbiPoint::X1, (int(0), int(0))),
        (OrbiPoint::X2, (rat(1, 2), int(0))),
        (OrbiPoint::X3, (rat(1, 2), rat(1, 2))),
        (OrbiPoint::X4, (int(0), rat(1, 2))),
    ]
}

fn locate(p: &(Rational, Rational)) -> Option<OrbiPoint> {
    let reduced = (frac(&p.0), frac(&p.1));
    arrangement()
        .into_iter()
        .find(|(_, q)| *q == reduced)
        .map(|(x, _)| x)
}

/// The eight parity cases, keyed by `(g, h, m) mod 2`.
pub fn parity_case_table(swap_x3_x4: bool) -> [((u8, u8, u8), [OrbiPoint; 3]); 8] {
    use OrbiPoint::*;
    let mut table = [
        ((0, 0, 0), [X1, X1, X1]),
        ((0, 0, 1), [X1, X2, X2]),
        ((0, 1, 0), [X2, X2, X1]),
        ((0, 1, 1), [X2, X1, X2]),
        ((1, 0, 0), [X1, X4, X4]),
        ((1, 0, 1), [X1, X3, X3]),
        ((1, 1, 0), [X2, X3, X4]),
        ((1, 1, 1), [X2, X4, X3]),
    ];
    if swap_x3_x4 {
        for (_, row) in table.iter_mut() {
            for p in row.iter_mut() {
                *p = match *p {
                    X3 => X4,
                    X4 => X3,
                    other => other,
                };
            }
        }
    }
    table
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMismatch {
    pub lattice: HnfLattice,
    pub direct: Option<[OrbiPoint; 3]>,
    pub classified: [OrbiPoint; 3],
    pub table: [OrbiPoint; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCheck {
    pub lattices_checked: u64,
    /// How many lattices fell into each case `(i)..(viii)`.
    pub case_hits: [u64; 8],
    pub counterexample: Option<TableMismatch>,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Recompute the images of `y2, y3, y4` from coordinates for every lattice of
/// index `<= dmax` and compare with both `classify_images` and the case table.
pub fn image_table_check(dmax: u64, swap_x3_x4: bool, exec: Exec) -> TableCheck {
    let table = parity_case_table(swap_x3_x4);
    let degrees: Vec<u64> = (1..=dmax).collect();
    let per_degree = exec.map_collect(degrees, |d| {
        let mut hits = [0u64; 8];
        let mut first = None;
        let lattices = enumerate_sublattices(d).expect("positive degree");
        for l in &lattices {
            let pts = half_lattice_points(l);
            let direct = match (locate(&pts[0]), locate(&pts[1]), locate(&pts[2])) {
                (Some(a), Some(b), Some(c)) => Some([a, b, c]),
                _ => None,
            };
            let key = ((l.g() % 2) as u8, (l.h() % 2) as u8, (l.m() % 2) as u8);
            let case = table.iter().position(|(k, _)| *k == key).expect("all residues covered");
            hits[case] += 1;
            let classified = orbi::classify_images(l);
            let expected = table[case].1;
            if first.is_none() && (direct != Some(classified) || direct != Some(expected)) {
                first = Some(TableMismatch {
                    lattice: *l,
                    direct,
                    classified,
                    table: expected,
                });
            }
        }
        (lattices.len() as u64, hits, first)
    });
    let mut out = TableCheck {
        lattices_checked: 0,
        case_hits: [0; 8],
        counterexample: None,
    };
    for (n, hits, first) in per_degree {
        out.lattices_checked += n;
        for (acc, h) in out.case_hits.iter_mut().zip(hits) {
            *acc += h;
        }
        if out.counterexample.is_none() {
            out.counterexample = first;
        }
    }
    out
}

/// Local data of a degree-`d` branched cover `P^1 -> P^1` compatible with
/// the four `Z_2` marked points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingData {
    /// `I(j)`: target cone point (0-based) of the `j`-th marked point.
    pub assignment: [u8; 4],
    /// Local lifts `z -> z^(2 a_j + 1)` at the marked points.
    pub a: [u32; 4],
    /// Half ramification indices `e^i_j` of the unmarked preimages of `w_i`.
    pub fibers: [Vec<u32>; 4],
}

impl BranchingData {
    pub fn is_unramified(&self) -> bool {
        self.a.iter().all(|&x| x == 0) && self.fibers.iter().flatten().all(|&e| e == 1)
    }

    /// Fiber-degree identity at every target point.
    pub fn satisfies_fiber_degrees(&self, d: u64) -> bool {
        (0..4).all(|i| {
            let marked: u64 = (0..4)
                .filter(|&j| self.assignment[j] as usize == i)
                .map(|j| 2 * self.a[j] as u64 + 1)
                .sum();
            let free: u64 = self.fibers[i].iter().map(|&e| 2 * e as u64).sum();
            marked + free == d
        })
    }

    /// `2 <= 2d - (sum 2 a_j + sum (2 e - 1))`.
    pub fn satisfies_riemann_hurwitz(&self, d: u64) -> bool {
        let ramification: i64 = self.a.iter().map(|&x| 2 * x as i64).sum::<i64>()
            + self
                .fibers
                .iter()
                .flatten()
                .map(|&e| 2 * e as i64 - 1)
                .sum::<i64>();
        2 <= 2 * d as i64 - ramification
    }
}

/// Partitions of `n` into positive parts, non-increasing.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhCheck {
    pub degree: u64,
    /// Branching data satisfying all constraints.
    pub solutions: u64,
    /// First solution that is not an unramified cover.
    pub counterexample: Option<BranchingData>,
}

impl RhCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Enumerate all branching data of degree `d` satisfying the fiber-degree
/// identities and (unless `skip_riemann_hurwitz`) the Riemann-Hurwitz
/// inequality. Passes iff every solution is unramified.
pub fn rh_uniqueness_check(d: u64, skip_riemann_hurwitz: bool, exec: Exec) -> Result<RhCheck, OracleError> {
    check_range("rh_uniqueness_check", d, RH_MAX_DEGREE)?;
    let amax = ((d - 1) / 2) as u32;
    let parts: Vec<Vec<Vec<u32>>> = (0..=d as u32 / 2).map(partitions).collect();
    let assignments: Vec<[u8; 4]> = (0..256u32)
        .map(|c| [0, 1, 2, 3].map(|j| ((c >> (2 * j)) & 3) as u8))
        .collect();

    let results = exec.map_collect(assignments, |assignment| {
        let mut solutions = 0u64;
        let mut counterexample = None;
        let exps = (0..=amax).flat_map(|a0| {
            (0..=amax).flat_map(move |a1| {
                (0..=amax).flat_map(move |a2| (0..=amax).map(move |a3| [a0, a1, a2, a3]))
            })
        });
        for a in exps {
            let mut half_free = [0u32; 4];
            let mut ok = true;
            for (i, slot) in half_free.iter_mut().enumerate() {
                let marked: u64 = (0..4)
                    .filter(|&j| assignment[j] as usize == i)
                    .map(|j| 2 * a[j] as u64 + 1)
                    .sum();
                if marked > d || (d - marked) % 2 == 1 {
                    ok = false;
                    break;
                }
                *slot = ((d - marked) / 2) as u32;
            }
            if !ok {
                continue;
            }
            let choices = half_free.map(|n| &parts[n as usize]);
            for p0 in choices[0] {
                for p1 in choices[1] {
                    for p2 in choices[2] {
                        for p3 in choices[3] {
                            let data = BranchingData {
                                assignment,
                                a,
                                fibers: [p0.clone(), p1.clone(), p2.clone(), p3.clone()],
                            };
                            debug_assert!(data.satisfies_fiber_degrees(d));
                            if !skip_riemann_hurwitz && !data.satisfies_riemann_hurwitz(d) {
                                continue;
                            }
                            solutions += 1;
                            if counterexample.is_none() && !data.is_unramified() {
                                counterexample = Some(data);
                            }
                        }
                    }
                }
            }
        }
        (solutions, counterexample)
    });

    let mut out = RhCheck {
        degree: d,
        solutions: 0,
        counterexample: None,
    };
    for (n, c) in results {
        out.solutions += n;
        if out.counterexample.is_none() {
            out.counterexample = c;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatorMismatch {
    pub insertions: InsertionTuple,
    pub degree: u64,
    pub enumerated: u64,
    #[serde(with = "rational")]
    pub closed_form: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub comparisons: u64,
    pub counterexample: Option<CorrelatorMismatch>,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Closed-form series for a tuple's insertion class, by multiset shape.
pub fn closed_form_series(ins: &InsertionTuple, trunc: usize) -> crate::qseries::QSeries {
    let mut mult: Vec<usize> = OrbiPoint::ALL
        .iter()
        .map(|p| ins.0.iter().filter(|q| *q == p).count())
        .filter(|&c| c > 0)
        .collect();
    mult.sort_unstable();
    match mult.as_slice() {
        [1, 1, 1, 1] => divisor_series_odd(trunc),
        [4] => divisor_series_q4(trunc).scale(&int(6)),
        [2, 2] => divisor_series_even(trunc)
            .sub(&divisor_series_q4(trunc))
            .scale(&rat(2, 3)),
        _ => crate::qseries::QSeries::zero(trunc),
    }
}

/// Compare enumerated correlators with the closed forms for all 256 ordered
/// tuples and every `1 <= d <= dmax`, counting only the given marking
/// permutations.
pub fn correlator_crosscheck(dmax: u64, perms: &[MarkingPermutation], exec: Exec) -> CrossCheck {
    let trunc = dmax as usize;
    let forms: Vec<(InsertionTuple, crate::qseries::QSeries)> = InsertionTuple::all()
        .map(|t| (t, closed_form_series(&t, trunc)))
        .collect();
    let degrees: Vec<u64> = (1..=dmax).collect();
    let per_degree = exec.map_collect(degrees, |d| {
        let table = MarkedImageCounts::compute(d, perms).expect("positive degree");
        let mut first = None;
        for (t, form) in &forms {
            let enumerated = table.correlator(t);
            let expected = form.coefficient(d as usize).expect("within truncation");
            if first.is_none() && int(enumerated as i64) != *expected {
                first = Some(CorrelatorMismatch {
                    insertions: *t,
                    degree: d,
                    enumerated,
                    closed_form: expected.clone(),
                });
            }
        }
        first
    });
    CrossCheck {
        comparisons: dmax * forms.len() as u64,
        counterexample: per_degree.into_iter().flatten().next(),
    }
}

/// The marking permutations with `(3 4)` removed.
pub fn without_swap_34() -> Vec<MarkingPermutation> {
    MarkingPermutation::ALL
        .into_iter()
        .filter(|t| *t != MarkingPermutation::SWAP_34)
        .collect()
}

/// Sum of divisors by trial division on `u64`, kept here so the checks do
/// not depend on the lattice module.
pub fn naive_sigma1(d: u64) -> u64 {
    (1..=d).filter(|k| d % k == 0).sum()
}
