//! The genus-0 Gromov-Witten potential in `t0..t4` and `q`.
//!
//! [`assemble_potential`] builds `F` from the enumerated correlators plus the
//! degree-0 data (the Chen-Ruan structure constant `<1, D_j, D_j> = 1/2`,
//! `<1, 1, [pt]> = 1`, and the obstructed constant-map contribution `-1/4` to
//! each `<D_j^4>`). [`st_reference_potential`] writes down the closed form in
//! terms of `f0, f1, f2` directly. The two are compared monomial by monomial.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::orbi::{InsertionTuple, MarkedImageCounts, MarkingPermutation, OrbiPoint};
use crate::qseries::{f0_series, f1_series, f2_series, QSeries};
use crate::rational::{self, int, rat, Rational};

/// `<1, 1, [pt]>_{0,3}`, giving the `t0^2 log q` term via the divisor axiom.
pub const UNIT_UNIT_POINT: i64 = 1;

/// `<1, D_j, D_j>_{0,3,0} = D_j . D_j = 1/2`.
pub fn unit_twisted_pair() -> Rational {
    rat(1, 2)
}

/// Degree-0 contribution to `<D_j, D_j, D_j, D_j>_{0,4,0}` from obstructed
/// constant maps. Taken as given.
pub fn constant_quartic() -> Rational {
    rat(-1, 4)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PotentialError {
    #[error("cannot compare potentials truncated at q^{lhs} and q^{rhs}")]
    TruncationMismatch { lhs: usize, rhs: usize },
    #[error("potential must be truncated at q^1 or higher")]
    ZeroTruncation,
}

/// `t0^e0 t1^e1 t2^e2 t3^e3 t4^e4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub [u8; 5]);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// The monomial `t_{i1} t_{i2} ...` for twisted-sector insertions.
    pub fn from_insertions(pts: &[OrbiPoint]) -> Self {
        let mut e = [0u8; 5];
        for p in pts {
            e[p.label() as usize] += 1;
        }
        Monomial(e)
    }

    /// Twisted exponents as insertions, e.g. `t1^2 t3^2 -> (X1, X1, X3, X3)`.
    pub fn insertions(&self) -> Vec<OrbiPoint> {
        OrbiPoint::ALL
            .iter()
            .flat_map(|p| std::iter::repeat_n(*p, self.0[p.label() as usize] as usize))
            .collect()
    }

    fn print_key(&self) -> (Reverse<u8>, u8, Reverse<[u8; 5]>) {
        let mut twisted: Vec<u8> = self.0[1..].iter().copied().filter(|&e| e > 0).collect();
        twisted.sort_unstable();
        let shape = match twisted.as_slice() {
            [1, 1, 1, 1] => 0,
            [4] => 1,
            [2, 2] => 2,
            _ => 3,
        };
        (Reverse(self.0[0]), shape, Reverse(self.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("t{i}") } else { format!("t{i}^{e}") })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub monomial: Monomial,
    pub series: QSeries,
}

/// `log_term * t0^2 log q + sum_m m * series_m`, with zero series omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PotentialRecord", from = "PotentialRecord")]
pub struct Potential {
    trunc: usize,
    log_term: Rational,
    terms: BTreeMap<Monomial, QSeries>,
}

#[derive(Serialize, Deserialize)]
struct PotentialRecord {
    trunc: usize,
    #[serde(with = "rational")]
    log_term: Rational,
    terms: Vec<Term>,
}

impl From<Potential> for PotentialRecord {
    fn from(p: Potential) -> Self {
        PotentialRecord {
            trunc: p.trunc,
            log_term: p.log_term,
            terms: p
                .terms
                .into_iter()
                .map(|(monomial, series)| Term { monomial, series })
                .collect(),
        }
    }
}

impl From<PotentialRecord> for Potential {
    fn from(r: PotentialRecord) -> Self {
        let mut p = Potential::new(r.trunc, r.log_term);
        for t in r.terms {
            p.add_term(t.monomial, &t.series);
        }
        p
    }
}

impl Potential {
    pub fn new(trunc: usize, log_term: Rational) -> Self {
        Potential {
            trunc,
            log_term,
            terms: BTreeMap::new(),
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn log_term(&self) -> &Rational {
        &self.log_term
    }

    /// Series attached to `m`; `None` when it is identically zero.
    pub fn series(&self, m: &Monomial) -> Option<&QSeries> {
        self.terms.get(m)
    }

    /// Series attached to `m`, with absent monomials read as zero.
    pub fn series_or_zero(&self, m: &Monomial) -> QSeries {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| QSeries::zero(self.trunc))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &QSeries)> {
        self.terms.iter()
    }

    /// Add `series` (truncated to this potential) to the coefficient of `m`.
    pub fn add_term(&mut self, m: Monomial, series: &QSeries) {
        let total = self.series_or_zero(&m).add(&series.truncate(self.trunc));
        if total.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, total);
        }
    }

    /// Human-readable form grouped like the closed-form presentation.
    pub fn pretty(&self) -> String {
        let mut monos: Vec<&Monomial> = self.terms.keys().collect();
        monos.sort_by_key(|m| m.print_key());
        let mut groups: Vec<(Vec<&Monomial>, &QSeries)> = Vec::new();
        for m in monos {
            let s = &self.terms[m];
            match groups.iter_mut().find(|(_, gs)| *gs == s) {
                Some((ms, _)) => ms.push(m),
                None => groups.push((vec![m], s)),
            }
        }
        let mut out = format!("F = {} t0^2 log q", self.log_term);
        for (ms, s) in groups {
            let names: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
            out.push_str(&format!("\n  + ({}) * ({})", names.join(" + "), s));
        }
        out
    }
}

/// Every exponent vector `(e1, .., e4)` with the given total degree.
fn twisted_exponents(total: u8) -> Vec<[u8; 4]> {
    let mut out = Vec::new();
    for a in 0..=total {
        for b in 0..=total - a {
            for c in 0..=total - a - b {
                out.push([a, b, c, total - a - b - c]);
            }
        }
    }
    out
}

fn factorial(n: u8) -> i64 {
    (1..=n as i64).product()
}

/// `F` from counted correlators and degree-0 data.
pub fn assemble_potential(trunc: usize) -> Result<Potential, PotentialError> {
    assemble_potential_with(trunc, Exec::default())
}

pub fn assemble_potential_with(trunc: usize, exec: Exec) -> Result<Potential, PotentialError> {
    if trunc == 0 {
        return Err(PotentialError::ZeroTruncation);
    }
    let degrees: Vec<u64> = (1..=trunc as u64).collect();
    let tables = exec.map_collect(degrees, |d| {
        MarkedImageCounts::compute(d, &MarkingPermutation::ALL).expect("positive degree")
    });

    // sum_k 1/k! <t, .., t>: a monomial with exponents e gets 1/prod(e_i!)
    // times the correlator of any ordering of its insertions.
    // t0^2 (log q): exponents (2, [pt] via log q)
    let log_term = rat(UNIT_UNIT_POINT, factorial(2) * factorial(1));
    let mut p = Potential::new(trunc, log_term);

    for j in OrbiPoint::ALL {
        let mut m = Monomial::from_insertions(&[j, j]);
        m.0[0] = 1;
        let weight = rat(1, factorial(1) * factorial(2));
        p.add_term(m, &QSeries::constant(weight * unit_twisted_pair(), trunc));
    }

    for e in twisted_exponents(4) {
        let m = Monomial([0, e[0], e[1], e[2], e[3]]);
        let pts = m.insertions();
        let ins = InsertionTuple([pts[0], pts[1], pts[2], pts[3]]);
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend(tables.iter().map(|t| int(t.correlator(&ins) as i64)));
        if e.contains(&4) {
            coeffs[0] += constant_quartic();
        }
        let weight = Rational::one() / int(e.iter().map(|&k| factorial(k)).product());
        p.add_term(m, &QSeries::from_coeffs(coeffs).scale(&weight));
    }
    Ok(p)
}

/// `F` written directly from `f0, f1, f2`.
pub fn st_reference_potential(trunc: usize) -> Result<Potential, PotentialError> {
    if trunc == 0 {
        return Err(PotentialError::ZeroTruncation);
    }
    let mut p = Potential::new(trunc, rat(1, 2));
    let quarter = QSeries::constant(rat(1, 4), trunc);
    for j in 1..=4 {
        let mut e = [0u8; 5];
        e[0] = 1;
        e[j] = 2;
        p.add_term(Monomial(e), &quarter);
    }
    p.add_term(Monomial([0, 1, 1, 1, 1]), &f0_series(trunc));
    let f1 = f1_series(trunc).scale(&rat(1, 4));
    for j in 1..=4 {
        let mut e = [0u8; 5];
        e[j] = 4;
        p.add_term(Monomial(e), &f1);
    }
    let f2 = f2_series(trunc).scale(&rat(1, 6));
    for i in 1..=4 {
        for j in i + 1..=4 {
            let mut e = [0u8; 5];
            e[i] = 2;
            e[j] = 2;
            p.add_term(Monomial(e), &f2);
        }
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiffEntry {
    LogTerm {
        #[serde(with = "rational")]
        lhs: Rational,
        #[serde(with = "rational")]
        rhs: Rational,
    },
    Coefficient {
        monomial: Monomial,
        degree: usize,
        #[serde(with = "rational")]
        lhs: Rational,
        #[serde(with = "rational")]
        rhs: Rational,
    },
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffEntry::LogTerm { lhs, rhs } => write!(f, "t0^2 log q: {lhs} != {rhs}"),
            DiffEntry::Coefficient {
                monomial,
                degree,
                lhs,
                rhs,
            } => write!(f, "{monomial} at q^{degree}: {lhs} != {rhs}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialDiff {
    pub entries: Vec<DiffEntry>,
}

impl PotentialDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn compare_potentials(a: &Potential, b: &Potential) -> Result<PotentialDiff, PotentialError> {
    if a.trunc != b.trunc {
        return Err(PotentialError::TruncationMismatch {
            lhs: a.trunc,
            rhs: b.trunc,
        });
    }
    let mut entries = Vec::new();
    if a.log_term != b.log_term {
        entries.push(DiffEntry::LogTerm {
            lhs: a.log_term.clone(),
            rhs: b.log_term.clone(),
        });
    }
    let mut monos: Vec<&Monomial> = a.terms.keys().chain(b.terms.keys()).collect();
    monos.sort();
    monos.dedup();
    for m in monos {
        let (sa, sb) = (a.series_or_zero(m), b.series_or_zero(m));
        for (degree, (x, y)) in sa.coeffs().iter().zip(sb.coeffs()).enumerate() {
            if x != y {
                entries.push(DiffEntry::Coefficient {
                    monomial: *m,
                    degree,
                    lhs: x.clone(),
                    rhs: y.clone(),
                });
            }
        }
    }
    Ok(PotentialDiff { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{divisor_series_even, divisor_series_odd, divisor_series_q4};

    const T1T2T3T4: Monomial = Monomial([0, 1, 1, 1, 1]);
    const T1_4: Monomial = Monomial([0, 4, 0, 0, 0]);
    const T1_2T2_2: Monomial = Monomial([0, 2, 2, 0, 0]);

    #[test]
    fn assembled_examples() {
        let p = assemble_potential(8).unwrap();
        assert_eq!(p.log_term(), &rat(1, 2));
        assert_eq!(p.series(&T1T2T3T4).unwrap().coefficient(1).unwrap(), &int(1));
        assert_eq!(p.series(&T1_4).unwrap().coefficient(0).unwrap(), &rat(-1, 96));
        // (1/6) * (sigma_1(2) - 0)
        assert_eq!(p.series(&T1_2T2_2).unwrap().coefficient(2).unwrap(), &rat(1, 2));
        assert_eq!(
            p.series(&Monomial([1, 0, 0, 2, 0])).unwrap(),
            &QSeries::constant(rat(1, 4), 8)
        );
    }

    /// Hand expansion of the closed form at low order.
    #[test]
    fn hand_expansion_low_order() {
        let p = assemble_potential(4).unwrap();
        // f0 = q + 4q^3
        assert_eq!(p.series(&T1T2T3T4).unwrap(), &QSeries::from_integers([0, 1, 0, 4, 0]));
        // (1/4) f1 = -1/96 + q^4/4
        assert_eq!(
            p.series(&T1_4).unwrap().coeffs(),
            &[rat(-1, 96), int(0), int(0), int(0), rat(1, 4)]
        );
        // (1/6) f2 = (3 q^2 + (7 - 1) q^4)/6
        assert_eq!(
            p.series(&T1_2T2_2).unwrap().coeffs(),
            &[int(0), int(0), rat(1, 2), int(0), int(1)]
        );
    }

    #[test]
    fn reference_examples() {
        let n = 30;
        let r = st_reference_potential(n).unwrap();
        assert_eq!(r.series(&T1T2T3T4).unwrap(), &f0_series(n));
        assert_eq!(r.series(&T1_4).unwrap(), &f1_series(n).scale(&rat(1, 4)));
        assert_eq!(r.series(&T1_2T2_2).unwrap(), &f2_series(n).scale(&rat(1, 6)));
    }

    #[test]
    fn assembled_equals_reference() {
        for n in [1, 2, 5, 17, 50] {
            let diff = compare_potentials(
                &assemble_potential(n).unwrap(),
                &st_reference_potential(n).unwrap(),
            )
            .unwrap();
            assert!(diff.is_empty(), "N={n}: {:?}", diff.entries.first());
        }
    }

    #[test]
    fn compare_self_and_fault() {
        let p = assemble_potential(10).unwrap();
        assert!(compare_potentials(&p, &p).unwrap().is_empty());

        let mut bumped = p.clone();
        let mut coeffs = bumped.series(&T1T2T3T4).unwrap().coeffs().to_vec();
        coeffs[5] += int(1);
        bumped.terms.insert(T1T2T3T4, QSeries::from_coeffs(coeffs));
        let diff = compare_potentials(&p, &bumped).unwrap();
        assert_eq!(diff.entries.len(), 1);
        assert_eq!(
            diff.entries[0],
            DiffEntry::Coefficient {
                monomial: T1T2T3T4,
                degree: 5,
                lhs: int(6),
                rhs: int(7)
            }
        );

        let mut log = p.clone();
        log.log_term = rat(1, 3);
        assert!(matches!(
            compare_potentials(&p, &log).unwrap().entries[..],
            [DiffEntry::LogTerm { .. }]
        ));

        assert_eq!(
            compare_potentials(&p, &assemble_potential(11).unwrap()),
            Err(PotentialError::TruncationMismatch { lhs: 10, rhs: 11 })
        );
    }

    #[test]
    fn symmetry_and_absent_monomials() {
        let n = 40;
        let p = assemble_potential(n).unwrap();
        let quartics: Vec<Monomial> = (1..=4).map(|j| {
            let mut e = [0; 5];
            e[j] = 4;
            Monomial(e)
        }).collect();
        for m in &quartics {
            assert_eq!(p.series(m), p.series(&quartics[0]));
        }
        for i in 1..=4 {
            for j in i + 1..=4 {
                let mut e = [0; 5];
                e[i] = 2;
                e[j] = 2;
                assert_eq!(p.series(&Monomial(e)), p.series(&T1_2T2_2));
            }
            let mut e = [0; 5];
            e[0] = 1;
            e[i] = 2;
            assert!(p.series(&Monomial(e)).is_some());
        }
        let allowed = 4 + 1 + 4 + 6;
        assert_eq!(p.terms().count(), allowed);
        for m in [Monomial([0, 3, 1, 0, 0]), Monomial([0, 2, 1, 1, 0])] {
            assert!(p.series(&m).is_none());
        }
        // closed forms of the correlator series, re-derived
        let odd = divisor_series_odd(n);
        assert_eq!(p.series(&T1T2T3T4).unwrap(), &odd);
        let mixed = divisor_series_even(n).sub(&divisor_series_q4(n)).scale(&rat(1, 6));
        assert_eq!(p.series(&T1_2T2_2).unwrap(), &mixed);
    }

    #[test]
    fn json_round_trip() {
        let p = assemble_potential(6).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.starts_with(r#"{"trunc":6,"log_term":"1/2","terms":[{"monomial":[0,0,0,0,4]"#));
        let back: Potential = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn pretty_layout() {
        let text = st_reference_potential(2).unwrap().pretty();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "F = 1/2 t0^2 log q");
        assert_eq!(lines[1], "  + (t0 t1^2 + t0 t2^2 + t0 t3^2 + t0 t4^2) * (1/4 + O(q^3))");
        assert_eq!(lines[2], "  + (t1 t2 t3 t4) * (q + O(q^3))");
        assert_eq!(lines[3], "  + (t1^4 + t2^4 + t3^4 + t4^4) * (-1/96 + O(q^3))");
        assert!(lines[4].starts_with("  + (t1^2 t2^2 + t1^2 t3^2"));
        assert_eq!(lines.len(), 5);
    }
}
