//! Truncated power series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] of truncation `N` stores `c_0 .. c_N`; everything above
//! `q^N` is unknown. Binary operations truncate to the smaller operand and
//! reading past the truncation is an error.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient of q^{degree} requested beyond truncation {trunc}")]
    BeyondTruncation { degree: usize, trunc: usize },
    #[error("substitution power must be positive")]
    ZeroPower,
    #[error("series payload has {len} coefficients but trunc {trunc}")]
    LengthMismatch { len: usize, trunc: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SeriesRecord", into = "SeriesRecord")]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRecord {
    trunc: usize,
    #[serde(with = "rational::vec")]
    coeffs: Vec<Rational>,
}

impl From<QSeries> for SeriesRecord {
    fn from(s: QSeries) -> Self {
        SeriesRecord {
            trunc: s.trunc(),
            coeffs: s.coeffs,
        }
    }
}

impl TryFrom<SeriesRecord> for QSeries {
    type Error = SeriesError;

    fn try_from(r: SeriesRecord) -> Result<Self, Self::Error> {
        if r.coeffs.len() != r.trunc + 1 {
            return Err(SeriesError::LengthMismatch {
                len: r.coeffs.len(),
                trunc: r.trunc,
            });
        }
        Ok(QSeries { coeffs: r.coeffs })
    }
}

impl QSeries {
    pub fn zero(trunc: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); trunc + 1],
        }
    }

    pub fn constant(c: Rational, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    /// Series with the given coefficients; truncation is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least c_0");
        QSeries { coeffs }
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(rational::int).collect())
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coefficient(&self, degree: usize) -> Result<&Rational, SeriesError> {
        self.coeffs
            .get(degree)
            .ok_or(SeriesError::BeyondTruncation {
                degree,
                trunc: self.trunc(),
            })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Drop everything above `q^trunc`. A larger `trunc` is clamped.
    pub fn truncate(&self, trunc: usize) -> Self {
        let n = trunc.min(self.trunc());
        QSeries {
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        QSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        QSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        let coeffs = (0..=n)
            .map(|k| {
                (0..=k)
                    .filter(|&i| !self.coeffs[i].is_zero() && !other.coeffs[k - i].is_zero())
                    .fold(Rational::zero(), |acc, i| {
                        acc + &self.coeffs[i] * &other.coeffs[k - i]
                    })
            })
            .collect();
        QSeries { coeffs }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// `q -> q^k`, keeping the truncation.
    pub fn substitute_power(&self, k: usize) -> Result<Self, SeriesError> {
        if k == 0 {
            return Err(SeriesError::ZeroPower);
        }
        let n = self.trunc();
        let mut out = Self::zero(n);
        for (d, c) in self.coeffs.iter().enumerate().take(n / k + 1) {
            out.coeffs[d * k] = c.clone();
        }
        Ok(out)
    }

    /// `q -> -q`.
    pub fn negate_variable(&self) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(d, c)| if d % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Keep only the coefficients whose degree satisfies `keep`.
    pub fn filter_degrees(&self, keep: impl Fn(usize) -> bool) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(d, c)| if keep(d) { c.clone() } else { Rational::zero() })
                .collect(),
        }
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: Self) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: Self) -> QSeries {
        QSeries::sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: Self) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for QSeries {
    /// `-1/24 + q + 3 q^2 + O(q^3)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let var = match d {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{d}"),
            };
            if d == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag} {var}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.trunc() + 1)
    }
}

/// `sum_{n>=1} n q^n / (1 - q^n)` expanded through `q^N`: the
/// coefficient of `q^d` collects every `n | d`.
fn lambert_divisor_sums(trunc: usize) -> Vec<u64> {
    let mut acc = vec![0u64; trunc + 1];
    for n in 1..=trunc {
        for d in (n..=trunc).step_by(n) {
            acc[d] += n as u64;
        }
    }
    acc
}

fn divisor_series_where(trunc: usize, keep: impl Fn(usize) -> bool) -> QSeries {
    let sums = lambert_divisor_sums(trunc);
    QSeries {
        coeffs: sums
            .iter()
            .enumerate()
            .map(|(d, &s)| {
                if d >= 1 && keep(d) {
                    rational::int(s as i64)
                } else {
                    Rational::zero()
                }
            })
            .collect(),
    }
}

/// `f(q) = -1/24 + sum_{d>=1} sigma_1(d) q^d`.
pub fn f_series(trunc: usize) -> QSeries {
    let mut s = divisor_series(trunc);
    s.coeffs[0] = rational::rat(-1, 24);
    s
}

/// `D(q) = sum_{d>=1} sigma_1(d) q^d`.
pub fn divisor_series(trunc: usize) -> QSeries {
    divisor_series_where(trunc, |_| true)
}

pub fn divisor_series_odd(trunc: usize) -> QSeries {
    divisor_series_where(trunc, |d| d % 2 == 1)
}

pub fn divisor_series_even(trunc: usize) -> QSeries {
    divisor_series_where(trunc, |d| d % 2 == 0)
}

/// `D(q^4)`.
pub fn divisor_series_q4(trunc: usize) -> QSeries {
    divisor_series(trunc)
        .substitute_power(4)
        .expect("4 is a positive power")
}

/// `f0(q) = (f(q) - f(-q)) / 2`.
pub fn f0_series(trunc: usize) -> QSeries {
    let f = f_series(trunc);
    f.sub(&f.negate_variable()).scale(&rational::rat(1, 2))
}

/// `f1(q) = f(q^4)`.
pub fn f1_series(trunc: usize) -> QSeries {
    f_series(trunc)
        .substitute_power(4)
        .expect("4 is a positive power")
}

/// `f2(q) = f(q) - f0(q) - f1(q)`.
pub fn f2_series(trunc: usize) -> QSeries {
    f_series(trunc)
        .sub(&f0_series(trunc))
        .sub(&f1_series(trunc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn f_expansion_through_17() {
        let f = f_series(17);
        assert_eq!(f.coefficient(0).unwrap(), &rat(-1, 24));
        let expected = [1, 3, 4, 7, 6, 12, 8, 15, 13, 18, 12, 28, 14, 24, 24, 31, 18];
        for (d, e) in expected.iter().enumerate() {
            assert_eq!(f.coefficient(d + 1).unwrap(), &int(*e));
        }
        assert_eq!(f.coefficient(6).unwrap(), &int(12));
    }

    #[test]
    fn coefficient_past_truncation_is_error() {
        let f = f_series(3);
        assert_eq!(
            f.coefficient(4),
            Err(SeriesError::BeyondTruncation { degree: 4, trunc: 3 })
        );
    }

    #[test]
    fn mul_examples() {
        let f = f_series(4);
        let zero = QSeries::zero(4);
        assert_eq!(f.mul(&zero), zero);
        // (-1/24 + q + 3q^2)^2 at q^2: 2*(-1/24)*3 + 1*1 = 3/4
        let sq = f.mul(&f);
        assert_eq!(sq.coefficient(2).unwrap(), &rat(3, 4));
        // at q^1: 2*(-1/24)*1
        assert_eq!(sq.coefficient(1).unwrap(), &rat(-1, 12));
    }

    #[test]
    fn truncation_is_min_of_operands() {
        let a = f_series(5);
        let b = f_series(9);
        assert_eq!(a.add(&b).trunc(), 5);
        assert_eq!(b.mul(&a).trunc(), 5);
        assert_eq!(a.substitute_power(3).unwrap().trunc(), 5);
    }

    #[test]
    fn substitution_examples() {
        let s = f_series(16).substitute_power(4).unwrap();
        assert_eq!(s.coefficient(4).unwrap(), &int(1));
        for d in 1..4 {
            assert!(s.coefficient(d).unwrap().is_zero());
        }
        assert_eq!(s.coefficient(8).unwrap(), &int(3));
        assert_eq!(f_series(4).substitute_power(0), Err(SeriesError::ZeroPower));

        let one = QSeries::constant(int(1), 5);
        assert_eq!(one.negate_variable(), one);
        assert_eq!(f_series(3).negate_variable().coefficient(3).unwrap(), &int(-4));
    }

    #[test]
    fn divisor_variants() {
        assert!(divisor_series_odd(2).coefficient(2).unwrap().is_zero());
        assert_eq!(divisor_series_even(4), QSeries::from_integers([0, 0, 3, 0, 7]));
        assert!(divisor_series(6).coefficient(0).unwrap().is_zero());
    }

    #[test]
    fn f0_f1_f2_examples() {
        let mut f1 = QSeries::constant(rat(-1, 24), 4);
        f1.coeffs[4] = int(1);
        assert_eq!(f1_series(4), f1);

        let f0 = f0_series(5);
        assert_eq!(f0, QSeries::from_integers([0, 1, 0, 4, 0, 6]));

        assert!(f2_series(4).coefficient(0).unwrap().is_zero());
    }

    #[test]
    fn closed_form_identities_through_200() {
        for n in [0, 1, 2, 3, 7, 16, 64, 200] {
            assert_eq!(f0_series(n), divisor_series_odd(n));
            assert_eq!(f2_series(n), divisor_series_even(n).sub(&divisor_series_q4(n)));
            let sum = f0_series(n).add(&f1_series(n)).add(&f2_series(n));
            assert_eq!(sum, f_series(n));
        }
    }

    #[test]
    fn display() {
        assert_eq!(f_series(3).to_string(), "-1/24 + q + 3 q^2 + 4 q^3 + O(q^4)");
        assert_eq!(QSeries::zero(2).to_string(), "0 + O(q^3)");
        assert_eq!(
            f_series(3).negate_variable().to_string(),
            "-1/24 - q + 3 q^2 - 4 q^3 + O(q^4)"
        );
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&f_series(2)).unwrap();
        assert_eq!(s, r#"{"trunc":2,"coeffs":["-1/24","1","3"]}"#);
        let back: QSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f_series(2));
        assert!(serde_json::from_str::<QSeries>(r#"{"trunc":3,"coeffs":["1"]}"#).is_err());
    }

    fn arb_series(trunc: usize) -> impl Strategy<Value = QSeries> {
        prop::collection::vec((-20i64..=20, 1i64..=6), trunc + 1)
            .prop_map(|v| QSeries::from_coeffs(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ring_laws(
            (a, b, c) in (0usize..=50).prop_flat_map(|n| (arb_series(n), arb_series(n), arb_series(n)))
        ) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn json_round_trip(a in (0usize..=30).prop_flat_map(arb_series)) {
            let s = serde_json::to_string(&a).unwrap();
            let back: QSeries = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn substitution_moves_coefficients(a in (0usize..=40).prop_flat_map(arb_series), k in 1usize..=6) {
            let s = a.substitute_power(k).unwrap();
            for d in 0..=a.trunc() {
                let target = d * k;
                if target <= s.trunc() {
                    prop_assert_eq!(s.coefficient(target).unwrap(), a.coefficient(d).unwrap());
                }
            }
            for e in (0..=s.trunc()).filter(|e| e % k != 0) {
                prop_assert!(s.coefficient(e).unwrap().is_zero());
            }
        }
    }
}
