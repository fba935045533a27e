//! Named verification suites, each with one designated injected fault.
//!
//! | suite        | check                                              | injected fault                          |
//! |--------------|----------------------------------------------------|-----------------------------------------|
//! | `oracle`     | SL(2,Z) orbits = sigma_1 = enumerated lattices     | expected sigma_1(1) perturbed by one    |
//! | `parity`     | coset images vs classifier vs case table           | X3/X4 swapped in the case table         |
//! | `rh`         | only unramified branching data                     | Riemann-Hurwitz inequality dropped      |
//! | `lumpsum`    | total count = 6 sigma_1                            | reference q^1 coefficient perturbed     |
//! | `closedform` | correlators, series identities, potential vs f_i   | marking permutation (3 4) dropped       |

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::exec::Exec;
use crate::lattice::{enumerate_sublattices, sigma1};
use crate::oracle::{self, RH_MAX_DEGREE, SL2_ORBIT_MAX_DEGREE};
use crate::orbi::{total_count_series_with, MarkingPermutation};
use crate::potential::{assemble_potential_with, compare_potentials, st_reference_potential};
use crate::qseries::{
    divisor_series_even, divisor_series_odd, divisor_series_q4, f0_series, f2_series, f_series,
};
use crate::rational::{self, int, rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oracle,
    Parity,
    Rh,
    Lumpsum,
    Closedform,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Oracle,
        Suite::Parity,
        Suite::Rh,
        Suite::Lumpsum,
        Suite::Closedform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Parity => "parity",
            Suite::Rh => "rh",
            Suite::Lumpsum => "lumpsum",
            Suite::Closedform => "closedform",
            Suite::All => "all",
        }
    }

    /// Exhaustive cap on the degree, if the suite has one.
    pub fn max_degree(self) -> Option<u64> {
        match self {
            Suite::Oracle => Some(SL2_ORBIT_MAX_DEGREE),
            Suite::Rh => Some(RH_MAX_DEGREE),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("--max-degree must be at least 1")]
    ZeroDegree,
    #[error("suite {suite} is exhaustive only up to degree {max}, got {d}")]
    OutOfRange { suite: &'static str, d: u64, max: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub max_degree: u64,
    pub passed: bool,
    /// Number of individual comparisons made.
    pub checked: u64,
    pub summary: String,
    pub counterexample: Option<serde_json::Value>,
}

impl SuiteReport {
    fn new(suite: Suite, max_degree: u64) -> Self {
        SuiteReport {
            suite: suite.name().to_string(),
            max_degree,
            passed: true,
            checked: 0,
            summary: String::new(),
            counterexample: None,
        }
    }

    fn fail(&mut self, counterexample: serde_json::Value) {
        if self.passed {
            self.passed = false;
            self.counterexample = Some(counterexample);
        }
    }
}

/// Run `suite` up to `dmax`. `All` clamps each exhaustive suite to its cap;
/// a single suite asked beyond its cap is an error.
pub fn run_suite(
    suite: Suite,
    dmax: u64,
    inject_fault: bool,
    exec: Exec,
) -> Result<Vec<SuiteReport>, VerifyError> {
    if dmax == 0 {
        return Err(VerifyError::ZeroDegree);
    }
    if suite == Suite::All {
        return Ok(Suite::EACH
            .iter()
            .map(|&s| {
                let d = s.max_degree().map_or(dmax, |cap| dmax.min(cap));
                run_single(s, d, inject_fault, exec)
            })
            .collect());
    }
    if let Some(max) = suite.max_degree() {
        if dmax > max {
            return Err(VerifyError::OutOfRange {
                suite: suite.name(),
                d: dmax,
                max,
            });
        }
    }
    Ok(vec![run_single(suite, dmax, inject_fault, exec)])
}

fn run_single(suite: Suite, dmax: u64, fault: bool, exec: Exec) -> SuiteReport {
    let mut r = SuiteReport::new(suite, dmax);
    match suite {
        Suite::Oracle => {
            for d in 1..=dmax {
                let orbits = oracle::sl2_orbit_representatives(d, exec)
                    .expect("range checked")
                    .len() as u64;
                let mut expected = sigma1(d).expect("positive degree");
                if fault && d == 1 {
                    expected += 1;
                }
                let listed = enumerate_sublattices(d).expect("positive degree").len() as u64;
                r.checked += 1;
                if orbits != expected || listed != expected {
                    r.fail(json!({
                        "degree": d,
                        "orbit_count": orbits,
                        "sigma1": expected,
                        "enumerated": listed,
                    }));
                }
            }
            r.summary = format!("SL(2,Z) orbit count = sigma1 = |L_d| for d <= {dmax}");
        }
        Suite::Parity => {
            let c = oracle::image_table_check(dmax, fault, exec);
            r.checked = c.lattices_checked;
            if let Some(bad) = &c.counterexample {
                r.fail(serde_json::to_value(bad).expect("serializable"));
            }
            let cases = c.case_hits.iter().filter(|&&n| n > 0).count();
            r.summary = format!(
                "{} lattices, {cases} of 8 parity cases exercised",
                c.lattices_checked
            );
        }
        Suite::Rh => {
            let mut solutions = 0;
            for d in 1..=dmax {
                let c = oracle::rh_uniqueness_check(d, fault, exec).expect("range checked");
                solutions += c.solutions;
                r.checked += 1;
                if let Some(bad) = &c.counterexample {
                    r.fail(json!({ "degree": d, "branching": bad }));
                }
            }
            r.summary = format!("{solutions} branching data enumerated for d <= {dmax}");
        }
        Suite::Lumpsum => {
            let n = dmax as usize;
            let total = total_count_series_with(n, exec);
            let mut reference = f_series(n);
            let mut coeffs = reference.coeffs().to_vec();
            coeffs[0] += rat(1, 24);
            if fault {
                coeffs[1] += int(1);
            }
            reference = crate::qseries::QSeries::from_coeffs(coeffs).scale(&int(6));
            for d in 0..=n {
                r.checked += 1;
                let (a, b) = (&total.coeffs()[d], &reference.coeffs()[d]);
                if a != b {
                    r.fail(json!({
                        "degree": d,
                        "enumerated": rational::to_string(a),
                        "expected": rational::to_string(b),
                    }));
                }
            }
            r.summary = format!("sum of correlators = 6 f(q) + 1/4 through q^{n}");
        }
        Suite::Closedform => {
            let perms = if fault {
                oracle::without_swap_34()
            } else {
                MarkingPermutation::ALL.to_vec()
            };
            let c = oracle::correlator_crosscheck(dmax, &perms, exec);
            r.checked += c.comparisons;
            if let Some(bad) = &c.counterexample {
                r.fail(json!({ "correlator": bad }));
            }

            let n = dmax as usize;
            let identities = [
                ("f0 = Dodd", f0_series(n), divisor_series_odd(n)),
                (
                    "f2 = Deven - D(q^4)",
                    f2_series(n),
                    divisor_series_even(n).sub(&divisor_series_q4(n)),
                ),
            ];
            for (name, lhs, rhs) in identities {
                r.checked += 1;
                if lhs != rhs {
                    r.fail(json!({ "identity": name }));
                }
            }

            let assembled = assemble_potential_with(n, exec).expect("positive truncation");
            let reference = st_reference_potential(n).expect("positive truncation");
            let diff = compare_potentials(&assembled, &reference).expect("same truncation");
            r.checked += 1;
            if let Some(first) = diff.entries.first() {
                r.fail(json!({ "potential": first }));
            }
            r.summary = format!(
                "{} correlator comparisons, 2 series identities, potential through q^{n}",
                c.comparisons
            );
        }
        Suite::All => unreachable!("expanded by run_suite"),
    }
    r
}
