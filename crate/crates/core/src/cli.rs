//! The `pillowcase` command-line front end.
//!
//! Exit codes: 0 success or all checks passed, 1 a verification found a
//! counterexample, 2 usage error.

use std::ffi::OsString;
use std::io::{self, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::lattice::{enumerate_sublattices, sigma1, HnfLattice};
use crate::orbi::{correlator_series_with, InsertionTuple};
use crate::potential::{assemble_potential_with, compare_potentials, st_reference_potential, PotentialDiff};
use crate::qseries::{self, QSeries};
use crate::rational;
use crate::verify::{run_suite, Suite, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesName {
    #[value(name = "f")]
    F,
    #[value(name = "f0")]
    F0,
    #[value(name = "f1")]
    F1,
    #[value(name = "f2")]
    F2,
    #[value(name = "D")]
    D,
    #[value(name = "Dodd")]
    Dodd,
    #[value(name = "Deven")]
    Deven,
    #[value(name = "D4")]
    D4,
}

impl SeriesName {
    pub fn build(self, trunc: usize) -> QSeries {
        match self {
            SeriesName::F => qseries::f_series(trunc),
            SeriesName::F0 => qseries::f0_series(trunc),
            SeriesName::F1 => qseries::f1_series(trunc),
            SeriesName::F2 => qseries::f2_series(trunc),
            SeriesName::D => qseries::divisor_series(trunc),
            SeriesName::Dodd => qseries::divisor_series_odd(trunc),
            SeriesName::Deven => qseries::divisor_series_even(trunc),
            SeriesName::D4 => qseries::divisor_series_q4(trunc),
        }
    }

    fn label(self) -> &'static str {
        match self {
            SeriesName::F => "f",
            SeriesName::F0 => "f0",
            SeriesName::F1 => "f1",
            SeriesName::F2 => "f2",
            SeriesName::D => "D",
            SeriesName::Dodd => "Dodd",
            SeriesName::Deven => "Deven",
            SeriesName::D4 => "D(q^4)",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pillowcase", version, about = "Counting holomorphic orbi-spheres in P^1_{2,2,2,2}")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Pretty)]
    pub format: OutputFormat,

    /// Run every sweep on the calling thread
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the index-D sublattices of Z[i] in Hermite normal form
    Sublattices {
        #[arg(long)]
        degree: u64,
        /// Largest accepted index
        #[arg(long, default_value_t = 10_000)]
        degree_cap: u64,
    },
    /// Print one of the generating series
    Series {
        #[arg(long, value_enum)]
        which: SeriesName,
        #[arg(long, default_value_t = 20)]
        max_degree: usize,
    },
    /// Enumerate a 4-point correlator degree by degree
    Correlators {
        /// Four comma-separated orbifold point labels, e.g. 1,2,3,4
        #[arg(long)]
        insertions: InsertionTuple,
        #[arg(long, default_value_t = 20)]
        max_degree: usize,
    },
    /// Assemble the genus-0 potential
    Potential {
        #[arg(long, default_value_t = 20)]
        max_degree: usize,
        /// Diff against the closed form in f0, f1, f2
        #[arg(long)]
        compare_st: bool,
    },
    /// Run a verification suite
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        max_degree: u64,
        /// Apply the suite's designated fault; the suite must then fail
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeReport {
    pub degree: u64,
    pub count: u64,
    pub sigma1: u64,
    pub lattices: Vec<HnfLattice>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatorRecord {
    pub insertions: InsertionTuple,
    pub degree: u64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    #[serde(rename = "match")]
    pub matched: bool,
    pub trunc: usize,
    pub diff: PotentialDiff,
}

fn usage(err: &mut dyn Write, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {msg}");
    EXIT_USAGE
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn color_enabled() -> bool {
    matches!(
        std::env::var("CLI_COLOR").as_deref(),
        Ok("1") | Ok("always") | Ok("true")
    )
}

/// Parse `args` and run, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    let result = match cli.command {
        Command::Sublattices { degree, degree_cap } => {
            cmd_sublattices(degree, degree_cap, cli.format, out, err)
        }
        Command::Series { which, max_degree } => cmd_series(which, max_degree, cli.format, out),
        Command::Correlators {
            insertions,
            max_degree,
        } => cmd_correlators(&insertions, max_degree, cli.format, exec, out, err),
        Command::Potential {
            max_degree,
            compare_st,
        } => cmd_potential(max_degree, compare_st, cli.format, exec, out, err),
        Command::Verify {
            suite,
            max_degree,
            inject_fault,
        } => cmd_verify(suite, max_degree, inject_fault, cli.format, exec, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILED
        }
    }
}

pub fn cmd_sublattices(
    degree: u64,
    cap: u64,
    format: OutputFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    if degree == 0 {
        return Ok(usage(err, "--degree must be at least 1"));
    }
    if degree > cap {
        return Ok(usage(err, format!("--degree {degree} exceeds --degree-cap {cap}")));
    }
    let lattices = enumerate_sublattices(degree).expect("positive degree");
    let report = SublatticeReport {
        degree,
        count: lattices.len() as u64,
        sigma1: sigma1(degree).expect("positive degree"),
        lattices,
    };
    match format {
        OutputFormat::Json => writeln!(out, "{}", to_json(&report))?,
        OutputFormat::Csv => {
            writeln!(out, "h,m,g,d")?;
            for l in &report.lattices {
                writeln!(out, "{},{},{},{}", l.h(), l.m(), l.g(), l.index())?;
            }
            writeln!(out, "count={} sigma1={}", report.count, report.sigma1)?;
        }
        OutputFormat::Pretty => {
            writeln!(out, "index-{degree} sublattices <(h,0), (m,g)>:")?;
            for l in &report.lattices {
                writeln!(out, "  {l}")?;
            }
            writeln!(out, "count={} sigma1={}", report.count, report.sigma1)?;
        }
    }
    Ok(EXIT_OK)
}

fn write_series_csv(out: &mut dyn Write, s: &QSeries, value: &str) -> io::Result<()> {
    writeln!(out, "degree,{value}")?;
    for (d, c) in s.coeffs().iter().enumerate() {
        writeln!(out, "{d},{}", rational::to_string(c))?;
    }
    Ok(())
}

pub fn cmd_series(
    which: SeriesName,
    trunc: usize,
    format: OutputFormat,
    out: &mut dyn Write,
) -> io::Result<i32> {
    let s = which.build(trunc);
    match format {
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string(&s).expect("serializable"))?,
        OutputFormat::Csv => write_series_csv(out, &s, "coefficient")?,
        OutputFormat::Pretty => writeln!(out, "{} = {s}", which.label())?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_correlators(
    ins: &InsertionTuple,
    trunc: usize,
    format: OutputFormat,
    exec: Exec,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    if trunc == 0 {
        return Ok(usage(err, "--max-degree must be at least 1"));
    }
    let s = correlator_series_with(ins, trunc, exec);
    let records: Vec<CorrelatorRecord> = (1..=trunc)
        .map(|d| CorrelatorRecord {
            insertions: *ins,
            degree: d as u64,
            count: s.coeffs()[d].to_integer().try_into().expect("non-negative count"),
        })
        .collect();
    match format {
        OutputFormat::Json => writeln!(out, "{}", to_json(&records))?,
        OutputFormat::Csv => {
            writeln!(out, "degree,count")?;
            for r in &records {
                writeln!(out, "{},{}", r.degree, r.count)?;
            }
        }
        OutputFormat::Pretty => writeln!(out, "sum_d {ins}_(0,4,d) q^d = {s}")?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_potential(
    trunc: usize,
    compare_st: bool,
    format: OutputFormat,
    exec: Exec,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let Ok(assembled) = assemble_potential_with(trunc, exec) else {
        return Ok(usage(err, "--max-degree must be at least 1"));
    };
    if compare_st {
        let reference = st_reference_potential(trunc).expect("positive truncation");
        let diff = compare_potentials(&assembled, &reference).expect("same truncation");
        let report = ComparisonReport {
            matched: diff.is_empty(),
            trunc,
            diff,
        };
        match format {
            OutputFormat::Json => writeln!(out, "{}", to_json(&report))?,
            OutputFormat::Csv => {
                writeln!(out, "monomial,degree,lhs,rhs")?;
                for e in &report.diff.entries {
                    match e {
                        crate::potential::DiffEntry::LogTerm { lhs, rhs } => {
                            writeln!(out, "t0^2 log q,,{lhs},{rhs}")?
                        }
                        crate::potential::DiffEntry::Coefficient {
                            monomial,
                            degree,
                            lhs,
                            rhs,
                        } => writeln!(out, "{monomial},{degree},{lhs},{rhs}")?,
                    }
                }
                writeln!(out, "{}", if report.matched { "MATCH" } else { "MISMATCH" })?;
            }
            OutputFormat::Pretty => {
                if report.matched {
                    writeln!(out, "MATCH")?;
                } else {
                    writeln!(out, "MISMATCH ({} entries)", report.diff.entries.len())?;
                    for e in &report.diff.entries {
                        writeln!(out, "  {e}")?;
                    }
                }
            }
        }
        return Ok(if report.matched { EXIT_OK } else { EXIT_FAILED });
    }
    match format {
        OutputFormat::Json => writeln!(out, "{}", to_json(&assembled))?,
        OutputFormat::Csv => {
            writeln!(out, "monomial,degree,coefficient")?;
            writeln!(out, "t0^2 log q,,{}", assembled.log_term())?;
            for (m, s) in assembled.terms() {
                for (d, c) in s.coeffs().iter().enumerate() {
                    writeln!(out, "{m},{d},{c}")?;
                }
            }
        }
        OutputFormat::Pretty => writeln!(out, "{}", assembled.pretty())?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(
    suite: Suite,
    dmax: u64,
    inject_fault: bool,
    format: OutputFormat,
    exec: Exec,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let reports: Vec<SuiteReport> = match run_suite(suite, dmax, inject_fault, exec) {
        Ok(r) => r,
        Err(e) => return Ok(usage(err, e)),
    };
    let all_passed = reports.iter().all(|r| r.passed);
    match format {
        OutputFormat::Json => writeln!(out, "{}", to_json(&reports))?,
        OutputFormat::Csv => {
            writeln!(out, "suite,max_degree,passed,checked")?;
            for r in &reports {
                writeln!(out, "{},{},{},{}", r.suite, r.max_degree, r.passed, r.checked)?;
            }
        }
        OutputFormat::Pretty => {
            let color = color_enabled();
            for r in &reports {
                let tag = match (r.passed, color) {
                    (true, true) => "\x1b[32mPASS\x1b[0m",
                    (false, true) => "\x1b[31mFAIL\x1b[0m",
                    (true, false) => "PASS",
                    (false, false) => "FAIL",
                };
                writeln!(out, "{tag} {} (d <= {}): {}", r.suite, r.max_degree, r.summary)?;
                if let Some(c) = &r.counterexample {
                    writeln!(out, "  counterexample: {}", serde_json::to_string(c).expect("json"))?;
                }
            }
        }
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["pillowcase"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sublattices_csv() {
        let (code, out, _) = run_str(&["sublattices", "--degree", "2", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "h,m,g,d\n1,0,2,2\n2,0,1,2\n2,1,1,2\ncount=3 sigma1=3\n");
    }

    #[test]
    fn sublattice_counts() {
        let (_, out, _) = run_str(&["sublattices", "--degree", "1"]);
        assert_eq!(out.lines().filter(|l| l.starts_with("  (h=")).count(), 1);
        let (_, out, _) = run_str(&["sublattices", "--degree", "8", "--format", "csv"]);
        assert_eq!(out.lines().count(), 1 + 15 + 1);
    }

    #[test]
    fn usage_errors() {
        for args in [
            &["sublattices", "--degree", "0"][..],
            &["sublattices", "--degree", "x"],
            &["sublattices", "--degree", "20", "--degree-cap", "10"],
            &["series", "--which", "g"],
            &["correlators", "--insertions", "1,2,3"],
            &["correlators", "--insertions", "1,2,3,9"],
            &["verify", "--suite", "rh", "--max-degree", "10"],
            &["verify", "--suite", "nope"],
        ] {
            let (code, _, err) = run_str(args);
            assert_eq!(code, 2, "{args:?}");
            assert!(!err.is_empty());
        }
    }

    #[test]
    fn series_outputs() {
        let (_, out, _) = run_str(&["series", "--which", "f", "--max-degree", "6"]);
        assert_eq!(out, "f = -1/24 + q + 3 q^2 + 4 q^3 + 7 q^4 + 6 q^5 + 12 q^6 + O(q^7)\n");
        let (_, out, _) = run_str(&["series", "--which", "f0", "--max-degree", "2", "--format", "csv"]);
        assert_eq!(out, "degree,coefficient\n0,0\n1,1\n2,0\n");
        let (_, out, _) = run_str(&["series", "--which", "f1", "--max-degree", "3", "--format", "json"]);
        assert_eq!(out, "{\"trunc\":3,\"coeffs\":[\"-1/24\",\"0\",\"0\",\"0\"]}\n");
    }

    #[test]
    fn correlator_outputs() {
        let (code, out, _) = run_str(&["correlators", "--insertions", "1,2,3,4", "--max-degree", "5", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "degree,count\n1,1\n2,0\n3,4\n4,0\n5,6\n");
        let (_, out, _) = run_str(&["correlators", "--insertions", "1,2,3,4", "--max-degree", "2", "--format", "json"]);
        let recs: Vec<CorrelatorRecord> = serde_json::from_str(&out).unwrap();
        assert_eq!(recs[0].count, 1);
        assert_eq!(recs[1].degree, 2);
    }

    #[test]
    fn potential_compare() {
        let (code, out, _) = run_str(&["potential", "--max-degree", "20", "--compare-st"]);
        assert_eq!(code, 0);
        assert_eq!(out, "MATCH\n");
    }

    #[test]
    fn verify_exit_codes() {
        let (code, out, _) = run_str(&["verify", "--suite", "lumpsum", "--max-degree", "50"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.starts_with("PASS lumpsum"));
        let (code, out, _) = run_str(&["verify", "--suite", "parity", "--max-degree", "5", "--inject-fault"]);
        assert_eq!(code, 1);
        assert!(out.contains("counterexample: {"));
    }
}
