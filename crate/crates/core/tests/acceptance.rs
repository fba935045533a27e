//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or overruns its time budget.

use std::process::Command;
use std::time::{Duration, Instant};

use pillowcase::lattice::{enumerate_sublattices, sigma1};
use pillowcase::oracle::{
    correlator_crosscheck, image_table_check, rh_uniqueness_check, sl2_orbit_count,
};
use pillowcase::orbi::{total_count_series, MarkingPermutation};
use pillowcase::potential::{assemble_potential, compare_potentials, st_reference_potential};
use pillowcase::qseries::{
    divisor_series_even, divisor_series_odd, divisor_series_q4, f0_series, f2_series, f_series,
};
use pillowcase::rational::{int, rat};
use pillowcase::Exec;

/// Coefficients of q^1..q^17 in the published expansion of f.
const F_EXPANSION: [u64; 17] = [1, 3, 4, 7, 6, 12, 8, 15, 13, 18, 12, 28, 14, 24, 24, 31, 18];

fn divisor_sum(n: u64) -> u64 {
    (1..=n).filter(|k| n % k == 0).sum()
}

fn sublattice_count() -> Result<String, String> {
    for d in 1..=200u64 {
        let n = enumerate_sublattices(d).unwrap().len() as u64;
        if n != divisor_sum(d) {
            return Err(format!("d={d}: {n} lattices, sigma1={}", divisor_sum(d)));
        }
    }
    for (i, &want) in F_EXPANSION.iter().enumerate() {
        let d = i as u64 + 1;
        let n = enumerate_sublattices(d).unwrap().len() as u64;
        if n != want {
            return Err(format!("d={d}: {n} lattices, expansion says {want}"));
        }
    }
    Ok("d <= 200, spot values d <= 17".into())
}

fn triple_agreement() -> Result<String, String> {
    for d in 1..=12 {
        let orbits = sl2_orbit_count(d).map_err(|e| e.to_string())?;
        let listed = enumerate_sublattices(d).unwrap().len() as u64;
        let s = sigma1(d).unwrap();
        if orbits != s || listed != s {
            return Err(format!("d={d}: orbits={orbits} sigma1={s} listed={listed}"));
        }
    }
    Ok("d <= 12".into())
}

fn parity_table() -> Result<String, String> {
    let c = image_table_check(100, false, Exec::default());
    let expected: u64 = (1..=100).map(divisor_sum).sum();
    if let Some(bad) = c.counterexample {
        return Err(format!("{bad:?}"));
    }
    if c.lattices_checked != expected {
        return Err(format!("checked {} lattices, expected {expected}", c.lattices_checked));
    }
    if c.case_hits.contains(&0) {
        return Err(format!("unexercised parity case: {:?}", c.case_hits));
    }
    Ok(format!("{} lattices, all 8 cases hit", c.lattices_checked))
}

fn correlator_closed_forms() -> Result<String, String> {
    let c = correlator_crosscheck(100, &MarkingPermutation::ALL, Exec::default());
    match c.counterexample {
        Some(bad) => Err(format!("{bad:?}")),
        None => Ok(format!("{} comparisons", c.comparisons)),
    }
}

fn lump_sum() -> Result<String, String> {
    let total = total_count_series(100);
    let mut expected = f_series(100).coeffs().to_vec();
    expected[0] += rat(1, 24);
    for (d, (a, b)) in total.coeffs().iter().zip(&expected).enumerate() {
        if *a != b * int(6) {
            return Err(format!("q^{d}: {a} vs 6*{b}"));
        }
        if d > 0 && *a != int(6 * divisor_sum(d as u64) as i64) {
            return Err(format!("q^{d}: {a} vs 6 sigma1"));
        }
    }
    Ok("through q^100".into())
}

fn potential_agreement() -> Result<String, String> {
    let a = assemble_potential(100).map_err(|e| e.to_string())?;
    let b = st_reference_potential(100).map_err(|e| e.to_string())?;
    let diff = compare_potentials(&a, &b).map_err(|e| e.to_string())?;
    if !diff.is_empty() {
        return Err(format!("{} entries, first {}", diff.entries.len(), diff.entries[0]));
    }
    if *a.log_term() != rat(1, 2) {
        return Err(format!("log term {}", a.log_term()));
    }
    Ok(format!("{} monomials through q^100", a.terms().count()))
}

fn riemann_hurwitz() -> Result<String, String> {
    let mut total = 0;
    for d in 1..=9 {
        let c = rh_uniqueness_check(d, false, Exec::default()).map_err(|e| e.to_string())?;
        if let Some(bad) = c.counterexample {
            return Err(format!("d={d}: {bad:?}"));
        }
        total += c.solutions;
    }
    Ok(format!("d <= 9, {total} unramified solutions"))
}

fn series_identities() -> Result<String, String> {
    for n in 0..=200 {
        if f0_series(n) != divisor_series_odd(n) {
            return Err(format!("f0 != Dodd at N={n}"));
        }
        if f2_series(n) != divisor_series_even(n).sub(&divisor_series_q4(n)) {
            return Err(format!("f2 != Deven - D(q^4) at N={n}"));
        }
    }
    Ok("N <= 200".into())
}

fn fault_injection() -> Result<String, String> {
    let bin = env!("CARGO_BIN_EXE_pillowcase");
    let cases = [("oracle", "12"), ("parity", "20"), ("rh", "5"), ("lumpsum", "20"), ("closedform", "20")];
    for (suite, d) in cases {
        let clean = Command::new(bin)
            .args(["verify", "--suite", suite, "--max-degree", d, "--format", "json"])
            .output()
            .map_err(|e| e.to_string())?;
        if clean.status.code() != Some(0) {
            return Err(format!("{suite} fails without a fault"));
        }
        let out = Command::new(bin)
            .args(["verify", "--suite", suite, "--max-degree", d, "--inject-fault", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())?;
        if out.status.code() != Some(1) {
            return Err(format!("{suite}: exit {:?} under fault", out.status.code()));
        }
        let reports: serde_json::Value =
            serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        if reports[0]["counterexample"].is_null() {
            return Err(format!("{suite}: no counterexample reported"));
        }
    }
    Ok("5 suites exit 1 with a counterexample".into())
}

type Criterion = (&'static str, u64, fn() -> Result<String, String>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("sublattice count", 1, sublattice_count),
        ("triple agreement", 60, triple_agreement),
        ("parity table", 10, parity_table),
        ("correlator closed forms", 30, correlator_closed_forms),
        ("lump sum", 5, lump_sum),
        ("potential agreement", 10, potential_agreement),
        ("Riemann-Hurwitz uniqueness", 60, riemann_hurwitz),
        ("series identities", 1, series_identities),
        ("fault injection", 120, fault_injection),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (tag, detail) = match (&result, over) {
            (Ok(msg), false) => ("PASS", msg.clone()),
            (Ok(msg), true) => ("FAIL", format!("{msg}; over the {budget} s budget")),
            (Err(msg), _) => ("FAIL", msg.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!(
            "{tag} criterion {} {name}: {detail} ({:.3} s, budget {budget} s)",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
