//! Exact enumeration of holomorphic orbi-spheres in the pillowcase
//! `P^1_{2,2,2,2}` and the genus-0 Gromov-Witten potential built from them.
//!
//! - [`lattice`]: index-`d` sublattices of `Z + Z*i` in Hermite normal form.
//! - [`qseries`]: truncated power series with exact rational coefficients.
//! - [`orbi`]: orbifold points, marking permutations and correlator counts.
//! - [`potential`]: assembly of the potential and comparison with the closed form.
//! - [`oracle`]: brute-force checkers on code paths separate from the above.
//! - [`cli`]: the `pillowcase` command-line front end.

pub mod exec;
pub mod lattice;
pub mod orbi;
pub mod qseries;
pub mod rational;

pub use exec::Exec;
pub mod oracle;
pub mod potential;
pub mod cli;
pub mod verify;
