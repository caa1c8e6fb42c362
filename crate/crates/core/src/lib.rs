//! Factorization invariants of orders `O_f = Z + fO_K` in a fixed quadratic
//! field `K`, together with a desk-scale statistical harness over split-free
//! conductors.
//!
//! The crate is organized bottom-up:
//!
//! - [`arith`]: integer utilities (Kronecker symbol, factoring, sieves)
//! - [`quadfield`]: the field `K`, its character, unit and class number
//! - [`ringarith`]: `O_K/fO_K`, `PreCl(O_f)`, `PrinCl(O_f)`, `ψ`, `L`, `L'`, `ℓ`
//! - [`abelian`]: invariant factors and Davenport constants
//! - [`classgroups`]: binary quadratic forms and `Cl(O_f)` for imaginary `K`
//! - [`elasticity`]: elasticity bounds and irreducible search
//! - [`stats`]: sieves, constants and scans
//! - [`verify`]: the acceptance checks, runnable from tests and the CLI
//! - [`cli`]: argument parsing and output for the `quadorder` binary

pub mod abelian;
pub mod arith;
pub mod classgroups;
pub mod cli;
pub mod elasticity;
pub mod error;
pub mod quadfield;
pub mod report;
pub mod ringarith;
pub mod stats;
pub mod verify;

pub use abelian::AbelianGroupStructure;
pub use error::{Error, Result};
pub use quadfield::QuadraticField;
pub use ringarith::{OrderInvariants, ResidueElement};
