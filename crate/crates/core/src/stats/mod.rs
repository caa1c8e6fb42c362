//! Sieves, analytic constants and empirical scans over split-free conductors.

pub mod constants;
pub mod np;
pub mod scan;
pub mod sieve;
pub mod tk;
pub mod units;

pub use constants::{c_alpha, constant_c2, constant_ck, li, Estimate};
pub use np::{np_diagnostic, NpRecord};
pub use scan::{scan, write_csv, ScanCaps, ScanRecord};
pub use sieve::{sieve_split_free, SplitFreeSieve};
pub use tk::{tk_report, TkFunction, TkReport};
pub use units::{hooley_scan, small_order_count, HooleyRecord};

pub use crate::arith::{rad, smooth_part};
