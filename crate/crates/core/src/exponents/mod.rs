//! Exact exponent arithmetic and the feasibility engine.
//!
//! All conditions are linear in the reciprocals `1/p`, which are kept as
//! exact rationals; nothing in this module touches floating point.

mod cases;
mod ext_exp;
mod feasibility;
pub mod fm;
mod perm;
mod profile;
mod young;

pub use cases::{check_bilinear_cases, check_monotone_chain, freq_case_orders, time_case_orders, BilinearCases};
pub use ext_exp::{conj, q, ExtExp, Q};
pub use feasibility::{
    check_conditions, feasible, feasible_freq, feasible_time, max_p0, p0_range, FeasibilityWitness, Mode, PermSearch,
    SearchOptions, MAX_DEGREE,
};
pub use perm::Perm;
pub use profile::ExponentProfile;
pub use young::{check_young_freq, check_young_freq_perm, check_young_time, check_young_time_perm, Reading};
