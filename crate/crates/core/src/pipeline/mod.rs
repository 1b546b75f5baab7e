//! The searches and sweeps of the computational proof, the verification of
//! the two infinite families, and the records and reports they produce.

mod enumerate;
mod families;
mod records;
mod report;
mod sieve;
mod sweeps;

pub use enumerate::{enumerate_small_x1, orbit_signs, search_index, values_by_index, FibIndex};
pub use families::{check_gamma_inequality, family_ii_params, gamma_balls, verify_family_i, verify_family_ii};
pub use records::{Provenance, SolutionRecord};
pub use report::{emit_reports, write_atomic, CellRecord, CellStatus, SweepReport};
pub use sieve::{default_index_set, mod_sieve, Survivor};
pub use sweeps::{
    delta_signs, dp_constants, log_delta_pow2, policy_for, sweep_chi_quotients, sweep_delta_quotients, sweep_dp,
    DpSweep, Memo,
};
