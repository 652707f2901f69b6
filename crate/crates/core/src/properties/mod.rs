//! Executable checks of the location, multiplicity and counting properties,
//! aggregated into a [`VerificationReport`](crate::report::VerificationReport).

pub mod counting;
pub mod lemmas;
pub mod runner;
pub mod strings;

pub use counting::{check_type2_counts, type2_counts, CountOptions, TypeTwoCounts, TYPE2_CHECKS};
pub use lemmas::{
    check_bookkeeping, check_halfplane, check_negative_semisimple, check_nonreal_region, check_nonsimple_real,
    check_real_when_a_psd, check_symmetry, check_type1_axes, check_type2_not_mirrored, check_zero_multiplicity,
    conjugation_witnesses, expected_zero_multiplicity,
};
pub use runner::{pairing_checks, resolved_band, run_all, run_string, spectrum_checks, RunOptions};
pub use strings::{
    check_single_type2_only, closed_form_potential, continuum_zero, integer_mode_count, string_spectrum_options,
    string_zero_tol, verify_string, StringOptions, StringVerification,
};
