//! Deciding local undeterminedness and producing Schmidt projector
//! certificates.

mod analysis;
mod certificate;
mod commutant;
mod partition;

pub use analysis::{
    analyze, construct_projectors, qubit_ghz_check, s_local_analyze, two_block_check, AnalysisOptions,
    AnalysisReport, DecisionPath, GhzForm, Verdict,
};
pub use certificate::{verify_schmidt_projectors, SchmidtProjectorSet, Verification};
pub use commutant::{commutant_partition, correlation_operators, COMMUTANT_DRAWS};
pub use partition::{basis_connectivity_partition, connectivity_certificate, generic_partition, DEFAULT_AMPLITUDE_CUTOFF};
