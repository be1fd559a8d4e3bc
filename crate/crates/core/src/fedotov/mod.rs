//! Matrices `M_ij = V(K_i[k], K_j[k], C_1, …, C_{n-2k})` of boxes: builders,
//! explicit non-hyperbolic constructions, random search and certificates.

mod certificate;
mod matrix;
mod pipeline;
mod polar;
mod search;

pub use certificate::{
    ensure_valid, verify_certificate, verify_certificate_json, Certificate, CertificateKind, IndexedBody, Trace,
    Verification, CERTIFICATE_VERSION,
};
pub use matrix::{build_matrix, matrix_via_derivatives, shephard_verify, FedotovMatrix, ShephardReport};
pub use pipeline::{
    certificate_from_base, check_construct_bounds, collapse, construct, construct_counterexample_k2, k2_base,
    locate_violation, reduce_to_general_k, K2Base, Reduction,
};
pub use polar::{delta_label, deltas, polarization_sign, polarized_body};
pub use search::{default_grid, random_search, trial_instance, SearchConfig, SearchOutcome, SearchStats};
