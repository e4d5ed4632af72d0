//! Turing's method and chunk certificates.

mod certificate;
mod turing;

pub use certificate::{fnv1a64, stitch, CertStatus, ChunkCertificate, GlobalCertificate, RecordError, VERSION_TAG};
pub use turing::{
    counting_main_term, min_window_gaps, s_integral, turing_certify, turing_lower_bound, turing_upper_bound,
    TuringConstants, TuringVerdict, ValidatedConstants, VerdictStatus,
};
