//! Error exponents of classical-quantum channels.
//!
//! Finite-dimensional linear algebra on Hermitian operators, Petz Rényi
//! divergences and mutual informations, prior optimization, exponent bounds
//! with their critical rate, method-of-types helpers, and exact small-blocklength
//! coding with the pretty-good measurement.
//!
//! Logarithms are base 2 throughout. The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod math;

pub mod analysis;
pub mod channel;
pub mod coding;
pub mod config;
pub mod divergence;
pub mod error;
pub mod operator;
pub mod optimize;
pub mod types;

pub use analysis::{
    best_type, constant_composition_mi, BoundValue, ChannelAnalyzer, ExponentCurve, ExponentRow, Reliability,
    ReliabilityKind, RowStatus,
};
pub use channel::{cq_state, CQChannel, CQState, Prior};
pub use coding::{
    average_error, estimate_exponent, generate_codebook, ml_error_classical, pgm_decoder, BlocklengthSummary, Codebook,
    CodebookMode, ErrorReport, Povm,
};
pub use config::{AlphaRanges, AnalysisConfig, Limits};
pub use divergence::{
    conditional_renyi_up, conditional_renyi_up_cq, holevo_information, petz_divergence, renyi_mi_channel_prior,
    renyi_mutual_info_state, sibson_minimizer, Alpha, DivergenceResult, PriorObjective,
};
pub use error::{Error, Result};
pub use operator::{von_neumann_entropy, DensityMatrix, Eigen, HermitianMatrix};
pub use optimize::{maximize_prior, OptimizationReport};
pub use types::{enumerate_sequences, enumerate_types, type_of, type_probability, Sequence, TypeClass};
