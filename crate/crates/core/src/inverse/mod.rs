//! Two-layer inversion: continuation matrix, explicit solution, low-k
//! safeguards and the full reconstruction pipeline.

mod config;
mod cutoff;
mod matrix;
mod rank;
mod reconstruct;

pub use config::{DcPolicy, KCut, ReconstructionConfig};
pub use cutoff::{auto_k_cut, resolve_k_cut, worst_case_gain};
pub use matrix::{continuation_matrix, invert_matrix, ContinuationMatrix, InverseMatrix, TwoLayerSolution, SINGULAR_DET};
pub use rank::{detect_rank_deficiency, log_spaced, placement_matrix, planes_same_side, BinCondition, RankDiagnosis, Verdict, RANK_TOLERANCE};
pub use reconstruct::{reconstruct_two_layer, Reconstruction};
