//! Truncated eigenfunction expansions for `ḡ = Af + n` with `‖n‖ ≤ ε` and
//! `‖Bf‖ ≤ E`, where `B` is diagonal in the eigenbasis of `A`.
//!
//! Two cutoffs are provided: [`truncation_k1`] keeps the modes with
//! `λ_k ≥ ε/E`, and [`truncation_k2`] those with `λ_k ≥ (ε/E) β_k`.

mod constraint;
mod noise;
mod problem;
mod truncation;
mod verify;

pub use constraint::ConstraintSequence;
pub use noise::{make_noise, sub_seed, NoiseMode};
pub use problem::{
    feasibility_check, synthesize_problem, Diagnostics, FSpec, Feasibility, ProblemInstance, ProblemSpec,
};
pub use truncation::{
    cutoff, invert_projection, truncated_solution, truncation_k1, truncation_k2, Reconstruction, Rule,
};
pub use verify::{
    error_norm, gamma_spectrum, verify_lemma6, verify_lemma7, weak_pairing, GammaSpectrum, Inequality, LemmaReport,
    WeakPairing, LEMMA_SLACK,
};
