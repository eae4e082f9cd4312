//! Finite truncations of measures and formal sums on ℝ^d.

pub mod comb;
pub mod mean;
pub mod source;
pub mod window_sums;

pub use comb::{pair_against_test_function, variation, DiracComb, Provenance, MERGE_TOLERANCE};
pub use mean::{mean, mean_uniformity_spread, Averaging, Estimate};
pub use source::{CombSource, FnSource, ModelSetComb, Perturbed};
pub use window_sums::{
    is_formal_sum_measure, translation_bound_profile, translation_bounded, ProfileHint,
    WindowSumProfile, GROWTH_FACTOR_TOL, STABILITY_REL_TOL,
};
