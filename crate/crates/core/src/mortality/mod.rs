//! The reduction from Turing machine mortality to FO⁺-definability.
//!
//! A machine with typed states (every transition moves from type `i` to type
//! `i + 1 mod 3`) yields an ordered alphabet `A = A_base ∪ A_amb`. Base words
//! without `#` encode configurations decorated with the transition that led
//! there and the one about to fire; amb letters sit above exactly two base
//! letters and let two successive configurations be written as one word.
//! `L_M` is the monotone closure of the runs `C1#C2#C3#...`. When the machine
//! is not mortal, [`witness_words`] produces `u ∈ L_M` and `v ∉ L_M` that a
//! bounded number of game rounds cannot separate.

mod analysis;
mod machine;
mod reduction;

pub use analysis::{
    anchor_type, check_superposition, local_factor_scan, powerset_accepts, round_budget, run_from, run_target,
    segment_analysis, to_powerset, witness_words, AmbiguousFactor, ForbiddenFactor, SegmentReport,
    SuperpositionReport, WitnessOutcome,
};
pub use machine::{normalize_types, Dir, RawMachine, Transition, TuringMachine};
pub use reduction::{BaseLetter, Config, Reduction};
