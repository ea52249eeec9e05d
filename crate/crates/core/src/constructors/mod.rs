//! Explicit scrambled-point constructions and the weak-mixing probe.

pub mod aapo;
pub mod expanding;
pub mod merge;
pub mod mixing;
pub mod schedule;

pub use aapo::{
    binary_index_points, build_aapo, check_structure, concatenation_tracer, van_der_corput_points, verify_aapo,
    verify_average_shadowing, PeriodicPointPair, PseudoOrbit,
};
pub use expanding::{
    build_dc_pair_expanding, build_expanding_point, CodingAssignment, CodingMode, ExpandingPoint, NestedFamily,
};
pub use merge::{merge_dc_sequence, MergedSequence, Source};
pub use mixing::{weak_mixing_probe, MixingWitness};
pub use schedule::{checkpoint_schedule, CheckpointSchedule};
