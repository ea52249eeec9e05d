//! Distributional chaos along orbit-time sequences: pair profiles, the
//! estimators `F*` and `F`, three-valued verdicts and diagonal hitting sets.

mod estimate;
mod hitting;
mod profile;
mod scan;
mod verdict;

pub use estimate::{estimate_f, estimate_f_at, fraction_at, DistributionalEstimate};
pub use hitting::{
    dc_verdict_dual, direct_upper_at_double, hitting_set, DiagonalNeighborhood, DualVerdict, HittingSet,
};
pub use profile::{pair_profile, PairProfile};
pub use scan::{scan_pairs, ScanOptions, ScanRow};
pub use verdict::{
    classify_pair, consistency_violations, default_eps_grid, ClassifyOptions, Flag, PairVerdict, Tolerances,
    DEFAULT_EPS_FRACTIONS,
};
