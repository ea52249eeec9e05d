//! Non-autonomous discrete dynamical systems: orbits, distributional-chaos
//! estimators, index-sequence densities, the symbol space and explicit
//! scrambled-point constructions.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructors;
pub mod distchaos;
pub mod error;
pub mod gallery;
pub mod interval;
pub mod orbit;
pub mod sequence;
pub mod space;
pub mod symbolic;
pub mod system;

pub use constructors::{
    build_aapo, build_dc_pair_expanding, build_expanding_point, checkpoint_schedule, merge_dc_sequence,
    weak_mixing_probe, CheckpointSchedule, NestedFamily, PeriodicPointPair, PseudoOrbit,
};
pub use distchaos::{classify_pair, estimate_f, pair_profile, Flag, PairProfile, PairVerdict, Tolerances};
pub use error::{Error, Result};
pub use gallery::{load_gallery, AnyPoint, AnySystem, GallerySystem};
pub use orbit::{compose_orbit, orbit_at_indices, Orbit, OrbitCursor};
pub use sequence::{relative_density, DensityEstimate, IndexSequence};
pub use space::{MetricSpace, Product, RealInterval};
pub use symbolic::{rho, FullShift, SymbolSequence, SymbolSpace};
pub use system::{MapFamily, RealSystem, SystemSpec};

/// Decimal with 17 significant digits; round-trips every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
