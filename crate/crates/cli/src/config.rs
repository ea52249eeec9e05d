use serde::Deserialize;

use ndschaos::distchaos::Tolerances;
use ndschaos::gallery::{load_gallery, AnySystem, GallerySystem};
use ndschaos::symbolic::{SymbolSequence, SymbolSpec};
use ndschaos::{Error, IndexSequence, Result, SystemSpec};

/// `{"gallery": "tent"}` or an inline system definition.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SystemRef {
    Gallery { gallery: String },
    Inline(SystemSpec),
}

pub struct ResolvedSystem {
    pub system: AnySystem,
    pub gallery: Option<GallerySystem>,
}

impl SystemRef {
    pub fn resolve(&self) -> Result<ResolvedSystem> {
        match self {
            SystemRef::Gallery { gallery } => {
                let g = load_gallery(gallery)?;
                Ok(ResolvedSystem {
                    system: g.system.clone(),
                    gallery: Some(g),
                })
            }
            SystemRef::Inline(spec) => Ok(ResolvedSystem {
                system: AnySystem::from_spec(spec).map_err(|e| Error::Config(e.to_string()))?,
                gallery: None,
            }),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PointValue {
    Real(f64),
    Symbol(SymbolSpec),
}

impl PointValue {
    pub fn real(&self) -> Result<f64> {
        match self {
            PointValue::Real(x) => Ok(*x),
            PointValue::Symbol(_) => Err(Error::Config("expected a real point".into())),
        }
    }

    pub fn symbol(&self) -> Result<SymbolSequence> {
        match self {
            PointValue::Symbol(s) => s.build().map_err(|e| Error::Config(e.to_string())),
            PointValue::Real(_) => Err(Error::Config("expected a symbol sequence".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesConfig {
    pub tau_hi: Option<f64>,
    pub tau_lo: Option<f64>,
    /// Defaults to the smallest default grid fraction of the diameter.
    pub tau_prox: Option<f64>,
}

impl TolerancesConfig {
    /// Default `tau_prox` is `0.01 * diameter`, raised to the smallest grid
    /// epsilon so that the defaults always validate.
    pub fn resolve(&self, diameter: f64, eps_grid: &[f64]) -> Tolerances {
        let eps_min = eps_grid.iter().copied().fold(f64::INFINITY, f64::min);
        Tolerances::new(
            self.tau_hi.unwrap_or(0.05),
            self.tau_lo.unwrap_or(0.05),
            self.tau_prox.unwrap_or((0.01 * diameter).max(eps_min)),
        )
    }
}

/// Orbit times: the first `horizon` terms of `indices` (all times
/// `0, 1, 2, ...` when absent).
pub fn index_terms(indices: &Option<IndexSequence>, horizon: usize) -> Result<Vec<u64>> {
    match indices {
        None => Ok((0..horizon as u64).collect()),
        Some(seq) => seq.take(horizon),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitConfig {
    pub system: SystemRef,
    pub x0: PointValue,
    /// Number of orbit times reported.
    pub horizon: usize,
    pub indices: Option<IndexSequence>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairStatsConfig {
    pub system: SystemRef,
    pub x: PointValue,
    pub y: PointValue,
    pub horizon: usize,
    pub indices: Option<IndexSequence>,
    pub window: Option<usize>,
    pub eps_grid: Option<Vec<f64>>,
    pub delta: f64,
    #[serde(default)]
    pub tolerances: TolerancesConfig,
    /// Also run the hitting-set form of the verdict.
    #[serde(default)]
    pub dual: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum SampleSpec {
    Points(Vec<PointValue>),
    Random { random: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub system: SystemRef,
    pub sample: SampleSpec,
    pub horizon: usize,
    pub indices: Option<IndexSequence>,
    pub window: Option<usize>,
    pub eps_grid: Option<Vec<f64>>,
    pub delta: f64,
    #[serde(default)]
    pub tolerances: TolerancesConfig,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DensityConfig {
    /// Upper and lower density of `P` along `Q`.
    Relative {
        p: IndexSequence,
        q: IndexSequence,
        horizon: usize,
        window: Option<usize>,
    },
    Witness {
        families: Vec<IndexSequence>,
        targets: Option<Vec<u64>>,
        cap: Option<usize>,
    },
    Cesaro {
        /// Explicit values, or `"squares"` for 1 on squares and
        /// `1/(i+1)` elsewhere.
        values: CesaroValues,
        horizon: usize,
        bound: f64,
        window: Option<usize>,
        tolerance: Option<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CesaroValues {
    Explicit(Vec<f64>),
    Named(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AapoConfig {
    pub system: SystemRef,
    pub code: SymbolSpec,
    /// Depth of the checkpoint schedule; the horizon must lie before
    /// `m_depth`.
    pub depth: usize,
    pub horizon: u64,
    pub base_points: Option<usize>,
    pub checkpoints: Option<Vec<u64>>,
    #[serde(default)]
    pub tracer: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpandingConfig {
    pub system: SystemRef,
    pub alpha: SymbolSpec,
    pub beta: SymbolSpec,
    pub depth: u64,
    pub eps_grid: Option<Vec<f64>>,
    pub checkpoints: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergeConfig {
    pub p: IndexSequence,
    pub q: IndexSequence,
    pub k_max: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixingConfig {
    pub system: SystemRef,
    pub u1: Option<[f64; 2]>,
    pub v1: Option<[f64; 2]>,
    pub u2: Option<[f64; 2]>,
    pub v2: Option<[f64; 2]>,
    pub horizon: Option<u64>,
    pub sample_density: Option<usize>,
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
}
