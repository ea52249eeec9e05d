//! Bundled systems with known structure. Every claim in the manifest is
//! re-verified when an entry is loaded; a failed claim is a
//! [`Error::CorruptGallery`].

use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Deserialize;

use crate::constructors::expanding::NestedFamily;
use crate::constructors::mixing::weak_mixing_probe;
use crate::constructors::PeriodicPointPair;
use crate::error::{Error, Result};
use crate::interval::{pieces_are_continuous, RationalInterval};
use crate::space::MetricSpace;
use crate::symbolic::{rho, FullShift, SymbolSequence, SymbolSpec};
use crate::system::{ExactPiece, MapFamily, PiecewiseLinearFamily, RealSystem, SystemSpec};

pub const GALLERY_JSON: &str = include_str!("gallery.json");

const MAX_EXACT_BITS: u64 = 4096;

pub const GALLERY_IDS: [&str; 6] = [
    "logistic-autonomous",
    "logistic-periodic-r",
    "tent",
    "doubling",
    "full-shift",
    "expanding-family",
];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalleryManifest {
    pub systems: Vec<GalleryEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalleryEntry {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub system: SystemSpec,
    pub horizon: u64,
    #[serde(default)]
    pub periodic_points: Vec<PeriodicClaim>,
    #[serde(default)]
    pub separated_pairs: Vec<PairClaim>,
    pub nested: Option<NestedClaim>,
    pub mixing: Option<MixingClaim>,
}

/// A rational (`"3/4"`) on real systems, a [`SymbolSpec`] on the shift.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Rational(String),
    Symbol(SymbolSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicClaim {
    pub point: PointSpec,
    pub period: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairClaim {
    pub x: PointSpec,
    pub y: PointSpec,
    pub delta: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestedLevel {
    pub start: u64,
    pub a: [String; 2],
    pub b: [String; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestedClaim {
    #[serde(default)]
    pub levels: Vec<NestedLevel>,
    /// Take the sets carried by the expanding family itself.
    #[serde(default)]
    pub generated: bool,
    /// Levels at which the expanding condition is checked; defaults to the
    /// family's critical levels up to `check_up_to`.
    pub check_levels: Option<Vec<u64>>,
    pub check_up_to: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixingClaim {
    pub u1: [f64; 2],
    pub v1: [f64; 2],
    pub u2: [f64; 2],
    pub v2: [f64; 2],
    pub horizon: u64,
    pub sample_density: usize,
}

#[derive(Debug, Clone)]
pub enum AnySystem {
    Real(RealSystem),
    Shift(FullShift),
}

impl AnySystem {
    pub fn from_spec(spec: &SystemSpec) -> Result<Self> {
        match spec {
            SystemSpec::FullShift {} => Ok(AnySystem::Shift(FullShift::default())),
            other => Ok(AnySystem::Real(RealSystem::from_spec(other)?)),
        }
    }

    pub fn description(&self) -> String {
        match self {
            AnySystem::Real(s) => s.description(),
            AnySystem::Shift(s) => s.description(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            AnySystem::Real(s) => s.space().diameter(),
            AnySystem::Shift(s) => s.space().diameter(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyPoint {
    Real(f64),
    Symbol(SymbolSequence),
}

impl AnyPoint {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            AnyPoint::Real(x) => Some(*x),
            AnyPoint::Symbol(_) => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&SymbolSequence> {
        match self {
            AnyPoint::Symbol(s) => Some(s),
            AnyPoint::Real(_) => None,
        }
    }
}

/// A loaded, verified entry.
#[derive(Debug, Clone)]
pub struct GallerySystem {
    pub id: String,
    pub description: String,
    pub system: AnySystem,
    /// `(point, period)`.
    pub periodic_points: Vec<(AnyPoint, u64)>,
    /// `(x, y, δ)` with orbits more than `2δ` apart.
    pub separated_pairs: Vec<(AnyPoint, AnyPoint, f64)>,
    pub nested: Option<NestedFamily>,
    pub mixing: Option<MixingClaim>,
    /// Horizon up to which periodicity and separation were checked.
    pub horizon: u64,
}

impl GallerySystem {
    pub fn real(&self) -> Option<&RealSystem> {
        match &self.system {
            AnySystem::Real(s) => Some(s),
            AnySystem::Shift(_) => None,
        }
    }

    /// The first separated pair as a [`PeriodicPointPair`] on a real
    /// system.
    pub fn real_pair(&self) -> Result<PeriodicPointPair<f64>> {
        if self.real().is_none() {
            return Err(Error::Parameter(format!("{} is not a real system", self.id)));
        }
        let (x, y, d) = self
            .separated_pairs
            .first()
            .ok_or_else(|| Error::Parameter(format!("{} has no separated pair", self.id)))?;
        let (x, y) = (x.as_real().expect("real"), y.as_real().expect("real"));
        let period = |p: f64| {
            self.periodic_points
                .iter()
                .find(|(q, _)| q.as_real() == Some(p))
                .map(|(_, k)| *k)
                .unwrap_or(1)
        };
        // periodicity and separation were verified exactly at load
        Ok(PeriodicPointPair {
            x,
            y,
            periods: (period(x), period(y)),
            separation: *d,
            horizon: self.horizon,
        })
    }

    pub fn shift_pair(&self) -> Result<PeriodicPointPair<SymbolSequence>> {
        let AnySystem::Shift(sys) = &self.system else {
            return Err(Error::Parameter(format!("{} is not the full shift", self.id)));
        };
        let (x, y, d) = self
            .separated_pairs
            .first()
            .ok_or_else(|| Error::Parameter(format!("{} has no separated pair", self.id)))?;
        let (x, y) = (x.as_symbol().expect("symbol").clone(), y.as_symbol().expect("symbol").clone());
        PeriodicPointPair::verify(sys, x, y, (1, 1), *d, self.horizon, 0.0)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|e| Error::Config(format!("bad rational `{s}`: {e}")))
}

fn exact_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Config(format!("non-finite value {x}")))
}

fn eval_pieces(pieces: &[ExactPiece], x: &BigRational) -> Option<BigRational> {
    let p = pieces.iter().find(|p| p.x0 <= *x && *x <= p.x1)?;
    Some(&p.y0 + (x - &p.x0) * (&p.y1 - &p.y0) / (&p.x1 - &p.x0))
}

/// `f_step(x)` in exact arithmetic, with rates and breakpoints taken as
/// the exact values of their `f64` representations.
pub fn exact_apply(system: &RealSystem, step: u64, x: &BigRational) -> Result<BigRational> {
    match system {
        RealSystem::Logistic(l) => {
            let r = exact_f64(l.rate(step))?;
            Ok(r * x * (BigRational::one() - x))
        }
        other => {
            let pieces = other.exact_pieces(step)?;
            eval_pieces(&pieces, x).ok_or_else(|| Error::DomainViolation {
                point: x.to_string(),
                step,
            })
        }
    }
}

fn corrupt(id: &str, what: String) -> Error {
    Error::CorruptGallery(format!("{id}: {what}"))
}

fn real_point(id: &str, p: &PointSpec) -> Result<BigRational> {
    match p {
        PointSpec::Rational(s) => parse_rational(s),
        PointSpec::Symbol(_) => Err(corrupt(id, "symbolic point on a real system".into())),
    }
}

fn symbol_point(id: &str, p: &PointSpec) -> Result<SymbolSequence> {
    match p {
        PointSpec::Symbol(s) => s.build(),
        PointSpec::Rational(_) => Err(corrupt(id, "real point on the full shift".into())),
    }
}

fn rational_interval(pair: &[String; 2]) -> Result<RationalInterval> {
    RationalInterval::new(parse_rational(&pair[0])?, parse_rational(&pair[1])?)
}

fn verify_real(entry: &GalleryEntry, sys: &RealSystem) -> Result<GallerySystem> {
    let id = &entry.id;
    let h = entry.horizon;
    if !matches!(sys, RealSystem::Logistic(_)) {
        for step in 0..h.min(64) {
            if !pieces_are_continuous(&sys.exact_pieces(step)?) {
                return Err(corrupt(id, format!("f_{step} is not continuous")));
            }
        }
    }
    // claimed points are periodic, so their exact orbits stay small
    let orbit = |x: &BigRational, period: Option<u64>| -> Result<Vec<BigRational>> {
        let mut out = vec![x.clone()];
        for step in 0..h {
            let next = exact_apply(sys, step, out.last().expect("nonempty"))?;
            if next.numer().bits() + next.denom().bits() > MAX_EXACT_BITS {
                return Err(corrupt(id, format!("exact orbit of {x} outgrows {MAX_EXACT_BITS} bits")));
            }
            if period.is_some_and(|p| (step + 1) % p == 0) && next != *x {
                return Err(corrupt(id, format!("{x} does not return at step {}", step + 1)));
            }
            out.push(next);
        }
        Ok(out)
    };

    let mut periodic = Vec::new();
    for c in &entry.periodic_points {
        let x = real_point(id, &c.point)?;
        if c.period == 0 {
            return Err(corrupt(id, "period 0".into()));
        }
        orbit(&x, Some(c.period))?;
        periodic.push((AnyPoint::Real(x.to_f64().unwrap_or(f64::NAN)), c.period));
    }

    let mut pairs = Vec::new();
    for c in &entry.separated_pairs {
        let x = real_point(id, &c.x)?;
        let y = real_point(id, &c.y)?;
        let delta = parse_rational(&c.delta)?;
        if delta <= BigRational::zero() {
            return Err(corrupt(id, "separation must be positive".into()));
        }
        let two_delta = &delta + &delta;
        let (ox, oy) = (orbit(&x, None)?, orbit(&y, None)?);
        for (n, (a, b)) in ox.iter().zip(&oy).enumerate() {
            let d = if a > b { a - b } else { b - a };
            if d <= two_delta {
                return Err(corrupt(id, format!("orbits of {x} and {y} come within 2 delta at n = {n}")));
            }
        }
        pairs.push((
            AnyPoint::Real(x.to_f64().unwrap_or(f64::NAN)),
            AnyPoint::Real(y.to_f64().unwrap_or(f64::NAN)),
            delta.to_f64().unwrap_or(f64::NAN),
        ));
    }

    let nested = match &entry.nested {
        None => None,
        Some(claim) => Some(verify_nested(id, claim, sys)?),
    };

    if let Some(m) = &entry.mixing {
        let opens = (((m.u1[0], m.u1[1]), (m.v1[0], m.v1[1])), ((m.u2[0], m.u2[1]), (m.v2[0], m.v2[1])));
        if weak_mixing_probe(sys, opens, m.horizon, m.sample_density)?.is_none() {
            return Err(corrupt(id, format!("no mixing witness up to {}", m.horizon)));
        }
    }

    Ok(GallerySystem {
        id: id.clone(),
        description: entry.description.clone(),
        system: AnySystem::Real(sys.clone()),
        periodic_points: periodic,
        separated_pairs: pairs,
        nested,
        mixing: entry.mixing.clone(),
        horizon: h,
    })
}

fn verify_nested(id: &str, claim: &NestedClaim, sys: &RealSystem) -> Result<NestedFamily> {
    let family = if claim.generated {
        match sys {
            RealSystem::Expanding(e) => NestedFamily::for_expanding(e),
            _ => return Err(corrupt(id, "only the expanding family generates its sets".into())),
        }
    } else {
        let levels = claim
            .levels
            .iter()
            .map(|l| Ok((l.start, rational_interval(&l.a)?, rational_interval(&l.b)?)))
            .collect::<Result<Vec<_>>>()?;
        NestedFamily::new(levels)?
    };
    let levels = match (&claim.check_levels, claim.check_up_to) {
        (Some(l), _) => l.clone(),
        (None, Some(up)) => family.critical_levels(up),
        (None, None) => family.critical_levels(family.blocks().last().map_or(1, |b| b.start)),
    };
    family.verify_expanding(sys, &levels).map_err(|e| corrupt(id, e.to_string()))?;
    if !family.diameters_nonincreasing() {
        return Err(corrupt(id, "nested diameters grow".into()));
    }
    Ok(family)
}

fn verify_shift(entry: &GalleryEntry) -> Result<GallerySystem> {
    let id = &entry.id;
    let sys = FullShift::default();
    let depth = sys.space().depth;
    let h = entry.horizon;
    let mut periodic = Vec::new();
    for c in &entry.periodic_points {
        let x = symbol_point(id, &c.point)?;
        if c.period == 0 {
            return Err(corrupt(id, "period 0".into()));
        }
        for k in (c.period..=h).step_by(c.period as usize) {
            let r = rho(&x.shift_by(k as usize), &x, depth);
            if !(r.exact && r.value == 0.0) {
                return Err(corrupt(id, format!("{x:?} does not return at step {k}")));
            }
        }
        periodic.push((AnyPoint::Symbol(x), c.period));
    }
    let mut pairs = Vec::new();
    for c in &entry.separated_pairs {
        let x = symbol_point(id, &c.x)?;
        let y = symbol_point(id, &c.y)?;
        let delta = parse_rational(&c.delta)?.to_f64().unwrap_or(f64::NAN);
        for n in 0..=h as usize {
            let r = rho(&x.shift_by(n), &y.shift_by(n), depth);
            if !(r.exact && r.value > 2.0 * delta) {
                return Err(corrupt(id, format!("rho at n = {n} is {} <= 2 delta", r.value)));
            }
        }
        pairs.push((AnyPoint::Symbol(x), AnyPoint::Symbol(y), delta));
    }
    if entry.nested.is_some() || entry.mixing.is_some() {
        return Err(corrupt(id, "nested and mixing claims need a real system".into()));
    }
    Ok(GallerySystem {
        id: id.clone(),
        description: entry.description.clone(),
        system: AnySystem::Shift(sys),
        periodic_points: periodic,
        separated_pairs: pairs,
        nested: None,
        mixing: None,
        horizon: h,
    })
}

/// Verifies one manifest entry.
pub fn verify_entry(entry: &GalleryEntry) -> Result<GallerySystem> {
    match AnySystem::from_spec(&entry.system)? {
        AnySystem::Real(sys) => verify_real(entry, &sys),
        AnySystem::Shift(_) => verify_shift(entry),
    }
}

/// Loads `id` from a manifest in the bundled schema.
pub fn load_from_manifest(manifest: &str, id: &str) -> Result<GallerySystem> {
    let m: GalleryManifest = serde_json::from_str(manifest)?;
    let entry = m
        .systems
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownGallery(id.to_string()))?;
    verify_entry(entry)
}

pub fn load_gallery(id: &str) -> Result<GallerySystem> {
    load_from_manifest(GALLERY_JSON, id)
}
