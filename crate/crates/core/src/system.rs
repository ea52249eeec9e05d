//! Map families `f_0, f_1, ...` and their JSON definitions.
//!
//! A [`MapFamily`] is a pure rule `(n, x) -> f_n(x)` over a [`MetricSpace`].
//! Real-interval systems are collected in [`RealSystem`], which is what the
//! JSON config schema deserializes into.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::constructors::schedule::full_checkpoint_schedule;
use crate::error::{Error, Result};
use crate::space::{MetricSpace, RealInterval};

pub type PointOf<S> = <<S as MapFamily>::Space as MetricSpace>::Point;

pub trait MapFamily: Send + Sync {
    type Space: MetricSpace;

    fn space(&self) -> &Self::Space;

    /// `f_step(x)`. Must be a pure function of its arguments.
    fn apply(&self, step: u64, x: &PointOf<Self>) -> PointOf<Self>;

    fn description(&self) -> String;
}

/// One affine branch `[x0, x1] -> [y0, y1]` of a piecewise-linear map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPiece {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl LinearPiece {
    pub fn eval(&self, x: f64) -> f64 {
        if x == self.x0 {
            return self.y0;
        }
        if x == self.x1 {
            return self.y1;
        }
        self.y0 + (x - self.x0) * ((self.y1 - self.y0) / (self.x1 - self.x0))
    }
}

/// The same branch with exact rational breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPiece {
    pub x0: BigRational,
    pub x1: BigRational,
    pub y0: BigRational,
    pub y1: BigRational,
}

/// Families whose every `f_n` is continuous and piecewise linear, so
/// interval preimages and images can be computed branch by branch.
pub trait PiecewiseLinearFamily: MapFamily<Space = RealInterval> {
    fn pieces_into(&self, step: u64, out: &mut Vec<LinearPiece>) -> Result<()>;

    fn exact_pieces(&self, step: u64) -> Result<Vec<ExactPiece>>;
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite breakpoint")
}

fn pieces_from_breakpoints(bp: &[(f64, f64)], out: &mut Vec<LinearPiece>) {
    out.clear();
    out.extend(bp.windows(2).map(|w| LinearPiece {
        x0: w[0].0,
        x1: w[1].0,
        y0: w[0].1,
        y1: w[1].1,
    }));
}

fn eval_breakpoints(bp: &[(f64, f64)], x: f64) -> f64 {
    // first breakpoint with bp.x >= x
    let idx = bp.partition_point(|p| p.0 < x);
    if idx == 0 {
        return bp[0].1;
    }
    if idx == bp.len() {
        return bp[bp.len() - 1].1;
    }
    LinearPiece {
        x0: bp[idx - 1].0,
        x1: bp[idx].0,
        y0: bp[idx - 1].1,
        y1: bp[idx].1,
    }
    .eval(x)
}

/// `x -> r_n x (1 - x)` on `[0, 1]`, with `r_n` cycling through `rates`.
#[derive(Debug, Clone, PartialEq)]
pub struct Logistic {
    rates: Vec<f64>,
    domain: RealInterval,
}

impl Logistic {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::Parameter("logistic family needs at least one rate".into()));
        }
        if let Some(r) = rates.iter().find(|r| !(r.is_finite() && **r >= 0.0 && **r <= 4.0)) {
            return Err(Error::Parameter(format!(
                "logistic rate {r} does not keep [0, 1] invariant"
            )));
        }
        Ok(Logistic {
            rates,
            domain: RealInterval::unit(),
        })
    }

    pub fn autonomous(r: f64) -> Result<Self> {
        Self::new(vec![r])
    }

    pub fn rate(&self, step: u64) -> f64 {
        self.rates[(step % self.rates.len() as u64) as usize]
    }
}

impl MapFamily for Logistic {
    type Space = RealInterval;

    fn space(&self) -> &RealInterval {
        &self.domain
    }

    fn apply(&self, step: u64, x: &f64) -> f64 {
        self.rate(step) * x * (1.0 - x)
    }

    fn description(&self) -> String {
        format!("logistic r={:?}", self.rates)
    }
}

/// `x -> s * min(x, 1 - x)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tent {
    slope: f64,
    breakpoints: [(f64, f64); 3],
    domain: RealInterval,
}

impl Tent {
    pub fn new(slope: f64) -> Result<Self> {
        if !(slope.is_finite() && slope > 0.0 && slope <= 2.0) {
            return Err(Error::Parameter(format!(
                "tent slope must lie in (0, 2], got {slope}"
            )));
        }
        Ok(Tent {
            slope,
            breakpoints: [(0.0, 0.0), (0.5, slope / 2.0), (1.0, 0.0)],
            domain: RealInterval::unit(),
        })
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }
}

impl MapFamily for Tent {
    type Space = RealInterval;

    fn space(&self) -> &RealInterval {
        &self.domain
    }

    fn apply(&self, _step: u64, x: &f64) -> f64 {
        self.slope * x.min(1.0 - x)
    }

    fn description(&self) -> String {
        format!("tent slope={}", self.slope)
    }
}

impl PiecewiseLinearFamily for Tent {
    fn pieces_into(&self, _step: u64, out: &mut Vec<LinearPiece>) -> Result<()> {
        pieces_from_breakpoints(&self.breakpoints, out);
        Ok(())
    }

    fn exact_pieces(&self, _step: u64) -> Result<Vec<ExactPiece>> {
        let s = exact(self.slope);
        let half = BigRational::new(1.into(), 2.into());
        Ok(vec![
            ExactPiece {
                x0: BigRational::zero(),
                x1: half.clone(),
                y0: BigRational::zero(),
                y1: &s * &half,
            },
            ExactPiece {
                x0: half.clone(),
                x1: BigRational::one(),
                y0: &s * &half,
                y1: BigRational::zero(),
            },
        ])
    }
}

/// Autonomous continuous piecewise-linear interpolant of a breakpoint list.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<(f64, f64)>,
    domain: RealInterval,
}

impl PiecewiseLinear {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Parameter("piecewise-linear map needs at least two breakpoints".into()));
        }
        if breakpoints.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Parameter("breakpoints must be finite".into()));
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Parameter("breakpoint abscissae must be strictly increasing".into()));
        }
        let domain = RealInterval::new(breakpoints[0].0, breakpoints[breakpoints.len() - 1].0)?;
        if let Some((_, y)) = breakpoints.iter().find(|(_, y)| !domain.contains(y)) {
            return Err(Error::Parameter(format!(
                "breakpoint value {y} leaves the domain [{}, {}]",
                domain.lo(),
                domain.hi()
            )));
        }
        Ok(PiecewiseLinear { breakpoints, domain })
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }
}

impl MapFamily for PiecewiseLinear {
    type Space = RealInterval;

    fn space(&self) -> &RealInterval {
        &self.domain
    }

    fn apply(&self, _step: u64, x: &f64) -> f64 {
        eval_breakpoints(&self.breakpoints, *x)
    }

    fn description(&self) -> String {
        format!("piecewise-linear {} breakpoints", self.breakpoints.len())
    }
}

impl PiecewiseLinearFamily for PiecewiseLinear {
    fn pieces_into(&self, _step: u64, out: &mut Vec<LinearPiece>) -> Result<()> {
        pieces_from_breakpoints(&self.breakpoints, out);
        Ok(())
    }

    fn exact_pieces(&self, _step: u64) -> Result<Vec<ExactPiece>> {
        Ok(self
            .breakpoints
            .windows(2)
            .map(|w| ExactPiece {
                x0: exact(w[0].0),
                x1: exact(w[1].0),
                y0: exact(w[0].1),
                y1: exact(w[1].1),
            })
            .collect())
    }
}

/// Non-autonomous piecewise-linear family on `[0, 1]` carrying the nested
/// intervals `A_j = [0, w_j]`, `B_j = [1 - w_j, 1]`.
///
/// Levels are grouped into blocks by the checkpoint schedule
/// `m_0 = 1, m_{n+1} = (2^n + 1) m_n`: level `j` lies in block 0 for
/// `j <= m_1` and in block `n` for `m_n < j <= m_{n+1}`. The width is
/// `w_j = 2^-(n + 2)` on block `n`.
///
/// `f_k` acts from level `k + 1` to level `k + 2`. Inside a block it is the
/// identity on the hold regions `[0, w/2]` and `[1 - w/2, 1]`; on the last
/// level of a block it doubles a quarter of each hold region onto the next
/// (half as wide) hold region of either side. Both `f_k(A_{k+1})` and
/// `f_k(B_{k+1})` are all of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandingFamily {
    schedule: Vec<u64>,
    domain: RealInterval,
    /// Breakpoints of the interior and boundary maps of each block, at
    /// `2 * block + boundary`.
    tables: Vec<Vec<(f64, f64)>>,
}

impl Default for ExpandingFamily {
    fn default() -> Self {
        Self::new()
    }
}

impl ExpandingFamily {
    pub fn new() -> Self {
        let schedule = full_checkpoint_schedule();
        let tables = (0..schedule.len())
            .flat_map(|block| [block_breakpoints(block, false), block_breakpoints(block, true)])
            .collect();
        ExpandingFamily {
            schedule,
            domain: RealInterval::unit(),
            tables,
        }
    }

    /// Block index of level `j >= 1`.
    pub fn block_of_level(&self, level: u64) -> usize {
        // number of m_n (n >= 1) strictly below `level`
        let below = self.schedule[1..].partition_point(|&m| m < level);
        below.min(self.schedule.len() - 1)
    }

    pub fn width_exponent(&self, level: u64) -> i32 {
        self.block_of_level(level) as i32 + 2
    }

    pub fn width(&self, level: u64) -> f64 {
        (-(self.width_exponent(level) as f64)).exp2()
    }

    /// `f_step` switches blocks when level `step + 1` closes a block.
    pub fn is_boundary_step(&self, step: u64) -> bool {
        let level = step + 1;
        // level closes block n exactly when it equals m_{n+1}
        self.schedule.get(self.block_of_level(level) + 1) == Some(&level)
    }

    fn breakpoints(&self, step: u64) -> &[(f64, f64)] {
        let level = step + 1;
        let block = self.block_of_level(level);
        let boundary = self.schedule.get(block + 1) == Some(&level);
        &self.tables[2 * block + boundary as usize]
    }

    /// Exact `(A_level, B_level)` endpoints.
    pub fn exact_sets(&self, level: u64) -> ((BigRational, BigRational), (BigRational, BigRational)) {
        let w = BigRational::new(1.into(), num_traits::pow(2.into(), self.width_exponent(level) as usize));
        let one = BigRational::one();
        (
            (BigRational::zero(), w.clone()),
            (&one - &w, one),
        )
    }
}

fn block_breakpoints(block: usize, boundary: bool) -> Vec<(f64, f64)> {
    let w = (-(block as f64 + 2.0)).exp2();
    if boundary {
        vec![
            (0.0, 0.0),
            (w / 8.0, w / 4.0),
            (3.0 * w / 8.0, 1.0 - w / 4.0),
            (w / 2.0, 1.0),
            (1.0 - w / 2.0, 0.0),
            (1.0 - 3.0 * w / 8.0, w / 4.0),
            (1.0 - w / 8.0, 1.0 - w / 4.0),
            (1.0, 1.0),
        ]
    } else {
        vec![
            (0.0, 0.0),
            (w / 2.0, w / 2.0),
            (w, 1.0),
            (1.0 - w, 0.0),
            (1.0 - w / 2.0, 1.0 - w / 2.0),
            (1.0, 1.0),
        ]
    }
}

impl MapFamily for ExpandingFamily {
    type Space = RealInterval;

    fn space(&self) -> &RealInterval {
        &self.domain
    }

    fn apply(&self, step: u64, x: &f64) -> f64 {
        eval_breakpoints(self.breakpoints(step), *x)
    }

    fn description(&self) -> String {
        "expanding-family (hold/switch, widths 2^-(block+2))".into()
    }
}

impl PiecewiseLinearFamily for ExpandingFamily {
    fn pieces_into(&self, step: u64, out: &mut Vec<LinearPiece>) -> Result<()> {
        pieces_from_breakpoints(self.breakpoints(step), out);
        Ok(())
    }

    fn exact_pieces(&self, step: u64) -> Result<Vec<ExactPiece>> {
        // every breakpoint is a dyadic rational, so the f64 values are exact
        Ok(self
            .breakpoints(step)
            .windows(2)
            .map(|w| ExactPiece {
                x0: exact(w[0].0),
                x1: exact(w[1].0),
                y0: exact(w[0].1),
                y1: exact(w[1].1),
            })
            .collect())
    }
}

/// JSON definition of a real-interval system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemSpec {
    Logistic { r: RateSpec },
    Tent { slope: f64 },
    PiecewiseLinear { breakpoints: Vec<[f64; 2]> },
    ExpandingFamily {},
    FullShift {},
}

/// A single rate, or a list applied cyclically (`r_n = r[n mod len]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateSpec {
    Constant(f64),
    PerStep(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RealSystem {
    Logistic(Logistic),
    Tent(Tent),
    PiecewiseLinear(PiecewiseLinear),
    Expanding(ExpandingFamily),
}

impl RealSystem {
    pub fn from_spec(spec: &SystemSpec) -> Result<Self> {
        Ok(match spec {
            SystemSpec::Logistic { r } => RealSystem::Logistic(match r {
                RateSpec::Constant(r) => Logistic::autonomous(*r)?,
                RateSpec::PerStep(rs) => Logistic::new(rs.clone())?,
            }),
            SystemSpec::Tent { slope } => RealSystem::Tent(Tent::new(*slope)?),
            SystemSpec::PiecewiseLinear { breakpoints } => RealSystem::PiecewiseLinear(
                PiecewiseLinear::new(breakpoints.iter().map(|p| (p[0], p[1])).collect())?,
            ),
            SystemSpec::ExpandingFamily {} => RealSystem::Expanding(ExpandingFamily::new()),
            SystemSpec::FullShift {} => {
                return Err(Error::Config("full-shift is not a real-interval system".into()))
            }
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SystemSpec = serde_json::from_str(text)?;
        Self::from_spec(&spec)
    }

    pub fn spec(&self) -> SystemSpec {
        match self {
            RealSystem::Logistic(l) if l.rates.len() == 1 => SystemSpec::Logistic {
                r: RateSpec::Constant(l.rates[0]),
            },
            RealSystem::Logistic(l) => SystemSpec::Logistic {
                r: RateSpec::PerStep(l.rates.clone()),
            },
            RealSystem::Tent(t) => SystemSpec::Tent { slope: t.slope },
            RealSystem::PiecewiseLinear(p) => SystemSpec::PiecewiseLinear {
                breakpoints: p.breakpoints.iter().map(|&(x, y)| [x, y]).collect(),
            },
            RealSystem::Expanding(_) => SystemSpec::ExpandingFamily {},
        }
    }
}

impl MapFamily for RealSystem {
    type Space = RealInterval;

    fn space(&self) -> &RealInterval {
        match self {
            RealSystem::Logistic(s) => s.space(),
            RealSystem::Tent(s) => s.space(),
            RealSystem::PiecewiseLinear(s) => s.space(),
            RealSystem::Expanding(s) => s.space(),
        }
    }

    #[inline]
    fn apply(&self, step: u64, x: &f64) -> f64 {
        match self {
            RealSystem::Logistic(s) => s.apply(step, x),
            RealSystem::Tent(s) => s.apply(step, x),
            RealSystem::PiecewiseLinear(s) => s.apply(step, x),
            RealSystem::Expanding(s) => s.apply(step, x),
        }
    }

    fn description(&self) -> String {
        match self {
            RealSystem::Logistic(s) => s.description(),
            RealSystem::Tent(s) => s.description(),
            RealSystem::PiecewiseLinear(s) => s.description(),
            RealSystem::Expanding(s) => s.description(),
        }
    }
}

impl PiecewiseLinearFamily for RealSystem {
    fn pieces_into(&self, step: u64, out: &mut Vec<LinearPiece>) -> Result<()> {
        match self {
            RealSystem::Tent(s) => s.pieces_into(step, out),
            RealSystem::PiecewiseLinear(s) => s.pieces_into(step, out),
            RealSystem::Expanding(s) => s.pieces_into(step, out),
            RealSystem::Logistic(_) => Err(Error::Parameter(
                "logistic maps are not piecewise linear".into(),
            )),
        }
    }

    fn exact_pieces(&self, step: u64) -> Result<Vec<ExactPiece>> {
        match self {
            RealSystem::Tent(s) => s.exact_pieces(step),
            RealSystem::PiecewiseLinear(s) => s.exact_pieces(step),
            RealSystem::Expanding(s) => s.exact_pieces(step),
            RealSystem::Logistic(_) => Err(Error::Parameter(
                "logistic maps are not piecewise linear".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_rate_cycles() {
        let l = Logistic::new(vec![3.5, 4.0]).unwrap();
        assert_eq!(l.rate(0), 3.5);
        assert_eq!(l.rate(1), 4.0);
        assert_eq!(l.rate(6), 3.5);
        assert!(Logistic::new(vec![4.5]).is_err());
        assert!(Logistic::new(vec![]).is_err());
    }

    #[test]
    fn piecewise_linear_validation() {
        assert!(PiecewiseLinear::new(vec![(0.0, 0.0)]).is_err());
        assert!(PiecewiseLinear::new(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(PiecewiseLinear::new(vec![(0.0, 0.0), (1.0, 2.0)]).is_err());
        let p = PiecewiseLinear::new(vec![(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)]).unwrap();
        assert_eq!(p.apply(0, &0.25), 0.5);
        assert_eq!(p.apply(0, &0.5), 1.0);
        assert_eq!(p.apply(0, &1.0), 0.0);
    }

    #[test]
    fn system_spec_round_trips_through_json() {
        let text = r#"{"kind":"logistic","r":[3.5,4.0]}"#;
        let sys = RealSystem::from_json(text).unwrap();
        let back = serde_json::to_string(&sys.spec()).unwrap();
        assert_eq!(back, text);
        assert!(RealSystem::from_json(r#"{"kind":"tent","slope":2.0}"#).is_ok());
        assert!(RealSystem::from_json(r#"{"kind":"expanding-family"}"#).is_ok());
        assert!(RealSystem::from_json(r#"{"kind":"henon"}"#).is_err());
        assert!(RealSystem::from_json(r#"{"kind":"tent","slope":3.0}"#).is_err());
    }

    #[test]
    fn expanding_family_blocks_follow_schedule() {
        let f = ExpandingFamily::new();
        // schedule 1, 2, 6, 30, 270, ...
        assert_eq!(f.block_of_level(1), 0);
        assert_eq!(f.block_of_level(2), 0);
        assert_eq!(f.block_of_level(3), 1);
        assert_eq!(f.block_of_level(6), 1);
        assert_eq!(f.block_of_level(7), 2);
        assert_eq!(f.block_of_level(30), 2);
        assert_eq!(f.block_of_level(31), 3);
        assert_eq!(f.width(1), 0.25);
        assert_eq!(f.width(31), 1.0 / 32.0);
        assert!(f.is_boundary_step(1));
        for step in 0..200_000 {
            assert_eq!(f.is_boundary_step(step), f.block_of_level(step + 2) > f.block_of_level(step + 1));
        }
        assert!(!f.is_boundary_step(0));
        assert!(f.is_boundary_step(5));
        assert!(f.is_boundary_step(29));
        assert!(!f.is_boundary_step(28));
    }

    #[test]
    fn expanding_family_hold_and_switch_are_exact() {
        let f = ExpandingFamily::new();
        // interior step: identity on the hold regions
        assert_eq!(f.apply(0, &0.1), 0.1);
        assert_eq!(f.apply(0, &0.9), 0.9);
        // boundary step 1 (level 2 -> 3), w = 1/4
        let w = 0.25;
        assert_eq!(f.apply(1, &(w / 16.0)), w / 8.0);
        let switched = f.apply(1, &(7.0 * w / 16.0));
        assert_eq!(switched, 1.0 - w / 4.0 + w / 8.0);
        assert_eq!(f.apply(1, &(1.0 - w / 16.0)), 1.0 - w / 8.0);
    }
}
