//! Asymptotic average pseudo-orbits assembled from two periodic orbits and
//! a countable set of base points, restarted on the checkpoint schedule.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbit::OrbitCursor;
use crate::space::{MetricSpace, RealInterval};
use crate::symbolic::SymbolSequence;
use crate::system::{MapFamily, PointOf};

use super::schedule::CheckpointSchedule;

/// Two periodic points whose orbits stay more than `2δ` apart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicPointPair<P> {
    pub x: P,
    pub y: P,
    pub periods: (u64, u64),
    pub separation: f64,
    /// Periodicity and separation were checked on `[0, horizon]`.
    pub horizon: u64,
}

impl<P: Clone> PeriodicPointPair<P> {
    /// Checks `d(f_0^{kp}(x), x) <= tol` at every multiple of the period
    /// and `d(f_0^n(x), f_0^n(y)) > 2δ` for `n <= horizon`.
    pub fn verify<S: MapFamily<Space = M>, M: MetricSpace<Point = P>>(
        system: &S,
        x: P,
        y: P,
        periods: (u64, u64),
        separation: f64,
        horizon: u64,
        tol: f64,
    ) -> Result<Self> {
        if periods.0 == 0 || periods.1 == 0 {
            return Err(Error::Parameter("periods must be positive".into()));
        }
        if !(separation > 0.0) {
            return Err(Error::Parameter(format!("separation must be positive, got {separation}")));
        }
        let space = system.space();
        let mut cx = OrbitCursor::new(system, x.clone())?;
        let mut cy = OrbitCursor::new(system, y.clone())?;
        for n in 0..=horizon {
            if n > 0 {
                cx.step()?;
                cy.step()?;
            }
            let d = space.distance(cx.point(), cy.point());
            if !(d > 2.0 * separation) {
                return Err(Error::Precondition(format!(
                    "orbits come within {d} <= 2 delta at n = {n}"
                )));
            }
            if n > 0 && n % periods.0 == 0 && space.distance(cx.point(), &x) > tol {
                return Err(Error::Precondition(format!("x does not return at n = {n}")));
            }
            if n > 0 && n % periods.1 == 0 && space.distance(cy.point(), &y) > tol {
                return Err(Error::Precondition(format!("y does not return at n = {n}")));
            }
        }
        Ok(PeriodicPointPair {
            x,
            y,
            periods,
            separation,
            horizon,
        })
    }
}

/// `x_i(u) = f_0^i(u_n)` for `m_n <= i < m_{n+1}` and `x_0 = u_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOrbit<P> {
    /// `x_0, ..., x_horizon`.
    pub points: Vec<P>,
    /// `u_0, ..., u_depth`.
    pub source_code: Vec<P>,
    /// Bits of the code `h` read by `u` (0 selects `x`, 1 selects `y`).
    pub code_bits: Vec<u8>,
    pub schedule: CheckpointSchedule,
}

impl<P> PseudoOrbit<P> {
    pub fn horizon(&self) -> u64 {
        self.points.len() as u64 - 1
    }

    /// Index into `source_code` used at time `i`.
    pub fn block_of(&self, i: u64) -> usize {
        if i == 0 {
            0
        } else {
            self.schedule.block_of(i).expect("inside the schedule")
        }
    }
}

/// Slot `t` of `g(h) = (e_0, h_0, e_0, e_1, h_0, h_1, ...)`: either base
/// point `e_i` or code position `h_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Base(usize),
    Code(usize),
}

fn interleave_slot(t: usize) -> Slot {
    // round k >= 1 has length 2k: e_0..e_{k-1}, h_0..h_{k-1}
    let mut k = 1;
    let mut start = 0;
    while t >= start + 2 * k {
        start += 2 * k;
        k += 1;
    }
    let off = t - start;
    if off < k {
        Slot::Base(off)
    } else {
        Slot::Code(off - k)
    }
}

/// Assembles the pseudo-orbit up to `horizon` (which must lie before
/// `m_depth`).
pub fn build_aapo<S: MapFamily>(
    system: &S,
    pair: &PeriodicPointPair<PointOf<S>>,
    code: &SymbolSequence,
    base_points: &[PointOf<S>],
    schedule: &CheckpointSchedule,
    horizon: u64,
) -> Result<PseudoOrbit<PointOf<S>>> {
    if horizon >= schedule.last() {
        return Err(Error::Schedule(format!(
            "horizon {horizon} needs a schedule past m_{} = {}",
            schedule.depth(),
            schedule.last()
        )));
    }
    let last_block = schedule.block_of(horizon).unwrap_or(0);
    let mut u = Vec::with_capacity(last_block + 1);
    let mut code_bits = Vec::new();
    for t in 0..=last_block {
        match interleave_slot(t) {
            Slot::Base(i) => {
                let e = base_points.get(i).ok_or_else(|| {
                    Error::Parameter(format!("need at least {} base points", i + 1))
                })?;
                u.push(e.clone());
            }
            Slot::Code(i) => {
                let b = code.bit(i);
                if code_bits.len() <= i {
                    code_bits.push(b);
                }
                u.push(if b == 0 { pair.x.clone() } else { pair.y.clone() });
            }
        }
    }
    let mut points = Vec::with_capacity(horizon as usize + 1);
    for (n, un) in u.iter().enumerate() {
        let (from, to) = if n == 0 { (0, schedule.m(1)) } else { (schedule.m(n), schedule.m(n + 1)) };
        let to = to.min(horizon + 1);
        let mut c = OrbitCursor::new(system, un.clone())?;
        c.advance_to(from)?;
        for i in from..to {
            if i > from {
                c.step()?;
            }
            points.push(c.point().clone());
        }
    }
    Ok(PseudoOrbit {
        points,
        source_code: u,
        code_bits,
        schedule: schedule.clone(),
    })
}

/// Re-checks the block structure: every point equals the orbit of its
/// block's source at the same time.
pub fn check_structure<S: MapFamily>(po: &PseudoOrbit<PointOf<S>>, system: &S) -> Result<bool> {
    let space = system.space();
    let mut current: Option<(usize, OrbitCursor<'_, S>)> = None;
    for (i, p) in po.points.iter().enumerate() {
        let b = po.block_of(i as u64);
        if current.as_ref().map(|c| c.0) != Some(b) {
            current = Some((b, OrbitCursor::new(system, po.source_code[b].clone())?));
        }
        let (_, c) = current.as_mut().expect("set above");
        if space.distance(c.advance_to(i as u64)?, p) != 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_checkpoints(checkpoints: &[u64], max: u64) -> Result<()> {
    if let Some(&n) = checkpoints.iter().find(|&&n| n == 0 || n > max) {
        return Err(Error::Parameter(format!("checkpoint {n} outside 1..={max}")));
    }
    Ok(())
}

/// `(1/n) Σ_{i<n} d(f_i(x_i), x_{i+1})` at each checkpoint `n`.
pub fn verify_aapo<S: MapFamily>(points: &[PointOf<S>], system: &S, checkpoints: &[u64]) -> Result<Vec<f64>> {
    let max = points.len().saturating_sub(1) as u64;
    check_checkpoints(checkpoints, max)?;
    let last = checkpoints.iter().copied().max().unwrap_or(0) as usize;
    let space = system.space();
    let mut prefix = Vec::with_capacity(last + 1);
    prefix.push(0.0f64);
    let mut sum = 0.0;
    for i in 0..last {
        sum += space.distance(&system.apply(i as u64, &points[i]), &points[i + 1]);
        prefix.push(sum);
    }
    Ok(checkpoints.iter().map(|&n| prefix[n as usize] / n as f64).collect())
}

/// `(1/n) Σ_{i<n} d(f_0^i(y_0), x_i)` at each checkpoint `n`.
pub fn verify_average_shadowing<S: MapFamily>(
    points: &[PointOf<S>],
    tracer: PointOf<S>,
    system: &S,
    checkpoints: &[u64],
) -> Result<Vec<f64>> {
    check_checkpoints(checkpoints, points.len() as u64)?;
    let last = checkpoints.iter().copied().max().unwrap_or(0) as usize;
    let space = system.space();
    let mut c = OrbitCursor::new(system, tracer)?;
    let mut prefix = Vec::with_capacity(last + 1);
    prefix.push(0.0f64);
    let mut sum = 0.0;
    for (i, p) in points.iter().enumerate().take(last) {
        if i > 0 {
            c.step()?;
        }
        sum += space.distance(c.point(), p);
        prefix.push(sum);
    }
    Ok(checkpoints.iter().map(|&n| prefix[n as usize] / n as f64).collect())
}

/// Bits read past the horizon so that the last shifted tracer still
/// matches its block to `ρ` precision.
pub const TRACER_LOOKAHEAD: u64 = 1100;

/// On the full shift: `y_i` is bit `i` of the source of the block holding
/// `i`, so `σ^i(y)` and `x_i` agree until the block ends.
pub fn concatenation_tracer(po: &PseudoOrbit<SymbolSequence>) -> Result<SymbolSequence> {
    let end = (po.horizon() + TRACER_LOOKAHEAD).min(po.schedule.last() - 1);
    let bits: Vec<u8> = (0..=end)
        .map(|i| po.source_code[po.block_of(i).min(po.source_code.len() - 1)].bit(i as usize))
        .collect();
    // positions past the last built block reuse its source, which still
    // follows the true orbit segment of x_horizon
    SymbolSequence::eventually_constant(bits, 0)
}

/// `e_i`: the binary digits of `i`, least significant first, then zeros.
pub fn binary_index_points(count: usize) -> Result<Vec<SymbolSequence>> {
    (0..count)
        .map(|i| {
            let mut digits = Vec::new();
            let mut v = i;
            while v > 0 {
                digits.push((v & 1) as u8);
                v >>= 1;
            }
            SymbolSequence::eventually_constant(digits, 0)
        })
        .collect()
}

/// `e_i`: the base-2 van der Corput sequence mapped into the domain,
/// starting from its midpoint.
pub fn van_der_corput_points(domain: &RealInterval, count: usize) -> Vec<f64> {
    (1..=count as u64)
        .map(|i| {
            let mut v = 0.0;
            let mut scale = 0.5;
            let mut k = i;
            while k > 0 {
                if k & 1 == 1 {
                    v += scale;
                }
                scale /= 2.0;
                k >>= 1;
            }
            domain.lo() + v * (domain.hi() - domain.lo())
        })
        .collect()
}
