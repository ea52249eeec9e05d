//! Orbits `x_n = f_0^n(x_0)`, materialized or streamed.

use crate::error::{Error, Result};
use crate::space::MetricSpace;
use crate::system::{MapFamily, PointOf};

/// Default cap on materialized orbit length, in points.
pub const DEFAULT_ORBIT_CAP: u64 = 1 << 27;

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<P> {
    pub start: P,
    pub horizon: u64,
    /// `points[k] = f_0^k(start)` for `k = 0..=horizon`.
    pub points: Vec<P>,
    /// Largest rounding correction applied by the domain clamp.
    pub max_clamp: f64,
}

/// Walks one orbit forward step by step, holding only the current point.
#[derive(Debug, Clone)]
pub struct OrbitCursor<'a, S: MapFamily> {
    system: &'a S,
    point: PointOf<S>,
    time: u64,
    max_clamp: f64,
}

impl<'a, S: MapFamily> OrbitCursor<'a, S> {
    pub fn new(system: &'a S, start: PointOf<S>) -> Result<Self> {
        if !system.space().contains(&start) {
            return Err(Error::DomainViolation {
                point: system.space().describe(&start),
                step: 0,
            });
        }
        Ok(OrbitCursor {
            system,
            point: start,
            time: 0,
            max_clamp: 0.0,
        })
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn point(&self) -> &PointOf<S> {
        &self.point
    }

    pub fn max_clamp(&self) -> f64 {
        self.max_clamp
    }

    #[inline]
    pub fn step(&mut self) -> Result<()> {
        let space = self.system.space();
        let mut next = self.system.apply(self.time, &self.point);
        let moved = space.clamp(&mut next);
        if moved > self.max_clamp {
            self.max_clamp = moved;
        }
        if moved.is_nan() || !space.contains(&next) {
            return Err(Error::DomainViolation {
                point: space.describe(&next),
                step: self.time + 1,
            });
        }
        self.point = next;
        self.time += 1;
        Ok(())
    }

    /// Advances to time `n`, which must not lie in the past.
    pub fn advance_to(&mut self, n: u64) -> Result<&PointOf<S>> {
        if n < self.time {
            return Err(Error::Parameter(format!(
                "cursor at time {} cannot move back to {n}",
                self.time
            )));
        }
        while self.time < n {
            self.step()?;
        }
        Ok(&self.point)
    }
}

pub fn compose_orbit<S: MapFamily>(system: &S, start: PointOf<S>, horizon: u64) -> Result<Orbit<PointOf<S>>> {
    compose_orbit_capped(system, start, horizon, DEFAULT_ORBIT_CAP)
}

pub fn compose_orbit_capped<S: MapFamily>(
    system: &S,
    start: PointOf<S>,
    horizon: u64,
    cap: u64,
) -> Result<Orbit<PointOf<S>>> {
    let requested = horizon.saturating_add(1);
    if requested > cap {
        return Err(Error::Capacity { requested, cap });
    }
    let mut cursor = OrbitCursor::new(system, start.clone())?;
    let mut points = Vec::with_capacity(requested as usize);
    points.push(start.clone());
    for _ in 0..horizon {
        cursor.step()?;
        points.push(cursor.point().clone());
    }
    Ok(Orbit {
        start,
        horizon,
        points,
        max_clamp: cursor.max_clamp(),
    })
}

/// `f_0^{p_i}(start)` for strictly increasing `indices`, in O(1) memory
/// beyond the output.
pub fn orbit_at_indices<S: MapFamily>(system: &S, start: PointOf<S>, indices: &[u64]) -> Result<Vec<PointOf<S>>> {
    if let Some(w) = indices.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(format!(
            "indices must be strictly increasing, got {} then {}",
            w[0], w[1]
        )));
    }
    let mut cursor = OrbitCursor::new(system, start)?;
    indices
        .iter()
        .map(|&p| cursor.advance_to(p).cloned())
        .collect()
}
