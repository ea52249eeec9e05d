//! Metric domains the orbit engine runs on.
//!
//! Points of a domain are plain values (`f64` on a real interval, a
//! [`SymbolSequence`](crate::symbolic::SymbolSequence) on the symbol space),
//! and all metric structure lives in the [`MetricSpace`] implementation.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::fmt_f64;

pub trait MetricSpace: Send + Sync {
    type Point: Clone + Debug + Send + Sync;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    fn contains(&self, p: &Self::Point) -> bool;

    fn diameter(&self) -> f64;

    /// Pulls a point that escaped through rounding back into the domain and
    /// returns how far it moved.
    fn clamp(&self, _p: &mut Self::Point) -> f64 {
        0.0
    }

    /// Distance from `(a, b)` to the diagonal under the max product metric,
    /// `inf_z max(d(a, z), d(b, z))`.
    fn diag_distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// The diagonal distance as a function of `d(a, b)` alone, for domains
    /// where it has a closed form.
    fn diag_from_distance(&self) -> Option<fn(f64) -> f64> {
        None
    }

    fn describe(&self, p: &Self::Point) -> String;
}

/// The closed interval `[lo, hi]` with the absolute-value metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealInterval {
    lo: f64,
    hi: f64,
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Parameter(format!(
                "real interval needs finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(RealInterval { lo, hi })
    }

    pub fn unit() -> Self {
        RealInterval { lo: 0.0, hi: 1.0 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

impl MetricSpace for RealInterval {
    type Point = f64;

    fn distance(&self, a: &f64, b: &f64) -> f64 {
        (a - b).abs()
    }

    fn contains(&self, p: &f64) -> bool {
        *p >= self.lo && *p <= self.hi
    }

    fn diameter(&self) -> f64 {
        self.hi - self.lo
    }

    fn clamp(&self, p: &mut f64) -> f64 {
        if *p < self.lo {
            let moved = self.lo - *p;
            *p = self.lo;
            moved
        } else if *p > self.hi {
            let moved = *p - self.hi;
            *p = self.hi;
            moved
        } else {
            0.0
        }
    }

    // The midpoint z = (a + b) / 2 realises the infimum.
    fn diag_distance(&self, a: &f64, b: &f64) -> f64 {
        (a - b).abs() / 2.0
    }

    fn diag_from_distance(&self) -> Option<fn(f64) -> f64> {
        Some(|d| d / 2.0)
    }

    fn describe(&self, p: &f64) -> String {
        fmt_f64(*p)
    }
}

/// `X × Y` with `d'((x1, x2), (y1, y2)) = max(d(x1, y1), d(x2, y2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Product<A, B> {
    pub first: A,
    pub second: B,
}

impl<A, B> Product<A, B> {
    pub fn new(first: A, second: B) -> Self {
        Product { first, second }
    }
}

impl<A: MetricSpace, B: MetricSpace> MetricSpace for Product<A, B> {
    type Point = (A::Point, B::Point);

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        self.first
            .distance(&a.0, &b.0)
            .max(self.second.distance(&a.1, &b.1))
    }

    fn contains(&self, p: &Self::Point) -> bool {
        self.first.contains(&p.0) && self.second.contains(&p.1)
    }

    fn diameter(&self) -> f64 {
        self.first.diameter().max(self.second.diameter())
    }

    fn clamp(&self, p: &mut Self::Point) -> f64 {
        self.first.clamp(&mut p.0).max(self.second.clamp(&mut p.1))
    }

    // The max metric decouples: the infimum is taken per coordinate.
    fn diag_distance(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        self.first
            .diag_distance(&a.0, &b.0)
            .max(self.second.diag_distance(&a.1, &b.1))
    }

    fn describe(&self, p: &Self::Point) -> String {
        format!(
            "({} {})",
            self.first.describe(&p.0),
            self.second.describe(&p.1)
        )
    }
}
