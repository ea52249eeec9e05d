//! Outward-rounded intervals, finite interval unions, and preimages and
//! images under piecewise-linear maps.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::system::{ExactPiece, LinearPiece};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Parameter(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    /// `[lo, hi]` widened by one ulp on each side.
    pub fn outward(lo: f64, hi: f64) -> Self {
        Interval {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Distance between the two sets, zero when they meet.
    pub fn gap(&self, other: &Interval) -> f64 {
        (other.lo - self.hi).max(self.lo - other.hi).max(0.0)
    }
}

/// Sorted, pairwise disjoint closed intervals.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn from_parts(mut parts: Vec<Interval>) -> Self {
        parts.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            match merged.last_mut() {
                Some(last) if p.lo <= last.hi => last.hi = last.hi.max(p.hi),
                _ => merged.push(p),
            }
        }
        IntervalSet { parts: merged }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        let i = self.parts.partition_point(|p| p.hi < x);
        self.parts.get(i).is_some_and(|p| p.contains(x))
    }

    pub fn intersect_interval(&self, iv: &Interval) -> IntervalSet {
        IntervalSet {
            parts: self.parts.iter().filter_map(|p| p.intersect(iv)).collect(),
        }
    }

    pub fn widest(&self) -> Option<Interval> {
        self.parts
            .iter()
            .copied()
            .reduce(|a, b| if b.width() > a.width() { b } else { a })
    }

    /// Drops components narrower than `tol`.
    pub fn retain_wider_than(&mut self, tol: f64) {
        self.parts.retain(|p| p.width() >= tol);
    }
}

/// `{x ∈ [x0, x1] : piece(x) ∈ target}`, rounded outward and clipped to
/// the piece.
pub fn piece_preimage(piece: &LinearPiece, target: &Interval) -> Option<Interval> {
    let dom = Interval {
        lo: piece.x0,
        hi: piece.x1,
    };
    if piece.y0 == piece.y1 {
        return target.contains(piece.y0).then_some(dom);
    }
    let ylo = target.lo.max(piece.y0.min(piece.y1));
    let yhi = target.hi.min(piece.y0.max(piece.y1));
    if ylo > yhi {
        return None;
    }
    let inv = |y: f64| piece.x0 + (y - piece.y0) * ((piece.x1 - piece.x0) / (piece.y1 - piece.y0));
    let (a, b) = (inv(ylo), inv(yhi));
    Interval::outward(a.min(b), a.max(b)).intersect(&dom)
}

/// Preimage of a union under a piecewise-linear map.
pub fn preimage(pieces: &[LinearPiece], target: &IntervalSet) -> IntervalSet {
    let mut parts = Vec::new();
    for piece in pieces {
        for t in target.parts() {
            if let Some(p) = piece_preimage(piece, t) {
                parts.push(p);
            }
        }
    }
    IntervalSet::from_parts(parts)
}

/// Closed rational interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Parameter(format!("empty rational interval [{lo}, {hi}]")));
        }
        Ok(RationalInterval { lo, hi })
    }

    pub fn contains_interval(&self, other: &RationalInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_disjoint(&self, other: &RationalInterval) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn to_f64(&self) -> Interval {
        use num_traits::ToPrimitive;
        let lo = self.lo.to_f64().unwrap_or(f64::NAN);
        let hi = self.hi.to_f64().unwrap_or(f64::NAN);
        // widen only when the conversion was inexact
        let lo = if BigRational::from_float(lo).as_ref() == Some(&self.lo) { lo } else { lo.next_down() };
        let hi = if BigRational::from_float(hi).as_ref() == Some(&self.hi) { hi } else { hi.next_up() };
        Interval { lo, hi }
    }
}

fn piece_value(p: &ExactPiece, x: &BigRational) -> BigRational {
    &p.y0 + (x - &p.x0) * (&p.y1 - &p.y0) / (&p.x1 - &p.x0)
}

/// Exact image of `iv` under a continuous piecewise-linear map; the image
/// of an interval is the interval between the extreme values attained at
/// its endpoints and the breakpoints inside it.
pub fn exact_image(pieces: &[ExactPiece], iv: &RationalInterval) -> Result<RationalInterval> {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    let mut push = |v: BigRational| {
        if lo.as_ref().is_none_or(|l| v < *l) {
            lo = Some(v.clone());
        }
        if hi.as_ref().is_none_or(|h| v > *h) {
            hi = Some(v);
        }
    };
    for p in pieces {
        if p.x1 < iv.lo || p.x0 > iv.hi {
            continue;
        }
        let a = if p.x0 > iv.lo { p.x0.clone() } else { iv.lo.clone() };
        let b = if p.x1 < iv.hi { p.x1.clone() } else { iv.hi.clone() };
        push(piece_value(p, &a));
        push(piece_value(p, &b));
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => RationalInterval::new(lo, hi),
        _ => Err(Error::Parameter("interval lies outside the map's domain".into())),
    }
}

/// Consecutive pieces meet, so the map is continuous.
pub fn pieces_are_continuous(pieces: &[ExactPiece]) -> bool {
    pieces
        .windows(2)
        .all(|w| w[0].x1 == w[1].x0 && w[0].y1 == w[1].y0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn set_normalizes_overlaps() {
        let s = IntervalSet::from_parts(vec![
            Interval::new(0.5, 0.7).unwrap(),
            Interval::new(0.0, 0.2).unwrap(),
            Interval::new(0.1, 0.3).unwrap(),
        ]);
        assert_eq!(s.parts().len(), 2);
        assert_eq!(s.parts()[0], Interval::new(0.0, 0.3).unwrap());
        assert!(s.contains(0.25) && !s.contains(0.4));
        assert_eq!(s.widest(), Some(Interval::new(0.0, 0.3).unwrap()));
    }

    #[test]
    fn tent_preimage_has_two_branches() {
        let pieces = [
            LinearPiece { x0: 0.0, x1: 0.5, y0: 0.0, y1: 1.0 },
            LinearPiece { x0: 0.5, x1: 1.0, y0: 1.0, y1: 0.0 },
        ];
        let t = IntervalSet::from_parts(vec![Interval::new(0.25, 0.5).unwrap()]);
        let pre = preimage(&pieces, &t);
        assert_eq!(pre.parts().len(), 2);
        assert!(pre.parts()[0].contains(0.125) && pre.parts()[0].contains(0.25));
        assert!(pre.parts()[1].contains(0.75) && pre.parts()[1].contains(0.875));
        // outward rounding adds at most one ulp per side
        assert!(pre.parts()[0].width() - 0.125 < 1e-15);
    }

    #[test]
    fn flat_piece_preimage_is_all_or_nothing() {
        let p = LinearPiece { x0: 0.25, x1: 0.5, y0: 0.5, y1: 0.5 };
        assert_eq!(piece_preimage(&p, &Interval::new(0.4, 0.6).unwrap()), Some(Interval::new(0.25, 0.5).unwrap()));
        assert_eq!(piece_preimage(&p, &Interval::new(0.6, 0.7).unwrap()), None);
    }

    #[test]
    fn exact_tent_images() {
        let tent = [
            ExactPiece { x0: r(0, 1), x1: r(1, 2), y0: r(0, 1), y1: r(1, 1) },
            ExactPiece { x0: r(1, 2), x1: r(1, 1), y0: r(1, 1), y1: r(0, 1) },
        ];
        assert!(pieces_are_continuous(&tent));
        let img = exact_image(&tent, &RationalInterval::new(r(9, 16), r(1, 1)).unwrap()).unwrap();
        assert_eq!(img, RationalInterval::new(r(0, 1), r(7, 8)).unwrap());
        let img = exact_image(&tent, &RationalInterval::new(r(1, 4), r(3, 4)).unwrap()).unwrap();
        assert_eq!(img, RationalInterval::new(r(1, 2), r(1, 1)).unwrap());
    }

    #[test]
    fn rational_conversion_encloses() {
        let iv = RationalInterval::new(r(1, 3), r(2, 3)).unwrap().to_f64();
        assert!(BigRational::from_float(iv.lo()).unwrap() <= r(1, 3));
        assert!(BigRational::from_float(iv.hi()).unwrap() >= r(2, 3));
        let exact = RationalInterval::new(r(1, 4), r(1, 2)).unwrap().to_f64();
        assert_eq!(exact, Interval::new(0.25, 0.5).unwrap());
    }

    proptest! {
        #[test]
        fn preimage_encloses_true_preimage(
            x0 in 0.0f64..0.5, dx in 0.01f64..0.5, y0 in 0.0f64..1.0, y1 in 0.0f64..1.0,
            t in 0.0f64..1.0, s in 0.0f64..0.5, u in 0.0f64..1.0,
        ) {
            let piece = LinearPiece { x0, x1: x0 + dx, y0, y1 };
            let target = Interval::new(t.min(t + s), (t + s).min(1.0).max(t)).unwrap();
            let x = x0 + u * dx;
            let y = piece.eval(x);
            if target.lo() + 1e-9 < y && y < target.hi() - 1e-9 {
                let pre = piece_preimage(&piece, &target);
                prop_assert!(pre.is_some_and(|p| p.contains(x)));
            }
        }
    }
}
