//! Points with prescribed itineraries through nested interval pairs
//! `(A_j, B_j)` satisfying the expanding condition
//! `A_{j+1} ∪ B_{j+1} ⊆ f_{j-1}(A_j) ∩ f_{j-1}(B_j)`.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{exact_image, pieces_are_continuous, preimage, Interval, IntervalSet, RationalInterval};
use crate::orbit::OrbitCursor;
use crate::symbolic::SymbolSequence;
use crate::system::{ExpandingFamily, LinearPiece, PiecewiseLinearFamily};

use super::schedule::full_checkpoint_schedule;

/// Components narrower than this are dropped during the backward pass.
pub const WIDTH_TOLERANCE: f64 = 1e-12;

/// `(A_j, B_j)` for every level `j >= start`, up to the next block.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedBlock {
    pub start: u64,
    pub a: RationalInterval,
    pub b: RationalInterval,
    a_f64: Interval,
    b_f64: Interval,
}

/// A piecewise-constant sequence of interval pairs, indexed by level
/// `j >= 1`. The last block extends to every deeper level.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedFamily {
    blocks: Vec<NestedBlock>,
    disjoint_at: Option<u64>,
}

impl NestedFamily {
    /// `blocks[i] = (start, A, B)`; starts must begin at 1 and increase.
    pub fn new(blocks: Vec<(u64, RationalInterval, RationalInterval)>) -> Result<Self> {
        if blocks.first().map(|b| b.0) != Some(1) {
            return Err(Error::Parameter("nested family must start at level 1".into()));
        }
        if blocks.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Parameter("block starts must be strictly increasing".into()));
        }
        let blocks: Vec<NestedBlock> = blocks
            .into_iter()
            .map(|(start, a, b)| NestedBlock {
                start,
                a_f64: a.to_f64(),
                b_f64: b.to_f64(),
                a,
                b,
            })
            .collect();
        let disjoint_at = blocks.iter().find(|b| b.a.is_disjoint(&b.b)).map(|b| b.start);
        Ok(NestedFamily { blocks, disjoint_at })
    }

    /// The same pair at every level.
    pub fn stationary(a: RationalInterval, b: RationalInterval) -> Result<Self> {
        Self::new(vec![(1, a, b)])
    }

    /// The sets carried by an [`ExpandingFamily`], one block per
    /// schedule block.
    pub fn for_expanding(system: &ExpandingFamily) -> Self {
        let m = full_checkpoint_schedule();
        let mut starts = vec![1u64];
        starts.extend(m[1..].iter().map(|&v| v + 1));
        let blocks = starts
            .into_iter()
            .map(|s| {
                let ((a0, a1), (b0, b1)) = system.exact_sets(s);
                (
                    s,
                    RationalInterval::new(a0, a1).expect("ordered"),
                    RationalInterval::new(b0, b1).expect("ordered"),
                )
            })
            .collect();
        Self::new(blocks).expect("schedule starts increase")
    }

    pub fn blocks(&self) -> &[NestedBlock] {
        &self.blocks
    }

    /// First level with `A_j ∩ B_j = ∅`.
    pub fn disjoint_at(&self) -> Option<u64> {
        self.disjoint_at
    }

    pub fn block(&self, level: u64) -> Result<&NestedBlock> {
        if level == 0 {
            return Err(Error::Parameter("levels start at 1".into()));
        }
        let i = self.blocks.partition_point(|b| b.start <= level) - 1;
        Ok(&self.blocks[i])
    }

    pub fn interval(&self, level: u64, is_a: bool) -> Result<Interval> {
        let b = self.block(level)?;
        Ok(if is_a { b.a_f64 } else { b.b_f64 })
    }

    /// `max(diam A_j, diam B_j)`.
    pub fn diameter(&self, level: u64) -> Result<BigRational> {
        let b = self.block(level)?;
        let (wa, wb) = (b.a.width(), b.b.width());
        Ok(if wa > wb { wa } else { wb })
    }

    /// `d(A_j, B_j) / 2`, the separation constant at level `j`.
    pub fn delta(&self, level: u64) -> Result<f64> {
        let b = self.block(level)?;
        Ok(b.a_f64.gap(&b.b_f64) / 2.0)
    }

    /// Levels where the family or the map can change: around every block
    /// start up to `max_level`. Enough to verify families whose maps are
    /// constant inside a block except on its last level.
    pub fn critical_levels(&self, max_level: u64) -> Vec<u64> {
        let mut out = vec![1];
        for b in &self.blocks {
            for l in [b.start.saturating_sub(1), b.start, b.start + 1] {
                if l >= 1 && l <= max_level {
                    out.push(l);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Checks the expanding condition exactly at each `level` (using
    /// `f_{level-1}`), plus continuity of the maps involved.
    pub fn verify_expanding<S: PiecewiseLinearFamily>(&self, system: &S, levels: &[u64]) -> Result<()> {
        for &n in levels {
            let pieces = system.exact_pieces(n - 1)?;
            if !pieces_are_continuous(&pieces) {
                return Err(Error::Parameter(format!("f_{} is not continuous", n - 1)));
            }
            let cur = self.block(n)?;
            let next = self.block(n + 1)?;
            let ia = exact_image(&pieces, &cur.a)?;
            let ib = exact_image(&pieces, &cur.b)?;
            for img in [&ia, &ib] {
                if !(img.contains_interval(&next.a) && img.contains_interval(&next.b)) {
                    return Err(Error::ExpandingCondition { level: n });
                }
            }
        }
        Ok(())
    }

    /// Diameters never grow from one block to the next.
    pub fn diameters_nonincreasing(&self) -> bool {
        let d: Vec<BigRational> = self
            .blocks
            .iter()
            .map(|b| {
                let (wa, wb) = (b.a.width(), b.b.width());
                if wa > wb {
                    wa
                } else {
                    wb
                }
            })
            .collect();
        d.windows(2).all(|w| w[1] <= w[0])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CodingMode {
    /// `C_j` follows `a_n` for the schedule block `m_n < j <= m_{n+1}`;
    /// levels `1, 2` follow `a_0`.
    Blocked,
    /// `C_j` follows `a_{j-1}`.
    PerLevel,
}

/// The itinerary `C_1, C_2, ...`: `A_j` where the governing symbol is 0,
/// `B_j` where it is 1.
#[derive(Debug, Clone)]
pub struct CodingAssignment {
    pub alpha: SymbolSequence,
    pub mode: CodingMode,
    schedule: Vec<u64>,
}

impl CodingAssignment {
    pub fn blocked(alpha: SymbolSequence) -> Self {
        CodingAssignment {
            alpha,
            mode: CodingMode::Blocked,
            schedule: full_checkpoint_schedule(),
        }
    }

    pub fn per_level(alpha: SymbolSequence) -> Self {
        CodingAssignment {
            alpha,
            mode: CodingMode::PerLevel,
            schedule: full_checkpoint_schedule(),
        }
    }

    /// Index of the symbol governing level `j >= 1`.
    pub fn symbol_index(&self, level: u64) -> usize {
        match self.mode {
            CodingMode::Blocked => {
                let n = self.schedule[1..].partition_point(|&m| m < level);
                n.min(self.schedule.len() - 1)
            }
            CodingMode::PerLevel => (level - 1) as usize,
        }
    }

    pub fn is_a(&self, level: u64) -> bool {
        self.alpha.bit(self.symbol_index(level)) == 0
    }
}

/// A point of `D_depth` together with its enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpandingPoint {
    pub x: f64,
    pub enclosure_lo: f64,
    pub enclosure_hi: f64,
    pub depth: u64,
    /// Largest distance from `f_0^k(x)` to `C_{k+1}` over `k < depth`.
    pub max_excursion: f64,
}

/// Forward membership slack tolerated before the result is rejected.
const EXCURSION_TOLERANCE: f64 = 1e-9;

/// `D_depth = ⋂_{k < depth} f_0^{-k}(C_{k+1})`, computed backwards as
/// `S_{depth-1} = C_depth`, `S_k = C_{k+1} ∩ f_k^{-1}(S_{k+1})`. Returns the
/// midpoint of the widest component of `S_0`, after checking its forward
/// orbit.
pub fn build_expanding_point<S: PiecewiseLinearFamily>(
    family: &NestedFamily,
    coding: &CodingAssignment,
    system: &S,
    depth: u64,
) -> Result<ExpandingPoint> {
    if depth == 0 {
        return Err(Error::Parameter("depth must be at least 1".into()));
    }
    let set_at = |level: u64| family.interval(level, coding.is_a(level));
    let mut s = IntervalSet::from_parts(vec![set_at(depth)?]);
    let mut pieces: Vec<LinearPiece> = Vec::new();
    let mut prev_pieces: Vec<LinearPiece> = Vec::new();
    let mut prev_c: Option<Interval> = None;
    // S was a fixed point of the last update; the same update keeps it
    let mut stable = false;
    for k in (0..depth - 1).rev() {
        system.pieces_into(k, &mut pieces)?;
        let c = set_at(k + 1)?;
        if stable && prev_c == Some(c) && pieces == prev_pieces {
            continue;
        }
        let mut next = preimage(&pieces, &s).intersect_interval(&c);
        if next.is_empty() {
            return Err(Error::ExpandingCondition { level: k + 1 });
        }
        next.retain_wider_than(WIDTH_TOLERANCE);
        if next.is_empty() {
            return Err(Error::PrecisionExhausted { level: k + 1 });
        }
        stable = next == s;
        s = next;
        std::mem::swap(&mut pieces, &mut prev_pieces);
        prev_c = Some(c);
    }
    let widest = s.widest().expect("nonempty");
    let x = widest.mid();

    let mut cursor = OrbitCursor::new(system, x)?;
    let mut max_excursion: f64 = 0.0;
    for k in 0..depth {
        if k > 0 {
            cursor.step()?;
        }
        let c = set_at(k + 1)?;
        let p = *cursor.point();
        let out = (c.lo() - p).max(p - c.hi()).max(0.0);
        max_excursion = max_excursion.max(out);
        if out > EXCURSION_TOLERANCE {
            return Err(Error::PrecisionExhausted { level: k + 1 });
        }
    }
    Ok(ExpandingPoint {
        x,
        enclosure_lo: widest.lo(),
        enclosure_hi: widest.hi(),
        depth,
        max_excursion,
    })
}

/// The two points coded by `alpha` and `beta` under the blocked coding.
/// Rejects families whose `A_j`, `B_j` meet at every level, since then
/// `δ = d(a, b) / 2 = 0`.
pub fn build_dc_pair_expanding<S: PiecewiseLinearFamily>(
    family: &NestedFamily,
    system: &S,
    alpha: &SymbolSequence,
    beta: &SymbolSequence,
    depth: u64,
) -> Result<(ExpandingPoint, ExpandingPoint)> {
    if family.disjoint_at().is_none() {
        return Err(Error::Parameter(
            "A_j and B_j intersect at every level, so delta = 0".into(),
        ));
    }
    let x = build_expanding_point(family, &CodingAssignment::blocked(alpha.clone()), system, depth)?;
    let y = build_expanding_point(family, &CodingAssignment::blocked(beta.clone()), system, depth)?;
    Ok((x, y))
}

#[cfg(test)]
pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
