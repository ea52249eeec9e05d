//! The checkpoint schedule `m_0 = 1, m_{n+1} = (2^n + 1) m_n`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Deepest level whose `m_n` fits in a `u64` (`m_11 ≈ 1.7e17`).
pub const MAX_CHECKPOINT_DEPTH: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckpointSchedule {
    m: Vec<u64>,
}

impl CheckpointSchedule {
    pub fn depth(&self) -> usize {
        self.m.len() - 1
    }

    pub fn values(&self) -> &[u64] {
        &self.m
    }

    pub fn m(&self, n: usize) -> u64 {
        self.m[n]
    }

    pub fn last(&self) -> u64 {
        self.m[self.m.len() - 1]
    }

    /// The `n` with `m_n <= i < m_{n+1}`, or `None` when `i` lies before
    /// `m_0` or at or past `m_depth`.
    pub fn block_of(&self, i: u64) -> Option<usize> {
        if i < self.m[0] || i >= self.last() {
            return None;
        }
        Some(self.m.partition_point(|&m| m <= i) - 1)
    }

    /// `(m_{n+1} - m_n, m_{n+1})`, the share of `[0, m_{n+1})` taken by
    /// block `n`, as an unreduced exact fraction.
    pub fn block_share(&self, n: usize) -> (u64, u64) {
        (self.m[n + 1] - self.m[n], self.m[n + 1])
    }
}

pub fn checkpoint_schedule(depth: usize) -> Result<CheckpointSchedule> {
    if depth < 1 {
        return Err(Error::Parameter("checkpoint schedule depth must be at least 1".into()));
    }
    let mut m = Vec::with_capacity(depth + 1);
    m.push(1u64);
    for n in 0..depth {
        let factor = 1u64
            .checked_shl(n as u32)
            .and_then(|p| p.checked_add(1))
            .ok_or_else(|| Error::Overflow(format!("2^{n} + 1 does not fit in u64")))?;
        let next = m[n]
            .checked_mul(factor)
            .ok_or_else(|| Error::Overflow(format!("m_{} does not fit in u64", n + 1)))?;
        m.push(next);
    }
    Ok(CheckpointSchedule { m })
}

/// The deepest schedule representable in `u64`.
pub(crate) fn full_checkpoint_schedule() -> Vec<u64> {
    checkpoint_schedule(MAX_CHECKPOINT_DEPTH)
        .expect("depth 11 fits in u64")
        .m
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn oracle(depth: usize) -> Vec<BigUint> {
        let mut m = vec![BigUint::from(1u32)];
        for n in 0..depth {
            let f = (BigUint::from(1u32) << n) + 1u32;
            let next = &m[n] * f;
            m.push(next);
        }
        m
    }

    #[test]
    fn matches_big_integer_oracle() {
        let s = checkpoint_schedule(MAX_CHECKPOINT_DEPTH).unwrap();
        let o = oracle(MAX_CHECKPOINT_DEPTH);
        for (a, b) in s.values().iter().zip(&o) {
            assert_eq!(BigUint::from(*a), *b);
        }
    }

    #[test]
    fn depth_examples() {
        assert_eq!(checkpoint_schedule(4).unwrap().values(), &[1, 2, 6, 30, 270]);
        assert_eq!(checkpoint_schedule(1).unwrap().values(), &[1, 2]);
        assert_eq!(
            checkpoint_schedule(7).unwrap().values(),
            &[1, 2, 6, 30, 270, 4590, 151470, 9845550]
        );
        assert!(checkpoint_schedule(0).is_err());
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(
            checkpoint_schedule(MAX_CHECKPOINT_DEPTH + 1),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn block_share_is_exact() {
        let s = checkpoint_schedule(MAX_CHECKPOINT_DEPTH).unwrap();
        for n in 0..MAX_CHECKPOINT_DEPTH {
            let (num, den) = s.block_share(n);
            // num / den == 2^n / (2^n + 1), cross-multiplied
            assert_eq!(num as u128 * ((1u128 << n) + 1), den as u128 * (1u128 << n));
        }
    }

    #[test]
    fn block_of_locates_indices() {
        let s = checkpoint_schedule(4).unwrap();
        assert_eq!(s.block_of(0), None);
        assert_eq!(s.block_of(1), Some(0));
        assert_eq!(s.block_of(2), Some(1));
        assert_eq!(s.block_of(5), Some(1));
        assert_eq!(s.block_of(6), Some(2));
        assert_eq!(s.block_of(269), Some(3));
        assert_eq!(s.block_of(270), None);
    }
}
