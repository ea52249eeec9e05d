use serde::Serialize;

use super::profile::PairProfile;
use crate::error::{Error, Result};
use crate::sequence::check_window;

/// Trailing-window extremes of the running fraction
/// `c_n = (1/n) #{i < n : d_i < ε}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionalEstimate {
    pub epsilon: f64,
    pub upper_f: f64,
    pub lower_f: f64,
    pub horizon: usize,
    pub window: usize,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Parameter(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

/// Estimate over the whole profile: `n ∈ [H - window, H]`, `H = len`.
pub fn estimate_f(profile: &PairProfile, epsilon: f64, window: usize) -> Result<DistributionalEstimate> {
    estimate_f_at(profile, epsilon, profile.len(), window)
}

/// Estimate at an earlier horizon `H <= len`.
pub fn estimate_f_at(
    profile: &PairProfile,
    epsilon: f64,
    horizon: usize,
    window: usize,
) -> Result<DistributionalEstimate> {
    check_epsilon(epsilon)?;
    check_window(horizon, window)?;
    if horizon > profile.len() {
        return Err(Error::Parameter(format!(
            "horizon {horizon} exceeds the profile length {}",
            profile.len()
        )));
    }
    let first = (horizon - window).max(1);
    let mut count = 0usize;
    let mut upper = f64::NEG_INFINITY;
    let mut lower = f64::INFINITY;
    for (i, &d) in profile.distances[..horizon].iter().enumerate() {
        if d < epsilon {
            count += 1;
        }
        let n = i + 1;
        if n >= first {
            let c = count as f64 / n as f64;
            upper = upper.max(c);
            lower = lower.min(c);
        }
    }
    Ok(DistributionalEstimate {
        epsilon,
        upper_f: upper,
        lower_f: lower,
        horizon,
        window,
    })
}

/// `c_n` at each requested `n`, in one pass.
pub fn fraction_at(profile: &PairProfile, epsilon: f64, checkpoints: &[usize]) -> Result<Vec<f64>> {
    check_epsilon(epsilon)?;
    if let Some(&n) = checkpoints.iter().find(|&&n| n == 0 || n > profile.len()) {
        return Err(Error::Parameter(format!(
            "checkpoint {n} outside 1..={}",
            profile.len()
        )));
    }
    let mut prefix = Vec::with_capacity(profile.len() + 1);
    prefix.push(0usize);
    let mut c = 0usize;
    let last = checkpoints.iter().copied().max().unwrap_or(0);
    for &d in &profile.distances[..last] {
        if d < epsilon {
            c += 1;
        }
        prefix.push(c);
    }
    Ok(checkpoints
        .iter()
        .map(|&n| prefix[n] as f64 / n as f64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::schedule::checkpoint_schedule;
    use proptest::prelude::*;

    fn profile(d: Vec<f64>) -> PairProfile {
        let idx = (0..d.len() as u64).collect();
        PairProfile::from_distances(idx, d, 1.0).unwrap()
    }

    #[test]
    fn zero_distances_give_one() {
        let p = profile(vec![0.0; 100]);
        let e = estimate_f(&p, 0.01, 10).unwrap();
        assert_eq!((e.upper_f, e.lower_f), (1.0, 1.0));
    }

    #[test]
    fn unit_distances_give_zero() {
        let p = profile(vec![1.0; 100]);
        let e = estimate_f(&p, 0.5, 10).unwrap();
        assert_eq!((e.upper_f, e.lower_f), (0.0, 0.0));
    }

    #[test]
    fn indicator_is_strict() {
        let p = profile(vec![0.5; 10]);
        assert_eq!(estimate_f(&p, 0.5, 0).unwrap().upper_f, 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let p = profile(vec![0.5; 10]);
        assert!(estimate_f(&p, 0.0, 1).is_err());
        assert!(estimate_f(&p, -1.0, 1).is_err());
        assert!(estimate_f(&p, 0.1, 11).is_err());
        assert!(estimate_f_at(&p, 0.1, 11, 1).is_err());
    }

    #[test]
    fn block_profile_matches_closed_form_counts() {
        let m = checkpoint_schedule(7).unwrap();
        let h = m.last() as usize;
        // zero on [m_{2k}, m_{2k+1}), one on [m_{2k+1}, m_{2k+2})
        let d: Vec<f64> = (0..h as u64)
            .map(|i| match m.block_of(i) {
                Some(n) if n % 2 == 0 => 0.0,
                Some(_) => 1.0,
                None => 0.0,
            })
            .collect();
        let p = profile(d);
        // closed-form count of zeros in [0, n): index 0 plus the even blocks
        let zeros_before = |n: u64| -> u64 {
            let v = m.values();
            let mut c = 1;
            for k in 0..m.depth() {
                if k % 2 == 0 {
                    c += n.min(v[k + 1]).saturating_sub(v[k]);
                }
            }
            c
        };
        let cps: Vec<usize> = m.values()[1..].iter().map(|&v| v as usize).collect();
        let fr = fraction_at(&p, 0.5, &cps).unwrap();
        for (&n, f) in cps.iter().zip(&fr) {
            assert_eq!(*f, zeros_before(n as u64) as f64 / n as f64);
        }
        // m_7 closes an even block, m_6 an odd one
        let e = estimate_f(&p, 0.5, h - m.m(5) as usize).unwrap();
        assert!(e.upper_f >= 0.95, "{}", e.upper_f);
        assert!(e.lower_f <= 0.05, "{}", e.lower_f);
    }

    proptest! {
        #[test]
        fn monotone_in_epsilon(d in proptest::collection::vec(0.0f64..1.0, 1..300), e1 in 0.001f64..1.0, e2 in 0.001f64..1.0) {
            let (a, b) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
            let p = profile(d);
            let w = p.len() / 3;
            let ea = estimate_f(&p, a, w).unwrap();
            let eb = estimate_f(&p, b, w).unwrap();
            prop_assert!(ea.upper_f <= eb.upper_f && ea.lower_f <= eb.lower_f);
            prop_assert!(0.0 <= ea.lower_f && ea.lower_f <= ea.upper_f && ea.upper_f <= 1.0);
        }
    }
}
