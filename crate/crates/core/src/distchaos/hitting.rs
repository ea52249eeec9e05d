use serde::Serialize;

use super::estimate::estimate_f;
use super::profile::PairProfile;
use super::verdict::{classify_pair, lower_check, upper_check, ClassifyOptions, Flag, PairVerdict, Tolerances};
use crate::error::{Error, Result};
use crate::sequence::{check_window, DensityEstimate, IndexSequence};

/// `[Δ]_ε`, or with `complement_closure_delta = Some(δ')` the set
/// `(X × X) \ closure([Δ]_δ')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalNeighborhood {
    pub epsilon: f64,
    pub complement_closure_delta: Option<f64>,
}

impl DiagonalNeighborhood {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Parameter(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(DiagonalNeighborhood {
            epsilon,
            complement_closure_delta: None,
        })
    }

    pub fn with_complement(epsilon: f64, delta_prime: f64) -> Result<Self> {
        let mut n = Self::new(epsilon)?;
        if !(delta_prime > 0.0 && delta_prime.is_finite()) {
            return Err(Error::Parameter(format!("delta' must be positive, got {delta_prime}")));
        }
        n.complement_closure_delta = Some(delta_prime);
        Ok(n)
    }
}

/// `N((x, y), W, P)`: the orbit times of the profile at which the pair
/// lies in `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingSet {
    pub target: DiagonalNeighborhood,
    pub complement: bool,
    pub hits: IndexSequence,
    /// Positions of the hits within the base indices.
    pub positions: Vec<usize>,
    pub base_len: usize,
}

impl HittingSet {
    /// Trailing-window extremes of `|hits ∩ {p_1..p_n}| / n`.
    pub fn relative_density(&self, window: usize) -> Result<DensityEstimate> {
        let h = self.base_len;
        check_window(h, window)?;
        let first = (h - window).max(1);
        let mut upper = f64::NEG_INFINITY;
        let mut lower = f64::INFINITY;
        let mut j = 0;
        for n in 1..=h {
            while j < self.positions.len() && self.positions[j] < n {
                j += 1;
            }
            if n >= first {
                let r = j as f64 / n as f64;
                upper = upper.max(r);
                lower = lower.min(r);
            }
        }
        Ok(DensityEstimate {
            upper,
            lower,
            horizon: h,
            window,
        })
    }
}

/// Membership in `[Δ]_ε` is `diag < ε`; in the complement of the closure
/// of `[Δ]_δ'` it is `diag > δ'` (`δ'` defaults to `ε`).
pub fn hitting_set(profile: &PairProfile, target: DiagonalNeighborhood, complement: bool) -> Result<HittingSet> {
    let eps = target.epsilon;
    let dp = target.complement_closure_delta.unwrap_or(eps);
    let positions: Vec<usize> = (0..profile.len())
        .filter(|&i| {
            let g = profile.diag(i);
            if complement {
                g > dp
            } else {
                g < eps
            }
        })
        .collect();
    let hits = IndexSequence::explicit(positions.iter().map(|&i| profile.indices[i]).collect())?;
    Ok(HittingSet {
        target,
        complement,
        hits,
        positions,
        base_len: profile.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualVerdict {
    /// `F*(2ε) ≥ 1 - τ_hi` for every grid `ε` and `F(δ) ≤ τ_lo`.
    pub direct: Flag,
    /// Upper density `≥ 1 - τ_hi` of the hits of `[Δ]_ε` for every grid
    /// `ε`, and `≥ 1 - τ_lo` of the hits of the complement of
    /// `closure([Δ]_{δ/4})`.
    pub via_hitting_sets: Flag,
    /// Set when both are decided.
    pub agreement: Option<bool>,
    pub delta: f64,
    pub delta_prime: f64,
    pub eps_grid: Vec<f64>,
    pub hitting_upper: Vec<f64>,
    pub complement_upper: f64,
    #[serde(skip)]
    pub verdict: PairVerdict,
}

/// Decides "distributionally δ-scrambled" twice: from the distributional
/// functions, and from densities of diagonal hitting sets. A density-one
/// set of visits to `[Δ]_ε` gives `F*(2ε) = 1`, so the direct side is
/// evaluated on the doubled grid; the complement is taken at `δ' = δ/4`.
pub fn dc_verdict_dual(
    profile: &PairProfile,
    delta: f64,
    eps_grid: &[f64],
    tol: &Tolerances,
    window: usize,
) -> Result<DualVerdict> {
    let doubled: Vec<f64> = eps_grid.iter().map(|e| 2.0 * e).collect();
    let opts = ClassifyOptions {
        eps_grid: doubled,
        window,
        delta_halvings: 0,
    };
    // the proximity cutoff must cover the doubled grid as well
    let eps_min = opts.eps_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let tol_doubled = Tolerances {
        tau_prox: tol.tau_prox.max(eps_min),
        ..*tol
    };
    let verdict = classify_pair(profile, delta, &tol_doubled, &opts)?;
    let direct = verdict.dc_delta;

    let mut hitting_upper = Vec::with_capacity(eps_grid.len());
    let mut flag = Flag::Holds;
    for &e in eps_grid {
        let hs = hitting_set(profile, DiagonalNeighborhood::new(e)?, false)?;
        let up = hs.relative_density(window)?.upper;
        hitting_upper.push(up);
        flag = flag.and(upper_check(
            &[super::estimate::DistributionalEstimate {
                epsilon: e,
                upper_f: up,
                lower_f: up,
                horizon: profile.len(),
                window,
            }],
            tol.tau_hi,
        ));
    }
    let delta_prime = delta / 4.0;
    let far = hitting_set(profile, DiagonalNeighborhood::with_complement(delta, delta_prime)?, true)?;
    let complement_upper = far.relative_density(window)?.upper;
    // density of far visits ≥ 1 - τ_lo mirrors F ≤ τ_lo
    let mirrored = super::estimate::DistributionalEstimate {
        epsilon: delta_prime,
        upper_f: 1.0 - complement_upper,
        lower_f: 1.0 - complement_upper,
        horizon: profile.len(),
        window,
    };
    flag = flag.and(lower_check(&mirrored, tol.tau_lo));

    let agreement = (direct.is_decided() && flag.is_decided()).then_some(direct == flag);
    Ok(DualVerdict {
        direct,
        via_hitting_sets: flag,
        agreement,
        delta,
        delta_prime,
        eps_grid: eps_grid.to_vec(),
        hitting_upper,
        complement_upper,
        verdict,
    })
}

/// `F*` at `2ε` from the profile, for comparison with the hitting density
/// at `ε`.
pub fn direct_upper_at_double(profile: &PairProfile, eps: f64, window: usize) -> Result<f64> {
    Ok(estimate_f(profile, 2.0 * eps, window)?.upper_f)
}
