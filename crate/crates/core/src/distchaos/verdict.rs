use serde::Serialize;

use super::estimate::{estimate_f, DistributionalEstimate};
use super::profile::PairProfile;
use crate::error::{Error, Result};
use crate::sequence::{check_window, default_window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    Holds,
    Fails,
    Undecided,
}

impl Flag {
    /// `holds` at or below `holds_at`, `fails` above `fails_above`.
    fn at_most(value: f64, holds_at: f64, fails_above: f64) -> Flag {
        if value <= holds_at {
            Flag::Holds
        } else if value > fails_above {
            Flag::Fails
        } else {
            Flag::Undecided
        }
    }

    /// `holds` at or above `holds_at`, `fails` below `fails_below`.
    fn at_least(value: f64, holds_at: f64, fails_below: f64) -> Flag {
        if value >= holds_at {
            Flag::Holds
        } else if value < fails_below {
            Flag::Fails
        } else {
            Flag::Undecided
        }
    }

    pub fn and(self, other: Flag) -> Flag {
        match (self, other) {
            (Flag::Fails, _) | (_, Flag::Fails) => Flag::Fails,
            (Flag::Holds, Flag::Holds) => Flag::Holds,
            _ => Flag::Undecided,
        }
    }

    pub fn or(self, other: Flag) -> Flag {
        match (self, other) {
            (Flag::Holds, _) | (_, Flag::Holds) => Flag::Holds,
            (Flag::Fails, Flag::Fails) => Flag::Fails,
            _ => Flag::Undecided,
        }
    }

    pub fn negate(self) -> Flag {
        match self {
            Flag::Holds => Flag::Fails,
            Flag::Fails => Flag::Holds,
            Flag::Undecided => Flag::Undecided,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Flag::Undecided
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Holds => "holds",
            Flag::Fails => "fails",
            Flag::Undecided => "undecided",
        }
    }
}

/// `tau_hi`/`tau_lo` bound `1 - F*` and `F`; `tau_prox` is the distance
/// below which orbits count as having come together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub tau_hi: f64,
    pub tau_lo: f64,
    pub tau_prox: f64,
}

impl Tolerances {
    pub fn new(tau_hi: f64, tau_lo: f64, tau_prox: f64) -> Self {
        Tolerances {
            tau_hi,
            tau_lo,
            tau_prox,
        }
    }
}

pub const DEFAULT_EPS_FRACTIONS: [f64; 4] = [0.2, 0.1, 0.05, 0.01];

/// `{0.2, 0.1, 0.05, 0.01} · diam`.
pub fn default_eps_grid(diameter: f64) -> Vec<f64> {
    DEFAULT_EPS_FRACTIONS.iter().map(|f| f * diameter).collect()
}

/// Shared settings of [`classify_pair`] and the dual verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyOptions {
    pub eps_grid: Vec<f64>,
    pub window: usize,
    /// How many halvings `δ 2^-k` to try for `dc_pair`.
    pub delta_halvings: u32,
}

impl ClassifyOptions {
    pub fn for_profile(profile: &PairProfile) -> Self {
        ClassifyOptions {
            eps_grid: default_eps_grid(profile.diameter),
            window: default_window(profile.len()),
            delta_halvings: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub proximal: Flag,
    pub asymptotic: Flag,
    pub distal: Flag,
    pub li_yorke: Flag,
    pub li_yorke_delta: Flag,
    pub dc_pair: Flag,
    pub dc_delta: Flag,
    pub delta: f64,
    /// The `δ' = δ 2^-k` at which `dc_pair` was decided, if it holds.
    pub dc_pair_delta: Option<f64>,
    pub tolerances: Tolerances,
    pub horizon: usize,
    pub window: usize,
    /// Min and max distance over `[⌊(H - w)/2⌋, H)`.
    pub min_distance: f64,
    pub max_distance: f64,
    /// One per grid `ε`.
    pub upper: Vec<DistributionalEstimate>,
    /// At `δ`.
    pub lower: DistributionalEstimate,
}

fn validate(profile: &PairProfile, delta: f64, tol: &Tolerances, opts: &ClassifyOptions) -> Result<()> {
    if profile.is_empty() {
        return Err(Error::Parameter("empty profile".into()));
    }
    check_window(profile.len(), opts.window)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Parameter(format!("delta must be positive, got {delta}")));
    }
    for (name, t) in [("tau_hi", tol.tau_hi), ("tau_lo", tol.tau_lo)] {
        if !(t > 0.0 && t < 0.5) {
            return Err(Error::Parameter(format!("{name} must lie in (0, 1/2), got {t}")));
        }
    }
    if opts.eps_grid.is_empty() || opts.eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Parameter("epsilon grid must be nonempty and positive".into()));
    }
    let eps_min = opts.eps_grid.iter().copied().fold(f64::INFINITY, f64::min);
    if tol.tau_prox < eps_min {
        return Err(Error::Parameter(format!(
            "tau_prox {} is below the smallest grid epsilon {eps_min}",
            tol.tau_prox
        )));
    }
    if delta <= 2.0 * tol.tau_prox {
        return Err(Error::Parameter(format!(
            "delta {delta} must exceed 2 tau_prox = {}",
            2.0 * tol.tau_prox
        )));
    }
    Ok(())
}

/// `F*(ε) ≥ 1 - τ_hi` at every grid `ε`.
pub(crate) fn upper_check(upper: &[DistributionalEstimate], tau_hi: f64) -> Flag {
    upper
        .iter()
        .map(|e| Flag::at_least(e.upper_f, 1.0 - tau_hi, 1.0 - 2.0 * tau_hi))
        .fold(Flag::Holds, Flag::and)
}

/// `F(δ) ≤ τ_lo`.
pub(crate) fn lower_check(lower: &DistributionalEstimate, tau_lo: f64) -> Flag {
    Flag::at_most(lower.lower_f, tau_lo, 2.0 * tau_lo)
}

/// Three-valued relation flags of one pair.
///
/// Distance flags read the tail `[⌊(H - w)/2⌋, H)` of the profile: any `n`
/// in the estimator window sees at least half of its prefix there, so a
/// decided `dc` flag forces a decided proximal and non-asymptotic pair.
/// Parameters are validated so that `tau_prox` covers the smallest grid
/// `ε` and `δ > 2 tau_prox`.
pub fn classify_pair(
    profile: &PairProfile,
    delta: f64,
    tol: &Tolerances,
    opts: &ClassifyOptions,
) -> Result<PairVerdict> {
    validate(profile, delta, tol, opts)?;
    let h = profile.len();
    let w = opts.window;
    let tail = &profile.distances[(h - w) / 2..h];
    let min_d = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let max_d = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tp = tol.tau_prox;

    let proximal = Flag::at_most(min_d, tp, 2.0 * tp);
    let asymptotic = Flag::at_most(max_d, tp, 2.0 * tp);
    let distal = if min_d >= delta {
        Flag::Holds
    } else if proximal == Flag::Holds || min_d < delta / 2.0 {
        Flag::Fails
    } else {
        Flag::Undecided
    };
    let li_yorke = proximal.and(asymptotic.negate());
    let beyond_delta = Flag::at_least(max_d, delta.next_up(), delta / 2.0);
    let li_yorke_delta = proximal.and(beyond_delta);

    let upper = opts
        .eps_grid
        .iter()
        .map(|&e| estimate_f(profile, e, w))
        .collect::<Result<Vec<_>>>()?;
    let up = upper_check(&upper, tol.tau_hi);
    let lower = estimate_f(profile, delta, w)?;
    let dc_delta = up.and(lower_check(&lower, tol.tau_lo));

    let mut dc_pair = dc_delta;
    let mut dc_pair_delta = (dc_delta == Flag::Holds).then_some(delta);
    let mut d = delta;
    for _ in 0..opts.delta_halvings {
        if dc_pair == Flag::Holds {
            break;
        }
        d /= 2.0;
        if d <= 2.0 * tp {
            break;
        }
        let f = up.and(lower_check(&estimate_f(profile, d, w)?, tol.tau_lo));
        dc_pair = dc_pair.or(f);
        if f == Flag::Holds {
            dc_pair_delta = Some(d);
        }
    }

    Ok(PairVerdict {
        proximal,
        asymptotic,
        distal,
        li_yorke,
        li_yorke_delta,
        dc_pair,
        dc_delta,
        delta,
        dc_pair_delta,
        tolerances: *tol,
        horizon: h,
        window: w,
        min_distance: min_d,
        max_distance: max_d,
        upper,
        lower,
    })
}

/// The flag-level implications that every verdict must satisfy; returns
/// the violated ones.
pub fn consistency_violations(v: &PairVerdict) -> Vec<&'static str> {
    let mut out = Vec::new();
    if v.asymptotic == Flag::Holds && v.proximal != Flag::Holds {
        out.push("asymptotic without proximal");
    }
    if v.distal == Flag::Holds && v.proximal != Flag::Fails {
        out.push("distal without non-proximal");
    }
    if v.dc_pair == Flag::Holds
        && (v.proximal != Flag::Holds || v.asymptotic != Flag::Fails || v.li_yorke != Flag::Holds)
    {
        out.push("dc pair without li-yorke");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn profile(d: Vec<f64>) -> PairProfile {
        PairProfile::from_distances((0..d.len() as u64).collect(), d, 1.0).unwrap()
    }

    fn tol() -> Tolerances {
        Tolerances::new(0.05, 0.05, 0.01)
    }

    fn classify(d: Vec<f64>, delta: f64) -> PairVerdict {
        let p = profile(d);
        let opts = ClassifyOptions::for_profile(&p);
        classify_pair(&p, delta, &tol(), &opts).unwrap()
    }

    #[test]
    fn equal_points_are_asymptotic() {
        let v = classify(vec![0.0; 1000], 0.3);
        assert_eq!(v.asymptotic, Flag::Holds);
        assert_eq!(v.proximal, Flag::Holds);
        assert_eq!(v.li_yorke, Flag::Fails);
        assert_eq!(v.dc_pair, Flag::Fails);
    }

    #[test]
    fn separated_fixed_points_are_distal() {
        let v = classify(vec![0.75; 1000], 0.3);
        assert_eq!(v.distal, Flag::Holds);
        assert_eq!(v.proximal, Flag::Fails);
        assert_eq!(v.li_yorke, Flag::Fails);
    }

    #[test]
    fn alternating_blocks_are_dc() {
        // long blocks of 0 and 1 with growing lengths
        let mut d = Vec::new();
        let mut len = 1usize;
        let mut val = 0.0;
        while d.len() < 200_000 {
            d.extend(std::iter::repeat_n(val, len));
            len *= 40;
            val = 1.0 - val;
        }
        // ends inside a zero block: [1, 40, 1600, 64000, ...]
        let h = d.len();
        let p = profile(d);
        let opts = ClassifyOptions {
            window: h - 65_641 / 2,
            ..ClassifyOptions::for_profile(&p)
        };
        let v = classify_pair(&p, 0.3, &tol(), &opts).unwrap();
        assert_eq!(v.dc_delta, Flag::Holds, "{v:?}");
        assert_eq!(v.dc_pair, Flag::Holds);
        assert_eq!(v.li_yorke, Flag::Holds);
        assert!(consistency_violations(&v).is_empty());
    }

    #[test]
    fn parameter_validation() {
        let p = profile(vec![0.5; 10]);
        let mut opts = ClassifyOptions::for_profile(&p);
        assert!(classify_pair(&p, 0.01, &tol(), &opts).is_err());
        assert!(classify_pair(&p, 0.3, &Tolerances::new(0.6, 0.05, 0.01), &opts).is_err());
        assert!(classify_pair(&p, 0.3, &Tolerances::new(0.05, 0.05, 0.001), &opts).is_err());
        opts.window = 11;
        assert!(classify_pair(&p, 0.3, &tol(), &opts).is_err());
    }

    #[test]
    fn flag_algebra() {
        assert_eq!(Flag::Holds.and(Flag::Undecided), Flag::Undecided);
        assert_eq!(Flag::Fails.and(Flag::Undecided), Flag::Fails);
        assert_eq!(Flag::Holds.or(Flag::Undecided), Flag::Holds);
        assert_eq!(Flag::Fails.or(Flag::Undecided), Flag::Undecided);
        assert_eq!(Flag::Undecided.negate(), Flag::Undecided);
    }

    proptest! {
        #[test]
        fn flags_are_consistent_on_random_profiles(
            blocks in proptest::collection::vec((0.0f64..1.0, 1usize..400), 1..30),
            delta in 0.021f64..0.9,
        ) {
            let d: Vec<f64> = blocks.iter().flat_map(|&(v, n)| std::iter::repeat_n(v * v * v, n)).collect();
            let v = classify(d, delta);
            prop_assert!(consistency_violations(&v).is_empty(), "{:?}", v);
        }
    }
}
