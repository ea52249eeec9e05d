//! Strictly increasing index sequences and their densities.
//!
//! An [`IndexSequence`] is a materialized prefix plus the rule that
//! generated it. Rule-backed sequences answer `term`, `contains` and
//! `next_after` without materializing anything.

use serde::{Deserialize, Serialize};

use crate::constructors::merge::merge_terms;
use crate::constructors::schedule::full_checkpoint_schedule;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceRule {
    /// Finite; the materialized terms are the whole sequence.
    Explicit,
    /// `start, start + step, start + 2 step, ...`
    Arithmetic { start: u64, step: u64 },
    /// `1, 2^e, 3^e, ...`
    Power { exponent: u32 },
    /// `m_0, m_1, ...` of the checkpoint schedule, as far as `u64` allows.
    Checkpoint,
    /// `n_1 = 1, n_{k+1} = 2k n_k`, as far as `u64` allows.
    MergeSchedule,
    /// The block interleaving of two sequences along the merge schedule.
    Merged {
        p: Box<IndexSequence>,
        q: Box<IndexSequence>,
        k_max: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SequenceSpec", into = "SequenceSpec")]
pub struct IndexSequence {
    terms: Vec<u64>,
    rule: SequenceRule,
}

/// JSON form: a plain array of integers, or a rule object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SequenceSpec {
    Terms(Vec<u64>),
    Rule(RuleSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RuleSpec {
    Arithmetic {
        a: u64,
        step: u64,
    },
    Power {
        exponent: u32,
    },
    Checkpoint {},
    MergeSchedule {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_max: Option<usize>,
    },
    Merged {
        p: Box<SequenceSpec>,
        q: Box<SequenceSpec>,
        k_max: usize,
    },
}

impl TryFrom<SequenceSpec> for IndexSequence {
    type Error = Error;

    fn try_from(spec: SequenceSpec) -> Result<Self> {
        match spec {
            SequenceSpec::Terms(t) => IndexSequence::explicit(t),
            SequenceSpec::Rule(RuleSpec::Arithmetic { a, step }) => IndexSequence::arithmetic(a, step),
            SequenceSpec::Rule(RuleSpec::Power { exponent }) => IndexSequence::powers(exponent),
            SequenceSpec::Rule(RuleSpec::Checkpoint {}) => Ok(IndexSequence::checkpoints()),
            SequenceSpec::Rule(RuleSpec::MergeSchedule { k_max }) => match k_max {
                Some(k) => merge_schedule(k),
                None => merge_schedule(MAX_MERGE_LEN),
            },
            SequenceSpec::Rule(RuleSpec::Merged { p, q, k_max }) => {
                let p = IndexSequence::try_from(*p)?;
                let q = IndexSequence::try_from(*q)?;
                crate::constructors::merge::merge_dc_sequence(&p, &q, k_max).map(|m| m.sequence)
            }
        }
    }
}

impl From<IndexSequence> for SequenceSpec {
    fn from(seq: IndexSequence) -> Self {
        match seq.rule {
            SequenceRule::Explicit => SequenceSpec::Terms(seq.terms),
            SequenceRule::Arithmetic { start, step } => {
                SequenceSpec::Rule(RuleSpec::Arithmetic { a: start, step })
            }
            SequenceRule::Power { exponent } => SequenceSpec::Rule(RuleSpec::Power { exponent }),
            SequenceRule::Checkpoint => SequenceSpec::Rule(RuleSpec::Checkpoint {}),
            SequenceRule::MergeSchedule => SequenceSpec::Rule(RuleSpec::MergeSchedule {
                k_max: Some(seq.terms.len()),
            }),
            SequenceRule::Merged { p, q, k_max } => SequenceSpec::Rule(RuleSpec::Merged {
                p: Box::new((*p).into()),
                q: Box::new((*q).into()),
                k_max,
            }),
        }
    }
}

/// Longest merge schedule whose terms fit in `u64`.
pub const MAX_MERGE_LEN: usize = 17;

fn merge_schedule_terms(k_max: usize) -> Result<Vec<u64>> {
    let mut n = Vec::with_capacity(k_max);
    n.push(1u64);
    for k in 1..k_max {
        let next = (2 * k as u64)
            .checked_mul(n[k - 1])
            .ok_or_else(|| Error::Overflow(format!("n_{} does not fit in u64", k + 1)))?;
        n.push(next);
    }
    Ok(n)
}

/// `(n_1, ..., n_{k_max})` with `n_1 = 1` and `n_{k+1} = 2k n_k`.
pub fn merge_schedule(k_max: usize) -> Result<IndexSequence> {
    if k_max < 1 {
        return Err(Error::Parameter("merge schedule needs k_max >= 1".into()));
    }
    Ok(IndexSequence {
        terms: merge_schedule_terms(k_max)?,
        rule: SequenceRule::MergeSchedule,
    })
}

/// Integer `e`-th root, rounded down.
fn iroot(x: u64, e: u32) -> u64 {
    if e == 1 || x < 2 {
        return x;
    }
    let mut r = (x as f64).powf(1.0 / e as f64) as u64;
    // fix the float estimate in both directions
    while r > 0 && r.checked_pow(e).is_none_or(|v| v > x) {
        r -= 1;
    }
    while (r + 1).checked_pow(e).is_some_and(|v| v <= x) {
        r += 1;
    }
    r
}

impl IndexSequence {
    pub fn explicit(terms: Vec<u64>) -> Result<Self> {
        if let Some(i) = terms.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!(
                "sequence not strictly increasing at position {}: {} then {}",
                i,
                terms[i],
                terms[i + 1]
            )));
        }
        Ok(IndexSequence {
            terms,
            rule: SequenceRule::Explicit,
        })
    }

    pub fn arithmetic(start: u64, step: u64) -> Result<Self> {
        if step == 0 {
            return Err(Error::Parameter("arithmetic step must be positive".into()));
        }
        Ok(IndexSequence {
            terms: Vec::new(),
            rule: SequenceRule::Arithmetic { start, step },
        })
    }

    /// `{1, 2, 3, ...}`.
    pub fn naturals() -> Self {
        Self::arithmetic(1, 1).expect("positive step")
    }

    /// `{0, 1, 2, ...}`, every orbit time.
    pub fn all_times() -> Self {
        Self::arithmetic(0, 1).expect("positive step")
    }

    pub fn powers(exponent: u32) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::Parameter("power sequence needs exponent >= 1".into()));
        }
        Ok(IndexSequence {
            terms: Vec::new(),
            rule: SequenceRule::Power { exponent },
        })
    }

    pub fn checkpoints() -> Self {
        IndexSequence {
            terms: full_checkpoint_schedule(),
            rule: SequenceRule::Checkpoint,
        }
    }

    pub(crate) fn merged(terms: Vec<u64>, p: IndexSequence, q: IndexSequence, k_max: usize) -> Self {
        IndexSequence {
            terms,
            rule: SequenceRule::Merged {
                p: Box::new(p.unmaterialized()),
                q: Box::new(q.unmaterialized()),
                k_max,
            },
        }
    }

    fn unmaterialized(mut self) -> Self {
        if self.generates() {
            self.terms.clear();
        }
        self
    }

    pub fn rule(&self) -> &SequenceRule {
        &self.rule
    }

    pub fn materialized(&self) -> &[u64] {
        &self.terms
    }

    /// Whether terms past the materialized prefix can be computed.
    pub fn generates(&self) -> bool {
        matches!(
            self.rule,
            SequenceRule::Arithmetic { .. } | SequenceRule::Power { .. }
        )
    }

    /// Whether the rule describes an infinite sequence.
    pub fn is_infinite(&self) -> bool {
        self.generates()
    }

    /// Number of terms, for finite sequences.
    pub fn finite_len(&self) -> Option<usize> {
        (!self.generates()).then_some(self.terms.len())
    }

    fn generate(&self, i: usize) -> Option<u64> {
        match self.rule {
            SequenceRule::Arithmetic { start, step } => {
                step.checked_mul(i as u64)?.checked_add(start)
            }
            SequenceRule::Power { exponent } => (i as u64 + 1).checked_pow(exponent),
            _ => None,
        }
    }

    /// The `i`-th term (0-based).
    pub fn term(&self, i: usize) -> Result<u64> {
        if let Some(&t) = self.terms.get(i) {
            return Ok(t);
        }
        if !self.generates() {
            return Err(Error::Extension(format!(
                "term {i} requested from a finite sequence of {} terms",
                self.terms.len()
            )));
        }
        self.generate(i)
            .ok_or_else(|| Error::Overflow(format!("term {i} does not fit in u64")))
    }

    /// The first `n` terms.
    pub fn take(&self, n: usize) -> Result<Vec<u64>> {
        if n <= self.terms.len() {
            return Ok(self.terms[..n].to_vec());
        }
        (0..n).map(|i| self.term(i)).collect()
    }

    /// A copy with the first `n` terms materialized.
    pub fn with_prefix(&self, n: usize) -> Result<Self> {
        if !self.generates() {
            return self.take(n).map(|_| self.clone());
        }
        Ok(IndexSequence {
            terms: self.take(n)?,
            rule: self.rule.clone(),
        })
    }

    pub fn iter(&self) -> Terms<'_> {
        Terms { seq: self, next: 0 }
    }

    /// Membership; exact for every rule.
    pub fn contains(&self, x: u64) -> bool {
        match self.rule {
            SequenceRule::Arithmetic { start, step } => x >= start && (x - start) % step == 0,
            SequenceRule::Power { exponent } => x >= 1 && iroot(x, exponent).pow(exponent) == x,
            _ => self.terms.binary_search(&x).is_ok(),
        }
    }

    /// The least term strictly greater than `x`.
    pub fn next_after(&self, x: u64) -> Option<u64> {
        match self.rule {
            SequenceRule::Arithmetic { start, step } => {
                if x < start {
                    Some(start)
                } else {
                    let k = (x - start) / step + 1;
                    step.checked_mul(k)?.checked_add(start)
                }
            }
            SequenceRule::Power { exponent } => (iroot(x, exponent) + 1).checked_pow(exponent),
            _ => {
                let i = self.terms.partition_point(|&t| t <= x);
                self.terms.get(i).copied()
            }
        }
    }

    /// Recomputes the materialized prefix from the rule alone.
    pub fn regenerate_prefix(&self) -> Result<Vec<u64>> {
        let n = self.terms.len();
        match &self.rule {
            SequenceRule::Explicit => Ok(self.terms.clone()),
            SequenceRule::Arithmetic { .. } | SequenceRule::Power { .. } => {
                (0..n).map(|i| {
                    self.generate(i)
                        .ok_or_else(|| Error::Overflow(format!("term {i} does not fit in u64")))
                })
                .collect()
            }
            SequenceRule::Checkpoint => Ok(full_checkpoint_schedule()[..n].to_vec()),
            SequenceRule::MergeSchedule => merge_schedule_terms(n),
            SequenceRule::Merged { p, q, k_max } => {
                merge_terms(p, q, *k_max).map(|(t, _)| t)
            }
        }
    }
}

pub struct Terms<'a> {
    seq: &'a IndexSequence,
    next: usize,
}

impl Iterator for Terms<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let t = self.seq.term(self.next).ok()?;
        self.next += 1;
        Some(t)
    }
}

/// `upper`/`lower` are the max/min of a running ratio over the trailing
/// window `n ∈ [horizon - window, horizon]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityEstimate {
    pub upper: f64,
    pub lower: f64,
    pub horizon: usize,
    pub window: usize,
}

pub fn default_window(horizon: usize) -> usize {
    horizon / 10
}

pub(crate) fn check_window(horizon: usize, window: usize) -> Result<()> {
    if horizon == 0 {
        return Err(Error::Parameter("horizon must be positive".into()));
    }
    if window > horizon {
        return Err(Error::Parameter(format!(
            "window {window} exceeds horizon {horizon}"
        )));
    }
    Ok(())
}

/// Trailing-window max/min of `(1/n) |P ∩ {q_1, ..., q_n}|`.
pub fn relative_density(
    p: &IndexSequence,
    q: &IndexSequence,
    horizon: usize,
    window: usize,
) -> Result<DensityEstimate> {
    check_window(horizon, window)?;
    if let Some(len) = q.finite_len() {
        if len < horizon {
            return Err(Error::Extension(format!(
                "horizon {horizon} exceeds the {len} materialized terms of Q, which has no generator"
            )));
        }
    }
    let first = (horizon - window).max(1);
    let mut hits = 0u64;
    let mut upper = f64::NEG_INFINITY;
    let mut lower = f64::INFINITY;
    for n in 1..=horizon {
        if p.contains(q.term(n - 1)?) {
            hits += 1;
        }
        if n >= first {
            let r = hits as f64 / n as f64;
            upper = upper.max(r);
            lower = lower.min(r);
        }
    }
    Ok(DensityEstimate {
        upper,
        lower,
        horizon,
        window,
    })
}

/// A block end of [`density_one_witness`] at which `family` reached ratio
/// `hits / horizon >= 1 - 1/k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessCheckpoint {
    pub horizon: usize,
    pub family: usize,
    pub k: u64,
    pub hits: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityWitness {
    pub sequence: IndexSequence,
    pub checkpoints: Vec<WitnessCheckpoint>,
}

pub const DEFAULT_WITNESS_TARGETS: [u64; 2] = [10, 100];
pub const WITNESS_CAP: usize = 1 << 26;

/// A sequence `Q` along which every family has ratio `>= 1 - 1/k` at the
/// end of its own blocks, for each `k` in [`DEFAULT_WITNESS_TARGETS`].
pub fn density_one_witness(families: &[IndexSequence]) -> Result<DensityWitness> {
    density_one_witness_with(families, &DEFAULT_WITNESS_TARGETS, WITNESS_CAP)
}

/// Blocks cycle through the families once per target `k`. Each block is
/// drawn in order from its family, at least twice as long as the previous
/// block, and long enough that the family's running ratio reaches
/// `1 - 1/k` at the block end.
pub fn density_one_witness_with(
    families: &[IndexSequence],
    targets: &[u64],
    cap: usize,
) -> Result<DensityWitness> {
    if families.is_empty() {
        return Err(Error::Parameter("at least one family is required".into()));
    }
    if let Some(&k) = targets.iter().find(|&&k| k < 1) {
        return Err(Error::Parameter(format!("target k = {k} must be >= 1")));
    }
    if let Some(i) = families.iter().position(|f| !f.is_infinite()) {
        return Err(Error::InsufficientSequence(format!(
            "family {i} is finite ({} terms)",
            families[i].materialized().len()
        )));
    }

    let mut q: Vec<u64> = Vec::new();
    let mut hits = vec![0usize; families.len()];
    let mut checkpoints = Vec::new();
    let mut prev_len = 0usize;

    for &k in targets {
        for (f, family) in families.iter().enumerate() {
            let len = q.len() as u128;
            let need = (k as u128 - 1) * len;
            let have = k as u128 * hits[f] as u128;
            let min_len = need.saturating_sub(have) as usize;
            let block = min_len.max(2 * prev_len).max(1);
            if q.len() + block > cap {
                return Err(Error::Capacity {
                    requested: (q.len() + block) as u64,
                    cap: cap as u64,
                });
            }
            let mut last = q.last().copied();
            for _ in 0..block {
                let t = match last {
                    None => family.term(0)?,
                    Some(x) => family.next_after(x).ok_or_else(|| {
                        Error::InsufficientSequence(format!(
                            "family {f} has no term after {x} within u64"
                        ))
                    })?,
                };
                for (g, other) in families.iter().enumerate() {
                    if other.contains(t) {
                        hits[g] += 1;
                    }
                }
                q.push(t);
                last = Some(t);
            }
            prev_len = block;
            checkpoints.push(WitnessCheckpoint {
                horizon: q.len(),
                family: f,
                k,
                hits: hits[f],
                ratio: hits[f] as f64 / q.len() as f64,
            });
        }
    }

    Ok(DensityWitness {
        sequence: IndexSequence::explicit(q)?,
        checkpoints,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CesaroReport {
    pub horizon: usize,
    pub window: usize,
    /// Max of the running means `(1/n) Σ_{i<n} a_i` over the window.
    pub cesaro_mean_tail: f64,
    #[serde(skip)]
    pub exceptional_set: IndexSequence,
    /// Max of `|E ∩ [0, n)| / n` over the window.
    pub exceptional_density: f64,
    /// `2 sqrt(cesaro_mean_tail)`, a proven bound on `exceptional_density`.
    pub density_bound: f64,
    /// Sup of `a_i` off `E` over the window.
    pub residual_limit: f64,
    pub mean_vanishes: bool,
    /// The mean vanishes and `a` vanishes off a sparse `E`.
    pub equivalent: bool,
}

pub const DEFAULT_CESARO_TOLERANCE: f64 = 0.05;

pub fn cesaro_density_equivalence(a: &[f64], horizon: usize, bound: f64) -> Result<CesaroReport> {
    cesaro_density_equivalence_with(
        a,
        horizon,
        bound,
        default_window(horizon),
        DEFAULT_CESARO_TOLERANCE,
    )
}

/// Splits `a` along `E = {i : a_i > θ(i)}` with
/// `θ(i) = max(sqrt(c_{i+1}), 1/sqrt(i+1))`, `c_n` the mean of `a_0..a_{n-1}`.
///
/// For every `n`, `|E ∩ [0, n)| / n <= 2 sqrt(c_n)`: writing `s_j` for the
/// square root of the partial sum at the `j`-th element of `E`, each element
/// adds more than `s_j / sqrt(n)` to the sum, so `s_j - s_{j-1} > 1/(2 sqrt(n))`.
pub fn cesaro_density_equivalence_with(
    a: &[f64],
    horizon: usize,
    bound: f64,
    window: usize,
    tolerance: f64,
) -> Result<CesaroReport> {
    check_window(horizon, window)?;
    if horizon > a.len() {
        return Err(Error::Parameter(format!(
            "horizon {horizon} exceeds the {} supplied values",
            a.len()
        )));
    }
    if !(bound.is_finite() && bound >= 0.0) {
        return Err(Error::Parameter(format!("bound must be finite and nonnegative, got {bound}")));
    }
    let first = (horizon - window).max(1);
    let mut sum = 0.0f64;
    let mut exceptional = Vec::new();
    let mut tail = f64::NEG_INFINITY;
    let mut density = f64::NEG_INFINITY;
    let mut residual = 0.0f64;

    for (i, &v) in a[..horizon].iter().enumerate() {
        if !(v >= 0.0 && v <= bound) {
            return Err(Error::BoundViolation {
                index: i,
                value: v,
                bound,
            });
        }
        sum += v;
        let n = i + 1;
        let mean = sum / n as f64;
        let theta = mean.sqrt().max(1.0 / (n as f64).sqrt());
        let in_e = v > theta;
        if in_e {
            exceptional.push(i as u64);
        } else if n > first {
            residual = residual.max(v);
        }
        if n >= first {
            tail = tail.max(mean);
            density = density.max(exceptional.len() as f64 / n as f64);
        }
    }

    let mean_vanishes = tail <= tolerance;
    Ok(CesaroReport {
        horizon,
        window,
        cesaro_mean_tail: tail,
        exceptional_set: IndexSequence::explicit(exceptional)?,
        exceptional_density: density,
        density_bound: 2.0 * tail.sqrt(),
        residual_limit: residual,
        mean_vanishes,
        equivalent: mean_vanishes && density <= tolerance && residual <= tolerance,
    })
}
