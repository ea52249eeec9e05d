//! The one-sided binary sequence space `Σ₂⁺` with
//! `ρ(α, β) = Σ_i |a_i - b_i| / 2^i` and the shift `σ`.
//!
//! Every [`SymbolSequence`] is a finite prefix followed by a tail rule, with
//! a read offset into each so that shifting is O(1).

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::MetricSpace;
use crate::system::MapFamily;

/// Beyond this many symbols every term of `ρ` is below the smallest
/// subnormal double.
pub const RHO_FLOAT_LIMIT: usize = 1100;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tail {
    Constant(u8),
    Periodic(Arc<[u8]>),
    Lemma213(Lemma213Rule),
}

/// Tail of the `member`-th sequence of [`lemma213_family`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lemma213Rule {
    pub member: u64,
    pub label_bits: u32,
    pub seed: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Lemma213Rule {
    /// Segment `k` covers `[2^{k+1} - 2, 2^{k+2} - 2)`: a label block of
    /// length `2^k` followed by a zero sync block of the same length.
    pub fn segment(t: u64) -> (u32, bool) {
        let k = 63 - (t + 2).leading_zeros() - 1;
        let offset = t + 2 - (1u64 << (k + 1));
        (k, offset < (1u64 << k))
    }

    pub fn bit(&self, t: u64) -> u8 {
        let (_, label) = Self::segment(t);
        if !label {
            return 0;
        }
        let pos = (t % self.label_bits as u64) as u32;
        let own = (self.member >> pos) & 1;
        let mask = splitmix64(self.seed ^ t.wrapping_mul(0xd6e8_feb8_6659_fd93)) & 1;
        (own ^ mask) as u8
    }
}

impl Tail {
    fn bit(&self, t: u64) -> u8 {
        match self {
            Tail::Constant(b) => *b,
            Tail::Periodic(p) => p[(t % p.len() as u64) as usize],
            Tail::Lemma213(rule) => rule.bit(t),
        }
    }

    fn period(&self) -> Option<usize> {
        match self {
            Tail::Constant(_) => Some(1),
            Tail::Periodic(p) => Some(p.len()),
            Tail::Lemma213(_) => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolSequence {
    prefix: Arc<[u8]>,
    start: usize,
    tail: Tail,
    tail_offset: u64,
}

fn check_bits(bits: &[u8]) -> Result<()> {
    match bits.iter().find(|&&b| b > 1) {
        Some(b) => Err(Error::Parameter(format!("symbol {b} is not a binary digit"))),
        None => Ok(()),
    }
}

fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::Parameter(format!("`{c}` is not a binary digit"))),
        })
        .collect()
}

fn bits_to_string(bits: impl IntoIterator<Item = u8>) -> String {
    bits.into_iter().map(|b| if b == 0 { '0' } else { '1' }).collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl SymbolSequence {
    pub fn new(prefix: Vec<u8>, tail: Tail) -> Result<Self> {
        check_bits(&prefix)?;
        match &tail {
            Tail::Constant(b) => check_bits(&[*b])?,
            Tail::Periodic(p) => {
                if p.is_empty() {
                    return Err(Error::Parameter("periodic tail needs a nonempty pattern".into()));
                }
                check_bits(p)?;
            }
            Tail::Lemma213(rule) => {
                if rule.label_bits == 0 || rule.label_bits > 64 {
                    return Err(Error::Parameter("label width must lie in 1..=64".into()));
                }
            }
        }
        Ok(SymbolSequence {
            prefix: prefix.into(),
            start: 0,
            tail,
            tail_offset: 0,
        })
    }

    pub fn constant(bit: u8) -> Result<Self> {
        Self::new(Vec::new(), Tail::Constant(bit))
    }

    pub fn eventually_constant(prefix: Vec<u8>, bit: u8) -> Result<Self> {
        Self::new(prefix, Tail::Constant(bit))
    }

    pub fn periodic(prefix: Vec<u8>, pattern: Vec<u8>) -> Result<Self> {
        Self::new(prefix, Tail::Periodic(pattern.into()))
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    fn prefix_left(&self) -> usize {
        self.prefix.len().saturating_sub(self.start)
    }

    #[inline]
    pub fn bit(&self, i: usize) -> u8 {
        let j = self.start + i;
        if j < self.prefix.len() {
            self.prefix[j]
        } else {
            self.tail.bit(self.tail_offset + (j - self.prefix.len()) as u64)
        }
    }

    pub fn bits(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.bit(i)).collect()
    }

    /// `σ(α)`.
    pub fn shift(&self) -> Self {
        self.shift_by(1)
    }

    pub fn shift_by(&self, n: usize) -> Self {
        let mut s = self.clone();
        let in_prefix = n.min(s.prefix_left());
        s.start += in_prefix;
        s.tail_offset += (n - in_prefix) as u64;
        s
    }

    /// `word` followed by the symbols of `self` from index `from` on.
    pub fn splice(word: &[u8], rest: &SymbolSequence, from: usize) -> Result<Self> {
        check_bits(word)?;
        let r = rest.shift_by(from);
        let mut prefix = word.to_vec();
        prefix.extend_from_slice(&r.prefix[r.start.min(r.prefix.len())..]);
        Ok(SymbolSequence {
            prefix: prefix.into(),
            start: 0,
            tail: r.tail,
            tail_offset: r.tail_offset,
        })
    }

    /// Eventual period, when the tail is constant or periodic.
    pub fn eventual_period(&self) -> Option<usize> {
        self.tail.period()
    }

    /// Canonical JSON form, with the read offsets folded in.
    pub fn to_spec(&self) -> SymbolSpec {
        let prefix = bits_to_string(self.prefix[self.start.min(self.prefix.len())..].iter().copied());
        let tail = match &self.tail {
            Tail::Constant(b) => TailSpec::Constant { bit: *b },
            Tail::Periodic(p) => {
                let k = (self.tail_offset % p.len() as u64) as usize;
                TailSpec::Periodic {
                    pattern: bits_to_string(p[k..].iter().chain(&p[..k]).copied()),
                }
            }
            Tail::Lemma213(rule) => TailSpec::Lemma213 {
                member: rule.member,
                label_bits: rule.label_bits,
                seed: rule.seed,
                offset: self.tail_offset,
            },
        };
        SymbolSpec { prefix, tail }
    }
}

impl fmt::Debug for SymbolSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&describe_sequence(self))
    }
}

fn describe_sequence(s: &SymbolSequence) -> String {
    let spec = s.to_spec();
    match spec.tail {
        TailSpec::Constant { bit } => format!("{}+({bit})", spec.prefix),
        TailSpec::Periodic { pattern } => format!("{}+({pattern})", spec.prefix),
        TailSpec::Lemma213 {
            member,
            label_bits,
            seed,
            offset,
        } => format!("{}+lemma213[j={member} L={label_bits} seed={seed}]@{offset}", spec.prefix),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    #[serde(default)]
    pub prefix: String,
    pub tail: TailSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TailSpec {
    Constant {
        bit: u8,
    },
    Periodic {
        pattern: String,
    },
    Lemma213 {
        member: u64,
        label_bits: u32,
        seed: u64,
        #[serde(default)]
        offset: u64,
    },
}

impl SymbolSpec {
    pub fn build(&self) -> Result<SymbolSequence> {
        let prefix = parse_bits(&self.prefix)?;
        let (tail, offset) = match &self.tail {
            TailSpec::Constant { bit } => (Tail::Constant(*bit), 0),
            TailSpec::Periodic { pattern } => (Tail::Periodic(parse_bits(pattern)?.into()), 0),
            TailSpec::Lemma213 {
                member,
                label_bits,
                seed,
                offset,
            } => (
                Tail::Lemma213(Lemma213Rule {
                    member: *member,
                    label_bits: *label_bits,
                    seed: *seed,
                }),
                *offset,
            ),
        };
        let mut s = SymbolSequence::new(prefix, tail)?;
        s.tail_offset = offset;
        Ok(s)
    }
}

impl Serialize for SymbolSequence {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        self.to_spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymbolSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SymbolSpec::deserialize(d)?
            .build()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoValue {
    pub value: f64,
    pub error_bound: f64,
    /// Both tails were eventually periodic and summed in closed form.
    pub exact: bool,
}

fn weight(i: usize) -> f64 {
    (-(i as f64)).exp2()
}

/// `ρ(α, β)`, in closed form when both tails are eventually periodic and
/// truncated to `depth` symbols otherwise.
pub fn rho(alpha: &SymbolSequence, beta: &SymbolSequence, depth: usize) -> RhoValue {
    if let (Some(pa), Some(pb)) = (alpha.eventual_period(), beta.eventual_period()) {
        let head = alpha.prefix_left().max(beta.prefix_left());
        let period = pa / gcd(pa, pb) * pb;
        if head + period <= RHO_FLOAT_LIMIT {
            let mut h = 0.0;
            for i in 0..head {
                if alpha.bit(i) != beta.bit(i) {
                    h += weight(i);
                }
            }
            let mut c = 0.0;
            for i in head..head + period {
                if alpha.bit(i) != beta.bit(i) {
                    c += weight(i);
                }
            }
            return RhoValue {
                value: h + c / (1.0 - weight(period)),
                error_bound: 0.0,
                exact: true,
            };
        }
        // the rest is below the smallest subnormal
        return RhoValue {
            value: rho_truncated(alpha, beta, RHO_FLOAT_LIMIT),
            error_bound: 0.0,
            exact: true,
        };
    }
    let depth = depth.max(1);
    RhoValue {
        value: rho_truncated(alpha, beta, depth.min(RHO_FLOAT_LIMIT)),
        error_bound: weight(depth - 1),
        exact: false,
    }
}

fn rho_truncated(alpha: &SymbolSequence, beta: &SymbolSequence, depth: usize) -> f64 {
    let mut v = 0.0;
    for i in 0..depth {
        if alpha.bit(i) != beta.bit(i) {
            v += weight(i);
        }
    }
    v
}

/// `Σ₂⁺` as a metric space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolSpace {
    /// Truncation depth for sequences without a closed form.
    pub depth: usize,
    /// Candidate diagonal points are every `2^grid_bits` word, continued by
    /// either sequence.
    pub grid_bits: usize,
}

impl Default for SymbolSpace {
    fn default() -> Self {
        SymbolSpace {
            depth: 64,
            grid_bits: 10,
        }
    }
}

impl SymbolSpace {
    /// Minimum of `max(ρ(α, z), ρ(β, z))` over
    /// `z ∈ {w σ^k α, w σ^k β : w ∈ {0,1}^k}`.
    ///
    /// Setting `w_i` off `a_i = b_i` raises both terms, so only the splits
    /// of the first `k` disagreement positions are enumerated. The grid
    /// contains `α` and `β` themselves, so the result is at most `ρ(α, β)`.
    pub fn diag_grid(&self, alpha: &SymbolSequence, beta: &SymbolSequence) -> f64 {
        let k = self.grid_bits.min(20);
        let diff: Vec<f64> = (0..k)
            .filter(|&i| alpha.bit(i) != beta.bit(i))
            .map(weight)
            .collect();
        let tail = weight(k) * rho(&alpha.shift_by(k), &beta.shift_by(k), self.depth).value;
        let total: f64 = diff.iter().sum();
        let mut best = f64::INFINITY;
        for mask in 0u32..(1 << diff.len()) {
            // x: mass of the positions where w follows β
            let x: f64 = diff
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, w)| w)
                .sum();
            let follow_alpha = x.max(total - x + tail);
            let follow_beta = (x + tail).max(total - x);
            best = best.min(follow_alpha).min(follow_beta);
        }
        best
    }
}

impl MetricSpace for SymbolSpace {
    type Point = SymbolSequence;

    fn distance(&self, a: &SymbolSequence, b: &SymbolSequence) -> f64 {
        rho(a, b, self.depth).value
    }

    fn contains(&self, _p: &SymbolSequence) -> bool {
        true
    }

    fn diameter(&self) -> f64 {
        2.0
    }

    fn diag_distance(&self, a: &SymbolSequence, b: &SymbolSequence) -> f64 {
        self.diag_grid(a, b)
    }

    fn describe(&self, p: &SymbolSequence) -> String {
        describe_sequence(p)
    }
}

/// The shift `σ` as an autonomous system on `Σ₂⁺`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FullShift {
    space: SymbolSpace,
}

impl FullShift {
    pub fn new(space: SymbolSpace) -> Self {
        FullShift { space }
    }
}

impl MapFamily for FullShift {
    type Space = SymbolSpace;

    fn space(&self) -> &SymbolSpace {
        &self.space
    }

    fn apply(&self, _step: u64, x: &SymbolSequence) -> SymbolSequence {
        x.shift()
    }

    fn description(&self) -> String {
        "full shift on two symbols".into()
    }
}

/// `count` sequences, pairwise agreeing and disagreeing infinitely often.
///
/// Member `j` carries, at every position `t` of a label block, bit
/// `t mod L` of `j` (XOR a seed mask shared by all members), where
/// `L = bits(count - 1)`. Sync blocks are zero for everyone. Once label
/// blocks are at least `L` long, any window covering two consecutive
/// blocks holds an agreement and, for distinct members, a disagreement.
pub fn lemma213_family(count: usize, seed: u64) -> Result<Vec<SymbolSequence>> {
    if count < 2 {
        return Err(Error::Parameter(format!("family needs at least 2 members, got {count}")));
    }
    let label_bits = (64 - (count as u64 - 1).leading_zeros()).max(1);
    (0..count as u64)
        .map(|member| {
            SymbolSequence::new(
                Vec::new(),
                Tail::Lemma213(Lemma213Rule {
                    member,
                    label_bits,
                    seed,
                }),
            )
        })
        .collect()
}

/// First index from which every label block is at least `L` long.
pub fn lemma213_settled_index(label_bits: u32) -> u64 {
    let k = 64 - (label_bits as u64).saturating_sub(1).leading_zeros();
    (1u64 << (k + 1)) - 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(prefix: &str, tail: Tail) -> SymbolSequence {
        SymbolSequence::new(parse_bits(prefix).unwrap(), tail).unwrap()
    }

    fn zeros() -> SymbolSequence {
        SymbolSequence::constant(0).unwrap()
    }

    fn ones() -> SymbolSequence {
        SymbolSequence::constant(1).unwrap()
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&zeros(), &zeros(), 10).value, 0.0);
        let r = rho(&zeros(), &ones(), 10);
        assert_eq!(r.value, 2.0);
        assert!(r.exact);
        assert_eq!(rho(&seq("1", Tail::Constant(0)), &zeros(), 10).value, 1.0);
    }

    #[test]
    fn rho_periodic_closed_form() {
        // (01)^∞ vs 0^∞: Σ_{odd i} 2^-i = 2/3
        let a = seq("", Tail::Periodic(vec![0, 1].into()));
        let v = rho(&a, &zeros(), 1).value;
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        // periods 2 and 3 combine with lcm 6
        let b = seq("1", Tail::Periodic(vec![1, 0, 0].into()));
        let direct = rho_truncated(&a, &b, RHO_FLOAT_LIMIT);
        assert!((rho(&a, &b, 1).value - direct).abs() < 1e-15);
    }

    #[test]
    fn rho_truncation_reports_bound() {
        let fam = lemma213_family(2, 1).unwrap();
        let r = rho(&fam[0], &fam[1], 20);
        assert!(!r.exact);
        assert_eq!(r.error_bound, weight(19));
        let deep = rho(&fam[0], &fam[1], 200).value;
        assert!((deep - r.value).abs() <= r.error_bound);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(zeros().shift().bits(5), zeros().bits(5));
        let a = seq("10", Tail::Constant(0));
        let s = a.shift();
        assert_eq!(s.to_spec(), SymbolSpec {
            prefix: "0".into(),
            tail: TailSpec::Constant { bit: 0 },
        });
        let p = seq("1", Tail::Periodic(vec![0, 1, 1].into()));
        let spec = p.shift_by(3).to_spec();
        assert_eq!(spec.prefix, "");
        assert_eq!(spec.tail, TailSpec::Periodic { pattern: "101".into() });
        assert_eq!(spec.build().unwrap().bits(12), p.shift_by(3).bits(12));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"prefix":"0110","tail":{"kind":"periodic","pattern":"01"}}"#;
        let s: SymbolSequence = serde_json::from_str(text).unwrap();
        assert_eq!(s.bits(8), vec![0, 1, 1, 0, 0, 1, 0, 1]);
        assert_eq!(serde_json::to_string(&s).unwrap(), text);
        assert!(serde_json::from_str::<SymbolSequence>(r#"{"prefix":"012","tail":{"kind":"constant","bit":0}}"#).is_err());
        assert!(serde_json::from_str::<SymbolSequence>(r#"{"prefix":"","tail":{"kind":"periodic","pattern":""}}"#).is_err());
    }

    #[test]
    fn lemma213_segments() {
        let labels: Vec<bool> = (0..10).map(|t| Lemma213Rule::segment(t).1).collect();
        assert_eq!(
            labels,
            vec![true, false, true, true, false, false, true, true, true, true]
        );
        assert_eq!(Lemma213Rule::segment(14), (3, true));
        assert_eq!(Lemma213Rule::segment(22), (3, false));
    }

    fn agree_disagree(a: &SymbolSequence, b: &SymbolSequence, n: usize) -> (usize, usize) {
        (0..n).fold((0, 0), |(ag, dis), i| {
            if a.bit(i) == b.bit(i) {
                (ag + 1, dis)
            } else {
                (ag, dis + 1)
            }
        })
    }

    #[test]
    fn lemma213_pair_agrees_and_disagrees() {
        let fam = lemma213_family(2, 7).unwrap();
        let (ag, dis) = agree_disagree(&fam[0], &fam[1], 10_000);
        assert!(ag >= 100 && dis >= 100);
        let (ag, dis) = agree_disagree(&fam[0], &fam[0], 10_000);
        assert_eq!((ag, dis), (10_000, 0));
    }

    #[test]
    fn lemma213_family_of_ten() {
        let fam = lemma213_family(10, 3).unwrap();
        for i in 0..10 {
            for j in i + 1..10 {
                let (ag, dis) = agree_disagree(&fam[i], &fam[j], 10_000);
                assert!(ag >= 100 && dis >= 100, "pair {i},{j}");
            }
        }
        assert!(lemma213_family(1, 0).is_err());
    }

    #[test]
    fn lemma213_window_property() {
        let fam = lemma213_family(10, 11).unwrap();
        let n0 = lemma213_settled_index(4) as usize;
        for i in 0..10 {
            for j in i + 1..10 {
                let mut start = n0;
                while start < 10_000 {
                    let (k, _) = Lemma213Rule::segment(start as u64);
                    let len = 2usize << k;
                    let (ag, dis) = (start..start + len).fold((0, 0), |(ag, dis), t| {
                        if fam[i].bit(t) == fam[j].bit(t) {
                            (ag + 1, dis)
                        } else {
                            (ag, dis + 1)
                        }
                    });
                    assert!(ag > 0 && dis > 0, "pair {i},{j} window at {start}");
                    start += 37;
                }
            }
        }
    }

    fn exhaustive_diag(a: &SymbolSequence, b: &SymbolSequence, k: usize) -> f64 {
        let mut best = f64::INFINITY;
        for w in 0u32..(1 << k) {
            let word: Vec<u8> = (0..k).map(|i| (w >> i & 1) as u8).collect();
            for src in [a, b] {
                let z = SymbolSequence::splice(&word, src, k).unwrap();
                let v = rho(a, &z, 200).value.max(rho(b, &z, 200).value);
                best = best.min(v);
            }
        }
        best
    }

    #[test]
    fn diag_of_constant_sequences() {
        let space = SymbolSpace::default();
        let d = space.diag_distance(&zeros(), &ones());
        assert!((1.0..=2.0).contains(&d));
        let small = SymbolSpace { depth: 64, grid_bits: 6 };
        assert_eq!(small.diag_distance(&zeros(), &ones()), exhaustive_diag(&zeros(), &ones(), 6));
        assert_eq!(space.diag_distance(&zeros(), &zeros()), 0.0);
    }

    fn arb_seq() -> impl Strategy<Value = SymbolSequence> {
        (
            proptest::collection::vec(0u8..2, 0..24),
            proptest::collection::vec(0u8..2, 1..5),
        )
            .prop_map(|(p, t)| SymbolSequence::periodic(p, t).unwrap())
    }

    proptest! {
        #[test]
        fn rho_is_a_metric(a in arb_seq(), b in arb_seq(), c in arb_seq()) {
            let ab = rho(&a, &b, 64).value;
            prop_assert_eq!(ab, rho(&b, &a, 64).value);
            prop_assert_eq!(rho(&a, &a, 64).value, 0.0);
            prop_assert!(ab <= rho(&a, &c, 64).value + rho(&c, &b, 64).value + 1e-12);
            prop_assert!(ab <= 2.0);
            if a.bit(0) != b.bit(0) {
                prop_assert!(ab >= 1.0);
            }
        }

        #[test]
        fn shift_is_two_lipschitz(a in arb_seq(), b in arb_seq()) {
            let before = rho(&a, &b, 64).value;
            let after = rho(&a.shift(), &b.shift(), 64).value;
            prop_assert!(after <= 2.0 * before + 1e-12);
            if a.bit(0) == b.bit(0) {
                prop_assert!((after - 2.0 * before).abs() <= 1e-12);
            }
        }

        #[test]
        fn diag_grid_matches_exhaustive_search(a in arb_seq(), b in arb_seq()) {
            let space = SymbolSpace { depth: 64, grid_bits: 5 };
            let fast = space.diag_distance(&a, &b);
            let slow = exhaustive_diag(&a, &b, 5);
            prop_assert!((fast - slow).abs() <= 1e-12);
            let d = rho(&a, &b, 64).value;
            prop_assert!(d / 2.0 <= fast + 1e-12 && fast <= d + 1e-12);
        }

        #[test]
        fn bits_are_reproducible(member in 0u64..16, seed: u64, t in 0usize..100_000) {
            let fam = lemma213_family(16, seed).unwrap();
            prop_assert_eq!(fam[member as usize].bit(t), fam[member as usize].bit(t));
            prop_assert_eq!(fam[member as usize].shift_by(t).bit(0), fam[member as usize].bit(t));
        }
    }
}
