use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbit::OrbitCursor;
use crate::space::RealInterval;
use crate::system::MapFamily;

/// Open interval `(lo, hi)`.
pub type OpenInterval = (f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingWitness {
    pub n: u64,
    /// Sample point of `U_1` with `f_0^n(x_1) ∈ V_1`.
    pub x1: f64,
    pub x2: f64,
}

fn check_open(name: &str, iv: OpenInterval, domain: &RealInterval) -> Result<()> {
    let (lo, hi) = iv;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Parameter(format!("{name} = ({lo}, {hi}) is empty")));
    }
    if hi <= domain.lo() || lo >= domain.hi() {
        return Err(Error::Parameter(format!("{name} = ({lo}, {hi}) misses the domain")));
    }
    Ok(())
}

fn inside(iv: OpenInterval, x: f64) -> bool {
    iv.0 < x && x < iv.1
}

/// Least `1 <= n <= horizon` at which a sampled point of `U_1` lands in
/// `V_1` and a sampled point of `U_2` lands in `V_2`. Each `U` is sampled
/// at `sample_density` cell midpoints. `None` means nothing was found and
/// is not a refutation of mixing.
pub fn weak_mixing_probe<S: MapFamily<Space = RealInterval>>(
    system: &S,
    opens: ((OpenInterval, OpenInterval), (OpenInterval, OpenInterval)),
    horizon: u64,
    sample_density: usize,
) -> Result<Option<MixingWitness>> {
    let ((u1, v1), (u2, v2)) = opens;
    let dom = system.space();
    for (name, iv) in [("U1", u1), ("V1", v1), ("U2", u2), ("V2", v2)] {
        check_open(name, iv, dom)?;
    }
    if sample_density == 0 {
        return Err(Error::Parameter("sample density must be positive".into()));
    }
    let samples = |u: OpenInterval| -> Vec<f64> {
        let (lo, hi) = (u.0.max(dom.lo()), u.1.min(dom.hi()));
        let n = sample_density as f64;
        (0..sample_density)
            .map(|k| lo + (k as f64 + 0.5) / n * (hi - lo))
            .collect()
    };
    let s1 = samples(u1);
    let s2 = samples(u2);
    let mut c1 = s1
        .iter()
        .map(|&x| OrbitCursor::new(system, x))
        .collect::<Result<Vec<_>>>()?;
    let mut c2 = s2
        .iter()
        .map(|&x| OrbitCursor::new(system, x))
        .collect::<Result<Vec<_>>>()?;
    for n in 1..=horizon {
        for c in c1.iter_mut().chain(c2.iter_mut()) {
            c.step()?;
        }
        let h1 = c1.iter().position(|c| inside(v1, *c.point()));
        let h2 = c2.iter().position(|c| inside(v2, *c.point()));
        if let (Some(i), Some(j)) = (h1, h2) {
            let w = MixingWitness { n, x1: s1[i], x2: s2[j] };
            // re-iterate the witnesses from scratch
            let mut a = OrbitCursor::new(system, w.x1)?;
            let mut b = OrbitCursor::new(system, w.x2)?;
            let (pa, pb) = (*a.advance_to(n)?, *b.advance_to(n)?);
            debug_assert!(inside(v1, pa) && inside(v2, pb));
            if inside(v1, pa) && inside(v2, pb) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{PiecewiseLinear, Tent};

    #[test]
    fn whole_domain_gives_one() {
        let sys = Tent::new(2.0).unwrap();
        let all = (0.0, 1.0);
        let w = weak_mixing_probe(&sys, ((all, all), (all, all)), 10, 8).unwrap().unwrap();
        assert_eq!(w.n, 1);
    }

    /// Exact oracle: under the slope-2 tent, a dyadic interval of length
    /// `2^-k` maps onto `[0, 1]` after `k` steps.
    #[test]
    fn tent_small_intervals_mix_quickly() {
        let sys = Tent::new(2.0).unwrap();
        let u1 = (0.125, 0.1875);
        let v1 = (0.8, 0.85);
        let u2 = (0.6, 0.65);
        let v2 = (0.05, 0.07);
        let w = weak_mixing_probe(&sys, ((u1, v1), (u2, v2)), 64, 256).unwrap().unwrap();
        assert!(w.n <= 64);
        let (mut a, mut b) = (w.x1, w.x2);
        for k in 0..w.n {
            a = sys.apply(k, &a);
            b = sys.apply(k, &b);
        }
        assert!(inside(v1, a) && inside(v2, b));
    }

    #[test]
    fn invariant_components_never_transit() {
        let sys = PiecewiseLinear::new(vec![(0.0, 0.0), (0.25, 0.5), (0.5, 0.5), (0.75, 1.0), (1.0, 0.5)]).unwrap();
        let r = weak_mixing_probe(&sys, (((0.1, 0.2), (0.6, 0.9)), ((0.6, 0.7), (0.1, 0.2))), 200, 64).unwrap();
        assert_eq!(r, None);
    }

    #[test]
    fn degenerate_intervals_are_rejected() {
        let sys = Tent::new(2.0).unwrap();
        let ok = (0.1, 0.2);
        assert!(weak_mixing_probe(&sys, (((0.3, 0.3), ok), (ok, ok)), 5, 4).is_err());
        assert!(weak_mixing_probe(&sys, ((ok, ok), (ok, (2.0, 3.0))), 5, 4).is_err());
    }
}
