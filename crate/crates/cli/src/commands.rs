use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ndschaos::constructors::{
    binary_index_points, build_aapo, build_dc_pair_expanding, check_structure, checkpoint_schedule,
    concatenation_tracer, merge_dc_sequence, van_der_corput_points, verify_aapo, verify_average_shadowing,
    weak_mixing_probe, CheckpointSchedule, Source,
};
use ndschaos::distchaos::{
    classify_pair, dc_verdict_dual, default_eps_grid, fraction_at, pair_profile, scan_pairs, ClassifyOptions,
    PairProfile, ScanOptions, ScanRow, Tolerances,
};
use ndschaos::gallery::AnySystem;
use ndschaos::sequence::{
    cesaro_density_equivalence_with, default_window, density_one_witness_with, relative_density,
    DEFAULT_CESARO_TOLERANCE, DEFAULT_WITNESS_TARGETS, WITNESS_CAP,
};
use ndschaos::symbolic::SymbolSequence;
use ndschaos::system::PointOf;
use ndschaos::{fmt_f64, orbit_at_indices, Error, MapFamily, MetricSpace, Result};

use crate::config::*;
use crate::output::{flag_cells, Report};

/// Settings that are not part of the config file.
#[derive(Debug, Clone, Copy)]
pub struct Globals {
    pub threads: usize,
    pub seed: Option<u64>,
}

fn fmt_grid(grid: &[f64]) -> String {
    grid.iter().map(|&e| fmt_f64(e)).collect::<Vec<_>>().join(";")
}

fn symbol(spec: &ndschaos::symbolic::SymbolSpec) -> Result<SymbolSequence> {
    spec.build().map_err(|e| Error::Config(e.to_string()))
}

fn classify_options(
    eps_grid: &Option<Vec<f64>>,
    window: Option<usize>,
    horizon: usize,
    diameter: f64,
) -> ClassifyOptions {
    ClassifyOptions {
        eps_grid: eps_grid.clone().unwrap_or_else(|| default_eps_grid(diameter)),
        window: window.unwrap_or_else(|| default_window(horizon)),
        delta_halvings: 8,
    }
}

fn echo_classify(r: &mut Report, opts: &ClassifyOptions, delta: f64, tol: &Tolerances) {
    r.param("window", opts.window);
    r.param("eps_grid", fmt_grid(&opts.eps_grid));
    r.param("delta", fmt_f64(delta));
    r.param("delta_halvings", opts.delta_halvings);
    r.param("tau_hi", fmt_f64(tol.tau_hi));
    r.param("tau_lo", fmt_f64(tol.tau_lo));
    r.param("tau_prox", fmt_f64(tol.tau_prox));
}

pub fn orbit(cfg: &OrbitConfig, r: &mut Report) -> Result<()> {
    let sys = cfg.system.resolve()?;
    let idx = index_terms(&cfg.indices, cfg.horizon)?;
    r.param("system", sys.system.description());
    r.param("horizon", cfg.horizon);
    r.columns(&["n", "x"]);
    match &sys.system {
        AnySystem::Real(s) => orbit_rows(s, cfg.x0.real()?, &idx, r),
        AnySystem::Shift(s) => orbit_rows(s, cfg.x0.symbol()?, &idx, r),
    }
}

fn orbit_rows<S: MapFamily>(s: &S, x0: PointOf<S>, idx: &[u64], r: &mut Report) -> Result<()> {
    let pts = orbit_at_indices(s, x0, idx)?;
    for (n, p) in idx.iter().zip(&pts) {
        r.row(vec![n.to_string(), s.space().describe(p)]);
    }
    Ok(())
}

pub fn pair_stats(cfg: &PairStatsConfig, r: &mut Report) -> Result<()> {
    let sys = cfg.system.resolve()?;
    let idx = index_terms(&cfg.indices, cfg.horizon)?;
    let profile = match &sys.system {
        AnySystem::Real(s) => pair_profile(s, cfg.x.real()?, cfg.y.real()?, &idx)?,
        AnySystem::Shift(s) => pair_profile(s, cfg.x.symbol()?, cfg.y.symbol()?, &idx)?,
    };
    let opts = classify_options(&cfg.eps_grid, cfg.window, profile.len(), profile.diameter);
    let tol = cfg.tolerances.resolve(profile.diameter, &opts.eps_grid);
    r.param("system", sys.system.description());
    r.param("horizon", cfg.horizon);
    echo_classify(r, &opts, cfg.delta, &tol);
    r.param("dual", cfg.dual);
    pair_stats_rows(&profile, cfg, &opts, &tol, r)
}

const FLAG_COLUMNS: [&str; 7] = [
    "proximal",
    "asymptotic",
    "distal",
    "li_yorke",
    "li_yorke_delta",
    "dc_pair",
    "dc_delta",
];

fn pair_stats_rows(
    profile: &PairProfile,
    cfg: &PairStatsConfig,
    opts: &ClassifyOptions,
    tol: &Tolerances,
    r: &mut Report,
) -> Result<()> {
    let v = classify_pair(profile, cfg.delta, tol, opts)?;
    let dual = if cfg.dual {
        Some(dc_verdict_dual(profile, cfg.delta, &opts.eps_grid, tol, opts.window)?)
    } else {
        None
    };
    let mut cols: Vec<&str> = vec!["x", "y", "horizon", "window", "eps", "upper_F", "lower_F", "delta", "lower_F_delta"];
    cols.extend(FLAG_COLUMNS);
    cols.extend(["dc_pair_delta", "min_distance", "max_distance"]);
    if dual.is_some() {
        cols.extend([
            "dual_direct",
            "dual_hitting",
            "dual_agreement",
            "hitting_upper",
            "complement_upper",
            "delta_prime",
        ]);
    }
    r.columns(&cols);
    let flags = flag_cells(&[
        v.proximal,
        v.asymptotic,
        v.distal,
        v.li_yorke,
        v.li_yorke_delta,
        v.dc_pair,
        v.dc_delta,
    ]);
    for (k, up) in v.upper.iter().enumerate() {
        let mut row = vec![
            profile.x.clone(),
            profile.y.clone(),
            v.horizon.to_string(),
            v.window.to_string(),
            fmt_f64(up.epsilon),
            fmt_f64(up.upper_f),
            fmt_f64(up.lower_f),
            fmt_f64(v.delta),
            fmt_f64(v.lower.lower_f),
        ];
        row.extend(flags.iter().cloned());
        row.push(v.dc_pair_delta.map(fmt_f64).unwrap_or_default());
        row.push(fmt_f64(v.min_distance));
        row.push(fmt_f64(v.max_distance));
        if let Some(d) = &dual {
            row.extend([
                d.direct.as_str().to_string(),
                d.via_hitting_sets.as_str().to_string(),
                d.agreement.map(|a| a.to_string()).unwrap_or_else(|| "undecided".into()),
                fmt_f64(d.hitting_upper[k]),
                fmt_f64(d.complement_upper),
                fmt_f64(d.delta_prime),
            ]);
        }
        r.row(row);
    }
    Ok(())
}

fn random_reals(domain: &ndschaos::RealInterval, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(domain.lo()..domain.hi())).collect()
}

/// Eventually periodic sequences with a random 8-bit prefix and a random
/// pattern of length 1 to 8.
fn random_sequences(n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<SymbolSequence>> {
    (0..n)
        .map(|_| {
            let prefix: Vec<u8> = (0..8).map(|_| rng.gen_range(0..2u8)).collect();
            let len = rng.gen_range(1..=8usize);
            let pattern: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2u8)).collect();
            SymbolSequence::periodic(prefix, pattern)
        })
        .collect()
}

pub fn scan(cfg: &ScanConfig, g: &Globals, r: &mut Report) -> Result<()> {
    let sys = cfg.system.resolve()?;
    let idx = index_terms(&cfg.indices, cfg.horizon)?;
    let seed = g.seed.or(cfg.seed);
    let opts = classify_options(&cfg.eps_grid, cfg.window, idx.len(), sys.system.diameter());
    let tol = cfg.tolerances.resolve(sys.system.diameter(), &opts.eps_grid);
    r.param("system", sys.system.description());
    r.param("horizon", cfg.horizon);
    echo_classify(r, &opts, cfg.delta, &tol);
    let rng = match (&cfg.sample, seed) {
        (SampleSpec::Random { .. }, None) => {
            return Err(Error::Config("a random sample needs a seed (--seed or \"seed\")".into()))
        }
        (_, Some(s)) => {
            r.param("seed", s);
            Some(ChaCha8Rng::seed_from_u64(s))
        }
        (_, None) => None,
    };
    let scan_opts = ScanOptions {
        delta: cfg.delta,
        tolerances: tol,
        classify: Some(opts),
        threads: g.threads,
    };
    let rows = match &sys.system {
        AnySystem::Real(s) => {
            let sample = match &cfg.sample {
                SampleSpec::Points(p) => p.iter().map(PointValue::real).collect::<Result<Vec<_>>>()?,
                SampleSpec::Random { random } => random_reals(s.space(), *random, &mut rng.expect("seeded")),
            };
            scan_pairs(s, &sample, &idx, &scan_opts)?
        }
        AnySystem::Shift(s) => {
            let sample = match &cfg.sample {
                SampleSpec::Points(p) => p.iter().map(PointValue::symbol).collect::<Result<Vec<_>>>()?,
                SampleSpec::Random { random } => random_sequences(*random, &mut rng.expect("seeded"))?,
            };
            scan_pairs(s, &sample, &idx, &scan_opts)?
        }
    };
    // a parameter error shows up on every row; report it once instead
    if let Some(Err(e)) = rows.first().map(|r| &r.verdict) {
        if rows.iter().all(|r| r.verdict.as_ref().err() == Some(e)) {
            return Err(Error::Parameter(e.clone()));
        }
    }
    r.columns(&ScanRow::HEADER);
    for row in &rows {
        r.row(row.fields());
    }
    Ok(())
}

/// Horizons `10, 100, ...` below `horizon`, then `horizon` itself.
fn decades(horizon: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(10usize), |h| h.checked_mul(10))
        .take_while(|&h| h < horizon)
        .collect();
    out.push(horizon);
    out
}

fn squares_synthetic(n: usize) -> Vec<f64> {
    let mut next_root = 0usize;
    (0..n)
        .map(|i| {
            if next_root * next_root == i {
                next_root += 1;
                1.0
            } else {
                1.0 / (i as f64 + 1.0)
            }
        })
        .collect()
}

pub fn density(cfg: &DensityConfig, r: &mut Report) -> Result<()> {
    match cfg {
        DensityConfig::Relative { p, q, horizon, window } => {
            r.param("kind", "relative");
            r.param("horizon", horizon);
            if let Some(w) = window {
                r.param("window", w);
            }
            r.columns(&["horizon", "window", "upper", "lower"]);
            for h in decades(*horizon) {
                let w = window.map(|w| w.min(h)).unwrap_or_else(|| default_window(h));
                let d = relative_density(p, q, h, w)?;
                r.row(vec![h.to_string(), w.to_string(), fmt_f64(d.upper), fmt_f64(d.lower)]);
            }
        }
        DensityConfig::Witness { families, targets, cap } => {
            let targets = targets.clone().unwrap_or_else(|| DEFAULT_WITNESS_TARGETS.to_vec());
            let cap = cap.unwrap_or(WITNESS_CAP);
            r.param("kind", "witness");
            r.param("families", families.len());
            r.param(
                "targets",
                targets.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
            );
            r.param("cap", cap);
            let w = density_one_witness_with(families, &targets, cap)?;
            r.columns(&["horizon", "family", "k", "hits", "ratio", "recheck"]);
            for c in &w.checkpoints {
                // independent pass over the finished sequence
                let again = relative_density(&families[c.family], &w.sequence, c.horizon, 0)?.upper;
                r.row(vec![
                    c.horizon.to_string(),
                    c.family.to_string(),
                    c.k.to_string(),
                    c.hits.to_string(),
                    fmt_f64(c.ratio),
                    fmt_f64(again),
                ]);
            }
        }
        DensityConfig::Cesaro {
            values,
            horizon,
            bound,
            window,
            tolerance,
        } => {
            let a = match values {
                CesaroValues::Explicit(v) => v.clone(),
                CesaroValues::Named(n) if n == "squares" => squares_synthetic(*horizon),
                CesaroValues::Named(n) => return Err(Error::Config(format!("unknown value family `{n}`"))),
            };
            let window = window.unwrap_or_else(|| default_window(*horizon));
            let tolerance = tolerance.unwrap_or(DEFAULT_CESARO_TOLERANCE);
            r.param("kind", "cesaro");
            r.param("horizon", horizon);
            r.param("window", window);
            r.param("bound", fmt_f64(*bound));
            r.param("tolerance", fmt_f64(tolerance));
            let rep = cesaro_density_equivalence_with(&a, *horizon, *bound, window, tolerance)?;
            r.columns(&[
                "horizon",
                "window",
                "cesaro_mean_tail",
                "exceptional_density",
                "density_bound",
                "residual_limit",
                "mean_vanishes",
                "equivalent",
            ]);
            r.row(vec![
                rep.horizon.to_string(),
                rep.window.to_string(),
                fmt_f64(rep.cesaro_mean_tail),
                fmt_f64(rep.exceptional_density),
                fmt_f64(rep.density_bound),
                fmt_f64(rep.residual_limit),
                rep.mean_vanishes.to_string(),
                rep.equivalent.to_string(),
            ]);
        }
    }
    Ok(())
}

fn default_checkpoints(schedule: &CheckpointSchedule, max: u64) -> Vec<u64> {
    schedule.values()[1..].iter().copied().filter(|&m| m <= max).collect()
}

pub fn aapo(cfg: &AapoConfig, r: &mut Report) -> Result<()> {
    let sys = cfg.system.resolve()?;
    let gallery = sys
        .gallery
        .as_ref()
        .ok_or_else(|| Error::Config("construct aapo needs a gallery system with a separated pair".into()))?;
    let schedule = checkpoint_schedule(cfg.depth)?;
    let code = symbol(&cfg.code)?;
    let checkpoints = cfg
        .checkpoints
        .clone()
        .unwrap_or_else(|| default_checkpoints(&schedule, cfg.horizon));
    if cfg.horizon >= schedule.last() {
        return Err(Error::Schedule(format!(
            "horizon {} needs a schedule past m_{} = {}",
            cfg.horizon,
            cfg.depth,
            schedule.last()
        )));
    }
    let blocks = schedule.block_of(cfg.horizon).unwrap_or(0) + 1;
    let base = cfg.base_points.unwrap_or(blocks);
    r.param("system", gallery.id.as_str());
    r.param("depth", cfg.depth);
    r.param("horizon", cfg.horizon);
    r.param("base_points", base);
    r.param("tracer", cfg.tracer);
    r.columns(&["checkpoint", "block", "aapo", "shadowing"]);
    let (aapo, shadow) = match &gallery.system {
        AnySystem::Real(s) => {
            if cfg.tracer {
                return Err(Error::Config("the concatenation tracer exists only on the full shift".into()));
            }
            let pair = gallery.real_pair()?;
            let e = van_der_corput_points(s.space(), base);
            let po = build_aapo(s, &pair, &code, &e, &schedule, cfg.horizon)?;
            if !check_structure(&po, s)? {
                return Err(Error::Precondition("pseudo-orbit blocks do not follow their sources".into()));
            }
            (verify_aapo(&po.points, s, &checkpoints)?, None)
        }
        AnySystem::Shift(s) => {
            let pair = gallery.shift_pair()?;
            let e = binary_index_points(base)?;
            let po = build_aapo(s, &pair, &code, &e, &schedule, cfg.horizon)?;
            if !check_structure(&po, s)? {
                return Err(Error::Precondition("pseudo-orbit blocks do not follow their sources".into()));
            }
            let a = verify_aapo(&po.points, s, &checkpoints)?;
            let t = if cfg.tracer {
                let y = concatenation_tracer(&po)?;
                Some(verify_average_shadowing(&po.points, y, s, &checkpoints)?)
            } else {
                None
            };
            (a, t)
        }
    };
    for (k, &n) in checkpoints.iter().enumerate() {
        r.row(vec![
            n.to_string(),
            schedule.block_of(n).map(|b| b.to_string()).unwrap_or_default(),
            fmt_f64(aapo[k]),
            shadow.as_ref().map(|t| fmt_f64(t[k])).unwrap_or_default(),
        ]);
    }
    Ok(())
}

pub fn expanding(cfg: &ExpandingConfig, r: &mut Report) -> Result<()> {
    let sys = cfg.system.resolve()?;
    let gallery = sys
        .gallery
        .as_ref()
        .ok_or_else(|| Error::Config("construct expanding needs a gallery system with a nested family".into()))?;
    let family = gallery
        .nested
        .as_ref()
        .ok_or_else(|| Error::Config(format!("gallery system `{}` has no nested family", gallery.id)))?;
    let system = gallery
        .real()
        .ok_or_else(|| Error::Config("construct expanding needs a real system".into()))?;
    let alpha = symbol(&cfg.alpha)?;
    let beta = symbol(&cfg.beta)?;
    let (x, y) = build_dc_pair_expanding(family, system, &alpha, &beta, cfg.depth)?;
    let delta = family.delta(cfg.depth)?;
    let grid = cfg
        .eps_grid
        .clone()
        .unwrap_or_else(|| default_eps_grid(system.space().diameter()));
    let schedule = checkpoint_schedule(ndschaos::constructors::schedule::MAX_CHECKPOINT_DEPTH)?;
    let checkpoints = cfg
        .checkpoints
        .clone()
        .unwrap_or_else(|| default_checkpoints(&schedule, cfg.depth));
    if let Some(&n) = checkpoints.iter().find(|&&n| n == 0 || n > cfg.depth) {
        return Err(Error::Parameter(format!("checkpoint {n} outside 1..={}", cfg.depth)));
    }
    let idx: Vec<u64> = (0..cfg.depth).collect();
    let profile = pair_profile(system, x.x, y.x, &idx)?;
    let cp: Vec<usize> = checkpoints.iter().map(|&n| n as usize).collect();

    r.param("system", gallery.id.as_str());
    r.param("alpha", serde_json::to_string(&cfg.alpha).expect("spec serializes"));
    r.param("beta", serde_json::to_string(&cfg.beta).expect("spec serializes"));
    r.param("depth", cfg.depth);
    r.param("eps_grid", fmt_grid(&grid));
    r.param("delta", fmt_f64(delta));
    r.param("x", fmt_f64(x.x));
    r.param("y", fmt_f64(y.x));
    r.param("max_excursion", fmt_f64(x.max_excursion.max(y.max_excursion)));
    r.columns(&["checkpoint", "block", "agree", "role", "eps", "fraction"]);

    let mut series: Vec<(&str, f64, Vec<f64>)> = Vec::new();
    for &e in &grid {
        series.push(("upper", e, fraction_at(&profile, e, &cp)?));
    }
    series.push(("lower", delta, fraction_at(&profile, delta, &cp)?));
    for (k, &n) in checkpoints.iter().enumerate() {
        // a checkpoint m_{b+1} closes block b, which spans times [m_b, m_{b+1})
        let block = schedule.block_of(n - 1);
        let agree = block.map(|b| alpha.bit(b) == beta.bit(b));
        for (role, e, f) in &series {
            r.row(vec![
                n.to_string(),
                block.map(|b| b.to_string()).unwrap_or_default(),
                agree.map(|a| a.to_string()).unwrap_or_default(),
                role.to_string(),
                fmt_f64(*e),
                fmt_f64(f[k]),
            ]);
        }
    }
    Ok(())
}

pub fn merge(cfg: &MergeConfig, r: &mut Report) -> Result<()> {
    let m = merge_dc_sequence(&cfg.p, &cfg.q, cfg.k_max)?;
    r.param("k_max", cfg.k_max);
    r.columns(&["i", "term", "source", "block"]);
    let mut block_of = Vec::with_capacity(m.sources.len());
    for (b, &(_, len)) in m.blocks.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, len));
    }
    for (i, t) in m.sequence.materialized().iter().enumerate() {
        let src = match m.sources[i] {
            Source::P => "P",
            Source::Q => "Q",
        };
        r.row(vec![(i + 1).to_string(), t.to_string(), src.into(), block_of[i].to_string()]);
    }
    Ok(())
}

pub struct MixingRequest {
    pub system: SystemRef,
    pub opens: [Option<[f64; 2]>; 4],
    pub horizon: Option<u64>,
    pub sample_density: Option<usize>,
}

pub fn weak_mixing(req: &MixingRequest, r: &mut Report) -> Result<()> {
    let sys = req.system.resolve()?;
    let AnySystem::Real(s) = &sys.system else {
        return Err(Error::Config("weak-mixing probe needs a real-interval system".into()));
    };
    let claim = sys.gallery.as_ref().and_then(|g| g.mixing.clone());
    let names = ["u1", "v1", "u2", "v2"];
    let mut iv = [(0.0, 0.0); 4];
    for k in 0..4 {
        let given = req.opens[k].or_else(|| {
            claim.as_ref().map(|c| match k {
                0 => c.u1,
                1 => c.v1,
                2 => c.u2,
                _ => c.v2,
            })
        });
        let [a, b] = given.ok_or_else(|| Error::Config(format!("missing interval --{}", names[k])))?;
        iv[k] = (a, b);
    }
    let horizon = req.horizon.or(claim.as_ref().map(|c| c.horizon)).unwrap_or(64);
    let density = req
        .sample_density
        .or(claim.as_ref().map(|c| c.sample_density))
        .unwrap_or(256);
    r.param("system", s.description());
    for k in 0..4 {
        r.param(names[k], format!("{};{}", fmt_f64(iv[k].0), fmt_f64(iv[k].1)));
    }
    r.param("horizon", horizon);
    r.param("sample_density", density);
    let w = weak_mixing_probe(s, ((iv[0], iv[1]), (iv[2], iv[3])), horizon, density)?;
    r.columns(&["found", "n", "x1", "x2"]);
    r.row(match w {
        Some(w) => vec!["true".into(), w.n.to_string(), fmt_f64(w.x1), fmt_f64(w.x2)],
        None => vec!["false".into(), String::new(), String::new(), String::new()],
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: integer square root.
    #[test]
    fn squares_synthetic_marks_exact_squares() {
        let a = squares_synthetic(2000);
        for (i, &v) in a.iter().enumerate() {
            let r = (i as f64).sqrt().round() as usize;
            if r * r == i {
                assert_eq!(v, 1.0, "i = {i}");
            } else {
                assert_eq!(v, 1.0 / (i as f64 + 1.0));
            }
        }
    }

    #[test]
    fn decades_end_at_the_horizon() {
        assert_eq!(decades(1000), vec![10, 100, 1000]);
        assert_eq!(decades(250), vec![10, 100, 250]);
        assert_eq!(decades(5), vec![5]);
    }

    #[test]
    fn random_sequences_are_reproducible() {
        let a = random_sequences(5, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = random_sequences(5, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }
}
