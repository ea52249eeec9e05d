use rayon::prelude::*;
use serde::Serialize;

use super::profile::PairProfile;
use super::verdict::{classify_pair, ClassifyOptions, Flag, PairVerdict, Tolerances};
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::orbit::orbit_at_indices;
use crate::space::MetricSpace;
use crate::system::{MapFamily, PointOf};

/// One unordered pair `(sample[i], sample[j])`, `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub i: usize,
    pub j: usize,
    pub x: String,
    pub y: String,
    /// `Err` carries the per-pair failure.
    #[serde(skip)]
    pub verdict: std::result::Result<PairVerdict, String>,
}

impl ScanRow {
    pub const HEADER: [&'static str; 21] = [
        "i",
        "j",
        "x",
        "y",
        "horizon",
        "window",
        "eps",
        "upper_F",
        "lower_F",
        "delta",
        "lower_F_delta",
        "proximal",
        "asymptotic",
        "distal",
        "li_yorke",
        "li_yorke_delta",
        "dc_pair",
        "dc_delta",
        "dc_pair_delta",
        "min_distance",
        "status",
    ];

    /// The row as text fields in [`ScanRow::HEADER`] order; floats use
    /// [`fmt_f64`] so output is byte-stable.
    pub fn fields(&self) -> Vec<String> {
        let mut out = vec![self.i.to_string(), self.j.to_string(), self.x.clone(), self.y.clone()];
        match &self.verdict {
            Ok(v) => {
                // smallest grid epsilon: the hardest upper test
                let up = v
                    .upper
                    .iter()
                    .min_by(|a, b| a.epsilon.total_cmp(&b.epsilon))
                    .expect("validated grid is nonempty");
                out.extend([
                    v.horizon.to_string(),
                    v.window.to_string(),
                    fmt_f64(up.epsilon),
                    fmt_f64(up.upper_f),
                    fmt_f64(up.lower_f),
                    fmt_f64(v.delta),
                    fmt_f64(v.lower.lower_f),
                ]);
                out.extend(
                    [
                        v.proximal,
                        v.asymptotic,
                        v.distal,
                        v.li_yorke,
                        v.li_yorke_delta,
                        v.dc_pair,
                        v.dc_delta,
                    ]
                    .iter()
                    .map(|f| f.as_str().to_string()),
                );
                out.push(v.dc_pair_delta.map(fmt_f64).unwrap_or_default());
                out.push(fmt_f64(v.min_distance));
                out.push("ok".into());
            }
            Err(e) => {
                out.extend(std::iter::repeat_n(String::new(), Self::HEADER.len() - 5));
                out.push(format!("error: {e}"));
            }
        }
        out
    }

    pub fn flags(&self) -> Option<[Flag; 7]> {
        self.verdict.as_ref().ok().map(|v| {
            [
                v.proximal,
                v.asymptotic,
                v.distal,
                v.li_yorke,
                v.li_yorke_delta,
                v.dc_pair,
                v.dc_delta,
            ]
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanOptions {
    pub delta: f64,
    pub tolerances: Tolerances,
    /// `None` picks [`ClassifyOptions::for_profile`].
    pub classify: Option<ClassifyOptions>,
    pub threads: usize,
}

/// Classifies every unordered pair of `sample` along `indices`. Each orbit
/// is sampled once; pairs are distributed over `threads` workers and
/// collected in `(i, j)` lexicographic order, so the rows do not depend on
/// the worker count.
pub fn scan_pairs<S: MapFamily>(
    system: &S,
    sample: &[PointOf<S>],
    indices: &[u64],
    opts: &ScanOptions,
) -> Result<Vec<ScanRow>> {
    if sample.len() < 2 {
        return Err(Error::Parameter(format!(
            "scan needs at least 2 points, got {}",
            sample.len()
        )));
    }
    if opts.threads == 0 {
        return Err(Error::Parameter("threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
    let space = system.space();
    let names: Vec<String> = sample.iter().map(|p| space.describe(p)).collect();
    let pairs: Vec<(usize, usize)> = (0..sample.len())
        .flat_map(|i| (i + 1..sample.len()).map(move |j| (i, j)))
        .collect();

    pool.install(|| {
        let orbits: Vec<std::result::Result<Vec<PointOf<S>>, String>> = sample
            .par_iter()
            .map(|p| orbit_at_indices(system, p.clone(), indices).map_err(|e| e.to_string()))
            .collect();
        let rows = pairs
            .par_iter()
            .map(|&(i, j)| {
                let verdict = match (&orbits[i], &orbits[j]) {
                    (Ok(xs), Ok(ys)) => PairProfile::from_orbits(space, xs, ys, indices)
                        .and_then(|p| {
                            let co = opts
                                .classify
                                .clone()
                                .unwrap_or_else(|| ClassifyOptions::for_profile(&p));
                            classify_pair(&p, opts.delta, &opts.tolerances, &co)
                        })
                        .map_err(|e| e.to_string()),
                    (Err(e), _) => Err(format!("x: {e}")),
                    (_, Err(e)) => Err(format!("y: {e}")),
                };
                ScanRow {
                    i,
                    j,
                    x: names[i].clone(),
                    y: names[j].clone(),
                    verdict,
                }
            })
            .collect();
        Ok(rows)
    })
}
