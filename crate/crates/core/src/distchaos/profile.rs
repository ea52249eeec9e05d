use crate::error::{Error, Result};
use crate::orbit::OrbitCursor;
use crate::space::MetricSpace;
use crate::system::{MapFamily, PointOf};

#[derive(Debug, Clone)]
enum Diagonal {
    FromDistance(fn(f64) -> f64),
    Stored(Vec<f64>),
}

/// `d(f_0^{p_i}(x), f_0^{p_i}(y))` along a list of orbit times, plus the
/// distance of each pair to the diagonal of `X × X`.
#[derive(Debug, Clone)]
pub struct PairProfile {
    pub x: String,
    pub y: String,
    pub indices: Vec<u64>,
    pub distances: Vec<f64>,
    pub diameter: f64,
    diagonal: Diagonal,
}

fn check_indices(indices: &[u64]) -> Result<()> {
    if let Some(w) = indices.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(format!(
            "indices must be strictly increasing, got {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

impl PairProfile {
    /// A synthetic profile on a real line segment of the given diameter.
    pub fn from_distances(indices: Vec<u64>, distances: Vec<f64>, diameter: f64) -> Result<Self> {
        check_indices(&indices)?;
        if indices.len() != distances.len() {
            return Err(Error::Parameter(format!(
                "{} indices but {} distances",
                indices.len(),
                distances.len()
            )));
        }
        if let Some(d) = distances.iter().find(|d| !(**d >= 0.0)) {
            return Err(Error::Parameter(format!("distance {d} is negative or NaN")));
        }
        Ok(PairProfile {
            x: String::new(),
            y: String::new(),
            indices,
            distances,
            diameter,
            diagonal: Diagonal::FromDistance(|d| d / 2.0),
        })
    }

    /// Builds the profile from already subsampled orbits.
    pub fn from_orbits<M: MetricSpace>(
        space: &M,
        xs: &[M::Point],
        ys: &[M::Point],
        indices: &[u64],
    ) -> Result<Self> {
        check_indices(indices)?;
        if xs.len() != indices.len() || ys.len() != indices.len() {
            return Err(Error::Parameter("orbit samples do not match the indices".into()));
        }
        let distances = xs.iter().zip(ys).map(|(a, b)| space.distance(a, b)).collect();
        let diagonal = match space.diag_from_distance() {
            Some(f) => Diagonal::FromDistance(f),
            None => Diagonal::Stored(
                xs.iter()
                    .zip(ys)
                    .map(|(a, b)| space.diag_distance(a, b))
                    .collect(),
            ),
        };
        Ok(PairProfile {
            x: xs.first().map(|p| space.describe(p)).unwrap_or_default(),
            y: ys.first().map(|p| space.describe(p)).unwrap_or_default(),
            indices: indices.to_vec(),
            distances,
            diameter: space.diameter(),
            diagonal,
        })
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Distance of the `i`-th pair to the diagonal.
    #[inline]
    pub fn diag(&self, i: usize) -> f64 {
        match &self.diagonal {
            Diagonal::FromDistance(f) => f(self.distances[i]),
            Diagonal::Stored(v) => v[i],
        }
    }
}

/// Walks both orbits in lockstep, one step at a time.
pub fn pair_profile<S: MapFamily>(
    system: &S,
    x: PointOf<S>,
    y: PointOf<S>,
    indices: &[u64],
) -> Result<PairProfile> {
    check_indices(indices)?;
    let space = system.space();
    let closed = space.diag_from_distance();
    let mut cx = OrbitCursor::new(system, x.clone())?;
    let mut cy = OrbitCursor::new(system, y.clone())?;
    let mut distances = Vec::with_capacity(indices.len());
    let mut stored = Vec::new();
    for &p in indices {
        let a = cx.advance_to(p)?;
        let b = cy.advance_to(p)?;
        distances.push(space.distance(a, b));
        if closed.is_none() {
            stored.push(space.diag_distance(a, b));
        }
    }
    Ok(PairProfile {
        x: space.describe(&x),
        y: space.describe(&y),
        indices: indices.to_vec(),
        distances,
        diameter: space.diameter(),
        diagonal: match closed {
            Some(f) => Diagonal::FromDistance(f),
            None => Diagonal::Stored(stored),
        },
    })
}
