//! Shared fixtures for the criterion benches.

use ndschaos::system::Logistic;

pub fn logistic() -> Logistic {
    Logistic::autonomous(4.0).expect("r = 4 is valid")
}

/// `k` evenly spaced interior points of `[0, 1]`.
pub fn grid_sample(k: usize) -> Vec<f64> {
    (1..=k).map(|i| i as f64 / (k + 1) as f64).collect()
}
