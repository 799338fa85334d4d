use rayon::prelude::*;
use serde::Serialize;

use super::{CapKind, DoubleCapComplex, DoubleCapReal};
use crate::hilbert::{haar_random_state, uniform_sphere_point, PureState, RandomStream};
use crate::{Error, Result};

const BATCH: u64 = 10_000;
const MIN_TRIALS: u64 = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub hits: u64,
}

impl McEstimate {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        Self {
            estimate: p,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            trials,
            hits,
        }
    }

    /// Distance to `expected` in units of the standard error.
    pub fn z_score(&self, expected: f64) -> f64 {
        let d = (self.estimate - expected).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }
}

/// Fraction of uniformly sampled points that fall inside the double cap around
/// the first basis vector.
///
/// Work is split into fixed batches, each drawing from its own child stream of
/// `rng`, and batch counts are summed in batch order, so the result does not
/// depend on the thread count.
pub fn monte_carlo_cap_volume(kind: CapKind, dim: usize, trials: u64, rng: &RandomStream) -> Result<McEstimate> {
    if trials < MIN_TRIALS {
        return Err(Error::param(format!("at least {MIN_TRIALS} trials required, got {trials}")));
    }
    let batches = trials.div_ceil(BATCH);
    let counts: Vec<Result<u64>> = match kind {
        CapKind::Real => {
            let mut axis = vec![0.0; dim.max(1)];
            axis[0] = 1.0;
            let cap = DoubleCapReal::new(axis)?;
            (0..batches)
                .into_par_iter()
                .map(|b| {
                    let mut r = rng.child(b);
                    let mut hits = 0;
                    for _ in 0..batch_len(b, trials) {
                        if cap.contains(&uniform_sphere_point(dim, &mut r)?)? {
                            hits += 1;
                        }
                    }
                    Ok(hits)
                })
                .collect()
        }
        CapKind::Complex => {
            let cap = DoubleCapComplex::new(PureState::basis(dim, 0)?);
            (0..batches)
                .into_par_iter()
                .map(|b| {
                    let mut r = rng.child(b);
                    let mut hits = 0;
                    for _ in 0..batch_len(b, trials) {
                        if cap.contains(&haar_random_state(dim, &mut r)?)? {
                            hits += 1;
                        }
                    }
                    Ok(hits)
                })
                .collect()
        }
    };
    let mut hits = 0;
    for c in counts {
        hits += c?;
    }
    Ok(McEstimate::from_counts(hits, trials))
}

fn batch_len(b: u64, trials: u64) -> u64 {
    BATCH.min(trials - b * BATCH)
}
