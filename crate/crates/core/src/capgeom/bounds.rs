use serde::Serialize;

use super::log2_real_cap_volume;
use crate::{Error, Result};

/// Base of the Frankl-Wilson upper bound `1.203^{-d}` (comparison column only).
pub const FRANKL_WILSON_BASE: f64 = 1.203;
/// Base of Raigorodskii's upper bound `1.225^{-d}` (comparison column only).
pub const RAIGORODSKII_BASE: f64 = 1.225;
/// `(2/sqrt 3)^{sqrt 2}`, about 1.2256.
pub const THEOREM2_THETA: f64 = 1.225_589_489_608_642_6;
pub const DEFAULT_EPSILON: f64 = 1e-6;

const MAX_QUBITS: u32 = 40;

/// Lower bounds, in bits, on the communication needed to simulate `n` qubits
/// followed by a rank-1 projective measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundsRow {
    pub n: u32,
    /// Hilbert space dimension 2^n.
    #[serde(rename = "N")]
    pub dimension: u64,
    pub log2_vn: f64,
    /// `-log2 V_N`
    pub real_bound_bits: f64,
    /// `-log2 U_N = 2^n - 1`
    pub complex_bound_bits: f64,
    /// `2^n log2(theta + epsilon)`
    pub theorem2_bits: f64,
    /// `2^n - 1 - n`, for maximally entangled states and two-outcome measurements.
    pub entanglement_bits: f64,
    /// `log2(1.203^{-N})`
    pub fw_log2: f64,
    /// `log2(1.225^{-N})`
    pub raig_log2: f64,
    /// `2^{n/3}`
    pub ref_2_pow_n_over_3: f64,
    pub epsilon: f64,
}

impl BoundsRow {
    /// `V_N` in linear scale, when it is representable without loss.
    pub fn vn(&self) -> Option<f64> {
        (self.log2_vn >= super::LINEAR_FLOOR_LOG2).then(|| self.log2_vn.exp2())
    }

    /// `theorem2_bits / 2^n`
    pub fn theorem2_coefficient(&self) -> f64 {
        self.theorem2_bits / self.dimension as f64
    }
}

pub fn lower_bounds(n: u32, epsilon: f64) -> Result<BoundsRow> {
    if !(1..=MAX_QUBITS).contains(&n) {
        return Err(Error::param(format!("qubit count must be in 1..={MAX_QUBITS}, got {n}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::param(format!("epsilon must be positive, got {epsilon}")));
    }
    let dimension = 1u64 << n;
    let big_n = dimension as f64;
    let log2_vn = log2_real_cap_volume(dimension as usize)?;
    Ok(BoundsRow {
        n,
        dimension,
        log2_vn,
        real_bound_bits: -log2_vn,
        complex_bound_bits: big_n - 1.0,
        theorem2_bits: big_n * (THEOREM2_THETA + epsilon).log2(),
        entanglement_bits: big_n - 1.0 - n as f64,
        fw_log2: -big_n * FRANKL_WILSON_BASE.log2(),
        raig_log2: -big_n * RAIGORODSKII_BASE.log2(),
        ref_2_pow_n_over_3: (n as f64 / 3.0).exp2(),
        epsilon,
    })
}

pub fn bounds_table(n_max: u32, epsilon: f64) -> Result<Vec<BoundsRow>> {
    if n_max < 1 {
        return Err(Error::param("n_max must be at least 1"));
    }
    (1..=n_max).map(|n| lower_bounds(n, epsilon)).collect()
}
