//! Finite tabulated one-way protocols and their JSON file format.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::hilbert::{PureState, NORM_TOLERANCE};
use crate::{Error, Result};

/// Tolerance on every probability normalization in a tabulated protocol.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharedEntry {
    pub label: String,
    pub weight: f64,
}

/// Wire form of a tabulated protocol. Field names are the JSON keys.
///
/// * `encoder[x][s][k]` is the probability that the sender emits message `k`
///   for state `s` under shared value `x`.
/// * `decoder[x][k][m]` is the probability that the receiver reports the
///   outcome of projector `m` after message `k` under shared value `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolTables {
    pub dimension: usize,
    pub states: Vec<Vec<[f64; 2]>>,
    pub measurements: Vec<Vec<[f64; 2]>>,
    pub shared: Vec<SharedEntry>,
    pub message_count: usize,
    pub encoder: Vec<Vec<Vec<f64>>>,
    pub decoder: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_weights: Option<Vec<f64>>,
}

/// A validated tabulated protocol; immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedProtocol {
    dimension: usize,
    states: Vec<PureState>,
    measurements: Vec<PureState>,
    shared: Vec<SharedEntry>,
    message_count: usize,
    encoder: Vec<Vec<Vec<f64>>>,
    decoder: Vec<Vec<Vec<f64>>>,
    support_weights: Option<Vec<f64>>,
}

impl TabulatedProtocol {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn measurements(&self) -> &[PureState] {
        &self.measurements
    }

    pub fn shared(&self) -> &[SharedEntry] {
        &self.shared
    }

    pub fn message_count(&self) -> usize {
        self.message_count
    }

    /// `rho(k | x, state)`
    pub fn encoder(&self, x: usize, state: usize, k: usize) -> f64 {
        self.encoder[x][state][k]
    }

    /// `P(measurement | k, x)`
    pub fn decoder(&self, x: usize, k: usize, measurement: usize) -> f64 {
        self.decoder[x][k][measurement]
    }

    pub fn support_weights(&self) -> Option<&[f64]> {
        self.support_weights.as_deref()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(s);
        let tables: ProtocolTables = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::validation(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
        })?;
        tables.try_into()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_tables(&self) -> ProtocolTables {
        let raw = |v: &[PureState]| v.iter().map(|s| s.clone().into()).collect();
        ProtocolTables {
            dimension: self.dimension,
            states: raw(&self.states),
            measurements: raw(&self.measurements),
            shared: self.shared.clone(),
            message_count: self.message_count,
            encoder: self.encoder.clone(),
            decoder: self.decoder.clone(),
            support_weights: self.support_weights.clone(),
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_tables())?)
    }
}

fn states_at(field: &str, dim: usize, raw: Vec<Vec<[f64; 2]>>) -> Result<Vec<PureState>> {
    if raw.is_empty() {
        return Err(Error::validation(field, "must not be empty"));
    }
    raw.into_iter()
        .enumerate()
        .map(|(i, amps)| {
            let path = format!("{field}[{i}]");
            if amps.len() != dim {
                return Err(Error::validation(path, format!("has {} amplitudes, expected {dim}", amps.len())));
            }
            if let Some(j) = amps.iter().position(|[re, im]| !(re.is_finite() && im.is_finite())) {
                return Err(Error::validation(format!("{path}[{j}]"), "amplitude is not finite"));
            }
            PureState::new(amps.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()).map_err(|e| match e {
                Error::NotNormalized { norm_sq } => Error::validation(
                    path,
                    format!("squared norm {norm_sq} differs from 1 by more than {NORM_TOLERANCE}"),
                ),
                other => other,
            })
        })
        .collect()
}

fn probability(path: impl Fn() -> String, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::validation(path(), format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn shape<T>(path: &str, v: &[T], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::validation(path, format!("has length {}, expected {expected}", v.len())));
    }
    Ok(())
}

impl TryFrom<ProtocolTables> for TabulatedProtocol {
    type Error = Error;

    /// Checks every normalization and range constraint on the tables and
    /// reports the first offending path.
    fn try_from(t: ProtocolTables) -> Result<Self> {
        if t.dimension < 2 {
            return Err(Error::validation("dimension", format!("{} is less than 2", t.dimension)));
        }
        let states = states_at("states", t.dimension, t.states)?;
        let measurements = states_at("measurements", t.dimension, t.measurements)?;
        if t.shared.is_empty() {
            return Err(Error::validation("shared", "must not be empty"));
        }
        for (x, e) in t.shared.iter().enumerate() {
            if !(e.weight >= 0.0 && e.weight.is_finite()) {
                return Err(Error::validation(format!("shared[{x}].weight"), format!("{} is not a valid weight", e.weight)));
            }
        }
        let total: f64 = t.shared.iter().map(|e| e.weight).sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::validation("shared", format!("weights sum to {total}, expected 1")));
        }
        if t.message_count < 1 {
            return Err(Error::validation("message_count", "must be at least 1"));
        }
        let (nx, ns, nm, r) = (t.shared.len(), states.len(), measurements.len(), t.message_count);

        shape("encoder", &t.encoder, nx)?;
        for (x, per_state) in t.encoder.iter().enumerate() {
            shape(&format!("encoder[{x}]"), per_state, ns)?;
            for (s, row) in per_state.iter().enumerate() {
                shape(&format!("encoder[{x}][{s}]"), row, r)?;
                for (k, &p) in row.iter().enumerate() {
                    probability(|| format!("encoder[{x}][{s}][{k}]"), p)?;
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > SUM_TOLERANCE {
                    return Err(Error::validation(format!("encoder[{x}][{s}]"), format!("sums to {sum}, expected 1")));
                }
            }
        }

        shape("decoder", &t.decoder, nx)?;
        for (x, per_msg) in t.decoder.iter().enumerate() {
            shape(&format!("decoder[{x}]"), per_msg, r)?;
            for (k, row) in per_msg.iter().enumerate() {
                shape(&format!("decoder[{x}][{k}]"), row, nm)?;
                for (m, &p) in row.iter().enumerate() {
                    probability(|| format!("decoder[{x}][{k}][{m}]"), p)?;
                }
            }
        }

        if let Some(w) = &t.support_weights {
            shape("support_weights", w, ns)?;
            if let Some(i) = w.iter().position(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(Error::validation(format!("support_weights[{i}]"), format!("{} is not a valid weight", w[i])));
            }
        }

        Ok(TabulatedProtocol {
            dimension: t.dimension,
            states,
            measurements,
            shared: t.shared,
            message_count: r,
            encoder: t.encoder,
            decoder: t.decoder,
            support_weights: t.support_weights,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> ProtocolTables {
        ProtocolTables {
            dimension: 2,
            states: vec![vec![[1.0, 0.0], [0.0, 0.0]]],
            measurements: vec![vec![[1.0, 0.0], [0.0, 0.0]]],
            shared: vec![SharedEntry {
                label: "x0".into(),
                weight: 1.0,
            }],
            message_count: 1,
            encoder: vec![vec![vec![1.0]]],
            decoder: vec![vec![vec![1.0]]],
            support_weights: None,
        }
    }

    fn path_of(t: ProtocolTables) -> String {
        match TabulatedProtocol::try_from(t) {
            Err(Error::Validation { path, .. }) => path,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn accepts_minimal() {
        let tp = TabulatedProtocol::try_from(minimal()).unwrap();
        let back = TabulatedProtocol::from_json_str(&tp.to_json_string().unwrap()).unwrap();
        assert_eq!(back, tp);
    }

    #[test]
    fn names_offending_paths() {
        let mut t = minimal();
        t.states[0] = vec![[1.0, 0.0], [1.0, 0.0]];
        assert_eq!(path_of(t), "states[0]");

        let mut t = minimal();
        t.shared[0].weight = 0.5;
        assert_eq!(path_of(t), "shared");

        let mut t = minimal();
        t.message_count = 2;
        t.encoder = vec![vec![vec![0.7, 0.2]]];
        t.decoder = vec![vec![vec![1.0], vec![1.0]]];
        assert_eq!(path_of(t), "encoder[0][0]");

        let mut t = minimal();
        t.decoder = vec![vec![vec![1.5]]];
        assert_eq!(path_of(t), "decoder[0][0][0]");

        let mut t = minimal();
        t.encoder = vec![vec![]];
        assert_eq!(path_of(t), "encoder[0]");

        let mut t = minimal();
        t.support_weights = Some(vec![-1.0]);
        assert_eq!(path_of(t), "support_weights[0]");

        let mut t = minimal();
        t.measurements = vec![vec![[1.0, 0.0]]];
        assert_eq!(path_of(t), "measurements[0]");
    }

    #[test]
    fn schema_errors_carry_json_path() {
        let json = r#"{"dimension":2,"states":[[[1,0],[0,0]]],"measurements":[[[1,0],[0,0]]],
            "shared":[{"label":"a","weight":"heavy"}],"message_count":1,"encoder":[[[1]]],"decoder":[[[1]]]}"#;
        match TabulatedProtocol::from_json_str(json) {
            Err(Error::Validation { path, .. }) => assert_eq!(path, "shared[0].weight"),
            other => panic!("{other:?}"),
        }
        match TabulatedProtocol::from_json_str(r#"{"dimension":2}"#) {
            Err(Error::Validation { message, .. }) => assert!(message.contains("states")),
            other => panic!("{other:?}"),
        }
    }
}
