//! Reference protocols used by tests, examples and the CLI fixtures.

use std::f64::consts::FRAC_1_SQRT_2;

use super::tabulated::{ProtocolTables, SharedEntry, TabulatedProtocol};
use super::tb::{tb_decode, tb_encode, MessageBits, SharedPair, Sign};
use crate::hilbert::{born_probability, state_from_bloch, BlochVector, PureState};
use crate::Result;

fn raw(states: &[PureState]) -> Vec<Vec<[f64; 2]>> {
    states.iter().map(|s| s.clone().into()).collect()
}

fn single_shared() -> Vec<SharedEntry> {
    vec![SharedEntry {
        label: "x0".into(),
        weight: 1.0,
    }]
}

fn one_hot(k: usize, r: usize) -> Vec<f64> {
    let mut row = vec![0.0; r];
    row[k] = 1.0;
    row
}

/// `|0>, |1>, |+>, |->`
pub fn qubit_grid() -> Vec<PureState> {
    let s = FRAC_1_SQRT_2;
    vec![
        PureState::from_real(&[1.0, 0.0]).unwrap(),
        PureState::from_real(&[0.0, 1.0]).unwrap(),
        PureState::from_real(&[s, s]).unwrap(),
        PureState::from_real(&[s, -s]).unwrap(),
    ]
}

/// The sender transmits the grid index of its state; the receiver answers
/// with the Born probability for that state. Reproduces the Born rule exactly.
pub fn identity_grid_tables(states: &[PureState]) -> Result<ProtocolTables> {
    let r = states.len();
    let decoder = states
        .iter()
        .map(|psi| states.iter().map(|phi| born_probability(psi, phi)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ProtocolTables {
        dimension: states[0].dim(),
        states: raw(states),
        measurements: raw(states),
        shared: single_shared(),
        message_count: r,
        encoder: vec![(0..r).map(|k| one_hot(k, r)).collect()],
        decoder: vec![decoder],
        support_weights: None,
    })
}

/// [`identity_grid_tables`] on [`qubit_grid`], each state standing for a
/// quarter of the state space.
pub fn identity_grid() -> TabulatedProtocol {
    let mut t = identity_grid_tables(&qubit_grid()).unwrap();
    t.support_weights = Some(vec![0.25; 4]);
    t.try_into().unwrap()
}

/// Identity grid, except that `|1>` is sent with the message of `|0>`, so the
/// support of message 0 holds the orthogonal pair (state 0, state 1).
pub fn orthogonal_support() -> TabulatedProtocol {
    let mut t = identity_grid_tables(&qubit_grid()).unwrap();
    t.encoder[0][1] = one_hot(0, t.message_count);
    t.try_into().unwrap()
}

/// A single message for the computational basis of C^4.
pub fn single_message() -> TabulatedProtocol {
    let states: Vec<PureState> = (0..4).map(|i| PureState::basis(4, i).unwrap()).collect();
    ProtocolTables {
        dimension: 4,
        states: raw(&states),
        measurements: raw(&states),
        shared: single_shared(),
        message_count: 1,
        encoder: vec![vec![vec![1.0]; 4]],
        decoder: vec![vec![vec![0.25; 4]]],
        support_weights: None,
    }
    .try_into()
    .unwrap()
}

/// Qubit states on a ring of the northern Bloch hemisphere, declared to cover
/// half of the state space in total.
pub fn hemisphere_cover() -> TabulatedProtocol {
    let states: Vec<PureState> = (0..8)
        .map(|i| state_from_bloch(&BlochVector::from_angles(0.8, i as f64 * std::f64::consts::TAU / 8.0)))
        .collect();
    let mut t = identity_grid_tables(&states).unwrap();
    t.support_weights = Some(vec![0.5 / 8.0; 8]);
    t.try_into().unwrap()
}

/// `half` Fibonacci-lattice points together with their antipodes.
pub fn antipodal_bloch_grid(half: usize) -> Vec<BlochVector> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut pts: Vec<BlochVector> = (0..half)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / (2.0 * half as f64);
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            BlochVector {
                x: r * phi.cos(),
                y: r * phi.sin(),
                z,
            }
        })
        .collect();
    let antipodes: Vec<BlochVector> = pts.iter().map(BlochVector::neg).collect();
    pts.extend(antipodes);
    pts
}

/// The 2-bit protocol at one fixed shared pair, tabulated on a Bloch grid used
/// both as states and as measurement axes. The encoder is deterministic, so the
/// support of message `(c1, c2)` is the lune `{x : sign(x.l1) = c1, sign(x.l2) = c2}`.
/// Each state carries support weight `1 / grid.len()`.
pub fn tb_lunes(shared: &SharedPair, grid: &[BlochVector]) -> Result<TabulatedProtocol> {
    let states: Vec<PureState> = grid.iter().map(state_from_bloch).collect();
    let r = MessageBits::COUNT;
    let encoder = grid
        .iter()
        .map(|x| Ok(one_hot(tb_encode(x, shared)?.index(), r)))
        .collect::<Result<Vec<_>>>()?;
    let decoder = MessageBits::all()
        .map(|msg| {
            grid.iter()
                .map(|y| Ok(if tb_decode(y, msg, shared)? == Sign::Plus { 1.0 } else { 0.0 }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ProtocolTables {
        dimension: 2,
        states: raw(&states),
        measurements: raw(&states),
        shared: vec![SharedEntry {
            label: "fixed-pair".into(),
            weight: 1.0,
        }],
        message_count: r,
        encoder: vec![encoder],
        decoder: vec![decoder],
        support_weights: Some(vec![1.0 / grid.len() as f64; grid.len()]),
    }
    .try_into()
}
