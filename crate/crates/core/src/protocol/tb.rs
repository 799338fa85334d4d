//! The 2-bit one-way protocol for one qubit.
//!
//! Alice and Bob share two independent uniform unit vectors `l1`, `l2` on the
//! Bloch sphere. Alice, holding the Bloch vector `x` of her state, sends
//! `c_i = sign(x . l_i)`. Bob, measuring along the Bloch vector `y`, answers
//! `sign(y . (c1 l1 + c2 l2))`, where `+1` means "outcome aligned with `y`".
//! The average outcome is `x . y`, so the `+1` frequency reproduces
//! `(1 + x . y) / 2 = |<phi|psi>|^2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::hilbert::{bloch_from_state, born_probability, uniform_sphere_point, BlochVector, PureState, RandomStream};
use crate::{Error, Result};

const BATCH: u64 = 10_000;
const MIN_TRIALS: u64 = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `sign(0) = +1`
    pub fn of(v: f64) -> Sign {
        if v >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// The shared random variable of the protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SharedPair {
    pub lambda1: BlochVector,
    pub lambda2: BlochVector,
}

impl SharedPair {
    pub fn new(lambda1: BlochVector, lambda2: BlochVector) -> Self {
        Self { lambda1, lambda2 }
    }

    pub fn sample(rng: &mut RandomStream) -> Self {
        let mut draw = || {
            let v = uniform_sphere_point(3, rng).expect("dimension 3 is valid");
            BlochVector { x: v[0], y: v[1], z: v[2] }
        };
        let lambda1 = draw();
        let lambda2 = draw();
        Self { lambda1, lambda2 }
    }
}

/// Alice's two-bit message: one of exactly four values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MessageBits {
    pub c1: Sign,
    pub c2: Sign,
}

impl MessageBits {
    pub const COUNT: usize = 4;

    /// `(+,+) -> 0, (+,-) -> 1, (-,+) -> 2, (-,-) -> 3`
    pub fn index(self) -> usize {
        2 * usize::from(self.c1 == Sign::Minus) + usize::from(self.c2 == Sign::Minus)
    }

    pub fn from_index(k: usize) -> Option<Self> {
        let s = |minus: bool| if minus { Sign::Minus } else { Sign::Plus };
        (k < Self::COUNT).then(|| MessageBits {
            c1: s(k & 2 != 0),
            c2: s(k & 1 != 0),
        })
    }

    pub fn all() -> impl Iterator<Item = MessageBits> {
        (0..Self::COUNT).filter_map(Self::from_index)
    }
}

fn check_unit(v: &BlochVector) -> Result<()> {
    let n = v.dot(v);
    if !n.is_finite() || (n - 1.0).abs() > crate::hilbert::NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sq: n });
    }
    Ok(())
}

pub fn tb_encode(x: &BlochVector, shared: &SharedPair) -> Result<MessageBits> {
    check_unit(x)?;
    check_unit(&shared.lambda1)?;
    check_unit(&shared.lambda2)?;
    Ok(encode_unchecked(x, shared))
}

fn encode_unchecked(x: &BlochVector, shared: &SharedPair) -> MessageBits {
    MessageBits {
        c1: Sign::of(x.dot(&shared.lambda1)),
        c2: Sign::of(x.dot(&shared.lambda2)),
    }
}

pub fn tb_decode(y: &BlochVector, msg: MessageBits, shared: &SharedPair) -> Result<Sign> {
    check_unit(y)?;
    check_unit(&shared.lambda1)?;
    check_unit(&shared.lambda2)?;
    Ok(decode_unchecked(y, msg, shared))
}

fn decode_unchecked(y: &BlochVector, msg: MessageBits, shared: &SharedPair) -> Sign {
    let (a, b) = (msg.c1.value(), msg.c2.value());
    Sign::of(a * y.dot(&shared.lambda1) + b * y.dot(&shared.lambda2))
}

/// Executable form of the protocol with Bob's output convention.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TonerBacon {
    /// Bob reports the opposite outcome. Set only by [`TonerBacon::calibrate`]
    /// if the measured correlation comes out as `-(x.y)`.
    pub flip_output: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Calibration {
    /// Least-squares slope of Bob's outcome against `x.y`; +1 for a correct
    /// protocol, -1 if the output convention is reversed.
    pub slope: f64,
    pub samples: u64,
    pub protocol: TonerBacon,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimulationReport {
    pub frequency: f64,
    pub born: f64,
    pub deviation: f64,
    /// Binomial standard error at the Born probability.
    pub std_error: f64,
    pub trials: u64,
    pub hits: u64,
    pub output_flipped: bool,
}

impl SimulationReport {
    pub fn within_sigmas(&self, k: f64) -> bool {
        self.deviation <= k * self.std_error + 1e-12
    }
}

impl TonerBacon {
    pub fn encode(&self, x: &BlochVector, shared: &SharedPair) -> Result<MessageBits> {
        tb_encode(x, shared)
    }

    pub fn decode(&self, y: &BlochVector, msg: MessageBits, shared: &SharedPair) -> Result<Sign> {
        let s = tb_decode(y, msg, shared)?;
        Ok(if self.flip_output { s.flipped() } else { s })
    }

    /// One round with fresh shared randomness.
    pub fn run_round(&self, x: &BlochVector, y: &BlochVector, rng: &mut RandomStream) -> Sign {
        let shared = SharedPair::sample(rng);
        let s = decode_unchecked(y, encode_unchecked(x, &shared), &shared);
        if self.flip_output {
            s.flipped()
        } else {
            s
        }
    }

    /// Counts `+1` outcomes over `trials` rounds, batched over child streams of
    /// `rng` and summed in batch order.
    pub fn count_plus(&self, x: &BlochVector, y: &BlochVector, trials: u64, rng: &RandomStream) -> Result<u64> {
        check_unit(x)?;
        check_unit(y)?;
        let batches = trials.div_ceil(BATCH);
        let counts: Vec<u64> = (0..batches)
            .into_par_iter()
            .map(|b| {
                let mut r = rng.child(b);
                let n = BATCH.min(trials - b * BATCH);
                (0..n).filter(|_| self.run_round(x, y, &mut r) == Sign::Plus).count() as u64
            })
            .collect();
        Ok(counts.iter().sum())
    }

    /// Simulates preparing `psi` and measuring the projector on `phi`.
    pub fn simulate(&self, psi: &PureState, phi: &PureState, trials: u64, rng: &RandomStream) -> Result<SimulationReport> {
        if trials < MIN_TRIALS {
            return Err(Error::param(format!("at least {MIN_TRIALS} trials required, got {trials}")));
        }
        let x = bloch_from_state(psi)?;
        let y = bloch_from_state(phi)?;
        let born = born_probability(psi, phi)?;
        let hits = self.count_plus(&x, &y, trials, rng)?;
        let frequency = hits as f64 / trials as f64;
        Ok(SimulationReport {
            frequency,
            born,
            deviation: (frequency - born).abs(),
            std_error: (born * (1.0 - born) / trials as f64).sqrt(),
            trials,
            hits,
            output_flipped: self.flip_output,
        })
    }

    /// Fixes Bob's output convention from data: regresses outcomes against
    /// `x.y` over random state pairs and flips the output if the slope is
    /// negative.
    pub fn calibrate(samples: u64, rng: &RandomStream) -> Calibration {
        let raw = TonerBacon { flip_output: false };
        let mut r = rng.clone();
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for _ in 0..samples {
            // two independent uniform Bloch vectors as the state and measurement axes
            let pair = SharedPair::sample(&mut r);
            let (x, y) = (pair.lambda1, pair.lambda2);
            let c = x.dot(&y);
            sxy += c * raw.run_round(&x, &y, &mut r).value();
            sxx += c * c;
        }
        let slope = sxy / sxx;
        Calibration {
            slope,
            samples,
            protocol: TonerBacon { flip_output: slope < 0.0 },
        }
    }
}

/// [`TonerBacon::simulate`] with the default output convention.
pub fn tb_simulate(psi: &PureState, phi: &PureState, trials: u64, rng: &RandomStream) -> Result<SimulationReport> {
    TonerBacon::default().simulate(psi, phi, trials, rng)
}

/// Solid-angle fractions of the four regions `{x : sign(x.l1) = c1, sign(x.l2) = c2}`,
/// in [`MessageBits::index`] order. Each region is a lune whose opening angle
/// is either `gamma` or `pi - gamma`, with `gamma` the angle between `l1` and
/// `l2`; a lune of opening `a` covers `a / (2 pi)` of the sphere.
pub fn lune_solid_angles(shared: &SharedPair) -> [f64; 4] {
    let gamma = shared.lambda1.dot(&shared.lambda2).clamp(-1.0, 1.0).acos();
    let same = (std::f64::consts::PI - gamma) / std::f64::consts::TAU;
    let mixed = gamma / std::f64::consts::TAU;
    [same, mixed, mixed, same]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: f64, y: f64, z: f64) -> BlochVector {
        BlochVector::new(x, y, z).unwrap()
    }

    #[test]
    fn encode_examples() {
        let up = b(0.0, 0.0, 1.0);
        let down = b(0.0, 0.0, -1.0);
        let m = tb_encode(&up, &SharedPair::new(up, up)).unwrap();
        assert_eq!((m.c1, m.c2), (Sign::Plus, Sign::Plus));
        let m = tb_encode(&up, &SharedPair::new(down, up)).unwrap();
        assert_eq!((m.c1, m.c2), (Sign::Minus, Sign::Plus));
        let m = tb_encode(&up, &SharedPair::new(b(1.0, 0.0, 0.0), down)).unwrap();
        assert_eq!((m.c1, m.c2), (Sign::Plus, Sign::Minus));
        let bad = BlochVector { x: 2.0, y: 0.0, z: 0.0 };
        assert!(tb_encode(&bad, &SharedPair::new(up, up)).is_err());
    }

    #[test]
    fn decode_examples() {
        let l1 = b(1.0, 0.0, 0.0);
        let l2 = b(0.0, 1.0, 0.0);
        let shared = SharedPair::new(l1, l2);
        let msg = MessageBits {
            c1: Sign::Plus,
            c2: Sign::Minus,
        };
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(tb_decode(&b(s, -s, 0.0), msg, &shared).unwrap(), Sign::Plus);
        assert_eq!(tb_decode(&b(-s, s, 0.0), msg, &shared).unwrap(), Sign::Minus);
        // c1 l1 + c2 l2 = 0
        let cancel = SharedPair::new(l1, l1);
        let msg = MessageBits {
            c1: Sign::Plus,
            c2: Sign::Minus,
        };
        assert_eq!(tb_decode(&b(0.6, 0.0, -0.8), msg, &cancel).unwrap(), Sign::Plus);
    }

    #[test]
    fn message_index_round_trip() {
        let all: Vec<usize> = MessageBits::all().map(MessageBits::index).collect();
        assert_eq!(all, vec![0, 1, 2, 3]);
        assert!(MessageBits::from_index(4).is_none());
    }

    #[test]
    fn calibration_keeps_convention() {
        let cal = TonerBacon::calibrate(200_000, &RandomStream::new(1, 0));
        assert!(!cal.protocol.flip_output);
        assert!((cal.slope - 1.0).abs() < 0.05, "{}", cal.slope);
    }

    #[test]
    fn lunes_partition_sphere() {
        let mut rng = RandomStream::new(8, 0);
        for _ in 0..100 {
            let a = lune_solid_angles(&SharedPair::sample(&mut rng));
            assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
