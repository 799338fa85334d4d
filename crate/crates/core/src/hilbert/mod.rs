//! Pure states, Bloch vectors and Born probabilities.

mod random;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use random::{haar_random_state, uniform_sphere_point, RandomStream};

use crate::{Error, Result};

/// Inputs whose squared norm is further than this from 1 are rejected.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Default tolerance on `|<a|b>|` for calling two vectors orthogonal.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;

/// Unit-norm vector of complex amplitudes, dimension at least 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Accepts amplitudes whose squared norm is within [`NORM_TOLERANCE`] of 1
    /// and rescales them to unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dimension(amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self::rescaled(amplitudes, norm_sq))
    }

    /// Normalizes any nonzero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dimension(amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self::rescaled(amplitudes, norm_sq))
    }

    /// Leaves vectors that are unit up to rounding untouched, so that
    /// serialized states load back bit for bit.
    fn rescaled(mut amplitudes: Vec<Complex64>, norm_sq: f64) -> Self {
        let rounding = 4.0 * f64::EPSILON * amplitudes.len() as f64;
        if (norm_sq - 1.0).abs() > rounding {
            let s = norm_sq.sqrt().recip();
            amplitudes.iter_mut().for_each(|a| *a *= s);
        }
        Self { amplitudes }
    }

    /// Real amplitudes, normalized within tolerance.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis state `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dimension(dim)?;
        if index >= dim {
            return Err(Error::param(format!("basis index {index} out of range for dimension {dim}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        same_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Multiplies every amplitude by `e^{i phase}`.
    pub fn with_global_phase(&self, phase: f64) -> PureState {
        let z = Complex64::from_polar(1.0, phase);
        Self {
            amplitudes: self.amplitudes.iter().map(|a| a * z).collect(),
        }
    }
}

impl TryFrom<Vec<[f64; 2]>> for PureState {
    type Error = Error;

    fn try_from(pairs: Vec<[f64; 2]>) -> Result<Self> {
        PureState::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<PureState> for Vec<[f64; 2]> {
    fn from(s: PureState) -> Self {
        s.amplitudes.into_iter().map(|a| [a.re, a.im]).collect()
    }
}

fn check_dimension(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension {
            what: "state dimension",
            value: dim,
            min: 2,
        });
    }
    Ok(())
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Real unit vector in R^3 representing a qubit state or a measurement axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Accepts vectors within [`NORM_TOLERANCE`] of unit length and rescales them.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm_sq = x * x + y * y + z * z;
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq });
        }
        let s = norm_sq.sqrt().recip();
        Ok(Self {
            x: x * s,
            y: y * s,
            z: z * s,
        })
    }

    /// Polar angle `theta` from +z, azimuth `phi` from +x.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() != 3 {
            return Err(Error::DimensionMismatch { left: v.len(), right: 3 });
        }
        Self::new(v[0], v[1], v[2])
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn neg(&self) -> BlochVector {
        BlochVector {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Convention: `|0> -> (0,0,1)`, `(|0>+|1>)/sqrt2 -> (1,0,0)`.
pub fn bloch_from_state(psi: &PureState) -> Result<BlochVector> {
    same_dim(psi.dim(), 2)?;
    let a = psi.amplitudes[0];
    let b = psi.amplitudes[1];
    let c = a.conj() * b;
    let z = a.norm_sqr() - b.norm_sqr();
    BlochVector::new(2.0 * c.re, 2.0 * c.im, z)
}

/// Inverse of [`bloch_from_state`], with a real non-negative first amplitude.
pub fn state_from_bloch(b: &BlochVector) -> PureState {
    let theta = b.z.clamp(-1.0, 1.0).acos();
    let phi = b.y.atan2(b.x);
    let amplitudes = vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ];
    PureState { amplitudes }
}

/// `|<phi|psi>|^2`
pub fn born_probability(psi: &PureState, phi: &PureState) -> Result<f64> {
    Ok(phi.inner(psi)?.norm_sqr().min(1.0))
}

/// Absolute overlap `|<a|b>|` between two vectors of the same kind.
pub trait Overlap {
    fn overlap(&self, other: &Self) -> Result<f64>;
}

impl Overlap for PureState {
    fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }
}

impl Overlap for [f64] {
    fn overlap(&self, other: &Self) -> Result<f64> {
        same_dim(self.len(), other.len())?;
        Ok(self.iter().zip(other).map(|(a, b)| a * b).sum::<f64>().abs())
    }
}

impl Overlap for Vec<f64> {
    fn overlap(&self, other: &Self) -> Result<f64> {
        self.as_slice().overlap(other.as_slice())
    }
}

impl Overlap for BlochVector {
    fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.dot(other).abs())
    }
}

/// True iff `|<a|b>| <= tol`.
pub fn is_orthogonal<T: Overlap + ?Sized>(a: &T, b: &T, tol: f64) -> Result<bool> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::param(format!("orthogonality tolerance must be >= 0, got {tol}")));
    }
    Ok(a.overlap(b)? <= tol)
}
