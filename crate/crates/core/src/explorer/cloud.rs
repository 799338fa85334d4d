use crate::capgeom::CapKind;
use crate::hilbert::{haar_random_state, uniform_sphere_point, PureState, RandomStream, NORM_TOLERANCE};
use crate::{Error, Result};

/// Weighted sample of the real sphere S^{d-1} or of the unit sphere of C^N.
///
/// Points are stored flat: `d` reals per point for the real kind, `2N` reals
/// `(re, im, re, im, ...)` per point for the complex kind. Weights are measure
/// proxies summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePointCloud {
    kind: CapKind,
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl SpherePointCloud {
    /// `m` rotation-invariant samples with uniform weights `1/m`. Complex
    /// points are Haar states; their global phase is left as drawn.
    pub fn sample(kind: CapKind, dim: usize, m: usize, rng: &RandomStream) -> Result<Self> {
        check_dim(kind, dim)?;
        if m == 0 {
            return Err(Error::param("point cloud needs at least one point"));
        }
        let mut r = rng.clone();
        let stride = stride(kind, dim);
        let mut coords = Vec::with_capacity(m * stride);
        for _ in 0..m {
            match kind {
                CapKind::Real => coords.extend(uniform_sphere_point(dim, &mut r)?),
                CapKind::Complex => {
                    let s = haar_random_state(dim, &mut r)?;
                    coords.extend(s.amplitudes().iter().flat_map(|a| [a.re, a.im]));
                }
            }
        }
        Ok(Self {
            kind,
            dim,
            coords,
            weights: vec![1.0 / m as f64; m],
        })
    }

    /// `m` equally spaced points on the unit circle.
    pub fn circle(m: usize) -> Result<Self> {
        let pts = (0..m)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / m as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        Self::from_real_points(pts)
    }

    pub fn from_real_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        check_dim(CapKind::Real, dim)?;
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { left: p.len(), right: dim });
            }
            check_unit(p).map_err(|e| Error::param(format!("point {i}: {e}")))?;
            coords.extend_from_slice(p);
        }
        let m = points.len();
        Ok(Self {
            kind: CapKind::Real,
            dim,
            coords,
            weights: vec![1.0 / m as f64; m],
        })
    }

    pub fn from_states(states: &[PureState]) -> Result<Self> {
        let dim = states.first().map_or(0, PureState::dim);
        check_dim(CapKind::Complex, dim)?;
        let mut coords = Vec::with_capacity(states.len() * 2 * dim);
        for s in states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch { left: s.dim(), right: dim });
            }
            coords.extend(s.amplitudes().iter().flat_map(|a| [a.re, a.im]));
        }
        let m = states.len();
        Ok(Self {
            kind: CapKind::Complex,
            dim,
            coords,
            weights: vec![1.0 / m as f64; m],
        })
    }

    /// Replaces the weights; they must be non-negative and sum to 1 within 1e-9.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.len() {
            return Err(Error::DimensionMismatch {
                left: weights.len(),
                right: self.len(),
            });
        }
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::param("weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::param(format!("weights sum to {total}, expected 1")));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn kind(&self) -> CapKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn stride(&self) -> usize {
        stride(self.kind, self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let s = self.stride();
        &self.coords[i * s..(i + 1) * s]
    }

    /// `|x_i . x_j|` or `|<x_i|x_j>|`.
    pub fn overlap(&self, i: usize, j: usize) -> f64 {
        self.overlap_with(i, self.point(j))
    }

    /// Overlap of point `i` with an arbitrary vector in the cloud's flat layout.
    pub fn overlap_with(&self, i: usize, v: &[f64]) -> f64 {
        flat_overlap(self.kind, self.point(i), v)
    }
}

pub(crate) fn flat_overlap(kind: CapKind, a: &[f64], b: &[f64]) -> f64 {
    match kind {
        CapKind::Real => a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().abs(),
        CapKind::Complex => {
            let (mut re, mut im) = (0.0, 0.0);
            for (p, q) in a.chunks_exact(2).zip(b.chunks_exact(2)) {
                // conj(p) * q
                re += p[0] * q[0] + p[1] * q[1];
                im += p[0] * q[1] - p[1] * q[0];
            }
            re.hypot(im)
        }
    }
}

pub(crate) fn stride(kind: CapKind, dim: usize) -> usize {
    match kind {
        CapKind::Real => dim,
        CapKind::Complex => 2 * dim,
    }
}

fn check_dim(kind: CapKind, dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension {
            what: match kind {
                CapKind::Real => "sphere dimension",
                CapKind::Complex => "complex dimension",
            },
            value: dim,
            min: 2,
        });
    }
    Ok(())
}

pub(crate) fn check_unit(v: &[f64]) -> Result<()> {
    let n: f64 = v.iter().map(|x| x * x).sum();
    if !n.is_finite() || (n - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sq: n });
    }
    Ok(())
}
