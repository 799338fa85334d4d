use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::PureState;
use crate::{Error, Result};

/// A reproducible random number stream identified by `(seed, stream)`.
///
/// Two streams built from the same pair produce the same sequence. Parallel
/// work should derive one [`RandomStream::child`] per task and never share a
/// stream between tasks.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derives the `index`-th sub-stream. Depends only on `(seed, stream, index)`,
    /// never on how much of `self` has already been consumed.
    pub fn child(&self, index: u64) -> RandomStream {
        let derived = splitmix64(self.seed ^ splitmix64(self.stream.wrapping_add(0x5851_f42d_4c95_7f2d)));
        RandomStream::new(derived, index)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Haar-random pure state: a vector of independent standard complex Gaussians,
/// normalized.
pub fn haar_random_state(dim: usize, rng: &mut RandomStream) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::InvalidDimension {
            what: "state dimension",
            value: dim,
            min: 2,
        });
    }
    loop {
        let amps: Vec<num_complex::Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                num_complex::Complex64::new(re, im)
            })
            .collect();
        if let Ok(state) = PureState::normalized(amps) {
            return Ok(state);
        }
    }
}

/// Uniform point on the unit sphere S^{d-1} in R^d.
pub fn uniform_sphere_point(dim: usize, rng: &mut RandomStream) -> Result<Vec<f64>> {
    if dim < 2 {
        return Err(Error::InvalidDimension {
            what: "sphere dimension",
            value: dim,
            min: 2,
        });
    }
    let mut v = vec![0.0; dim];
    loop {
        for x in v.iter_mut() {
            *x = StandardNormal.sample(rng);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-150 {
            v.iter_mut().for_each(|x| *x /= norm);
            return Ok(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::born_probability;

    #[test]
    fn streams_are_reproducible() {
        let mut a = RandomStream::new(7, 3);
        let mut b = RandomStream::new(7, 3);
        let mut c = RandomStream::new(7, 4);
        let xa: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn child_ignores_parent_position() {
        let a = RandomStream::new(1, 0);
        let mut b = RandomStream::new(1, 0);
        b.next_u64();
        assert_eq!(a.child(5).next_u64(), b.child(5).next_u64());
        assert_ne!(a.child(5).next_u64(), a.child(6).next_u64());
    }

    #[test]
    fn samples_are_unit_norm() {
        let mut rng = RandomStream::new(11, 0);
        for dim in 2..8 {
            let s = haar_random_state(dim, &mut rng).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            let p = uniform_sphere_point(dim, &mut rng).unwrap();
            assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(haar_random_state(1, &mut rng).is_err());
        assert!(uniform_sphere_point(1, &mut rng).is_err());
    }

    fn mean_and_stderr(samples: impl Iterator<Item = f64>) -> (f64, f64, usize) {
        let (mut n, mut s, mut s2) = (0usize, 0.0, 0.0);
        for x in samples {
            n += 1;
            s += x;
            s2 += x * x;
        }
        let mean = s / n as f64;
        let var = (s2 / n as f64 - mean * mean).max(0.0);
        (mean, (var / n as f64).sqrt(), n)
    }

    // E|<x|s>|^2 = 1/N for Haar x and fixed s.
    #[test]
    fn haar_overlap_moment() {
        for (dim, expected) in [(2usize, 0.5), (4, 0.25)] {
            let mut rng = RandomStream::new(2024, dim as u64);
            let axis = PureState::basis(dim, 0).unwrap();
            let (mean, se, _) = mean_and_stderr(
                (0..1_000_000).map(|_| born_probability(&haar_random_state(dim, &mut rng).unwrap(), &axis).unwrap()),
            );
            assert!((mean - expected).abs() < 4.0 * se, "N={dim}: {mean} vs {expected} (se {se})");
        }
    }

    // E[x.s] = 0 and E[(x.s)^2] = 1/d on S^{d-1}.
    #[test]
    fn sphere_moments() {
        let mut rng = RandomStream::new(99, 0);
        let pts: Vec<Vec<f64>> = (0..1_000_000).map(|_| uniform_sphere_point(3, &mut rng).unwrap()).collect();
        let s = [0.6, 0.0, 0.8];
        let dot = |p: &Vec<f64>| p.iter().zip(s).map(|(a, b)| a * b).sum::<f64>();
        let (m1, se1, _) = mean_and_stderr(pts.iter().map(dot));
        assert!(m1.abs() < 4.0 * se1);
        let (m2, se2, _) = mean_and_stderr(pts.iter().map(|p| dot(p).powi(2)));
        assert!((m2 - 1.0 / 3.0).abs() < 4.0 * se2, "{m2}");
    }

    // Angles of d=2 samples are uniform: chi-square over 36 bins at the 1% level.
    #[test]
    fn circle_angles_uniform() {
        let mut rng = RandomStream::new(5, 0);
        let bins = 36;
        let n = 360_000;
        let mut counts = vec![0usize; bins];
        for _ in 0..n {
            let p = uniform_sphere_point(2, &mut rng).unwrap();
            let angle = p[1].atan2(p[0]).rem_euclid(std::f64::consts::TAU);
            let b = ((angle / std::f64::consts::TAU) * bins as f64) as usize;
            counts[b.min(bins - 1)] += 1;
        }
        let expected = n as f64 / bins as f64;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 99th percentile of chi-square with 35 degrees of freedom
        assert!(chi2 < 57.342, "chi2 = {chi2}");
    }
}
