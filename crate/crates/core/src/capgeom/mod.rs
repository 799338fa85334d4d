//! Real and complex double-cap volumes, and the communication lower bounds
//! derived from them.
//!
//! All volumes are fractions of the full sphere. The real double cap on
//! S^{d-1} is `{y : |y.s| > cos(pi/4)}`; the complex one on the unit sphere of
//! C^N is `{x : |<x|s>|^2 > 1/2}`.

mod bounds;
mod montecarlo;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::hilbert::{Overlap, PureState};
use crate::quadrature;
use crate::special::ln_beta_reg;
use crate::{Error, Result};

pub use bounds::{
    bounds_table, lower_bounds, BoundsRow, DEFAULT_EPSILON, FRANKL_WILSON_BASE, RAIGORODSKII_BASE, THEOREM2_THETA,
};
pub use montecarlo::{monte_carlo_cap_volume, McEstimate};

/// Relative tolerance used for every cap-volume quadrature.
pub const QUADRATURE_REL_TOL: f64 = 1e-12;

/// Linear volumes are only reported when at least this large; smaller ones are
/// carried as log2 values.
pub const LINEAR_FLOOR_LOG2: f64 = -1000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CapKind {
    Real,
    Complex,
}

impl fmt::Display for CapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CapKind::Real => "real",
            CapKind::Complex => "complex",
        })
    }
}

impl FromStr for CapKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(CapKind::Real),
            "complex" => Ok(CapKind::Complex),
            other => Err(Error::param(format!("unknown kind `{other}` (expected real or complex)"))),
        }
    }
}

/// Two opposite caps of angular radius pi/4 around `axis` in R^d.
#[derive(Clone, Debug)]
pub struct DoubleCapReal {
    axis: Vec<f64>,
}

impl DoubleCapReal {
    pub fn new(axis: Vec<f64>) -> Result<Self> {
        check_min("sphere dimension", axis.len(), 2)?;
        let n: f64 = axis.iter().map(|x| x * x).sum();
        if (n - 1.0).abs() > crate::hilbert::NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sq: n });
        }
        Ok(Self { axis })
    }

    pub fn threshold(&self) -> f64 {
        FRAC_1_SQRT_2
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn contains(&self, y: &[f64]) -> Result<bool> {
        Ok(self.axis.as_slice().overlap(y)? > self.threshold())
    }
}

/// `{x : |<x|s>|^2 > 1/2}` on the unit sphere of C^N. Membership depends only
/// on the ray of `x`.
#[derive(Clone, Debug)]
pub struct DoubleCapComplex {
    axis: PureState,
}

impl DoubleCapComplex {
    pub fn new(axis: PureState) -> Self {
        Self { axis }
    }

    pub fn axis(&self) -> &PureState {
        &self.axis
    }

    pub fn contains(&self, x: &PureState) -> Result<bool> {
        Ok(self.axis.inner(x)?.norm_sqr() > 0.5)
    }

    /// Same test on the real 2N-dimensional embedding `y` of `x`:
    /// `(y.s1)^2 + (y.s2)^2 > 1/2`, with `s1`, `s2` the embeddings of `s` and `i s`.
    pub fn contains_embedded(&self, y: &[f64]) -> Result<bool> {
        let (s1, s2) = self.embedded_axes();
        if y.len() != s1.len() {
            return Err(Error::DimensionMismatch {
                left: y.len(),
                right: s1.len(),
            });
        }
        let dot = |s: &[f64]| s.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        Ok(dot(&s1).powi(2) + dot(&s2).powi(2) > 0.5)
    }

    /// Orthonormal pair `(s1, s2)` in R^{2N} spanning the complex line of the axis.
    pub fn embedded_axes(&self) -> (Vec<f64>, Vec<f64>) {
        let s1 = embed(&self.axis);
        let s2 = self.axis.amplitudes().iter().flat_map(|a| [-a.im, a.re]).collect();
        (s1, s2)
    }
}

/// Real embedding `(re_1, im_1, ..., re_N, im_N)`.
pub fn embed(x: &PureState) -> Vec<f64> {
    x.amplitudes().iter().flat_map(|a| [a.re, a.im]).collect()
}

fn check_min(what: &'static str, value: usize, min: usize) -> Result<()> {
    if value < min {
        return Err(Error::InvalidDimension { what, value, min });
    }
    Ok(())
}

fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Result<f64> {
    Ok(quadrature::integrate(f, a, b, QUADRATURE_REL_TOL, 0.0)?.value)
}

/// Integral over `[0, end]` of a function concentrated within `width` of `end`.
fn quad_near_end<F: Fn(f64) -> f64>(f: F, end: f64, width: f64) -> Result<f64> {
    let mut points = vec![end];
    let mut step = width;
    while end - step > 0.0 {
        points.push(end - step);
        step *= 2.0;
    }
    points.push(0.0);
    points.reverse();
    Ok(quadrature::integrate_with_breakpoints(f, &points, QUADRATURE_REL_TOL, 0.0)?.value)
}

/// V_d = int_0^{pi/4} sin^{d-2} / int_0^{pi/2} sin^{d-2}, by adaptive quadrature.
///
/// Underflows to zero for d beyond about 2000; use [`log2_real_cap_volume`]
/// there.
pub fn real_cap_volume(d: usize) -> Result<f64> {
    check_min("sphere dimension", d, 2)?;
    let p = (d - 2) as f64;
    let f = |x: f64| x.sin().powf(p);
    Ok(quad(f, 0.0, FRAC_PI_4)? / quad(f, 0.0, FRAC_PI_2)?)
}

/// V_d through the identity `V_d = I_{1/2}((d-1)/2, 1/2)`.
pub fn real_cap_volume_beta(d: usize) -> Result<f64> {
    Ok(ln_real_cap_volume_beta(d)?.exp())
}

fn ln_real_cap_volume_beta(d: usize) -> Result<f64> {
    check_min("sphere dimension", d, 2)?;
    ln_beta_reg((d as f64 - 1.0) / 2.0, 0.5, 0.5)
}

/// log2 V_d by quadrature with each integrand scaled by its maximum, so it
/// stays finite for any d.
pub fn log2_real_cap_volume(d: usize) -> Result<f64> {
    check_min("sphere dimension", d, 2)?;
    let p = (d - 2) as f64;
    let ln_peak = FRAC_1_SQRT_2.ln();
    // numerator peaks at pi/4 with width ~1/p, denominator at pi/2 with width ~1/sqrt(p)
    let num = quad_near_end(|x: f64| (p * (x.sin().ln() - ln_peak)).exp(), FRAC_PI_4, 1.0 / p.max(1.0))?;
    let den = quad_near_end(|x: f64| (p * x.sin().ln()).exp(), FRAC_PI_2, 1.0 / p.max(1.0).sqrt())?;
    Ok((p * ln_peak + num.ln() - den.ln()) / LN_2)
}

/// log2 V_d through the log-domain incomplete beta function.
pub fn log2_real_cap_volume_beta(d: usize) -> Result<f64> {
    Ok(ln_real_cap_volume_beta(d)? / LN_2)
}

/// `V_N ~ 2^{-N/2+2} / sqrt(2 pi N)`. Asymptotic approximation only.
pub fn asymptotic_real_cap_volume(n: usize) -> Result<f64> {
    Ok(log2_asymptotic_real_cap_volume(n)?.exp2())
}

pub fn log2_asymptotic_real_cap_volume(n: usize) -> Result<f64> {
    check_min("sphere dimension", n, 2)?;
    let nf = n as f64;
    Ok(-nf / 2.0 + 2.0 - 0.5 * (2.0 * PI * nf).log2())
}

/// U_N = int_0^{pi/4} cos sin^{2N-3} / int_0^{pi/2} cos sin^{2N-3}, by quadrature.
pub fn complex_cap_volume(n: usize) -> Result<f64> {
    check_min("complex dimension", n, 2)?;
    let p = (2 * n - 3) as f64;
    let f = |x: f64| x.cos() * x.sin().powf(p);
    Ok(quad(f, 0.0, FRAC_PI_4)? / quad(f, 0.0, FRAC_PI_2)?)
}

/// Closed form U_N = 2^{1-N}.
pub fn complex_cap_volume_closed(n: usize) -> Result<f64> {
    check_min("complex dimension", n, 2)?;
    Ok((1.0 - n as f64).exp2())
}

/// Surface area W_d of the unit d-sphere S^d in R^{d+1}: `2 pi^{(d+1)/2} / Gamma((d+1)/2)`.
pub fn sphere_area(d: usize) -> f64 {
    let h = (d as f64 + 1.0) / 2.0;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

/// Pieces of the geometric computation of U_N on S^{2N-1} subset of R^{2N}.
///
/// A point is written `y = cos(t) u1 + sin(t) u2` with `u1` a unit vector in
/// the plane of `(s1, s2)` and `u2` in its orthogonal complement. The slice at
/// angle `t` has measure `w_1(|cos t|) w_{2N-3}(sin t)` with `w_d(r) = W_d r^d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapDecomposition {
    /// `int_0^{pi/4} w_1(cos t) w_{2N-3}(sin t) dt`, one of the two caps.
    pub cap_integral: f64,
    /// The same slice measure integrated over `t` in `[0, pi]`.
    pub parametrization_total: f64,
    /// `W_{2N-1}`
    pub sphere_area: f64,
    /// `2 cap_integral / parametrization_total`
    pub volume: f64,
}

/// With `t` ranging over `[0, pi]` and `u1` over the whole circle every point
/// of the sphere is reached twice (`(t, u1)` and `(pi - t, -u1)`), so the
/// parametrization's total measure is `2 W_{2N-1}`. The two caps
/// `t < pi/4` and `t > 3pi/4` are normalized by that total.
pub fn complex_cap_decomposition(n: usize) -> Result<CapDecomposition> {
    check_min("complex dimension", n, 2)?;
    let inner = 2 * n - 3;
    let w1 = sphere_area(1);
    let wi = sphere_area(inner);
    let p = inner as f64;
    let slice = |t: f64| w1 * t.cos().abs() * wi * t.sin().powf(p);
    let cap_integral = quad(slice, 0.0, FRAC_PI_4)?;
    let parametrization_total = quad(slice, 0.0, PI)?;
    Ok(CapDecomposition {
        cap_integral,
        parametrization_total,
        sphere_area: sphere_area(2 * n - 1),
        volume: 2.0 * cap_integral / parametrization_total,
    })
}

pub fn complex_cap_volume_decomposed(n: usize) -> Result<f64> {
    Ok(complex_cap_decomposition(n)?.volume)
}

/// Exact double-cap volume for either kind (quadrature route).
pub fn cap_volume(kind: CapKind, dim: usize) -> Result<f64> {
    match kind {
        CapKind::Real => real_cap_volume(dim),
        CapKind::Complex => complex_cap_volume(dim),
    }
}

/// Closed-form route: the incomplete beta identity for real caps, 2^{1-N} for
/// complex ones.
pub fn cap_volume_closed(kind: CapKind, dim: usize) -> Result<f64> {
    match kind {
        CapKind::Real => real_cap_volume_beta(dim),
        CapKind::Complex => complex_cap_volume_closed(dim),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{haar_random_state, RandomStream};
    use num_complex::Complex64;

    // V_3 = 1 - cos(pi/4) from the antiderivative of sin.
    const V3: f64 = 1.0 - FRAC_1_SQRT_2;

    #[test]
    fn real_small_dimensions() {
        assert!((real_cap_volume(2).unwrap() - 0.5).abs() < 1e-12);
        assert!((real_cap_volume(3).unwrap() - V3).abs() < 1e-12);
        // d = 4: (pi/8 - 1/4) / (pi/4)
        assert!((real_cap_volume(4).unwrap() - (0.5 - 1.0 / PI)).abs() < 1e-12);
        assert!(real_cap_volume(1).is_err());
    }

    #[test]
    fn quadrature_agrees_with_incomplete_beta() {
        for d in 2..=200 {
            let q = real_cap_volume(d).unwrap();
            let b = real_cap_volume_beta(d).unwrap();
            assert!((q - b).abs() < 1e-10, "d={d}: {q} vs {b}");
            assert!(((q - b) / b).abs() < 1e-9, "d={d}");
        }
    }

    #[test]
    fn log_route_matches_linear() {
        for d in 2..=100 {
            let l = log2_real_cap_volume(d).unwrap();
            let lin = real_cap_volume(d).unwrap().log2();
            assert!(((l - lin) / lin.abs().max(1.0)).abs() < 1e-8, "d={d}");
            assert!((l - log2_real_cap_volume_beta(d).unwrap()).abs() < 1e-9);
        }
        assert_eq!(log2_real_cap_volume(2).unwrap(), -1.0);
    }

    #[test]
    fn log_route_survives_large_dimensions() {
        for d in [4096usize, 1 << 16, 1 << 20] {
            let l = log2_real_cap_volume(d).unwrap();
            let b = log2_real_cap_volume_beta(d).unwrap();
            let a = log2_asymptotic_real_cap_volume(d).unwrap();
            assert!(l.is_finite());
            assert!((l - b).abs() < 1e-6 * l.abs(), "d={d}: {l} vs {b}");
            // within 1% in linear terms
            assert!((l - a).exp2() > 0.99 && (l - a).exp2() < 1.01, "d={d}");
        }
    }

    #[test]
    fn complex_matches_closed_form() {
        for n in 2..=50 {
            let q = complex_cap_volume(n).unwrap();
            assert!((q - complex_cap_volume_closed(n).unwrap()).abs() < 1e-10);
        }
        assert!((complex_cap_volume(11).unwrap() - 2f64.powi(-10)).abs() < 1e-15);
    }

    #[test]
    fn decomposition_is_consistent() {
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-13);
        for n in 2..=20 {
            let dec = complex_cap_decomposition(n).unwrap();
            assert!((dec.volume - (1.0 - n as f64).exp2()).abs() < 1e-8, "N={n}");
            assert!((dec.parametrization_total / dec.sphere_area - 2.0).abs() < 1e-10);
        }
    }

    // Normalizing both caps by W_{2N-1} alone counts the double cover twice.
    #[test]
    fn single_area_normalization_double_counts() {
        for n in 2..=10 {
            let dec = complex_cap_decomposition(n).unwrap();
            let literal = 2.0 * dec.cap_integral / dec.sphere_area;
            assert!((literal - (2.0 - n as f64).exp2()).abs() < 1e-10);
        }
    }

    #[test]
    fn monotone_and_ordered() {
        let v: Vec<f64> = (2..=60).map(|d| real_cap_volume(d).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] < w[0]));
        let u: Vec<f64> = (2..=60).map(|n| complex_cap_volume(n).unwrap()).collect();
        assert!(u.windows(2).all(|w| w[1] < w[0]));
        // equal at N = 2, strictly larger real volume beyond
        assert!((v[0] - u[0]).abs() < 1e-12);
        for n in 3..=60 {
            assert!(v[n - 2] > u[n - 2], "N={n}");
        }
    }

    #[test]
    fn embedded_membership_matches_complex_membership() {
        let mut rng = RandomStream::new(3, 0);
        let axis = haar_random_state(3, &mut rng).unwrap();
        let cap = DoubleCapComplex::new(axis.clone());
        for _ in 0..2000 {
            let x = haar_random_state(3, &mut rng).unwrap();
            assert_eq!(cap.contains(&x).unwrap(), cap.contains_embedded(&embed(&x)).unwrap());
            let rotated = x.with_global_phase(1.234);
            assert_eq!(cap.contains(&x).unwrap(), cap.contains(&rotated).unwrap());
        }
        let (s1, s2) = cap.embedded_axes();
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        assert!(d(&s1, &s2).abs() < 1e-15);
        assert!((d(&s1, &s1) - 1.0).abs() < 1e-12);
        let on_axis = PureState::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert!(DoubleCapComplex::new(on_axis.clone()).contains(&on_axis).unwrap());
    }

    #[test]
    fn real_cap_membership() {
        let cap = DoubleCapReal::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(cap.contains(&[0.0, 0.0, -1.0]).unwrap());
        assert!(!cap.contains(&[1.0, 0.0, 0.0]).unwrap());
        assert!(DoubleCapReal::new(vec![1.0, 1.0]).is_err());
    }
}
