//! Adaptive Gauss-Legendre quadrature.
//!
//! Each interval is integrated with a fixed-order Gauss-Legendre rule, and its
//! error is estimated by comparing against the same rule applied to the two
//! halves. The interval with the largest estimated error is bisected until the
//! total estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::{Error, Result};

const ORDER: usize = 20;
const MAX_INTERVALS: usize = 20_000;

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on P_n starting from the Chebyshev-like guess
    /// `cos(pi (i - 1/4) / (n + 1/2))`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ORDER))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn piece<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Piece {
    let gl = rule();
    let m = 0.5 * (a + b);
    let whole = gl.integrate(f, a, b);
    let split = gl.integrate(f, a, m) + gl.integrate(f, m, b);
    Piece {
        a,
        b,
        value: split,
        error: (split - whole).abs(),
    }
}

/// Integrates `f` over `[a, b]` until the estimated error is below
/// `max(abs_tol, rel_tol * |integral|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<QuadResult> {
    integrate_with_breakpoints(f, &[a, b], rel_tol, abs_tol)
}

/// Like [`integrate`], but starts from the partition given by the sorted
/// `points`. Needed when the integrand is concentrated in a region too narrow
/// for the first rule to see.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult> {
    if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
        return Err(Error::param("integration needs at least two finite bounds"));
    }
    if points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::param("breakpoints must be sorted"));
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in points.windows(2).filter(|w| w[1] > w[0]) {
        let p = piece(&f, w[0], w[1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    loop {
        let target = abs_tol.max(rel_tol * total.abs());
        if total_err <= target || heap.len() >= MAX_INTERVALS {
            break;
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // interval cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let left = piece(&f, worst.a, m);
        let right = piece(&f, m, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // resum to drop the drift from incremental updates
    let mut pieces = heap.into_vec();
    pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = pieces.iter().map(|p| p.value).sum();
    let error_estimate: f64 = pieces.iter().map(|p| p.error).sum();
    let target = abs_tol.max(rel_tol * f64::abs(value));
    if error_estimate.is_nan() || error_estimate > target * 10.0 || !value.is_finite() {
        return Err(Error::param(format!(
            "quadrature did not converge: estimate {value}, error {error_estimate}"
        )));
    }
    Ok(QuadResult {
        value,
        error_estimate,
        intervals: pieces.len(),
    })
}
