use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cloud::{check_unit, flat_overlap};
use super::graph::OrthogonalityGraph;
use crate::hilbert::RandomStream;
use crate::{Error, Result};

/// Largest graph accepted by [`brute_force_max_independent`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 40;

/// A set of cloud points and its measure.
#[derive(Clone, Debug, PartialEq)]
pub struct CandidateSet {
    members: Vec<usize>,
    density: f64,
    feasible: bool,
}

impl CandidateSet {
    /// Sorts and dedups `members`, sums their weights in index order, and
    /// re-scans the set for internal edges.
    pub fn new(graph: &OrthogonalityGraph, mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        let density = members.iter().map(|&v| graph.weight(v)).sum();
        let feasible = graph.is_independent(&members);
        Self {
            members,
            density,
            feasible,
        }
    }

    pub fn empty() -> Self {
        Self {
            members: Vec::new(),
            density: 0.0,
            feasible: true,
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    /// No two members are joined by an edge.
    pub fn feasible(&self) -> bool {
        self.feasible
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Points within `pi/4 - delta/2` of the axis (or its antipode), measured by
/// `|<x|axis>| > cos(pi/4 - delta/2)`. Any two such points make an angle below
/// `pi/2 - delta`, so the set is always independent.
///
/// `axis` uses the cloud's flat layout (`(re, im)` pairs for complex clouds).
pub fn double_cap_seed(graph: &OrthogonalityGraph, axis: &[f64]) -> Result<CandidateSet> {
    let cloud = graph.cloud();
    if axis.len() != cloud.stride() {
        return Err(Error::DimensionMismatch {
            left: axis.len(),
            right: cloud.stride(),
        });
    }
    check_unit(axis)?;
    let cut = (std::f64::consts::FRAC_PI_4 - graph.delta() / 2.0).cos();
    let members = (0..cloud.len())
        .filter(|&i| flat_overlap(cloud.kind(), cloud.point(i), axis) > cut)
        .collect();
    Ok(CandidateSet::new(graph, members))
}

/// The first basis vector in the cloud's flat layout.
pub fn default_axis(graph: &OrthogonalityGraph) -> Vec<f64> {
    let mut axis = vec![0.0; graph.cloud().stride()];
    axis[0] = 1.0;
    axis
}

/// Weighted greedy: repeatedly take the heaviest remaining vertex, breaking
/// ties by fewest remaining neighbors and then by index, and discard its
/// neighbors.
pub fn greedy_search(graph: &OrthogonalityGraph) -> CandidateSet {
    let m = graph.len();
    let mut alive = vec![true; m];
    let mut degree: Vec<usize> = (0..m).map(|v| graph.neighbors(v).len()).collect();
    let mut chosen = Vec::new();
    loop {
        let pick = (0..m).filter(|&v| alive[v]).min_by(|&a, &b| {
            graph
                .weight(b)
                .total_cmp(&graph.weight(a))
                .then(degree[a].cmp(&degree[b]))
                .then(a.cmp(&b))
        });
        let Some(v) = pick else { break };
        chosen.push(v);
        let mut removed = vec![v];
        removed.extend(graph.neighbors(v).iter().map(|&u| u as usize).filter(|&u| alive[u]));
        for &u in &removed {
            alive[u] = false;
        }
        for &u in &removed {
            for &w in graph.neighbors(u) {
                let w = w as usize;
                if alive[w] {
                    degree[w] -= 1;
                }
            }
        }
    }
    CandidateSet::new(graph, chosen)
}

/// Simulated annealing schedule and budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    /// Total proposed moves, split evenly across restarts.
    pub moves: u64,
    pub t_start: f64,
    pub t_end: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            moves: 1_000_000,
            t_start: 1.0,
            t_end: 1e-3,
            restarts: 4,
            seed: 0,
        }
    }
}

impl AnnealConfig {
    fn validate(&self) -> Result<()> {
        if !(self.t_start > 0.0 && self.t_end > 0.0 && self.t_end <= self.t_start) {
            return Err(Error::param(format!(
                "temperatures must satisfy 0 < t_end <= t_start, got {} -> {}",
                self.t_start, self.t_end
            )));
        }
        if self.restarts == 0 {
            return Err(Error::param("at least one restart required"));
        }
        Ok(())
    }
}

struct AnnealState<'g> {
    graph: &'g OrthogonalityGraph,
    in_set: Vec<bool>,
    /// Number of members adjacent to each vertex.
    conflicts: Vec<u32>,
    weight: f64,
}

impl<'g> AnnealState<'g> {
    fn new(graph: &'g OrthogonalityGraph, init: &CandidateSet) -> Self {
        let mut s = Self {
            graph,
            in_set: vec![false; graph.len()],
            conflicts: vec![0; graph.len()],
            weight: 0.0,
        };
        for &v in init.members() {
            s.insert(v);
        }
        s
    }

    fn insert(&mut self, v: usize) {
        self.in_set[v] = true;
        self.weight += self.graph.weight(v);
        for &u in self.graph.neighbors(v) {
            self.conflicts[u as usize] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.in_set[v] = false;
        self.weight -= self.graph.weight(v);
        for &u in self.graph.neighbors(v) {
            self.conflicts[u as usize] -= 1;
        }
    }

    fn members(&self) -> Vec<usize> {
        (0..self.in_set.len()).filter(|&v| self.in_set[v]).collect()
    }
}

fn anneal_once(graph: &OrthogonalityGraph, init: &CandidateSet, moves: u64, config: &AnnealConfig, mut rng: RandomStream) -> CandidateSet {
    let m = graph.len();
    if m == 0 {
        return init.clone();
    }
    let scale = 1.0 / m as f64 * (0..m).map(|v| graph.weight(v)).sum::<f64>();
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mut state = AnnealState::new(graph, init);
    let mut best_weight = state.weight;
    let mut best = init.members().to_vec();
    let cooling = if moves > 1 {
        (config.t_end / config.t_start).powf(1.0 / (moves - 1) as f64)
    } else {
        1.0
    };
    let mut t = config.t_start;
    let mut blockers = Vec::new();
    for _ in 0..moves {
        let v = rng.random_range(0..m);
        if state.in_set[v] {
            let delta = -graph.weight(v);
            if rng.random::<f64>() < (delta / (t * scale)).exp() {
                state.remove(v);
            }
        } else if state.conflicts[v] == 0 {
            state.insert(v);
        } else {
            // swap v in, pushing out every member adjacent to it
            blockers.clear();
            blockers.extend(graph.neighbors(v).iter().map(|&u| u as usize).filter(|&u| state.in_set[u]));
            let delta = graph.weight(v) - blockers.iter().map(|&u| graph.weight(u)).sum::<f64>();
            if delta >= 0.0 || rng.random::<f64>() < (delta / (t * scale)).exp() {
                for &u in &blockers {
                    state.remove(u);
                }
                state.insert(v);
            }
        }
        if state.weight > best_weight + 1e-12 * scale {
            best_weight = state.weight;
            best = state.members();
        }
        t *= cooling;
    }
    CandidateSet::new(graph, best)
}

/// Add / drop / swap annealing over independent sets. Independence is a hard
/// constraint: a vertex enters only after every adjacent member leaves. The
/// best set seen is kept, so the result is never worse than `init`.
///
/// Restart `r` draws from child stream `r` of `(config.seed, 0)`; restarts run
/// in parallel and the best is chosen by density, then lowest restart index.
pub fn anneal_search(graph: &OrthogonalityGraph, init: &CandidateSet, config: &AnnealConfig) -> Result<CandidateSet> {
    config.validate()?;
    if !init.feasible() {
        return Err(Error::param("annealing must start from an independent set"));
    }
    if init.members().iter().any(|&v| v >= graph.len()) {
        return Err(Error::param("initial set refers to a vertex outside the graph"));
    }
    let base = RandomStream::new(config.seed, 0);
    let per = config.moves / config.restarts as u64;
    let results: Vec<CandidateSet> = (0..config.restarts)
        .into_par_iter()
        .map(|r| anneal_once(graph, init, per, config, base.child(r as u64)))
        .collect();
    let mut best = init.clone();
    for c in results {
        if c.density() > best.density() && c.feasible() {
            best = c;
        }
    }
    Ok(best)
}

/// Exact maximum-weight independent set by branch and bound on bitmasks.
pub fn brute_force_max_independent(graph: &OrthogonalityGraph) -> Result<CandidateSet> {
    let m = graph.len();
    if m > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooLarge {
            vertices: m,
            max: BRUTE_FORCE_MAX_VERTICES,
        });
    }
    let nbr: Vec<u64> = (0..m)
        .map(|v| graph.neighbors(v).iter().fold(0u64, |acc, &u| acc | (1u64 << u)))
        .collect();
    let w: Vec<f64> = (0..m).map(|v| graph.weight(v)).collect();
    let mut search = BranchAndBound {
        nbr: &nbr,
        w: &w,
        best_mask: 0,
        best_weight: 0.0,
    };
    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    search.run(all, 0, 0.0);
    let members = (0..m).filter(|&v| search.best_mask & (1 << v) != 0).collect();
    Ok(CandidateSet::new(graph, members))
}

struct BranchAndBound<'a> {
    nbr: &'a [u64],
    w: &'a [f64],
    best_mask: u64,
    best_weight: f64,
}

impl BranchAndBound<'_> {
    fn mask_weight(&self, mut mask: u64) -> f64 {
        let mut s = 0.0;
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            s += self.w[v];
            mask &= mask - 1;
        }
        s
    }

    fn run(&mut self, cand: u64, chosen: u64, weight: f64) {
        if cand == 0 {
            if weight > self.best_weight {
                self.best_weight = weight;
                self.best_mask = chosen;
            }
            return;
        }
        if weight + self.mask_weight(cand) <= self.best_weight {
            return;
        }
        // branch on the candidate with most neighbors among the candidates
        let mut pivot = usize::MAX;
        let mut pivot_deg = 0;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.nbr[v] & cand).count_ones();
            if pivot == usize::MAX || d > pivot_deg {
                pivot = v;
                pivot_deg = d;
            }
        }
        if pivot_deg == 0 {
            // no edges left: take everything
            let total = weight + self.mask_weight(cand);
            if total > self.best_weight {
                self.best_weight = total;
                self.best_mask = chosen | cand;
            }
            return;
        }
        let bit = 1u64 << pivot;
        self.run(cand & !bit & !self.nbr[pivot], chosen | bit, weight + self.w[pivot]);
        self.run(cand & !bit, chosen, weight);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capgeom::CapKind;
    use crate::explorer::cloud::SpherePointCloud;
    use crate::explorer::graph::build_graph;

    const DEG: f64 = std::f64::consts::PI / 180.0;

    /// Four points on the circle 90 degrees apart form a 4-cycle.
    fn four_cycle() -> OrthogonalityGraph {
        build_graph(SpherePointCloud::circle(4).unwrap(), DEG).unwrap()
    }

    #[test]
    fn four_cycle_optimum() {
        let g = four_cycle();
        assert_eq!(g.edge_count(), 4);
        let best = brute_force_max_independent(&g).unwrap();
        assert_eq!(best.len(), 2);
        assert!((best.density() - 0.5).abs() < 1e-15);
        assert!(best.feasible());
        assert!(!g.has_edge(best.members()[0], best.members()[1]));
    }

    #[test]
    fn edgeless_graph_takes_everything() {
        let pts: Vec<Vec<f64>> = (0..10)
            .map(|i| {
                let t = 0.05 * i as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        let g = build_graph(SpherePointCloud::from_real_points(pts).unwrap(), DEG).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!((brute_force_max_independent(&g).unwrap().density() - 1.0).abs() < 1e-12);
        assert!((greedy_search(&g).density() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complete_pair_keeps_heavier_point() {
        let c = SpherePointCloud::from_real_points(vec![vec![1.0, 0.0], vec![0.0, 1.0]])
            .unwrap()
            .with_weights(vec![0.3, 0.7])
            .unwrap();
        let g = build_graph(c, DEG).unwrap();
        assert_eq!(greedy_search(&g).members(), &[1]);
        assert_eq!(brute_force_max_independent(&g).unwrap().members(), &[1]);
    }

    #[test]
    fn brute_force_guard() {
        let c = SpherePointCloud::circle(41).unwrap();
        let g = build_graph(c, DEG).unwrap();
        assert!(matches!(brute_force_max_independent(&g), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn seed_is_independent_for_any_delta() {
        let c = SpherePointCloud::sample(CapKind::Real, 3, 1500, &RandomStream::new(9, 0)).unwrap();
        for deg in [0.5, 2.0, 10.0, 30.0, 44.9] {
            let g = build_graph(c.clone(), deg * DEG).unwrap();
            let s = double_cap_seed(&g, &default_axis(&g)).unwrap();
            assert!(s.feasible(), "delta {deg}");
            assert!(!s.is_empty());
        }
        let c = SpherePointCloud::sample(CapKind::Complex, 2, 1500, &RandomStream::new(9, 1)).unwrap();
        for deg in [0.5, 2.0, 30.0] {
            let g = build_graph(c.clone(), deg * DEG).unwrap();
            assert!(double_cap_seed(&g, &default_axis(&g)).unwrap().feasible());
        }
    }

    #[test]
    fn circle_seed_is_two_arcs() {
        let g = build_graph(SpherePointCloud::circle(360).unwrap(), DEG).unwrap();
        let s = double_cap_seed(&g, &[1.0, 0.0]).unwrap();
        // |cos t| > cos(44.5 deg) on the integer-degree grid: t in -44..=44 and its antipode
        assert_eq!(s.len(), 178);
        assert!((s.density() - 0.5).abs() < 0.01);
        assert!(double_cap_seed(&g, &[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn anneal_is_deterministic_and_monotone() {
        let c = SpherePointCloud::sample(CapKind::Real, 3, 400, &RandomStream::new(3, 0)).unwrap();
        let g = build_graph(c, 5.0 * DEG).unwrap();
        let seed = double_cap_seed(&g, &default_axis(&g)).unwrap();
        let cfg = AnnealConfig {
            moves: 100_000,
            seed: 12,
            ..AnnealConfig::default()
        };
        let a = anneal_search(&g, &seed, &cfg).unwrap();
        let b = anneal_search(&g, &seed, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.feasible());
        assert!(a.density() >= seed.density());
        let infeasible = CandidateSet::new(&g, (0..g.len()).collect());
        assert!(anneal_search(&g, &infeasible, &cfg).is_err());
    }
}
