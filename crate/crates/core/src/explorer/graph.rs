use rayon::prelude::*;

use super::cloud::SpherePointCloud;
use crate::{Error, Result};

/// Near-orthogonality graph: `i ~ j` iff the overlap of points `i` and `j` is
/// at most `sin(delta)`, i.e. their angle is within `delta` of a right angle.
#[derive(Clone, Debug)]
pub struct OrthogonalityGraph {
    cloud: SpherePointCloud,
    delta: f64,
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
}

/// Exact O(M^2) pairwise scan, parallel over rows.
pub fn build_graph(cloud: SpherePointCloud, delta: f64) -> Result<OrthogonalityGraph> {
    if !(delta > 0.0 && delta < std::f64::consts::FRAC_PI_4) {
        return Err(Error::param(format!("delta must lie in (0, pi/4), got {delta}")));
    }
    if cloud.len() > u32::MAX as usize {
        return Err(Error::param("too many points"));
    }
    let threshold = delta.sin();
    let m = cloud.len();
    let upper: Vec<Vec<u32>> = (0..m)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..m)
                .filter(|&j| cloud.overlap(i, j) <= threshold)
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); m];
    let mut edge_count = 0;
    for (i, row) in upper.iter().enumerate() {
        for &j in row {
            adjacency[i].push(j);
            adjacency[j as usize].push(i as u32);
            edge_count += 1;
        }
    }
    adjacency.iter_mut().for_each(|r| r.sort_unstable());
    Ok(OrthogonalityGraph {
        cloud,
        delta,
        adjacency,
        edge_count,
    })
}

impl OrthogonalityGraph {
    pub fn cloud(&self) -> &SpherePointCloud {
        &self.cloud
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `sin(delta)`
    pub fn threshold(&self) -> f64 {
        self.delta.sin()
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.cloud.weights()[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&(b as u32)).is_ok()
    }

    /// Full pairwise re-scan of `members` against the raw overlaps, ignoring
    /// the stored adjacency.
    pub fn is_independent(&self, members: &[usize]) -> bool {
        let t = self.threshold();
        members.par_iter().enumerate().all(|(i, &a)| {
            members[i + 1..]
                .iter()
                .all(|&b| a != b && self.cloud.overlap(a, b) > t)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capgeom::CapKind;
    use crate::hilbert::{PureState, RandomStream};

    const DEG: f64 = std::f64::consts::PI / 180.0;

    #[test]
    fn orthogonal_pair_has_edge() {
        let c = SpherePointCloud::from_real_points(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let g = build_graph(c, DEG).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 0));
    }

    #[test]
    fn antipodal_pair_has_no_edge() {
        let c = SpherePointCloud::from_real_points(vec![vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(build_graph(c.clone(), DEG).unwrap().edge_count(), 0);
        assert_eq!(build_graph(c, 44.0 * DEG).unwrap().edge_count(), 0);
    }

    #[test]
    fn complex_basis_pair_has_edge() {
        let states = [PureState::basis(2, 0).unwrap(), PureState::basis(2, 1).unwrap()];
        let g = build_graph(SpherePointCloud::from_states(&states).unwrap(), DEG).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn delta_range_is_enforced() {
        let c = SpherePointCloud::circle(8).unwrap();
        assert!(build_graph(c.clone(), 0.0).is_err());
        assert!(build_graph(c.clone(), std::f64::consts::FRAC_PI_4).is_err());
        assert!(build_graph(c, 0.3).is_ok());
    }

    #[test]
    fn symmetric_irreflexive_and_matches_scan() {
        let c = SpherePointCloud::sample(CapKind::Real, 3, 300, &RandomStream::new(4, 0)).unwrap();
        let g = build_graph(c, 10.0 * DEG).unwrap();
        let t = g.threshold();
        let mut count = 0;
        for i in 0..g.len() {
            assert!(!g.has_edge(i, i));
            for j in 0..g.len() {
                assert_eq!(g.has_edge(i, j), g.has_edge(j, i));
                if i < j && g.cloud().overlap(i, j) <= t {
                    count += 1;
                    assert!(g.has_edge(i, j));
                }
            }
        }
        assert_eq!(count, g.edge_count());
    }
}
