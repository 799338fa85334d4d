//! Numerical search for large orthogonality-avoiding sets on discretized
//! spheres, compared against the double-cap volumes.

mod cloud;
mod explore;
mod graph;
mod search;

pub use cloud::SpherePointCloud;
pub use explore::{explore, explore_ladder, ExploreConfig, SearchReport};
pub use graph::{build_graph, OrthogonalityGraph};
pub use search::{
    anneal_search, brute_force_max_independent, default_axis, double_cap_seed, greedy_search, AnnealConfig,
    CandidateSet, BRUTE_FORCE_MAX_VERTICES,
};
