//! Search for large independent sets in sphere orthogonality graphs and
//! compare them with the double cap.
//!
//! ```bash
//! cargo run --release --example explore_double_cap
//! ```

use doublecap::capgeom::CapKind;
use doublecap::explorer::{
    anneal_search, brute_force_max_independent, build_graph, explore, explore_ladder, AnnealConfig, CandidateSet,
    ExploreConfig, SpherePointCloud,
};
use doublecap::hilbert::RandomStream;

fn main() -> doublecap::Result<()> {
    let deg = std::f64::consts::PI / 180.0;

    let report = explore(&ExploreConfig::new(CapKind::Real, 3, 4000, 2.0 * deg, 1))?;
    println!(
        "real d=3: best {:.4} (seed {:.4}, greedy {:.4}), V_3 = {:.4}, gap {:+.4}",
        report.best_density, report.seed_density, report.greedy_density, report.target_volume, report.gap
    );

    let config = ExploreConfig {
        budget: 200_000,
        ..ExploreConfig::new(CapKind::Complex, 2, 4000, 10.0 * deg, 5)
    };
    println!("\ncomplex N=2 delta ladder:");
    for r in explore_ladder(&config, &[10.0 * deg, 6.0 * deg, 3.0 * deg])? {
        println!("  delta {:>5.2} deg: best {:.4}", r.delta_radians / deg, r.best_density);
    }

    // On small graphs the annealer can be checked against the exact optimum.
    let cloud = SpherePointCloud::sample(CapKind::Real, 3, 24, &RandomStream::new(3, 0))?;
    let graph = build_graph(cloud, 30.0 * deg)?;
    let exact = brute_force_max_independent(&graph)?;
    let annealed = anneal_search(&graph, &CandidateSet::empty(), &AnnealConfig::default())?;
    println!(
        "\n24-point graph ({} edges): exact {:.4}, annealed {:.4}",
        graph.edge_count(),
        exact.density(),
        annealed.density()
    );
    report.to_json(false).as_object().into_iter().flatten().for_each(|(k, v)| println!("  {k}: {v}"));
    Ok(())
}
