//! Double-cap volumes by every available method.
//!
//! ```bash
//! cargo run --release --example cap_volumes
//! ```

use doublecap::capgeom::{
    complex_cap_decomposition, complex_cap_volume, complex_cap_volume_closed, log2_asymptotic_real_cap_volume,
    log2_real_cap_volume, monte_carlo_cap_volume, real_cap_volume, real_cap_volume_beta, CapKind,
};
use doublecap::hilbert::RandomStream;

fn main() -> doublecap::Result<()> {
    println!("{:>4} {:>22} {:>22}", "d", "V_d (quadrature)", "V_d (beta)");
    for d in [2, 3, 4, 8, 16, 64] {
        println!("{d:>4} {:>22.16} {:>22.16}", real_cap_volume(d)?, real_cap_volume_beta(d)?);
    }

    println!("\n{:>4} {:>22} {:>22} {:>22}", "N", "U_N (quadrature)", "U_N = 2^(1-N)", "U_N (decomposed)");
    for n in [2, 3, 4, 10] {
        let dec = complex_cap_decomposition(n)?;
        println!(
            "{n:>4} {:>22.16} {:>22.16} {:>22.16}",
            complex_cap_volume(n)?,
            complex_cap_volume_closed(n)?,
            dec.volume
        );
    }

    println!("\nlog2 V_N against the asymptotic formula");
    for n in [64, 256, 4096, 1 << 20] {
        let exact = log2_real_cap_volume(n)?;
        let approx = log2_asymptotic_real_cap_volume(n)?;
        let rel = (approx - exact).exp2() - 1.0;
        println!("N = {n:>8}: exact {exact:>16.6}  asymptotic {approx:>16.6}  relative error {rel:.2e}");
    }

    let rng = RandomStream::new(1, 0);
    for (kind, dim) in [(CapKind::Real, 3), (CapKind::Complex, 3)] {
        let est = monte_carlo_cap_volume(kind, dim, 1_000_000, &rng)?;
        println!(
            "\nMonte Carlo {kind} dim {dim}: {:.5} +/- {:.5} ({} of {} hits)",
            est.estimate, est.std_error, est.hits, est.trials
        );
    }
    Ok(())
}
