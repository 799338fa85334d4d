//! Communication lower bounds for simulating n qubits.
//!
//! ```bash
//! cargo run --example bounds_table
//! ```

use doublecap::capgeom::{bounds_table, DEFAULT_EPSILON};

fn main() -> doublecap::Result<()> {
    println!(
        "{:>3} {:>10} {:>14} {:>14} {:>14} {:>14} {:>10}",
        "n", "N", "real bits", "complex bits", "theorem2", "entangled", "2^(n/3)"
    );
    let rows = bounds_table(20, DEFAULT_EPSILON)?;
    for r in &rows {
        println!(
            "{:>3} {:>10} {:>14.3} {:>14.0} {:>14.3} {:>14.0} {:>10.3}",
            r.n,
            r.dimension,
            r.real_bound_bits,
            r.complex_bound_bits,
            r.theorem2_bits,
            r.entanglement_bits,
            r.ref_2_pow_n_over_3
        );
    }
    if let Some(last) = rows.last() {
        println!("\ntheorem2 bits / 2^n = {:.4}", last.theorem2_coefficient());
    }
    Ok(())
}
