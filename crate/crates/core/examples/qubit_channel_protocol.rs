//! Two classical bits plus shared randomness reproduce qubit measurement
//! statistics.
//!
//! ```bash
//! cargo run --release --example qubit_channel_protocol
//! ```

use doublecap::hilbert::{haar_random_state, RandomStream};
use doublecap::protocol::{lune_solid_angles, tb_encode, SharedPair, TonerBacon};

fn main() -> doublecap::Result<()> {
    let mut rng = RandomStream::new(2024, 0);
    let protocol = TonerBacon::default();

    println!("{:>10} {:>10} {:>10} {:>10}", "born", "frequency", "deviation", "sigma");
    for i in 0..8 {
        let psi = haar_random_state(2, &mut rng)?;
        let phi = haar_random_state(2, &mut rng)?;
        let r = protocol.simulate(&psi, &phi, 200_000, &rng.child(i))?;
        println!("{:>10.5} {:>10.5} {:>10.5} {:>10.5}", r.born, r.frequency, r.deviation, r.std_error);
    }

    let psi = haar_random_state(2, &mut rng)?;
    let same = protocol.simulate(&psi, &psi, 10_000, &rng.child(100))?;
    println!("\nphi = psi: frequency {}", same.frequency);

    // Alice's message partitions the Bloch sphere into four lunes.
    let shared = SharedPair::sample(&mut rng);
    let fractions = lune_solid_angles(&shared);
    println!("lune solid-angle fractions: {fractions:.4?} (sum {:.12})", fractions.iter().sum::<f64>());
    let x = doublecap::hilbert::BlochVector::new(0.0, 0.0, 1.0)?;
    let msg = tb_encode(&x, &shared)?;
    println!("message for |0>: index {} ({:?})", msg.index(), msg);
    Ok(())
}
