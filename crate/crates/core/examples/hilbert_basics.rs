//! Pure states, Born probabilities and the Bloch map.
//!
//! ```bash
//! cargo run --example hilbert_basics
//! ```

use doublecap::hilbert::{
    bloch_from_state, born_probability, haar_random_state, is_orthogonal, PureState, RandomStream,
    ORTHOGONALITY_TOLERANCE,
};
use num_complex::Complex64;

fn main() -> doublecap::Result<()> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = PureState::basis(2, 0)?;
    let one = PureState::basis(2, 1)?;
    let plus_i = PureState::new(vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)])?;

    println!("|<+i|0>|^2 = {:.6}", born_probability(&zero, &plus_i)?);
    println!("|0> orthogonal to |1>: {}", is_orthogonal(&zero, &one, ORTHOGONALITY_TOLERANCE)?);
    let b = bloch_from_state(&plus_i)?;
    println!("Bloch vector of |+i>: ({:.3}, {:.3}, {:.3})", b.x, b.y, b.z);

    // Haar-random states in C^4: the mean of |<0|psi>|^2 is 1/4.
    let mut rng = RandomStream::new(7, 0);
    let e0 = PureState::basis(4, 0)?;
    let samples = 100_000;
    let mut sum = 0.0;
    for _ in 0..samples {
        sum += born_probability(&haar_random_state(4, &mut rng)?, &e0)?;
    }
    println!("mean |<0|psi>|^2 over {samples} Haar states in C^4: {:.4}", sum / samples as f64);
    Ok(())
}
