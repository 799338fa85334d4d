//! Classical communication cost of simulating a qubit channel followed by a
//! rank-1 projective measurement.
//!
//! The crate is organised around five pieces:
//!
//! * [`hilbert`]: pure states, Bloch vectors, Born probabilities and seeded
//!   samplers for the Haar measure and the uniform sphere measure.
//! * [`capgeom`]: real and complex double-cap volumes by quadrature, by the
//!   regularized incomplete beta function, by geometric decomposition and by
//!   Monte Carlo, plus the table of communication lower bounds.
//! * [`protocol`]: the 2-bit one-way protocol for a single qubit, a Monte Carlo
//!   equivalence verifier, and an auditor for tabulated protocols.
//! * [`explorer`]: orthogonality graphs on discretized spheres and
//!   independent-set search (greedy, annealing, exact branch and bound).
//! * [`cli`]: the `doublecap` command-line surface.
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod capgeom;
pub mod cli;
mod error;
pub mod explorer;
pub mod hilbert;
pub mod protocol;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
