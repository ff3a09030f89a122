//! The potential-based solver.
//!
//! Row potentials `alpha`, `beta` stand in for the diagonal scalings
//! `t^alpha`, `t^beta`; row operations are applied to `A` and `B` in place and
//! only ever combine rows of equal potential. Each iteration either augments
//! `X` on the exchange graph of the top-degree parts or raises the potential
//! on the certified zero block until a new entry becomes tight.

mod engine;
pub mod invariants;
pub mod potential;
pub mod scheduler;
pub mod splitting;

pub use engine::{classify_event, solve, solve_heap, solve_naive, SolveOptions, Variant};
pub use potential::{extract_zero_part, initial_potential, kappa_exhaustive, tight_triples, NotProper, Potential};
pub use scheduler::{KappaScheduler, Root};
pub use splitting::{check_splitting_certificate, verify_splitting_certificate, weight_splitting, CertificateFailure};
