//! Discrete coherent states for n qubits over GF(2^n).
//!
//! The crate builds the finite field GF(2^n) with a self-dual basis,
//! the generalized Pauli group and its Hermitian displacement
//! operators, coherent states as displaced fiducials, the discrete Q-
//! and P-quasidistributions, an h-function ordering of the phase-space
//! grid, and the sum-of-squared-Q correlation measure.
//!
//! Entry points: [`gf2n::build_field`], [`states::fiducial`],
//! [`states::coherent_state`], [`quasidist::q_function`],
//! [`ordering::order_axis`]. The `dcs` binary exposes the same
//! functionality from the command line.

pub mod gf2n;
pub mod ordering;
pub mod pauli;
pub mod quasidist;
pub mod states;
pub mod verify;

pub use gf2n::{build_field, FieldElement, FieldSpec};
pub use pauli::{Operator, PhasePoint};
pub use states::StateVector;
