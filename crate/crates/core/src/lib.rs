//! Transition amplitudes of Toffoli–Hadamard circuits as permanents of a
//! single integer matrix.
//!
//! The pipeline is:
//!
//! 1. [`circuit`]: parse and normalize a circuit so every line segment
//!    touches at most one Toffoli.
//! 2. [`gf2`]: label it with path variables and build the GF(2) polynomial
//!    `f`; `⟨out|U|in⟩ = (#0 − #1) / √2^h`.
//! 3. [`encoder`]: compile `f` with its boundary into a matrix `G` with
//!    `per(G) = #0 − #1`.
//! 4. [`permanent`]: evaluate `per(G)` exactly or by sampling.
//!
//! [`statevec`] is an exact simulator used as ground truth, and [`pipeline`]
//! ties the routes together for cross-checking.

pub mod circuit;
pub mod encoder;
pub mod gf2;
pub mod matrix;
pub mod permanent;
pub mod pipeline;
pub mod statevec;

pub use circuit::{normalize, parse_circuit, random_circuit, serialize_circuit, BasisState, Circuit, Gate};
pub use encoder::{encode, Encoding, Mode};
pub use gf2::{count_gap, label_circuit, substitute, BoundaryAssignment, Gf2Poly, Labeling, Monomial, VarId};
pub use matrix::IntMatrix;
pub use permanent::{per_glynn_exact, per_gurvits, per_naive, per_ryser, spectral_norm, McEstimate, NormReport};
pub use pipeline::{Instance, VerifyConfig, VerifyReport};
pub use statevec::{amplitude, simulate, DyadicAmplitude};
