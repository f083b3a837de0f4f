//! Local determinability of multipartite pure states.
//!
//! A pure state on `H_1 ⊗ … ⊗ H_n` is *locally undetermined* when some other
//! pure state (not equal up to global phase) has the same `n` reduced states
//! on every `(n-1)`-party subset. This happens exactly when the state admits
//! Schmidt projectors with at least two rows: per-party families of pairwise
//! orthogonal projectors `P_j^i`, each acting nonnull on the state, such that
//! `ψ = Σ_j ⊗_i P_j^i ψ`.
//!
//! The crate is organised as:
//!
//! - [`tensor`]: dense multipartite states, partial traces, Schmidt
//!   decompositions and support projectors.
//! - [`schmidt`]: the decision procedure, certificate construction and
//!   verification, plus the computational-basis connectivity oracle.
//! - [`family`]: the set of states sharing all `(n-1)`-party marginals.
//! - [`consensus`]: the no-communication consensus protocol built from a
//!   certificate, with exact Born-rule tables and seeded trial sampling.
//! - [`states`]: constructors for standard states (GHZ, W, Dicke, Haar, ...).
//! - [`io`]: JSON state / plan files and list parsers used by the CLI.

#![forbid(unsafe_code)]

pub mod consensus;
pub mod error;
pub mod family;
pub mod io;
pub mod linalg;
pub mod schmidt;
pub mod states;
pub mod tensor;
pub mod tolerance;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tolerance::Tolerances;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
