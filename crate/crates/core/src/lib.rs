//! Quantized bimatrix games under the Marinatto-Weber (MW) protocol and its
//! extended variant (eMW), in which each player additionally chooses whether
//! the shared quantum state is used at all.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: small dense complex vectors and matrices.
//! - [`game`]: classical bimatrix games, mixed strategies, quotient games.
//! - [`mw`]: the MW final state, payoff operator and output game, for any
//!   `n x m` game via cyclic shift operators.
//! - [`refined`]: two-parameter local unitaries that recover the classical
//!   game from any separable two-qubit state.
//! - [`emw`]: the extended scheme with one or more joint quantum strategies.
//! - [`classify`]: payoff-equivalent pure states and the classical /
//!   non-classical classifier.
//! - [`nash`]: best responses, pure equilibria and support enumeration.
//!
//! Batch evaluations (all pure profiles of an output game, all support pairs,
//! classification sweeps) go through [`exec::Execution`]; with the `parallel`
//! feature they run on rayon, and results are identical to the sequential path.

pub mod classify;
pub mod emw;
pub mod error;
pub mod exec;
pub mod game;
pub mod linalg;
pub mod mw;
pub mod nash;
pub mod refined;
mod tolerance;

pub use error::{Error, Result};
pub use exec::Execution;
pub use tolerance::{set_tolerance, tolerance, DEFAULT_TOLERANCE, NASH_TOLERANCE};
