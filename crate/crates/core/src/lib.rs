//! Numerics for three-mode photon-added GHZ entangled coherent states.
//!
//! The crate computes the squared norm, the four-term closed-form Wigner
//! function, per-mode Mandel `Q` and the three-mode correlation `g3` of
//!
//! ```text
//! |psi> ∝ a1†^r a2†^s a3†^t ( |α,α,α> + e^{iφ} |−α,−α,−α> )
//! ```
//!
//! and checks each closed form against a truncated Fock-space oracle.
//!
//! ```
//! use paghz::{state::StateParams, stats};
//!
//! let p = StateParams::from_alpha_sq(1.0, 0.0, 1, 1, 1).unwrap();
//! let q = stats::mandel_q(&p, 1).unwrap();
//! assert!(q < 0.0); // sub-Poissonian
//! ```

pub mod cli;
pub mod error;
pub mod format;
pub mod oracle;
pub mod special_fn;
pub mod state;
pub mod stats;
pub mod wigner;

pub use error::{Error, Result};
pub use state::{FockTensor, StateParams};
pub use stats::{MomentSet, Variant};
pub use wigner::{GridSpec, PhasePoint, WignerGrid};
