//! Exact (non-sampling) simulation of quantum walks on lines and cycles.
//!
//! The crate covers four families of dynamics:
//!
//! * discrete-time walks of a single particle driven by a 2x2 unitary coin
//!   and a spin-conditional shift ([`SingleParticleState`], [`CoinOperator`]),
//! * discrete-time walks of two non-interacting particles with product or
//!   coin-entangled initial states ([`TwoParticleState`]),
//! * continuous-time quantum and classical walks generated by the graph
//!   Laplacian ([`ctqw`]),
//! * distribution statistics and classical baselines ([`analysis`]).
//!
//! States are plain values: every operation returns a new state and never
//! mutates its input, so states can be shared freely across threads. All
//! amplitudes are kept exactly (dense complex vectors); probabilities are
//! only ever derived views.

pub mod analysis;
pub mod coin;
pub mod ctqw;
pub mod dtqw;
mod error;
mod numeric;
pub mod state;
pub mod two_particle;

pub use coin::CoinOperator;
pub use error::{Result, WalkError};
pub use state::{CoinBasis, Distribution, SingleParticleState, Topology};
pub use two_particle::{DensityMatrix, InitialStateKind, JointDistribution, Particle, TwoParticleState};
