//! Shared state builders for the benchmark targets.

use num_complex::Complex64;
use walk_core::{CoinOperator, InitialStateKind, SingleParticleState, Topology, TwoParticleState};

pub fn hadamard() -> CoinOperator {
    CoinOperator::hadamard()
}

/// |0, up> on the given lattice.
pub fn up_walker(topology: Topology) -> SingleParticleState {
    SingleParticleState::point(topology, 0, Complex64::ONE, Complex64::ZERO)
        .expect("valid benchmark state")
}

/// The balanced (|up> + i |down>)/sqrt(2) point source on the line.
pub fn balanced_walker() -> SingleParticleState {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    SingleParticleState::point(
        Topology::Line,
        0,
        Complex64::new(s, 0.0),
        Complex64::new(0.0, s),
    )
    .expect("valid benchmark state")
}

pub fn two_walkers(kind: InitialStateKind, topology: Topology) -> TwoParticleState {
    TwoParticleState::initial(kind, topology).expect("valid benchmark state")
}
