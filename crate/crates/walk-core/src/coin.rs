//! 2x2 unitary coin operators and their action on walker states.

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::state::{CoinBasis, SingleParticleState};

/// A 2x2 unitary acting on the coin space, stored row-major in the
/// (`Up`, `Down`) basis. Unitarity is enforced at construction (tolerance
/// 1e-12) and the operator is immutable afterwards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinOperator {
    entries: [[Complex64; 2]; 2],
}

impl CoinOperator {
    /// Maximum elementwise deviation of `C^dag C` from the identity accepted
    /// at construction.
    pub const UNITARITY_TOL: f64 = 1e-12;

    /// Builds a coin from an explicit matrix, rejecting non-unitary input.
    pub fn from_entries(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let coin = CoinOperator { entries };
        let defect = coin.unitarity_defect();
        if !defect.is_finite() || defect > Self::UNITARITY_TOL {
            return Err(WalkError::NonUnitaryCoin { defect });
        }
        Ok(coin)
    }

    /// The balanced coin (1/sqrt(2)) [[1, 1], [1, -1]].
    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        CoinOperator {
            entries: [[h, h], [h, -h]],
        }
    }

    /// The trivial coin: leaves the coin state alone, so the walk is pure
    /// drift.
    pub fn identity() -> Self {
        CoinOperator {
            entries: [
                [Complex64::ONE, Complex64::ZERO],
                [Complex64::ZERO, Complex64::ONE],
            ],
        }
    }

    /// Euler-angle family covering every 2x2 unitary up to global phase:
    ///
    /// ```text
    /// [ cos(theta)              e^{i lambda} sin(theta)      ]
    /// [ e^{i phi} sin(theta)   -e^{i (phi+lambda)} cos(theta) ]
    /// ```
    ///
    /// `su2(pi/4, 0, 0)` is exactly the Hadamard coin.
    pub fn su2(theta: f64, phi: f64, lambda: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        let ei = |x: f64| Complex64::from_polar(1.0, x);
        CoinOperator {
            entries: [
                [Complex64::new(cos, 0.0), ei(lambda) * sin],
                [ei(phi) * sin, -ei(phi + lambda) * cos],
            ],
        }
    }

    /// Matrix element `<row| C |col>`.
    #[inline]
    pub fn entry(&self, row: CoinBasis, col: CoinBasis) -> Complex64 {
        self.entries[row.index()][col.index()]
    }

    /// Max elementwise deviation of `C^dag C` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let c = &self.entries;
        let mut defect = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let mut dot = Complex64::ZERO;
                for k in 0..2 {
                    dot += c[k][i].conj() * c[k][j];
                }
                let target = if i == j { Complex64::ONE } else { Complex64::ZERO };
                defect = defect.max((dot - target).norm());
            }
        }
        defect
    }

    #[inline]
    pub(crate) fn raw(&self) -> &[[Complex64; 2]; 2] {
        &self.entries
    }
}

/// Mixes the two coin amplitudes of one cell in place.
#[inline]
pub(crate) fn mix_cell(coin: &[[Complex64; 2]; 2], cell: &mut [Complex64]) {
    let up = cell[0];
    let down = cell[1];
    cell[0] = coin[0][0] * up + coin[0][1] * down;
    cell[1] = coin[1][0] * up + coin[1][1] * down;
}

impl SingleParticleState {
    /// Applies `coin` to the coin amplitudes at every position. Positions are
    /// untouched and the norm is preserved.
    pub fn apply_coin(&self, coin: &CoinOperator) -> SingleParticleState {
        let mut amps = self.raw_window().to_vec();
        for cell in amps.chunks_exact_mut(2) {
            mix_cell(coin.raw(), cell);
        }
        SingleParticleState::from_parts(self.topology(), self.window_lo(), amps, self.absorbed())
    }
}
