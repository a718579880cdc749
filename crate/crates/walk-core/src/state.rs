//! Single-walker states: complex amplitudes over (position, coin) pairs.
//!
//! Amplitudes are stored densely over a contiguous position window. On the
//! line the window grows by one site per side per step, which is exactly the
//! light cone of the walk, so the dense layout wastes nothing. On a cycle the
//! window is the whole ring; with absorbing boundaries it is the open
//! interval between the two absorbing sites.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::numeric::compensated_sum;

/// Probabilities below this are dropped from emitted distributions. Internal
/// amplitudes are never pruned.
pub(crate) const PRUNE_EPS: f64 = 1e-15;

/// Tolerance for normalization checks on user-supplied amplitudes.
pub(crate) const NORM_TOL: f64 = 1e-12;

/// Coin (internal, spin-like) basis label.
///
/// `Up` is the computational |0>, `Down` is |1>. The conditional shift moves
/// `Up` amplitude by +1 and `Down` amplitude by -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoinBasis {
    Up,
    Down,
}

impl CoinBasis {
    /// Both values, in index order.
    pub const BOTH: [CoinBasis; 2] = [CoinBasis::Up, CoinBasis::Down];

    /// Matrix/storage index: `Up` -> 0, `Down` -> 1.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            CoinBasis::Up => 0,
            CoinBasis::Down => 1,
        }
    }

    /// Displacement applied by the conditional shift: +1 for `Up`, -1 for `Down`.
    #[inline]
    pub fn drift(self) -> i64 {
        match self {
            CoinBasis::Up => 1,
            CoinBasis::Down => -1,
        }
    }

}

/// Lattice on which a walker moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Unbounded integer line.
    Line,
    /// Ring of `n` sites, positions canonicalized to `0..n`; shifts wrap mod `n`.
    Cycle(usize),
    /// Line segment whose end sites `left` and `right` absorb: amplitude
    /// shifted onto either one is removed and accumulated as absorbed
    /// probability. The walker occupies the open interval between them.
    Absorbing { left: i64, right: i64 },
}

impl Topology {
    /// Checks the structural constraints of the variant.
    ///
    /// Cycles need `n >= 3`: with n = 2 both shift directions coincide and
    /// the walk degenerates. Absorbing boundaries need at least one interior
    /// site.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Topology::Line => Ok(()),
            Topology::Cycle(n) => {
                if n < 3 {
                    Err(WalkError::CycleTooSmall(n))
                } else {
                    Ok(())
                }
            }
            Topology::Absorbing { left, right } => {
                if right - left < 2 {
                    Err(WalkError::InvalidAbsorbingBounds { left, right })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// True if `position` is a site a walker may occupy.
    pub fn contains(&self, position: i64) -> bool {
        match *self {
            Topology::Line => true,
            Topology::Cycle(n) => position >= 0 && (position as u64) < n as u64,
            Topology::Absorbing { left, right } => position > left && position < right,
        }
    }

    pub(crate) fn describe(&self) -> String {
        match *self {
            Topology::Line => "the line".to_string(),
            Topology::Cycle(n) => format!("the {n}-cycle (positions 0..{n})"),
            Topology::Absorbing { left, right } => {
                format!("the absorbing segment ({left}, {right})")
            }
        }
    }
}

/// Pure state of one walker: an amplitude for every (position, coin) pair in
/// the current window, plus the probability already removed by absorbing
/// boundaries.
#[derive(Clone, Debug, PartialEq)]
pub struct SingleParticleState {
    topology: Topology,
    /// Position of the first window cell.
    lo: i64,
    /// Dense window, layout `[position][coin]` (coin fastest).
    amps: Vec<Complex64>,
    absorbed: f64,
}

impl SingleParticleState {
    /// Point source: all amplitude at one position, coin state
    /// `coin_up * |up> + coin_down * |down>`.
    ///
    /// The coin amplitudes must be normalized to 1 within 1e-12 and the
    /// position must be a valid site of `topology`.
    pub fn point(
        topology: Topology,
        position: i64,
        coin_up: Complex64,
        coin_down: Complex64,
    ) -> Result<Self> {
        topology.validate()?;
        if !topology.contains(position) {
            return Err(WalkError::PositionOutOfRange {
                position,
                topology: topology.describe(),
            });
        }
        if !coin_up.is_finite() || !coin_down.is_finite() {
            return Err(WalkError::NonFiniteAmplitude);
        }
        let norm_sq = coin_up.norm_sqr() + coin_down.norm_sqr();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(WalkError::UnnormalizedCoin { norm_sq });
        }

        let (lo, width) = match topology {
            Topology::Line => (position, 1),
            Topology::Cycle(n) => (0, n),
            Topology::Absorbing { left, right } => (left + 1, (right - left - 1) as usize),
        };
        let mut amps = vec![Complex64::ZERO; 2 * width];
        let cell = (position - lo) as usize;
        amps[2 * cell] = coin_up;
        amps[2 * cell + 1] = coin_down;
        Ok(SingleParticleState {
            topology,
            lo,
            amps,
            absorbed: 0.0,
        })
    }

    /// Builds a state from raw window data without normalization checks.
    /// Test and engine constructor; callers are responsible for invariants.
    pub(crate) fn from_parts(
        topology: Topology,
        lo: i64,
        amps: Vec<Complex64>,
        absorbed: f64,
    ) -> Self {
        debug_assert_eq!(amps.len() % 2, 0);
        SingleParticleState {
            topology,
            lo,
            amps,
            absorbed,
        }
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Probability removed by absorbing boundaries so far (0 on line/cycle).
    pub fn absorbed(&self) -> f64 {
        self.absorbed
    }

    /// First position of the amplitude window.
    pub fn window_lo(&self) -> i64 {
        self.lo
    }

    /// Number of positions in the amplitude window.
    pub fn window_len(&self) -> usize {
        self.amps.len() / 2
    }

    /// Positions covered by the window, ascending.
    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        self.lo..self.lo + self.window_len() as i64
    }

    /// Amplitude at (position, coin); zero outside the window. On a cycle the
    /// position is reduced mod n first.
    pub fn amplitude(&self, position: i64, coin: CoinBasis) -> Complex64 {
        let position = match self.topology {
            Topology::Cycle(n) => position.rem_euclid(n as i64),
            _ => position,
        };
        let cell = position - self.lo;
        if cell < 0 || cell as usize >= self.window_len() {
            return Complex64::ZERO;
        }
        self.amps[2 * cell as usize + coin.index()]
    }

    /// Probability of finding the walker at `position` (summed over coins,
    /// not pruned).
    pub fn probability(&self, position: i64) -> f64 {
        self.amplitude(position, CoinBasis::Up).norm_sqr()
            + self.amplitude(position, CoinBasis::Down).norm_sqr()
    }

    /// Euclidean norm sqrt(sum |amplitude|^2). Stays at 1 under coin and
    /// shift operations on line and cycle; decreases with absorption.
    pub fn norm(&self) -> f64 {
        compensated_sum(self.amps.iter().map(|a| a.norm_sqr())).sqrt()
    }

    /// Position probability distribution P(i) = sum_c |a_{i,c}|^2.
    ///
    /// Entries below 1e-15 are omitted from the result (the amplitudes
    /// themselves are untouched), so emitted files stay free of noise-level
    /// rows.
    pub fn position_distribution(&self) -> Distribution {
        let mut entries = BTreeMap::new();
        for (cell, pair) in self.amps.chunks_exact(2).enumerate() {
            let p = pair[0].norm_sqr() + pair[1].norm_sqr();
            if p >= PRUNE_EPS {
                entries.insert(self.lo + cell as i64, p);
            }
        }
        Distribution { entries }
    }

    pub(crate) fn raw_window(&self) -> &[Complex64] {
        &self.amps
    }
}

/// Probabilities by position, iterated in ascending position order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Distribution {
    entries: BTreeMap<i64, f64>,
}

impl Distribution {
    /// Builds a distribution from explicit entries. Zero entries are skipped;
    /// nothing else is filtered.
    pub fn from_entries<I: IntoIterator<Item = (i64, f64)>>(entries: I) -> Self {
        let entries = entries
            .into_iter()
            .filter(|&(_, p)| p != 0.0)
            .collect::<BTreeMap<_, _>>();
        debug_assert!(entries.values().all(|p| p.is_finite() && *p >= 0.0));
        Distribution { entries }
    }

    /// Probability at `position`; 0 if absent.
    pub fn probability(&self, position: i64) -> f64 {
        self.entries.get(&position).copied().unwrap_or(0.0)
    }

    /// (position, probability) pairs in ascending position order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.entries.iter().map(|(&i, &p)| (i, p))
    }

    /// Number of stored entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total stored probability.
    pub fn total(&self) -> f64 {
        compensated_sum(self.entries.values().copied())
    }
}
