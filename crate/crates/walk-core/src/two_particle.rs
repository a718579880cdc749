//! Two non-interacting walkers evolved under the product step U (x) U.
//!
//! The state is the dense rank-4 tensor A[c1, c2, m, n]: coin of particle 1,
//! coin of particle 2, and both positions over a shared window. Both
//! particles see the same topology and the same coin. A line walk of N steps
//! needs a (2 x 2 x (2N+1) x (2N+1)) block, about 2.6 MB of complex values at
//! N = 100, so dense storage is cheap and the step kernel stays branch-free.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coin::CoinOperator;
use crate::error::{Result, WalkError};
use crate::numeric::compensated_sum;
use crate::state::{CoinBasis, Distribution, SingleParticleState, Topology, PRUNE_EPS};

/// The three initial coin configurations: both walkers at the origin with
/// coins (down, up), either as a plain product or as one of the two
/// maximally entangled combinations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialStateKind {
    /// |down>_1 |up>_2
    Product,
    /// (|down up> + |up down>) / sqrt(2) -- bosonic.
    Symmetric,
    /// (|down up> - |up down>) / sqrt(2) -- fermionic.
    Antisymmetric,
}

/// Which walker a marginal refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Particle {
    One,
    Two,
}

/// Joint state of two walkers on a shared topology.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoParticleState {
    topology: Topology,
    /// Position of window cell 0 (both particles share the window).
    lo: i64,
    width: usize,
    /// Row-major `[coin1][coin2][pos1][pos2]`.
    amps: Vec<Complex64>,
    absorbed: f64,
}

#[inline]
fn plane(c1: usize, c2: usize) -> usize {
    2 * c1 + c2
}

impl TwoParticleState {
    /// Both walkers at position 0 with the coin configuration of `kind`.
    pub fn initial(kind: InitialStateKind, topology: Topology) -> Result<Self> {
        topology.validate()?;
        if !topology.contains(0) {
            return Err(WalkError::PositionOutOfRange {
                position: 0,
                topology: topology.describe(),
            });
        }
        let (lo, width) = match topology {
            Topology::Line => (0, 1),
            Topology::Cycle(n) => (0, n),
            Topology::Absorbing { left, right } => (left + 1, (right - left - 1) as usize),
        };
        let mut state = TwoParticleState {
            topology,
            lo,
            width,
            amps: vec![Complex64::ZERO; 4 * width * width],
            absorbed: 0.0,
        };
        let origin = (-lo) as usize;
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut set = |c1: usize, c2: usize, value: Complex64| {
            let idx = (plane(c1, c2) * state.width + origin) * state.width + origin;
            state.amps[idx] = value;
        };
        match kind {
            InitialStateKind::Product => set(1, 0, Complex64::ONE),
            InitialStateKind::Symmetric => {
                set(1, 0, s);
                set(0, 1, s);
            }
            InitialStateKind::Antisymmetric => {
                set(1, 0, s);
                set(0, 1, -s);
            }
        }
        Ok(state)
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn absorbed(&self) -> f64 {
        self.absorbed
    }

    /// First position of the shared window.
    pub fn window_lo(&self) -> i64 {
        self.lo
    }

    /// Number of positions in the shared window.
    pub fn window_len(&self) -> usize {
        self.width
    }

    /// Positions covered by the window, ascending.
    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        self.lo..self.lo + self.width as i64
    }

    /// Amplitude of |coin1, coin2> |pos1, pos2>; zero outside the window.
    /// Cycle positions are reduced mod n.
    pub fn amplitude(
        &self,
        coin1: CoinBasis,
        coin2: CoinBasis,
        pos1: i64,
        pos2: i64,
    ) -> Complex64 {
        let (pos1, pos2) = match self.topology {
            Topology::Cycle(n) => (pos1.rem_euclid(n as i64), pos2.rem_euclid(n as i64)),
            _ => (pos1, pos2),
        };
        let m = pos1 - self.lo;
        let n = pos2 - self.lo;
        if m < 0 || n < 0 || m as usize >= self.width || n as usize >= self.width {
            return Complex64::ZERO;
        }
        let idx =
            (plane(coin1.index(), coin2.index()) * self.width + m as usize) * self.width
                + n as usize;
        self.amps[idx]
    }

    /// Probability of finding the walkers at (pos1, pos2), summed over both
    /// coins (not pruned).
    pub fn joint_probability(&self, pos1: i64, pos2: i64) -> f64 {
        CoinBasis::BOTH
            .iter()
            .flat_map(|&c1| {
                CoinBasis::BOTH
                    .iter()
                    .map(move |&c2| self.amplitude(c1, c2, pos1, pos2).norm_sqr())
            })
            .sum()
    }

    /// Euclidean norm of the joint amplitude tensor.
    pub fn norm(&self) -> f64 {
        compensated_sum(self.amps.iter().map(|a| a.norm_sqr())).sqrt()
    }

    /// One product step: the coin acts on both coins, then each particle is
    /// shifted by its own coin direction.
    pub fn step(&self, coin: &CoinOperator) -> TwoParticleState {
        let mut engine = TensorBuffers::new(self, 1);
        engine.advance(coin);
        engine.snapshot()
    }

    /// `steps` product steps with no intermediate measurement.
    pub fn evolve(&self, coin: &CoinOperator, steps: usize) -> TwoParticleState {
        let mut engine = TensorBuffers::new(self, steps);
        for _ in 0..steps {
            engine.advance(coin);
        }
        engine.snapshot()
    }

    /// Builds the evolved two-particle state from independent single-particle
    /// evolutions instead of the rank-4 kernel: the product state is the
    /// tensor of the two one-particle states, the entangled kinds are the
    /// normalized sum/difference of the two coin assignments. This is a
    /// deliberately separate computational path used to cross-validate
    /// [`evolve`](Self::evolve).
    pub fn from_superposition(
        kind: InitialStateKind,
        coin: &CoinOperator,
        steps: usize,
        topology: Topology,
    ) -> Result<Self> {
        let down = SingleParticleState::point(topology, 0, Complex64::ZERO, Complex64::ONE)?
            .evolve(coin, steps);
        let up = SingleParticleState::point(topology, 0, Complex64::ONE, Complex64::ZERO)?
            .evolve(coin, steps);

        let lo = down.window_lo();
        let width = down.window_len();
        let mut amps = vec![Complex64::ZERO; 4 * width * width];
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        // (first factor -> particle 1, second -> particle 2, weight)
        let terms: &[(&SingleParticleState, &SingleParticleState, Complex64)] = match kind {
            InitialStateKind::Product => &[(&down, &up, Complex64::ONE)],
            InitialStateKind::Symmetric => &[(&down, &up, s), (&up, &down, s)],
            InitialStateKind::Antisymmetric => &[(&down, &up, s), (&up, &down, -s)],
        };
        for &(one, two, weight) in terms {
            let a = one.raw_window();
            let b = two.raw_window();
            for c1 in 0..2 {
                for c2 in 0..2 {
                    let base = plane(c1, c2) * width;
                    for m in 0..width {
                        let row = (base + m) * width;
                        let am = weight * a[2 * m + c1];
                        if am == Complex64::ZERO {
                            continue;
                        }
                        for n in 0..width {
                            amps[row + n] += am * b[2 * n + c2];
                        }
                    }
                }
            }
        }

        let mut state = TwoParticleState {
            topology,
            lo,
            width,
            amps,
            absorbed: 0.0,
        };
        // Joint absorption keeps exactly the paths on which neither particle
        // ever exits, so the surviving tensor is the product of the surviving
        // single-particle amplitudes and the absorbed weight is the deficit.
        if matches!(topology, Topology::Absorbing { .. }) {
            state.absorbed = (1.0 - state.norm().powi(2)).max(0.0);
        }
        Ok(state)
    }

    /// Joint position distribution P(pos1, pos2); entries below 1e-15 pruned.
    pub fn joint_distribution(&self) -> JointDistribution {
        let mut entries = BTreeMap::new();
        let w = self.width;
        for m in 0..w {
            for n in 0..w {
                let mut p = 0.0;
                for c in 0..4 {
                    p += self.amps[(c * w + m) * w + n].norm_sqr();
                }
                if p >= PRUNE_EPS {
                    entries.insert((self.lo + m as i64, self.lo + n as i64), p);
                }
            }
        }
        JointDistribution { entries }
    }

    /// Reduced density operator of particle 1: the partial trace of
    /// |psi><psi| over particle 2's coin and position.
    ///
    /// Basis ordering of the result: index `c * W + p` for coin `c`
    /// (`Up` = 0, `Down` = 1) at the `p`-th window position, with the window
    /// positions ascending from [`window_lo`](Self::window_lo).
    pub fn reduced_density_particle1(&self) -> DensityMatrix {
        let w = self.width;
        let dim = 2 * w;
        let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
        for j in 0..2 {
            for m in 0..w {
                let r = j * w + m;
                for jp in 0..2 {
                    for mp in 0..w {
                        let rp = jp * w + mp;
                        if rp < r {
                            continue;
                        }
                        let mut sum = Complex64::ZERO;
                        for k in 0..2 {
                            let row_a = (plane(j, k) * w + m) * w;
                            let row_b = (plane(jp, k) * w + mp) * w;
                            for n in 0..w {
                                sum += self.amps[row_a + n] * self.amps[row_b + n].conj();
                            }
                        }
                        rho[(r, rp)] = sum;
                        if rp != r {
                            rho[(rp, r)] = sum.conj();
                        }
                    }
                }
            }
        }
        // The partial trace of a normalized pure state is a valid density
        // operator by construction; with absorption in play the trace is the
        // surviving probability, so renormalize to keep the contract.
        let trace: f64 = (0..dim).map(|i| rho[(i, i)].re).sum();
        if (trace - 1.0).abs() > 1e-13 && trace > 0.0 {
            rho /= Complex64::new(trace, 0.0);
        }
        DensityMatrix { matrix: rho }
    }
}

/// Double buffer for the rank-4 step kernel.
struct TensorBuffers {
    topology: Topology,
    buf_lo: i64,
    first_cell: usize,
    width: usize,
    alloc_width: usize,
    cur: Vec<Complex64>,
    next: Vec<Complex64>,
    absorbed: f64,
}

impl TensorBuffers {
    fn new(state: &TwoParticleState, max_steps: usize) -> Self {
        let growth = match state.topology {
            Topology::Line => max_steps,
            _ => 0,
        };
        let alloc_width = state.width + 2 * growth;
        let mut cur = vec![Complex64::ZERO; 4 * alloc_width * alloc_width];
        for c in 0..4 {
            for m in 0..state.width {
                let src = (c * state.width + m) * state.width;
                let dst = (c * alloc_width + growth + m) * alloc_width + growth;
                cur[dst..dst + state.width]
                    .copy_from_slice(&state.amps[src..src + state.width]);
            }
        }
        TensorBuffers {
            topology: state.topology,
            buf_lo: state.lo - growth as i64,
            first_cell: growth,
            width: state.width,
            alloc_width,
            cur,
            next: vec![Complex64::ZERO; 4 * alloc_width * alloc_width],
            absorbed: state.absorbed,
        }
    }

    fn advance(&mut self, coin: &CoinOperator) {
        let w = self.alloc_width;
        let lo = self.first_cell;
        let hi = lo + self.width;
        let c = coin.raw();

        // Coin pass: mix the four coin planes cell by cell, in place.
        for m in lo..hi {
            for n in lo..hi {
                let at = |p: usize| (p * w + m) * w + n;
                let a = [
                    self.cur[at(0)],
                    self.cur[at(1)],
                    self.cur[at(2)],
                    self.cur[at(3)],
                ];
                for j in 0..2 {
                    for k in 0..2 {
                        let mut sum = Complex64::ZERO;
                        for jp in 0..2 {
                            for kp in 0..2 {
                                sum += c[j][jp] * c[k][kp] * a[plane(jp, kp)];
                            }
                        }
                        self.cur[at(plane(j, k))] = sum;
                    }
                }
            }
        }

        // Shift pass into the cleared target buffer. Coin index 0 (up) moves
        // its particle +1, index 1 (down) moves it -1.
        let (new_first, new_width) = match self.topology {
            Topology::Line => (lo - 1, self.width + 2),
            _ => (lo, self.width),
        };
        for c1 in 0..2usize {
            for c2 in 0..2usize {
                let p = plane(c1, c2);
                let d1 = 1 - 2 * c1 as i64;
                let d2 = 1 - 2 * c2 as i64;
                for m in lo..hi {
                    for n in lo..hi {
                        let value = self.cur[(p * w + m) * w + n];
                        let t1 = m as i64 + d1;
                        let t2 = n as i64 + d2;
                        match self.topology {
                            Topology::Line => {
                                self.next[(p * w + t1 as usize) * w + t2 as usize] = value;
                            }
                            Topology::Cycle(len) => {
                                let t1 = t1.rem_euclid(len as i64) as usize;
                                let t2 = t2.rem_euclid(len as i64) as usize;
                                self.next[(p * w + t1) * w + t2] = value;
                            }
                            Topology::Absorbing { .. } => {
                                let inside = |t: i64| t >= lo as i64 && t < hi as i64;
                                if inside(t1) && inside(t2) {
                                    self.next[(p * w + t1 as usize) * w + t2 as usize] = value;
                                } else {
                                    self.absorbed += value.norm_sqr();
                                }
                            }
                        }
                    }
                }
            }
        }

        std::mem::swap(&mut self.cur, &mut self.next);
        self.first_cell = new_first;
        self.width = new_width;
        // Clear the stale buffer over the window the next step will write.
        let clear_lo = new_first.saturating_sub(1);
        let clear_hi = (new_first + new_width + 1).min(w);
        for c in 0..4 {
            for m in clear_lo..clear_hi {
                let row = (c * w + m) * w;
                self.next[row + clear_lo..row + clear_hi].fill(Complex64::ZERO);
            }
        }
    }

    fn snapshot(&self) -> TwoParticleState {
        let w = self.alloc_width;
        let mut amps = vec![Complex64::ZERO; 4 * self.width * self.width];
        for c in 0..4 {
            for m in 0..self.width {
                let src = (c * w + self.first_cell + m) * w + self.first_cell;
                let dst = (c * self.width + m) * self.width;
                amps[dst..dst + self.width].copy_from_slice(&self.cur[src..src + self.width]);
            }
        }
        TwoParticleState {
            topology: self.topology,
            lo: self.buf_lo + self.first_cell as i64,
            width: self.width,
            amps,
            absorbed: self.absorbed,
        }
    }
}

/// Joint probabilities by position pair, iterated in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct JointDistribution {
    entries: BTreeMap<(i64, i64), f64>,
}

impl JointDistribution {
    /// Probability at (pos1, pos2); 0 if absent.
    pub fn probability(&self, pos1: i64, pos2: i64) -> f64 {
        self.entries.get(&(pos1, pos2)).copied().unwrap_or(0.0)
    }

    /// ((pos1, pos2), probability) pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), f64)> + '_ {
        self.entries.iter().map(|(&k, &p)| (k, p))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.entries.values().copied())
    }

    /// Position distribution of one particle: row or column sums.
    pub fn marginal(&self, particle: Particle) -> Distribution {
        let mut acc: BTreeMap<i64, f64> = BTreeMap::new();
        for (&(i, j), &p) in &self.entries {
            let key = match particle {
                Particle::One => i,
                Particle::Two => j,
            };
            *acc.entry(key).or_insert(0.0) += p;
        }
        Distribution::from_entries(acc)
    }

    /// Mean squared separation E[(x1 - x2)^2].
    pub fn separation_moment(&self) -> f64 {
        compensated_sum(
            self.entries
                .iter()
                .map(|(&(i, j), &p)| ((i - j) as f64).powi(2) * p),
        )
    }

    /// Position covariance E[x1 x2] - E[x1] E[x2].
    pub fn correlation(&self) -> f64 {
        let total = self.total();
        if total == 0.0 {
            return 0.0;
        }
        let mean1 = compensated_sum(self.entries.iter().map(|(&(i, _), &p)| i as f64 * p)) / total;
        let mean2 = compensated_sum(self.entries.iter().map(|(&(_, j), &p)| j as f64 * p)) / total;
        let cross =
            compensated_sum(self.entries.iter().map(|(&(i, j), &p)| (i * j) as f64 * p)) / total;
        cross - mean1 * mean2
    }
}

/// A density operator: Hermitian, unit trace, nonnegative spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps an explicit matrix, rejecting anything that is not Hermitian
    /// with unit trace (tolerance 1e-12 for both checks).
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(WalkError::DimensionMismatch {
                expected: matrix.nrows(),
                actual: matrix.ncols(),
            });
        }
        let mut defect = 0.0f64;
        for i in 0..matrix.nrows() {
            for j in i..matrix.ncols() {
                defect = defect.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if defect > 1e-12 {
            return Err(WalkError::NotHermitian(defect));
        }
        let trace: f64 = (0..matrix.nrows()).map(|i| matrix[(i, i)].re).sum();
        if (trace - 1.0).abs() > 1e-12 {
            return Err(WalkError::TraceNotOne(trace));
        }
        Ok(DensityMatrix { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    /// Tr(rho^2); 1 exactly for pure states, 1/dim for the maximally mixed
    /// state.
    pub fn purity(&self) -> f64 {
        // For Hermitian rho, Tr(rho^2) is the squared Frobenius norm.
        compensated_sum(self.matrix.iter().map(|z| z.norm_sqr()))
    }

    /// Real spectrum, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        values
    }

    /// Von Neumann entropy -sum lambda log2(lambda) in bits, over eigenvalues
    /// above 1e-12. Rejects spectra with eigenvalues below -1e-10.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let mut entropy = 0.0;
        for lambda in self.eigenvalues() {
            if lambda < -1e-10 {
                return Err(WalkError::NegativeEigenvalue(lambda));
            }
            if lambda > 1e-12 {
                entropy -= lambda * lambda.log2();
            }
        }
        Ok(entropy.max(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn hadamard() -> CoinOperator {
        CoinOperator::hadamard()
    }

    #[test]
    fn product_initial_state_has_one_entry() {
        let s = TwoParticleState::initial(InitialStateKind::Product, Topology::Line).unwrap();
        assert_eq!(
            s.amplitude(CoinBasis::Down, CoinBasis::Up, 0, 0),
            Complex64::ONE
        );
        assert!((s.norm() - 1.0).abs() < 1e-15);
        let d = s.joint_distribution();
        assert_eq!(d.len(), 1);
        assert_eq!(d.probability(0, 0), 1.0);
    }

    #[test]
    fn antisymmetric_initial_state_signs() {
        let s =
            TwoParticleState::initial(InitialStateKind::Antisymmetric, Topology::Line).unwrap();
        assert!((s.amplitude(CoinBasis::Down, CoinBasis::Up, 0, 0).re - S).abs() < 1e-15);
        assert!((s.amplitude(CoinBasis::Up, CoinBasis::Down, 0, 0).re + S).abs() < 1e-15);
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn all_initial_kinds_are_normalized() {
        for kind in [
            InitialStateKind::Product,
            InitialStateKind::Symmetric,
            InitialStateKind::Antisymmetric,
        ] {
            let s = TwoParticleState::initial(kind, Topology::Line).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn one_step_product_is_uniform_over_corners() {
        let s = TwoParticleState::initial(InitialStateKind::Product, Topology::Line)
            .unwrap()
            .step(&hadamard());
        let d = s.joint_distribution();
        for (i, j) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            assert!((d.probability(i, j) - 0.25).abs() < 1e-15);
        }
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn one_step_antisymmetric_antibunches() {
        let s = TwoParticleState::initial(InitialStateKind::Antisymmetric, Topology::Line)
            .unwrap()
            .step(&hadamard());
        let d = s.joint_distribution();
        assert!((d.probability(1, -1) - 0.5).abs() < 1e-15);
        assert!((d.probability(-1, 1) - 0.5).abs() < 1e-15);
        assert_eq!(d.probability(1, 1), 0.0);
        assert_eq!(d.probability(-1, -1), 0.0);
    }

    #[test]
    fn one_step_symmetric_bunches() {
        let s = TwoParticleState::initial(InitialStateKind::Symmetric, Topology::Line)
            .unwrap()
            .step(&hadamard());
        let d = s.joint_distribution();
        assert!((d.probability(1, 1) - 0.5).abs() < 1e-15);
        assert!((d.probability(-1, -1) - 0.5).abs() < 1e-15);
        assert_eq!(d.probability(1, -1), 0.0);
        assert_eq!(d.probability(-1, 1), 0.0);
    }

    #[test]
    fn evolve_zero_steps_is_identity() {
        let s = TwoParticleState::initial(InitialStateKind::Symmetric, Topology::Line).unwrap();
        assert_eq!(s.evolve(&hadamard(), 0), s);
    }

    #[test]
    fn norm_is_conserved_for_fifty_steps() {
        let s = TwoParticleState::initial(InitialStateKind::Antisymmetric, Topology::Line)
            .unwrap()
            .evolve(&hadamard(), 50);
        assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_factorizes() {
        let steps = 30;
        let joint = TwoParticleState::initial(InitialStateKind::Product, Topology::Line)
            .unwrap()
            .evolve(&hadamard(), steps);
        let p1 = SingleParticleState::point(Topology::Line, 0, Complex64::ZERO, Complex64::ONE)
            .unwrap()
            .evolve(&hadamard(), steps);
        let p2 = SingleParticleState::point(Topology::Line, 0, Complex64::ONE, Complex64::ZERO)
            .unwrap()
            .evolve(&hadamard(), steps);
        let mut worst = 0.0f64;
        for i in -(steps as i64)..=steps as i64 {
            for j in -(steps as i64)..=steps as i64 {
                let joint_p = joint.joint_probability(i, j);
                let product = p1.probability(i) * p2.probability(j);
                worst = worst.max((joint_p - product).abs());
            }
        }
        assert!(worst < 1e-12, "worst factorization defect {worst}");
    }

    #[test]
    fn superposition_route_matches_tensor_route() {
        let coin = hadamard();
        for kind in [
            InitialStateKind::Product,
            InitialStateKind::Symmetric,
            InitialStateKind::Antisymmetric,
        ] {
            for topology in [Topology::Line, Topology::Cycle(8)] {
                let direct = TwoParticleState::initial(kind, topology)
                    .unwrap()
                    .evolve(&coin, 20);
                let built = TwoParticleState::from_superposition(kind, &coin, 20, topology)
                    .unwrap();
                let mut worst = 0.0f64;
                for c1 in CoinBasis::BOTH {
                    for c2 in CoinBasis::BOTH {
                        for m in direct.positions() {
                            for n in direct.positions() {
                                let d = (direct.amplitude(c1, c2, m, n)
                                    - built.amplitude(c1, c2, m, n))
                                .norm();
                                worst = worst.max(d);
                            }
                        }
                    }
                }
                assert!(
                    worst < 1e-12,
                    "route mismatch {worst} for {kind:?} on {topology:?}"
                );
            }
        }
    }

    #[test]
    fn superposition_route_matches_on_absorbing_segment() {
        let coin = hadamard();
        let topology = Topology::Absorbing { left: -6, right: 6 };
        let direct = TwoParticleState::initial(InitialStateKind::Antisymmetric, topology)
            .unwrap()
            .evolve(&coin, 15);
        let built =
            TwoParticleState::from_superposition(InitialStateKind::Antisymmetric, &coin, 15, topology)
                .unwrap();
        for c1 in CoinBasis::BOTH {
            for c2 in CoinBasis::BOTH {
                for m in direct.positions() {
                    for n in direct.positions() {
                        let d = (direct.amplitude(c1, c2, m, n) - built.amplitude(c1, c2, m, n))
                            .norm();
                        assert!(d < 1e-12);
                    }
                }
            }
        }
        assert!((direct.absorbed() - built.absorbed()).abs() < 1e-12);
    }

    #[test]
    fn marginals_of_one_step_states() {
        for kind in [
            InitialStateKind::Product,
            InitialStateKind::Symmetric,
            InitialStateKind::Antisymmetric,
        ] {
            let d = TwoParticleState::initial(kind, Topology::Line)
                .unwrap()
                .step(&hadamard())
                .joint_distribution();
            for particle in [Particle::One, Particle::Two] {
                let m = d.marginal(particle);
                assert!((m.probability(1) - 0.5).abs() < 1e-15, "{kind:?}");
                assert!((m.probability(-1) - 0.5).abs() < 1e-15, "{kind:?}");
                assert!((m.total() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn separation_moments_at_one_step() {
        let moment = |kind| {
            TwoParticleState::initial(kind, Topology::Line)
                .unwrap()
                .step(&hadamard())
                .joint_distribution()
                .separation_moment()
        };
        assert!((moment(InitialStateKind::Antisymmetric) - 4.0).abs() < 1e-12);
        assert!(moment(InitialStateKind::Symmetric).abs() < 1e-12);
        assert!((moment(InitialStateKind::Product) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn correlations_at_one_step() {
        let corr = |kind| {
            TwoParticleState::initial(kind, Topology::Line)
                .unwrap()
                .step(&hadamard())
                .joint_distribution()
                .correlation()
        };
        assert!(corr(InitialStateKind::Product).abs() < 1e-12);
        assert!((corr(InitialStateKind::Symmetric) - 1.0).abs() < 1e-12);
        assert!((corr(InitialStateKind::Antisymmetric) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn exchange_symmetry_of_entangled_probabilities() {
        for kind in [InitialStateKind::Symmetric, InitialStateKind::Antisymmetric] {
            let s = TwoParticleState::initial(kind, Topology::Line)
                .unwrap()
                .evolve(&hadamard(), 12);
            for m in s.positions() {
                for n in s.positions() {
                    let diff = (s.joint_probability(m, n) - s.joint_probability(n, m)).abs();
                    assert!(diff < 1e-12, "{kind:?} asymmetric at ({m},{n})");
                }
            }
        }
    }

    #[test]
    fn entangled_marginals_coincide_at_every_step() {
        let coin = hadamard();
        let mut sym = TwoParticleState::initial(InitialStateKind::Symmetric, Topology::Line).unwrap();
        let mut anti =
            TwoParticleState::initial(InitialStateKind::Antisymmetric, Topology::Line).unwrap();
        for _ in 0..15 {
            sym = sym.step(&coin);
            anti = anti.step(&coin);
            let ms = sym.joint_distribution().marginal(Particle::One);
            let ma = anti.joint_distribution().marginal(Particle::One);
            for (i, p) in ms.iter() {
                assert!((p - ma.probability(i)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn product_reduced_state_is_pure() {
        let s = TwoParticleState::initial(InitialStateKind::Product, Topology::Line)
            .unwrap()
            .evolve(&hadamard(), 10);
        let rho = s.reduced_density_particle1();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!((rho.purity() - 1.0).abs() < 1e-10);
        assert!(rho.von_neumann_entropy().unwrap() < 1e-9);
    }

    #[test]
    fn bell_reduced_state_is_maximally_mixed() {
        let s = TwoParticleState::initial(InitialStateKind::Antisymmetric, Topology::Line).unwrap();
        let rho = s.reduced_density_particle1();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        let eigen = rho.eigenvalues();
        assert!((eigen[0] - 0.5).abs() < 1e-12);
        assert!((eigen[1] - 0.5).abs() < 1e-12);
        for lambda in &eigen[2..] {
            assert!(lambda.abs() < 1e-12);
        }
        assert!((rho.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn maximally_mixed_qubit_has_one_bit() {
        let m = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0));
        let rho = DensityMatrix::from_matrix(m).unwrap();
        assert!((rho.von_neumann_entropy().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn density_matrix_rejects_bad_input() {
        let mut m = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0));
        m[(0, 1)] = Complex64::new(0.3, 0.0);
        assert!(matches!(
            DensityMatrix::from_matrix(m),
            Err(WalkError::NotHermitian(_))
        ));
        let m = DMatrix::from_diagonal_element(2, 2, Complex64::new(0.7, 0.0));
        assert!(matches!(
            DensityMatrix::from_matrix(m),
            Err(WalkError::TraceNotOne(_))
        ));
    }

    #[test]
    fn entropy_bounds_hold_during_evolution() {
        let s = TwoParticleState::initial(InitialStateKind::Symmetric, Topology::Line)
            .unwrap()
            .evolve(&hadamard(), 8);
        let rho = s.reduced_density_particle1();
        let entropy = rho.von_neumann_entropy().unwrap();
        let max = (rho.dim() as f64).log2();
        assert!(entropy >= 0.0);
        assert!(entropy <= max);
    }

    #[test]
    fn absorbing_closure_for_two_particles() {
        let topology = Topology::Absorbing { left: -4, right: 4 };
        let coin = hadamard();
        let mut s = TwoParticleState::initial(InitialStateKind::Product, topology).unwrap();
        for _ in 0..12 {
            s = s.step(&coin);
            let closure = s.norm().powi(2) + s.absorbed();
            assert!((closure - 1.0).abs() < 1e-12);
        }
        assert!(s.absorbed() > 0.0);
    }

    #[test]
    fn cycle_evolution_stays_on_the_ring() {
        let s = TwoParticleState::initial(InitialStateKind::Symmetric, Topology::Cycle(8))
            .unwrap()
            .evolve(&hadamard(), 25);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert_eq!(s.window_len(), 8);
        assert!((s.joint_distribution().total() - 1.0).abs() < 1e-12);
    }
}
