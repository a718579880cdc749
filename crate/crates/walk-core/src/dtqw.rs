//! Discrete-time walk engine: coin, conditional shift, N-step evolution.
//!
//! One step is `shift . (I (x) coin)`: the coin mixes the two internal
//! amplitudes at every site, then the shift moves `Up` amplitude one site up
//! and `Down` amplitude one site down (mod n on a cycle). On an absorbing
//! segment, amplitude shifted onto a boundary site is removed and its squared
//! magnitude added to the absorbed probability.
//!
//! Evolution runs on a reused pair of buffers so an N-step walk costs no
//! per-step allocation; observable behaviour is identical to repeatedly
//! calling [`SingleParticleState::step`].

use num_complex::Complex64;

use crate::coin::{mix_cell, CoinOperator};
use crate::state::{SingleParticleState, Topology};

/// Snapshot of an evolution after a given number of steps.
#[derive(Clone, Debug)]
pub struct StepReport {
    pub state: SingleParticleState,
    pub step_index: usize,
    /// Probability absorbed during this step; 0 for line and cycle, and for
    /// the initial report.
    pub absorbed_this_step: f64,
}

/// Reusable double buffer holding the walker window during evolution.
struct StepBuffers {
    topology: Topology,
    /// Position of cell 0 of the allocated buffers.
    buf_lo: i64,
    /// Current logical window, as cell offsets into the buffers.
    first_cell: usize,
    width: usize,
    cur: Vec<Complex64>,
    next: Vec<Complex64>,
    absorbed: f64,
}

impl StepBuffers {
    fn new(state: &SingleParticleState, max_steps: usize) -> Self {
        let width = state.window_len();
        // Only the line grows; cycle and absorbing windows are fixed.
        let growth = match state.topology() {
            Topology::Line => max_steps,
            _ => 0,
        };
        let alloc_width = width + 2 * growth;
        let mut cur = vec![Complex64::ZERO; 2 * alloc_width];
        let first_cell = growth;
        cur[2 * first_cell..2 * (first_cell + width)].copy_from_slice(state.raw_window());
        StepBuffers {
            topology: state.topology(),
            buf_lo: state.window_lo() - growth as i64,
            first_cell,
            width,
            cur,
            next: vec![Complex64::ZERO; 2 * alloc_width],
            absorbed: state.absorbed(),
        }
    }

    /// One walk step: optional coin pass, then the conditional shift.
    fn advance(&mut self, coin: Option<&CoinOperator>) {
        let lo = self.first_cell;
        let hi = self.first_cell + self.width;

        if let Some(coin) = coin {
            for cell in self.cur[2 * lo..2 * hi].chunks_exact_mut(2) {
                mix_cell(coin.raw(), cell);
            }
        }

        // Target window: one cell wider per side on the line.
        let (new_first, new_width) = match self.topology {
            Topology::Line => (self.first_cell - 1, self.width + 2),
            _ => (self.first_cell, self.width),
        };
        self.next[2 * new_first..2 * (new_first + new_width)].fill(Complex64::ZERO);

        match self.topology {
            Topology::Line => {
                for cell in lo..hi {
                    self.next[2 * (cell + 1)] = self.cur[2 * cell];
                    self.next[2 * (cell - 1) + 1] = self.cur[2 * cell + 1];
                }
            }
            Topology::Cycle(n) => {
                for cell in 0..n {
                    let up_target = if cell + 1 == n { 0 } else { cell + 1 };
                    let down_target = if cell == 0 { n - 1 } else { cell - 1 };
                    self.next[2 * up_target] = self.cur[2 * cell];
                    self.next[2 * down_target + 1] = self.cur[2 * cell + 1];
                }
            }
            Topology::Absorbing { .. } => {
                // Window cells are the interior sites; moving past either end
                // means landing on an absorbing site.
                for cell in lo..hi {
                    let up = self.cur[2 * cell];
                    let down = self.cur[2 * cell + 1];
                    if cell + 1 == hi {
                        self.absorbed += up.norm_sqr();
                    } else {
                        self.next[2 * (cell + 1)] = up;
                    }
                    if cell == lo {
                        self.absorbed += down.norm_sqr();
                    } else {
                        self.next[2 * (cell - 1) + 1] = down;
                    }
                }
            }
        }

        std::mem::swap(&mut self.cur, &mut self.next);
        self.first_cell = new_first;
        self.width = new_width;
    }

    fn snapshot(&self) -> SingleParticleState {
        let window =
            self.cur[2 * self.first_cell..2 * (self.first_cell + self.width)].to_vec();
        SingleParticleState::from_parts(
            self.topology,
            self.buf_lo + self.first_cell as i64,
            window,
            self.absorbed,
        )
    }
}

impl SingleParticleState {
    /// The conditional shift alone: `Up` amplitude moves +1, `Down` moves -1.
    pub fn shift(&self) -> SingleParticleState {
        let mut buffers = StepBuffers::new(self, 1);
        buffers.advance(None);
        buffers.snapshot()
    }

    /// One full walk step: coin, then shift.
    pub fn step(&self, coin: &CoinOperator) -> SingleParticleState {
        let mut buffers = StepBuffers::new(self, 1);
        buffers.advance(Some(coin));
        buffers.snapshot()
    }

    /// Applies `steps` walk steps with no intermediate measurement.
    pub fn evolve(&self, coin: &CoinOperator, steps: usize) -> SingleParticleState {
        let mut buffers = StepBuffers::new(self, steps);
        for _ in 0..steps {
            buffers.advance(Some(coin));
        }
        buffers.snapshot()
    }

    /// Like [`evolve`](Self::evolve), but returns a snapshot after every
    /// step. Report 0 is the initial state; `steps + 1` reports in total.
    pub fn evolve_with_trace(&self, coin: &CoinOperator, steps: usize) -> Vec<StepReport> {
        let mut buffers = StepBuffers::new(self, steps);
        let mut reports = Vec::with_capacity(steps + 1);
        reports.push(StepReport {
            state: self.clone(),
            step_index: 0,
            absorbed_this_step: 0.0,
        });
        for k in 1..=steps {
            let before = buffers.absorbed;
            buffers.advance(Some(coin));
            reports.push(StepReport {
                state: buffers.snapshot(),
                step_index: k,
                absorbed_this_step: buffers.absorbed - before,
            });
        }
        reports
    }
}
