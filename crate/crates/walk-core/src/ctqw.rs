//! Continuous-time walks generated by the graph Laplacian.
//!
//! The generator has the vertex degree (times the rate `gamma`) on the
//! diagonal and `-gamma` on every edge, so its columns sum to zero and it is
//! real symmetric. One eigendecomposition yields both propagators: the
//! quantum one `exp(-i H t)` applied to complex amplitudes and the classical
//! master-equation one `exp(-H t)` applied to probabilities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::numeric::compensated_sum;

/// Graphs the walk is defined on. An (idealized) infinite line is modelled by
/// a `LineSegment` long enough that no amplitude reaches the reflecting ends
/// within the simulated time.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Graph {
    /// Path graph with `vertices` sites; the two end vertices have degree 1.
    LineSegment(usize),
    /// Ring of `n` vertices, all of degree 2.
    Cycle(usize),
}

impl Graph {
    pub fn vertex_count(&self) -> usize {
        match *self {
            Graph::LineSegment(v) => v,
            Graph::Cycle(n) => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Graph::LineSegment(v) if v < 2 => Err(WalkError::SegmentTooSmall(v)),
            Graph::Cycle(n) if n < 3 => Err(WalkError::CycleTooSmall(n)),
            _ => Ok(()),
        }
    }
}

/// 0/1 adjacency matrix: symmetric, zero diagonal.
pub fn adjacency(graph: &Graph) -> DMatrix<f64> {
    let v = graph.vertex_count();
    let mut a = DMatrix::zeros(v, v);
    match *graph {
        Graph::LineSegment(_) => {
            for i in 0..v.saturating_sub(1) {
                a[(i, i + 1)] = 1.0;
                a[(i + 1, i)] = 1.0;
            }
        }
        Graph::Cycle(_) => {
            for i in 0..v {
                let next = (i + 1) % v;
                a[(i, next)] = 1.0;
                a[(next, i)] = 1.0;
            }
        }
    }
    a
}

/// The walk generator: `gamma` times the graph Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMatrix {
    gamma: f64,
    matrix: DMatrix<f64>,
}

impl GeneratorMatrix {
    /// Builds the generator for `graph` at transition rate `gamma` (> 0,
    /// units of inverse time).
    pub fn new(graph: &Graph, gamma: f64) -> Result<Self> {
        graph.validate()?;
        if gamma <= 0.0 || !gamma.is_finite() {
            return Err(WalkError::NonPositiveGamma(gamma));
        }
        let a = adjacency(graph);
        let v = graph.vertex_count();
        let mut matrix = DMatrix::zeros(v, v);
        for j in 0..v {
            let degree: f64 = (0..v).map(|i| a[(i, j)]).sum();
            matrix[(j, j)] = degree * gamma;
            for i in 0..v {
                if a[(i, j)] != 0.0 {
                    matrix[(i, j)] = -gamma;
                }
            }
        }
        Ok(GeneratorMatrix { gamma, matrix })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Real spectrum and orthonormal eigenbasis of the symmetric generator.
    fn spectrum(&self) -> (DVector<f64>, DMatrix<f64>) {
        let eig = self.matrix.clone().symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors)
    }

    /// Schroedinger evolution: applies `exp(-i H t)` to a normalized
    /// amplitude vector. The norm is preserved to numerical precision.
    pub fn evolve_quantum(&self, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        let v = self.dim();
        if psi0.len() != v {
            return Err(WalkError::DimensionMismatch {
                expected: v,
                actual: psi0.len(),
            });
        }
        let norm = compensated_sum(psi0.iter().map(|a| a.norm_sqr())).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(WalkError::UnnormalizedVector(norm));
        }

        let (lambda, q) = self.spectrum();
        // Project onto the eigenbasis, rotate each mode, transform back.
        let mut modes = vec![Complex64::ZERO; v];
        for k in 0..v {
            let mut acc = Complex64::ZERO;
            for j in 0..v {
                acc += q[(j, k)] * psi0[j];
            }
            modes[k] = acc * Complex64::from_polar(1.0, -lambda[k] * t);
        }
        let mut result = vec![Complex64::ZERO; v];
        for j in 0..v {
            let mut acc = Complex64::ZERO;
            for k in 0..v {
                acc += q[(j, k)] * modes[k];
            }
            result[j] = acc;
        }
        Ok(result)
    }

    /// Master-equation evolution: applies `exp(-H t)` to a probability
    /// vector. Entries dipping below zero by round-off (>= -1e-12) are
    /// clamped to 0; the total stays 1 because the generator's columns sum
    /// to zero.
    pub fn evolve_classical(&self, p0: &[f64], t: f64) -> Result<Vec<f64>> {
        let v = self.dim();
        if p0.len() != v {
            return Err(WalkError::DimensionMismatch {
                expected: v,
                actual: p0.len(),
            });
        }
        if let Some(bad) = p0.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
            return Err(WalkError::NotAProbabilityVector(format!(
                "entry {bad} is negative or not finite"
            )));
        }
        let total = compensated_sum(p0.iter().copied());
        if (total - 1.0).abs() > 1e-10 {
            return Err(WalkError::NotAProbabilityVector(format!(
                "total probability is {total}"
            )));
        }

        let (lambda, q) = self.spectrum();
        let mut modes = vec![0.0f64; v];
        for k in 0..v {
            let mut acc = 0.0;
            for j in 0..v {
                acc += q[(j, k)] * p0[j];
            }
            modes[k] = acc * (-lambda[k] * t).exp();
        }
        let mut result = vec![0.0f64; v];
        for j in 0..v {
            let mut acc = 0.0;
            for k in 0..v {
                acc += q[(j, k)] * modes[k];
            }
            debug_assert!(acc >= -1e-12, "probability undershoot: {acc}");
            result[j] = acc.max(0.0);
        }
        Ok(result)
    }
}
