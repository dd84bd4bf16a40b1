//! Implicit scheme with the discrete Caputo memory term:
//! `(ω_0 I + τ^α K) U^n = -Σ_{k=1}^{n-1} ω_k U^{n-k} + (Σ_{k=0}^{n-1} ω_k) U^0 + τ^α G^n`.

use crate::error::{FadeError, Result};
use crate::frac_calculus::{caputo_residual_rhs, History, TemporalWeights};
use crate::operators::{ShiftedSolver, SpatialOperator};

/// Solver state: the full history and a factorization reused every step.
#[derive(Debug, Clone)]
pub struct FractionalStepper {
    pub history: History,
    pub weights: TemporalWeights,
    pub tau: f64,
    tau_alpha: f64,
    solver: ShiftedSolver,
}

impl FractionalStepper {
    pub fn new(
        operator: &SpatialOperator,
        weights: TemporalWeights,
        tau: f64,
        initial: Vec<f64>,
    ) -> Result<Self> {
        if initial.len() != operator.dim() {
            return Err(FadeError::LengthMismatch {
                expected: operator.dim(),
                got: initial.len(),
            });
        }
        if !(tau > 0.0) {
            return Err(FadeError::Domain {
                name: "tau",
                value: tau,
                domain: "tau > 0",
            });
        }
        let tau_alpha = tau.powf(weights.alpha);
        let solver = operator.shifted_solver(weights.leading(), tau_alpha)?;
        Ok(Self {
            history: History::new(initial),
            weights,
            tau,
            tau_alpha,
            solver,
        })
    }

    /// Index `n` of the next level to be computed.
    pub fn next_level(&self) -> usize {
        self.history.len()
    }

    pub fn tau_alpha(&self) -> f64 {
        self.tau_alpha
    }

    /// Advances one level with load `G^n`; returns `U^n`.
    pub fn step(&mut self, load: &[f64]) -> Result<&[f64]> {
        if load.len() != self.history.dim() {
            return Err(FadeError::LengthMismatch {
                expected: self.history.dim(),
                got: load.len(),
            });
        }
        let n = self.history.len();
        if self.weights.len() <= n {
            return Err(FadeError::LengthMismatch {
                expected: n + 1,
                got: self.weights.len(),
            });
        }
        let mut rhs = caputo_residual_rhs(&self.history, &self.weights)?;
        for (r, g) in rhs.iter_mut().zip(load) {
            *r += self.tau_alpha * g;
        }
        let u = self.solver.solve(&rhs)?;
        self.history.push(&u)?;
        Ok(self.history.latest())
    }
}
