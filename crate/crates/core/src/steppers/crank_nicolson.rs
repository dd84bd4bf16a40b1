//! Crank-Nicolson for `u_t = L u + b(t) + f(t)`:
//! `(I - τ/2 L) U^n = (I + τ/2 L) U^{n-1} + τ q^{n-1/2}`.

use crate::error::{FadeError, Result};
use crate::operators::{ShiftedSolver, SpatialOperator};

#[derive(Debug, Clone)]
pub struct CnStepper {
    pub tau: f64,
    operator: SpatialOperator,
    solver: ShiftedSolver,
}

impl CnStepper {
    pub fn new(operator: SpatialOperator, tau: f64) -> Result<Self> {
        let solver = operator.shifted_solver(1.0, -0.5 * tau)?;
        Ok(Self {
            tau,
            operator,
            solver,
        })
    }

    pub fn operator(&self) -> &SpatialOperator {
        &self.operator
    }

    /// `forcing` is the half-step forcing `q^{n-1/2}` (source plus boundary part).
    pub fn step(&self, u: &mut [f64], forcing: &[f64]) -> Result<()> {
        if forcing.len() != u.len() {
            return Err(FadeError::LengthMismatch {
                expected: u.len(),
                got: forcing.len(),
            });
        }
        let lu = self.operator.apply(u)?;
        let rhs: Vec<f64> = (0..u.len())
            .map(|i| u[i] + 0.5 * self.tau * lu[i] + self.tau * forcing[i])
            .collect();
        let next = self.solver.solve(&rhs)?;
        u.copy_from_slice(&next);
        Ok(())
    }
}
