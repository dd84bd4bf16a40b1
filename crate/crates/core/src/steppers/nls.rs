//! Coupled real/imaginary system for `i D^α u + u_xx + β|u|²u = 0` with
//! homogeneous Dirichlet ends, `u = U + iV`:
//! `D^α U = -(W²V + β(U²+V²)V)`, `D^α V = W²U + β(U²+V²)U`.

use nalgebra::{DMatrix, DVector};

use crate::error::{FadeError, Result};
use crate::frac_calculus::{caputo_residual_rhs, History, TemporalWeights};
use crate::linalg::DenseLu;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Bound on the root-mean-square residual.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Backtracking factor in `(0, 1)`.
    pub damping: f64,
    /// Smallest damped step length before the iteration is declared divergent.
    pub min_step: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 50,
            damping: 0.5,
            min_step: 2f64.powi(-20),
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(FadeError::Domain {
                name: "tolerance",
                value: self.tolerance,
                domain: "tolerance > 0",
            });
        }
        if self.max_iterations == 0 {
            return Err(FadeError::Domain {
                name: "max_iterations",
                value: 0.0,
                domain: "max_iterations >= 1",
            });
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(FadeError::Domain {
                name: "damping",
                value: self.damping,
                domain: "(0, 1)",
            });
        }
        if !(self.min_step > 0.0 && self.min_step <= 1.0) {
            return Err(FadeError::Domain {
                name: "min_step",
                value: self.min_step,
                domain: "(0, 1]",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonStats {
    pub iterations: usize,
    pub residual: f64,
}

/// `N(U, V) = [W²V + β|u|²V; -W²U - β|u|²U]`, so that `D^α z + N(z) = 0`.
pub fn nls_operator(w2: &DMatrix<f64>, beta_nl: f64, z: &[f64]) -> Vec<f64> {
    let n = w2.nrows();
    let (u, v) = z.split_at(n);
    let u = DVector::from_column_slice(u);
    let v = DVector::from_column_slice(v);
    let wu = w2 * &u;
    let wv = w2 * &v;
    let mut out = vec![0.0; 2 * n];
    for i in 0..n {
        let m = u[i] * u[i] + v[i] * v[i];
        out[i] = wv[i] + beta_nl * m * v[i];
        out[n + i] = -wu[i] - beta_nl * m * u[i];
    }
    out
}

/// Mass `h Σ (U² + V²)` of a stacked state.
pub fn nls_mass(z: &[f64], h: f64) -> f64 {
    h * z.iter().map(|v| v * v).sum::<f64>()
}

fn rms(r: &[f64]) -> f64 {
    (r.iter().map(|v| v * v).sum::<f64>() / r.len().max(1) as f64).sqrt()
}

/// Implicit fractional scheme for the coupled system, solved by damped Newton.
#[derive(Debug, Clone)]
pub struct NlsStepper {
    pub history: History,
    pub weights: TemporalWeights,
    pub beta_nl: f64,
    pub config: NewtonConfig,
    w2: DMatrix<f64>,
    tau_alpha: f64,
}

impl NlsStepper {
    /// `w2` is the interior block of the second-order weights; `initial`
    /// stacks `[U; V]`.
    pub fn new(
        w2: DMatrix<f64>,
        weights: TemporalWeights,
        tau: f64,
        beta_nl: f64,
        initial: Vec<f64>,
        config: NewtonConfig,
    ) -> Result<Self> {
        config.validate()?;
        if !w2.is_square() || initial.len() != 2 * w2.nrows() {
            return Err(FadeError::LengthMismatch {
                expected: 2 * w2.nrows(),
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
        Ok(Self {
            history: History::new(initial),
            tau_alpha: tau.powf(weights.alpha),
            weights,
            beta_nl,
            config,
            w2,
        })
    }

    fn residual(&self, z: &[f64], hist: &[f64]) -> Vec<f64> {
        let w0 = self.weights.leading();
        let nz = nls_operator(&self.w2, self.beta_nl, z);
        (0..z.len())
            .map(|i| w0 * z[i] + self.tau_alpha * nz[i] - hist[i])
            .collect()
    }

    fn jacobian(&self, z: &[f64]) -> DMatrix<f64> {
        let n = self.w2.nrows();
        let (u, v) = z.split_at(n);
        let (w0, ta, b) = (self.weights.leading(), self.tau_alpha, self.beta_nl);
        let mut j = DMatrix::zeros(2 * n, 2 * n);
        j.view_mut((0, n), (n, n)).copy_from(&(&self.w2 * ta));
        j.view_mut((n, 0), (n, n)).copy_from(&(&self.w2 * -ta));
        for i in 0..n {
            let (ui, vi) = (u[i], v[i]);
            j[(i, i)] = w0 + ta * b * 2.0 * ui * vi;
            j[(i, n + i)] += ta * b * (ui * ui + 3.0 * vi * vi);
            j[(n + i, i)] -= ta * b * (3.0 * ui * ui + vi * vi);
            j[(n + i, n + i)] = w0 - ta * b * 2.0 * ui * vi;
        }
        j
    }

    /// Advances one level, starting Newton from the latest level.
    pub fn step(&mut self) -> Result<NewtonStats> {
        let n_level = self.history.len();
        if self.weights.len() <= n_level {
            return Err(FadeError::LengthMismatch {
                expected: n_level + 1,
                got: self.weights.len(),
            });
        }
        let hist = caputo_residual_rhs(&self.history, &self.weights)?;
        let mut z = self.history.latest().to_vec();
        let mut r = self.residual(&z, &hist);
        let mut norm = rms(&r);
        let mut iterations = 0;
        while norm >= self.config.tolerance {
            if iterations == self.config.max_iterations {
                return Err(FadeError::MaxIterations {
                    iterations,
                    residual: norm,
                });
            }
            iterations += 1;
            let lu = DenseLu::new(self.jacobian(&z))?;
            let delta = lu.solve(&DVector::from_column_slice(&r))?;
            let mut lambda = 1.0;
            loop {
                let trial: Vec<f64> = z
                    .iter()
                    .zip(delta.iter())
                    .map(|(a, d)| a - lambda * d)
                    .collect();
                let rt = self.residual(&trial, &hist);
                let nt = rms(&rt);
                if nt.is_finite() && nt < norm {
                    z = trial;
                    r = rt;
                    norm = nt;
                    break;
                }
                // no further decrease is representable
                if lambda == 1.0
                    && delta.amax()
                        <= 4.0 * f64::EPSILON * z.iter().fold(1.0f64, |m, v| m.max(v.abs()))
                {
                    self.history.push(&z)?;
                    return Ok(NewtonStats {
                        iterations,
                        residual: norm,
                    });
                }
                lambda *= self.config.damping;
                if lambda < self.config.min_step {
                    return Err(FadeError::Divergence(format!(
                        "damped Newton step below {} at level {n_level} (residual {norm:e})",
                        self.config.min_step
                    )));
                }
            }
        }
        self.history.push(&z)?;
        Ok(NewtonStats {
            iterations,
            residual: norm,
        })
    }
}
