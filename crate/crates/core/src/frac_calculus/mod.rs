//! Temporal fractional calculus: Grunwald-Letnikov and third-order
//! difference coefficients, the discrete Caputo memory term, special
//! functions, and Riemann-Liouville derivatives of cubic B-splines.

mod gamma;
mod mittag_leffler;
pub mod quadrature;
mod riemann_liouville;

use num_complex::Complex64;

use crate::error::{FadeError, Result};

pub use gamma::{gamma, is_gamma_pole, ln_gamma, rgamma};
pub use mittag_leffler::mittag_leffler;
pub use riemann_liouville::{rl_bspline_deriv, rl_modified_bspline_deriv, rl_monomial};

/// Coefficient family used to discretize the Caputo derivative in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightFamily {
    /// First-order Grunwald-Letnikov coefficients `(-1)^k C(α, k)`.
    Gl1,
    /// Third-order coefficients from the `μ = 4/(7 + √39 i)` generator.
    Ho3,
}

impl WeightFamily {
    pub fn name(&self) -> &'static str {
        match self {
            WeightFamily::Gl1 => "gl1",
            WeightFamily::Ho3 => "ho3",
        }
    }
}

impl std::str::FromStr for WeightFamily {
    type Err = FadeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl1" => Ok(WeightFamily::Gl1),
            "ho3" => Ok(WeightFamily::Ho3),
            other => Err(FadeError::Undefined(format!(
                "unknown weight family '{other}' (expected gl1 or ho3)"
            ))),
        }
    }
}

/// The coefficients `ω_0..ω_n` for a temporal order `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalWeights {
    pub alpha: f64,
    pub family: WeightFamily,
    pub w: Vec<f64>,
}

impl TemporalWeights {
    pub fn new(family: WeightFamily, alpha: f64, n: usize) -> Result<Self> {
        match family {
            WeightFamily::Gl1 => gl_weights(alpha, n),
            WeightFamily::Ho3 => ho3_weights(alpha, n),
        }
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    /// `ω_0`, the coefficient multiplying the newest level.
    pub fn leading(&self) -> f64 {
        self.w[0]
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(FadeError::Domain {
            name: "alpha",
            value: alpha,
            domain: "(0, 1]",
        })
    }
}

/// `l_0 = 1`, `l_k = (1 - (α+1)/k) l_{k-1}`.
fn binomial_sequence(alpha: f64, n: usize) -> Vec<f64> {
    let mut l = Vec::with_capacity(n + 1);
    l.push(1.0);
    for k in 1..=n {
        let prev = l[k - 1];
        l.push((1.0 - (alpha + 1.0) / k as f64) * prev);
    }
    l
}

pub fn gl_weights(alpha: f64, n: usize) -> Result<TemporalWeights> {
    check_alpha(alpha)?;
    Ok(TemporalWeights {
        alpha,
        family: WeightFamily::Gl1,
        w: binomial_sequence(alpha, n),
    })
}

pub fn ho3_weights(alpha: f64, n: usize) -> Result<TemporalWeights> {
    check_alpha(alpha)?;
    let l = binomial_sequence(alpha, n);
    let mu = Complex64::new(4.0, 0.0) / Complex64::new(7.0, 39f64.sqrt());
    let mu_bar = mu.conj();
    let mut mu_pow = Vec::with_capacity(n + 1);
    let mut bar_pow = Vec::with_capacity(n + 1);
    let (mut a, mut b) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    for _ in 0..=n {
        mu_pow.push(a);
        bar_pow.push(b);
        a *= mu;
        b *= mu_bar;
    }
    // c_p = Σ_q μ^q l_q μ̄^{p-q} l_{p-q}
    let c: Vec<Complex64> = (0..=n)
        .map(|p| {
            (0..=p)
                .map(|q| mu_pow[q] * l[q] * bar_pow[p - q] * l[p - q])
                .sum()
        })
        .collect();
    let scale = (11.0f64 / 6.0).powf(alpha);
    let mut w = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let s: Complex64 = (0..=k).map(|p| c[p] * l[k - p]).sum();
        let s = s * scale;
        if s.im.abs() > 1e-12 * s.re.abs().max(1.0) {
            return Err(FadeError::NonConvergence(format!(
                "third-order weight {k} has imaginary residue {:e}",
                s.im
            )));
        }
        w.push(s.re);
    }
    Ok(TemporalWeights {
        alpha,
        family: WeightFamily::Ho3,
        w,
    })
}

/// Past solution levels `U^0..U^{n-1}` stored contiguously.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    dim: usize,
    data: Vec<f64>,
}

impl History {
    pub fn new(initial: Vec<f64>) -> Self {
        Self {
            dim: initial.len(),
            data: initial,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored levels.
    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn latest(&self) -> &[f64] {
        self.level(self.len() - 1)
    }

    pub fn push(&mut self, level: &[f64]) -> Result<()> {
        if level.len() != self.dim {
            return Err(FadeError::LengthMismatch {
                expected: self.dim,
                got: level.len(),
            });
        }
        self.data.extend_from_slice(level);
        Ok(())
    }

    /// Keeps only the newest level.
    pub fn truncate_to_latest(&mut self) {
        let n = self.len();
        if n > 1 {
            self.data.drain(..(n - 1) * self.dim);
        }
    }

    pub fn levels(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim.max(1))
    }
}

/// Known side of the discrete Caputo derivative at level `n = history.len()`:
/// `-Σ_{k=1}^{n-1} ω_k U^{n-k} + (Σ_{k=0}^{n-1} ω_k) U^0`.
///
/// The unknown contributes `ω_0 U^n` on the left.
pub fn caputo_residual_rhs(history: &History, weights: &TemporalWeights) -> Result<Vec<f64>> {
    let n = history.len();
    if n == 0 {
        return Err(FadeError::LengthMismatch {
            expected: 1,
            got: 0,
        });
    }
    if weights.len() < n {
        return Err(FadeError::LengthMismatch {
            expected: n,
            got: weights.len(),
        });
    }
    let w = &weights.w;
    let partial: f64 = w[..n].iter().sum();
    let mut out: Vec<f64> = history.level(0).iter().map(|u| partial * u).collect();
    for k in 1..n {
        let wk = w[k];
        for (o, u) in out.iter_mut().zip(history.level(n - k)) {
            *o -= wk * u;
        }
    }
    Ok(out)
}

/// Discrete Caputo derivative of a sampled scalar series `f(t_0..t_n)` at
/// `t_n`, `τ^{-α} [Σ_{k=0}^{n-1} ω_k f_{n-k} - (Σ_{k=0}^{n-1} ω_k) f_0]`.
pub fn caputo_derivative(samples: &[f64], weights: &TemporalWeights, tau: f64) -> Result<f64> {
    let Some((&last, past)) = samples.split_last() else {
        return Err(FadeError::LengthMismatch {
            expected: 1,
            got: 0,
        });
    };
    let mut history = History::new(vec![past.first().copied().unwrap_or(last)]);
    for &v in past.iter().skip(1) {
        history.push(&[v])?;
    }
    if past.is_empty() {
        return Ok(0.0);
    }
    let known = caputo_residual_rhs(&history, weights)?;
    Ok((weights.leading() * last - known[0]) / tau.powf(weights.alpha))
}
