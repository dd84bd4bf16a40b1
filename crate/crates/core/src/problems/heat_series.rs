//! Fourier/Mittag-Leffler series for fractional diffusion of `4x(1-x)` on
//! `[0, 1]` with zero boundary values:
//! `u = 16/π³ Σ_k k^{-3} E_α(-k²π² t^α) (1 - (-1)^k) sin(kπx)`.

use std::f64::consts::PI;
use std::sync::Mutex;

use crate::error::{FadeError, Result};
use crate::frac_calculus::mittag_leffler;

/// Coefficients `32/(π³k³) E_α(-k²π²t^α)` for the first `terms` odd `k`.
fn coefficients(alpha: f64, t: f64, terms: usize) -> Result<Vec<f64>> {
    let ta = t.powf(alpha);
    (0..terms)
        .map(|n| {
            let k = (2 * n + 1) as f64;
            let e = mittag_leffler(alpha, -k * k * PI * PI * ta)?;
            Ok(32.0 / (PI.powi(3) * k.powi(3)) * e)
        })
        .collect()
}

fn sum(coef: &[f64], x: f64) -> f64 {
    coef.iter()
        .enumerate()
        .map(|(n, c)| c * ((2 * n + 1) as f64 * PI * x).sin())
        .sum()
}

/// Partial sum over the first `k_terms` odd wavenumbers (even ones vanish).
pub fn truncated_series_solution_ex62(alpha: f64, x: f64, t: f64, k_terms: usize) -> Result<f64> {
    if k_terms == 0 {
        return Err(FadeError::Domain {
            name: "k_terms",
            value: 0.0,
            domain: "k_terms >= 1",
        });
    }
    Ok(sum(&coefficients(alpha, t, k_terms)?, x))
}

/// Series evaluator that reuses the Mittag-Leffler coefficients while `t`
/// stays the same (every node at one output time).
pub(crate) struct SeriesCache {
    alpha: f64,
    terms: usize,
    last: Mutex<Option<(f64, Vec<f64>)>>,
}

impl SeriesCache {
    pub(crate) fn new(alpha: f64, terms: usize) -> Self {
        Self {
            alpha,
            terms,
            last: Mutex::new(None),
        }
    }

    pub(crate) fn eval(&self, x: f64, t: f64) -> f64 {
        let mut guard = self.last.lock().unwrap_or_else(|p| p.into_inner());
        if !matches!(&*guard, Some((tc, _)) if *tc == t) {
            let coef = coefficients(self.alpha, t, self.terms).unwrap_or_else(|e| {
                log::warn!("series coefficients at t = {t}: {e}");
                vec![f64::NAN; self.terms]
            });
            *guard = Some((t, coef));
        }
        let (_, coef) = guard.as_ref().expect("filled above");
        sum(coef, x)
    }
}
