//! Runge-Kutta Gill, the four-stage method with `√2` stage coefficients.

use crate::error::{FadeError, Result};

/// One step `u(t) -> u(t + τ)` of `u' = F(t, u)`.
///
/// `rhs(t, u)` returns `F(t, u)`.
pub fn rk_gill_step<F>(u: &mut [f64], t: f64, tau: f64, mut rhs: F) -> Result<()>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let s2 = std::f64::consts::SQRT_2;
    let n = u.len();
    let check = |k: &[f64]| -> Result<()> {
        if k.len() != n {
            return Err(FadeError::LengthMismatch {
                expected: n,
                got: k.len(),
            });
        }
        Ok(())
    };
    let scaled = |k: Vec<f64>| -> Vec<f64> { k.into_iter().map(|v| v * tau).collect() };
    let k1 = scaled(rhs(t, u)?);
    check(&k1)?;
    let y: Vec<f64> = (0..n).map(|i| u[i] + 0.5 * k1[i]).collect();
    let k2 = scaled(rhs(t + 0.5 * tau, &y)?);
    check(&k2)?;
    let (a, b) = ((s2 - 1.0) / 2.0, (2.0 - s2) / 2.0);
    let y: Vec<f64> = (0..n).map(|i| u[i] + a * k1[i] + b * k2[i]).collect();
    let k3 = scaled(rhs(t + 0.5 * tau, &y)?);
    check(&k3)?;
    let (c, d) = (-s2 / 2.0, (2.0 + s2) / 2.0);
    let y: Vec<f64> = (0..n).map(|i| u[i] + c * k2[i] + d * k3[i]).collect();
    let k4 = scaled(rhs(t + tau, &y)?);
    check(&k4)?;
    for i in 0..n {
        u[i] += (k1[i] + (2.0 - s2) * k2[i] + (2.0 + s2) * k3[i] + k4[i]) / 6.0;
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(FadeError::Divergence(format!(
            "Runge-Kutta Gill produced a non-finite value at t = {}",
            t + tau
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(tau: f64, steps: usize) -> f64 {
        let mut u = [1.0];
        for n in 0..steps {
            rk_gill_step(&mut u, n as f64 * tau, tau, |_, y| Ok(vec![-y[0]])).unwrap();
        }
        u[0]
    }

    #[test]
    fn one_step_of_exponential_decay() {
        assert!((decay(0.1, 1) - (-0.1f64).exp()).abs() < 1e-7);
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let mut u = [1.5, -2.0];
        rk_gill_step(&mut u, 0.0, 0.3, |_, y| Ok(vec![0.0; y.len()])).unwrap();
        assert_eq!(u, [1.5, -2.0]);
    }

    #[test]
    fn fourth_order() {
        let e = |n: usize| (decay(1.0 / n as f64, n) - (-1.0f64).exp()).abs();
        let rates: Vec<f64> = [10usize, 20, 40]
            .windows(2)
            .map(|w| (e(w[0]) / e(w[1])).log2())
            .collect();
        assert!(rates.iter().all(|r| (r - 4.0).abs() < 0.2), "{rates:?}");
    }

    #[test]
    fn stage_times_are_used() {
        // u' = t integrates exactly with Simpson-type weights
        let mut u = [0.0];
        rk_gill_step(&mut u, 0.0, 1.0, |t, _| Ok(vec![t * t])).unwrap();
        assert!((u[0] - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn divergence_is_reported() {
        let mut u = [1.0];
        let r = rk_gill_step(&mut u, 0.0, 1.0, |_, _| Ok(vec![f64::INFINITY]));
        assert!(matches!(r, Err(FadeError::Divergence(_))));
        let r = rk_gill_step(&mut u, 0.0, 1.0, |_, _| Ok(vec![0.0, 1.0]));
        assert!(r.is_err());
    }
}
