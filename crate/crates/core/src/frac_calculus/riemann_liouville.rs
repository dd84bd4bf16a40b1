//! Riemann-Liouville derivatives with lower terminal `x_0`: monomials and
//! the closed forms for cubic B-splines `B_m`, `-1 <= m <= M+1`.

use super::gamma::{gamma, rgamma};
use crate::error::{FadeError, Result};
use crate::grid::Grid;
use crate::splines::modification_terms;

/// `D^α t^l = Γ(l+1) t^{l-α} / Γ(l+1-α)`, `t > 0`.
pub fn rl_monomial(l: u32, alpha: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(FadeError::Domain {
            name: "t",
            value: t,
            domain: "t > 0",
        });
    }
    let lf = l as f64;
    let c = rgamma(lf + 1.0 - alpha);
    if c == 0.0 {
        return Ok(0.0);
    }
    Ok(gamma(lf + 1.0) * c * t.powf(lf - alpha))
}

/// `coef · s^power`, rejecting a nonzero coefficient on a negative power at 0.
fn power_term(coef: f64, s: f64, power: f64) -> Result<f64> {
    if coef == 0.0 {
        return Ok(0.0);
    }
    if s == 0.0 && power < 0.0 {
        return Err(FadeError::Singularity {
            x: s,
            what: "negative power of (x - x_0) in a boundary B-spline derivative",
        });
    }
    Ok(coef * s.powf(power))
}

pub fn rl_bspline_deriv(m: isize, beta: f64, x: f64, grid: &Grid) -> Result<f64> {
    if !(beta > 1.0 && beta <= 2.0) {
        return Err(FadeError::Domain {
            name: "beta",
            value: beta,
            domain: "(1, 2]",
        });
    }
    let mm = grid.cells() as isize;
    if m < -1 || m > mm + 1 {
        return Err(FadeError::Domain {
            name: "m",
            value: m as f64,
            domain: "-1 ..= M+1",
        });
    }
    let x0 = grid.a();
    if x < x0 || x > grid.b() * (1.0 + 1e-14) + 1e-14 {
        return Err(FadeError::Domain {
            name: "x",
            value: x,
            domain: "[x_0, x_M]",
        });
    }
    let h = grid.h();
    let p = 3.0 - beta;
    let g4 = rgamma(4.0 - beta) / (h * h * h);
    let tp = |j: isize| -> f64 {
        let d = x - grid.knot(j);
        if d > 0.0 {
            d.powf(p)
        } else {
            0.0
        }
    };
    let s = x - x0;
    let r2 = rgamma(2.0 - beta);
    let r3 = rgamma(3.0 - beta);
    let value = match m {
        -1 => {
            power_term((1.0 - beta) * r2, s, -beta)?
                + power_term(-3.0 * r2 / h, s, 1.0 - beta)?
                + power_term(6.0 * r3 / (h * h), s, 2.0 - beta)?
                + g4 * (-6.0 * s.powf(p) + 6.0 * tp(1))
        }
        0 => {
            power_term(4.0 * (1.0 - beta) * r2, s, -beta)?
                + power_term(-12.0 * r3 / (h * h), s, 2.0 - beta)?
                + g4 * (18.0 * s.powf(p) - 24.0 * tp(1) + 6.0 * tp(2))
        }
        1 => {
            power_term((1.0 - beta) * r2, s, -beta)?
                + power_term(3.0 * r2 / h, s, 1.0 - beta)?
                + power_term(6.0 * r3 / (h * h), s, 2.0 - beta)?
                + g4 * (-18.0 * s.powf(p) + 36.0 * tp(1) - 24.0 * tp(2) + 6.0 * tp(3))
        }
        _ => {
            const C: [f64; 5] = [6.0, -24.0, 36.0, -24.0, 6.0];
            g4 * C
                .iter()
                .enumerate()
                .map(|(j, c)| c * tp(m - 2 + j as isize))
                .sum::<f64>()
        }
    };
    Ok(value)
}

/// Derivative of the end-corrected cubic B-spline `MB_k` at knot `x_i`,
/// `1 <= i <= M-1`.
pub fn rl_modified_bspline_deriv(k: usize, beta: f64, i: usize, grid: &Grid) -> Result<f64> {
    let mm = grid.cells();
    if i == 0 || i >= mm {
        return Err(FadeError::Singularity {
            x: grid.knot(i as isize),
            what: "fractional collocation is defined at interior knots only",
        });
    }
    let x = grid.knot(i as isize);
    modification_terms(k, grid)
        .into_iter()
        .try_fold(0.0, |acc, (m, c)| {
            Ok(acc + c * rl_bspline_deriv(m, beta, x, grid)?)
        })
}
