//! Definitions of the seven benchmark problems.

use std::f64::consts::PI;
use std::sync::Arc;

use super::heat_series::SeriesCache;
use super::{field, Equation, Field, NlsInitial, ProblemId, ProblemParams, ProblemSpec, Scheme};
use crate::error::{FadeError, Result};
use crate::frac_calculus::{gamma, mittag_leffler, WeightFamily};
use crate::splines::BasisKind;

/// Odd Fourier modes kept in the series solution of [`ProblemId::Ex62`].
pub(crate) const EX62_SERIES_TERMS: usize = 200;

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn zero() -> Field {
    field(|_, _, _| 0.0)
}

fn check_range(name: &'static str, v: f64, lo: f64, hi: f64, domain: &'static str) -> Result<f64> {
    if v > lo && v <= hi {
        Ok(v)
    } else {
        Err(FadeError::Domain {
            name,
            value: v,
            domain,
        })
    }
}

fn base(id: ProblemId, x_range: (f64, f64), alpha: f64) -> ProblemSpec {
    ProblemSpec {
        id,
        x_range,
        y_range: None,
        alpha,
        beta1: 2.0,
        beta2: 2.0,
        kappa_x: 0.0,
        kappa_y: 0.0,
        eps_x: 0.0,
        eps_y: 0.0,
        equation: Equation::TimeFractional,
        initial: zero(),
        boundary: zero(),
        source: zero(),
        exact: None,
        initial_im: None,
        exact_im: None,
        basis: BasisKind::MODIFIED_CTB,
        weights: WeightFamily::Ho3,
        scheme: Scheme::FracImplicit,
    }
}

pub fn make_problem(id: ProblemId, params: &ProblemParams) -> Result<ProblemSpec> {
    let alpha = |default: f64| -> Result<f64> {
        check_range("alpha", params.alpha.unwrap_or(default), 0.0, 1.0, "(0, 1]")
    };
    let domain = |default: (f64, f64)| -> Result<(f64, f64)> {
        let (a, b) = params.domain.unwrap_or(default);
        if a < b {
            Ok((a, b))
        } else {
            Err(FadeError::InvalidGrid(format!("empty domain [{a}, {b}]")))
        }
    };
    let spec = match id {
        ProblemId::Ex61 => {
            let a = alpha(0.5)?;
            let e = move |t: f64| {
                mittag_leffler(a, t.powf(a)).unwrap_or_else(|err| {
                    log::warn!("Mittag-Leffler at t = {t}: {err}");
                    f64::NAN
                })
            };
            let exact = field(move |x, _, t| x.exp() * e(t));
            ProblemSpec {
                kappa_x: 1.0,
                eps_x: 2.0,
                initial: field(|x, _, _| x.exp()),
                boundary: exact.clone(),
                exact: Some(exact),
                weights: WeightFamily::Gl1,
                ..base(id, domain((0.0, 1.0))?, a)
            }
        }
        ProblemId::Ex62 => {
            let a = alpha(0.5)?;
            let cache = Arc::new(SeriesCache::new(a, EX62_SERIES_TERMS));
            ProblemSpec {
                eps_x: 1.0,
                initial: field(|x, _, _| 4.0 * x * (1.0 - x)),
                exact: Some(field(move |x, _, t| {
                    if t == 0.0 {
                        4.0 * x * (1.0 - x)
                    } else {
                        cache.eval(x, t)
                    }
                })),
                ..base(id, domain((0.0, 1.0))?, a)
            }
        }
        ProblemId::Ex63 => {
            let a = alpha(0.5)?;
            let g3 = gamma(3.0 - a);
            ProblemSpec {
                eps_x: 1.0,
                source: field(move |x, _, t| {
                    let s = (2.0 * PI * x).sin();
                    2.0 * t.powf(2.0 - a) * s / g3 + 4.0 * PI * PI * t * t * s
                }),
                exact: Some(field(|x, _, t| t * t * (2.0 * PI * x).sin())),
                ..base(id, domain((0.0, 1.0))?, a)
            }
        }
        ProblemId::Ex64 => {
            let a = alpha(0.5)?;
            let g3 = gamma(3.0 - a);
            let exact = field(|x, y, t| (1.0 + t * t) * (20.0 * x).tanh() * (20.0 * y).tanh());
            // f = D_t^α u - Δu with D_t^α (1 + t²) = 2t^{2-α}/Γ(3-α)
            let source = field(move |x, y, t| {
                let (tx, ty) = ((20.0 * x).tanh(), (20.0 * y).tanh());
                let d2 = |th: f64, s: f64| -800.0 * th * sech(s).powi(2);
                let lap = d2(tx, 20.0 * x) * ty + tx * d2(ty, 20.0 * y);
                let dt = if t > 0.0 {
                    2.0 * t.powf(2.0 - a) / g3
                } else {
                    0.0
                };
                dt * tx * ty - (1.0 + t * t) * lap
            });
            let r = domain((-1.0, 1.0))?;
            ProblemSpec {
                y_range: Some(r),
                eps_x: 1.0,
                eps_y: 1.0,
                initial: exact.clone(),
                boundary: exact.clone(),
                source,
                exact: Some(exact),
                ..base(id, r, a)
            }
        }
        ProblemId::Ex65 => {
            let a = alpha(1.0)?;
            let beta_nl = 2.0;
            let (re, im): (Field, Field) = match params.nls_initial.unwrap_or(NlsInitial::Soliton) {
                NlsInitial::Soliton => (
                    field(|x, _, _| sech(x) * (2.0 * x).cos()),
                    field(|x, _, _| sech(x) * (2.0 * x).sin()),
                ),
                NlsInitial::Collision => {
                    let pulses = [(-6.0, 2.0), (6.0, -2.0)];
                    (
                        field(move |x, _, _| {
                            pulses
                                .iter()
                                .map(|(c, p)| sech(x - c) * (p * (x - c)).cos())
                                .sum()
                        }),
                        field(move |x, _, _| {
                            pulses
                                .iter()
                                .map(|(c, p)| sech(x - c) * (p * (x - c)).sin())
                                .sum()
                        }),
                    )
                }
            };
            let soliton = a == 1.0
                && params.nls_initial.unwrap_or(NlsInitial::Soliton) == NlsInitial::Soliton;
            ProblemSpec {
                equation: Equation::Schrodinger { beta_nl },
                initial: re,
                initial_im: Some(im),
                exact: soliton
                    .then(|| field(|x, _, t| sech(x - 4.0 * t) * (2.0 * x - 3.0 * t).cos())),
                exact_im: soliton
                    .then(|| field(|x, _, t| sech(x - 4.0 * t) * (2.0 * x - 3.0 * t).sin())),
                weights: WeightFamily::Gl1,
                ..base(id, domain((-10.0, 10.0))?, a)
            }
        }
        ProblemId::Ex66 => {
            if params.alpha.is_some_and(|a| a != 1.0) {
                return Err(FadeError::IncompatibleScheme(
                    "the Gaussian pulse problem is integer order (alpha = 1)".into(),
                ));
            }
            let (k, e) = (0.8, 0.01);
            let exact = field(move |x, y, t| {
                let s = 1.0 + 4.0 * t;
                let dx = x - k * t - 0.5;
                let dy = y - k * t - 0.5;
                (-(dx * dx) / (e * s) - dy * dy / (e * s)).exp() / s
            });
            let r = domain((0.0, 2.0))?;
            ProblemSpec {
                y_range: Some(r),
                kappa_x: k,
                kappa_y: k,
                eps_x: e,
                eps_y: e,
                initial: exact.clone(),
                boundary: exact.clone(),
                exact: Some(exact),
                scheme: Scheme::RkGill,
                ..base(id, r, 1.0)
            }
        }
        ProblemId::Ex67 => {
            let b1 = check_range("beta1", params.beta1.unwrap_or(1.1), 1.0, 2.0, "(1, 2]")?;
            let b2 = check_range("beta2", params.beta2.unwrap_or(1.3), 1.0, 2.0, "(1, 2]")?;
            let p = |x: f64| x * x * (1.0 - x) * (1.0 - x);
            let frac = |z: f64, b: f64| {
                2.0 * z.powf(2.0 - b) / gamma(3.0 - b)
                    * (1.0 - 6.0 * z / (3.0 - b) + 12.0 * z * z / ((3.0 - b) * (4.0 - b)))
            };
            let r = domain((0.0, 1.0))?;
            ProblemSpec {
                y_range: Some(r),
                beta1: b1,
                beta2: b2,
                eps_x: 1.0,
                eps_y: 1.0,
                equation: Equation::SpaceFractional,
                initial: field(move |x, y, _| p(x) * p(y)),
                source: field(move |x, y, t| {
                    let et = (-t).exp();
                    -et * p(x) * p(y)
                        - et * frac(x, b1) * y * y * (1.0 - y) * (1.0 - y)
                        - et * x * x * (1.0 - x) * (1.0 - x) * frac(y, b2)
                }),
                exact: Some(field(move |x, y, t| (-t).exp() * p(x) * p(y))),
                basis: BasisKind::MODIFIED_CUBIC_B,
                scheme: Scheme::CnFracSpace,
                ..base(id, r, 1.0)
            }
        }
    };
    Ok(spec)
}
