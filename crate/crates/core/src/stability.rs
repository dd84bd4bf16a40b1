//! Stability diagnostics: spectra of weight matrices and the resolvent norm
//! `‖(I + τ^α K)^{-1}‖₂` over parameter sweeps.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dq_weights::{first_order_weights, higher_order_weights, WeightMatrix};
use crate::error::{FadeError, Result};
use crate::grid::Grid;
use crate::linalg::{complex_schur, DenseLu};
use crate::operators::{assemble_k_2d, SpatialOperator};
use crate::splines::BasisKind;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITER: usize = 10_000;

/// `‖(I + τ^α K)^{-1}‖₂` by power iteration on `A^{-1} A^{-T}`.
pub fn resolvent_norm(k: &SpatialOperator, tau: f64, alpha: f64) -> Result<f64> {
    let n = k.dim();
    let mut a = k.to_dense() * tau.powf(alpha);
    for i in 0..n {
        a[(i, i)] += 1.0;
    }
    inverse_norm(a)
}

/// Largest singular value of `a^{-1}`.
pub fn inverse_norm(a: DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    let lu_t = DenseLu::new(a.transpose())?;
    let lu = DenseLu::new(a)?;
    let mut x = DVector::from_fn(n, |i, _| 1.0 + 0.1 * ((i + 1) as f64).sin());
    x /= x.norm();
    let mut sigma2 = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let y = lu.solve(&lu_t.solve(&x)?)?;
        let next = y.norm();
        if !next.is_finite() {
            return Err(FadeError::SingularSystem(
                "resolvent power iteration".into(),
            ));
        }
        if next == 0.0 {
            return Ok(0.0);
        }
        x = y / next;
        if (next - sigma2).abs() <= POWER_TOL * next {
            return Ok(next.sqrt());
        }
        sigma2 = next;
    }
    log::warn!("resolvent power iteration stagnated after {POWER_MAX_ITER} iterations");
    Ok(sigma2.sqrt())
}

fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let (_, t) = complex_schur(m)?;
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Eigenvalues of the interior block of `w`.
pub fn weight_spectrum(w: &WeightMatrix) -> Result<Vec<Complex64>> {
    eigenvalues(&w.interior_block())
}

/// Coefficients of `K = κx ∂x + κy ∂y - εx ∂xx - εy ∂yy`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coefficients {
    pub kappa_x: f64,
    pub kappa_y: f64,
    pub eps_x: f64,
    pub eps_y: f64,
}

/// Eigenvalues of `-K` from the axis blocks by the Kronecker-sum rule,
/// `λ_{ij} = μ_i(-A_x) + ν_j(-A_y)`, without forming `K`.
pub fn composed_spectrum_2d(
    wx1: &WeightMatrix,
    wx2: &WeightMatrix,
    wy1: &WeightMatrix,
    wy2: &WeightMatrix,
    c: Coefficients,
) -> Result<Vec<Complex64>> {
    let ax = wx1.interior_block() * -c.kappa_x + wx2.interior_block() * c.eps_x;
    let ay = wy1.interior_block() * -c.kappa_y + wy2.interior_block() * c.eps_y;
    let lx = eigenvalues(&ax)?;
    let ly = eigenvalues(&ay)?;
    Ok(ly
        .iter()
        .flat_map(|mu| lx.iter().map(move |la| la + mu))
        .collect())
}

/// One point of the stability parameter space on `[0, L]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityPoint {
    pub coefficients: Coefficients,
    pub mx: usize,
    pub my: usize,
    pub tau: f64,
    pub alpha: f64,
    pub extent: f64,
    pub basis: BasisKind,
}

impl Default for StabilityPoint {
    fn default() -> Self {
        Self {
            coefficients: Coefficients {
                kappa_x: 0.0,
                kappa_y: 0.0,
                eps_x: 1.0,
                eps_y: 1.0,
            },
            mx: 5,
            my: 5,
            tau: 1e-3,
            alpha: 0.5,
            extent: 1.0,
            basis: BasisKind::MODIFIED_CTB,
        }
    }
}

struct AxisWeights {
    w1: WeightMatrix,
    w2: WeightMatrix,
}

impl StabilityPoint {
    fn axis(&self, m: usize) -> Result<AxisWeights> {
        let g = Grid::new(0.0, self.extent, m)?;
        let w1 = first_order_weights(self.basis, &g)?;
        let w2 = higher_order_weights(&w1, 2, &g)?;
        Ok(AxisWeights { w1, w2 })
    }

    pub fn operator(&self) -> Result<SpatialOperator> {
        let (x, y) = (self.axis(self.mx)?, self.axis(self.my)?);
        let c = self.coefficients;
        assemble_k_2d(
            c.kappa_x, c.kappa_y, c.eps_x, c.eps_y, &x.w1, &x.w2, &y.w1, &y.w2,
        )
    }

    /// Resolvent norm and the spectrum of `-K` at this point.
    pub fn report(&self, param: SweepParam, value: f64) -> Result<StabilityReport> {
        let (x, y) = (self.axis(self.mx)?, self.axis(self.my)?);
        let c = self.coefficients;
        let k = assemble_k_2d(
            c.kappa_x, c.kappa_y, c.eps_x, c.eps_y, &x.w1, &x.w2, &y.w1, &y.w2,
        )?;
        Ok(StabilityReport {
            param,
            value,
            resolvent_norm: resolvent_norm(&k, self.tau, self.alpha)?,
            spectrum: composed_spectrum_2d(&x.w1, &x.w2, &y.w1, &y.w2, c)?,
            point: *self,
        })
    }

    /// Copy with `param` set to `value` (both axes where applicable).
    pub fn with(&self, param: SweepParam, value: f64) -> Result<Self> {
        let mut p = *self;
        let positive = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(FadeError::Domain {
                    name,
                    value: v,
                    domain: "> 0",
                })
            }
        };
        match param {
            SweepParam::Kappa => {
                p.coefficients.kappa_x = value;
                p.coefficients.kappa_y = value;
            }
            SweepParam::Eps => {
                p.coefficients.eps_x = value;
                p.coefficients.eps_y = value;
            }
            SweepParam::M => {
                if value < 2.0 || value.fract() != 0.0 {
                    return Err(FadeError::Domain {
                        name: "M",
                        value,
                        domain: "an integer >= 2",
                    });
                }
                p.mx = value as usize;
                p.my = value as usize;
            }
            SweepParam::DomainExtent => p.extent = positive("domain_extent", value)?,
            SweepParam::Tau => p.tau = positive("tau", value)?,
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    Kappa,
    Eps,
    M,
    DomainExtent,
    Tau,
}

impl SweepParam {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Kappa => "kappa",
            SweepParam::Eps => "eps",
            SweepParam::M => "M",
            SweepParam::DomainExtent => "domain_extent",
            SweepParam::Tau => "tau",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = FadeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa" => Ok(SweepParam::Kappa),
            "eps" => Ok(SweepParam::Eps),
            "M" | "m" => Ok(SweepParam::M),
            "domain_extent" | "extent" => Ok(SweepParam::DomainExtent),
            "tau" => Ok(SweepParam::Tau),
            other => Err(FadeError::Undefined(format!(
                "unknown sweep parameter `{other}` (expected kappa, eps, M, domain_extent or tau)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub param: SweepParam,
    pub value: f64,
    pub resolvent_norm: f64,
    /// Eigenvalues of `-K`.
    pub spectrum: Vec<Complex64>,
    pub point: StabilityPoint,
}

/// Reports at each value of `param`, in the order given.
pub fn assumption_sweep(
    param: SweepParam,
    values: &[f64],
    base: &StabilityPoint,
) -> Result<Vec<StabilityReport>> {
    values
        .iter()
        .map(|&v| base.with(param, v)?.report(param, v))
        .collect()
}

/// Smallest `κ/ε` (with `κx = κy = κ`) at which the resolvent norm exceeds
/// one, located by bisection in `[lo, hi]`.
pub fn critical_ratio(base: &StabilityPoint, lo: f64, hi: f64) -> Result<f64> {
    let eps = base.coefficients.eps_x;
    if !(eps > 0.0) {
        return Err(FadeError::Domain {
            name: "eps",
            value: eps,
            domain: "> 0",
        });
    }
    let excess = |ratio: f64| -> Result<f64> {
        let p = base.with(SweepParam::Kappa, ratio * eps)?;
        Ok(resolvent_norm(&p.operator()?, p.tau, p.alpha)? - 1.0)
    };
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (excess(a)?, excess(b)?);
    if fa > 0.0 || fb <= 0.0 {
        return Err(FadeError::NonConvergence(format!(
            "critical ratio is not bracketed by [{lo}, {hi}] (excess {fa:e}, {fb:e})"
        )));
    }
    while b - a > 1e-6 * b {
        let c = 0.5 * (a + b);
        if excess(c)? > 0.0 {
            b = c;
        } else {
            a = c;
        }
    }
    Ok(0.5 * (a + b))
}
