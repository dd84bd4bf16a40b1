//! Benchmark problems with exact (or reference) solutions and the error
//! norms used to score them.

mod catalog;
mod heat_series;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{FadeError, Result};
use crate::frac_calculus::WeightFamily;
use crate::splines::BasisKind;

pub use catalog::make_problem;
pub use heat_series::truncated_series_solution_ex62;

/// A scalar field `(x, y, t) -> value`; 1D problems ignore `y`.
pub type Field = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

pub(crate) fn field(f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Field {
    Arc::new(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    /// 1D advection-diffusion with a Mittag-Leffler exact solution.
    Ex61,
    /// 1D diffusion from a parabolic initial profile (series solution).
    Ex62,
    /// 1D diffusion with manufactured solution `t² sin(2πx)`.
    Ex63,
    /// 2D diffusion with steep `tanh` layers.
    Ex64,
    /// Time-fractional nonlinear Schrodinger equation.
    Ex65,
    /// 2D advection-dominated Gaussian pulse.
    Ex66,
    /// 2D space-fractional diffusion.
    Ex67,
}

impl ProblemId {
    pub const ALL: [ProblemId; 7] = [
        ProblemId::Ex61,
        ProblemId::Ex62,
        ProblemId::Ex63,
        ProblemId::Ex64,
        ProblemId::Ex65,
        ProblemId::Ex66,
        ProblemId::Ex67,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ProblemId::Ex61 => "ex61",
            ProblemId::Ex62 => "ex62",
            ProblemId::Ex63 => "ex63",
            ProblemId::Ex64 => "ex64",
            ProblemId::Ex65 => "ex65",
            ProblemId::Ex66 => "ex66",
            ProblemId::Ex67 => "ex67",
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = FadeError;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| FadeError::UnknownProblem(s.to_string()))
    }
}

/// Time integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Implicit scheme with the discrete Caputo memory term.
    FracImplicit,
    /// Explicit four-stage Runge-Kutta Gill (`α = 1` only).
    RkGill,
    /// Crank-Nicolson for the space-fractional equation.
    CnFracSpace,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::FracImplicit => "frac-implicit",
            Scheme::RkGill => "rk-gill",
            Scheme::CnFracSpace => "cn-fracspace",
        }
    }
}

impl FromStr for Scheme {
    type Err = FadeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "frac-implicit" => Ok(Scheme::FracImplicit),
            "rk-gill" => Ok(Scheme::RkGill),
            "cn-fracspace" => Ok(Scheme::CnFracSpace),
            other => Err(FadeError::IncompatibleScheme(format!(
                "unknown scheme '{other}' (expected frac-implicit, rk-gill or cn-fracspace)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equation {
    /// `D_t^α u + κ·∇u - ε·Δu = f`.
    TimeFractional,
    /// `u_t - εx D_x^{β1} u - εy D_y^{β2} u = f`.
    SpaceFractional,
    /// `i D_t^α u + u_xx + β_nl |u|² u = 0`, split as `u = U + iV`.
    Schrodinger { beta_nl: f64 },
}

/// Initial data for the Schrodinger problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NlsInitial {
    /// `sech(x) exp(2ix)`.
    Soliton,
    /// `Σ_j sech(x - x_j) exp(i p_j (x - x_j))` with `x = ∓6`, `p = ±2`.
    Collision,
}

/// Tunable parameters for [`make_problem`]; `None` picks the problem default.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProblemParams {
    pub alpha: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    /// Overrides the spatial domain `[a, b]` (both axes in 2D).
    pub domain: Option<(f64, f64)>,
    pub nls_initial: Option<NlsInitial>,
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub x_range: (f64, f64),
    /// `None` for 1D problems.
    pub y_range: Option<(f64, f64)>,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub kappa_x: f64,
    pub kappa_y: f64,
    pub eps_x: f64,
    pub eps_y: f64,
    pub equation: Equation,
    pub initial: Field,
    pub boundary: Field,
    pub source: Field,
    pub exact: Option<Field>,
    /// Imaginary parts for the Schrodinger problem.
    pub initial_im: Option<Field>,
    pub exact_im: Option<Field>,
    pub basis: BasisKind,
    pub weights: WeightFamily,
    pub scheme: Scheme,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("id", &self.id)
            .field("x_range", &self.x_range)
            .field("y_range", &self.y_range)
            .field("alpha", &self.alpha)
            .field("beta1", &self.beta1)
            .field("beta2", &self.beta2)
            .field("kappa", &(self.kappa_x, self.kappa_y))
            .field("eps", &(self.eps_x, self.eps_y))
            .field("equation", &self.equation)
            .field("has_exact", &self.exact.is_some())
            .field("basis", &self.basis)
            .field("weights", &self.weights)
            .field("scheme", &self.scheme)
            .finish()
    }
}

impl ProblemSpec {
    pub fn is_2d(&self) -> bool {
        self.y_range.is_some()
    }
}

/// Error norms at one output time.
///
/// Sums run over interior nodes; `e2` is normalized by `1/M` (1D) or
/// `1/(Mx My)` (2D).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorReport {
    pub e2: f64,
    pub einf: f64,
    /// Normalized by the initial data; `None` when that is zero or unknown.
    pub en: Option<f64>,
    /// Mean absolute error over interior nodes.
    pub mean_abs: f64,
    /// Discrete L² norm `sqrt(h_x h_y Σ |e|²)`; equals `e2` on unit domains.
    pub l2: f64,
}

impl ErrorReport {
    /// Sets `l2` for a domain of total length (1D) or area (2D) `measure`.
    pub fn with_domain_measure(mut self, measure: f64) -> Self {
        self.l2 = self.e2 * measure.sqrt();
        self
    }
}

/// `cells` is `M` in 1D and `(Mx, My)` flattened as `Mx·My` in 2D.
pub fn error_norms(
    numeric: &[f64],
    exact: &[f64],
    cells_product: usize,
    initial: Option<&[f64]>,
) -> Result<ErrorReport> {
    if numeric.len() != exact.len() {
        return Err(FadeError::LengthMismatch {
            expected: exact.len(),
            got: numeric.len(),
        });
    }
    if numeric.is_empty() || cells_product == 0 {
        return Err(FadeError::Undefined("error norms of an empty grid".into()));
    }
    let mut sq = 0.0;
    let mut einf: f64 = 0.0;
    let mut abs_sum = 0.0;
    for (u, e) in numeric.iter().zip(exact) {
        let d = (u - e).abs();
        sq += d * d;
        abs_sum += d;
        einf = einf.max(d);
    }
    let en = match initial {
        Some(u0) => {
            if u0.len() != numeric.len() {
                return Err(FadeError::LengthMismatch {
                    expected: numeric.len(),
                    got: u0.len(),
                });
            }
            let denom: f64 = u0.iter().map(|v| v * v).sum();
            (denom > 0.0).then(|| (sq / denom).sqrt())
        }
        None => None,
    };
    let e2 = (sq / cells_product as f64).sqrt();
    Ok(ErrorReport {
        e2,
        l2: e2,
        einf,
        en,
        mean_abs: abs_sum / numeric.len() as f64,
    })
}

/// Observed orders `log(e_k / e_{k+1}) / log(M_{k+1} / M_k)`.
pub fn observed_rates(cells: &[usize], errors: &[f64]) -> Vec<f64> {
    cells
        .windows(2)
        .zip(errors.windows(2))
        .map(|(m, e)| (e[0] / e[1]).ln() / (m[1] as f64 / m[0] as f64).ln())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_vectors_give_zero() {
        let v = [1.0, 2.0, 3.0];
        let r = error_norms(&v, &v, 4, Some(&v)).unwrap();
        assert_eq!((r.e2, r.einf, r.en), (0.0, 0.0, Some(0.0)));
    }

    #[test]
    fn constant_offset() {
        let m = 10;
        let a = vec![0.5; m - 1];
        let b = vec![0.0; m - 1];
        let r = error_norms(&a, &b, m, Some(&b)).unwrap();
        assert!((r.einf - 0.5).abs() < 1e-15);
        assert!((r.e2 - 0.5 * ((m - 1) as f64 / m as f64).sqrt()).abs() < 1e-15);
        assert_eq!(r.en, None);
        assert!(error_norms(&a, &b[1..], m, None).is_err());
    }

    #[test]
    fn rates_for_second_order_data() {
        let r = observed_rates(&[8, 16, 32], &[4e-3, 1e-3, 2.5e-4]);
        assert!(r.iter().all(|x| (x - 2.0).abs() < 1e-12));
        assert!(observed_rates(&[8], &[1.0]).is_empty());
    }

    #[test]
    fn names_round_trip() {
        for id in ProblemId::ALL {
            assert_eq!(id.name().parse::<ProblemId>().unwrap(), id);
        }
        assert!(matches!(
            "ex99".parse::<ProblemId>(),
            Err(FadeError::UnknownProblem(_))
        ));
        assert_eq!("rk-gill".parse::<Scheme>().unwrap(), Scheme::RkGill);
    }
}
