//! Time integration and the `run` driver that ties a problem to a scheme.

mod crank_nicolson;
mod fractional;
mod nls;
mod rk_gill;

use std::time::{Duration, Instant};

pub use crank_nicolson::CnStepper;
pub use fractional::FractionalStepper;
pub use nls::{nls_mass, nls_operator, NewtonConfig, NewtonStats, NlsStepper};
pub use rk_gill::rk_gill_step;

use crate::dq_weights::{
    first_order_weights, fractional_weights, higher_order_weights, WeightMatrix,
};
use crate::error::{FadeError, Result};
use crate::frac_calculus::{TemporalWeights, WeightFamily};
use crate::grid::Grid;
use crate::operators::{assemble_frac_l_2d, assemble_k_1d, assemble_k_2d, SpatialOperator};
use crate::problems::{error_norms, Equation, ErrorReport, Field, ProblemId, ProblemSpec, Scheme};
use crate::splines::BasisKind;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Cells along x.
    pub mx: usize,
    /// Cells along y; defaults to `mx` for 2D problems.
    pub my: Option<usize>,
    pub tau: f64,
    pub t_end: f64,
    pub scheme: Option<Scheme>,
    pub weights: Option<WeightFamily>,
    pub basis: Option<BasisKind>,
    pub newton: NewtonConfig,
    /// Keep every `k`-th level in the trajectory; `0` keeps only the first and last.
    pub snapshot_every: usize,
}

impl RunConfig {
    pub fn new(m: usize, tau: f64, t_end: f64) -> Self {
        Self {
            mx: m,
            my: None,
            tau,
            t_end,
            scheme: None,
            weights: None,
            basis: None,
            newton: NewtonConfig::default(),
            snapshot_every: 0,
        }
    }

    /// Number of steps `N` with `N τ = T` up to rounding.
    pub fn steps(&self) -> Result<usize> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(FadeError::Domain {
                name: "tau",
                value: self.tau,
                domain: "tau > 0",
            });
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(FadeError::Domain {
                name: "t_end",
                value: self.t_end,
                domain: "t_end >= 0",
            });
        }
        let n = (self.t_end / self.tau).round();
        if (n * self.tau - self.t_end).abs() > 1e-9 * self.t_end.max(self.tau) {
            return Err(FadeError::Domain {
                name: "t_end",
                value: self.t_end,
                domain: "an integer multiple of tau",
            });
        }
        Ok(n as usize)
    }
}

/// Result of a run.
///
/// Levels hold values on the full grid (boundary included), x fastest.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub problem: ProblemId,
    pub scheme: Scheme,
    pub x: Vec<f64>,
    pub y: Option<Vec<f64>>,
    pub times: Vec<f64>,
    pub levels: Vec<Vec<f64>>,
    /// Imaginary part for the Schrodinger problem.
    pub levels_im: Option<Vec<Vec<f64>>>,
    pub steps: usize,
    pub wall_clock: Duration,
    pub errors: Option<ErrorReport>,
    pub errors_im: Option<ErrorReport>,
    /// Largest Newton iteration count over all steps (implicit Schrodinger runs).
    pub max_newton_iterations: Option<usize>,
}

impl Trajectory {
    pub fn final_level(&self) -> &[f64] {
        self.levels.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }
}

/// Grids, node coordinates and sampling helpers for one problem.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub gx: Grid,
    pub gy: Option<Grid>,
    pub basis: BasisKind,
}

impl Discretization {
    pub fn new(
        problem: &ProblemSpec,
        mx: usize,
        my: Option<usize>,
        basis: BasisKind,
    ) -> Result<Self> {
        let gx = Grid::new(problem.x_range.0, problem.x_range.1, mx)?;
        let gy = match problem.y_range {
            Some((a, b)) => Some(Grid::new(a, b, my.unwrap_or(mx))?),
            None => None,
        };
        Ok(Self { gx, gy, basis })
    }

    pub fn cells_product(&self) -> usize {
        self.gx.cells() * self.gy.as_ref().map_or(1, Grid::cells)
    }

    /// Length (1D) or area (2D) of the domain.
    pub fn measure(&self) -> f64 {
        let len = |g: &Grid| g.b() - g.a();
        len(&self.gx) * self.gy.as_ref().map_or(1.0, len)
    }

    fn ys(&self) -> Vec<f64> {
        self.gy.as_ref().map_or_else(|| vec![0.0], Grid::knots)
    }

    /// Samples `f(·, ·, t)` at interior nodes, x fastest.
    pub fn sample_interior(&self, f: &Field, t: f64) -> Vec<f64> {
        let xs = self.gx.interior();
        let ys = self.gy.as_ref().map_or_else(|| vec![0.0], Grid::interior);
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &y in &ys {
            for &x in &xs {
                out.push(f(x, y, t));
            }
        }
        out
    }

    /// Samples `f(·, ·, t)` on the full grid.
    pub fn sample_full(&self, f: &Field, t: f64) -> Vec<f64> {
        let xs = self.gx.knots();
        let mut out = Vec::new();
        for y in self.ys() {
            for &x in &xs {
                out.push(f(x, y, t));
            }
        }
        out
    }

    /// Full-grid values from interior unknowns and boundary data.
    pub fn embed(&self, interior: &[f64], boundary: &Field, t: f64) -> Vec<f64> {
        let mx = self.gx.cells();
        let xs = self.gx.knots();
        let ys = self.ys();
        let my = ys.len() - 1;
        let nx = mx - 1;
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for (j, &y) in ys.iter().enumerate() {
            for (i, &x) in xs.iter().enumerate() {
                let inside_y = self.gy.is_none() || (j > 0 && j < my);
                if i > 0 && i < mx && inside_y {
                    let jj = if self.gy.is_some() { j - 1 } else { 0 };
                    out.push(interior[jj * nx + i - 1]);
                } else {
                    out.push(boundary(x, y, t));
                }
            }
        }
        out
    }

    /// Boundary data as the `(i, j)` callback used by operators.
    pub fn boundary_callback<'a>(
        &'a self,
        g: &'a Field,
        t: f64,
    ) -> impl Fn(usize, usize) -> f64 + 'a {
        move |i, j| {
            let y = self.gy.as_ref().map_or(0.0, |gy| gy.knot(j as isize));
            g(self.gx.knot(i as isize), y, t)
        }
    }

    fn integer_weights(&self, grid: &Grid) -> Result<(WeightMatrix, WeightMatrix)> {
        let w1 = first_order_weights(self.basis, grid)?;
        let w2 = higher_order_weights(&w1, 2, grid)?;
        Ok((w1, w2))
    }

    /// `K` for the advection-diffusion operator `κ ∂ - ε ∂²`.
    pub fn advection_diffusion(&self, p: &ProblemSpec) -> Result<SpatialOperator> {
        let (wx1, wx2) = self.integer_weights(&self.gx)?;
        match &self.gy {
            None => assemble_k_1d(p.kappa_x, p.eps_x, &wx1, &wx2),
            Some(gy) => {
                let (wy1, wy2) = self.integer_weights(gy)?;
                assemble_k_2d(
                    p.kappa_x, p.kappa_y, p.eps_x, p.eps_y, &wx1, &wx2, &wy1, &wy2,
                )
            }
        }
    }

    /// `L` for the space-fractional operator.
    pub fn space_fractional(&self, p: &ProblemSpec) -> Result<SpatialOperator> {
        let gy = self.gy.as_ref().ok_or_else(|| {
            FadeError::IncompatibleScheme("the space-fractional scheme is two-dimensional".into())
        })?;
        let bx = fractional_weights(p.beta1, &self.gx)?;
        let by = fractional_weights(p.beta2, gy)?;
        assemble_frac_l_2d(p.eps_x, p.eps_y, &bx, &by)
    }
}

fn check_pairing(p: &ProblemSpec, scheme: Scheme) -> Result<()> {
    let ok = match (&p.equation, scheme) {
        (Equation::TimeFractional | Equation::Schrodinger { .. }, Scheme::FracImplicit) => true,
        (Equation::TimeFractional | Equation::Schrodinger { .. }, Scheme::RkGill) => {
            if p.alpha != 1.0 {
                return Err(FadeError::IncompatibleScheme(format!(
                    "{} requires alpha = 1, got {}",
                    scheme.name(),
                    p.alpha
                )));
            }
            true
        }
        (Equation::SpaceFractional, Scheme::CnFracSpace) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(FadeError::IncompatibleScheme(format!(
            "{} cannot be solved with {}",
            p.id,
            scheme.name()
        )))
    }
}

struct Recorder<'a> {
    disc: &'a Discretization,
    every: usize,
    steps: usize,
    times: Vec<f64>,
    levels: Vec<Vec<f64>>,
    levels_im: Vec<Vec<f64>>,
}

impl Recorder<'_> {
    fn wants(&self, n: usize) -> bool {
        n == 0 || n == self.steps || (self.every > 0 && n % self.every == 0)
    }

    fn record(&mut self, n: usize, t: f64, re: &[f64], g: &Field, im: Option<&[f64]>) {
        if !self.wants(n) {
            return;
        }
        self.times.push(t);
        self.levels.push(self.disc.embed(re, g, t));
        if let Some(im) = im {
            self.levels_im.push(self.disc.embed(im, g, t));
        }
    }
}

/// Integrates `problem` from `t = 0` to `config.t_end`.
pub fn run(problem: &ProblemSpec, config: &RunConfig) -> Result<Trajectory> {
    let scheme = config.scheme.unwrap_or(problem.scheme);
    check_pairing(problem, scheme)?;
    config.newton.validate()?;
    let steps = config.steps()?;
    let basis = config.basis.unwrap_or(problem.basis);
    let family = config.weights.unwrap_or(problem.weights);
    let disc = Discretization::new(problem, config.mx, config.my, basis)?;
    let tau = config.tau;
    let start = Instant::now();
    let mut rec = Recorder {
        disc: &disc,
        every: config.snapshot_every,
        steps,
        times: Vec::new(),
        levels: Vec::new(),
        levels_im: Vec::new(),
    };
    let u0 = disc.sample_interior(&problem.initial, 0.0);
    let mut max_newton = None;

    let (final_re, final_im) = match (&problem.equation, scheme) {
        (Equation::Schrodinger { beta_nl }, _) => {
            let w2 = disc.integer_weights(&disc.gx)?.1.interior_block();
            let n = w2.nrows();
            let im_field = problem
                .initial_im
                .clone()
                .ok_or_else(|| FadeError::Undefined("missing imaginary initial data".into()))?;
            let mut z = u0.clone();
            z.extend(disc.sample_interior(&im_field, 0.0));
            let zero: Field = std::sync::Arc::new(|_, _, _| 0.0);
            rec.record(0, 0.0, &z[..n], &zero, Some(&z[n..]));
            if scheme == Scheme::RkGill {
                let b = *beta_nl;
                for k in 1..=steps {
                    let t = (k - 1) as f64 * tau;
                    rk_gill_step(&mut z, t, tau, |_, s| {
                        Ok(nls_operator(&w2, b, s).into_iter().map(|v| -v).collect())
                    })?;
                    rec.record(k, k as f64 * tau, &z[..n], &zero, Some(&z[n..]));
                }
            } else {
                let weights = TemporalWeights::new(family, problem.alpha, steps + 1)?;
                let mut s = NlsStepper::new(w2, weights, tau, *beta_nl, z.clone(), config.newton)?;
                let mut it = 0;
                for k in 1..=steps {
                    it = it.max(s.step()?.iterations);
                    let zl = s.history.latest();
                    rec.record(k, k as f64 * tau, &zl[..n], &zero, Some(&zl[n..]));
                }
                max_newton = Some(it);
                z = s.history.latest().to_vec();
            }
            let im = z.split_off(n);
            (z, Some(im))
        }
        (Equation::TimeFractional, Scheme::RkGill) => {
            let k_op = disc.advection_diffusion(problem)?;
            let mut u = u0.clone();
            rec.record(0, 0.0, &u, &problem.boundary, None);
            for k in 1..=steps {
                let t = (k - 1) as f64 * tau;
                rk_gill_step(&mut u, t, tau, |ts, s| {
                    let f = disc.sample_interior(&problem.source, ts);
                    let g = k_op.load(&f, disc.boundary_callback(&problem.boundary, ts))?;
                    let ku = k_op.apply(s)?;
                    Ok(g.iter().zip(&ku).map(|(g, k)| g - k).collect())
                })?;
                rec.record(k, k as f64 * tau, &u, &problem.boundary, None);
            }
            (u, None)
        }
        (Equation::TimeFractional, _) => {
            let k_op = disc.advection_diffusion(problem)?;
            let weights = TemporalWeights::new(family, problem.alpha, steps + 1)?;
            rec.record(0, 0.0, &u0, &problem.boundary, None);
            let mut s = FractionalStepper::new(&k_op, weights, tau, u0.clone())?;
            for k in 1..=steps {
                let t = k as f64 * tau;
                let f = disc.sample_interior(&problem.source, t);
                let g = k_op.load(&f, disc.boundary_callback(&problem.boundary, t))?;
                let u = s.step(&g)?;
                rec.record(k, t, u, &problem.boundary, None);
            }
            (s.history.latest().to_vec(), None)
        }
        (Equation::SpaceFractional, _) => {
            let l_op = disc.space_fractional(problem)?;
            let mut u = u0.clone();
            rec.record(0, 0.0, &u, &problem.boundary, None);
            let cn = CnStepper::new(l_op, tau)?;
            let op = cn.operator().clone();
            let mut b_prev = op.boundary_part(disc.boundary_callback(&problem.boundary, 0.0));
            for k in 1..=steps {
                let t = k as f64 * tau;
                let b_next = op.boundary_part(disc.boundary_callback(&problem.boundary, t));
                let f = disc.sample_interior(&problem.source, t - 0.5 * tau);
                let q: Vec<f64> = (0..f.len())
                    .map(|i| f[i] + 0.5 * (b_prev[i] + b_next[i]))
                    .collect();
                cn.step(&mut u, &q)?;
                b_prev = b_next;
                rec.record(k, t, &u, &problem.boundary, None);
            }
            (u, None)
        }
    };
    let wall_clock = start.elapsed();

    let t_final = steps as f64 * tau;
    let cells = disc.cells_product();
    let measure = disc.measure();
    let errors = match &problem.exact {
        Some(ex) => Some(
            error_norms(
                &final_re,
                &disc.sample_interior(ex, t_final),
                cells,
                Some(&u0),
            )?
            .with_domain_measure(measure),
        ),
        None => None,
    };
    let errors_im = match (&problem.exact_im, &final_im) {
        (Some(ex), Some(im)) => {
            let im0 = problem
                .initial_im
                .as_ref()
                .map(|f| disc.sample_interior(f, 0.0));
            Some(
                error_norms(
                    im,
                    &disc.sample_interior(ex, t_final),
                    cells,
                    im0.as_deref(),
                )?
                .with_domain_measure(measure),
            )
        }
        _ => None,
    };
    Ok(Trajectory {
        problem: problem.id,
        scheme,
        x: disc.gx.knots(),
        y: disc.gy.as_ref().map(Grid::knots),
        times: rec.times,
        levels: rec.levels,
        levels_im: final_im.is_some().then_some(rec.levels_im),
        steps,
        wall_clock,
        errors,
        errors_im,
        max_newton_iterations: max_newton,
    })
}
