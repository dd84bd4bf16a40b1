use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use fade::dq_weights::{
    first_order_weights, fractional_weights, higher_order_weights, second_order_weights_direct,
    WeightMatrix,
};
use fade::frac_calculus::WeightFamily;
use fade::problems::{
    make_problem, observed_rates, ErrorReport, NlsInitial, ProblemId, ProblemParams, ProblemSpec,
    Scheme,
};
use fade::splines::BasisKind;
use fade::stability::{critical_ratio, StabilityPoint, StabilityReport, SweepParam};
use fade::steppers::{run as solve, NewtonConfig, RunConfig, Trajectory};
use fade::{FadeError, Grid};

use crate::args::{ConvergeArgs, ProblemArgs, RunArgs, StabilityArgs, TimeArgs, WeightsArgs};
use crate::output::{config_hash, num, write_json, Csv, VERSION};
use crate::CliError;

/// Caps rayon at `FADE_THREADS` when set.
pub fn init_thread_pool() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FADE_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "FADE_THREADS must be a positive integer, got `{v}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn parse_basis(s: &str) -> Result<BasisKind, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "ctb" => Ok(BasisKind::MODIFIED_CTB),
        "cubic-b" | "cubicb" => Ok(BasisKind::MODIFIED_CUBIC_B),
        other => Err(CliError::Config(format!(
            "unknown basis `{other}` (expected ctb or cubic-b)"
        ))),
    }
}

fn parse_nls_initial(s: &str) -> Result<NlsInitial, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "soliton" => Ok(NlsInitial::Soliton),
        "collision" => Ok(NlsInitial::Collision),
        other => Err(CliError::Config(format!(
            "unknown initial data `{other}` (expected soliton or collision)"
        ))),
    }
}

fn basis_name(b: BasisKind) -> &'static str {
    if b == BasisKind::MODIFIED_CUBIC_B {
        "cubic-b"
    } else {
        "ctb"
    }
}

fn build_problem(p: &ProblemArgs) -> Result<ProblemSpec, CliError> {
    let id: ProblemId = p.problem.parse()?;
    let domain = match p.domain.as_deref() {
        None => None,
        Some([a, b]) => Some((*a, *b)),
        Some(_) => return Err(CliError::Config("--domain takes two values".into())),
    };
    let params = ProblemParams {
        alpha: p.alpha,
        beta1: p.beta1,
        beta2: p.beta2,
        domain,
        nls_initial: p
            .nls_initial
            .as_deref()
            .map(parse_nls_initial)
            .transpose()?,
    };
    Ok(make_problem(id, &params)?)
}

fn run_config(
    p: &ProblemArgs,
    time: &TimeArgs,
    mx: usize,
    my: Option<usize>,
) -> Result<RunConfig, CliError> {
    let mut c = RunConfig::new(mx, time.tau, time.t_end);
    c.my = my;
    c.scheme = p.scheme.as_deref().map(str::parse::<Scheme>).transpose()?;
    c.weights = p
        .weights
        .as_deref()
        .map(str::parse::<WeightFamily>)
        .transpose()?;
    c.basis = p.basis.as_deref().map(parse_basis).transpose()?;
    c.newton = NewtonConfig {
        tolerance: p.newton_tol,
        max_iterations: p.newton_max_iter,
        ..NewtonConfig::default()
    };
    Ok(c)
}

#[derive(Serialize)]
struct Norms {
    e2: f64,
    einf: f64,
    #[serde(rename = "eN")]
    en: Option<f64>,
    l2: f64,
    mean_abs: f64,
}

impl From<ErrorReport> for Norms {
    fn from(e: ErrorReport) -> Self {
        Self {
            e2: e.e2,
            einf: e.einf,
            en: e.en,
            l2: e.l2,
            mean_abs: e.mean_abs,
        }
    }
}

#[derive(Serialize)]
struct RunSummary {
    version: &'static str,
    config_hash: String,
    problem: String,
    scheme: &'static str,
    weights: &'static str,
    basis: &'static str,
    alpha: f64,
    mx: usize,
    my: Option<usize>,
    tau: f64,
    t_end: f64,
    steps: usize,
    #[serde(flatten)]
    errors: Option<Norms>,
    /// Imaginary part (Schrodinger problem).
    errors_im: Option<Norms>,
    newton_max_iterations: Option<usize>,
    runtime_seconds: f64,
}

pub fn run(a: RunArgs) -> Result<(), CliError> {
    let mx =
        a.mx.or(a.m)
            .ok_or_else(|| CliError::Config("one of --m or --mx is required".into()))?;
    let problem = build_problem(&a.problem)?;
    let my = problem.is_2d().then(|| a.my.or(a.m).unwrap_or(mx));
    let mut config = run_config(&a.problem, &a.time, mx, my)?;
    config.snapshot_every = a.snapshot_every;
    let hash = config_hash("run", &a)?;
    let tr = solve(&problem, &config)?;
    write_solution(&tr, &hash, &a.common.out)?;
    let summary = RunSummary {
        version: VERSION,
        config_hash: hash,
        problem: problem.id.to_string(),
        scheme: tr.scheme.name(),
        weights: config.weights.unwrap_or(problem.weights).name(),
        basis: basis_name(config.basis.unwrap_or(problem.basis)),
        alpha: problem.alpha,
        mx,
        my,
        tau: config.tau,
        t_end: config.t_end,
        steps: tr.steps,
        errors: tr.errors.map(Norms::from),
        errors_im: tr.errors_im.map(Norms::from),
        newton_max_iterations: tr.max_newton_iterations,
        runtime_seconds: tr.wall_clock.as_secs_f64(),
    };
    write_json(&a.common.out, "errors.json", &summary)?;
    match tr.errors {
        Some(e) => println!(
            "{} M={mx} steps={}: e2={:.4e} einf={:.4e} ({:.3}s)",
            problem.id,
            tr.steps,
            e.e2,
            e.einf,
            tr.wall_clock.as_secs_f64()
        ),
        None => println!(
            "{} M={mx} steps={} ({:.3}s)",
            problem.id,
            tr.steps,
            tr.wall_clock.as_secs_f64()
        ),
    }
    Ok(())
}

fn write_solution(tr: &Trajectory, hash: &str, dir: &std::path::Path) -> Result<(), CliError> {
    let complex = tr.levels_im.is_some();
    let header = match (tr.y.is_some(), complex) {
        (false, false) => "t,x,u",
        (false, true) => "t,x,u,v",
        (true, false) => "t,x,y,u",
        (true, true) => "t,x,y,u,v",
    };
    let mut csv = Csv::new(hash, header);
    let ys = tr.y.clone().unwrap_or_else(|| vec![f64::NAN]);
    let nx = tr.x.len();
    for (k, (&t, level)) in tr.times.iter().zip(&tr.levels).enumerate() {
        let im = tr.levels_im.as_ref().map(|l| &l[k]);
        for (j, &y) in ys.iter().enumerate() {
            for (i, &x) in tr.x.iter().enumerate() {
                let idx = j * nx + i;
                let mut row = vec![num(t), num(x)];
                if tr.y.is_some() {
                    row.push(num(y));
                }
                row.push(num(level[idx]));
                if let Some(im) = im {
                    row.push(num(im[idx]));
                }
                csv.row(&row);
            }
        }
    }
    csv.write(dir, "solution.csv")
}

pub fn converge(a: ConvergeArgs) -> Result<(), CliError> {
    if a.grids.len() < 2 {
        log::warn!("a single grid gives no convergence rate");
    }
    let problem = build_problem(&a.problem)?;
    if problem.exact.is_none() {
        return Err(CliError::Config(format!(
            "{} has no exact solution for these parameters",
            problem.id
        )));
    }
    let hash = config_hash("converge", &a)?;
    let configs = a
        .grids
        .iter()
        .map(|&m| run_config(&a.problem, &a.time, m, problem.is_2d().then_some(m)))
        .collect::<Result<Vec<_>, _>>()?;
    let start = Instant::now();
    let results: Vec<Result<ErrorReport, FadeError>> = configs
        .par_iter()
        .map(|c| solve(&problem, c).map(|t| t.errors.expect("exact solution checked above")))
        .collect();
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let e2: Vec<f64> = reports.iter().map(|r| r.e2).collect();
    let einf: Vec<f64> = reports.iter().map(|r| r.einf).collect();
    let r2 = observed_rates(&a.grids, &e2);
    let ri = observed_rates(&a.grids, &einf);
    let mut csv = Csv::new(&hash, "M,e2,rate_e2,einf,rate_einf");
    println!(
        "{:>6} {:>12} {:>8} {:>12} {:>8}",
        "M", "e2", "rate", "einf", "rate"
    );
    for (k, &m) in a.grids.iter().enumerate() {
        let (a2, ai) = if k == 0 {
            (String::new(), String::new())
        } else {
            (num(r2[k - 1]), num(ri[k - 1]))
        };
        let show = |s: &str| {
            s.parse::<f64>()
                .map(|v| format!("{v:.4}"))
                .unwrap_or_else(|_| "-".into())
        };
        println!(
            "{m:>6} {:>12.4e} {:>8} {:>12.4e} {:>8}",
            e2[k],
            show(&a2),
            einf[k],
            show(&ai)
        );
        csv.row(&[m.to_string(), num(e2[k]), a2, num(einf[k]), ai]);
    }
    csv.write(&a.common.out, "sweep.csv")?;
    log::info!("converge finished in {:.3}s", start.elapsed().as_secs_f64());
    Ok(())
}

pub fn stability(a: StabilityArgs) -> Result<(), CliError> {
    let param: SweepParam = a.param.parse()?;
    let mut base = StabilityPoint {
        mx: a.m,
        my: a.m,
        tau: a.tau,
        alpha: a.alpha,
        extent: a.extent,
        basis: parse_basis(&a.basis)?,
        ..StabilityPoint::default()
    };
    base = base
        .with(SweepParam::Kappa, a.kappa)?
        .with(SweepParam::Eps, a.eps)?;
    let hash = config_hash("stability", &a)?;
    let reports: Vec<Result<StabilityReport, FadeError>> = a
        .values
        .par_iter()
        .map(|&v| base.with(param, v)?.report(param, v))
        .collect();
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut csv = Csv::new(&hash, "param,value,resolvent_norm");
    for r in &reports {
        csv.row(&[
            param.name().to_string(),
            num(r.value),
            num(r.resolvent_norm),
        ]);
        println!(
            "{}={} resolvent_norm={:.6}",
            param, r.value, r.resolvent_norm
        );
    }
    csv.write(&a.common.out, "sweep.csv")?;
    if a.spectrum {
        let mut spec = Csv::new(&hash, "value,re,im");
        for r in &reports {
            for z in &r.spectrum {
                spec.row(&[num(r.value), num(z.re), num(z.im)]);
            }
        }
        spec.write(&a.common.out, "spectrum.csv")?;
    }
    if let Some(range) = a.critical.as_deref() {
        let ratio = critical_ratio(&base, range[0], range[1])?;
        println!("critical kappa/eps = {ratio:.6}");
    }
    Ok(())
}

pub fn weights(a: WeightsArgs) -> Result<(), CliError> {
    let grid = Grid::new(a.domain[0], a.domain[1], a.m)?;
    let basis = parse_basis(&a.basis)?;
    let w: WeightMatrix = match (a.beta, a.order.unwrap_or(1)) {
        (Some(beta), _) => {
            if basis != BasisKind::MODIFIED_CUBIC_B {
                log::warn!("fractional weights always use the modified cubic B-spline basis");
            }
            fractional_weights(beta, &grid)?
        }
        (None, 0) => return Err(CliError::Config("--order must be at least 1".into())),
        (None, 2) if a.direct => second_order_weights_direct(basis, &grid)?,
        (None, 1) => first_order_weights(basis, &grid)?,
        (None, s) => higher_order_weights(&first_order_weights(basis, &grid)?, s, &grid)?,
    };
    let hash = config_hash("weights", &a)?;
    let header: Vec<String> = std::iter::once("i".to_string())
        .chain(std::iter::once("x".to_string()))
        .chain((0..=a.m).map(|j| format!("w{j}")))
        .collect();
    let mut csv = Csv::new(&hash, &header.join(","));
    for r in 0..w.entries.nrows() {
        let i = r + w.row_offset;
        let mut row = vec![i.to_string(), num(grid.knot(i as isize))];
        row.extend((0..=a.m).map(|j| num(w.get(i, j))));
        csv.row(&row);
    }
    csv.write(&a.common.out, "weights.csv")?;
    println!("{} weights on {} nodes -> weights.csv", w.order, a.m + 1);
    Ok(())
}
