//! Cubic trigonometric B-splines (CTB), cubic B-splines and their
//! end-corrected ("modified") variants on a uniform [`Grid`].
//!
//! Each spline `S_m` is supported on `[x_{m-2}, x_{m+2})` and is made of four
//! pieces; pieces are right-open, so a point exactly on a breakpoint belongs
//! to the piece on its right. The modified family keeps exactly `M + 1`
//! members on the grid:
//!
//! ```text
//! MS_0     = S_0     + 2 S_{-1}
//! MS_1     = S_1     -   S_{-1}
//! MS_k     = S_k                  2 <= k <= M-2
//! MS_{M-1} = S_{M-1} -   S_{M+1}
//! MS_M     = S_M     + 2 S_{M+1}
//! ```
//!
//! which turns collocation on the knots into a strictly tridiagonal system.

use std::ops::{Add, Mul, Sub};

use crate::error::{FadeError, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplineFamily {
    /// Cubic trigonometric B-spline.
    Ctb,
    /// Polynomial cubic B-spline, scaled so that `B_m(x_m) = 4`.
    CubicB,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisKind {
    pub family: SplineFamily,
    pub modified: bool,
}

impl BasisKind {
    pub const MODIFIED_CTB: Self = Self {
        family: SplineFamily::Ctb,
        modified: true,
    };
    pub const MODIFIED_CUBIC_B: Self = Self {
        family: SplineFamily::CubicB,
        modified: true,
    };

    pub fn plain(family: SplineFamily) -> Self {
        Self {
            family,
            modified: false,
        }
    }

    /// Valid member indices: `0..=M` when modified, `-1..=M+1` otherwise.
    pub fn index_range(&self, grid: &Grid) -> std::ops::RangeInclusive<isize> {
        let m = grid.cells() as isize;
        if self.modified {
            0..=m
        } else {
            -1..=m + 1
        }
    }
}

/// Knot values of an (unmodified) spline centred at `x_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnotValueTable {
    /// Value at the centre knot `x_m`.
    pub a0: f64,
    /// Value at `x_{m-1}` and `x_{m+1}`.
    pub a1: f64,
    /// First derivative is `+z` at `x_{m-1}`, `-z` at `x_{m+1}`, zero at `x_m`.
    pub z: f64,
}

impl KnotValueTable {
    /// `a0 > 2 a1 > 0`, the strict dominance of the collocation matrix.
    pub fn strictly_dominant(&self) -> bool {
        self.a1 > 0.0 && self.a0 > 2.0 * self.a1
    }
}

const TRIG_POLE_TOL: f64 = 1e-12;

pub fn knot_value_table(family: SplineFamily, grid: &Grid) -> Result<KnotValueTable> {
    let h = grid.h();
    match family {
        SplineFamily::CubicB => Ok(KnotValueTable {
            a0: 4.0,
            a1: 1.0,
            z: 3.0 / h,
        }),
        SplineFamily::Ctb => {
            let (s_half, s_one, s_three_half) = ((0.5 * h).sin(), h.sin(), (1.5 * h).sin());
            let denom = 1.0 + 2.0 * h.cos();
            if s_half.abs() < TRIG_POLE_TOL
                || s_one.abs() < TRIG_POLE_TOL
                || s_three_half.abs() < TRIG_POLE_TOL
                || denom.abs() < TRIG_POLE_TOL
            {
                return Err(FadeError::SingularSpacing { h });
            }
            Ok(KnotValueTable {
                a0: 2.0 / denom,
                a1: s_half * s_half / (s_one * s_three_half),
                z: 0.75 / s_three_half,
            })
        }
    }
}

/// Second-derivative knot values of the cubic B-spline: `(B_m''(x_m), B_m''(x_{m±1}))`.
pub fn cubic_b_second_derivative_knot_values(grid: &Grid) -> (f64, f64) {
    let h2 = grid.h() * grid.h();
    (-12.0 / h2, 6.0 / h2)
}

/// Value together with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub const ZERO: Jet = Jet {
        v: 0.0,
        d1: 0.0,
        d2: 0.0,
    };

    pub fn get(&self, order: usize) -> f64 {
        match order {
            0 => self.v,
            1 => self.d1,
            2 => self.d2,
            _ => panic!("jets carry derivatives up to order 2, requested {order}"),
        }
    }

    fn scale(self, s: f64) -> Jet {
        Jet {
            v: s * self.v,
            d1: s * self.d1,
            d2: s * self.d2,
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

// p(c) = sin((x - c)/2)
fn p(x: f64, c: f64) -> Jet {
    let u = 0.5 * (x - c);
    Jet {
        v: u.sin(),
        d1: 0.5 * u.cos(),
        d2: -0.25 * u.sin(),
    }
}

// q(c) = sin((c - x)/2)
fn q(x: f64, c: f64) -> Jet {
    let w = 0.5 * (c - x);
    Jet {
        v: w.sin(),
        d1: -0.5 * w.cos(),
        d2: -0.25 * w.sin(),
    }
}

// (x - c)^3
fn rise3(x: f64, c: f64) -> Jet {
    let d = x - c;
    Jet {
        v: d * d * d,
        d1: 3.0 * d * d,
        d2: 6.0 * d,
    }
}

// (c - x)^3
fn fall3(x: f64, c: f64) -> Jet {
    let e = c - x;
    Jet {
        v: e * e * e,
        d1: -3.0 * e * e,
        d2: 6.0 * e,
    }
}

/// Which of the four pieces of `S_m` contains `x`, if any.
fn piece(m: isize, x: f64, grid: &Grid) -> Option<usize> {
    if x < grid.knot(m - 2) || x >= grid.knot(m + 2) {
        return None;
    }
    Some(if x < grid.knot(m - 1) {
        0
    } else if x < grid.knot(m) {
        1
    } else if x < grid.knot(m + 1) {
        2
    } else {
        3
    })
}

/// Unmodified spline `S_m` and its first two derivatives at `x`.
pub fn eval_basis_jet(family: SplineFamily, m: isize, x: f64, grid: &Grid) -> Jet {
    let Some(k) = piece(m, x, grid) else {
        return Jet::ZERO;
    };
    let xk = |o: isize| grid.knot(m + o);
    match family {
        SplineFamily::CubicB => {
            let h = grid.h();
            let body = match k {
                0 => rise3(x, xk(-2)),
                1 => rise3(x, xk(-2)) - rise3(x, xk(-1)).scale(4.0),
                2 => fall3(x, xk(2)) - fall3(x, xk(1)).scale(4.0),
                _ => fall3(x, xk(2)),
            };
            body.scale(1.0 / (h * h * h))
        }
        SplineFamily::Ctb => {
            let h = grid.h();
            let chi = (0.5 * h).sin() * h.sin() * (1.5 * h).sin();
            let body = match k {
                0 => {
                    let a = p(x, xk(-2));
                    a * a * a
                }
                1 => {
                    let p2 = p(x, xk(-2));
                    let p1 = p(x, xk(-1));
                    q(x, xk(2)) * p1 * p1 + p2 * p2 * q(x, xk(0)) + p2 * p1 * q(x, xk(1))
                }
                2 => {
                    let q1 = q(x, xk(1));
                    let q2 = q(x, xk(2));
                    p(x, xk(-2)) * q1 * q1 + q2 * q2 * p(x, xk(0)) + p(x, xk(-1)) * q1 * q2
                }
                _ => {
                    let b = q(x, xk(2));
                    b * b * b
                }
            };
            body.scale(1.0 / chi)
        }
    }
}

/// Value of the unmodified spline `S_m(x)`; zero outside its support.
pub fn eval_basis(family: SplineFamily, m: isize, x: f64, grid: &Grid) -> f64 {
    eval_basis_jet(family, m, x, grid).v
}

/// Coefficients expressing member `k` of the modified family as a
/// combination of unmodified splines.
pub fn modification_terms(k: usize, grid: &Grid) -> Vec<(isize, f64)> {
    let m = grid.cells();
    let k_i = k as isize;
    let mut terms = vec![(k_i, 1.0)];
    if k == 0 {
        terms.push((-1, 2.0));
    }
    if k == 1 {
        terms.push((-1, -1.0));
    }
    if k + 1 == m {
        terms.push((m as isize + 1, -1.0));
    }
    if k == m {
        terms.push((m as isize + 1, 2.0));
    }
    terms
}

/// Member `k` (`0..=M`) of the modified family with derivatives.
pub fn modified_basis_jet(family: SplineFamily, k: usize, x: f64, grid: &Grid) -> Jet {
    modification_terms(k, grid)
        .into_iter()
        .fold(Jet::ZERO, |acc, (m, c)| {
            acc + eval_basis_jet(family, m, x, grid).scale(c)
        })
}

/// `MS_k(x_i)` for knots `0 <= k, i <= M`.
pub fn modified_basis_value(family: SplineFamily, k: usize, i: usize, grid: &Grid) -> f64 {
    modified_basis_jet(family, k, grid.knot(i as isize), grid).v
}

/// A spline family bound to a grid; members indexed per [`BasisKind::index_range`].
#[derive(Debug, Clone, Copy)]
pub struct Basis {
    pub kind: BasisKind,
    pub grid: Grid,
}

impl Basis {
    pub fn new(kind: BasisKind, grid: Grid) -> Result<Self> {
        if kind.modified && grid.cells() < 2 {
            return Err(FadeError::InvalidGrid(
                "the modified basis needs at least two cells".into(),
            ));
        }
        if kind.family == SplineFamily::Ctb {
            knot_value_table(kind.family, &grid)?;
        }
        Ok(Self { kind, grid })
    }

    pub fn len(&self) -> usize {
        self.kind.index_range(&self.grid).count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Derivative of the given order (0..=2) of member `index` at `x`.
    pub fn eval(&self, index: isize, x: f64, order: usize) -> f64 {
        let jet = if self.kind.modified {
            assert!(
                self.kind.index_range(&self.grid).contains(&index),
                "modified basis index {index} out of range"
            );
            modified_basis_jet(self.kind.family, index as usize, x, &self.grid)
        } else {
            eval_basis_jet(self.kind.family, index, x, &self.grid)
        };
        jet.get(order)
    }
}
