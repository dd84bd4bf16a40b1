//! Differential-quadrature weighted coefficients.
//!
//! `∂^s u(x_i) ≈ Σ_j a_ij^(s) u(x_j)`. First-order rows come from collocating
//! the modified spline family, which yields one tridiagonal system per
//! collocation point sharing a single matrix `A[k][j] = MS_k(x_j)`. Second
//! and higher orders follow from the recursion
//! `a_ij^(s) = s (a_ii^(s-1) a_ij^(1) - a_ij^(s-1) / (x_i - x_j))`.
//! Fractional orders `β ∈ (1, 2]` collocate the modified cubic B-splines
//! against their closed-form Riemann-Liouville derivatives at interior knots.

use nalgebra::{DMatrix, DVector};

use crate::error::{FadeError, Result};
use crate::frac_calculus::rl_modified_bspline_deriv;
use crate::grid::Grid;
use crate::linalg::ThomasFactor;
use crate::splines::{modified_basis_jet, modified_basis_value, BasisKind, SplineFamily};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DerivativeOrder {
    Integer(u32),
    Fractional(f64),
}

impl std::fmt::Display for DerivativeOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DerivativeOrder::Integer(s) => write!(f, "{s}"),
            DerivativeOrder::Fractional(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Axis {
    #[default]
    X,
    Y,
}

/// Dense weight table. Rows are collocation points `row_offset..`, columns
/// are all grid points `0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    pub order: DerivativeOrder,
    pub axis: Axis,
    pub entries: DMatrix<f64>,
    /// Grid index of the first row (0 for integer orders, 1 for fractional).
    pub row_offset: usize,
}

impl WeightMatrix {
    pub fn with_axis(mut self, axis: Axis) -> Self {
        self.axis = axis;
        self
    }

    /// Number of grid cells `M`.
    pub fn cells(&self) -> usize {
        self.entries.ncols() - 1
    }

    /// Weight `a_ij` for grid indices `i` (collocation point) and `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i - self.row_offset, j)]
    }

    /// Rows and columns `1..M-1`.
    pub fn interior_block(&self) -> DMatrix<f64> {
        let n = self.cells() - 1;
        DMatrix::from_fn(n, n, |r, c| self.get(r + 1, c + 1))
    }

    /// Column `j` restricted to interior rows `1..M-1`.
    pub fn interior_column(&self, j: usize) -> DVector<f64> {
        let n = self.cells() - 1;
        DVector::from_fn(n, |r, _| self.get(r + 1, j))
    }

    /// `Σ_j a_ij u_j` for every stored row.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.entries.ncols() {
            return Err(FadeError::LengthMismatch {
                expected: self.entries.ncols(),
                got: u.len(),
            });
        }
        let v = &self.entries * DVector::from_column_slice(u);
        Ok(v.as_slice().to_vec())
    }
}

fn require_modified(kind: BasisKind, grid: &Grid) -> Result<()> {
    if !kind.modified {
        return Err(FadeError::IncompatibleScheme(
            "DQ weights are defined for the end-corrected (modified) basis".into(),
        ));
    }
    if grid.cells() < 2 {
        return Err(FadeError::InvalidGrid(
            "DQ weights need at least two cells".into(),
        ));
    }
    Ok(())
}

/// Factor of the collocation matrix `A[k][j] = MS_k(x_j)`.
fn collocation_factor(family: SplineFamily, grid: &Grid) -> Result<ThomasFactor> {
    let m = grid.cells();
    let entry = |k: usize, j: usize| modified_basis_value(family, k, j, grid);
    let diag: Vec<f64> = (0..=m).map(|k| entry(k, k)).collect();
    let lower: Vec<f64> = (1..=m).map(|k| entry(k, k - 1)).collect();
    let upper: Vec<f64> = (0..m).map(|k| entry(k, k + 1)).collect();
    ThomasFactor::new(&lower, &diag, &upper)
}

/// Rows of a weight matrix from right-hand sides `d_i[k]`, `A a_i = d_i`.
fn solve_rows(
    factor: &ThomasFactor,
    rows: impl Iterator<Item = usize>,
    m: usize,
    rhs: impl Fn(usize, usize) -> Result<f64>,
) -> Result<Vec<Vec<f64>>> {
    rows.map(|i| {
        let d = (0..=m).map(|k| rhs(i, k)).collect::<Result<Vec<_>>>()?;
        factor.solve(&d)
    })
    .collect()
}

fn from_rows(rows: Vec<Vec<f64>>, m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), m + 1, |r, c| rows[r][c])
}

/// `W¹` by collocation of the modified family.
pub fn first_order_weights(kind: BasisKind, grid: &Grid) -> Result<WeightMatrix> {
    require_modified(kind, grid)?;
    let m = grid.cells();
    let factor = collocation_factor(kind.family, grid)?;
    let rows = solve_rows(&factor, 0..=m, m, |i, k| {
        Ok(modified_basis_jet(kind.family, k, grid.knot(i as isize), grid).d1)
    })?;
    Ok(WeightMatrix {
        order: DerivativeOrder::Integer(1),
        axis: Axis::X,
        entries: from_rows(rows, m),
        row_offset: 0,
    })
}

/// `W^s` from `W¹` by the recursion, `s >= 2`.
pub fn higher_order_weights(w1: &WeightMatrix, s: u32, grid: &Grid) -> Result<WeightMatrix> {
    if w1.order != DerivativeOrder::Integer(1) || w1.row_offset != 0 {
        return Err(FadeError::IncompatibleScheme(
            "the recursion starts from a full first-order weight matrix".into(),
        ));
    }
    if s < 2 {
        return Err(FadeError::Domain {
            name: "s",
            value: s as f64,
            domain: "s >= 2",
        });
    }
    let m = grid.cells();
    if w1.cells() != m {
        return Err(FadeError::DimensionMismatch(format!(
            "first-order weights have {} cells, grid has {m}",
            w1.cells()
        )));
    }
    let a1 = &w1.entries;
    let x = grid.knots();
    let mut prev = a1.clone();
    for order in 2..=s {
        let sf = order as f64;
        let mut next = DMatrix::zeros(m + 1, m + 1);
        for i in 0..=m {
            let mut diag = 0.0;
            for j in 0..=m {
                if j != i {
                    let v = sf * (prev[(i, i)] * a1[(i, j)] - prev[(i, j)] / (x[i] - x[j]));
                    next[(i, j)] = v;
                    diag -= v;
                }
            }
            next[(i, i)] = diag;
        }
        prev = next;
    }
    Ok(WeightMatrix {
        order: DerivativeOrder::Integer(s),
        axis: w1.axis,
        entries: prev,
        row_offset: 0,
    })
}

/// `W²` by collocating second derivatives directly (no recursion).
pub fn second_order_weights_direct(kind: BasisKind, grid: &Grid) -> Result<WeightMatrix> {
    require_modified(kind, grid)?;
    let m = grid.cells();
    let factor = collocation_factor(kind.family, grid)?;
    let rows = solve_rows(&factor, 0..=m, m, |i, k| {
        Ok(modified_basis_jet(kind.family, k, grid.knot(i as isize), grid).d2)
    })?;
    Ok(WeightMatrix {
        order: DerivativeOrder::Integer(2),
        axis: Axis::X,
        entries: from_rows(rows, m),
        row_offset: 0,
    })
}

/// `W^β`, `1 < β <= 2`, on interior rows `1..M-1` with the modified cubic
/// B-splines.
pub fn fractional_weights(beta: f64, grid: &Grid) -> Result<WeightMatrix> {
    if !(beta > 1.0 && beta <= 2.0) {
        return Err(FadeError::Domain {
            name: "beta",
            value: beta,
            domain: "(1, 2]",
        });
    }
    require_modified(BasisKind::MODIFIED_CUBIC_B, grid)?;
    let m = grid.cells();
    let factor = collocation_factor(SplineFamily::CubicB, grid)?;
    let rows = solve_rows(&factor, 1..m, m, |i, k| {
        rl_modified_bspline_deriv(k, beta, i, grid)
    })?;
    Ok(WeightMatrix {
        order: DerivativeOrder::Fractional(beta),
        axis: Axis::X,
        entries: from_rows(rows, m),
        row_offset: 1,
    })
}
