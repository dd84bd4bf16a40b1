//! Uniform spatial lattices.

use crate::error::{FadeError, Result};

/// Uniform knots `x_i = a + i h`, `0 <= i <= m`.
///
/// Ghost knots outside `[a, b]` are reachable through [`Grid::knot`] with
/// negative or `> m` indices; nothing is stored for them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    m: usize,
    h: f64,
}

impl Grid {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(FadeError::InvalidGrid("cell count must be positive".into()));
        }
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(FadeError::InvalidGrid(format!(
                "endpoints must satisfy a < b, got [{a}, {b}]"
            )));
        }
        Ok(Self {
            a,
            b,
            m,
            h: (b - a) / m as f64,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of cells `M`.
    pub fn cells(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Knot `x_i`; `i` may address the implicit ghost knots.
    pub fn knot(&self, i: isize) -> f64 {
        if i == self.m as isize {
            self.b
        } else {
            self.a + i as f64 * self.h
        }
    }

    pub fn knots(&self) -> Vec<f64> {
        (0..=self.m as isize).map(|i| self.knot(i)).collect()
    }

    /// Knots `x_1 .. x_{M-1}`.
    pub fn interior(&self) -> Vec<f64> {
        (1..self.m as isize).map(|i| self.knot(i)).collect()
    }

    pub fn interior_len(&self) -> usize {
        self.m.saturating_sub(1)
    }

    /// `0 < h < 1`: the range where the CTB collocation matrix is provably
    /// strictly diagonally dominant.
    pub fn ctb_dominance_guaranteed(&self) -> bool {
        self.h > 0.0 && self.h < 1.0
    }
}

/// Tensor-product lattice on `[a, b] x [c, d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2d {
    pub x: Grid,
    pub y: Grid,
}

impl Grid2d {
    pub fn new(x: Grid, y: Grid) -> Self {
        Self { x, y }
    }

    /// Number of interior unknowns `(Mx - 1)(My - 1)`.
    pub fn interior_len(&self) -> usize {
        self.x.interior_len() * self.y.interior_len()
    }

    /// Flat index of interior node `(i, j)`, `1 <= i < Mx`, `1 <= j < My`,
    /// in x-fastest order.
    pub fn interior_index(&self, i: usize, j: usize) -> usize {
        (j - 1) * self.x.interior_len() + (i - 1)
    }
}
