//! Spatial operators over interior unknowns and their boundary loads.
//!
//! Every operator here is a Kronecker sum `I_y ⊗ A_x + A_y ⊗ I_x` of per-axis
//! blocks, with unknowns in x-fastest order. Each axis block keeps the
//! weight-matrix columns for the two boundary nodes so Dirichlet data can be
//! folded into a load vector:
//!
//! `(full operator applied to u)_interior = K u_interior + boundary_part(g)`.
//!
//! The advection-diffusion operator uses `A = κ W¹ - ε W²` per axis. The
//! space-fractional operator uses `A = ε W^β`. In 1D the y block is empty.

use nalgebra::{DMatrix, DVector};

use crate::dq_weights::WeightMatrix;
use crate::error::{FadeError, Result};
use crate::linalg::{kron, DenseLu, KroneckerSumSolver};

/// One axis of a Kronecker-sum operator: interior block plus the interior
/// rows of the two boundary columns.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisOperator {
    pub interior: DMatrix<f64>,
    pub left: DVector<f64>,
    pub right: DVector<f64>,
}

impl AxisOperator {
    /// `Σ c W` over interior rows.
    pub fn combine(terms: &[(f64, &WeightMatrix)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(FadeError::DimensionMismatch(
                "no weight matrices given".into(),
            ));
        };
        let m = first.cells();
        if m < 2 {
            return Err(FadeError::InvalidGrid(
                "an axis needs at least two cells".into(),
            ));
        }
        let n = m - 1;
        let mut interior = DMatrix::zeros(n, n);
        let mut left = DVector::zeros(n);
        let mut right = DVector::zeros(n);
        for &(c, w) in terms {
            if w.cells() != m {
                return Err(FadeError::DimensionMismatch(format!(
                    "weight matrices on {} and {m} cells",
                    w.cells()
                )));
            }
            if c == 0.0 {
                continue;
            }
            interior += w.interior_block() * c;
            left += w.interior_column(0) * c;
            right += w.interior_column(m) * c;
        }
        Ok(Self {
            interior,
            left,
            right,
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            interior: DMatrix::zeros(n, n),
            left: DVector::zeros(n),
            right: DVector::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.interior.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpatialOperator {
    pub x: AxisOperator,
    /// `None` for one-dimensional problems.
    pub y: Option<AxisOperator>,
}

impl SpatialOperator {
    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.as_ref().map_or(1, AxisOperator::len)
    }

    pub fn dim(&self) -> usize {
        self.nx() * self.ny()
    }

    fn y_block(&self) -> DMatrix<f64> {
        self.y
            .as_ref()
            .map_or_else(|| DMatrix::zeros(1, 1), |a| a.interior.clone())
    }

    /// Dense `I_y ⊗ A_x + A_y ⊗ I_x`.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let ix = DMatrix::identity(self.nx(), self.nx());
        let iy = DMatrix::identity(self.ny(), self.ny());
        kron(&iy, &self.x.interior) + kron(&self.y_block(), &ix)
    }

    /// `K u` without forming `K`: `A_x U + U A_y^T` on the `nx × ny` reshape.
    pub fn apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.dim() {
            return Err(FadeError::LengthMismatch {
                expected: self.dim(),
                got: u.len(),
            });
        }
        let um = DMatrix::from_column_slice(self.nx(), self.ny(), u);
        let mut out = &self.x.interior * &um;
        if let Some(y) = &self.y {
            out += &um * y.interior.transpose();
        }
        Ok(out.as_slice().to_vec())
    }

    /// Contribution of Dirichlet data to the full operator at interior nodes.
    ///
    /// `g(i, j)` returns the boundary value at grid node `(i, j)` (`j` is
    /// ignored in 1D); only nodes with `i ∈ {0, Mx}` or `j ∈ {0, My}` are
    /// queried.
    pub fn boundary_part(&self, g: impl Fn(usize, usize) -> f64) -> Vec<f64> {
        let nx = self.nx();
        let ny = self.ny();
        let mx = nx + 1;
        let mut out = vec![0.0; nx * ny];
        for jj in 0..ny {
            let j = if self.y.is_some() { jj + 1 } else { 0 };
            let (g0, gm) = (g(0, j), g(mx, j));
            for ii in 0..nx {
                out[jj * nx + ii] += self.x.left[ii] * g0 + self.x.right[ii] * gm;
            }
        }
        if let Some(y) = &self.y {
            let my = ny + 1;
            for ii in 0..nx {
                let i = ii + 1;
                let (g0, gm) = (g(i, 0), g(i, my));
                for jj in 0..ny {
                    out[jj * nx + ii] += y.left[jj] * g0 + y.right[jj] * gm;
                }
            }
        }
        out
    }

    /// Load vector `G = f - boundary_part(g)` for the scheme
    /// `ω_0 U + τ^α K U = ... + τ^α G`.
    pub fn load(&self, f: &[f64], g: impl Fn(usize, usize) -> f64) -> Result<Vec<f64>> {
        if f.len() != self.dim() {
            return Err(FadeError::LengthMismatch {
                expected: self.dim(),
                got: f.len(),
            });
        }
        let b = self.boundary_part(g);
        Ok(f.iter().zip(&b).map(|(f, b)| f - b).collect())
    }

    /// Factorization of `c0 I + c1 K`.
    pub fn shifted_solver(&self, c0: f64, c1: f64) -> Result<ShiftedSolver> {
        if self.y.is_none() {
            let mut a = self.to_dense() * c1;
            for i in 0..a.nrows() {
                a[(i, i)] += c0;
            }
            Ok(ShiftedSolver::Dense(DenseLu::new(a)?))
        } else {
            Ok(ShiftedSolver::Kronecker(KroneckerSumSolver::new(
                &self.x.interior,
                &self.y_block(),
                c0,
                c1,
            )?))
        }
    }
}

/// A reusable solver for `c0 I + c1 K`.
#[derive(Debug, Clone)]
pub enum ShiftedSolver {
    Dense(DenseLu),
    Kronecker(KroneckerSumSolver),
}

impl ShiftedSolver {
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let b = DVector::from_column_slice(rhs);
        let x = match self {
            ShiftedSolver::Dense(lu) => lu.solve(&b)?,
            ShiftedSolver::Kronecker(k) => k.solve(&b)?,
        };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(FadeError::SingularSystem("non-finite solution".into()));
        }
        Ok(x.as_slice().to_vec())
    }
}

/// `K = κ W¹ - ε W²` on a single axis.
pub fn assemble_k_1d(
    kappa: f64,
    eps: f64,
    w1: &WeightMatrix,
    w2: &WeightMatrix,
) -> Result<SpatialOperator> {
    Ok(SpatialOperator {
        x: AxisOperator::combine(&[(kappa, w1), (-eps, w2)])?,
        y: None,
    })
}

/// `K = κx I_y⊗W¹x + κy W¹y⊗I_x - εx I_y⊗W²x - εy W²y⊗I_x`.
#[allow(clippy::too_many_arguments)]
pub fn assemble_k_2d(
    kx: f64,
    ky: f64,
    ex: f64,
    ey: f64,
    wx1: &WeightMatrix,
    wx2: &WeightMatrix,
    wy1: &WeightMatrix,
    wy2: &WeightMatrix,
) -> Result<SpatialOperator> {
    Ok(SpatialOperator {
        x: AxisOperator::combine(&[(kx, wx1), (-ex, wx2)])?,
        y: Some(AxisOperator::combine(&[(ky, wy1), (-ey, wy2)])?),
    })
}

/// `L = εx I_y⊗W^{β1}x + εy W^{β2}y⊗I_x`.
pub fn assemble_frac_l_2d(
    ex: f64,
    ey: f64,
    wbx: &WeightMatrix,
    wby: &WeightMatrix,
) -> Result<SpatialOperator> {
    Ok(SpatialOperator {
        x: AxisOperator::combine(&[(ex, wbx)])?,
        y: Some(AxisOperator::combine(&[(ey, wby)])?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dq_weights::{first_order_weights, fractional_weights, higher_order_weights};
    use crate::grid::Grid;
    use crate::splines::BasisKind;

    fn weights(m: usize, a: f64, b: f64) -> (WeightMatrix, WeightMatrix) {
        let grid = Grid::new(a, b, m).unwrap();
        let w1 = first_order_weights(BasisKind::MODIFIED_CTB, &grid).unwrap();
        let w2 = higher_order_weights(&w1, 2, &grid).unwrap();
        (w1, w2)
    }

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (*seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }

    #[test]
    fn one_dimensional_blocks() {
        let (w1, w2) = weights(4, 0.0, 1.0);
        let k = assemble_k_1d(0.0, 1.0, &w1, &w2).unwrap();
        assert_eq!(k.to_dense(), -w2.interior_block());
        let k = assemble_k_1d(1.0, 0.0, &w1, &w2).unwrap();
        assert_eq!(k.to_dense(), w1.interior_block());
        let k = assemble_k_1d(1.0, 2.0, &w1, &w2).unwrap();
        let d = k.to_dense();
        for i in 1..4 {
            for j in 1..4 {
                let want = w1.get(i, j) - 2.0 * w2.get(i, j);
                assert!((d[(i - 1, j - 1)] - want).abs() < 1e-12);
            }
            assert!((k.x.left[i - 1] - (w1.get(i, 0) - 2.0 * w2.get(i, 0))).abs() < 1e-12);
            assert!((k.x.right[i - 1] - (w1.get(i, 4) - 2.0 * w2.get(i, 4))).abs() < 1e-12);
        }
    }

    #[test]
    fn kronecker_matches_scatter_assembly() {
        let mut seed = 7u64;
        let (wx1, wx2) = weights(5, 0.0, 1.0);
        let (wy1, wy2) = weights(5, -1.0, 2.0);
        let (kx, ky, ex, ey) = (
            lcg(&mut seed),
            lcg(&mut seed),
            lcg(&mut seed),
            lcg(&mut seed),
        );
        let k = assemble_k_2d(kx, ky, ex, ey, &wx1, &wx2, &wy1, &wy2).unwrap();
        let dense = k.to_dense();
        let n = 4;
        let mut oracle = DMatrix::zeros(n * n, n * n);
        for j in 1..=n {
            for i in 1..=n {
                let row = (j - 1) * n + (i - 1);
                for m in 1..=n {
                    oracle[(row, (j - 1) * n + (m - 1))] += kx * wx1.get(i, m) - ex * wx2.get(i, m);
                    oracle[(row, (m - 1) * n + (i - 1))] += ky * wy1.get(j, m) - ey * wy2.get(j, m);
                }
            }
        }
        assert!((&dense - &oracle).amax() < 1e-10);
        let u: Vec<f64> = (0..n * n).map(|_| lcg(&mut seed)).collect();
        let a = k.apply(&u).unwrap();
        let b = &dense * DVector::from_column_slice(&u);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).abs() < 1e-9 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn zero_and_identity_structure() {
        let (w1, w2) = weights(3, 0.0, 1.0);
        let k = assemble_k_2d(0.0, 0.0, 0.0, 0.0, &w1, &w2, &w1, &w2).unwrap();
        assert_eq!(k.to_dense().amax(), 0.0);
        let k = assemble_k_2d(0.0, 0.0, 1.0, 0.0, &w1, &w2, &w1, &w2).unwrap();
        let d = k.to_dense();
        let blk = -w2.interior_block();
        for b in 0..2 {
            for c in 0..2 {
                let sub = d.view((2 * b, 2 * c), (2, 2)).into_owned();
                if b == c {
                    assert_eq!(sub, blk);
                } else {
                    assert_eq!(sub.amax(), 0.0);
                }
            }
        }
    }

    #[test]
    fn boundary_load_reads_formula() {
        let (w1, w2) = weights(6, 0.0, 1.0);
        let k = assemble_k_1d(0.0, 0.7, &w1, &w2).unwrap();
        let f = vec![0.5; 5];
        let g = k.load(&f, |_, _| 0.0).unwrap();
        assert_eq!(g, f);
        let g = k.load(&[0.0; 5], |_, _| 1.0).unwrap();
        for i in 1..6 {
            let want = 0.7 * (w2.get(i, 0) + w2.get(i, 6));
            assert!((g[i - 1] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_part_is_consistent_with_full_operator() {
        // full-grid application of the weights equals interior K u + boundary part
        let (wx1, wx2) = weights(5, 0.0, 1.0);
        let (wy1, wy2) = weights(4, 0.0, 2.0);
        let k = assemble_k_2d(0.3, -0.2, 0.05, 0.1, &wx1, &wx2, &wy1, &wy2).unwrap();
        let u = |i: usize, j: usize| ((i * 7 + j * 3) as f64).sin();
        let interior: Vec<f64> = (1..4).flat_map(|j| (1..5).map(move |i| u(i, j))).collect();
        let ku = k.apply(&interior).unwrap();
        let b = k.boundary_part(u);
        for j in 1..4 {
            for i in 1..5 {
                let mut want = 0.0;
                for m in 0..=5 {
                    want += (0.3 * wx1.get(i, m) - 0.05 * wx2.get(i, m)) * u(m, j);
                }
                for m in 0..=4 {
                    want += (-0.2 * wy1.get(j, m) - 0.1 * wy2.get(j, m)) * u(i, m);
                }
                let r = (j - 1) * 4 + (i - 1);
                assert!((ku[r] + b[r] - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn kronecker_eigenvalues_repeat() {
        let (w1, w2) = weights(5, 0.0, 1.0);
        let k = assemble_k_2d(0.0, 0.0, -1.0, 0.0, &w1, &w2, &w1, &w2).unwrap();
        let mut a: Vec<f64> = k
            .to_dense()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .collect();
        let mut b: Vec<f64> = w2
            .interior_block()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .collect();
        b = b
            .iter()
            .flat_map(|&v| std::iter::repeat(v).take(4))
            .collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-8 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn fractional_operator_structure() {
        let grid = Grid::new(0.0, 1.0, 4).unwrap();
        let bx = fractional_weights(1.1, &grid).unwrap();
        let by = fractional_weights(1.3, &grid).unwrap();
        let l = assemble_frac_l_2d(0.7, 0.2, &bx, &by).unwrap();
        let d = l.to_dense();
        for j in 1..4 {
            for i in 1..4 {
                for jj in 1..4 {
                    for ii in 1..4 {
                        let mut want = 0.0;
                        if j == jj {
                            want += 0.7 * bx.get(i, ii);
                        }
                        if i == ii {
                            want += 0.2 * by.get(j, jj);
                        }
                        let got = d[((j - 1) * 3 + i - 1, (jj - 1) * 3 + ii - 1)];
                        assert!((got - want).abs() < 1e-12);
                    }
                }
            }
        }
        let l = assemble_frac_l_2d(0.0, 0.2, &bx, &by).unwrap();
        assert_eq!(l.x.interior.amax(), 0.0);
    }

    #[test]
    fn shifted_solvers_agree_with_dense() {
        let (w1, w2) = weights(6, 0.0, 1.0);
        let k2 = assemble_k_2d(1.0, 0.5, 0.1, 0.2, &w1, &w2, &w1, &w2).unwrap();
        let k1 = assemble_k_1d(1.0, 0.1, &w1, &w2).unwrap();
        for k in [k1, k2] {
            let s = k.shifted_solver(1.3, 0.01).unwrap();
            let rhs: Vec<f64> = (0..k.dim()).map(|i| (i as f64).cos()).collect();
            let x = s.solve(&rhs).unwrap();
            let kx = k.apply(&x).unwrap();
            for i in 0..k.dim() {
                assert!((1.3 * x[i] + 0.01 * kx[i] - rhs[i]).abs() < 1e-11);
            }
        }
        assert!(k_mismatch().is_err());
    }

    fn k_mismatch() -> Result<SpatialOperator> {
        let (w1, _) = weights(6, 0.0, 1.0);
        let (_, w2) = weights(5, 0.0, 1.0);
        assemble_k_1d(1.0, 1.0, &w1, &w2)
    }
}
