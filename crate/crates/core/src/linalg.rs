//! Linear-algebra kernels: the Thomas algorithm, a dense LU wrapper and a
//! Schur-based solver for Kronecker-sum systems.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{FadeError, Result};

/// `lower[i]` couples row `i + 1` to unknown `i`; `upper[i]` couples row `i`
/// to unknown `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `|diag_i| > |lower_i| + |upper_i|` on every row.
    pub fn strictly_diagonally_dominant(&self) -> bool {
        let n = self.diag.len();
        (0..n).all(|i| {
            let l = if i > 0 { self.lower[i - 1].abs() } else { 0.0 };
            let u = if i + 1 < n { self.upper[i].abs() } else { 0.0 };
            self.diag[i].abs() > l + u
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if i == j + 1 {
                self.lower[j]
            } else if j == i + 1 {
                self.upper[i]
            } else {
                0.0
            }
        })
    }
}

/// Forward-eliminated tridiagonal matrix, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct ThomasFactor {
    lower: Vec<f64>,
    // modified upper diagonal c'_i and pivots d'_i
    upper_mod: Vec<f64>,
    pivots: Vec<f64>,
}

impl ThomasFactor {
    pub fn new(lower: &[f64], diag: &[f64], upper: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(FadeError::DimensionMismatch(
                "empty tridiagonal system".into(),
            ));
        }
        if lower.len() != n - 1 {
            return Err(FadeError::LengthMismatch {
                expected: n - 1,
                got: lower.len(),
            });
        }
        if upper.len() != n - 1 {
            return Err(FadeError::LengthMismatch {
                expected: n - 1,
                got: upper.len(),
            });
        }
        let scale = diag
            .iter()
            .fold(0.0f64, |m, d| m.max(d.abs()))
            .max(f64::MIN_POSITIVE);
        let mut pivots = Vec::with_capacity(n);
        let mut upper_mod = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n {
            let pivot = if i == 0 {
                diag[0]
            } else {
                diag[i] - lower[i - 1] * upper_mod[i - 1]
            };
            if pivot.abs() <= 1e-14 * scale {
                return Err(FadeError::ZeroPivot { index: i });
            }
            pivots.push(pivot);
            if i + 1 < n {
                upper_mod.push(upper[i] / pivot);
            }
        }
        Ok(Self {
            lower: lower.to_vec(),
            upper_mod,
            pivots,
        })
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        if rhs.len() != n {
            return Err(FadeError::LengthMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        let mut x = vec![0.0; n];
        x[0] = rhs[0] / self.pivots[0];
        for i in 1..n {
            x[i] = (rhs[i] - self.lower[i - 1] * x[i - 1]) / self.pivots[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.upper_mod[i] * x[i + 1];
        }
        Ok(x)
    }
}

/// Solve a tridiagonal system in `O(n)` operations.
pub fn thomas_solve(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    ThomasFactor::new(&sys.lower, &sys.diag, &sys.upper)?.solve(&sys.rhs)
}

/// Dense LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
}

impl DenseLu {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(FadeError::DimensionMismatch(format!(
                "LU needs a square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        let scale = matrix.amax().max(f64::MIN_POSITIVE);
        let lu = matrix.lu();
        let u = lu.u();
        let tiny = (0..n)
            .map(|i| u[(i, i)].abs())
            .fold(f64::INFINITY, f64::min);
        if n > 0 && !(tiny > 1e-14 * scale) {
            return Err(FadeError::SingularSystem(format!(
                "smallest pivot {tiny:e} relative to scale {scale:e}"
            )));
        }
        Ok(Self { lu, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        if rhs.len() != self.n {
            return Err(FadeError::LengthMismatch {
                expected: self.n,
                got: rhs.len(),
            });
        }
        self.lu
            .solve(rhs)
            .ok_or_else(|| FadeError::SingularSystem("LU solve failed".into()))
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let s = a[(i, j)];
            if s != 0.0 {
                out.view_mut((i * br, j * bc), (br, bc)).copy_from(&(b * s));
            }
        }
    }
    out
}

/// Complex Schur form `A = Q T Q^H` with `T` upper triangular.
pub fn complex_schur(a: &DMatrix<f64>) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let n = a.nrows();
    let ac = a.map(|v| Complex64::new(v, 0.0));
    let schur = nalgebra::linalg::Schur::try_new(ac, f64::EPSILON, 1000 * n.max(1))
        .ok_or_else(|| FadeError::NonConvergence("Schur (shifted QR) iteration".into()))?;
    Ok(schur.unpack())
}

/// Solver for `(c0 I + c1 (I_y ⊗ A_x + A_y ⊗ I_x)) u = b` with unknowns in
/// x-fastest order.
///
/// With `A_x = Q_x T_x Q_x^H` and `A_y = Q_y T_y Q_y^H` the system becomes a
/// triangular Sylvester equation, solved column by column. Setup costs two
/// `O(n^3)` Schur decompositions of the axis blocks; each solve costs
/// `O(nx ny (nx + ny))`.
#[derive(Debug, Clone)]
pub struct KroneckerSumSolver {
    qx: DMatrix<Complex64>,
    tx: DMatrix<Complex64>,
    qy: DMatrix<Complex64>,
    ty: DMatrix<Complex64>,
    c0: f64,
    c1: f64,
}

impl KroneckerSumSolver {
    pub fn new(ax: &DMatrix<f64>, ay: &DMatrix<f64>, c0: f64, c1: f64) -> Result<Self> {
        if !ax.is_square() || !ay.is_square() {
            return Err(FadeError::DimensionMismatch(
                "axis blocks must be square".into(),
            ));
        }
        let (qx, tx) = complex_schur(ax)?;
        let (qy, ty) = complex_schur(ay)?;
        let scale = c0.abs() + c1.abs() * (ax.amax() + ay.amax());
        for i in 0..tx.nrows() {
            for j in 0..ty.nrows() {
                let d = c0 + c1 * (tx[(i, i)] + ty[(j, j)]);
                if d.norm() <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
                    return Err(FadeError::SingularSystem(format!(
                        "Kronecker-sum system has a (near) zero eigenvalue {d}"
                    )));
                }
            }
        }
        Ok(Self {
            qx,
            tx,
            qy,
            ty,
            c0,
            c1,
        })
    }

    pub fn dim(&self) -> usize {
        self.tx.nrows() * self.ty.nrows()
    }

    pub fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        let nx = self.tx.nrows();
        let ny = self.ty.nrows();
        if rhs.len() != nx * ny {
            return Err(FadeError::LengthMismatch {
                expected: nx * ny,
                got: rhs.len(),
            });
        }
        let b = DMatrix::from_fn(nx, ny, |i, j| Complex64::new(rhs[j * nx + i], 0.0));
        // C = Q_x^H B conj(Q_y)
        let c = self.qx.adjoint() * b * self.qy.conjugate();
        let mut y = DMatrix::<Complex64>::zeros(nx, ny);
        for j in (0..ny).rev() {
            let mut col: Vec<Complex64> = (0..nx).map(|i| c[(i, j)]).collect();
            for k in j + 1..ny {
                let t = self.ty[(j, k)] * self.c1;
                if t != Complex64::new(0.0, 0.0) {
                    for i in 0..nx {
                        col[i] -= t * y[(i, k)];
                    }
                }
            }
            let shift = self.c0 + self.c1 * self.ty[(j, j)];
            // (shift I + c1 T_x) y_j = col, upper triangular
            for i in (0..nx).rev() {
                let mut s = col[i];
                for l in i + 1..nx {
                    s -= self.c1 * self.tx[(i, l)] * y[(l, j)];
                }
                y[(i, j)] = s / (shift + self.c1 * self.tx[(i, i)]);
            }
        }
        let x = &self.qx * y * self.qy.transpose();
        Ok(DVector::from_fn(nx * ny, |k, _| x[(k % nx, k / nx)].re))
    }
}
