//! Dense complex matrices for the small (2x2 up to 8x8) operators that show up
//! in single-qubit channel theory.
//!
//! Storage is row-major. `vec` stacks columns, so for an `m x n` matrix `K`
//! the entry `K[r, c]` lands at position `c * m + r`, and
//! `vec(U K V) = (V^T ⊗ U) vec(K)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative Frobenius tolerance on `‖m - m*‖` accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default eigenvalue tolerance for PSD tests and determinant clamping.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Jacobi stops once the off-diagonal Frobenius mass drops below this
/// fraction of `‖m‖_F`.
pub const JACOBI_REL_TOL: f64 = 1e-14;

pub const JACOBI_MAX_SWEEPS: usize = 100;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Selects one factor of a bipartite space `A ⊗ B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    /// The left factor `A`.
    First,
    /// The right factor `B`.
    Second,
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(format!(
                "matrix dimensions must be at least 1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidDimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::InvalidDimension("ragged rows".into()));
        }
        Self::new(n_rows, n_cols, rows.concat())
    }

    /// Real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Column vector.
    pub fn column(entries: &[C64]) -> Result<Self> {
        Self::new(entries.len(), 1, entries.to_vec())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be at least 1");
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn diag_real(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| {
            if r == c {
                C64::new(diag[r], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// `v v*` for a column vector `v`.
    pub fn outer(v: &ComplexMatrix) -> Self {
        v * &v.adjoint()
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Nested row vectors, handy for serialization.
    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance `‖self - other‖_F`.
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in distance");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Hilbert-Schmidt inner product `tr(self* other)`.
    pub fn inner(&self, other: &ComplexMatrix) -> C64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in inner product");
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.distance(&self.adjoint())
    }

    /// `‖m - m*‖_F ≤ tol·‖m‖_F`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_residual() <= tol * self.frobenius_norm()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let (rb, cb) = other.shape();
        Self::from_fn(self.rows * rb, self.cols * cb, |r, c| {
            self[(r / rb, c / cb)] * other[(r % rb, c % cb)]
        })
    }

    /// Column-stacking vectorization.
    pub fn vec(&self) -> Self {
        let m = self.rows;
        Self::from_fn(m * self.cols, 1, |k, _| self[(k % m, k / m)])
    }

    /// Inverse of [`ComplexMatrix::vec`].
    pub fn unvec(v: &ComplexMatrix, rows: usize, cols: usize) -> Result<Self> {
        if v.cols != 1 || v.rows != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension(format!(
                "cannot unvec a {}x{} array into {rows}x{cols}",
                v.rows, v.cols
            )));
        }
        Ok(Self::from_fn(rows, cols, |r, c| v.data[c * rows + r]))
    }

    fn check_bipartite(&self, dim_a: usize, dim_b: usize) -> Result<()> {
        if !self.is_square() || dim_a == 0 || dim_b == 0 || self.rows != dim_a * dim_b {
            return Err(Error::InvalidDimension(format!(
                "{}x{} matrix is not an operator on a {dim_a}x{dim_b} bipartite space",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Partial trace of an operator on `A ⊗ B` (`dim_a · dim_b` square).
    pub fn partial_trace(&self, dim_a: usize, dim_b: usize, traced: Subsystem) -> Result<Self> {
        self.check_bipartite(dim_a, dim_b)?;
        let m = |a1: usize, b1: usize, a2: usize, b2: usize| self[(a1 * dim_b + b1, a2 * dim_b + b2)];
        Ok(match traced {
            Subsystem::First => Self::from_fn(dim_b, dim_b, |b1, b2| {
                (0..dim_a).map(|a| m(a, b1, a, b2)).sum()
            }),
            Subsystem::Second => Self::from_fn(dim_a, dim_a, |a1, a2| {
                (0..dim_b).map(|b| m(a1, b, a2, b)).sum()
            }),
        })
    }

    /// Transpose of one tensor factor of an operator on `A ⊗ B`.
    pub fn partial_transpose(
        &self,
        dim_a: usize,
        dim_b: usize,
        transposed: Subsystem,
    ) -> Result<Self> {
        self.check_bipartite(dim_a, dim_b)?;
        let n = self.rows;
        Ok(Self::from_fn(n, n, |r, c| {
            let (a1, b1) = (r / dim_b, r % dim_b);
            let (a2, b2) = (c / dim_b, c % dim_b);
            match transposed {
                Subsystem::First => self[(a2 * dim_b + b1, a1 * dim_b + b2)],
                Subsystem::Second => self[(a1 * dim_b + b2, a2 * dim_b + b1)],
            }
        }))
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Eigenvalues come back in ascending order.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        if !self.is_square() {
            return Err(Error::InvalidDimension(format!(
                "eigendecomposition needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let norm = self.frobenius_norm();
        let residual = self.hermiticity_residual();
        if residual > HERMITIAN_TOL * norm {
            return Err(Error::NotHermitian { residual });
        }
        let n = self.rows;
        let adj = self.adjoint();
        let mut a: Vec<C64> = self
            .data
            .iter()
            .zip(&adj.data)
            .map(|(x, y)| (x + y) * 0.5)
            .collect();
        let mut v = Self::identity(n).data;
        let threshold = JACOBI_REL_TOL * norm;

        let off_mass = |a: &[C64]| -> f64 {
            let mut s = 0.0;
            for r in 0..n {
                for c in 0..n {
                    if r != c {
                        s += a[r * n + c].norm_sqr();
                    }
                }
            }
            s.sqrt()
        };

        let mut converged = off_mass(&a) <= threshold;
        let mut sweeps = 0;
        while !converged && sweeps < JACOBI_MAX_SWEEPS {
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut v, n, p, q);
                }
            }
            sweeps += 1;
            converged = off_mass(&a) <= threshold;
        }
        if !converged {
            return Err(Error::NumericalFailure(format!(
                "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )));
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
        let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
        let eigenvectors = Self::from_fn(n, n, |r, c| v[r * n + order[c]]);
        Ok(HermitianEigen {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Ascending eigenvalues of a Hermitian matrix.
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        Ok(self.hermitian_eigen()?.eigenvalues)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues_hermitian()?[0])
    }

    /// Determinant of a PSD matrix. Eigenvalues in `[-tol, tol]` count as
    /// exact zeros; anything below `-tol` is rejected.
    pub fn det_psd(&self, tol: f64) -> Result<f64> {
        let eig = self.eigenvalues_hermitian()?;
        if eig[0] < -tol {
            return Err(Error::NotPsd {
                min_eigenvalue: eig[0],
            });
        }
        Ok(eig
            .iter()
            .map(|&l| if l.abs() <= tol { 0.0 } else { l })
            .product())
    }

    /// `min eigenvalue ≥ -tol · max(1, ‖m‖_F)`.
    pub fn psd_check(&self, tol: f64) -> Result<bool> {
        let min = self.min_eigenvalue()?;
        Ok(min >= -tol * self.frobenius_norm().max(1.0))
    }
}

/// One Jacobi step zeroing `a[p, q]`, with `a <- G* a G` and `v <- v G`.
fn jacobi_rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let b = a[p * n + q];
    let abs_b = b.norm();
    if abs_b == 0.0 {
        return;
    }
    let phase = b / abs_b;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * abs_b);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ph_conj = phase.conj();

    // columns: a G, v G
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * ph_conj * s;
        a[k * n + q] = akp * s + akq * ph_conj * c;
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * c - vkq * ph_conj * s;
        v[k * n + q] = vkp * s + vkq * ph_conj * c;
    }
    // rows: G* (a G)
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * phase * s;
        a[q * n + k] = apk * s + aqk * phase * c;
    }
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;
    a[p * n + p] = C64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = C64::new(a[q * n + q].re, 0.0);
}

/// Eigenvalues (ascending) and matching orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Column `i` of the eigenvector matrix.
    pub fn eigenvector(&self, i: usize) -> ComplexMatrix {
        let n = self.eigenvectors.rows();
        ComplexMatrix::from_fn(n, 1, |r, _| self.eigenvectors[(r, i)])
    }

    /// `E f(Λ) E*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let e = &self.eigenvectors;
        let n = e.rows();
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| e[(r, k)] * e[(c, k)].conj() * mapped[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let k = self.cols;
        ComplexMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..k).map(|i| self.data[r * k + i] * rhs.data[i * rhs.cols + c]).sum()
        })
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in addition");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in subtraction");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(r) {
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// The Pauli matrices.
pub mod pauli {
    use super::{ComplexMatrix, C64, I, ONE, ZERO};

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![ZERO, -I, I, ZERO]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![ONE, ZERO, ZERO, -ONE]).unwrap()
    }

    /// `[σx, σy, σz]`.
    pub fn xyz() -> [ComplexMatrix; 3] {
        [x(), y(), z()]
    }

    /// `½ (c0 I + c·σ)`.
    pub fn bloch_operator(c0: f64, c: [f64; 3]) -> ComplexMatrix {
        let h = 0.5;
        ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(h * (c0 + c[2]), 0.0),
                C64::new(h * c[0], -h * c[1]),
                C64::new(h * c[0], h * c[1]),
                C64::new(h * (c0 - c[2]), 0.0),
            ],
        )
        .unwrap()
    }
}
