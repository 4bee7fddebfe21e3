//! Dense complex matrices and the tolerance policy shared by every module.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, WinvError};

pub type C64 = Complex64;

/// Unit roundoff of IEEE double precision, 2^-53.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Dense complex matrix with finite entries.
///
/// Zero-sized matrices are allowed; they show up as empty blocks of
/// partitioned factors (for example the nilpotent part of an invertible
/// matrix).
#[derive(Clone, PartialEq)]
pub struct Matrix(DMatrix<C64>);

impl Matrix {
    pub fn new(inner: DMatrix<C64>) -> Result<Self> {
        for j in 0..inner.ncols() {
            for i in 0..inner.nrows() {
                let z = inner[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(WinvError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Matrix(inner))
    }

    /// Wraps a matrix produced by arithmetic on finite inputs.
    pub(crate) fn wrap(inner: DMatrix<C64>) -> Self {
        Matrix(inner)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Matrix(DMatrix::identity(n, n))
    }

    /// Builds a matrix from row-major complex entries.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(WinvError::shape(
                "from_row_slice",
                format!("{} entries for a {rows}x{cols} matrix", entries.len()),
            ));
        }
        Matrix::new(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let z: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Matrix::from_row_slice(rows, cols, &z)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(WinvError::shape("from_rows", "ragged rows"));
        }
        let flat: Vec<C64> = rows.iter().flatten().copied().collect();
        Matrix::from_row_slice(nrows, ncols, &flat)
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn conj_transpose(&self) -> Matrix {
        Matrix(self.0.adjoint())
    }

    pub fn fro_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix(self.0.map(|z| z * s))
    }

    pub fn scale_complex(&self, s: C64) -> Matrix {
        Matrix(self.0.map(|z| z * s))
    }

    /// `‖self − other‖_F / (‖other‖_F + 1)`, the residual measure used throughout.
    pub fn rel_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "rel_diff shape mismatch");
        (&self.0 - &other.0).norm() / (other.fro_norm() + 1.0)
    }

    /// Integer power of a square matrix by repeated multiplication; `M^0 = I`.
    pub fn pow(&self, l: usize) -> Matrix {
        assert!(self.is_square(), "pow of a non-square matrix");
        let mut out = Matrix::identity(self.rows());
        for _ in 0..l {
            out = &out * self;
        }
        out
    }

    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Matrix {
        Matrix(self.0.view((r0, c0), (nr, nc)).into_owned())
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let rows = parts.first().map_or(0, |p| p.rows());
        let cols = parts.iter().map(|p| p.cols()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let mut c = 0;
        for p in parts {
            assert_eq!(p.rows(), rows, "hstack row mismatch");
            out.view_mut((0, c), (rows, p.cols())).copy_from(&p.0);
            c += p.cols();
        }
        Matrix(out)
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        let cols = parts.first().map_or(0, |p| p.cols());
        let rows = parts.iter().map(|p| p.rows()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let mut r = 0;
        for p in parts {
            assert_eq!(p.cols(), cols, "vstack column mismatch");
            out.view_mut((r, 0), (p.rows(), cols)).copy_from(&p.0);
            r += p.rows();
        }
        Matrix(out)
    }

    /// `[[a, 0], [0, b]]`.
    pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
        Matrix::from_blocks(
            a,
            &Matrix::zeros(a.rows(), b.cols()),
            &Matrix::zeros(b.rows(), a.cols()),
            b,
        )
    }

    /// `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        Matrix::vstack(&[&Matrix::hstack(&[a, b]), &Matrix::hstack(&[c, d])])
    }

    /// Inverse of a square matrix by LU with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(WinvError::shape(
                "inverse",
                format!("{}x{} is not square", self.rows(), self.cols()),
            ));
        }
        if self.is_empty() {
            return Ok(self.clone());
        }
        let inv = self
            .0
            .clone()
            .try_inverse()
            .ok_or(WinvError::Singular { what: "inverse" })?;
        Matrix::new(inv).map_err(|_| WinvError::Singular { what: "inverse" })
    }

    /// Singular values in nonincreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.is_empty() {
            return Vec::new();
        }
        self.to_faer().singular_values().expect("SVD did not converge")
    }

    /// Full SVD `M = U Σ V*`: unitary `U` (rows×rows), singular values in
    /// nonincreasing order, unitary `V` (cols×cols).
    pub(crate) fn full_svd(&self) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
        let (rows, cols) = self.shape();
        if self.is_empty() {
            return (DMatrix::identity(rows, rows), Vec::new(), DMatrix::identity(cols, cols));
        }
        let f = self.to_faer().svd().expect("SVD did not converge");
        let (u, v) = (f.U(), f.V());
        let s = f.S().column_vector();
        (
            DMatrix::from_fn(rows, rows, |i, j| u[(i, j)]),
            (0..rows.min(cols)).map(|i| s[i].re).collect(),
            DMatrix::from_fn(cols, cols, |i, j| v[(i, j)]),
        )
    }

    /// Eigenvalues of a square matrix, in no particular order.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        if !self.is_square() {
            return Err(WinvError::shape(
                "eigenvalues",
                format!("{}x{} is not square", self.rows(), self.cols()),
            ));
        }
        if self.is_empty() {
            return Ok(Vec::new());
        }
        self.to_faer().eigenvalues().map_err(|_| WinvError::Postcondition {
            op: "eigenvalues",
            detail: "eigenvalue iteration did not converge".into(),
        })
    }

    fn to_faer(&self) -> faer::Mat<C64> {
        faer::Mat::from_fn(self.rows(), self.cols(), |i, j| self.0[(i, j)])
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.0[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(
            self.cols(),
            rhs.rows(),
            "product of {}x{} and {}x{}",
            self.rows(),
            self.cols(),
            rhs.rows(),
            rhs.cols()
        );
        Matrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn add(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "sum shape mismatch");
        Matrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &'a Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "difference shape mismatch");
        Matrix(&self.0 - &rhs.0)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix(-&self.0)
    }
}

/// Rank cutoff and equation-residual thresholds.
///
/// `rank_rel` is the relative singular-value cutoff; when unset it defaults to
/// `max(m, n) · u · 64` for each `m × n` matrix being ranked. Singular values are
/// compared against `rank_rel · σ_max`, or against `rank_rel` times the product of
/// the factor norms when the matrix is a computed product. `eq_rel` bounds the
/// relative residual `‖LHS − RHS‖_F / (‖RHS‖_F + 1)` of a defining equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    rank_rel: Option<f64>,
    eq_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rel: None,
            eq_rel: Tolerance::DEFAULT_EQ_REL,
        }
    }
}

impl Tolerance {
    pub const DEFAULT_EQ_REL: f64 = 1e-8;

    pub fn new(rank_rel: Option<f64>, eq_rel: f64) -> Result<Self> {
        if let Some(r) = rank_rel {
            if !(r > 0.0 && r.is_finite()) {
                return Err(WinvError::InvalidTolerance(format!("rank_rel = {r}")));
            }
        }
        if !(eq_rel > 0.0 && eq_rel.is_finite()) {
            return Err(WinvError::InvalidTolerance(format!("eq_rel = {eq_rel}")));
        }
        Ok(Tolerance { rank_rel, eq_rel })
    }

    /// Reads `WINV_TOL_RANK` and `WINV_TOL_EQ`, falling back to the defaults.
    pub fn from_env() -> Result<Self> {
        fn read(name: &str) -> Result<Option<f64>> {
            match std::env::var(name) {
                Ok(s) => s
                    .trim()
                    .parse::<f64>()
                    .map(Some)
                    .map_err(|_| WinvError::InvalidTolerance(format!("{name}={s}"))),
                Err(_) => Ok(None),
            }
        }
        let rank = read("WINV_TOL_RANK")?;
        let eq = read("WINV_TOL_EQ")?.unwrap_or(Tolerance::DEFAULT_EQ_REL);
        Tolerance::new(rank, eq)
    }

    pub fn eq_rel(&self) -> f64 {
        self.eq_rel
    }

    pub fn rank_rel(&self) -> Option<f64> {
        self.rank_rel
    }

    pub fn rank_rel_for(&self, rows: usize, cols: usize) -> f64 {
        self.rank_rel
            .unwrap_or_else(|| rows.max(cols).max(1) as f64 * UNIT_ROUNDOFF * 64.0)
    }
}

/// Number of singular values strictly above `rank_rel · σ_max`.
pub fn numerical_rank(m: &Matrix, tol: &Tolerance) -> usize {
    rank_from_singular_values(&m.singular_values(), tol.rank_rel_for(m.rows(), m.cols()))
}

/// Rank with cutoff `rank_rel · max(σ_max, scale)`. For a computed product, `scale`
/// is the product of the factor norms, so a product that is zero up to roundoff
/// has rank zero.
pub fn numerical_rank_scaled(m: &Matrix, scale: f64, tol: &Tolerance) -> usize {
    rank_from_singular_values_scaled(&m.singular_values(), tol.rank_rel_for(m.rows(), m.cols()), scale)
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm(m: &Matrix) -> f64 {
    m.singular_values().first().copied().unwrap_or(0.0)
}

/// `‖A‖₂ ‖W‖₂`, the natural size of `AW` and `WA`.
pub(crate) fn product_scale(a: &Matrix, w: &Matrix) -> f64 {
    spectral_norm(a) * spectral_norm(w)
}

/// `‖W‖₂² ‖A‖₂`, the natural size of `WAW`.
pub(crate) fn waw_scale(a: &Matrix, w: &Matrix) -> f64 {
    let nw = spectral_norm(w);
    nw * nw * spectral_norm(a)
}

pub(crate) fn rank_from_singular_values(s: &[f64], rel: f64) -> usize {
    rank_from_singular_values_scaled(s, rel, 0.0)
}

pub(crate) fn rank_from_singular_values_scaled(s: &[f64], rel: f64, scale: f64) -> usize {
    let smax = s.first().copied().unwrap_or(0.0).max(scale);
    s.iter().filter(|&&x| x > rel * smax).count()
}

/// The W-product power `(AW)^{l-1} A`.
pub fn weighted_power(a: &Matrix, w: &Matrix, l: usize) -> Result<Matrix> {
    check_pair("weighted_power", a, w)?;
    if l == 0 {
        return Err(WinvError::shape("weighted_power", "power must be positive"));
    }
    Ok(&(a * w).pow(l - 1) * a)
}

/// Validates that `A` is `m × n` and `W` is `n × m`.
pub fn check_pair(op: &'static str, a: &Matrix, w: &Matrix) -> Result<()> {
    if w.rows() != a.cols() || w.cols() != a.rows() {
        return Err(WinvError::shape(
            op,
            format!(
                "A is {}x{} so W must be {}x{}, got {}x{}",
                a.rows(),
                a.cols(),
                a.cols(),
                a.rows(),
                w.rows(),
                w.cols()
            ),
        ));
    }
    Ok(())
}

pub(crate) fn check_shape(op: &'static str, what: &str, m: &Matrix, shape: (usize, usize)) -> Result<()> {
    if m.shape() != shape {
        return Err(WinvError::shape(
            op,
            format!(
                "{what} must be {}x{}, got {}x{}",
                shape.0,
                shape.1,
                m.rows(),
                m.cols()
            ),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn roundoff_product_has_rank_zero_against_factor_scale() {
        // what a product that vanishes in exact arithmetic looks like after rounding
        let tiny = Matrix::from_real(2, 2, &[3e-16, -1e-16, 2e-16, 4e-16]).unwrap();
        let tol = Tolerance::default();
        assert_eq!(numerical_rank(&tiny, &tol), 2);
        assert_eq!(numerical_rank_scaled(&tiny, 1.0, &tol), 0);
        let big = Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, 1e-3]).unwrap();
        assert_eq!(numerical_rank_scaled(&big, 1.0, &tol), 2);
    }

    #[test]
    fn conj_transpose_of_real_matrix_is_transpose() {
        let m = Matrix::from_real(2, 2, &[0.0, 0.0, 1.0, 1.0]).unwrap();
        let expected = Matrix::from_real(2, 2, &[0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(m.conj_transpose(), expected);
    }

    #[test]
    fn conj_transpose_conjugates() {
        let m = Matrix::from_row_slice(1, 1, &[c(0.0, 1.0)]).unwrap();
        assert_eq!(m.conj_transpose().get(0, 0), c(0.0, -1.0));
    }

    #[test]
    fn conj_transpose_is_an_involution() {
        let entries: Vec<C64> = (0..12).map(|i| c(i as f64 * 0.3 - 1.0, 2.0 - i as f64)).collect();
        let m = Matrix::from_row_slice(3, 4, &entries).unwrap();
        assert_eq!(m.conj_transpose().shape(), (4, 3));
        assert_eq!(m.conj_transpose().conj_transpose(), m);
    }

    #[test]
    fn rank_of_example_products() {
        let tol = Tolerance::default();
        let w = Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let a = Matrix::from_real(2, 2, &[0.0, 0.0, 1.0, 1.0]).unwrap();
        let b = Matrix::from_real(2, 2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(numerical_rank(&(&(&w * &a) * &w), &tol), 0);
        assert_eq!(numerical_rank(&(&(&w * &b) * &w), &tol), 1);
        assert_eq!(numerical_rank(&b, &tol), 1);
        assert_eq!(numerical_rank(&Matrix::identity(3), &tol), 3);
        assert_eq!(numerical_rank(&Matrix::zeros(3, 2), &tol), 0);
    }

    #[test]
    fn weighted_power_examples() {
        let a = Matrix::from_real(1, 2, &[0.0, 1.0]).unwrap();
        let w = Matrix::from_real(2, 1, &[0.0, 1.0]).unwrap();
        assert_eq!(weighted_power(&a, &w, 1).unwrap(), a);
        assert_eq!(weighted_power(&a, &w, 2).unwrap(), a);
        assert!(weighted_power(&a, &a, 2).is_err());
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        assert!(matches!(
            Matrix::from_real(1, 2, &[1.0, f64::NAN]),
            Err(WinvError::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::new(Some(0.0), 1e-8).is_err());
        assert!(Tolerance::new(None, -1.0).is_err());
        let t = Tolerance::default();
        assert_eq!(t.rank_rel_for(3, 8), 8.0 * UNIT_ROUNDOFF * 64.0);
        let t = Tolerance::new(Some(1e-10), 1e-6).unwrap();
        assert_eq!(t.rank_rel_for(3, 8), 1e-10);
    }
}
