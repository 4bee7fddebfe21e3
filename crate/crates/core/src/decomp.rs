//! Full SVD, matrix index, and core-nilpotent decompositions.

use nalgebra::DMatrix;

use crate::error::{Result, WinvError};
use crate::matrix::{
    check_pair, numerical_rank_scaled, product_scale, rank_from_singular_values_scaled, Matrix, Tolerance, C64,
};

/// Full singular value decomposition `M = K · Σ · L*` with square unitary `K`, `L`.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// Left singular vectors, `m × m`.
    pub k: Matrix,
    /// All `min(m, n)` singular values, nonincreasing.
    pub sigma: Vec<f64>,
    /// Right singular vectors, `n × n`.
    pub l: Matrix,
    /// Numerical rank under the tolerance the factors were computed with.
    pub rank: usize,
}

impl SvdFactors {
    /// The `m × n` middle factor with the leading `rank` singular values on its diagonal.
    pub fn sigma_matrix(&self) -> Matrix {
        let (m, n) = (self.k.rows(), self.l.rows());
        let mut s = DMatrix::zeros(m, n);
        for i in 0..self.rank {
            s[(i, i)] = C64::new(self.sigma[i], 0.0);
        }
        Matrix::wrap(s)
    }

    /// `Σ₁`, the `rank × rank` positive diagonal block.
    pub fn sigma1(&self) -> Matrix {
        let mut s = DMatrix::zeros(self.rank, self.rank);
        for i in 0..self.rank {
            s[(i, i)] = C64::new(self.sigma[i], 0.0);
        }
        Matrix::wrap(s)
    }

    pub fn reconstruct(&self) -> Matrix {
        &(&self.k * &self.sigma_matrix()) * &self.l.conj_transpose()
    }

    /// Orthonormal basis of the range, `m × rank`.
    pub fn range_basis(&self) -> Matrix {
        self.k.block(0, 0, self.k.rows(), self.rank)
    }

    /// Orthonormal basis of the null space, `n × (n − rank)`.
    pub fn null_basis(&self) -> Matrix {
        let n = self.l.rows();
        self.l.block(0, self.rank, n, n - self.rank)
    }
}

pub fn svd(m: &Matrix, tol: &Tolerance) -> SvdFactors {
    svd_scaled(m, 0.0, tol)
}

/// SVD whose rank uses the cutoff `rank_rel · max(σ_max, scale)`.
pub fn svd_scaled(m: &Matrix, scale: f64, tol: &Tolerance) -> SvdFactors {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return SvdFactors {
            k: Matrix::identity(rows),
            sigma: Vec::new(),
            l: Matrix::identity(cols),
            rank: 0,
        };
    }
    let (u, sigma, v) = m.full_svd();
    let rank = rank_from_singular_values_scaled(&sigma, tol.rank_rel_for(rows, cols), scale);
    SvdFactors {
        k: Matrix::wrap(u),
        sigma,
        l: Matrix::wrap(v),
        rank,
    }
}

/// Orthonormal basis of `R(M)`.
pub fn range_basis(m: &Matrix, tol: &Tolerance) -> Matrix {
    svd(m, tol).range_basis()
}

/// Orthonormal basis of `N(M)`.
pub fn null_basis(m: &Matrix, tol: &Tolerance) -> Matrix {
    svd(m, tol).null_basis()
}

/// Smallest `k ≥ 0` with `r(M^k) = r(M^{k+1})`.
pub fn index_of(m: &Matrix, tol: &Tolerance) -> Result<usize> {
    Ok(rank_profile(m, 0.0, tol)?.0)
}

/// Index together with the rank of `M^k`. Ranks of `M^j` are taken against
/// `scale^j`, where `scale` bounds `‖M‖₂` (the product of the factor norms when
/// `M` is itself a computed product).
pub(crate) fn rank_profile(m: &Matrix, scale: f64, tol: &Tolerance) -> Result<(usize, usize)> {
    if !m.is_square() {
        return Err(WinvError::shape(
            "index_of",
            format!("{}x{} is not square", m.rows(), m.cols()),
        ));
    }
    let n = m.rows();
    let scale = scale.max(crate::matrix::spectral_norm(m));
    let mut power = Matrix::identity(n);
    let mut rank = n;
    for k in 0..n {
        let next = &power * m;
        let next_rank = numerical_rank_scaled(&next, scale.powi(k as i32 + 1), tol);
        if next_rank == rank {
            return Ok((k, rank));
        }
        power = next;
        rank = next_rank;
    }
    Ok((n, rank))
}

/// `max(ind(AW), ind(WA))`.
pub fn weighted_index(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<usize> {
    check_pair("weighted_index", a, w)?;
    let scale = product_scale(a, w);
    Ok(rank_profile(&(a * w), scale, tol)?.0.max(rank_profile(&(w * a), scale, tol)?.0))
}

/// `M = P · diag(C, N) · P⁻¹` with `C` nonsingular and `N` nilpotent of index `k`.
#[derive(Debug, Clone)]
pub struct CoreNilpotentFactors {
    pub p: Matrix,
    pub p_inv: Matrix,
    pub core: Matrix,
    pub nilpotent: Matrix,
    pub index: usize,
    /// 2-norm condition number of `P`.
    pub cond_p: f64,
}

impl CoreNilpotentFactors {
    pub fn core_size(&self) -> usize {
        self.core.rows()
    }

    pub fn reconstruct(&self) -> Matrix {
        &(&self.p * &Matrix::block_diag(&self.core, &self.nilpotent)) * &self.p_inv
    }
}

/// `P = [basis of R(M^k) | basis of N(M^k)]`, both orthonormal.
fn core_nilpotent_basis(m: &Matrix, scale: f64, tol: &Tolerance) -> Result<(Matrix, usize, usize)> {
    let (k, c) = rank_profile(m, scale, tol)?;
    let n = m.rows();
    let mk = m.pow(k);
    let f = svd(&mk, tol);
    let range = f.k.block(0, 0, n, c);
    let null = f.l.block(0, c, n, n - c);
    Ok((Matrix::hstack(&[&range, &null]), k, c))
}

pub fn core_nilpotent(m: &Matrix, tol: &Tolerance) -> Result<CoreNilpotentFactors> {
    core_nilpotent_scaled(m, 0.0, tol)
}

pub(crate) fn core_nilpotent_scaled(
    m: &Matrix,
    scale: f64,
    tol: &Tolerance,
) -> Result<CoreNilpotentFactors> {
    let (p, k, c) = core_nilpotent_basis(m, scale, tol)?;
    let n = m.rows();
    let p_inv = p.inverse()?;
    let t = &(&p_inv * m) * &p;
    let s = p.singular_values();
    let cond_p = match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    };
    Ok(CoreNilpotentFactors {
        core: t.block(0, 0, c, c),
        nilpotent: t.block(c, c, n - c, n - c),
        p,
        p_inv,
        index: k,
        cond_p,
    })
}

/// Simultaneous block form of a weighted pair:
/// `A = S · diag(A1, A2) · R⁻¹`, `W = R · diag(W1, W2) · S⁻¹`
/// with `A1`, `W1` nonsingular and `A2 W2`, `W2 A2` nilpotent.
#[derive(Debug, Clone)]
pub struct PairCoreNilpotent {
    pub s: Matrix,
    pub s_inv: Matrix,
    pub r: Matrix,
    pub r_inv: Matrix,
    pub a1: Matrix,
    pub a2: Matrix,
    pub w1: Matrix,
    pub w2: Matrix,
    pub index: usize,
}

impl PairCoreNilpotent {
    pub fn core_size(&self) -> usize {
        self.a1.rows()
    }
}

pub fn pair_core_nilpotent(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<PairCoreNilpotent> {
    check_pair("pair_core_nilpotent", a, w)?;
    let aw = a * w;
    let wa = w * a;
    let scale = product_scale(a, w);
    let k = rank_profile(&aw, scale, tol)?.0.max(rank_profile(&wa, scale, tol)?.0);
    let basis = |m: &Matrix| {
        let n = m.rows();
        let f = svd_scaled(&m.pow(k), scale.powi(k as i32), tol);
        (Matrix::hstack(&[&f.k.block(0, 0, n, f.rank), &f.null_basis()]), f.rank)
    };
    let (s, c_aw) = basis(&aw);
    let (r, c_wa) = basis(&wa);
    if c_aw != c_wa {
        return Err(WinvError::Postcondition {
            op: "pair_core_nilpotent",
            detail: format!("r((AW)^{k}) = {c_aw} but r((WA)^{k}) = {c_wa}"),
        });
    }
    let c = c_aw;
    let (m, n) = a.shape();
    let s_inv = s.inverse()?;
    let r_inv = r.inverse()?;
    let a_blk = &(&s_inv * a) * &r;
    let w_blk = &(&r_inv * w) * &s;
    Ok(PairCoreNilpotent {
        a1: a_blk.block(0, 0, c, c),
        a2: a_blk.block(c, c, m - c, n - c),
        w1: w_blk.block(0, 0, c, c),
        w2: w_blk.block(c, c, n - c, m - c),
        s,
        s_inv,
        r,
        r_inv,
        index: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, e: &[f64]) -> Matrix {
        Matrix::from_real(rows, cols, e).unwrap()
    }

    fn sample(rows: usize, cols: usize, seed: u64) -> Matrix {
        // deterministic, non-degenerate filler
        let e: Vec<C64> = (0..rows * cols)
            .map(|i| {
                let t = (i as f64 + 1.0) * 0.731 + seed as f64;
                C64::new(t.sin() * 1.3, (2.0 * t).cos())
            })
            .collect();
        Matrix::from_row_slice(rows, cols, &e).unwrap()
    }

    #[test]
    fn svd_of_identity() {
        let f = svd(&Matrix::identity(3), &Tolerance::default());
        assert_eq!(f.sigma, vec![1.0; 3]);
        assert_eq!(f.rank, 3);
        assert!(f.reconstruct().rel_diff(&Matrix::identity(3)) < 1e-15);
    }

    #[test]
    fn svd_of_rank_one_row() {
        // M*M = [[1,1],[1,1]] has eigenvalues 2 and 0.
        let f = svd(&real(2, 2, &[1.0, 1.0, 0.0, 0.0]), &Tolerance::default());
        assert!((f.sigma[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!(f.sigma[1].abs() < 1e-15);
        assert_eq!(f.rank, 1);
    }

    #[test]
    fn svd_reconstructs_rank_one_complex_products() {
        let tol = Tolerance::default();
        for seed in 1000..1040 {
            let spec = crate::gen::InstanceSpec::new(7, 5, 1, 1, seed);
            let (a, w) = crate::gen::cn_construct(&spec).unwrap();
            let aw = &a * &w;
            let f = svd(&aw, &tol);
            assert!(f.reconstruct().rel_diff(&aw) < 1e-13, "seed {seed}");
            assert_eq!(svd_scaled(&aw, crate::matrix::product_scale(&a, &w), &tol).rank, 1);
        }
    }

    #[test]
    fn svd_factors_are_unitary_and_reconstruct() {
        let tol = Tolerance::default();
        for (m, n) in [(6, 4), (4, 6), (5, 5), (1, 3)] {
            let a = sample(m, n, 3);
            let f = svd(&a, &tol);
            assert_eq!(f.k.shape(), (m, m));
            assert_eq!(f.l.shape(), (n, n));
            let kk = &f.k.conj_transpose() * &f.k;
            let ll = &f.l.conj_transpose() * &f.l;
            assert!(kk.rel_diff(&Matrix::identity(m)) < 1e-13);
            assert!(ll.rel_diff(&Matrix::identity(n)) < 1e-13);
            let err = (&a - &f.reconstruct()).fro_norm() / a.fro_norm();
            assert!(err <= 1e-12, "reconstruction error {err}");
            assert!(f.sigma.windows(2).all(|p| p[0] >= p[1]));
        }
    }

    #[test]
    fn svd_completion_of_rank_deficient_tall_matrix() {
        let tol = Tolerance::default();
        let a = &sample(6, 2, 1) * &sample(2, 4, 2);
        let f = svd(&a, &tol);
        assert_eq!(f.rank, 2);
        assert!((&a * &f.null_basis()).fro_norm() < 1e-12);
        let kk = &f.k.conj_transpose() * &f.k;
        assert!(kk.rel_diff(&Matrix::identity(6)) < 1e-13);
    }

    #[test]
    fn index_examples() {
        let tol = Tolerance::default();
        assert_eq!(index_of(&sample(4, 4, 0), &tol).unwrap(), 0);
        assert_eq!(index_of(&real(2, 2, &[0.0, 3.0, 0.0, 1.0]), &tol).unwrap(), 1);
        assert_eq!(index_of(&real(2, 2, &[0.0, 1.0, 0.0, 0.0]), &tol).unwrap(), 2);
        assert_eq!(index_of(&Matrix::zeros(3, 3), &tol).unwrap(), 1);
        assert!(index_of(&Matrix::zeros(2, 3), &tol).is_err());
    }

    #[test]
    fn weighted_index_examples() {
        let tol = Tolerance::default();
        let a = real(2, 1, &[2.0, 1.0]);
        let w = real(1, 2, &[0.0, 1.0]);
        assert_eq!(weighted_index(&a, &w, &tol).unwrap(), 1);
        let a = sample(3, 3, 5);
        assert_eq!(weighted_index(&a, &Matrix::identity(3), &tol).unwrap(), 0);
        assert!(weighted_index(&a, &Matrix::identity(2), &tol).is_err());
    }

    #[test]
    fn core_nilpotent_of_idempotent_row() {
        let tol = Tolerance::default();
        let m = real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let f = core_nilpotent(&m, &tol).unwrap();
        assert_eq!(f.index, 1);
        assert_eq!(f.core_size(), 1);
        assert!((f.core.get(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(f.nilpotent.fro_norm() < 1e-14);
        assert!(f.reconstruct().rel_diff(&m) < 1e-14);
    }

    #[test]
    fn core_nilpotent_extremes() {
        let tol = Tolerance::default();
        let inv = sample(3, 3, 7);
        let f = core_nilpotent(&inv, &tol).unwrap();
        assert_eq!((f.index, f.core_size(), f.nilpotent.rows()), (0, 3, 0));
        assert!(f.reconstruct().rel_diff(&inv) < 1e-13);

        let nil = real(3, 3, &[0.0, 1.0, 2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        let f = core_nilpotent(&nil, &tol).unwrap();
        assert_eq!((f.index, f.core_size()), (3, 0));
        assert!(f.nilpotent.pow(3).fro_norm() < 1e-14);
        assert!(f.reconstruct().rel_diff(&nil) < 1e-14);
    }

    #[test]
    fn pair_decomposition_blocks() {
        let tol = Tolerance::default();
        let a = real(2, 1, &[2.0, 1.0]);
        let w = real(1, 2, &[0.0, 1.0]);
        let d = pair_core_nilpotent(&a, &w, &tol).unwrap();
        assert_eq!(d.core_size(), 1);
        let a_back = &(&d.s * &Matrix::block_diag(&d.a1, &d.a2)) * &d.r_inv;
        let w_back = &(&d.r * &Matrix::block_diag(&d.w1, &d.w2)) * &d.s_inv;
        assert!(a_back.rel_diff(&a) < 1e-14);
        assert!(w_back.rel_diff(&w) < 1e-14);
    }
}
