//! Moore–Penrose, Drazin, group, W-weighted Drazin and weighted core inverses,
//! and parametrized inverse families.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::decomp::{core_nilpotent_scaled, index_of, weighted_index};
use crate::error::{Result, WinvError};
use crate::matrix::{
    check_pair, check_shape, numerical_rank, numerical_rank_scaled, product_scale, waw_scale, Matrix,
    Tolerance, C64,
};
use crate::oracle::{check_equation, EquationId, InverseSet};

type Generator = Arc<dyn Fn(&Matrix) -> Matrix + Send + Sync>;

/// A set of inverses parametrized by a free matrix. `generator(0) = base`.
#[derive(Clone)]
pub struct InverseFamily {
    set_name: InverseSet,
    base: Matrix,
    param_shape: (usize, usize),
    generator: Generator,
}

impl InverseFamily {
    pub(crate) fn new(
        set_name: InverseSet,
        base: Matrix,
        param_shape: (usize, usize),
        generator: impl Fn(&Matrix) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        InverseFamily {
            set_name,
            base,
            param_shape,
            generator: Arc::new(generator),
        }
    }

    /// `base + L · P · R`.
    pub(crate) fn affine(set_name: InverseSet, base: Matrix, left: Matrix, right: Matrix) -> Self {
        let param_shape = (left.cols(), right.rows());
        let b = base.clone();
        InverseFamily::new(set_name, base, param_shape, move |p| &b + &(&(&left * p) * &right))
    }

    pub fn set_name(&self) -> InverseSet {
        self.set_name
    }

    pub fn base(&self) -> &Matrix {
        &self.base
    }

    pub fn param_shape(&self) -> (usize, usize) {
        self.param_shape
    }

    /// The member for free parameter `p`.
    pub fn member(&self, p: &Matrix) -> Result<Matrix> {
        check_shape("InverseFamily::member", "parameter", p, self.param_shape)?;
        Ok((self.generator)(p))
    }
}

impl fmt::Debug for InverseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InverseFamily")
            .field("set_name", &self.set_name)
            .field("param_shape", &self.param_shape)
            .field("base", &self.base)
            .finish_non_exhaustive()
    }
}

/// Moore–Penrose inverse from the SVD, dropping singular values at or below
/// the rank cutoff.
pub fn moore_penrose(m: &Matrix, tol: &Tolerance) -> Matrix {
    pinv_scaled(m, 0.0, tol)
}

/// Moore–Penrose inverse with cutoff `rank_rel · max(σ_max, scale)`.
pub(crate) fn pinv_scaled(m: &Matrix, scale: f64, tol: &Tolerance) -> Matrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Matrix::zeros(cols, rows);
    }
    let (u, s, v) = m.full_svd();
    let smax = s.iter().copied().fold(scale, f64::max);
    let cutoff = tol.rank_rel_for(rows, cols) * smax;
    let mut out = DMatrix::<C64>::zeros(cols, rows);
    for (i, &sigma) in s.iter().enumerate() {
        if sigma > cutoff && sigma > 0.0 {
            out += v.column(i) * u.column(i).adjoint() * C64::new(1.0 / sigma, 0.0);
        }
    }
    Matrix::wrap(out)
}

/// `M{1,2,3} = { M† + (I − M†M) U M† }`.
pub fn one23_family(m: &Matrix, tol: &Tolerance) -> InverseFamily {
    let mp = moore_penrose(m, tol);
    let proj = &Matrix::identity(m.cols()) - &(&mp * m);
    InverseFamily::affine(InverseSet::Classic123, mp.clone(), proj, mp)
}

fn drazin_with_index(m: &Matrix, scale: f64, tol: &Tolerance) -> Result<(Matrix, usize)> {
    if !m.is_square() {
        return Err(WinvError::shape(
            "drazin",
            format!("matrix must be square, got {}x{}", m.rows(), m.cols()),
        ));
    }
    let f = core_nilpotent_scaled(m, scale, tol)?;
    let (n, c) = (m.rows(), f.core_size());
    if c == 0 {
        return Ok((Matrix::zeros(n, n), f.index));
    }
    let core_inv = f.core.inverse()?;
    let left = f.p.block(0, 0, n, c);
    let right = f.p_inv.block(0, 0, c, n);
    Ok((&(&left * &core_inv) * &right, f.index))
}

/// Drazin inverse `P · diag(C⁻¹, 0) · P⁻¹` from the core-nilpotent decomposition.
pub fn drazin(m: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    Ok(drazin_with_index(m, 0.0, tol)?.0)
}

/// Drazin inverse of a computed product whose factor norms multiply to `scale`.
pub(crate) fn drazin_scaled(m: &Matrix, scale: f64, tol: &Tolerance) -> Result<Matrix> {
    Ok(drazin_with_index(m, scale, tol)?.0)
}

/// Group inverse; requires `ind(M) ≤ 1`.
pub fn group_inverse(m: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let index = index_of(m, tol)?;
    if index > 1 {
        return Err(WinvError::IndexTooLarge { index, max: 1 });
    }
    drazin(m, tol)
}

/// W-weighted Drazin inverse `A[(WA)^D]²`, cross-checked against `[(AW)^D]²A`
/// and its three defining equations.
pub fn w_drazin(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    check_pair("w_drazin", a, w)?;
    let scale = product_scale(a, w);
    let (wa_d, k_wa) = drazin_with_index(&(w * a), scale, tol)?;
    let (aw_d, k_aw) = drazin_with_index(&(a * w), scale, tol)?;
    let x = &(a * &wa_d) * &wa_d;
    let alt = &(&aw_d * &aw_d) * a;
    let cross = x.rel_diff(&alt);
    if cross > tol.eq_rel() {
        return Err(WinvError::Postcondition {
            op: "w_drazin",
            detail: format!("A[(WA)^D]^2 and [(AW)^D]^2 A differ by {cross:e}"),
        });
    }
    let k = k_wa.max(k_aw);
    for eq in [EquationId::W1k, EquationId::W2, EquationId::W5] {
        let (r, ok) = check_equation(a, w, &x, k, eq, tol)?;
        if !ok {
            return Err(WinvError::Postcondition {
                op: "w_drazin",
                detail: format!("equation {eq} has residual {r:e}"),
            });
        }
    }
    Ok(x)
}

pub(crate) fn require_existence(op: &'static str, a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<()> {
    check_pair(op, a, w)?;
    let rank_a = numerical_rank(a, tol);
    let rank_waw = numerical_rank_scaled(&(&(w * a) * w), waw_scale(a, w), tol);
    if rank_a != rank_waw {
        return Err(WinvError::ExistenceFailure { rank_a, rank_waw });
    }
    Ok(())
}

/// Weighted core inverse `A (WA)^# W (WAW)†`; requires weighted index at most 1
/// and `r(WAW) = r(A)`.
pub fn weighted_core(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    require_existence("weighted_core", a, w, tol)?;
    let index = weighted_index(a, w, tol)?;
    if index > 1 {
        return Err(WinvError::IndexTooLarge { index, max: 1 });
    }
    let wa = w * a;
    let group = drazin_scaled(&wa, product_scale(a, w), tol)?;
    let z = pinv_scaled(&(&wa * w), waw_scale(a, w), tol);
    Ok(&(&(a * &group) * w) * &z)
}
