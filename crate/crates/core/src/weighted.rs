//! Existence and representations of weighted {1'}, {1',2',3'} and {1',2',4'} inverses.

use serde::Serialize;

use crate::classic::{pinv_scaled, require_existence, InverseFamily};
use crate::error::{Result, WinvError};
use crate::matrix::{
    check_pair, numerical_rank, numerical_rank_scaled, product_scale, spectral_norm, waw_scale, Matrix,
    Tolerance,
};
use crate::oracle::InverseSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExistenceVerdict {
    pub rank_a: usize,
    pub rank_waw: usize,
    pub rank_aw: usize,
    pub rank_wa: usize,
    pub exists_w1: bool,
    pub exists_w123: bool,
}

/// Rank test for the existence of weighted {1'} and {1',2',3'} inverses.
/// The two criteria are equivalent; if the numerical ranks disagree the
/// tolerance is reported as unsuitable.
pub fn existence(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<ExistenceVerdict> {
    check_pair("existence", a, w)?;
    let aw = a * w;
    let wa = w * a;
    let pw = product_scale(a, w);
    let rank_a = numerical_rank(a, tol);
    let rank_aw = numerical_rank_scaled(&aw, pw, tol);
    let rank_wa = numerical_rank_scaled(&wa, pw, tol);
    let rank_waw = numerical_rank_scaled(&(&wa * w), waw_scale(a, w), tol);
    let exists_w123 = rank_waw == rank_a;
    let exists_w1 = rank_aw == rank_a && rank_wa == rank_a;
    if exists_w1 != exists_w123 {
        return Err(WinvError::InconsistentRanks {
            rank_a,
            rank_aw,
            rank_wa,
            rank_waw,
        });
    }
    Ok(ExistenceVerdict {
        rank_a,
        rank_waw,
        rank_aw,
        rank_wa,
        exists_w1,
        exists_w123,
    })
}

fn require(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<ExistenceVerdict> {
    let v = existence(a, w, tol)?;
    if !v.exists_w123 {
        return Err(WinvError::ExistenceFailure {
            rank_a: v.rank_a,
            rank_waw: v.rank_waw,
        });
    }
    Ok(v)
}

/// `A{1'} = { (AW)†A(WA)† + Y − (AW)†AW Y WA(WA)† : Y ∈ C^{m×n} }`.
pub fn w1_family(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<InverseFamily> {
    require(a, w, tol)?;
    let aw = a * w;
    let wa = w * a;
    let pw = product_scale(a, w);
    let aw_p = pinv_scaled(&aw, pw, tol);
    let wa_p = pinv_scaled(&wa, pw, tol);
    let base = &(&aw_p * a) * &wa_p;
    let left = &aw_p * &aw;
    let right = &wa * &wa_p;
    let b = base.clone();
    Ok(InverseFamily::new(InverseSet::W1, base, a.shape(), move |y| {
        &(&b + y) - &(&(&left * y) * &right)
    }))
}

/// `(WAW)†`, a weighted {1',2',3'} inverse.
pub fn w123_particular(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    require_existence("w123_particular", a, w, tol)?;
    Ok(pinv_scaled(&(&(w * a) * w), waw_scale(a, w), tol))
}

/// `A{1',2',3'} = { G† + (I_m − G†G) U G† : U ∈ C^{m×m} }` with `G = WAW`.
pub fn w123_family(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<InverseFamily> {
    require_existence("w123_family", a, w, tol)?;
    let g = &(w * a) * w;
    let gp = pinv_scaled(&g, waw_scale(a, w), tol);
    let proj = &Matrix::identity(a.rows()) - &(&gp * &g);
    Ok(InverseFamily::affine(InverseSet::W123, gp.clone(), proj, gp))
}

/// `A{1',2',4'} = { G† + G† V (I_n − GG†) : V ∈ C^{n×n} }` with `G = WAW`.
pub fn w124_family(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<InverseFamily> {
    require_existence("w124_family", a, w, tol)?;
    let g = &(w * a) * w;
    let gp = pinv_scaled(&g, waw_scale(a, w), tol);
    let proj = &Matrix::identity(a.cols()) - &(&g * &gp);
    Ok(InverseFamily::affine(InverseSet::W124, gp.clone(), gp, proj))
}

fn check_param_rank(
    what: &'static str,
    m: &Matrix,
    scale: f64,
    expected: usize,
    tol: &Tolerance,
) -> Result<()> {
    let rank = numerical_rank_scaled(m, scale, tol);
    if rank != expected {
        return Err(WinvError::RankDeficientParameter {
            what,
            rank,
            expected,
        });
    }
    Ok(())
}

/// `Y (WAWY)†` for `Y ∈ C^{m×r}` with `r(WAWY) = r(Y) = r(A) = r`.
pub fn w123_fullrank(a: &Matrix, w: &Matrix, y: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let v = require(a, w, tol)?;
    let r = v.rank_a;
    if y.shape() != (a.rows(), r) {
        return Err(WinvError::shape(
            "w123_fullrank",
            format!("Y must be {}x{r}, got {}x{}", a.rows(), y.rows(), y.cols()),
        ));
    }
    check_param_rank("r(Y) must equal r(A)", y, 0.0, r, tol)?;
    let wawy = &(&(w * a) * w) * y;
    let scale = waw_scale(a, w) * spectral_norm(y);
    check_param_rank("r(WAWY) must equal r(A)", &wawy, scale, r, tol)?;
    Ok(y * &pinv_scaled(&wawy, scale, tol))
}

/// `(YWAW)† Y` for `Y ∈ C^{r×n}` with `r(YWAW) = r(Y) = r(A) = r`.
pub fn w124_fullrank(a: &Matrix, w: &Matrix, y: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let v = require(a, w, tol)?;
    let r = v.rank_a;
    if y.shape() != (r, a.cols()) {
        return Err(WinvError::shape(
            "w124_fullrank",
            format!("Y must be {r}x{}, got {}x{}", a.cols(), y.rows(), y.cols()),
        ));
    }
    check_param_rank("r(Y) must equal r(A)", y, 0.0, r, tol)?;
    let ywaw = &(&(y * w) * a) * w;
    let scale = waw_scale(a, w) * spectral_norm(y);
    check_param_rank("r(YWAW) must equal r(A)", &ywaw, scale, r, tol)?;
    Ok(&pinv_scaled(&ywaw, scale, tol) * y)
}
