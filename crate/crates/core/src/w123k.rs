//! Weighted {1',2',3',1ᵏ'} and {1',2',4',ᵏ1'} inverses: particular elements,
//! full families, canonical forms, uniqueness, and the constructions built on them.

use serde::Serialize;

use crate::classic::{drazin_scaled, pinv_scaled, require_existence, w_drazin, InverseFamily};
use crate::decomp::{pair_core_nilpotent, rank_profile, svd, svd_scaled, weighted_index};
use crate::error::{Result, WinvError};
use crate::matrix::{
    check_pair, check_shape, numerical_rank, numerical_rank_scaled, product_scale, waw_scale, Matrix,
    Tolerance,
};
use crate::oracle::{check_membership, InverseSet, VerificationReport};

/// `k` when given (rejected below the weighted index), otherwise the weighted index.
pub fn resolve_index(a: &Matrix, w: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<usize> {
    let index = weighted_index(a, w, tol)?;
    match k {
        None => Ok(index),
        Some(k) if k < index => Err(WinvError::IndexTooSmall { k, index }),
        Some(k) => Ok(k),
    }
}

struct Pieces {
    g: Matrix,
    gp: Matrix,
    d: Matrix,
}

fn pieces(op: &'static str, a: &Matrix, w: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<Pieces> {
    require_existence(op, a, w, tol)?;
    resolve_index(a, w, k, tol)?;
    let g = &(w * a) * w;
    let gp = pinv_scaled(&g, waw_scale(a, w), tol);
    let d = w_drazin(a, w, tol)?;
    Ok(Pieces { g, gp, d })
}

/// `(WAW)† + (I − (WAW)†WAW) A^{D,W} WAW (WAW)†`.
pub fn w1231k_particular(a: &Matrix, w: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<Matrix> {
    let Pieces { g, gp, d } = pieces("w1231k_particular", a, w, k, tol)?;
    let proj = &Matrix::identity(a.rows()) - &(&gp * &g);
    Ok(&gp + &(&(&(&proj * &d) * &g) * &gp))
}

/// Lifts a weighted {1',2',3'} inverse `X` to `X + (I − XWAW) A^{D,W} WAW X`.
pub fn w1231k_from(a: &Matrix, w: &Matrix, x123: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<Matrix> {
    require_existence("w1231k_from", a, w, tol)?;
    let k = resolve_index(a, w, k, tol)?;
    check_membership(a, w, x123, Some(k), InverseSet::W123, tol)?.into_result()?;
    let g = &(w * a) * w;
    let d = w_drazin(a, w, tol)?;
    let proj = &Matrix::identity(a.rows()) - &(x123 * &g);
    Ok(x123 + &(&(&(&proj * &d) * &g) * x123))
}

/// All weighted {1',2',3',1ᵏ'} inverses:
/// `X₀ + (I − G†G) U (G† − G†G A^{D,W} G G†)`, `U ∈ C^{m×m}`, `G = WAW`.
pub fn w1231k_family(a: &Matrix, w: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<InverseFamily> {
    let Pieces { g, gp, d } = pieces("w1231k_family", a, w, k, tol)?;
    let gpg = &gp * &g;
    let proj = &Matrix::identity(a.rows()) - &gpg;
    let base = &gp + &(&(&(&proj * &d) * &g) * &gp);
    let right = &gp - &(&(&(&gpg * &d) * &g) * &gp);
    Ok(InverseFamily::affine(InverseSet::W1231k, base, proj, right))
}

/// `(WAW)† + (WAW)†WAW A^{D,W} (I − WAW (WAW)†)`.
pub fn w1241k_particular(a: &Matrix, w: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<Matrix> {
    let Pieces { g, gp, d } = pieces("w1241k_particular", a, w, k, tol)?;
    let proj = &Matrix::identity(a.cols()) - &(&g * &gp);
    Ok(&gp + &(&(&(&gp * &g) * &d) * &proj))
}

/// Lifts a weighted {1',2',4'} inverse `X` to `X + X WAW A^{D,W} (I − WAW X)`.
pub fn w1241k_from(a: &Matrix, w: &Matrix, x124: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<Matrix> {
    require_existence("w1241k_from", a, w, tol)?;
    let k = resolve_index(a, w, k, tol)?;
    check_membership(a, w, x124, Some(k), InverseSet::W124, tol)?.into_result()?;
    let g = &(w * a) * w;
    let d = w_drazin(a, w, tol)?;
    let proj = &Matrix::identity(a.cols()) - &(&g * x124);
    Ok(x124 + &(&(&(x124 * &g) * &d) * &proj))
}

/// All weighted {1',2',4',ᵏ1'} inverses:
/// `X₀ + (G† − G†G A^{D,W} G G†) V (I_n − GG†)`, `V ∈ C^{n×n}`.
pub fn w1241k_family(a: &Matrix, w: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<InverseFamily> {
    let Pieces { g, gp, d } = pieces("w1241k_family", a, w, k, tol)?;
    let ggp = &g * &gp;
    let proj = &Matrix::identity(a.cols()) - &ggp;
    let base = &gp + &(&(&(&gp * &g) * &d) * &proj);
    let left = &gp - &(&(&(&(&gp * &g) * &d) * &g) * &gp);
    Ok(InverseFamily::affine(InverseSet::W124k1, base, left, proj))
}

/// Factors behind the singular-value form of a {1',2',3',1ᵏ'} inverse.
///
/// `A = K diag(Σ₁, 0) L*`, `W = M diag(Σ₂, 0) N*`, `N*K = [K1 K2; K3 K4]`,
/// `L*M = [M1 M2; M3 M4]`, `B = Σ₂K₁Σ₁M₁Σ₂`, so `WAW = M diag(B, 0) N*`.
#[derive(Debug, Clone)]
pub struct SvdCanonicalData {
    pub k: Matrix,
    pub l: Matrix,
    pub m: Matrix,
    pub n: Matrix,
    pub sigma1: Matrix,
    pub sigma2: Matrix,
    pub k1: Matrix,
    pub k2: Matrix,
    pub k3: Matrix,
    pub k4: Matrix,
    pub m1: Matrix,
    pub m2: Matrix,
    pub m3: Matrix,
    pub m4: Matrix,
    pub b: Matrix,
    pub u1: Matrix,
    pub u3: Matrix,
}

impl SvdCanonicalData {
    /// `r(A)`.
    pub fn rank_a(&self) -> usize {
        self.sigma1.rows()
    }

    /// `s = r(W)`, which fixes the shapes `U1: s×s` and `U3: (m−s)×s`.
    pub fn rank_w(&self) -> usize {
        self.sigma2.rows()
    }
}

/// Shapes `(U1, U3)` expected by [`svd_canonical`].
pub fn svd_canonical_param_shapes(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<((usize, usize), (usize, usize))> {
    check_pair("svd_canonical", a, w)?;
    let s = numerical_rank(w, tol);
    Ok(((s, s), (a.rows() - s, s)))
}

/// Member of A{1',2',3',1ᵏ'} assembled in the singular bases of `A` and `W`:
///
/// ```text
/// X = N [ B† + (I−B†B)(Y + U1 B†(I−BY))   0 ] M*
///       [ K3 D B B† + U3 B†(I−BY)         0 ]
/// ```
///
/// with `T = Σ₂K₁Σ₁M₁`, `D = Σ₁M₁(T^D)²` and `Y = K₁ D B B†`.
/// `U1 = U3 = 0` gives the particular element.
pub fn svd_canonical(
    a: &Matrix,
    w: &Matrix,
    k: Option<usize>,
    u1: &Matrix,
    u3: &Matrix,
    tol: &Tolerance,
) -> Result<(Matrix, SvdCanonicalData)> {
    require_existence("svd_canonical", a, w, tol)?;
    resolve_index(a, w, k, tol)?;
    let (m, n) = a.shape();
    let fa = svd(a, tol);
    let fw = svd(w, tol);
    let (r, s) = (fa.rank, fw.rank);
    check_shape("svd_canonical", "U1", u1, (s, s))?;
    check_shape("svd_canonical", "U3", u3, (m - s, s))?;

    let sigma1 = fa.sigma1();
    let sigma2 = fw.sigma1();
    let (kf, lf) = (fa.k, fa.l);
    let (mf, nf) = (fw.k, fw.l);
    let nk = &nf.conj_transpose() * &kf;
    let lm = &lf.conj_transpose() * &mf;
    let (k1, k2, k3, k4) = (
        nk.block(0, 0, s, r),
        nk.block(0, r, s, m - r),
        nk.block(s, 0, m - s, r),
        nk.block(s, r, m - s, m - r),
    );
    let (m1, m2, m3, m4) = (
        lm.block(0, 0, r, s),
        lm.block(0, s, r, n - s),
        lm.block(r, 0, n - r, s),
        lm.block(r, s, n - r, n - s),
    );
    let t = &(&(&sigma2 * &k1) * &sigma1) * &m1;
    let b = &t * &sigma2;
    let top_sigma = |x: &Matrix| if x.is_empty() { 0.0 } else { x.get(0, 0).re };
    let t_scale = top_sigma(&sigma2) * top_sigma(&sigma1);
    let bp = pinv_scaled(&b, t_scale * top_sigma(&sigma2), tol);
    let t_d = if s == 0 { Matrix::zeros(0, 0) } else { drazin_scaled(&t, t_scale, tol)? };
    let d11 = &(&sigma1 * &m1) * &(&t_d * &t_d);
    let bbp = &b * &bp;
    let y = &(&k1 * &d11) * &bbp;
    let eye_s = Matrix::identity(s);
    let left_proj = &eye_s - &(&bp * &b);
    let tail = &bp * &(&eye_s - &(&b * &y));
    let top = &bp + &(&left_proj * &(&y + &(u1 * &tail)));
    let bottom = &(&(&k3 * &d11) * &bbp) + &(u3 * &tail);
    let middle = Matrix::from_blocks(
        &top,
        &Matrix::zeros(s, n - s),
        &bottom,
        &Matrix::zeros(m - s, n - s),
    );
    let x = &(&nf * &middle) * &mf.conj_transpose();
    let data = SvdCanonicalData {
        k: kf,
        l: lf,
        m: mf,
        n: nf,
        sigma1,
        sigma2,
        k1,
        k2,
        k3,
        k4,
        m1,
        m2,
        m3,
        m4,
        b,
        u1: u1.clone(),
        u3: u3.clone(),
    };
    Ok((x, data))
}

/// Factors behind the core-nilpotent form of a {1',2',3',1ᵏ'} inverse.
///
/// `A = S diag(A1, A2) R⁻¹`, `W = R diag(W1, W2) S⁻¹`, `WAW = P diag(B1, 0) Q*`,
/// `Q*S = [Q1 Q2; Q3 Q4]`, `R⁻¹P = [R1 R2; R3 R4]`, `Q*UQ = [U1 U2; U3 U4]`.
#[derive(Debug, Clone)]
pub struct CnCanonicalData {
    pub r: Matrix,
    pub s: Matrix,
    pub a1: Matrix,
    pub a2: Matrix,
    pub w1: Matrix,
    pub w2: Matrix,
    pub p: Matrix,
    pub q: Matrix,
    pub b1: Matrix,
    pub q1: Matrix,
    pub q2: Matrix,
    pub q3: Matrix,
    pub q4: Matrix,
    pub r1: Matrix,
    pub r2: Matrix,
    pub r3: Matrix,
    pub r4: Matrix,
    pub u1: Matrix,
    pub u2: Matrix,
    pub u3: Matrix,
    pub u4: Matrix,
    /// `U3 (B1⁻¹ − Q1 (W1A1W1)⁻¹ R1)`.
    pub e: Matrix,
}

/// Member of A{1',2',3',1ᵏ'} in core-nilpotent coordinates:
/// `X = Q [B1⁻¹ 0; Q3 Δ R1 + E 0] P*` with `Δ = (W1A1W1)⁻¹`.
/// Equals `w1231k_family(..).member(U)`.
pub fn cn_canonical(a: &Matrix, w: &Matrix, u: &Matrix, tol: &Tolerance) -> Result<(Matrix, CnCanonicalData)> {
    require_existence("cn_canonical", a, w, tol)?;
    let (m, n) = a.shape();
    check_shape("cn_canonical", "U", u, (m, m))?;
    let pair = pair_core_nilpotent(a, w, tol)?;
    let c = pair.core_size();
    let g = &(w * a) * w;
    let fg = svd_scaled(&g, waw_scale(a, w), tol);
    let r = fg.rank;
    let (p, q) = (fg.k.clone(), fg.l.clone());
    let b1 = fg.sigma1();
    let b1_inv = b1.inverse()?;
    let delta = if c == 0 {
        Matrix::zeros(0, 0)
    } else {
        (&(&pair.w1 * &pair.a1) * &pair.w1).inverse()?
    };
    let qs = &q.conj_transpose() * &pair.s;
    let rp = &pair.r_inv * &p;
    let (q1, q2, q3, q4) = (
        qs.block(0, 0, r, c),
        qs.block(0, c, r, m - c),
        qs.block(r, 0, m - r, c),
        qs.block(r, c, m - r, m - c),
    );
    let (r1, r2, r3, r4) = (
        rp.block(0, 0, c, r),
        rp.block(0, r, c, n - r),
        rp.block(c, 0, n - c, r),
        rp.block(c, r, n - c, n - r),
    );
    let uq = &(&q.conj_transpose() * u) * &q;
    let (u1, u2, u3, u4) = (
        uq.block(0, 0, r, r),
        uq.block(0, r, r, m - r),
        uq.block(r, 0, m - r, r),
        uq.block(r, r, m - r, m - r),
    );
    let q1dr1 = &(&q1 * &delta) * &r1;
    let e = &u3 * &(&b1_inv - &q1dr1);
    let lower = &(&(&q3 * &delta) * &r1) + &e;
    let middle = Matrix::from_blocks(
        &b1_inv,
        &Matrix::zeros(r, n - r),
        &lower,
        &Matrix::zeros(m - r, n - r),
    );
    let x = &(&q * &middle) * &p.conj_transpose();
    let data = CnCanonicalData {
        r: pair.r,
        s: pair.s,
        a1: pair.a1,
        a2: pair.a2,
        w1: pair.w1,
        w2: pair.w2,
        p,
        q,
        b1,
        q1,
        q2,
        q3,
        q4,
        r1,
        r2,
        r3,
        r4,
        u1,
        u2,
        u3,
        u4,
        e,
    };
    Ok((x, data))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessClass {
    pub k: usize,
    pub unique: bool,
}

/// The {1',2',3',1ᵏ'} inverse is unique exactly when the weighted index is at most 1.
pub fn uniqueness_class(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<UniquenessClass> {
    require_existence("uniqueness_class", a, w, tol)?;
    let k = weighted_index(a, w, tol)?;
    Ok(UniquenessClass { k, unique: k <= 1 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductKind {
    Invertible,
    Nilpotent,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseClass {
    pub aw: ProductKind,
    pub wa: ProductKind,
    /// A{1',2',3'} = A{1',2',3',1ᵏ'}.
    pub sets_123_collapse: bool,
    /// A{1',2',4'} = A{1',2',4',ᵏ1'}.
    pub sets_124_collapse: bool,
}

fn product_kind(m: &Matrix, scale: f64, tol: &Tolerance) -> Result<ProductKind> {
    let n = m.rows();
    if numerical_rank_scaled(m, scale, tol) == n {
        return Ok(ProductKind::Invertible);
    }
    if rank_profile(m, scale, tol)?.1 == 0 {
        Ok(ProductKind::Nilpotent)
    } else {
        Ok(ProductKind::Neither)
    }
}

/// The sets collapse when `AW` (resp. `WA`) is invertible or nilpotent.
pub fn collapse_classify(a: &Matrix, w: &Matrix, tol: &Tolerance) -> Result<CollapseClass> {
    check_pair("collapse_classify", a, w)?;
    let scale = product_scale(a, w);
    let aw = product_kind(&(a * w), scale, tol)?;
    let wa = product_kind(&(w * a), scale, tol)?;
    Ok(CollapseClass {
        aw,
        wa,
        sets_123_collapse: aw != ProductKind::Neither,
        sets_124_collapse: wa != ProductKind::Neither,
    })
}

#[derive(Clone, Debug)]
pub struct Perturbation {
    pub b: Matrix,
    /// Membership of `X` in B{1',2',3',1ᵏ'} at the same `k`.
    pub report: VerificationReport,
}

/// `B = A + Δ` sharing the {1',2',3',1ᵏ'} inverse `X`.
///
/// Square pairs use `Δ = (AW)^{k+1}(XW)^k(I − WXWA)`; rectangular pairs use
/// `Δ = (AW)^k A (WX)^k (I_n − WXWA)`. Membership of `X` in B{1',2',3'} is
/// enforced; the (1ᵏ') equation on `B` is only reported.
pub fn perturb_preserving(a: &Matrix, w: &Matrix, x: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<Perturbation> {
    let k = resolve_index(a, w, k, tol)?;
    check_membership(a, w, x, Some(k), InverseSet::W1231k, tol)?.into_result()?;
    let (m, n) = a.shape();
    let aw = a * w;
    let wx = w * x;
    let proj = &Matrix::identity(n) - &(&wx * &(w * a));
    let delta = if m == n {
        &(&aw.pow(k + 1) * &(x * w).pow(k)) * &proj
    } else {
        &(&(&aw.pow(k) * a) * &wx.pow(k)) * &proj
    };
    let b = a + &delta;
    let report = check_membership(&b, w, x, Some(k), InverseSet::W1231k, tol)?;
    check_membership(&b, w, x, Some(k), InverseSet::W123, tol)?.into_result()?;
    Ok(Perturbation { b, report })
}

/// `A^{D,W} = (XW)^{k+2} (AW)^k A` for a {1',2',3',1ᵏ'} inverse `X`.
pub fn wdrazin_recover(a: &Matrix, w: &Matrix, x: &Matrix, k: Option<usize>, tol: &Tolerance) -> Result<Matrix> {
    let k = resolve_index(a, w, k, tol)?;
    check_membership(a, w, x, Some(k), InverseSet::W1231k, tol)?.into_result()?;
    Ok(&(&(x * w).pow(k + 2) * &(a * w).pow(k)) * a)
}

/// If `X123` is a common {1',2',3'} inverse and `X124` a common {1',2',4'}
/// inverse of `A` and `B`, then `WAW = WBW`. Returns the outcome of that comparison.
pub fn common_inverse_implies_wawequal(
    a: &Matrix,
    b: &Matrix,
    w: &Matrix,
    x123: &Matrix,
    x124: &Matrix,
    tol: &Tolerance,
) -> Result<bool> {
    check_shape("common_inverse_implies_wawequal", "B", b, a.shape())?;
    for m in [a, b] {
        check_membership(m, w, x123, None, InverseSet::W123, tol)?.into_result()?;
        check_membership(m, w, x124, None, InverseSet::W124, tol)?.into_result()?;
    }
    let waw = &(w * a) * w;
    let wbw = &(w * b) * w;
    Ok((&waw - &wbw).fro_norm() <= tol.eq_rel() * (waw.fro_norm() + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{self, ExactMatrix};
    use crate::oracle::exact_verify;

    fn real(rows: usize, cols: usize, v: &[f64]) -> Matrix {
        Matrix::from_real(rows, cols, v).unwrap()
    }

    fn close(a: &Matrix, b: &Matrix, eps: f64) {
        let d = (a - b).fro_norm();
        assert!(d <= eps, "difference {d:e}\n{a:?}\n{b:?}");
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn row_pair() -> (Matrix, Matrix) {
        (real(1, 2, &[0.0, 1.0]), real(2, 1, &[0.0, 1.0]))
    }

    #[test]
    fn particular_examples() {
        let a = real(2, 2, &[3.0, 1.0, 2.0, 1.0]);
        let inv = real(2, 2, &[1.0, -1.0, -2.0, 3.0]);
        close(&w1231k_particular(&a, &Matrix::identity(2), Some(0), &tol()).unwrap(), &inv, 1e-12);
        close(&w1241k_particular(&a, &Matrix::identity(2), Some(0), &tol()).unwrap(), &inv, 1e-12);
        let (a, w) = row_pair();
        let x = w1231k_particular(&a, &w, Some(1), &tol()).unwrap();
        close(&x, &a, 1e-12);
        let ea = ExactMatrix::from_ints(1, 2, &[0, 1]).unwrap();
        let ew = ExactMatrix::from_ints(2, 1, &[0, 1]).unwrap();
        assert_eq!(exact::w1231k_particular(&ea, &ew), ea);
        assert!(exact_verify(&ea, &ew, &ea, Some(1), InverseSet::W1231k).unwrap());
    }

    #[test]
    fn index_too_small_is_rejected() {
        let a = real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let w = Matrix::identity(2);
        assert!(matches!(
            w1231k_particular(&a, &w, Some(1), &tol()),
            Err(WinvError::ExistenceFailure { .. }) | Err(WinvError::IndexTooSmall { .. })
        ));
        let (a, w) = row_pair();
        assert!(matches!(
            w1231k_particular(&a, &w, Some(0), &tol()),
            Err(WinvError::IndexTooSmall { k: 0, index: 1 })
        ));
    }

    #[test]
    fn dual_member_from_column_example() {
        let a = real(2, 1, &[1.5, 1.0]);
        let w = real(1, 2, &[0.0, 1.0]);
        let x = real(2, 1, &[0.0, 1.0]);
        let rep = check_membership(&a, &w, &x, None, InverseSet::W124k1, &tol()).unwrap();
        assert!(rep.pass, "{rep:?}");
        let fam = w1241k_family(&a, &w, None, &tol()).unwrap();
        close(fam.base(), &w1241k_particular(&a, &w, None, &tol()).unwrap(), 0.0);
    }

    #[test]
    fn canonical_forms_on_small_pair() {
        let (a, w) = row_pair();
        let (x, data) = svd_canonical(&a, &w, None, &Matrix::zeros(1, 1), &Matrix::zeros(0, 1), &tol()).unwrap();
        close(&x, &a, 1e-12);
        assert_eq!((data.rank_a(), data.rank_w()), (1, 1));
        let (x, data) = cn_canonical(&a, &w, &real(1, 1, &[4.0]), &tol()).unwrap();
        close(&x, &a, 1e-12);
        assert_eq!(data.e.shape(), (0, 1));
    }

    #[test]
    fn uniqueness_and_collapse() {
        let (a, w) = row_pair();
        assert_eq!(uniqueness_class(&a, &w, &tol()).unwrap(), UniquenessClass { k: 1, unique: true });
        assert_eq!(
            uniqueness_class(&Matrix::identity(3), &Matrix::identity(3), &tol()).unwrap(),
            UniquenessClass { k: 0, unique: true }
        );
        let b = real(1, 2, &[2.0, 1.0]);
        let c = collapse_classify(&b, &w, &tol()).unwrap();
        assert_eq!(c.aw, ProductKind::Invertible);
        assert!(c.sets_123_collapse);
        let c = collapse_classify(&real(2, 1, &[2.0, 1.0]), &real(1, 2, &[0.0, 1.0]), &tol()).unwrap();
        assert_eq!(c.wa, ProductKind::Invertible);
        assert!(c.sets_124_collapse);
        let c = collapse_classify(&real(2, 2, &[0.0, 0.0, 1.0, 1.0]), &real(2, 2, &[1.0, 0.0, 0.0, 0.0]), &tol()).unwrap();
        assert_eq!((c.aw, c.wa), (ProductKind::Nilpotent, ProductKind::Nilpotent));
        assert!(c.sets_123_collapse && c.sets_124_collapse);
    }

    #[test]
    fn perturbation_and_recovery_on_small_pair() {
        let (a, w) = row_pair();
        let p = perturb_preserving(&a, &w, &a, Some(1), &tol()).unwrap();
        close(&p.b, &a, 0.0);
        assert!(p.report.pass);
        let d = wdrazin_recover(&a, &w, &a, Some(1), &tol()).unwrap();
        close(&d, &w_drazin(&a, &w, &tol()).unwrap(), 1e-12);
        let ea = ExactMatrix::from_ints(1, 2, &[0, 1]).unwrap();
        let ew = ExactMatrix::from_ints(2, 1, &[0, 1]).unwrap();
        assert_eq!(ExactMatrix::from_matrix(&d), exact::w_drazin(&ea, &ew));
    }

    #[test]
    fn common_inverse_example() {
        let (a, w) = row_pair();
        let b = real(1, 2, &[3.0, 1.0]);
        assert!(common_inverse_implies_wawequal(&a, &b, &w, &a, &a, &tol()).unwrap());
        assert!(common_inverse_implies_wawequal(&a, &a, &w, &a, &a, &tol()).unwrap());
        assert!(matches!(
            common_inverse_implies_wawequal(&a, &b, &w, &Matrix::zeros(1, 2), &a, &tol()),
            Err(WinvError::NotAMember { .. })
        ));
    }
}
