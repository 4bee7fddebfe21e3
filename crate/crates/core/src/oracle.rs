//! Defining equations, membership checks and structural property checks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::decomp::{index_of, svd, svd_scaled, weighted_index};
use crate::error::{Result, WinvError};
use crate::exact::{self, ExactMatrix};
use crate::matrix::{
    check_pair, check_shape, product_scale, spectral_norm, waw_scale, Matrix, Tolerance, C64,
};

/// Defining equations. `Display` gives the ASCII id, `FromStr` also accepts primes
/// and superscript k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquationId {
    /// `AWXWA = A`
    W1,
    /// `XWAWX = X`
    W2,
    /// `(WAWX)* = WAWX`
    W3,
    /// `(XWAW)* = XWAW`
    W4,
    /// `XW(AW)^{k+1} = (AW)^k`
    W1k,
    /// `(AW)^{k+2} X = (AW)^k A`
    Wk1,
    /// `X(WA)^{k+2} = (AW)^k A`
    W1kStar,
    /// `AWX = XWA`
    W5,
    /// `AXA = A`
    P1,
    /// `XAX = X`
    P2,
    /// `(AX)* = AX`
    P3,
    /// `(XA)* = XA`
    P4,
    /// `XA^{k+1} = A^k`
    D1k,
    /// `AX = XA`
    P5,
}

impl EquationId {
    pub const ALL: [EquationId; 14] = [
        EquationId::W1,
        EquationId::W2,
        EquationId::W3,
        EquationId::W4,
        EquationId::W1k,
        EquationId::Wk1,
        EquationId::W1kStar,
        EquationId::W5,
        EquationId::P1,
        EquationId::P2,
        EquationId::P3,
        EquationId::P4,
        EquationId::D1k,
        EquationId::P5,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EquationId::W1 => "1'",
            EquationId::W2 => "2'",
            EquationId::W3 => "3'",
            EquationId::W4 => "4'",
            EquationId::W1k => "1^k'",
            EquationId::Wk1 => "^k1'",
            EquationId::W1kStar => "1^k*",
            EquationId::W5 => "5'",
            EquationId::P1 => "1",
            EquationId::P2 => "2",
            EquationId::P3 => "3",
            EquationId::P4 => "4",
            EquationId::D1k => "1^k",
            EquationId::P5 => "5",
        }
    }

    /// Weighted equations involve `W`; classical ones act on `A` and `X` alone.
    pub fn is_weighted(self) -> bool {
        matches!(
            self,
            EquationId::W1
                | EquationId::W2
                | EquationId::W3
                | EquationId::W4
                | EquationId::W1k
                | EquationId::Wk1
                | EquationId::W1kStar
                | EquationId::W5
        )
    }

    pub fn uses_k(self) -> bool {
        matches!(
            self,
            EquationId::W1k | EquationId::Wk1 | EquationId::W1kStar | EquationId::D1k
        )
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EquationId {
    type Err = WinvError;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .trim()
            .replace(['′', '’'], "'")
            .replace('ᵏ', "^k")
            .replace(['(', ')'], "");
        EquationId::ALL
            .into_iter()
            .find(|e| e.as_str() == norm)
            .ok_or_else(|| WinvError::UnknownEquation(s.to_string()))
    }
}

/// Named inverse sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InverseSet {
    #[serde(rename = "w1")]
    W1,
    #[serde(rename = "w123")]
    W123,
    #[serde(rename = "w124")]
    W124,
    #[serde(rename = "w123-1k")]
    W1231k,
    #[serde(rename = "w124-k1")]
    W124k1,
    #[serde(rename = "wdi")]
    Wdi,
    #[serde(rename = "w-core")]
    WCore,
    #[serde(rename = "mp")]
    MoorePenrose,
    #[serde(rename = "drazin")]
    Drazin,
    #[serde(rename = "123")]
    Classic123,
}

impl InverseSet {
    pub const ALL: [InverseSet; 10] = [
        InverseSet::W1,
        InverseSet::W123,
        InverseSet::W124,
        InverseSet::W1231k,
        InverseSet::W124k1,
        InverseSet::Wdi,
        InverseSet::WCore,
        InverseSet::MoorePenrose,
        InverseSet::Drazin,
        InverseSet::Classic123,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InverseSet::W1 => "w1",
            InverseSet::W123 => "w123",
            InverseSet::W124 => "w124",
            InverseSet::W1231k => "w123-1k",
            InverseSet::W124k1 => "w124-k1",
            InverseSet::Wdi => "wdi",
            InverseSet::WCore => "w-core",
            InverseSet::MoorePenrose => "mp",
            InverseSet::Drazin => "drazin",
            InverseSet::Classic123 => "123",
        }
    }

    pub fn equations(self) -> &'static [EquationId] {
        use EquationId::*;
        match self {
            InverseSet::W1 => &[W1],
            InverseSet::W123 => &[W1, W2, W3],
            InverseSet::W124 => &[W1, W2, W4],
            InverseSet::W1231k | InverseSet::WCore => &[W1, W2, W3, W1k],
            InverseSet::W124k1 => &[W1, W2, W4, Wk1],
            InverseSet::Wdi => &[W1k, W2, W5],
            InverseSet::MoorePenrose => &[P1, P2, P3, P4],
            InverseSet::Drazin => &[D1k, P2, P5],
            InverseSet::Classic123 => &[P1, P2, P3],
        }
    }

    pub fn is_weighted(self) -> bool {
        !matches!(
            self,
            InverseSet::MoorePenrose | InverseSet::Drazin | InverseSet::Classic123
        )
    }

    fn uses_k(self) -> bool {
        self.equations().iter().any(|e| e.uses_k())
    }
}

impl fmt::Display for InverseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InverseSet {
    type Err = WinvError;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase();
        let alias = match norm.as_str() {
            "wdrazin" => "wdi",
            "wcore" => "w-core",
            other => other,
        };
        InverseSet::ALL
            .into_iter()
            .find(|e| e.as_str() == alias)
            .ok_or_else(|| WinvError::UnknownSet(s.to_string()))
    }
}

/// Arithmetic shared by the floating and the exact checks.
pub(crate) trait Algebra: Clone {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn times(&self, rhs: &Self) -> Self;
    fn adjoint(&self) -> Self;
    fn eye(n: usize) -> Self;

    fn power(&self, l: usize) -> Self {
        let mut out = Self::eye(self.nrows());
        for _ in 0..l {
            out = out.times(self);
        }
        out
    }
}

impl Algebra for Matrix {
    fn nrows(&self) -> usize {
        self.rows()
    }
    fn ncols(&self) -> usize {
        self.cols()
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn adjoint(&self) -> Self {
        self.conj_transpose()
    }
    fn eye(n: usize) -> Self {
        Matrix::identity(n)
    }
    fn power(&self, l: usize) -> Self {
        self.pow(l)
    }
}

impl Algebra for ExactMatrix {
    fn nrows(&self) -> usize {
        self.rows()
    }
    fn ncols(&self) -> usize {
        self.cols()
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn adjoint(&self) -> Self {
        self.conj_transpose()
    }
    fn eye(n: usize) -> Self {
        ExactMatrix::identity(n)
    }
    fn power(&self, l: usize) -> Self {
        self.pow(l)
    }
}

fn expect_shape(eq: EquationId, what: &str, got: (usize, usize), want: (usize, usize)) -> Result<()> {
    if got != want {
        return Err(WinvError::ShapeMismatch {
            op: "check_equation",
            detail: format!(
                "equation {eq}: {what} is {}x{}, expected {}x{}",
                got.0, got.1, want.0, want.1
            ),
        });
    }
    Ok(())
}

/// Both sides of `eq`. `w` is ignored by the classical equations.
pub(crate) fn equation_sides<M: Algebra>(
    eq: EquationId,
    a: &M,
    w: &M,
    x: &M,
    k: usize,
) -> Result<(M, M)> {
    let (m, n) = (a.nrows(), a.ncols());
    let xs = (x.nrows(), x.ncols());
    if eq.is_weighted() {
        expect_shape(eq, "W", (w.nrows(), w.ncols()), (n, m))?;
        expect_shape(eq, "X", xs, (m, n))?;
    } else {
        expect_shape(eq, "X", xs, (n, m))?;
        if matches!(eq, EquationId::D1k | EquationId::P5) && m != n {
            return Err(WinvError::ShapeMismatch {
                op: "check_equation",
                detail: format!("equation {eq} needs a square A, got {m}x{n}"),
            });
        }
    }
    let sides = match eq {
        EquationId::W1 => (a.times(w).times(x).times(w).times(a), a.clone()),
        EquationId::W2 => (x.times(w).times(a).times(w).times(x), x.clone()),
        EquationId::W3 => {
            let p = w.times(a).times(w).times(x);
            (p.adjoint(), p)
        }
        EquationId::W4 => {
            let p = x.times(w).times(a).times(w);
            (p.adjoint(), p)
        }
        EquationId::W1k => {
            let aw = a.times(w);
            (x.times(w).times(&aw.power(k + 1)), aw.power(k))
        }
        EquationId::Wk1 => {
            let aw = a.times(w);
            (aw.power(k + 2).times(x), aw.power(k).times(a))
        }
        EquationId::W1kStar => {
            let wa = w.times(a);
            (x.times(&wa.power(k + 2)), a.times(w).power(k).times(a))
        }
        EquationId::W5 => (a.times(w).times(x), x.times(w).times(a)),
        EquationId::P1 => (a.times(x).times(a), a.clone()),
        EquationId::P2 => (x.times(a).times(x), x.clone()),
        EquationId::P3 => {
            let p = a.times(x);
            (p.adjoint(), p)
        }
        EquationId::P4 => {
            let p = x.times(a);
            (p.adjoint(), p)
        }
        EquationId::D1k => (x.times(&a.power(k + 1)), a.power(k)),
        EquationId::P5 => (a.times(x), x.times(a)),
    };
    Ok(sides)
}

/// Relative residual of `eq` and whether it is within `tol.eq_rel()`.
pub fn check_equation(
    a: &Matrix,
    w: &Matrix,
    x: &Matrix,
    k: usize,
    eq: EquationId,
    tol: &Tolerance,
) -> Result<(f64, bool)> {
    let (lhs, rhs) = equation_sides(eq, a, w, x, k)?;
    let residual = lhs.rel_diff(&rhs);
    Ok((residual, residual <= tol.eq_rel()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    #[serde(rename = "set")]
    pub set_name: InverseSet,
    #[serde(rename = "k")]
    pub k_used: usize,
    pub residuals: BTreeMap<String, f64>,
    pub verdicts: BTreeMap<String, bool>,
    pub pass: bool,
}

impl VerificationReport {
    fn from_results(set: InverseSet, k: usize, results: Vec<(EquationId, f64, bool)>) -> Self {
        let pass = results.iter().all(|r| r.2);
        let residuals = results.iter().map(|r| (r.0.to_string(), r.1)).collect();
        let verdicts = results.iter().map(|r| (r.0.to_string(), r.2)).collect();
        VerificationReport {
            set_name: set,
            k_used: k,
            residuals,
            verdicts,
            pass,
        }
    }

    /// First failing equation as a `NotAMember` error.
    pub fn into_result(self) -> Result<Self> {
        if self.pass {
            return Ok(self);
        }
        let (eq, residual) = self
            .verdicts
            .iter()
            .find(|(_, ok)| !**ok)
            .map(|(e, _)| (e.clone(), self.residuals[e]))
            .expect("a failing report has a failing verdict");
        Err(WinvError::NotAMember {
            set: self.set_name.to_string(),
            equation: eq,
            residual,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Index used for a set: `k` when given, otherwise the relevant index.
/// W-core fixes `k = 1`.
fn resolve_k(
    a: &Matrix,
    w: &Matrix,
    k: Option<usize>,
    set: InverseSet,
    tol: &Tolerance,
) -> Result<usize> {
    if set == InverseSet::WCore {
        return Ok(1);
    }
    if !set.uses_k() {
        return Ok(k.unwrap_or(0));
    }
    match (k, set) {
        (Some(k), _) => Ok(k),
        (None, InverseSet::Drazin) => index_of(a, tol),
        (None, _) => weighted_index(a, w, tol),
    }
}

fn check_membership_shapes(a: &Matrix, w: &Matrix, x: &Matrix, set: InverseSet) -> Result<()> {
    if set.is_weighted() {
        check_pair("check_membership", a, w)?;
        check_shape("check_membership", "X", x, a.shape())
    } else {
        check_shape("check_membership", "X", x, (a.cols(), a.rows()))
    }
}

/// Checks every defining equation of `set`. Classical sets ignore `w`.
/// When `k` is `None` the weighted index (or `ind(A)` for Drazin) is used.
pub fn check_membership(
    a: &Matrix,
    w: &Matrix,
    x: &Matrix,
    k: Option<usize>,
    set: InverseSet,
    tol: &Tolerance,
) -> Result<VerificationReport> {
    check_membership_shapes(a, w, x, set)?;
    let k = resolve_k(a, w, k, set, tol)?;
    let results = set
        .equations()
        .iter()
        .map(|&eq| check_equation(a, w, x, k, eq, tol).map(|(r, ok)| (eq, r, ok)))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::from_results(set, k, results))
}

/// Exact re-check in rational arithmetic. Residuals are zero for equations that
/// hold exactly, otherwise the relative residual rounded to `f64`.
pub fn exact_report(
    a: &ExactMatrix,
    w: &ExactMatrix,
    x: &ExactMatrix,
    k: Option<usize>,
    set: InverseSet,
) -> Result<VerificationReport> {
    let k = match k {
        _ if set == InverseSet::WCore => 1,
        Some(k) => k,
        None if !set.uses_k() => 0,
        None if set == InverseSet::Drazin => {
            if a.rows() != a.cols() {
                return Err(WinvError::shape("exact_verify", "Drazin needs a square A"));
            }
            a.index()
        }
        None => {
            if w.shape() != (a.cols(), a.rows()) {
                return Err(WinvError::shape("exact_verify", "W must be n x m"));
            }
            exact::weighted_index(a, w)
        }
    };
    let mut results = Vec::new();
    for &eq in set.equations() {
        let (lhs, rhs) = equation_sides(eq, a, w, x, k)?;
        let ok = lhs == rhs;
        let residual = if ok {
            0.0
        } else {
            lhs.sub(&rhs).fro_norm() / (rhs.fro_norm() + 1.0)
        };
        results.push((eq, residual, ok));
    }
    Ok(VerificationReport::from_results(set, k, results))
}

/// `true` iff `x` satisfies every equation of `set` exactly.
pub fn exact_verify(
    a: &ExactMatrix,
    w: &ExactMatrix,
    x: &ExactMatrix,
    k: Option<usize>,
    set: InverseSet,
) -> Result<bool> {
    Ok(exact_report(a, w, x, k, set)?.pass)
}

/// Orthonormal basis of `R(M)`, with the rank cutoff taken against `scale`.
fn basis(m: &Matrix, scale: f64, tol: &Tolerance) -> Matrix {
    svd_scaled(m, scale, tol).range_basis()
}

/// Largest principal-angle sine allowed between subspaces that should agree.
fn angle_tol(tol: &Tolerance) -> f64 {
    tol.eq_rel().sqrt()
}

/// `‖(I − Bb Bb*) Bs‖₂` for orthonormal bases.
fn escape(big: &Matrix, small: &Matrix) -> f64 {
    if small.cols() == 0 {
        return 0.0;
    }
    let proj = big * &(&big.conj_transpose() * small);
    crate::matrix::spectral_norm(&(small - &proj))
}

pub(crate) fn same_range_scaled(p: (&Matrix, f64), q: (&Matrix, f64), tol: &Tolerance) -> bool {
    let bp = basis(p.0, p.1, tol);
    let bq = basis(q.0, q.1, tol);
    bp.cols() == bq.cols() && escape(&bp, &bq) <= angle_tol(tol)
}

pub(crate) fn range_contains_scaled(big: (&Matrix, f64), small: (&Matrix, f64), tol: &Tolerance) -> bool {
    let bb = basis(big.0, big.1, tol);
    let bs = basis(small.0, small.1, tol);
    bs.cols() <= bb.cols() && escape(&bb, &bs) <= angle_tol(tol)
}

pub(crate) fn same_null_space_scaled(p: (&Matrix, f64), q: (&Matrix, f64), tol: &Tolerance) -> bool {
    same_range_scaled((&p.0.conj_transpose(), p.1), (&q.0.conj_transpose(), q.1), tol)
}

/// `R(P) = R(Q)` for matrices with the same number of rows.
pub fn same_range(p: &Matrix, q: &Matrix, tol: &Tolerance) -> bool {
    same_range_scaled((p, 0.0), (q, 0.0), tol)
}

/// `R(small) ⊆ R(big)`.
pub fn range_contains(big: &Matrix, small: &Matrix, tol: &Tolerance) -> bool {
    range_contains_scaled((big, 0.0), (small, 0.0), tol)
}

/// `N(P) = N(Q)` for matrices with the same number of columns.
pub fn same_null_space(p: &Matrix, q: &Matrix, tol: &Tolerance) -> bool {
    same_null_space_scaled((p, 0.0), (q, 0.0), tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectorReport {
    /// `‖(WAWX)* − WAWX‖` relative residual.
    pub waw_x_hermitian: f64,
    /// `‖(WAWX)² − WAWX‖` relative residual.
    pub waw_x_idempotent: f64,
    /// `R(WAWX) = R(WA)`.
    pub waw_x_range: bool,
    /// `‖(XWAW)² − XWAW‖` relative residual.
    pub x_waw_idempotent: f64,
    /// `R(XWAW) = R(X)`.
    pub x_waw_range: bool,
    /// `N(XWAW) = N(AW)`.
    pub x_waw_null_space: bool,
    pub pass: bool,
}

/// Projector structure of a weighted {1',2',3'}-inverse: `WAWX` is the orthogonal
/// projector onto `R(WA)` and `XWAW` projects onto `R(X)` along `N(AW)`.
pub fn check_projectors(a: &Matrix, w: &Matrix, x: &Matrix, tol: &Tolerance) -> Result<ProjectorReport> {
    check_pair("check_projectors", a, w)?;
    check_shape("check_projectors", "X", x, a.shape())?;
    let wa = w * a;
    let aw = a * w;
    let p = &(&wa * w) * x;
    let q = &(x * w) * &aw;
    let waw_x_hermitian = p.conj_transpose().rel_diff(&p);
    let waw_x_idempotent = (&p * &p).rel_diff(&p);
    let x_waw_idempotent = (&q * &q).rel_diff(&q);
    let pw = product_scale(a, w);
    let pq = waw_scale(a, w) * spectral_norm(x);
    let waw_x_range = same_range_scaled((&p, pq), (&wa, pw), tol);
    let x_waw_range = same_range_scaled((&q, pq), (x, 0.0), tol);
    let x_waw_null_space = same_null_space_scaled((&q, pq), (&aw, pw), tol);
    let eq = tol.eq_rel();
    let pass = waw_x_hermitian <= eq
        && waw_x_idempotent <= eq
        && x_waw_idempotent <= eq
        && waw_x_range
        && x_waw_range
        && x_waw_null_space;
    Ok(ProjectorReport {
        waw_x_hermitian,
        waw_x_idempotent,
        waw_x_range,
        x_waw_idempotent,
        x_waw_range,
        x_waw_null_space,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometricReport {
    /// `N(X) = N((WA)*)`.
    pub null_space: bool,
    /// `R((AW)^k) ⊆ R(X)`.
    pub range_contains_core: bool,
    pub pass: bool,
}

/// Geometry of a weighted {1',2',3',1ᵏ'}-inverse.
pub fn check_geometric(
    a: &Matrix,
    w: &Matrix,
    x: &Matrix,
    k: usize,
    tol: &Tolerance,
) -> Result<GeometricReport> {
    check_pair("check_geometric", a, w)?;
    check_shape("check_geometric", "X", x, a.shape())?;
    let wa_star = (w * a).conj_transpose();
    let pw = product_scale(a, w);
    let null_space = same_null_space_scaled((x, 0.0), (&wa_star, pw), tol);
    let range_contains_core = range_contains_scaled((x, 0.0), (&(a * w).pow(k), pw.powi(k as i32)), tol);
    Ok(GeometricReport {
        null_space,
        range_contains_core,
        pass: null_space && range_contains_core,
    })
}

/// Residual of `XW(AW)^k = A^{D,W}W(AW)^k`.
pub fn check_wdrazin_agreement(
    a: &Matrix,
    w: &Matrix,
    x: &Matrix,
    k: usize,
    tol: &Tolerance,
) -> Result<(f64, bool)> {
    check_pair("check_wdrazin_agreement", a, w)?;
    check_shape("check_wdrazin_agreement", "X", x, a.shape())?;
    let d = crate::classic::w_drazin(a, w, tol)?;
    let awk = (a * w).pow(k);
    let lhs = &(x * w) * &awk;
    let rhs = &(&d * w) * &awk;
    let r = lhs.rel_diff(&rhs);
    Ok((r, r <= tol.eq_rel()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralPair {
    pub eigenvalue: (f64, f64),
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub pairs: Vec<SpectralPair>,
    pub pass: bool,
}

const SPECTRAL_REL: f64 = 1e-6;

/// For every nonzero eigenvalue `λ` of `AW` with eigenvector `v`, checks
/// `XWv = v/λ`. Eigenpairs are taken on `R((AW)^k)`, which carries all nonzero
/// eigenvalues and keeps the nilpotent part out of the eigen-solver.
pub fn check_spectral(
    a: &Matrix,
    w: &Matrix,
    x: &Matrix,
    k: usize,
    tol: &Tolerance,
) -> Result<SpectralReport> {
    check_pair("check_spectral", a, w)?;
    check_shape("check_spectral", "X", x, a.shape())?;
    let aw = a * w;
    let xw = x * w;
    let basis = basis(&aw.pow(k), product_scale(a, w).powi(k as i32), tol);
    let c = basis.cols();
    if c == 0 {
        return Ok(SpectralReport {
            pairs: Vec::new(),
            pass: true,
        });
    }
    let bs = basis.conj_transpose();
    let h = &(&bs * &aw) * &basis;
    let eig = h.eigenvalues()?;
    let rho = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut pairs = Vec::new();
    for &lambda in eig.iter() {
        if lambda.norm() <= SPECTRAL_REL * rho {
            continue;
        }
        let shifted = &h - &Matrix::identity(c).scale_complex(lambda);
        // right singular vector of the smallest singular value
        let f = svd(&shifted, tol);
        let wmat = f.l.block(0, c - 1, c, 1);
        let v = &basis * &wmat;
        let lhs = &xw * &v;
        let rhs = v.scale_complex(C64::new(1.0, 0.0) / lambda);
        let residual = (&lhs - &rhs).fro_norm() / v.fro_norm();
        pairs.push(SpectralPair {
            eigenvalue: (lambda.re, lambda.im),
            residual,
        });
    }
    let pass = pairs.iter().all(|p| p.residual <= SPECTRAL_REL);
    Ok(SpectralReport { pairs, pass })
}

/// `R((AW)^k)` is invariant under `XW`.
pub fn check_invariant_subspace(
    a: &Matrix,
    w: &Matrix,
    x: &Matrix,
    k: usize,
    tol: &Tolerance,
) -> Result<bool> {
    check_pair("check_invariant_subspace", a, w)?;
    check_shape("check_invariant_subspace", "X", x, a.shape())?;
    let awk = (a * w).pow(k);
    let image = &(x * w) * &awk;
    let s = product_scale(a, w).powi(k as i32);
    let si = s * spectral_norm(x) * spectral_norm(w);
    Ok(range_contains_scaled((&awk, s), (&image, si), tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, v: &[f64]) -> Matrix {
        Matrix::from_real(rows, cols, v).unwrap()
    }

    #[test]
    fn equation_ids_round_trip() {
        for e in EquationId::ALL {
            assert_eq!(e.to_string().parse::<EquationId>().unwrap(), e);
        }
        assert_eq!("1ᵏ′".parse::<EquationId>().unwrap(), EquationId::W1k);
        assert_eq!("ᵏ1′".parse::<EquationId>().unwrap(), EquationId::Wk1);
        assert_eq!("(3′)".parse::<EquationId>().unwrap(), EquationId::W3);
        assert!("7'".parse::<EquationId>().is_err());
    }

    #[test]
    fn set_names_round_trip() {
        for s in InverseSet::ALL {
            assert_eq!(s.to_string().parse::<InverseSet>().unwrap(), s);
        }
        assert_eq!("wdrazin".parse::<InverseSet>().unwrap(), InverseSet::Wdi);
        assert_eq!("wcore".parse::<InverseSet>().unwrap(), InverseSet::WCore);
        assert!(matches!("w999".parse::<InverseSet>(), Err(WinvError::UnknownSet(_))));
    }

    #[test]
    fn identity_weight_reduces_to_penrose() {
        let a = real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
        let w = Matrix::identity(2);
        let x = real(2, 2, &[0.5, 0.0, 0.5, 0.0]);
        let tol = Tolerance::default();
        let rep = check_membership(&a, &w, &x, Some(1), InverseSet::W123, &tol).unwrap();
        assert!(rep.pass);
        let rep = check_membership(&a, &w, &x, None, InverseSet::MoorePenrose, &tol).unwrap();
        assert!(rep.pass, "{rep:?}");
        let zero = Matrix::zeros(2, 2);
        let rep = check_membership(&a, &w, &zero, Some(1), InverseSet::W1, &tol).unwrap();
        assert!(!rep.pass);
        assert!(rep.into_result().is_err());
    }

    #[test]
    fn shape_errors() {
        let a = Matrix::zeros(2, 3);
        let w = Matrix::zeros(3, 2);
        let tol = Tolerance::default();
        assert!(matches!(
            check_equation(&a, &w, &Matrix::zeros(3, 2), 1, EquationId::W1, &tol),
            Err(WinvError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            check_equation(&a, &w, &Matrix::zeros(3, 2), 1, EquationId::P5, &tol),
            Err(WinvError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn subspace_tests() {
        let tol = Tolerance::default();
        let p = real(3, 1, &[1.0, 0.0, 0.0]);
        let q = real(3, 2, &[2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(same_range(&p, &q, &tol));
        let e2 = real(3, 1, &[0.0, 1.0, 0.0]);
        assert!(!same_range(&p, &e2, &tol));
        assert!(range_contains(&Matrix::identity(3), &e2, &tol));
        assert!(!range_contains(&p, &e2, &tol));
        assert!(same_null_space(&real(1, 2, &[1.0, 1.0]), &real(2, 2, &[3.0, 3.0, 1.0, 1.0]), &tol));
    }

    #[test]
    fn exact_verification_is_strict() {
        let a = ExactMatrix::from_ints(2, 2, &[1, 1, 0, 0]).unwrap();
        let w = ExactMatrix::identity(2);
        let x = a.pinv();
        assert!(exact_verify(&a, &w, &x, None, InverseSet::MoorePenrose).unwrap());
        let mut off = x.clone();
        let bump = off.get(0, 0).clone() + num_complex::Complex::new(
            num_rational::BigRational::new(1.into(), 1_000_000_000_000i64.into()),
            num_rational::BigRational::from_integer(0.into()),
        );
        off.set(0, 0, bump);
        let rep = exact_report(&a, &w, &off, None, InverseSet::MoorePenrose).unwrap();
        assert!(!rep.pass);
        assert!(rep.residuals.values().any(|&r| r > 0.0));
    }
}
