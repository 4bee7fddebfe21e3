//! Seeded test-instance generation with prescribed rank and weighted index.
//!
//! Pairs are assembled as `A = S diag(A1, A2) R⁻¹`, `W = R diag(W1, W2) S⁻¹`
//! with `A1`, `W1` nonsingular of size `c` and a nilpotent tail:
//!
//! * `k = 0`: no tail, `c = m = n = r`.
//! * `k = 1`: `A2 = 0`, `W2` arbitrary, `c = r`.
//! * `k ≥ 2`: `A2 = diag(J_k, 0)`, `W2 = [I_k X1; X2 X3]`, `c = r − k + 1`,
//!   so `A2W2` and `W2A2` are nilpotent of index exactly `k` and `r(W2A2W2) = r(A2)`.
//!
//! Every matrix draws from its own ChaCha8 stream, so a seed fixes the output.

use std::str::FromStr;

use num_complex::Complex;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::decomp::weighted_index;
use crate::error::{Result, WinvError};
use crate::exact::{ExactMatrix, GaussRational};
use crate::matrix::{numerical_rank, numerical_rank_scaled, waw_scale, Matrix, Tolerance, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    GaussianFloat,
    SmallInteger,
}

impl FromStr for EntryKind {
    type Err = WinvError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian-float" => Ok(EntryKind::GaussianFloat),
            "small-integer" => Ok(EntryKind::SmallInteger),
            _ => Err(WinvError::InfeasibleSpec(format!("unknown entry kind `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSpec {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub seed: u64,
    pub entry_kind: EntryKind,
}

impl InstanceSpec {
    pub fn new(m: usize, n: usize, r: usize, k: usize, seed: u64) -> Self {
        InstanceSpec {
            m,
            n,
            r,
            k,
            seed,
            entry_kind: EntryKind::GaussianFloat,
        }
    }

    pub fn integers(self) -> Self {
        InstanceSpec {
            entry_kind: EntryKind::SmallInteger,
            ..self
        }
    }

    /// Size of the nonsingular core, or why the spec cannot be realized.
    pub fn core_size(&self) -> Result<usize> {
        let InstanceSpec { m, n, r, k, .. } = *self;
        let infeasible = |why: String| Err(WinvError::InfeasibleSpec(why));
        if r == 0 || r > m.min(n) {
            return infeasible(format!("rank {r} must lie in 1..={}", m.min(n)));
        }
        match k {
            0 if m == n && r == m => Ok(r),
            0 => infeasible(format!("index 0 needs m = n = r, got m={m}, n={n}, r={r}")),
            1 if r < m.max(n) => Ok(r),
            1 => infeasible(format!("index 1 needs r < max(m, n), got r={r}")),
            _ if r + 1 < k => infeasible(format!("index {k} needs rank at least {}", k - 1)),
            _ if r + 1 > m.min(n) => {
                infeasible(format!("index {k} needs r + 1 <= min(m, n), got r={r}, m={m}, n={n}"))
            }
            _ => Ok(r + 1 - k),
        }
    }
}

const MAX_ATTEMPTS: u64 = 32;

/// Independent stream for matrix `id` of retry `attempt`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix of independent standard complex Gaussians.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let entries: Vec<C64> = (0..rows * cols).map(|_| gaussian(rng)).collect();
    Matrix::from_row_slice(rows, cols, &entries).expect("finite samples")
}

/// Free parameter number `index` for a family sampled under `seed`.
pub fn random_parameter(shape: (usize, usize), seed: u64, index: u64) -> Matrix {
    gaussian_matrix(shape.0, shape.1, &mut stream_rng(seed, index))
}

fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    let g = gaussian_matrix(n, n, rng).into_inner();
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        if i == j && r[(i, i)].norm() > 0.0 {
            r[(i, i)] / r[(i, i)].norm()
        } else if i == j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Matrix::new(q * phases).expect("finite unitary")
}

/// `U diag(σ) V*` with singular values in `[0.5, 2]`.
fn well_conditioned(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let u = haar_unitary(n, rng);
    let v = haar_unitary(n, rng);
    let sigma: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    let d = Matrix::from_real(n, n, &diag(&sigma)).expect("finite");
    &(&u * &d) * &v.conj_transpose()
}

fn diag(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n * n];
    for (i, v) in values.iter().enumerate() {
        out[i * n + i] = *v;
    }
    out
}

/// Nilpotent Jordan block of order `k` padded with zeros to `rows × cols`.
fn jordan_tail(rows: usize, cols: usize, k: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; cols]; rows];
    for i in 0..k.saturating_sub(1) {
        a[i][i + 1] = 1;
    }
    a
}

/// Instance with `r(A) = r`, `r(WAW) = r` and `ind(A, W) = k`.
pub fn cn_construct(spec: &InstanceSpec) -> Result<(Matrix, Matrix)> {
    let c = spec.core_size()?;
    let tol = Tolerance::default();
    for attempt in 0..MAX_ATTEMPTS {
        let (a, w) = match spec.entry_kind {
            EntryKind::GaussianFloat => float_instance(spec, c, attempt),
            EntryKind::SmallInteger => {
                let (a, w) = integer_instance(spec, c, attempt);
                (a.to_matrix(), w.to_matrix())
            }
        };
        let ok = numerical_rank(&a, &tol) == spec.r
            && numerical_rank_scaled(&(&(&w * &a) * &w), waw_scale(&a, &w), &tol) == spec.r
            && weighted_index(&a, &w, &tol)? == spec.k;
        if ok {
            return Ok((a, w));
        }
    }
    Err(WinvError::Postcondition {
        op: "cn_construct",
        detail: format!("no valid instance after {MAX_ATTEMPTS} attempts for {spec:?}"),
    })
}

/// Random feasible spec with `m, n ≤ max_dim`, `r ≤ max_rank` and index `k`.
pub fn random_spec(seed: u64, k: usize, max_dim: usize, max_rank: usize) -> Result<InstanceSpec> {
    let mut rng = stream_rng(seed, u64::MAX);
    for _ in 0..10_000 {
        let m = rng.random_range(1..=max_dim);
        let n = rng.random_range(1..=max_dim);
        let r = rng.random_range(1..=max_rank.min(m.min(n)).max(1));
        let spec = InstanceSpec::new(m, n, r, k, seed);
        if spec.core_size().is_ok() {
            return Ok(spec);
        }
    }
    Err(WinvError::InfeasibleSpec(format!(
        "no spec with index {k}, dimensions <= {max_dim}, rank <= {max_rank}"
    )))
}

/// Exact counterpart of [`cn_construct`] for small-integer specs.
pub fn cn_construct_exact(spec: &InstanceSpec) -> Result<(ExactMatrix, ExactMatrix)> {
    let c = spec.core_size()?;
    for attempt in 0..MAX_ATTEMPTS {
        let (a, w) = integer_instance(spec, c, attempt);
        let waw = w.mul(&a).mul(&w);
        if a.rank() == spec.r
            && waw.rank() == spec.r
            && crate::exact::weighted_index(&a, &w) == spec.k
        {
            return Ok((a, w));
        }
    }
    Err(WinvError::Postcondition {
        op: "cn_construct_exact",
        detail: format!("no valid instance after {MAX_ATTEMPTS} attempts for {spec:?}"),
    })
}

struct Streams {
    seed: u64,
    attempt: u64,
}

impl Streams {
    fn rng(&self, id: u64) -> ChaCha8Rng {
        stream_rng(self.seed, (self.attempt << 8) | id)
    }
}

/// The `(n − c) × (m − c)` weight tail `[I_k X1; X2 X3]` (zero block pattern for `k ≤ 1`).
fn tail_shapes(spec: &InstanceSpec, c: usize) -> (usize, usize) {
    (spec.m - c, spec.n - c)
}

fn float_instance(spec: &InstanceSpec, c: usize, attempt: u64) -> (Matrix, Matrix) {
    let st = Streams {
        seed: spec.seed,
        attempt,
    };
    let (ma, na) = tail_shapes(spec, c);
    let s = well_conditioned(spec.m, &mut st.rng(0));
    let r = well_conditioned(spec.n, &mut st.rng(1));
    let a1 = well_conditioned(c, &mut st.rng(2));
    let w1 = well_conditioned(c, &mut st.rng(3));
    let mut w2 = gaussian_matrix(na, ma, &mut st.rng(4));
    let a2 = if spec.k >= 2 {
        let k = spec.k;
        let mut w2_inner = w2.clone().into_inner();
        w2_inner
            .view_mut((0, 0), (k, k))
            .copy_from(&nalgebra::DMatrix::identity(k, k));
        w2 = Matrix::new(w2_inner).expect("finite");
        ints_to_matrix(&jordan_tail(ma, na, k))
    } else {
        Matrix::zeros(ma, na)
    };
    assemble(&s, &r, &a1, &a2, &w1, &w2)
}

fn ints_to_matrix(rows: &[Vec<i64>]) -> Matrix {
    let (nr, nc) = (rows.len(), rows.first().map_or(0, Vec::len));
    let flat: Vec<f64> = rows.iter().flatten().map(|&x| x as f64).collect();
    if nr == 0 {
        return Matrix::zeros(0, nc);
    }
    Matrix::from_real(nr, nc, &flat).expect("finite")
}

fn assemble(s: &Matrix, r: &Matrix, a1: &Matrix, a2: &Matrix, w1: &Matrix, w2: &Matrix) -> (Matrix, Matrix) {
    let s_inv = s.inverse().expect("well-conditioned S");
    let r_inv = r.inverse().expect("well-conditioned R");
    let a = &(s * &Matrix::block_diag(a1, a2)) * &r_inv;
    let w = &(r * &Matrix::block_diag(w1, w2)) * &s_inv;
    (a, w)
}

fn small_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    rng.random_range(lo..=hi)
}

fn gauss_int(re: i64, im: i64) -> GaussRational {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}

/// `L·U` with unit triangular factors, hence determinant one and an integer inverse.
fn unimodular(n: usize, rng: &mut ChaCha8Rng) -> (ExactMatrix, ExactMatrix) {
    let mut l = ExactMatrix::identity(n);
    let mut u = ExactMatrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, gauss_int(small_int(rng, -1, 1), 0));
            u.set(j, i, gauss_int(small_int(rng, -1, 1), small_int(rng, -1, 1)));
        }
    }
    let m = l.mul(&u);
    let inv = m.inverse().expect("unimodular");
    (m, inv)
}

fn small_gauss_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let entries: Vec<(i64, i64)> = (0..rows * cols)
        .map(|_| (small_int(rng, -2, 2), small_int(rng, -1, 1)))
        .collect();
    ExactMatrix::from_gaussian_ints(rows, cols, &entries).expect("shape")
}

fn nonsingular_small(n: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    loop {
        let m = small_gauss_matrix(n, n, rng);
        if m.rank() == n {
            return m;
        }
    }
}

fn exact_block_diag(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            out.set(a.rows() + i, a.cols() + j, b.get(i, j).clone());
        }
    }
    out
}

fn integer_instance(spec: &InstanceSpec, c: usize, attempt: u64) -> (ExactMatrix, ExactMatrix) {
    let st = Streams {
        seed: spec.seed,
        attempt,
    };
    let (ma, na) = tail_shapes(spec, c);
    let (s, s_inv) = unimodular(spec.m, &mut st.rng(0));
    let (r, r_inv) = unimodular(spec.n, &mut st.rng(1));
    let a1 = nonsingular_small(c, &mut st.rng(2));
    let w1 = nonsingular_small(c, &mut st.rng(3));
    let mut w2 = small_gauss_matrix(na, ma, &mut st.rng(4));
    let a2 = if spec.k >= 2 {
        for i in 0..spec.k {
            for j in 0..spec.k {
                w2.set(i, j, gauss_int((i == j) as i64, 0));
            }
        }
        let rows = jordan_tail(ma, na, spec.k);
        let flat: Vec<i64> = rows.into_iter().flatten().collect();
        ExactMatrix::from_ints(ma, na, &flat).expect("shape")
    } else {
        ExactMatrix::zeros(ma, na)
    };
    let a = s.mul(&exact_block_diag(&a1, &a2)).mul(&r_inv);
    let w = r.mul(&exact_block_diag(&w1, &w2)).mul(&s_inv);
    (a, w)
}

/// Pair with `r(WAW) < r(A) = r`, so no weighted {1'} inverse exists.
pub fn existence_failure_instance(m: usize, n: usize, r: usize, seed: u64) -> Result<(Matrix, Matrix)> {
    if r == 0 || r > m.min(n) {
        return Err(WinvError::InfeasibleSpec(format!("rank {r} must lie in 1..={}", m.min(n))));
    }
    let st = Streams { seed, attempt: 0 };
    let s = well_conditioned(m, &mut st.rng(0));
    let rr = well_conditioned(n, &mut st.rng(1));
    let a1 = well_conditioned(r, &mut st.rng(2));
    let mut w1 = well_conditioned(r, &mut st.rng(3)).into_inner();
    w1.column_mut(r - 1).fill(C64::new(0.0, 0.0));
    let w1 = Matrix::new(w1).expect("finite");
    let a2 = Matrix::zeros(m - r, n - r);
    let w2 = gaussian_matrix(n - r, m - r, &mut st.rng(4));
    Ok(assemble(&s, &rr, &a1, &a2, &w1, &w2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::index_of;

    #[test]
    fn feasibility_rules() {
        assert_eq!(InstanceSpec::new(3, 3, 3, 0, 1).core_size().unwrap(), 3);
        assert!(InstanceSpec::new(3, 4, 3, 0, 1).core_size().is_err());
        assert_eq!(InstanceSpec::new(2, 1, 1, 1, 1).core_size().unwrap(), 1);
        assert!(InstanceSpec::new(3, 3, 3, 1, 1).core_size().is_err());
        assert_eq!(InstanceSpec::new(5, 4, 2, 2, 1).core_size().unwrap(), 1);
        assert_eq!(InstanceSpec::new(5, 4, 2, 3, 1).core_size().unwrap(), 0);
        assert!(InstanceSpec::new(5, 4, 2, 4, 1).core_size().is_err());
        assert!(InstanceSpec::new(4, 4, 4, 2, 1).core_size().is_err());
        assert!(InstanceSpec::new(4, 4, 0, 1, 1).core_size().is_err());
    }

    #[test]
    fn prescribed_index_and_rank() {
        let tol = Tolerance::default();
        let spec = InstanceSpec::new(5, 4, 2, 2, 42);
        let (a, w) = cn_construct(&spec).unwrap();
        assert_eq!(a.shape(), (5, 4));
        assert_eq!(w.shape(), (4, 5));
        assert_eq!(weighted_index(&a, &w, &tol).unwrap(), 2);
        assert_eq!(index_of(&(&a * &w), &tol).unwrap(), 2);
        assert_eq!(numerical_rank(&(&(&w * &a) * &w), &tol), 2);
        let (a2, w2) = cn_construct(&spec).unwrap();
        assert_eq!(a, a2);
        assert_eq!(w, w2);
        let (a3, _) = cn_construct(&InstanceSpec::new(5, 4, 2, 2, 43)).unwrap();
        assert_ne!(a, a3);
    }

    #[test]
    fn invertible_pair_for_index_zero() {
        let tol = Tolerance::default();
        let (a, w) = cn_construct(&InstanceSpec::new(3, 3, 3, 0, 7)).unwrap();
        assert_eq!(numerical_rank(&a, &tol), 3);
        assert_eq!(numerical_rank(&w, &tol), 3);
    }

    #[test]
    fn integer_mode_is_exact() {
        let spec = InstanceSpec::new(4, 3, 2, 2, 5).integers();
        let (ea, ew) = cn_construct_exact(&spec).unwrap();
        let (a, w) = cn_construct(&spec).unwrap();
        assert_eq!(ExactMatrix::from_matrix(&a), ea);
        assert_eq!(ExactMatrix::from_matrix(&w), ew);
        assert_eq!(crate::exact::weighted_index(&ea, &ew), 2);
    }

    #[test]
    fn existence_failure_pairs_lack_rank() {
        let tol = Tolerance::default();
        let (a, w) = existence_failure_instance(5, 4, 3, 9).unwrap();
        assert_eq!(numerical_rank(&a, &tol), 3);
        assert!(numerical_rank(&(&(&w * &a) * &w), &tol) < 3);
    }
}
