//! Exact matrices over the Gaussian rationals.
//!
//! Everything here is computed without rounding. Pseudo-inverses come from a
//! full-rank factorization read off the reduced row echelon form, and Drazin
//! inverses from `A^D = A^l (A^{2l+1})† A^l` with `l = ind(A)`, so the exact
//! path shares no algorithm with the floating-point one.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, WinvError};
use crate::matrix::{Matrix, C64};

pub type GaussRational = Complex<BigRational>;

#[derive(Clone, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussRational>,
}

fn gr_zero() -> GaussRational {
    Complex::new(BigRational::zero(), BigRational::zero())
}

fn gr_one() -> GaussRational {
    Complex::new(BigRational::one(), BigRational::zero())
}

fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite matrix entry")
}

/// Parses a decimal literal (`-12`, `0.25`, `3.5e-2`, `1E+3`) exactly.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![gr_zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = gr_one();
        }
        m
    }

    /// Row-major entries.
    pub fn from_entries(rows: usize, cols: usize, data: Vec<GaussRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(WinvError::shape(
                "ExactMatrix::from_entries",
                format!("{} entries for a {rows}x{cols} matrix", data.len()),
            ));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    /// Row-major Gaussian integers `(re, im)`.
    pub fn from_gaussian_ints(rows: usize, cols: usize, entries: &[(i64, i64)]) -> Result<Self> {
        let data = entries
            .iter()
            .map(|&(re, im)| {
                Complex::new(
                    BigRational::from_integer(re.into()),
                    BigRational::from_integer(im.into()),
                )
            })
            .collect();
        ExactMatrix::from_entries(rows, cols, data)
    }

    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        let pairs: Vec<(i64, i64)> = entries.iter().map(|&x| (x, 0)).collect();
        ExactMatrix::from_gaussian_ints(rows, cols, &pairs)
    }

    /// Exact image of a floating matrix: every finite double is a dyadic rational.
    pub fn from_matrix(m: &Matrix) -> Self {
        let mut out = ExactMatrix::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let z = m.get(i, j);
                out.data[i * m.cols() + j] =
                    Complex::new(rational_from_f64(z.re), rational_from_f64(z.im));
            }
        }
        out
    }

    /// Nearest floating matrix.
    pub fn to_matrix(&self) -> Matrix {
        let entries: Vec<C64> = self
            .data
            .iter()
            .map(|z| C64::new(to_f64(&z.re), to_f64(&z.im)))
            .collect();
        Matrix::from_row_slice(self.rows, self.cols, &entries).expect("finite conversion")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "exact product shape mismatch");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self.data[i * self.cols + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[l * rhs.cols + j];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.shape(), rhs.shape(), "exact sum shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ExactMatrix { data, ..*self }
    }

    pub fn sub(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.shape(), rhs.shape(), "exact difference shape mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ExactMatrix { data, ..*self }
    }

    pub fn conj_transpose(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn pow(&self, l: usize) -> ExactMatrix {
        assert_eq!(self.rows, self.cols, "exact power of a non-square matrix");
        let mut out = ExactMatrix::identity(self.rows);
        for _ in 0..l {
            out = out.mul(self);
        }
        out
    }

    fn columns(&self, idx: &[usize]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + jj] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    fn top_rows(&self, r: usize) -> ExactMatrix {
        ExactMatrix {
            rows: r,
            cols: self.cols,
            data: self.data[..r * self.cols].to_vec(),
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.get(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = gr_one() / m.get(row, col).clone();
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = m.get(i, j) - &factor * m.get(row, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<ExactMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = ExactMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, gr_one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(r.columns(&idx))
    }

    /// Moore–Penrose inverse via `M = F G` (full column / full row rank):
    /// `M† = G* (G G*)⁻¹ (F* F)⁻¹ F*`.
    pub fn pinv(&self) -> ExactMatrix {
        let (r, pivots) = self.rref();
        if pivots.is_empty() {
            return ExactMatrix::zeros(self.cols, self.rows);
        }
        let f = self.columns(&pivots);
        let g = r.top_rows(pivots.len());
        let gs = g.conj_transpose();
        let fs = f.conj_transpose();
        let ggs_inv = g.mul(&gs).inverse().expect("G has full row rank");
        let fsf_inv = fs.mul(&f).inverse().expect("F has full column rank");
        gs.mul(&ggs_inv).mul(&fsf_inv).mul(&fs)
    }

    /// Smallest `k` with `r(M^k) = r(M^{k+1})`.
    pub fn index(&self) -> usize {
        assert_eq!(self.rows, self.cols, "index of a non-square matrix");
        let mut power = ExactMatrix::identity(self.rows);
        let mut rank = self.rows;
        for k in 0..self.rows {
            let next = power.mul(self);
            let next_rank = next.rank();
            if next_rank == rank {
                return k;
            }
            power = next;
            rank = next_rank;
        }
        self.rows
    }

    pub fn drazin(&self) -> ExactMatrix {
        let l = self.index();
        let al = self.pow(l);
        al.mul(&self.pow(2 * l + 1).pinv()).mul(&al)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|z| {
                let (re, im) = (to_f64(&z.re), to_f64(&z.im));
                re * re + im * im
            })
            .sum::<f64>()
            .sqrt()
    }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(if q.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, " ({} + {}i)", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Exact weighted Drazin inverse `A[(WA)^D]²`.
pub fn w_drazin(a: &ExactMatrix, w: &ExactMatrix) -> ExactMatrix {
    let d = w.mul(a).drazin();
    a.mul(&d).mul(&d)
}

/// Exact ranks `(r(A), r(WAW))`.
pub fn existence_ranks(a: &ExactMatrix, w: &ExactMatrix) -> (usize, usize) {
    (a.rank(), w.mul(a).mul(w).rank())
}

/// Exact `max(ind(AW), ind(WA))`.
pub fn weighted_index(a: &ExactMatrix, w: &ExactMatrix) -> usize {
    a.mul(w).index().max(w.mul(a).index())
}

/// Exact `(WAW)† + (I − (WAW)†WAW) A^{D,W} WAW (WAW)†`.
pub fn w1231k_particular(a: &ExactMatrix, w: &ExactMatrix) -> ExactMatrix {
    let g = w.mul(a).mul(w);
    let gp = g.pinv();
    let d = w_drazin(a, w);
    let proj = ExactMatrix::identity(a.rows()).sub(&gp.mul(&g));
    gp.add(&proj.mul(&d).mul(&g).mul(&gp))
}

/// Exact `(WAW)† + (WAW)†WAW A^{D,W} (I − WAW (WAW)†)`.
pub fn w1241k_particular(a: &ExactMatrix, w: &ExactMatrix) -> ExactMatrix {
    let g = w.mul(a).mul(w);
    let gp = g.pinv();
    let d = w_drazin(a, w);
    let proj = ExactMatrix::identity(a.cols()).sub(&g.mul(&gp));
    gp.add(&gp.mul(&g).mul(&d).mul(&proj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_decimal("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_decimal("2.5e-3").unwrap(), q(1, 400));
        assert_eq!(parse_decimal("1E+2").unwrap(), q(100, 1));
        assert_eq!(parse_decimal(".5").unwrap(), q(1, 2));
        assert_eq!(parse_decimal("7.").unwrap(), q(7, 1));
        assert!(parse_decimal("").is_none());
        assert!(parse_decimal("1.2.3").is_none());
        assert!(parse_decimal("nan").is_none());
        assert!(parse_decimal("-").is_none());
    }

    #[test]
    fn rank_and_inverse() {
        let m = ExactMatrix::from_ints(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        assert_eq!(m.rank(), 2);
        assert!(m.inverse().is_none());
        let m = ExactMatrix::from_ints(2, 2, &[2, 1, 1, 1]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv, ExactMatrix::from_ints(2, 2, &[1, -1, -1, 2]).unwrap());
    }

    #[test]
    fn pinv_satisfies_penrose_equations() {
        let m = ExactMatrix::from_gaussian_ints(
            3,
            2,
            &[(1, 1), (2, 0), (0, -1), (1, 0), (1, 0), (3, 1)],
        )
        .unwrap();
        let rank_def = m.mul(&ExactMatrix::from_ints(2, 4, &[1, 0, 2, 1, 2, 0, 4, 2]).unwrap());
        for a in [m, rank_def] {
            let x = a.pinv();
            assert_eq!(a.mul(&x).mul(&a), a);
            assert_eq!(x.mul(&a).mul(&x), x);
            let ax = a.mul(&x);
            let xa = x.mul(&a);
            assert_eq!(ax.conj_transpose(), ax);
            assert_eq!(xa.conj_transpose(), xa);
        }
    }

    #[test]
    fn drazin_of_idempotent_and_nilpotent() {
        let m = ExactMatrix::from_ints(2, 2, &[1, 1, 0, 0]).unwrap();
        assert_eq!(m.index(), 1);
        assert_eq!(m.drazin(), m);
        let n = ExactMatrix::from_ints(2, 2, &[0, 1, 0, 0]).unwrap();
        assert_eq!(n.index(), 2);
        assert!(n.drazin().is_zero());
    }

    #[test]
    fn float_round_trip_is_exact_for_dyadics() {
        let m = Matrix::from_real(1, 3, &[0.5, -0.25, 3.0]).unwrap();
        assert_eq!(ExactMatrix::from_matrix(&m).to_matrix(), m);
    }
}
