//! Dense complex vectors and matrices sized for the product spaces that
//! appear in two-player quantum games (2x2 up to a few dozen dimensions).
//!
//! Product basis states `|ij>` of `C^n (x) C^m` are stored row-major at index
//! `i * m + j`, which matches the `|00>, |01>, |10>, |11>` enumeration used for
//! two qubits.

use std::fmt;
use std::ops::Index;

pub use num_complex::Complex64 as C64;

use crate::error::{check_dim, Error, Result};

/// Shorthand for a complex literal.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a complex number, rejecting NaN and infinities.
pub fn checked_complex(re: f64, im: f64) -> Result<C64> {
    if re.is_finite() && im.is_finite() {
        Ok(C64::new(re, im))
    } else {
        Err(Error::NonFinite(format!("({re}, {im})")))
    }
}

fn check_finite(entries: &[C64]) -> Result<()> {
    match entries
        .iter()
        .find(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        Some(z) => Err(Error::NonFinite(format!("({}, {})", z.re, z.im))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    entries: Vec<C64>,
}

impl CVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    /// Vector from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| C64::new(re, im)).collect())
    }

    /// Vector with real entries.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&re| C64::new(re, 0.0)).collect())
    }

    /// Computational basis state `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut entries = vec![C64::new(0.0, 0.0); dim];
        entries[index] = C64::new(1.0, 0.0);
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Fails with `NotNormalized` unless `| ||v||^2 - 1 | <= tol`.
    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        if self.is_normalized(tol) {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.norm_sqr()))
        }
    }

    pub fn scale(&self, factor: C64) -> CVector {
        CVector {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Tensor product `self (x) other`.
    pub fn kron(&self, other: &CVector) -> CVector {
        let entries = self
            .entries
            .iter()
            .flat_map(|a| other.entries.iter().map(move |b| a * b))
            .collect();
        CVector { entries }
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &CVector) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Equality up to a global phase, judged on the outer products.
    pub fn equal_up_to_phase(&self, other: &CVector, tol: f64) -> bool {
        self.dim() == other.dim() && outer(self).max_abs_diff(&outer(other)) <= tol
    }
}

impl Index<usize> for CVector {
    type Output = C64;

    fn index(&self, index: usize) -> &C64 {
        &self.entries[index]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    /// Row-major matrix. Both dimensions must be positive.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        check_dim(rows * cols, data.len())?;
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        for row in rows {
            check_dim(m, row.len())?;
        }
        Self::new(n, m, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = C64::new(v, 0.0);
        }
        m
    }

    pub fn pauli_x() -> Self {
        let mut m = Self::zeros(2, 2);
        m.data[1] = C64::new(1.0, 0.0);
        m.data[2] = C64::new(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: C64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &CVector) -> Result<CVector> {
        check_dim(self.cols, v.dim())?;
        let entries = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect();
        Ok(CVector { entries })
    }

    /// `self += weight * other`.
    pub fn add_scaled(&mut self, weight: f64, other: &CMatrix) -> Result<()> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * weight;
        }
        Ok(())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &CMatrix, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// `|| U U^dagger - I ||_inf` (entrywise max).
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let prod = self
            .matmul(&self.adjoint())
            .expect("square matrix times its adjoint");
        prod.max_abs_diff(&CMatrix::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Positive semidefiniteness up to `tol`: smallest eigenvalue `>= -tol`.
    ///
    /// Decided by attempting a Cholesky factorization of `self + tol * I`,
    /// which succeeds exactly when that shifted matrix is positive definite.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let n = self.rows;
        let mut l = vec![C64::new(0.0, 0.0); n * n];
        for j in 0..n {
            let mut d = self.get(j, j).re + tol;
            for k in 0..j {
                d -= l[j * n + k].norm_sqr();
            }
            if d <= 0.0 {
                return false;
            }
            let ljj = d.sqrt();
            l[j * n + j] = C64::new(ljj, 0.0);
            for i in j + 1..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k].conj();
                }
                l[i * n + j] = s / ljj;
            }
        }
        true
    }

    /// Checks the density-matrix axioms: Hermitian, PSD and unit trace.
    pub fn check_density(&self, tol: f64) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotDensityMatrix(format!(
                "{}x{} is not square",
                self.rows, self.cols
            )));
        }
        if !self.is_hermitian(tol) {
            return Err(Error::NotDensityMatrix("not Hermitian".into()));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::NotDensityMatrix(format!("trace {tr}")));
        }
        if !self.is_psd(tol) {
            return Err(Error::NotDensityMatrix("not positive semidefinite".into()));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product; the result has `a.rows * b.rows` rows.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = CMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a.get(ar, ac);
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out.data[(ar * b.rows + br) * cols + ac * b.cols + bc] = x * b.get(br, bc);
                }
            }
        }
    }
    out
}

/// `|v><v|`.
pub fn outer(v: &CVector) -> CMatrix {
    let n = v.dim();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.data[i * n + j] = v[i] * v[j].conj();
        }
    }
    out
}

/// `u rho u^dagger`.
///
/// `u` must be unitary within the shared tolerance. When `rho` is exactly
/// Hermitian only the upper triangle is accumulated and mirrored, so the
/// result is exactly Hermitian as well.
pub fn conjugate_by(u: &CMatrix, rho: &CMatrix) -> Result<CMatrix> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch {
            expected: u.rows,
            found: u.cols,
        });
    }
    if !rho.is_square() {
        return Err(Error::DimensionMismatch {
            expected: rho.rows,
            found: rho.cols,
        });
    }
    check_dim(u.rows, rho.rows)?;
    let defect = u.unitarity_defect();
    if defect > crate::tolerance() {
        return Err(Error::NotUnitary(defect));
    }
    Ok(conjugate_unchecked(u, rho))
}

pub(crate) fn conjugate_unchecked(u: &CMatrix, rho: &CMatrix) -> CMatrix {
    let n = u.rows;
    let left = u.matmul(rho).expect("dimensions checked");
    if !rho.is_hermitian(0.0) {
        return left.matmul(&u.adjoint()).expect("dimensions checked");
    }
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..n {
                s += left.get(i, k) * u.get(j, k).conj();
            }
            if i == j {
                out.data[i * n + i] = C64::new(s.re, 0.0);
            } else {
                out.data[i * n + j] = s;
                out.data[j * n + i] = s.conj();
            }
        }
    }
    out
}

/// `tr(X rho)` for an operator `X` diagonal in the product basis.
///
/// Only the diagonal of `rho` contributes. Its imaginary parts must vanish
/// within the shared tolerance.
pub fn trace_product(x_diag: &[f64], rho: &CMatrix) -> Result<f64> {
    check_dim(rho.rows, x_diag.len())?;
    check_dim(rho.rows, rho.cols)?;
    let tol = crate::tolerance();
    let mut total = 0.0;
    for (k, &x) in x_diag.iter().enumerate() {
        let d = rho.get(k, k);
        if d.im.abs() > tol {
            return Err(Error::ComplexDiagonal {
                index: k,
                imag: d.im,
            });
        }
        total += x * d.re;
    }
    Ok(total)
}
