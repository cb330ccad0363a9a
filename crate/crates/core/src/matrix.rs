//! Dense complex matrices, Hermitian matrices and a Hermitian eigensolver.
//!
//! Matrices here are small (tens of rows at most in the bound computations,
//! a few hundred for truncated Fock-space checks), so everything is stored
//! row-major in a flat `Vec<Complex64>` and operated on directly.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on `|a_ij - conj(a_ji)|`, scaled by `max(1, max|a|)`.
pub const HERMITICITY_TOL: f64 = 1e-10;

const QL_MAX_ITERS: usize = 60;

/// A dense `rows × cols` complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from a row-major entry vector.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::BadShape {
                    expected: c,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(r, c, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// `|u⟩⟨v|`
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(
                self.rows * self.cols,
                other.rows * other.cols,
            ));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A square complex matrix equal to its own adjoint.
///
/// Construction checks hermiticity against [`HERMITICITY_TOL`] and then
/// symmetrizes exactly, so downstream code may rely on `a_ij == conj(a_ji)`
/// and a real diagonal.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::BadShape {
                expected: m.rows * m.rows,
                got: m.rows * m.cols,
            });
        }
        if m.rows == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        let defect = m.hermiticity_defect();
        if defect > HERMITICITY_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::symmetrized(m))
    }

    /// Takes the Hermitian part `(M + M†)/2` without checking.
    pub(crate) fn symmetrized(mut m: CMatrix) -> Self {
        let n = m.rows;
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in i + 1..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self { inner: m }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(CMatrix::from_rows(rows)?)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: CMatrix::identity(n),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = CMatrix::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(*d, 0.0);
        }
        Self { inner: m }
    }

    /// Real symmetric matrix from row-major entries.
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        let data = entries.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        Self::new(CMatrix::from_vec(n, n, data)?)
    }

    /// `|v⟩⟨v|` (not normalized).
    pub fn outer(v: &[Complex64]) -> Self {
        Self::symmetrized(CMatrix::outer(v, v))
    }

    /// `V diag(values) V†` for a matrix `V` whose columns are the vectors.
    pub fn from_spectrum(values: &[f64], vectors: &CMatrix) -> Self {
        let n = vectors.rows();
        let mut m = CMatrix::zeros(n, n);
        for (k, &lam) in values.iter().enumerate() {
            if lam == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = vectors.data[i * n + k] * lam;
                for j in i..n {
                    m.data[i * n + j] += vik * vectors.data[j * n + k].conj();
                }
            }
        }
        for i in 0..n {
            m.data[i * n + i].im = 0.0;
            for j in i + 1..n {
                m.data[j * n + i] = m.data[i * n + j].conj();
            }
        }
        Self { inner: m }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace().re
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            inner: self.inner.add(&other.inner)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            inner: self.inner.sub(&other.inner)?,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: self.inner.scale(Complex64::new(s, 0.0)),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: f64, other: &Self) -> Result<()> {
        self.check_dim(other)?;
        for (a, b) in self.inner.data.iter_mut().zip(&other.inner.data) {
            *a += b * s;
        }
        Ok(())
    }

    /// `Tr(self · other)`, which is real for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.inner[(i, j)] * other.inner[(j, i)]).re;
            }
        }
        Ok(acc)
    }

    /// `⟨v|M|v⟩`
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += self.inner[(i, j)] * v[j];
            }
            acc += v[i].conj() * row;
        }
        acc.re
    }

    /// `A M A†` for an arbitrary `m × n` matrix `A`.
    pub fn congruence(&self, a: &CMatrix) -> Result<Self> {
        let am = a.matmul(&self.inner)?;
        Ok(Self::symmetrized(am.matmul(&a.adjoint())?))
    }

    /// Spectral decomposition by Householder tridiagonalization and implicit QL.
    pub fn eig(&self) -> SpectralDecomposition {
        let (eigenvalues, eigenvectors) = hermitian_eig(&self.inner, true);
        SpectralDecomposition {
            eigenvalues,
            eigenvectors: eigenvectors.expect("vectors requested"),
        }
    }

    /// Eigenvalues in descending order, without eigenvectors.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&self.inner, false).0
    }

    /// Apply a real function to the spectrum: `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        self.eig().map(f)
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.inner)
    }
}

/// Eigenvalues sorted in descending order together with an orthonormal set
/// of eigenvectors stored as the columns of `eigenvectors`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        HermitianMatrix::from_spectrum(&self.eigenvalues, &self.eigenvectors)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        HermitianMatrix::from_spectrum(&vals, &self.eigenvectors)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Computes the spectral decomposition of `M` (must be Hermitian).
pub fn eig_hermitian(m: &HermitianMatrix) -> SpectralDecomposition {
    m.eig()
}

fn hermitian_eig(m: &CMatrix, vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    let n = m.rows();
    let mut a = m.data.clone();
    let mut q = if vectors { CMatrix::identity(n).data } else { Vec::new() };
    tridiagonalize(&mut a, &mut q, n);

    // rotate the complex off-diagonal to a real nonnegative one
    let mut diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut off = vec![0.0; n];
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let beta = a[(k + 1) * n + k];
        let r = beta.norm();
        off[k] = r;
        phases[k + 1] = if r > 0.0 { phases[k] * (beta / r) } else { phases[k] };
    }
    if !vectors {
        tridiagonal_ql(&mut diag, &mut off, &mut [], n);
        diag.sort_by(|a, b| b.total_cmp(a));
        return (diag, None);
    }
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_ql(&mut diag, &mut off, &mut z, n);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    // eigenvectors of `m` are the columns of Q · diag(phases) · Z
    for (idx, x) in q.iter_mut().enumerate() {
        *x *= phases[idx % n];
    }
    let mut vecs = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        for k in 0..n {
            let qk = q[r * n + k];
            for (c, &col) in order.iter().enumerate() {
                vecs[r * n + c] += qk * z[k * n + col];
            }
        }
    }
    (eigenvalues, Some(CMatrix { rows: n, cols: n, data: vecs }))
}

/// Householder reduction of the row-major Hermitian `a` to tridiagonal form
/// `a ← Q† a Q`, accumulating `Q` into `q`.
fn tridiagonalize(a: &mut [Complex64], q: &mut [Complex64], n: usize) {
    let zero = Complex64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut w = vec![zero; n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let xnorm = (lo..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if xnorm < f64::MIN_POSITIVE {
            continue;
        }
        let x0 = a[lo * n + k];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        for i in lo..n {
            v[i] = a[i * n + k];
        }
        v[lo] = x0 - alpha;
        let tau = 1.0 / (xnorm * (xnorm + x0.norm()));

        let mut vp = 0.0;
        for i in lo..n {
            let mut acc = zero;
            for j in lo..n {
                acc += a[i * n + j] * v[j];
            }
            w[i] = acc * tau;
            vp += (v[i].conj() * w[i]).re;
        }
        let kk = 0.5 * tau * vp;
        for i in lo..n {
            w[i] -= v[i] * kk;
        }
        for i in lo..n {
            for j in lo..n {
                a[i * n + j] -= v[i] * w[j].conj() + w[i] * v[j].conj();
            }
        }
        for i in lo..n {
            a[i * n + k] = zero;
            a[k * n + i] = zero;
        }
        a[lo * n + k] = alpha;
        a[k * n + lo] = alpha.conj();

        for r in 0..q.len() / n {
            let mut acc = zero;
            for i in lo..n {
                acc += q[r * n + i] * v[i];
            }
            acc *= tau;
            for j in lo..n {
                q[r * n + j] -= acc * v[j].conj();
            }
        }
    }
}

/// Implicit QL with Wilkinson shifts on the real symmetric tridiagonal
/// matrix with diagonal `d` and off-diagonal `e` (`e[i]` couples `i` and
/// `i+1`), accumulating rotations into the row-major `z` unless it is empty.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) {
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() < f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l || iter == QL_MAX_ITERS {
                break;
            }
            iter += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = pythag(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                let inv = r.recip();
                s = f * inv;
                c = g * inv;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..z.len() / n {
                    let f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

#[inline]
fn pythag(a: f64, b: f64) -> f64 {
    let r = (a * a + b * b).sqrt();
    if r.is_finite() && r > 1e-150 {
        r
    } else {
        a.hypot(b)
    }
}

/// Sum of absolute eigenvalues.
pub fn trace_norm(m: &HermitianMatrix) -> f64 {
    m.eigenvalues().iter().map(|x| x.abs()).sum()
}

/// Positive and negative parts `M = M₊ − M₋` with `M₊ M₋ = 0`.
pub fn jordan_decomposition(m: &HermitianMatrix) -> (HermitianMatrix, HermitianMatrix) {
    let spec = m.eig();
    (spec.map(|x| x.max(0.0)), spec.map(|x| (-x).max(0.0)))
}
