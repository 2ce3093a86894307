//! Dense complex linear algebra at desk scale.
//!
//! Everything here is self-contained: a row-major [`ComplexMatrix`], a
//! validated [`HermitianOperator`], and a cyclic Jacobi eigensolver whose
//! output is bit-for-bit deterministic for identical input. The remaining
//! operations (square roots, operator norms, unitary completion) are built
//! on top of [`hermitian_eig`].

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative tolerance on `‖A − A†‖_max` accepted by [`HermitianOperator::new`].
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
/// Eigenvalues in `[−PSD_CLAMP, 0)` are treated as zero by PSD operations.
pub const PSD_CLAMP: f64 = 1e-10;
/// Isometry / unitarity tolerance for [`complete_to_unitary`].
pub const ISOMETRY_TOLERANCE: f64 = 1e-10;
/// Candidate basis vectors with a smaller residual are skipped during completion.
pub const COMPLETION_RESIDUAL: f64 = 1e-8;

const JACOBI_RELATIVE_OFF: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub(crate) fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::default(); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = re(1.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite(format!(
                "entry ({}, {}) is not finite",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::from_row_major(r, cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| re(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = re(v);
        }
        m
    }

    /// `v w†`
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        let mut m = Self::zeros(v.len(), w.len());
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m[(i, j)] = vi * wj.conj();
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape("columns of unequal length".into()));
        }
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        Ok(m)
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::default() {
                    continue;
                }
                for j in 0..other.cols {
                    m.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Largest entry modulus, `‖A‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `‖A − B‖_max`; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖A − A†‖_max` for a square matrix.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Copies `block` into this matrix with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(row + i, col + j)];
            }
        }
        m
    }

    pub fn to_nested(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for ComplexMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[a, b]| c(a, b)).collect())
            .collect();
        Self::from_rows(&rows)
    }
}

impl From<ComplexMatrix> for Vec<Vec<[f64; 2]>> {
    fn from(m: ComplexMatrix) -> Self {
        m.to_nested()
    }
}

/// A square complex matrix that is Hermitian up to [`HERMITICITY_TOLERANCE`].
///
/// The stored matrix is the exact Hermitian part `(A + A†)/2` of the input,
/// so downstream code never sees the residual asymmetry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape(format!(
                "operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let deviation = matrix.hermiticity_deviation();
        let allowed = HERMITICITY_TOLERANCE * matrix.max_abs();
        if deviation > allowed {
            return Err(Error::NotHermitian { deviation, allowed });
        }
        Ok(Self::hermitian_part(&matrix))
    }

    /// Takes the Hermitian part of a square matrix without checking how far
    /// the input was from Hermitian. Used for products that are Hermitian
    /// in exact arithmetic.
    pub(crate) fn hermitian_part(matrix: &ComplexMatrix) -> Self {
        let n = matrix.rows();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = re(matrix[(i, i)].re);
            for j in (i + 1)..n {
                let z = (matrix[(i, j)] + matrix[(j, i)].conj()) * 0.5;
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Self { matrix: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::zeros(dim, dim),
        }
    }

    /// `w · v v†` for real `w`.
    pub fn rank_one(weight: f64, v: &[C64]) -> Self {
        Self::hermitian_part(&ComplexMatrix::outer(v, v).scale(re(weight)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `⟨v, A v⟩`, real for Hermitian `A`.
    pub fn expectation(&self, v: &[C64]) -> Result<f64> {
        let av = self.matrix.mul_vec(v)?;
        Ok(inner(v, &av).re)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::hermitian_part(&self.matrix.add(&other.matrix)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self::hermitian_part(&self.matrix.sub(&other.matrix)?))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(re(s)),
        }
    }

    /// `B† A B` as a Hermitian operator.
    pub fn conjugate_by(&self, b: &ComplexMatrix) -> Result<Self> {
        let ab = self.matrix.matmul(b)?;
        Ok(Self::hermitian_part(&b.adjoint().matmul(&ab)?))
    }
}

impl TryFrom<ComplexMatrix> for HermitianOperator {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<HermitianOperator> for ComplexMatrix {
    fn from(h: HermitianOperator) -> Self {
        h.matrix
    }
}

/// Eigenvalues in descending order with matching orthonormal eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<C64>>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ f(λ_k) v_k v_k†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (&lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = v[i] * w;
                for j in 0..n {
                    m[(i, j)] += vi * v[j].conj();
                }
            }
        }
        HermitianOperator::hermitian_part(&m)
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.reconstruct_with(|x| x)
    }

    /// Matrix with the eigenvectors as columns.
    pub fn vectors_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.eigenvectors).expect("eigenvectors share a length")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// `⟨a, b⟩ = Σ conj(a_i) b_i`
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vector_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Rotates `v` so that its first non-negligible component is real positive.
pub(crate) fn fix_phase(v: &mut [C64]) {
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return;
    }
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-10 * scale).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian operator.
///
/// Sweeps the strict upper triangle row by row, each rotation zeroing one
/// off-diagonal pair, until the off-diagonal Frobenius norm drops to
/// `1e-13 ‖A‖_F` or 100 sweeps have run. Eigenvalues are sorted descending
/// (ties keep their diagonal index order) and every eigenvector is rotated
/// so its first non-negligible component is real positive.
pub fn hermitian_eig(a: &HermitianOperator) -> SpectralDecomposition {
    let n = a.dim();
    let mut m = a.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    let target = JACOBI_RELATIVE_OFF * m.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| {
            let mut col = v.column(k);
            fix_phase(&mut col);
            col
        })
        .collect();
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi rotation annihilating `m[p][q]`, accumulated into `v`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Phase e^{-iθ} on column q makes the pivot real, then a real rotation.
    let phase = apq.conj() / r;
    let theta = 0.5 * (aqq - app) / r;
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // J restricted to (p, q): [[c, s], [-s e^{-iθ}, c e^{-iθ}]]
    let j_pp = re(cs);
    let j_pq = re(sn);
    let j_qp = phase * (-sn);
    let j_qq = phase * cs;

    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * j_pp + mkq * j_qp;
        m[(k, q)] = mkp * j_pq + mkq * j_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = j_pp.conj() * mpk + j_qp.conj() * mqk;
        m[(q, k)] = j_pq.conj() * mpk + j_qq.conj() * mqk;
    }
    m[(p, q)] = C64::default();
    m[(q, p)] = C64::default();
    m[(p, p)] = re(m[(p, p)].re);
    m[(q, q)] = re(m[(q, q)].re);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Unique PSD square root. Eigenvalues in `[−1e-10, 0)` are clamped to zero.
pub fn psd_sqrt(a: &HermitianOperator) -> Result<HermitianOperator> {
    let spec = hermitian_eig(a);
    check_psd(&spec)?;
    // eigenvalues at the roundoff level of the spectrum are zeros; their
    // square roots would otherwise inflate to ~1e-8
    let scale = spec.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = 16.0 * f64::EPSILON * spec.dim() as f64 * scale;
    Ok(spec.reconstruct_with(|x| if x <= floor { 0.0 } else { x.sqrt() }))
}

/// `A^{-1/2}` for a positive definite operator whose smallest eigenvalue
/// exceeds `floor`.
pub fn psd_inverse_sqrt(a: &HermitianOperator, floor: f64) -> Result<HermitianOperator> {
    let spec = hermitian_eig(a);
    let min = spec.min_eigenvalue();
    if min <= floor {
        return Err(Error::Singular(format!(
            "smallest eigenvalue {min:e} does not exceed {floor:e}"
        )));
    }
    Ok(spec.reconstruct_with(|x| 1.0 / x.sqrt()))
}

fn check_psd(spec: &SpectralDecomposition) -> Result<()> {
    let min = spec.min_eigenvalue();
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd {
            index: None,
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Largest singular value, from the top eigenvalue of `A†A`.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let gram = a.adjoint().matmul(a).expect("A†A is always conformable");
    let spec = hermitian_eig(&HermitianOperator::hermitian_part(&gram));
    spec.max_eigenvalue().max(0.0).sqrt()
}

/// Extends an isometry `W` (D×d, orthonormal columns) to a D×D unitary whose
/// first d columns are exactly `W`.
///
/// New columns come from Gram–Schmidt (two passes) over the standard basis in
/// index order; candidates whose residual norm falls below `1e-8` are skipped.
pub fn complete_to_unitary(w: &ComplexMatrix) -> Result<ComplexMatrix> {
    let big = w.rows();
    let small = w.cols();
    if small > big {
        return Err(Error::Shape(format!(
            "isometry must have at least as many rows as columns, got {big}x{small}"
        )));
    }
    let gram = w.adjoint().matmul(w)?;
    let deviation = gram.max_abs_diff(&ComplexMatrix::identity(small));
    if deviation > ISOMETRY_TOLERANCE {
        return Err(Error::NotIsometry { deviation });
    }

    let mut columns: Vec<Vec<C64>> = (0..small).map(|j| w.column(j)).collect();
    for k in 0..big {
        if columns.len() == big {
            break;
        }
        let mut cand = vec![C64::default(); big];
        cand[k] = re(1.0);
        for _ in 0..2 {
            for col in &columns {
                let proj = inner(col, &cand);
                for (x, y) in cand.iter_mut().zip(col) {
                    *x -= proj * y;
                }
            }
        }
        let norm = vector_norm(&cand);
        if norm < COMPLETION_RESIDUAL {
            continue;
        }
        for x in cand.iter_mut() {
            *x /= norm;
        }
        columns.push(cand);
    }
    if columns.len() != big {
        return Err(Error::Completion(format!(
            "found {} of {big} orthonormal columns",
            columns.len()
        )));
    }
    ComplexMatrix::from_columns(&columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn herm(rows: &[&[f64]]) -> HermitianOperator {
        HermitianOperator::new(ComplexMatrix::from_real_rows(rows).unwrap()).unwrap()
    }

    fn unitary_deviation(u: &ComplexMatrix) -> f64 {
        u.adjoint()
            .matmul(u)
            .unwrap()
            .max_abs_diff(&ComplexMatrix::identity(u.cols()))
    }

    #[test]
    fn eig_identity() {
        let spec = hermitian_eig(&HermitianOperator::identity(3));
        assert_eq!(spec.eigenvalues, vec![1.0, 1.0, 1.0]);
        for (k, v) in spec.eigenvectors.iter().enumerate() {
            for (i, z) in v.iter().enumerate() {
                assert_eq!(*z, re(if i == k { 1.0 } else { 0.0 }));
            }
        }
    }

    #[test]
    fn eig_diagonal_keeps_standard_basis() {
        let spec = hermitian_eig(&herm(&[&[2.0, 0.0], &[0.0, -1.0]]));
        assert_eq!(spec.eigenvalues, vec![2.0, -1.0]);
        assert_eq!(spec.eigenvectors[0], vec![re(1.0), re(0.0)]);
        assert_eq!(spec.eigenvectors[1], vec![re(0.0), re(1.0)]);
    }

    #[test]
    fn eig_pauli_x() {
        let spec = hermitian_eig(&herm(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] + 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((spec.eigenvectors[0][0] - re(s)).norm() < 1e-14);
        assert!((spec.eigenvectors[0][1] - re(s)).norm() < 1e-14);
        // sign convention: leading component real positive
        assert!((spec.eigenvectors[1][0] - re(s)).norm() < 1e-14);
        assert!((spec.eigenvectors[1][1] - re(-s)).norm() < 1e-14);
    }

    #[test]
    fn eig_complex_pauli_y() {
        let y = HermitianOperator::new(
            ComplexMatrix::from_rows(&[vec![re(0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), re(0.0)]])
                .unwrap(),
        )
        .unwrap();
        let spec = hermitian_eig(&y);
        assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!(spec.reconstruct().matrix().max_abs_diff(y.matrix()) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.5, 0.0]]).unwrap();
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { deviation, .. }) => assert!((deviation - 0.5).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            ComplexMatrix::from_row_major(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn sqrt_cases() {
        let id = HermitianOperator::identity(2);
        assert!(psd_sqrt(&id).unwrap().matrix().max_abs_diff(id.matrix()) < 1e-15);

        let p = HermitianOperator::rank_one(1.0, &[re(0.6), c(0.0, 0.8)]);
        let diff = psd_sqrt(&p).unwrap().matrix().max_abs_diff(p.matrix());
        assert!(diff < 1e-12, "{diff}");

        let r = psd_sqrt(&herm(&[&[4.0, 0.0], &[0.0, 9.0]])).unwrap();
        assert!(
            r.matrix()
                .max_abs_diff(&ComplexMatrix::diagonal(&[2.0, 3.0]))
                < 1e-15
        );
    }

    #[test]
    fn sqrt_clamps_roundoff_and_rejects_negative() {
        let tiny = herm(&[&[1.0, 0.0], &[0.0, -5e-11]]);
        let r = psd_sqrt(&tiny).unwrap();
        assert_eq!(r.matrix()[(1, 1)], re(0.0));
        assert!(matches!(
            psd_sqrt(&herm(&[&[1.0, 0.0], &[0.0, -1e-6]])),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn norm_cases() {
        assert!((operator_norm(&ComplexMatrix::identity(2)) - 1.0).abs() < 1e-15);
        let v = [re(0.6), c(0.0, 0.8)];
        let m = HermitianOperator::rank_one(0.37, &v);
        assert!((operator_norm(m.matrix()) - 0.37).abs() < 1e-14);
        // non-square: [[3, 4]] has singular value 5
        let row = ComplexMatrix::from_real_rows(&[&[3.0, 4.0]]).unwrap();
        assert!((operator_norm(&row) - 5.0).abs() < 1e-13);
    }

    #[test]
    fn completion_cases() {
        let id = ComplexMatrix::identity(3);
        assert_eq!(complete_to_unitary(&id).unwrap(), id);

        let e0 = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0], &[0.0]]).unwrap();
        assert_eq!(
            complete_to_unitary(&e0).unwrap(),
            ComplexMatrix::identity(3)
        );

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let w = ComplexMatrix::from_real_rows(&[&[s], &[s]]).unwrap();
        let u = complete_to_unitary(&w).unwrap();
        assert_eq!(u.column(0), w.column(0));
        assert!(unitary_deviation(&u) < 1e-15);
    }

    #[test]
    fn completion_rejects_non_isometry() {
        let w = ComplexMatrix::from_real_rows(&[&[1.0], &[1.0]]).unwrap();
        assert!(matches!(
            complete_to_unitary(&w),
            Err(Error::NotIsometry { .. })
        ));
    }
}
