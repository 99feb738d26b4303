//! Dense complex Hermitian operators.
//!
//! Every composite operation re-Hermitizes its output, `(H + H†)/2`, so that
//! the Hermitian invariant survives floating-point drift. Spectral functions
//! act on the support only: eigenvalues below [`SUPPORT_CUTOFF`] times the
//! largest eigenvalue are treated as exact zeros and mapped to zero.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Relative eigenvalue cutoff defining the support of a PSD operator.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Absolute tolerance for the Hermitian check at construction.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Eigenvalues below `-PSD_TOLERANCE` (scaled by the spectral radius when it exceeds one)
/// reject an operator as not positive semidefinite.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Trace tolerance for density matrices.
pub const TRACE_TOLERANCE: f64 = 1e-10;

/// Hard cap on the dimension of any dense operator.
pub const MAX_DIM: usize = 1 << 14;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Spectral decomposition `H = V diag(values) V†` with eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: DMatrix<Complex64>,
}

impl Eigen {
    pub fn reconstruct(&self) -> HermitianMatrix {
        spectral_sum(&self.vectors, &self.values)
    }
}

/// A dense complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Wraps `m` after checking squareness and Hermiticity within [`HERMITIAN_TOLERANCE`].
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(m, HERMITIAN_TOLERANCE)
    }

    /// Like [`HermitianMatrix::new`] with a caller-chosen tolerance. The accepted
    /// matrix is Hermitized.
    pub fn with_tolerance(m: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        let deviation = hermitian_deviation(&m);
        if !(deviation <= tol) {
            return Err(Error::InvalidOperator { deviation });
        }
        Ok(Self::hermitized(m))
    }

    /// Replaces `m` by `(m + m†)/2` unconditionally.
    pub fn hermitized(mut m: DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "hermitized requires a square matrix");
        let d = m.nrows();
        for i in 0..d {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..d {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self { inner: m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { inner: DMatrix::from_element(dim, dim, ZERO) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { inner: DMatrix::identity(dim, dim) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut m = DMatrix::from_element(d, d, ZERO);
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { inner: m }
    }

    /// Rank-one projector `|v⟩⟨v|` (not normalized).
    pub fn outer(v: &[Complex64]) -> Self {
        let d = v.len();
        Self { inner: DMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj()) }
    }

    /// Builds from row-major real/imaginary parts, checking Hermiticity.
    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        Self::from_rows_with_tolerance(rows, HERMITIAN_TOLERANCE)
    }

    pub fn from_rows_with_tolerance(rows: &[&[Complex64]], tol: f64) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            let found = rows.iter().map(|r| r.len()).find(|&l| l != d).unwrap_or(d);
            return Err(Error::NotSquare { rows: d, cols: found });
        }
        Self::with_tolerance(DMatrix::from_fn(d, d, |i, j| rows[i][j]), tol)
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).collect()
    }

    /// True when every off-diagonal entry is exactly zero.
    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        (0..d).all(|j| (0..d).all(|i| i == j || self.inner[(i, j)] == ZERO))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max).sqrt_or_zero()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { inner: self.inner.map(|z| z * c) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { inner: &self.inner + &other.inner }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { inner: &self.inner - &other.inner }
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        assert_eq!(self.dim(), other.dim());
        for (a, b) in self.inner.iter_mut().zip(other.inner.iter()) {
            *a += b * c;
        }
    }

    /// Operator-norm bound used for comparisons: the largest |eigenvalue|.
    pub fn operator_norm(&self) -> f64 {
        let e = self.eig();
        e.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Real part of `tr(self · other)`, in O(d²).
    pub fn trace_product(&self, other: &Self) -> f64 {
        let d = self.dim();
        assert_eq!(d, other.dim());
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                let a = self.inner[(i, j)];
                let b = other.inner[(j, i)];
                acc += a.re * b.re - a.im * b.im;
            }
        }
        acc
    }

    /// `self · inner · self`, Hermitized. Diagonal operands take an O(d²) path.
    pub fn sandwich(&self, inner: &Self) -> Self {
        let d = self.dim();
        assert_eq!(d, inner.dim());
        if self.is_diagonal() {
            let s = self.diagonal();
            let m = DMatrix::from_fn(d, d, |i, j| inner.inner[(i, j)] * (s[i] * s[j]));
            return Self::hermitized(m);
        }
        let tmp = &self.inner * &inner.inner;
        Self::hermitized(tmp * &self.inner)
    }

    /// Largest entry of the commutator `[self, other]`.
    pub(crate) fn commutator_norm(&self, other: &Self) -> f64 {
        let ab = &self.inner * &other.inner;
        let ba = &other.inner * &self.inner;
        (ab - ba).iter().map(|z| z.norm_sqr()).fold(0.0, f64::max).sqrt_or_zero()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self { inner: self.inner.kronecker(&other.inner) }
    }

    /// Partial trace over all subsystems not listed in `keep`.
    ///
    /// `dims` gives the subsystem dimensions in tensor order; `keep` lists the
    /// retained subsystem indices (order is ignored, output follows tensor order).
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != self.dim() || dims.is_empty() {
            return Err(Error::DimensionError { expected: self.dim(), found: total });
        }
        if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
            return Err(Error::DimensionError { expected: dims.len(), found: bad + 1 });
        }
        let kept: Vec<bool> = (0..dims.len()).map(|k| keep.contains(&k)).collect();
        let kept_dim: usize = dims.iter().zip(&kept).filter(|(_, &k)| k).map(|(d, _)| d).product();
        let traced_dim = total / kept_dim;

        // Split every full index into (kept index, traced index).
        let mut groups: Vec<Vec<usize>> = vec![vec![0; kept_dim]; traced_dim];
        for full in 0..total {
            let mut rem = full;
            let (mut k_idx, mut t_idx) = (0usize, 0usize);
            let (mut k_stride, mut t_stride) = (1usize, 1usize);
            for s in (0..dims.len()).rev() {
                let digit = rem % dims[s];
                rem /= dims[s];
                if kept[s] {
                    k_idx += digit * k_stride;
                    k_stride *= dims[s];
                } else {
                    t_idx += digit * t_stride;
                    t_stride *= dims[s];
                }
            }
            groups[t_idx][k_idx] = full;
        }

        let mut out = DMatrix::from_element(kept_dim, kept_dim, ZERO);
        for g in &groups {
            for (a, &ra) in g.iter().enumerate() {
                for (b, &rb) in g.iter().enumerate() {
                    out[(a, b)] += self.inner[(ra, rb)];
                }
            }
        }
        Ok(Self::hermitized(out))
    }

    /// Eigendecomposition with eigenvalues sorted in descending order.
    pub fn eig(&self) -> Eigen {
        let d = self.dim();
        let (values, vectors) = if self.is_diagonal() {
            (self.diagonal(), DMatrix::identity(d, d))
        } else {
            let e = self.inner.clone().symmetric_eigen();
            (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
        };
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let sorted_values = order.iter().map(|&i| values[i]).collect();
        let sorted_vectors = DMatrix::from_fn(d, d, |r, c| vectors[(r, order[c])]);
        Eigen { values: sorted_values, vectors: sorted_vectors }
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.is_diagonal() {
            let mut v = self.diagonal();
            v.sort_by(|a, b| b.total_cmp(a));
            return v;
        }
        self.eig().values
    }

    /// Applies `f` to every eigenvalue classified by [`Spectrum`]: eigenvalues
    /// inside the support are passed to `f`, the rest map to zero.
    ///
    /// Fails with [`Error::NotPsd`] if an eigenvalue lies below the PSD tolerance.
    pub fn map_support(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let d = self.dim();
        if self.is_diagonal() {
            let diag = self.diagonal();
            let spec = Spectrum::classify(&diag)?;
            let mapped: Vec<f64> = diag.iter().map(|&l| spec.apply(l, &f)).collect();
            return Ok(Self::from_diagonal(&mapped));
        }
        let e = self.eig();
        let spec = Spectrum::classify(&e.values)?;
        let mapped: Vec<f64> = e.values.iter().map(|&l| spec.apply(l, &f)).collect();
        debug_assert_eq!(mapped.len(), d);
        Ok(spectral_sum(&e.vectors, &mapped))
    }

    /// Fractional power `A^t` on the support of a PSD operator.
    pub fn power(&self, t: f64) -> Result<Self> {
        if t == 1.0 {
            Spectrum::check_psd(&self.eigenvalues())?;
            return Ok(self.clone());
        }
        self.map_support(|l| math::pow(l, t))
    }

    /// Orthogonal projector onto the support, with the given relative cutoff.
    pub fn support_projector(&self, rel_cutoff: f64) -> Result<Self> {
        let indicator = |values: &[f64]| -> Result<Vec<f64>> {
            let lmax = Spectrum::check_psd(values)?;
            let cut = rel_cutoff * lmax;
            Ok(values.iter().map(|&l| if lmax > 0.0 && l > cut { 1.0 } else { 0.0 }).collect())
        };
        if self.is_diagonal() {
            return Ok(Self::from_diagonal(&indicator(&self.diagonal())?));
        }
        let e = self.eig();
        Ok(spectral_sum(&e.vectors, &indicator(&e.values)?))
    }

    /// Projector onto the kernel (complement of [`HermitianMatrix::support_projector`]).
    pub fn kernel_projector(&self, rel_cutoff: f64) -> Result<Self> {
        Ok(Self::identity(self.dim()).sub(&self.support_projector(rel_cutoff)?))
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }
}

impl AsRef<HermitianMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        self
    }
}

/// Support classification of a spectrum.
struct Spectrum {
    cut: f64,
}

impl Spectrum {
    fn check_psd(values: &[f64]) -> Result<f64> {
        let lmax = values.iter().copied().fold(0.0, f64::max);
        let lmin = values.iter().copied().fold(f64::INFINITY, f64::min);
        if lmin < -PSD_TOLERANCE * lmax.max(1.0) {
            return Err(Error::NotPsd { min_eigenvalue: lmin });
        }
        Ok(lmax)
    }

    fn classify(values: &[f64]) -> Result<Self> {
        let lmax = Self::check_psd(values)?;
        Ok(Self { cut: SUPPORT_CUTOFF * lmax })
    }

    fn apply(&self, l: f64, f: impl Fn(f64) -> f64) -> f64 {
        if l > self.cut && l > 0.0 {
            f(l)
        } else {
            0.0
        }
    }
}

/// `V diag(values) V†`, Hermitized.
fn spectral_sum(vectors: &DMatrix<Complex64>, values: &[f64]) -> HermitianMatrix {
    let d = vectors.nrows();
    let mut scaled = vectors.clone();
    for (c, &v) in values.iter().enumerate() {
        for r in 0..d {
            scaled[(r, c)] *= v;
        }
    }
    HermitianMatrix::hermitized(scaled * vectors.adjoint())
}

fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let d = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..d {
        for j in i..d {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm_sqr());
        }
    }
    dev.sqrt_or_zero()
}

trait SqrtOrZero {
    fn sqrt_or_zero(self) -> f64;
}

impl SqrtOrZero for f64 {
    fn sqrt_or_zero(self) -> f64 {
        if self > 0.0 {
            math::sqrt(self)
        } else {
            0.0
        }
    }
}

/// A quantum state: PSD Hermitian operator with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianMatrix,
}

impl DensityMatrix {
    /// Validates PSD within [`PSD_TOLERANCE`] and unit trace within [`TRACE_TOLERANCE`].
    pub fn new(op: HermitianMatrix) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidTrace { trace });
        }
        let lmin = op.min_eigenvalue();
        if lmin < -PSD_TOLERANCE {
            return Err(Error::NotPsd { min_eigenvalue: lmin });
        }
        Ok(Self { op })
    }

    /// Rescales a PSD operator to unit trace.
    pub fn normalized(op: HermitianMatrix) -> Result<Self> {
        let tr = op.trace();
        if !(tr > 0.0) {
            return Err(Error::InvalidTrace { trace: tr });
        }
        Self::new(op.scale(1.0 / tr))
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_diagonal(probs))
    }

    /// Pure state `|ψ⟩⟨ψ|` for a normalized or unnormalized vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        Self::normalized(HermitianMatrix::outer(psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { op: HermitianMatrix::identity(dim).scale(1.0 / dim as f64) }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.op
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.op
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { op: self.op.tensor(&other.op) }
    }
}

impl AsRef<HermitianMatrix> for DensityMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        &self.op
    }
}

/// Von Neumann entropy `-Σ λ log₂ λ` in bits, clamped to `[0, log₂ d]`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = -rho.op.eigenvalues().into_iter().map(math::xlog2x).sum::<f64>();
    s.max(0.0).min(math::log2(rho.dim() as f64))
}

/// Tensor product of many factors, left to right.
pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a HermitianMatrix>) -> HermitianMatrix {
    let mut acc = HermitianMatrix { inner: DMatrix::from_element(1, 1, ONE) };
    for f in factors {
        acc = acc.tensor(f);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let e = HermitianMatrix::identity(2).eig();
        assert_eq!(e.values, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_eig_is_exact() {
        let e = HermitianMatrix::from_diagonal(&[3.0, 1.0]).eig();
        assert_eq!(e.values, vec![3.0, 1.0]);
        assert_eq!(e.vectors, DMatrix::identity(2, 2));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::InvalidOperator { .. })));
    }

    #[test]
    fn power_of_identity() {
        let p = HermitianMatrix::identity(3).power(0.7).unwrap();
        assert!(p.sub(&HermitianMatrix::identity(3)).max_abs() < 1e-15);
    }

    #[test]
    fn power_on_support_only() {
        let p = HermitianMatrix::from_diagonal(&[4.0, 0.0]).power(0.5).unwrap();
        assert_eq!(p.diagonal(), vec![2.0, 0.0]);
        let inv = HermitianMatrix::from_diagonal(&[4.0, 0.0]).power(-0.5).unwrap();
        assert_eq!(inv.diagonal(), vec![0.5, 0.0]);
    }

    #[test]
    fn power_rejects_negative_spectrum() {
        let err = HermitianMatrix::from_diagonal(&[1.0, -0.1]).power(0.5).unwrap_err();
        assert!(matches!(err, Error::NotPsd { .. }));
        let rotated = HermitianMatrix::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert!(matches!(rotated.power(0.3), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn tensor_of_diagonals() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 0.0]);
        let b = HermitianMatrix::from_diagonal(&[0.0, 1.0]);
        assert_eq!(a.tensor(&b).diagonal(), vec![0.0, 1.0, 0.0, 0.0]);
        assert!(a.tensor(&b).is_diagonal());
        let i2 = HermitianMatrix::identity(2);
        assert_eq!(i2.tensor(&i2), HermitianMatrix::identity(4));
    }

    #[test]
    fn partial_trace_of_bell_state() {
        let s = 1.0 / math::sqrt(2.0);
        let bell = HermitianMatrix::outer(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]);
        let marg = bell.partial_trace(&[2, 2], &[0]).unwrap();
        assert!(marg.sub(&HermitianMatrix::identity(2).scale(0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_product_state() {
        let rho = DensityMatrix::pure(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let sigma = DensityMatrix::maximally_mixed(3);
        let joint = rho.as_hermitian().tensor(sigma.as_hermitian());
        let back = joint.partial_trace(&[2, 3], &[0]).unwrap();
        assert!(back.sub(rho.as_hermitian()).max_abs() < 1e-14);
        let other = joint.partial_trace(&[2, 3], &[1]).unwrap();
        assert!(other.sub(sigma.as_hermitian()).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_dims_mismatch() {
        let m = HermitianMatrix::identity(4);
        assert!(matches!(m.partial_trace(&[2, 3], &[0]), Err(Error::DimensionError { .. })));
    }

    #[test]
    fn entropy_values() {
        let pure = DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(2)) - 1.0).abs() < 1e-15);
        let rho = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        // h2(0.25)
        let h = -(0.25 * math::log2(0.25) + 0.75 * math::log2(0.75));
        assert!((von_neumann_entropy(&rho) - h).abs() < 1e-15);
        assert!((h - 0.811_278_124_459_132_8).abs() < 1e-15);
    }

    #[test]
    fn density_validation() {
        assert!(matches!(DensityMatrix::diagonal(&[0.5, 0.6]), Err(Error::InvalidTrace { .. })));
        assert!(matches!(DensityMatrix::diagonal(&[1.5, -0.5]), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn support_and_kernel_projectors() {
        let plus = DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        let supp = plus.as_hermitian().support_projector(1e-10).unwrap();
        assert!(supp.sub(plus.as_hermitian()).max_abs() < 1e-12);
        let ker = plus.as_hermitian().kernel_projector(1e-10).unwrap();
        assert!((ker.trace() - 1.0).abs() < 1e-12);
    }
}
