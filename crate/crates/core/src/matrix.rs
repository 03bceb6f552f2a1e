//! Small dense complex linear algebra.
//!
//! Every matrix in this crate is square with dimension 1 to 4, so storage is a
//! fixed `[Complex64; 16]` buffer and the type is `Copy`. Eigen- and
//! singular-value problems are solved with Jacobi sweeps, which are
//! deterministic and accurate at this size.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;

/// Default tolerance for exact algebraic identities.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

pub type ComplexVector = Vec<Complex64>;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

impl ComplexMatrix {
    /// Zero matrix. Panics if `dim` is outside `1..=4`.
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "unsupported matrix dimension {dim}");
        Self {
            dim,
            data: [ZERO; MAX_DIM * MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        check_dim(diag.len())?;
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Ok(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let d: Vec<Complex64> = diag.iter().map(|&x| c(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// Build from row slices; all rows must have the matrix dimension.
    pub fn from_rows(rows: &[&[Complex64]]) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    /// Build from column vectors of length `dim`.
    pub fn from_columns(dim: usize, columns: &[ComplexVector]) -> Result<Self> {
        check_dim(dim)?;
        if columns.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: columns.len(),
            });
        }
        let mut m = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: col.len(),
                });
            }
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    /// Assemble a 4×4 matrix from four 2×2 blocks `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, cc: &Self, d: &Self) -> Result<Self> {
        for blk in [a, b, cc, d] {
            if blk.dim != 2 {
                return Err(Error::DimensionMismatch {
                    left: 2,
                    right: blk.dim,
                });
            }
        }
        let mut m = Self::zeros(4);
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = a[(i, j)];
                m[(i, j + 2)] = b[(i, j)];
                m[(i + 2, j)] = cc[(i, j)];
                m[(i + 2, j + 2)] = d[(i, j)];
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let mut m = *self;
        for v in m.data.iter_mut().take(self.dim * MAX_DIM) {
            *v = f(*v);
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        same_dim(self, rhs)?;
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(m)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        same_dim(self, rhs)?;
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] += rhs[(i, j)];
            }
        }
        Ok(m)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        same_dim(self, rhs)?;
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] -= rhs[(i, j)];
            }
        }
        Ok(m)
    }

    pub fn apply(&self, v: &[Complex64]) -> ComplexVector {
        assert_eq!(v.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += self[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Spectral (operator 2-) norm: the largest singular value.
    pub fn op_norm(&self) -> f64 {
        singular_values(self).into_iter().fold(0.0, f64::max)
    }

    /// `‖A − A†‖_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.frobenius_norm() <= tol
    }

    pub fn determinant(&self) -> Complex64 {
        determinant(&self.data, self.dim, MAX_DIM)
    }

    /// Numerical rank: singular values above `tol · σ_max`.
    pub fn rank(&self, tol: f64) -> usize {
        let sv = singular_values(self);
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        if smax == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > tol * smax).count()
    }

    /// `‖A B − B A‖` style distance helper: `‖self − other‖_F`.
    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).frobenius_norm()
    }

    /// Restriction `Bᴴ A B` to the span of an orthonormal basis.
    pub fn restrict(&self, basis: &Subspace) -> Result<Self> {
        if basis.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: basis.ambient_dim(),
            });
        }
        let k = basis.dim();
        check_dim(k)?;
        let mut m = Self::zeros(k);
        let images: Vec<ComplexVector> = basis.vectors().iter().map(|v| self.apply(v)).collect();
        for (i, u) in basis.vectors().iter().enumerate() {
            for (j, av) in images.iter().enumerate() {
                m[(i, j)] = inner(u, av);
            }
        }
        Ok(m)
    }
}

fn determinant(data: &[Complex64], n: usize, stride: usize) -> Complex64 {
    match n {
        1 => data[0],
        2 => data[0] * data[stride + 1] - data[1] * data[stride],
        _ => {
            let mut det = ZERO;
            let mut minor = [ZERO; MAX_DIM * MAX_DIM];
            for col in 0..n {
                for i in 1..n {
                    let mut jj = 0;
                    for j in 0..n {
                        if j == col {
                            continue;
                        }
                        minor[(i - 1) * MAX_DIM + jj] = data[i * stride + j];
                        jj += 1;
                    }
                }
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                det += data[col] * sign * determinant(&minor, n - 1, MAX_DIM);
            }
            det
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidDimension(n))
    }
}

fn same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim == b.dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i * MAX_DIM + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i * MAX_DIM + j]
    }
}

// The operator impls panic on a dimension mismatch; use the `try_*` methods
// where the dimensions are not known to agree.
impl Mul for ComplexMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for ComplexMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("matrix sum dimension mismatch")
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("matrix difference dimension mismatch")
    }
}

impl Neg for ComplexMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|z| -z)
    }
}

impl Mul<Complex64> for ComplexMatrix {
    type Output = Self;
    fn mul(self, s: Complex64) -> Self {
        self.scale(s)
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale_real(s)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// `AB − BA` or `AB + BA`.
pub fn bracket(a: &ComplexMatrix, b: &ComplexMatrix, kind: BracketKind) -> Result<ComplexMatrix> {
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    Ok(match kind {
        BracketKind::Commutator => ab - ba,
        BracketKind::Anticommutator => ab + ba,
    })
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    bracket(a, b, BracketKind::Commutator).expect("commutator dimension mismatch")
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    bracket(a, b, BracketKind::Anticommutator).expect("anticommutator dimension mismatch")
}

pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vector_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn unit_vector(dim: usize, k: usize) -> ComplexVector {
    let mut v = vec![ZERO; dim];
    v[k] = ONE;
    v
}

/// Singular values and right singular vectors by one-sided (Hestenes) Jacobi.
///
/// Returns `(sigma, v)` where column `k` of `v` is the right singular vector
/// for `sigma[k]`. Zero singular values come out at roundoff level relative to
/// `‖A‖`, which is what kernel extraction needs.
pub fn singular_decomposition(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = a.dim();
    let mut u = *a;
    let mut v = ComplexMatrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..n {
                    alpha += u[(k, i)].norm_sqr();
                    beta += u[(k, j)].norm_sqr();
                    gamma += u[(k, i)].conj() * u[(k, j)];
                }
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let pc = phase.conj();
                for m in [&mut u, &mut v] {
                    for k in 0..n {
                        let xi = m[(k, i)];
                        let xj = m[(k, j)] * pc;
                        m[(k, i)] = xi * cs - xj * sn;
                        m[(k, j)] = xi * sn + xj * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = (0..n)
        .map(|j| (0..n).map(|k| u[(k, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    (sigma, v)
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    singular_decomposition(a).0
}

/// Orthonormal basis of the null space of `a`; singular values at or below
/// `tol · σ_max` count as zero. The zero matrix has the whole space as kernel.
pub fn kernel_basis(a: &ComplexMatrix, tol: f64) -> Subspace {
    let n = a.dim();
    let (sigma, v) = singular_decomposition(a);
    let smax = sigma.iter().cloned().fold(0.0, f64::max);
    let vectors: Vec<ComplexVector> = (0..n)
        .filter(|&k| smax == 0.0 || sigma[k] <= tol * smax)
        .map(|k| v.column(k))
        .collect();
    // Jacobi columns are orthonormal already; re-orthonormalize against drift.
    Subspace::span(n, &vectors, 1e-8).expect("kernel vectors have ambient dimension")
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
///
/// Eigenvalues are returned in ascending order with orthonormal eigenvectors.
pub fn hermitian_eigen(a: &ComplexMatrix, tol: f64) -> Result<Vec<(f64, ComplexVector)>> {
    let scale = a.frobenius_norm();
    let residual = a.hermiticity_residual();
    if residual > tol * scale.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(Error::NotHermitian {
            residual: if scale > 0.0 { residual / scale } else { residual },
        });
    }
    let n = a.dim();
    // Symmetrize so roundoff asymmetry does not leak into the sweep.
    let mut m = (*a + a.adjoint()) * 0.5;
    let mut v = ComplexMatrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m[(i, j)].norm_sqr();
                }
            }
        }
        if off == 0.0 || off.sqrt() <= f64::EPSILON * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 || r <= 1e-3 * f64::EPSILON * scale {
                    continue;
                }
                let phase = apq / r;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // J = D R with D = diag(1, e^{-iφ}) on (p, q), R = [[c, s], [-s, c]].
                let mut jm = ComplexMatrix::identity(n);
                let pc = phase.conj();
                jm[(p, p)] = c(cs, 0.0);
                jm[(p, q)] = c(sn, 0.0);
                jm[(q, p)] = pc * (-sn);
                jm[(q, q)] = pc * cs;
                m = jm.adjoint() * m * jm;
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                v = v * jm;
            }
        }
    }
    let mut pairs: Vec<(f64, ComplexVector)> = (0..n).map(|k| (m[(k, k)].re, v.column(k))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs)
}

/// Linear subspace of `C^n` carried by an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<ComplexVector>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim).map(|k| unit_vector(ambient_dim, k)).collect(),
        }
    }

    /// Orthonormal basis of `span(vectors)` by twice-iterated Gram–Schmidt.
    /// Vectors whose residual norm falls below `tol` times their original
    /// norm are treated as dependent and dropped.
    pub fn span(ambient_dim: usize, vectors: &[ComplexVector], tol: f64) -> Result<Self> {
        let mut basis: Vec<ComplexVector> = Vec::new();
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    left: ambient_dim,
                    right: v.len(),
                });
            }
            let n0 = vector_norm(v);
            if n0 == 0.0 {
                continue;
            }
            let mut w = v.clone();
            for _ in 0..2 {
                for b in &basis {
                    let proj = inner(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= proj * bi;
                    }
                }
            }
            let nw = vector_norm(&w);
            if nw > tol * n0 && basis.len() < ambient_dim {
                basis.push(w.into_iter().map(|z| z / nw).collect());
            }
        }
        Ok(Self { ambient_dim, basis })
    }

    /// Range of a matrix: span of its columns.
    pub fn range_of(a: &ComplexMatrix, tol: f64) -> Self {
        // Rank decision from the singular values, then span the images of the
        // leading right singular vectors.
        let (sigma, v) = singular_decomposition(a);
        let smax = sigma.iter().cloned().fold(0.0, f64::max);
        if smax == 0.0 {
            return Self::zero(a.dim());
        }
        let images: Vec<ComplexVector> = (0..a.dim())
            .filter(|&k| sigma[k] > tol * smax)
            .map(|k| a.apply(&v.column(k)))
            .collect();
        Self::span(a.dim(), &images, 1e-8).expect("range vectors have ambient dimension")
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.basis
    }

    /// Orthogonal projector `Σ v v†`.
    pub fn projector(&self) -> ComplexMatrix {
        let n = self.ambient_dim;
        let mut p = ComplexMatrix::zeros(n);
        for v in &self.basis {
            for i in 0..n {
                for j in 0..n {
                    p[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        p
    }

    pub fn contains(&self, v: &[Complex64], tol: f64) -> bool {
        let mut w = v.to_vec();
        for b in &self.basis {
            let proj = inner(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= proj * bi;
            }
        }
        vector_norm(&w) <= tol * vector_norm(v).max(f64::MIN_POSITIVE)
    }

    /// `U ∩ V`, computed as the kernel of `(I − P_U) + (I − P_V)`.
    pub fn intersect(&self, other: &Self, tol: f64) -> Result<Self> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        let n = self.ambient_dim;
        let id = ComplexMatrix::identity(n);
        let m = (id - self.projector()) + (id - other.projector());
        if m.frobenius_norm() == 0.0 {
            return Ok(Self::full(n));
        }
        // The sum is PSD with eigenvalues in [0, 2]; use an absolute threshold.
        let (sigma, v) = singular_decomposition(&m);
        let vectors: Vec<ComplexVector> = (0..n).filter(|&k| sigma[k] <= tol).map(|k| v.column(k)).collect();
        Self::span(n, &vectors, 1e-8)
    }

    /// Image under `v ↦ M v` (or `M v̄` when `conjugate`), re-orthonormalized.
    pub fn image(&self, m: &ComplexMatrix, conjugate: bool) -> Result<Self> {
        if m.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim,
                right: m.dim(),
            });
        }
        let images: Vec<ComplexVector> = self
            .basis
            .iter()
            .map(|v| {
                if conjugate {
                    let vc: ComplexVector = v.iter().map(|z| z.conj()).collect();
                    m.apply(&vc)
                } else {
                    m.apply(v)
                }
            })
            .collect();
        Self::span(self.ambient_dim, &images, 1e-8)
    }

    /// Image under an arbitrary vector map; used for p-dependent symmetry
    /// actions that are not a single matrix.
    pub fn map_vectors(&self, f: impl Fn(&[Complex64]) -> ComplexVector) -> Result<Self> {
        let images: Vec<ComplexVector> = self.basis.iter().map(|v| f(v)).collect();
        Self::span(self.ambient_dim, &images, 1e-8)
    }
}

/// Same dimension and `‖P_U − P_V‖_F ≤ tol`.
pub fn subspace_equal(u: &Subspace, v: &Subspace, tol: f64) -> Result<bool> {
    if u.ambient_dim != v.ambient_dim {
        return Err(Error::DimensionMismatch {
            left: u.ambient_dim,
            right: v.ambient_dim,
        });
    }
    Ok(u.dim() == v.dim() && subspace_distance(u, v) <= tol)
}

/// `‖P_U − P_V‖_F`; ambient dimensions must agree.
pub fn subspace_distance(u: &Subspace, v: &Subspace) -> f64 {
    u.projector().distance(&v.projector())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            &[c(1.0, 0.0), c(0.5, -0.25), c(0.0, 1.0)],
            &[c(0.5, 0.25), c(-2.0, 0.0), c(0.3, 0.1)],
            &[c(0.0, -1.0), c(0.3, -0.1), c(0.7, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn identity_commutes_with_everything() {
        let a = sample();
        let r = bracket(&ComplexMatrix::identity(3), &a, BracketKind::Commutator).unwrap();
        assert!(r.is_zero(0.0));
    }

    #[test]
    fn self_anticommutator_is_twice_square() {
        let a = sample();
        let r = bracket(&a, &a, BracketKind::Anticommutator).unwrap();
        assert!(r.distance(&((a * a) * 2.0)) < 1e-14);
    }

    #[test]
    fn bracket_rejects_mismatched_dims() {
        let err = bracket(
            &ComplexMatrix::identity(2),
            &ComplexMatrix::identity(3),
            BracketKind::Commutator,
        );
        assert_eq!(err, Err(Error::DimensionMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn invalid_dimension_rejected() {
        assert_eq!(
            ComplexMatrix::from_real_diagonal(&[1.0; 5]),
            Err(Error::InvalidDimension(5))
        );
        assert!(matches!(ComplexMatrix::from_rows(&[]), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn double_adjoint_is_identity_map() {
        let a = sample();
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        assert_eq!(kernel_basis(&ComplexMatrix::zeros(4), 1e-10).dim(), 4);
        assert_eq!(kernel_basis(&ComplexMatrix::identity(4), 1e-10).dim(), 0);
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        // Rank 2: third column = first + i·second.
        let a = ComplexMatrix::from_rows(&[
            &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 2.0)],
            &[c(0.0, 1.0), c(1.0, 0.0), c(0.0, 2.0)],
            &[c(3.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let k = kernel_basis(&a, 1e-10);
        assert_eq!(k.dim(), 1);
        let av = a.apply(&k.vectors()[0]);
        assert!(vector_norm(&av) <= 10.0 * 1e-10 * a.frobenius_norm());
        assert_eq!(a.rank(1e-10), 2);
    }

    #[test]
    fn subspace_equality_cases() {
        let e1 = Subspace::span(2, &[vec![ONE, ZERO]], 1e-12).unwrap();
        let e2 = Subspace::span(2, &[vec![ZERO, ONE]], 1e-12).unwrap();
        assert!(subspace_equal(&e1, &e1, 1e-12).unwrap());
        assert!(!subspace_equal(&e1, &e2, 1e-12).unwrap());
        let s = 1.0 / 2f64.sqrt();
        let a = Subspace::span(2, &[vec![ONE, ONE]], 1e-12).unwrap();
        let phase = Complex64::from_polar(1.0, 0.7);
        let b = Subspace::span(2, &[vec![phase * s, phase * s]], 1e-12).unwrap();
        assert!(subspace_equal(&a, &b, 1e-12).unwrap());
        assert!(subspace_equal(&a, &Subspace::zero(3), 1e-12).is_err());
    }

    #[test]
    fn eigen_of_identity_and_diagonal() {
        let e = hermitian_eigen(&ComplexMatrix::identity(4), 1e-10).unwrap();
        assert!(e.iter().all(|(l, _)| (l - 1.0).abs() < 1e-15));
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]).unwrap();
        let e = hermitian_eigen(&d, 1e-10).unwrap();
        assert_eq!(e[0].0, -1.0);
        assert_eq!(e[1].0, 1.0);
        assert!((e[0].1[1].norm() - 1.0).abs() < 1e-15);
        assert!((e[1].1[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let a = ComplexMatrix::from_rows(&[&[ONE, ONE], &[ZERO, ONE]]).unwrap();
        assert!(matches!(hermitian_eigen(&a, 1e-10), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigen_reconstructs_hermitian_input() {
        let a = sample();
        let pairs = hermitian_eigen(&a, 1e-10).unwrap();
        let mut rec = ComplexMatrix::zeros(3);
        for (l, v) in &pairs {
            for i in 0..3 {
                for j in 0..3 {
                    rec[(i, j)] += v[i] * v[j].conj() * *l;
                }
            }
        }
        assert!(rec.distance(&a) <= 1e-10 * a.frobenius_norm());
        assert!(pairs.windows(2).all(|w| w[0].0 <= w[1].0));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let d = ComplexMatrix::from_real_diagonal(&[2.0, 3.0, -1.0, 0.5]).unwrap();
        assert!((d.determinant() - c(-3.0, 0.0)).norm() < 1e-15);
        let a = ComplexMatrix::from_rows(&[&[c(1.0, 1.0), c(2.0, 0.0)], &[c(0.0, 3.0), c(4.0, 0.0)]]).unwrap();
        // (1+i)·4 − 2·3i = 4 − 2i
        assert!((a.determinant() - c(4.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn intersection_of_planes() {
        let u = Subspace::span(3, &[vec![ONE, ZERO, ZERO], vec![ZERO, ONE, ZERO]], 1e-12).unwrap();
        let v = Subspace::span(3, &[vec![ZERO, ONE, ZERO], vec![ZERO, ZERO, ONE]], 1e-12).unwrap();
        let w = u.intersect(&v, 1e-10).unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w.contains(&[ZERO, ONE, ZERO], 1e-12));
    }

    #[test]
    fn op_norm_of_diagonal() {
        let d = ComplexMatrix::from_real_diagonal(&[0.5, -3.0, 2.0]).unwrap();
        assert!((d.op_norm() - 3.0).abs() < 1e-14);
    }
}
