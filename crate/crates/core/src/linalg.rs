//! Dense symmetric linear algebra: matrices, unit vectors, orthonormal bases,
//! commuting families, a cyclic Jacobi eigensolver and random sampling.
//!
//! Rounds and basis columns are indexed from zero throughout.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{dot, max_abs, norm2, Scalar};

/// Largest dimension accepted by [`eigendecompose`].
pub const EIGEN_CAP: usize = 512;

const UNIT_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-12;

/// Dense real symmetric `n x n` matrix stored row-major.
///
/// Construction symmetrizes the input as `(M + M^T) / 2`, so
/// `get(i, j) == get(j, i)` holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymmetricMatrix<T> {
    pub fn from_row_major(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        let mut m = Self { dim, data };
        m.symmetrize();
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    /// # Panics
    /// If `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be at least 1");
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    /// # Panics
    /// If `dim == 0`.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    pub fn diagonal(diag: &[T]) -> Result<Self> {
        let dim = diag.len();
        let mut data = vec![T::zero(); dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            data[i * dim + i] = d;
        }
        Self::from_row_major(dim, data)
    }

    /// The outer product `v v^T`.
    pub fn outer(v: &[T]) -> Result<Self> {
        let dim = v.len();
        let mut data = Vec::with_capacity(dim * dim);
        for &a in v {
            for &b in v {
                data.push(a * b);
            }
        }
        Self::from_row_major(dim, data)
    }

    fn symmetrize(&mut self) {
        let n = self.dim;
        let half = T::lit(0.5);
        for i in 0..n {
            for j in (i + 1)..n {
                let s = (self.data[i * n + j] + self.data[j * n + i]) * half;
                self.data[i * n + j] = s;
                self.data[j * n + i] = s;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_row_major(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.dim).map(<[T]>::to_vec).collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: len,
            });
        }
        Ok(())
    }

    pub fn matvec(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x.len())?;
        Ok(self.data.chunks(self.dim).map(|row| dot(row, x)).collect())
    }

    /// `x^T A x`.
    pub fn quad_form(&self, x: &[T]) -> Result<T> {
        Ok(dot(&self.matvec(x)?, x))
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other.dim)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    /// `sum_i coeffs[i] * mats[i]`.
    pub fn linear_combination(coeffs: &[T], mats: &[Self]) -> Result<Self> {
        let first = mats.first().ok_or(Error::EmptyDimension)?;
        if coeffs.len() != mats.len() {
            return Err(Error::DimensionMismatch {
                expected: mats.len(),
                found: coeffs.len(),
            });
        }
        let mut out = Self::zeros(first.dim);
        for (&c, m) in coeffs.iter().zip(mats) {
            first.check_len(m.dim)?;
            if c == T::zero() {
                continue;
            }
            for (o, &a) in out.data.iter_mut().zip(&m.data) {
                *o = *o + c * a;
            }
        }
        Ok(out)
    }

    /// `I + mu * A`.
    pub fn identity_plus(&self, mu: T) -> Self {
        let mut m = self.scaled(mu);
        for i in 0..self.dim {
            m.data[i * self.dim + i] = m.data[i * self.dim + i] + T::one();
        }
        m
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        norm2(&self.data)
    }

    /// Dense product `A B`, row-major. Not symmetric in general.
    pub fn product(&self, other: &Self) -> Result<Vec<T>> {
        self.check_len(other.dim)?;
        let n = self.dim;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = out[i * n + j] + a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Frobenius norm of `A B - B A`.
    pub fn commutator_norm(&self, other: &Self) -> Result<T> {
        let ab = self.product(other)?;
        let ba = other.product(self)?;
        let diff: Vec<T> = ab.iter().zip(&ba).map(|(&x, &y)| x - y).collect();
        Ok(norm2(&diff))
    }

    /// `||A v - (v^T A v) v||_2`, zero exactly when `v` is an eigenvector.
    pub fn eigen_residual(&self, v: &[T]) -> Result<T> {
        let av = self.matvec(v)?;
        let rq = dot(&av, v);
        let r: Vec<T> = av.iter().zip(v).map(|(&a, &b)| a - rq * b).collect();
        Ok(norm2(&r))
    }
}

/// Vector on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector<T> {
    coords: Vec<T>,
}

impl<T: Scalar> UnitVector<T> {
    /// Validates that `coords` already has unit norm.
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("unit vector"));
        }
        let norm = norm2(&coords);
        if (norm - T::one()).abs() > T::tol(UNIT_TOL) {
            return Err(Error::NotUnit {
                norm: norm.as_f64(),
            });
        }
        Ok(Self { coords })
    }

    pub fn normalize(mut coords: Vec<T>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        let norm = norm2(&coords);
        if norm == T::zero() {
            return Err(Error::ZeroVector);
        }
        for c in coords.iter_mut() {
            *c = *c / norm;
        }
        Ok(Self { coords })
    }

    /// Standard basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut coords = vec![T::zero(); dim];
        coords[index] = T::one();
        Ok(Self { coords })
    }

    pub(crate) fn from_normalized_unchecked(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coords
    }

    pub fn into_inner(self) -> Vec<T> {
        self.coords
    }

    pub fn dot(&self, other: &[T]) -> T {
        dot(&self.coords, other)
    }
}

impl<T> AsRef<[T]> for UnitVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.coords
    }
}

/// Orthonormal basis of `R^n`, stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis<T> {
    columns: Vec<Vec<T>>,
}

impl<T: Scalar> OrthonormalBasis<T> {
    pub fn from_columns(columns: Vec<Vec<T>>) -> Result<Self> {
        let n = columns.len();
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        for c in &columns {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("basis"));
            }
        }
        let basis = Self { columns };
        let deviation = basis.orthonormality_defect();
        if deviation > T::tol(ORTHO_TOL) {
            return Err(Error::NotOrthonormal {
                deviation: deviation.as_f64(),
            });
        }
        Ok(basis)
    }

    pub(crate) fn from_columns_unchecked(columns: Vec<Vec<T>>) -> Self {
        Self { columns }
    }

    /// # Panics
    /// If `dim == 0`.
    pub fn identity(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be at least 1");
        let columns = (0..dim)
            .map(|i| {
                let mut c = vec![T::zero(); dim];
                c[i] = T::one();
                c
            })
            .collect();
        Self { columns }
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, i: usize) -> &[T] {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[Vec<T>] {
        &self.columns
    }

    /// `(v_i^T x)_i`.
    pub fn coefficients(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self.columns.iter().map(|c| dot(c, x)).collect())
    }

    /// Max entrywise deviation of `V^T V` from the identity.
    pub fn orthonormality_defect(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((dot(&self.columns[i], &self.columns[j]) - target).abs());
            }
        }
        worst
    }

    /// `sum_i weights[i] v_i v_i^T`.
    pub fn synthesize(&self, weights: &[T]) -> Result<SymmetricMatrix<T>> {
        let n = self.dim();
        if weights.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: weights.len(),
            });
        }
        let mut data = vec![T::zero(); n * n];
        for (col, &w) in self.columns.iter().zip(weights) {
            if w == T::zero() {
                continue;
            }
            for r in 0..n {
                let wr = w * col[r];
                for c in 0..n {
                    data[r * n + c] = data[r * n + c] + wr * col[c];
                }
            }
        }
        SymmetricMatrix::from_row_major(n, data)
    }
}

/// Matrices sharing one orthonormal eigenbasis: `A_t = sum_i lambda_t(i) v_i v_i^T`
/// with every `|lambda_t(i)| <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutingFamily<T> {
    basis: OrthonormalBasis<T>,
    eigenvalues: Vec<Vec<T>>,
}

impl<T: Scalar> CommutingFamily<T> {
    pub fn new(basis: OrthonormalBasis<T>, eigenvalues: Vec<Vec<T>>) -> Result<Self> {
        let n = basis.dim();
        for (round, lam) in eigenvalues.iter().enumerate() {
            if lam.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: lam.len(),
                });
            }
            for (index, &value) in lam.iter().enumerate() {
                if !value.is_finite() {
                    return Err(Error::NonFinite("eigenvalues"));
                }
                if value.abs() > T::one() {
                    return Err(Error::EigenvalueOutOfRange {
                        round,
                        index,
                        value: value.as_f64(),
                    });
                }
            }
        }
        Ok(Self { basis, eigenvalues })
    }

    /// Random basis with eigenvalues drawn uniformly from `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(dim: usize, len: usize, rng: &mut R) -> Result<Self> {
        let basis = random_orthonormal_basis(dim, rng)?;
        let eigenvalues = (0..len)
            .map(|_| {
                (0..dim)
                    .map(|_| T::lit(rng.random_range(-1.0..=1.0)))
                    .collect()
            })
            .collect();
        Self::new(basis, eigenvalues)
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn basis(&self) -> &OrthonormalBasis<T> {
        &self.basis
    }

    pub fn eigenvalues(&self, t: usize) -> &[T] {
        &self.eigenvalues[t]
    }

    pub fn eigenvalue_rows(&self) -> &[Vec<T>] {
        &self.eigenvalues
    }

    pub fn materialize(&self, t: usize) -> Result<SymmetricMatrix<T>> {
        let lam = self.eigenvalues.get(t).ok_or(Error::IndexOutOfRange {
            index: t,
            len: self.len(),
        })?;
        self.basis.synthesize(lam)
    }

    pub fn materialize_all(&self) -> Result<Vec<SymmetricMatrix<T>>> {
        (0..self.len()).map(|t| self.materialize(t)).collect()
    }
}

/// Eigenvalues sorted descending with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigen<T> {
    pub values: Vec<T>,
    pub basis: OrthonormalBasis<T>,
}

/// Cyclic Jacobi eigendecomposition, `A = V diag(values) V^T`.
///
/// Each rotation annihilates one off-diagonal entry; sweeps repeat until the
/// off-diagonal mass is below `eps * ||A||_F`. Intended as a ground-truth
/// oracle for small problems, so dimensions above [`EIGEN_CAP`] are refused.
pub fn eigendecompose<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<Eigen<T>> {
    const MAX_SWEEPS: usize = 100;

    let n = a.dim();
    if n > EIGEN_CAP {
        return Err(Error::TooLarge { n, cap: EIGEN_CAP });
    }
    let mut m = a.as_row_major().to_vec();
    // v is row-major with eigenvectors in columns
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }

    let frob = a.frobenius_norm();
    let threshold = T::epsilon() * frob;
    for _ in 0..MAX_SWEEPS {
        let off: T = {
            let mut s = T::zero();
            for i in 0..n {
                for j in (i + 1)..n {
                    s = s + m[i * n + j] * m[i * n + j];
                }
            }
            (s + s).sqrt()
        };
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (apq + apq);
                let t = if theta.abs() > T::lit(1e150) {
                    T::lit(0.5) / theta
                } else {
                    let sign = if theta >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                // A <- A J, then A <- J^T A
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                m[p * n + q] = T::zero();
                m[q * n + p] = T::zero();
                m[p * n + p] = app - t * apq;
                m[q * n + q] = aqq + t * apq;

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps the original order among ties
    order.sort_by(|&i, &j| {
        m[j * n + j]
            .partial_cmp(&m[i * n + i])
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let columns = order
        .iter()
        .map(|&j| (0..n).map(|k| v[k * n + j]).collect())
        .collect();
    Ok(Eigen {
        values,
        basis: OrthonormalBasis::from_columns_unchecked(columns),
    })
}

/// Largest eigenvalue, via [`eigendecompose`].
pub fn leading_eigenvalue<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<T> {
    Ok(eigendecompose(a)?.values[0])
}

/// `max |eigenvalue|`. Exact Jacobi below the cap, power iteration on `A^2` above.
pub fn spectral_norm<T: Scalar>(a: &SymmetricMatrix<T>) -> T {
    if a.dim() <= EIGEN_CAP {
        let eig = eigendecompose(a).expect("dimension under cap");
        let first = eig.values[0].abs();
        let last = eig.values[eig.values.len() - 1].abs();
        return first.max(last);
    }
    spectral_norm_power(a, T::lit(1e-8), 100_000)
}

/// Power iteration on `A^2` from a fixed, deterministic start.
pub fn spectral_norm_power<T: Scalar>(a: &SymmetricMatrix<T>, rel_tol: T, max_iter: usize) -> T {
    let n = a.dim();
    // low-discrepancy start, unlikely to be orthogonal to the top eigenspace
    let mut x: Vec<T> = (0..n)
        .map(|i| T::one() + T::lit(((i as f64) * 0.618_033_988_749_895).fract()))
        .collect();
    let nx = norm2(&x);
    x.iter_mut().for_each(|c| *c = *c / nx);
    let mut estimate = T::zero();
    for _ in 0..max_iter {
        let y = a.matvec(&x).expect("square");
        let z = a.matvec(&y).expect("square");
        let nz = norm2(&z);
        if nz == T::zero() {
            return norm2(&y);
        }
        let next = nz.sqrt();
        x = z.into_iter().map(|c| c / nz).collect();
        if (next - estimate).abs() <= rel_tol * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Rescales `A` to unit spectral norm. Returns the matrix and the divisor used;
/// the zero matrix is returned unchanged with divisor 1.
pub fn normalize_spectral<T: Scalar>(a: &SymmetricMatrix<T>) -> (SymmetricMatrix<T>, T) {
    let s = spectral_norm(a);
    if s == T::zero() {
        return (a.clone(), T::one());
    }
    (a.scaled(T::one() / s), s)
}

fn normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Uniform sample from the unit sphere in `R^n` (normalized Gaussian).
pub fn random_unit_vector<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<UnitVector<T>> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    loop {
        let coords: Vec<T> = (0..n).map(|_| normal(rng)).collect();
        if norm2(&coords) > T::zero() {
            return UnitVector::normalize(coords);
        }
    }
}

/// Gram-Schmidt with one re-orthogonalization pass, redrawing any column that
/// loses most of its norm to the projections.
fn complete_basis<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    mut columns: Vec<Vec<T>>,
    rng: &mut R,
) -> Vec<Vec<T>> {
    while columns.len() < n {
        let mut c: Vec<T> = (0..n).map(|_| normal(rng)).collect();
        let initial = norm2(&c);
        for _ in 0..2 {
            for q in &columns {
                let proj = dot(q, &c);
                for (ci, &qi) in c.iter_mut().zip(q) {
                    *ci = *ci - proj * qi;
                }
            }
        }
        let nc = norm2(&c);
        if !(nc > T::lit(1e-6) * initial) {
            continue;
        }
        c.iter_mut().for_each(|x| *x = *x / nc);
        columns.push(c);
    }
    columns
}

/// Haar-random orthonormal basis of `R^n`.
pub fn random_orthonormal_basis<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<OrthonormalBasis<T>> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    Ok(OrthonormalBasis::from_columns_unchecked(complete_basis(
        n,
        Vec::new(),
        rng,
    )))
}

/// Random orthonormal basis whose first column is `v`.
pub fn random_basis_containing<T: Scalar, R: Rng + ?Sized>(
    v: &UnitVector<T>,
    rng: &mut R,
) -> Result<OrthonormalBasis<T>> {
    Ok(OrthonormalBasis::from_columns_unchecked(complete_basis(
        v.dim(),
        vec![v.as_slice().to_vec()],
        rng,
    )))
}

/// Symmetrized standard Gaussian matrix.
pub fn random_symmetric<T: Scalar, R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<SymmetricMatrix<T>> {
    if n == 0 {
        return Err(Error::EmptyDimension);
    }
    let data = (0..n * n).map(|_| normal(rng)).collect();
    SymmetricMatrix::from_row_major(n, data)
}

/// Whether `||A B - B A||_F <= tol` for every pair.
///
/// Exact duplicates are collapsed first. Larger sets are certified through a
/// random positive combination `S`: if `S` has a simple spectrum and every
/// member is diagonal in its eigenbasis up to `tol / 4`, the set commutes.
/// Anything else goes through the pairwise loop, which exits on the first
/// failing pair.
pub fn pairwise_commuting<T: Scalar>(mats: &[SymmetricMatrix<T>], tol: T) -> Result<bool> {
    const DIRECT_LIMIT: usize = 64;

    let mut seen = std::collections::HashSet::new();
    let distinct: Vec<&SymmetricMatrix<T>> = mats
        .iter()
        .filter(|a| {
            seen.insert(
                a.data
                    .iter()
                    .map(|x| x.as_f64().to_bits())
                    .collect::<Vec<u64>>(),
            )
        })
        .collect();
    if distinct.len() > DIRECT_LIMIT && combination_certifies(&distinct, tol)? {
        return Ok(true);
    }
    for (i, a) in distinct.iter().enumerate() {
        for b in &distinct[i + 1..] {
            if a.commutator_norm(b)? > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn combination_certifies<T: Scalar>(mats: &[&SymmetricMatrix<T>], tol: T) -> Result<bool> {
    use rand::SeedableRng;

    let n = mats[0].dim();
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x00c0_ffee);
    let mut s = SymmetricMatrix::zeros(n);
    for a in mats {
        s = s.add(&a.scaled(T::lit(rng.random_range(1.0..2.0))))?;
    }
    let eig = eigendecompose(&s)?;
    let scale = eig
        .values
        .iter()
        .fold(T::zero(), |m, v| m.max(v.abs()))
        .max(T::one());
    if eig
        .values
        .windows(2)
        .any(|w| w[0] - w[1] <= T::lit(1e-6) * scale)
    {
        return Ok(false);
    }
    let cols = eig.basis.columns();
    let limit = tol / T::lit(4.0);
    for a in mats {
        let mut off = T::zero();
        for (i, u) in cols.iter().enumerate() {
            let au = a.matvec(u)?;
            for v in &cols[i + 1..] {
                let x = dot(&au, v);
                off = off + x * x;
            }
        }
        if (off + off).sqrt() > limit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest absolute entry of a vector, exposed for eigenvalue rows.
pub fn sup_norm<T: Scalar>(v: &[T]) -> T {
    max_abs(v)
}
