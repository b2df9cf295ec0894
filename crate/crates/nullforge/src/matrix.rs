//! Dense matrices over exact rationals or IEEE doubles, with rank, nullity,
//! null-space, eigenvalue and singular-value computation.
//!
//! The exact path (fraction-free elimination, reduced row echelon form) makes
//! no rounding error at all, so statements like "nullity is preserved" can be
//! asserted with zero tolerance. The float path defines numerical rank by a
//! relative singular-value threshold, `sigma > tol * sigma_max`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::{eigen, svd};

mod exact;

/// Relative singular-value threshold used for float rank when the caller does
/// not supply one.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix dimensions {rows}x{cols} do not match {len} entries")]
    EntryCount { rows: usize, cols: usize, len: usize },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimensions { rows: usize, cols: usize },
    #[error("non-finite entry at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("tridiagonal data mismatch: {diag} diagonal vs {offdiag} off-diagonal entries")]
    TridiagonalShape { diag: usize, offdiag: usize },
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    Length { expected: usize, got: usize },
}

/// Scalar domain a matrix or vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Rational,
    Float,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Rational => write!(f, "rational"),
            Domain::Float => write!(f, "float"),
        }
    }
}

/// A vector in one of the two scalar domains.
#[derive(Debug, Clone, PartialEq)]
pub enum Vector {
    Rational(Vec<BigRational>),
    Float(Vec<f64>),
}

impl Vector {
    pub fn len(&self) -> usize {
        match self {
            Vector::Rational(v) => v.len(),
            Vector::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn domain(&self) -> Domain {
        match self {
            Vector::Rational(_) => Domain::Rational,
            Vector::Float(_) => Domain::Float,
        }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Vector::Rational(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn to_float(&self) -> Vec<f64> {
        match self {
            Vector::Rational(v) => v.iter().map(rational_to_f64).collect(),
            Vector::Float(v) => v.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&[BigRational]> {
        match self {
            Vector::Rational(v) => Some(v),
            Vector::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Vector::Rational(v) => v.iter().all(|x| x.is_zero()),
            Vector::Float(v) => v.iter().all(|&x| x == 0.0),
        }
    }

    /// Largest absolute component, in float.
    pub fn max_abs(&self) -> f64 {
        self.to_float().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn norm(&self) -> f64 {
        self.to_float().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Components as display strings (`p/q` for rationals).
    pub fn display_components(&self) -> Vec<String> {
        match self {
            Vector::Rational(v) => v.iter().map(|x| x.to_string()).collect(),
            Vector::Float(v) => v.iter().map(|x| x.to_string()).collect(),
        }
    }

    /// True when `self = c * other` for a single nonzero scalar `c`.
    ///
    /// Exact when both sides are rational; otherwise compared in float with a
    /// relative tolerance against the largest component.
    pub fn proportional_to(&self, other: &Vector, tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        if let (Vector::Rational(a), Vector::Rational(b)) = (self, other) {
            let mut scale: Option<BigRational> = None;
            for (x, y) in a.iter().zip(b) {
                match (x.is_zero(), y.is_zero()) {
                    (true, true) => continue,
                    (true, false) | (false, true) => return false,
                    (false, false) => {
                        let c = x / y;
                        match &scale {
                            None => scale = Some(c),
                            Some(s) if *s == c => {}
                            Some(_) => return false,
                        }
                    }
                }
            }
            return scale.is_some();
        }
        let a = self.to_float();
        let b = other.to_float();
        let (mut best, mut idx) = (0.0f64, usize::MAX);
        for (k, y) in b.iter().enumerate() {
            if y.abs() > best {
                best = y.abs();
                idx = k;
            }
        }
        if idx == usize::MAX {
            return a.iter().all(|&x| x == 0.0);
        }
        let c = a[idx] / b[idx];
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
        a.iter().zip(&b).all(|(x, y)| (x - c * y).abs() <= tol * scale)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.display_components().join(", "))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum MatrixData {
    Rational(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Dense row-major matrix over a single scalar domain.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: MatrixData,
}

impl DenseMatrix {
    pub fn from_rational(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self, MatrixError> {
        Self::check_shape(rows, cols, entries.len())?;
        Ok(DenseMatrix { rows, cols, data: MatrixData::Rational(entries) })
    }

    pub fn from_float(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self, MatrixError> {
        Self::check_shape(rows, cols, entries.len())?;
        if let Some(k) = entries.iter().position(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite { row: k / cols, col: k % cols });
        }
        Ok(DenseMatrix { rows, cols, data: MatrixData::Float(entries) })
    }

    fn check_shape(rows: usize, cols: usize, len: usize) -> Result<(), MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimensions { rows, cols });
        }
        if len != rows * cols {
            return Err(MatrixError::EntryCount { rows, cols, len });
        }
        Ok(())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigRational::from_integer(x.into())))
            .collect();
        Self::from_rational(r, c, entries).expect("consistent row lengths")
    }

    pub fn from_f64_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_float(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn identity(n: usize, domain: Domain) -> Self {
        match domain {
            Domain::Rational => {
                let mut e = vec![BigRational::zero(); n * n];
                for k in 0..n {
                    e[k * n + k] = BigRational::from_integer(1.into());
                }
                DenseMatrix { rows: n, cols: n, data: MatrixData::Rational(e) }
            }
            Domain::Float => {
                let mut e = vec![0.0; n * n];
                for k in 0..n {
                    e[k * n + k] = 1.0;
                }
                DenseMatrix { rows: n, cols: n, data: MatrixData::Float(e) }
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> Domain {
        match self.data {
            MatrixData::Rational(_) => Domain::Rational,
            MatrixData::Float(_) => Domain::Float,
        }
    }

    pub fn get_float(&self, row: usize, col: usize) -> f64 {
        match &self.data {
            MatrixData::Rational(v) => rational_to_f64(&v[row * self.cols + col]),
            MatrixData::Float(v) => v[row * self.cols + col],
        }
    }

    pub fn get_rational(&self, row: usize, col: usize) -> Option<&BigRational> {
        match &self.data {
            MatrixData::Rational(v) => Some(&v[row * self.cols + col]),
            MatrixData::Float(_) => None,
        }
    }

    pub fn rational_entries(&self) -> Option<&[BigRational]> {
        match &self.data {
            MatrixData::Rational(v) => Some(v),
            MatrixData::Float(_) => None,
        }
    }

    pub fn float_entries(&self) -> Option<&[f64]> {
        match &self.data {
            MatrixData::Float(v) => Some(v),
            MatrixData::Rational(_) => None,
        }
    }

    /// Converts to the float domain (identity on float matrices).
    pub fn to_float(&self) -> DenseMatrix {
        match &self.data {
            MatrixData::Float(_) => self.clone(),
            MatrixData::Rational(v) => DenseMatrix {
                rows: self.rows,
                cols: self.cols,
                data: MatrixData::Float(v.iter().map(rational_to_f64).collect()),
            },
        }
    }

    pub fn to_float_vec(&self) -> Vec<f64> {
        match &self.data {
            MatrixData::Float(v) => v.clone(),
            MatrixData::Rational(v) => v.iter().map(rational_to_f64).collect(),
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let (r, c) = (self.rows, self.cols);
        match &self.data {
            MatrixData::Rational(v) => {
                let mut out = Vec::with_capacity(v.len());
                for j in 0..c {
                    for i in 0..r {
                        out.push(v[i * c + j].clone());
                    }
                }
                DenseMatrix { rows: c, cols: r, data: MatrixData::Rational(out) }
            }
            MatrixData::Float(v) => {
                let mut out = Vec::with_capacity(v.len());
                for j in 0..c {
                    for i in 0..r {
                        out.push(v[i * c + j]);
                    }
                }
                DenseMatrix { rows: c, cols: r, data: MatrixData::Float(out) }
            }
        }
    }

    /// Largest absolute entry, in float.
    pub fn max_abs_entry(&self) -> f64 {
        match &self.data {
            MatrixData::Rational(v) => v.iter().map(rational_to_f64).fold(0.0, |m, x| m.max(x.abs())),
            MatrixData::Float(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    /// Matrix-vector product in the vector's best common domain with `self`.
    pub fn matvec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.len(), "matvec dimension mismatch");
        match (&self.data, v) {
            (MatrixData::Rational(m), Vector::Rational(x)) => {
                let mut out = vec![BigRational::zero(); self.rows];
                for i in 0..self.rows {
                    let mut acc = BigRational::zero();
                    for j in 0..self.cols {
                        acc += &m[i * self.cols + j] * &x[j];
                    }
                    out[i] = acc;
                }
                Vector::Rational(out)
            }
            _ => {
                let m = self.to_float_vec();
                let x = v.to_float();
                let mut out = vec![0.0; self.rows];
                for i in 0..self.rows {
                    out[i] = (0..self.cols).map(|j| m[i * self.cols + j] * x[j]).sum();
                }
                Vector::Float(out)
            }
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let a = self.to_float_vec();
        let b = other.to_float_vec();
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![0.0; n * m];
        for i in 0..n {
            for l in 0..k {
                let ail = a[i * k + l];
                if ail == 0.0 {
                    continue;
                }
                for j in 0..m {
                    out[i * m + j] += ail * b[l * m + j];
                }
            }
        }
        DenseMatrix { rows: n, cols: m, data: MatrixData::Float(out) }
    }

    /// Dimension of the row space.
    ///
    /// Exact domain: fraction-free elimination, `tol` is ignored. Float
    /// domain: number of singular values above `tol * sigma_max` (falling back
    /// to [`DEFAULT_RANK_TOL`] when `tol <= 0`); the all-zero matrix has rank 0.
    pub fn rank(&self, tol: f64) -> usize {
        match &self.data {
            MatrixData::Rational(v) => exact::bareiss_rank(self.rows, self.cols, v),
            MatrixData::Float(v) => {
                let tol = if tol > 0.0 { tol } else { DEFAULT_RANK_TOL };
                let sv = svd::jacobi(self.rows, self.cols, v);
                let smax = sv.sigma.iter().fold(0.0f64, |m, &s| m.max(s));
                if smax == 0.0 {
                    return 0;
                }
                sv.sigma.iter().filter(|&&s| s > tol * smax).count()
            }
        }
    }

    pub fn nullity(&self, tol: f64) -> usize {
        self.cols - self.rank(tol)
    }

    /// Basis of the kernel.
    ///
    /// Exact domain: reduced row echelon form with the free-variable-set-to-one
    /// convention, free columns taken in descending order. Float domain: right
    /// singular vectors whose singular values fall below the rank threshold
    /// (orthonormal, hence `normalized`).
    pub fn null_basis(&self, tol: f64) -> NullBasis {
        match &self.data {
            MatrixData::Rational(v) => {
                let vectors = exact::rref_null_basis(self.rows, self.cols, v)
                    .into_iter()
                    .map(Vector::Rational)
                    .collect();
                NullBasis { vectors, normalized: false }
            }
            MatrixData::Float(v) => {
                let tol = if tol > 0.0 { tol } else { DEFAULT_RANK_TOL };
                let sv = svd::jacobi(self.rows, self.cols, v);
                let smax = sv.sigma.iter().fold(0.0f64, |m, &s| m.max(s));
                let mut vectors = Vec::new();
                for (k, &s) in sv.sigma.iter().enumerate() {
                    if smax == 0.0 || s <= tol * smax {
                        vectors.push(Vector::Float(sv.right_vector(k)));
                    }
                }
                NullBasis { vectors, normalized: true }
            }
        }
    }

    /// Singular values, ascending. Rational input is converted to float first.
    pub fn singular_values(&self) -> Spectrum {
        let m = self.to_float_vec();
        let sv = svd::jacobi(self.rows, self.cols, &m);
        Spectrum::new(sv.sigma, SpectrumKind::Singular)
    }

    /// All eigenvalues of a square matrix via Hessenberg reduction and shifted
    /// QR, sorted by real then imaginary part. Rational input is converted to
    /// float first.
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut vals = eigen::hessenberg_eigenvalues(self.rows, &self.to_float_vec());
        vals.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        Ok(vals)
    }

    /// Eigenvalues of a symmetric float matrix via Householder tridiagonal
    /// reduction followed by the implicit-shift QL iteration, ascending.
    pub fn symmetric_eigenvalues(&self) -> Result<Vec<f64>, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(eigen::symmetric_dense_eigenvalues(self.rows, &self.to_float_vec()))
    }
}

fn rational_to_f64(x: &BigRational) -> f64 {
    // ToPrimitive on Ratio<BigInt> handles magnitudes beyond i64.
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact determinant of a square integer matrix, used by the brute-force rank
/// oracle in tests.
pub fn bigint_determinant(n: usize, entries: &[BigInt]) -> BigInt {
    exact::bareiss_determinant(n, entries)
}

/// Basis of a kernel: a list of linearly independent vectors of equal length.
#[derive(Debug, Clone)]
pub struct NullBasis {
    vectors: Vec<Vector>,
    normalized: bool,
}

impl NullBasis {
    pub fn new(vectors: Vec<Vector>, normalized: bool) -> Self {
        NullBasis { vectors, normalized }
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    pub fn domain(&self) -> Option<Domain> {
        self.vectors.first().map(|v| v.domain())
    }

    /// Vector length, when the basis is nonempty.
    pub fn dim(&self) -> Option<usize> {
        self.vectors.first().map(|v| v.len())
    }

    /// Rescales every vector to unit Euclidean norm (float domain).
    pub fn normalize(&self) -> NullBasis {
        let vectors = self
            .vectors
            .iter()
            .map(|v| {
                let f = v.to_float();
                let n = f.iter().map(|x| x * x).sum::<f64>().sqrt();
                Vector::Float(f.iter().map(|x| x / n).collect())
            })
            .collect();
        NullBasis { vectors, normalized: true }
    }

    /// True when the basis vectors are linearly independent (rank of the
    /// stacked matrix equals the vector count).
    pub fn is_independent(&self, tol: f64) -> bool {
        match self.stack() {
            None => true,
            Some(m) => m.rank(tol) == self.len(),
        }
    }

    /// Stacks the basis vectors as matrix rows. `None` when empty.
    pub fn stack(&self) -> Option<DenseMatrix> {
        let first = self.vectors.first()?;
        let cols = first.len();
        let all_rational = self.vectors.iter().all(|v| matches!(v, Vector::Rational(_)));
        if all_rational {
            let mut entries = Vec::with_capacity(self.vectors.len() * cols);
            for v in &self.vectors {
                entries.extend_from_slice(v.as_rational().unwrap());
            }
            Some(DenseMatrix::from_rational(self.vectors.len(), cols, entries).unwrap())
        } else {
            let mut entries = Vec::with_capacity(self.vectors.len() * cols);
            for v in &self.vectors {
                entries.extend_from_slice(&v.to_float());
            }
            DenseMatrix::from_float(self.vectors.len(), cols, entries).ok()
        }
    }
}

/// Two bases span the same subspace iff stacking them together does not
/// increase the rank of either. Exact (zero tolerance) when both sides are
/// rational.
pub fn subspace_equal(a: &NullBasis, b: &NullBasis, tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    if a.dim() != b.dim() {
        return false;
    }
    let (Some(sa), Some(sb)) = (a.stack(), b.stack()) else {
        // Non-finite float components cannot stack into a valid matrix.
        return false;
    };
    let exact = sa.domain() == Domain::Rational && sb.domain() == Domain::Rational;
    let (sa, sb) = if exact { (sa, sb) } else { (sa.to_float(), sb.to_float()) };
    let stacked = vstack(&sa, &sb);
    let (ra, rb, rab) = (sa.rank(tol), sb.rank(tol), stacked.rank(tol));
    ra == rb && ra == rab
}

/// Stacks two matrices with equal column counts on top of each other.
pub fn vstack(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.cols(), b.cols(), "vstack column mismatch");
    match (&a.data, &b.data) {
        (MatrixData::Rational(x), MatrixData::Rational(y)) => {
            let mut entries = x.clone();
            entries.extend_from_slice(y);
            DenseMatrix::from_rational(a.rows + b.rows, a.cols, entries).unwrap()
        }
        _ => {
            let mut entries = a.to_float_vec();
            entries.extend_from_slice(&b.to_float_vec());
            DenseMatrix::from_float(a.rows + b.rows, a.cols, entries).unwrap()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Eigen,
    Singular,
}

/// Sorted real spectrum with its consecutive gaps.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    kind: SpectrumKind,
    gaps: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>, kind: SpectrumKind) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let gaps = values.windows(2).map(|w| w[1] - w[0]).collect();
        Spectrum { values, kind, gaps }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
