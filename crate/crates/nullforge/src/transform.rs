//! Index-dependent element-wise transforms and the theorems that govern them:
//! separability testing via the four-point identity, rank/nullity preservation
//! reports, predicted null bases for separable transforms, detection of
//! eigenvalue-preserving transforms and their diagonal similarity matrices.
//!
//! Factor gauge: a separable `g(i,j) = g'(i) g''(j)` fixes `g'(i) = g(i,1)`
//! and `g''(j) = g(1,j) / g(1,1)`, so reports are deterministic. The factors
//! are only ever defined up to the scalar `g' -> c g'`, `g'' -> g''/c`, which
//! cancels everywhere it is used.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::gfdsl::{EvalError, EvalErrorKind, TransformFn};
use crate::matrix::{DenseMatrix, Domain, MatrixError, NullBasis, Vector, DEFAULT_RANK_TOL};

/// Default relative tolerance on the four-point separability identity.
pub const SEPARABILITY_TOL: f64 = 1e-8;

/// Direction of the element-wise transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `b_ij = a_ij / g(i,j)`
    Divide,
    /// `b_ij = a_ij * g(i,j)`
    Multiply,
}

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("transform is not separable on the grid; witness ({}, {}, {}, {}) violates the four-point identity", witness.0, witness.1, witness.2, witness.3)]
    NotSeparable { witness: (usize, usize, usize, usize) },
    #[error("transform does not preserve eigenvalues: g({k},{k}) = {value}, expected 1")]
    EigenvalueCondition { k: usize, value: f64 },
    #[error("similarity matrix would be singular: g({k},1) = 0")]
    ZeroDiagonal { k: usize },
    #[error("basis vector length {got} does not match the transform grid width {expected}")]
    BasisDim { expected: usize, got: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Applies `b_ij = a_ij / g(i,j)` or `b_ij = a_ij * g(i,j)` over the 1-based
/// index grid of `a`.
///
/// `g` must be finite and nonzero at every grid point in either mode (the
/// rank-preservation statements assume it, and a zero factor would create or
/// destroy zero entries). On a rational matrix, `g` is evaluated exactly; a
/// transform with no exact value (e.g. containing `sin`) fails with
/// `NotExact` — convert the matrix with [`DenseMatrix::to_float`] first, or
/// use [`apply_transform_promoting`].
pub fn apply_transform(a: &DenseMatrix, g: &TransformFn, mode: Mode) -> Result<DenseMatrix, TransformError> {
    let (n, m) = (a.rows(), a.cols());
    match a.domain() {
        Domain::Rational => {
            let mut entries = Vec::with_capacity(n * m);
            for i in 0..n {
                for j in 0..m {
                    let gv = g.evaluate_exact(i + 1, j + 1)?;
                    if gv.is_zero() {
                        return Err(EvalError { i: i + 1, j: j + 1, kind: EvalErrorKind::ZeroDivisor }.into());
                    }
                    let av = a.get_rational(i, j).unwrap();
                    entries.push(match mode {
                        Mode::Divide => av / &gv,
                        Mode::Multiply => av * &gv,
                    });
                }
            }
            Ok(DenseMatrix::from_rational(n, m, entries)?)
        }
        Domain::Float => {
            let mut entries = Vec::with_capacity(n * m);
            for i in 0..n {
                for j in 0..m {
                    let gv = g.evaluate(i + 1, j + 1)?;
                    if gv == 0.0 {
                        return Err(EvalError { i: i + 1, j: j + 1, kind: EvalErrorKind::ZeroDivisor }.into());
                    }
                    let av = a.get_float(i, j);
                    entries.push(match mode {
                        Mode::Divide => av / gv,
                        Mode::Multiply => av * gv,
                    });
                }
            }
            Ok(DenseMatrix::from_float(n, m, entries)?)
        }
    }
}

/// Like [`apply_transform`], but a rational matrix whose transform has no
/// exact value is converted to float instead of failing.
pub fn apply_transform_promoting(a: &DenseMatrix, g: &TransformFn, mode: Mode) -> Result<DenseMatrix, TransformError> {
    match apply_transform(a, g, mode) {
        Err(TransformError::Eval(EvalError { kind: EvalErrorKind::NotExact(_), .. }))
            if a.domain() == Domain::Rational =>
        {
            apply_transform(&a.to_float(), g, mode)
        }
        other => other,
    }
}

/// Outcome of the separability decision on a finite grid.
#[derive(Debug, Clone, Serialize)]
pub struct SeparabilityReport {
    pub separable: bool,
    /// A quadruple (i, j, x, y) with `g(i,j) g(x,y) != g(x,j) g(i,y)`.
    pub witness: Option<(usize, usize, usize, usize)>,
    /// `g'(i) = g(i, 1)` for i = 1..n.
    pub row_factors: Option<Vec<f64>>,
    /// `g''(j) = g(1, j) / g(1, 1)` for j = 1..m.
    pub col_factors: Option<Vec<f64>>,
}

/// Decides whether `g` is separable on the 1-based `n x m` grid.
///
/// On a finite grid the full four-point identity holds iff it holds anchored
/// at (1, 1): `g(i,j) g(1,1) = g(1,j) g(i,1)` for all (i, j); only the
/// anchored scan runs here. Violations are compared relatively at `tol`.
pub fn is_separable(g: &TransformFn, n: usize, m: usize, tol: f64) -> Result<SeparabilityReport, TransformError> {
    g.check_grid(n, m, true)?;
    let g11 = g.evaluate(1, 1)?;
    let row1: Vec<f64> = (1..=m).map(|j| g.evaluate(1, j)).collect::<Result<_, _>>()?;
    let col1: Vec<f64> = (1..=n).map(|i| g.evaluate(i, 1)).collect::<Result<_, _>>()?;
    for i in 1..=n {
        for j in 1..=m {
            let lhs = g.evaluate(i, j)? * g11;
            let rhs = row1[j - 1] * col1[i - 1];
            if (lhs - rhs).abs() > tol * lhs.abs().max(rhs.abs()) {
                return Ok(SeparabilityReport {
                    separable: false,
                    witness: Some((i, j, 1, 1)),
                    row_factors: None,
                    col_factors: None,
                });
            }
        }
    }
    Ok(SeparabilityReport {
        separable: true,
        witness: None,
        row_factors: Some(col1),
        col_factors: Some(row1.iter().map(|v| v / g11).collect()),
    })
}

/// Scans every quadruple of the grid for a violation of
/// `g(i,j) g(x,y) = g(x,j) g(i,y)`. Quartic in the grid size; meant for
/// cross-checking the anchored test on small grids.
pub fn four_point_witness(
    g: &TransformFn,
    n: usize,
    m: usize,
    tol: f64,
) -> Result<Option<(usize, usize, usize, usize)>, TransformError> {
    let mut vals = vec![0.0; n * m];
    for i in 1..=n {
        for j in 1..=m {
            vals[(i - 1) * m + (j - 1)] = g.evaluate(i, j)?;
        }
    }
    let v = |i: usize, j: usize| vals[(i - 1) * m + (j - 1)];
    for i in 1..=n {
        for j in 1..=m {
            for x in 1..=n {
                for y in 1..=m {
                    let lhs = v(i, j) * v(x, y);
                    let rhs = v(x, j) * v(i, y);
                    if (lhs - rhs).abs() > tol * lhs.abs().max(rhs.abs()) {
                        return Ok(Some((i, j, x, y)));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Row factors `g'(i)` and column factors `g''(j)` of a separable transform.
pub type FactorPair = (Vec<BigRational>, Vec<BigRational>);

/// Exact separability factors on the grid, in the same gauge as
/// [`is_separable`]. `Ok(None)` when `g` is not separable; an error when `g`
/// has no exact rational value.
pub fn exact_factors(
    g: &TransformFn,
    n: usize,
    m: usize,
) -> Result<Option<FactorPair>, TransformError> {
    let g11 = g.evaluate_exact(1, 1)?;
    if g11.is_zero() {
        return Err(EvalError { i: 1, j: 1, kind: EvalErrorKind::ZeroDivisor }.into());
    }
    let row1: Vec<BigRational> = (1..=m).map(|j| g.evaluate_exact(1, j)).collect::<Result<_, _>>()?;
    let col1: Vec<BigRational> = (1..=n).map(|i| g.evaluate_exact(i, 1)).collect::<Result<_, _>>()?;
    for i in 1..=n {
        for j in 1..=m {
            let gij = g.evaluate_exact(i, j)?;
            if gij.is_zero() {
                return Err(EvalError { i, j, kind: EvalErrorKind::ZeroDivisor }.into());
            }
            if &gij * &g11 != &row1[j - 1] * &col1[i - 1] {
                return Ok(None);
            }
        }
    }
    let col_factors = row1.iter().map(|v| v / &g11).collect();
    Ok(Some((col1, col_factors)))
}

/// Predicts the null basis of the transformed matrix from the null basis of
/// the original: dividing by `g` scales component j by `g''(j)`, multiplying
/// divides it out.
///
/// Exact when the basis is rational and `g` evaluates exactly; float
/// otherwise. Fails when `g` is not separable on the grid.
pub fn predict_null_basis(
    a_basis: &NullBasis,
    g: &TransformFn,
    n: usize,
    m: usize,
    mode: Mode,
) -> Result<NullBasis, TransformError> {
    if let Some(dim) = a_basis.dim() {
        if dim != m {
            return Err(TransformError::BasisDim { expected: m, got: dim });
        }
    }
    if a_basis.domain() == Some(Domain::Rational) {
        match exact_factors(g, n, m) {
            Ok(Some((_, col_factors))) => {
                let vectors = a_basis
                    .vectors()
                    .iter()
                    .map(|v| {
                        let comps = v.as_rational().unwrap();
                        let scaled: Vec<BigRational> = comps
                            .iter()
                            .zip(&col_factors)
                            .map(|(c, gj)| match mode {
                                Mode::Divide => c * gj,
                                Mode::Multiply => c / gj,
                            })
                            .collect();
                        Vector::Rational(scaled)
                    })
                    .collect();
                return Ok(NullBasis::new(vectors, false));
            }
            Ok(None) => {
                let report = is_separable(g, n, m, SEPARABILITY_TOL)?;
                return Err(TransformError::NotSeparable {
                    witness: report.witness.unwrap_or((1, 1, 1, 1)),
                });
            }
            // No exact value (e.g. a sine factor): fall through to float.
            Err(TransformError::Eval(EvalError { kind: EvalErrorKind::NotExact(_), .. })) => {}
            Err(e) => return Err(e),
        }
    }
    let report = is_separable(g, n, m, SEPARABILITY_TOL)?;
    if !report.separable {
        return Err(TransformError::NotSeparable { witness: report.witness.unwrap() });
    }
    let col_factors = report.col_factors.unwrap();
    let vectors = a_basis
        .vectors()
        .iter()
        .map(|v| {
            let comps = v.to_float();
            let scaled: Vec<f64> = comps
                .iter()
                .zip(&col_factors)
                .map(|(c, gj)| match mode {
                    Mode::Divide => c * gj,
                    Mode::Multiply => c / gj,
                })
                .collect();
            Vector::Float(scaled)
        })
        .collect();
    Ok(NullBasis::new(vectors, false))
}

/// True when the separable transform leaves eigenvalues of any square matrix
/// unchanged, i.e. `g(k,k) = 1` (within `tol`) for all k = 1..n; equivalent to
/// `g'(k) g''(k) = 1` given separability. Fails when `g` is not separable.
pub fn preserves_eigenvalues(g: &TransformFn, n: usize, tol: f64) -> Result<bool, TransformError> {
    let report = is_separable(g, n, n, SEPARABILITY_TOL)?;
    if !report.separable {
        return Err(TransformError::NotSeparable { witness: report.witness.unwrap() });
    }
    for k in 1..=n {
        if (g.evaluate(k, k)? - 1.0).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Diagonal similarity matrix `P` with `P_kk = g(k, 1)` for an
/// eigenvalue-preserving transform. Conjugating by `P` reproduces the
/// transform: `P^-1 A P` equals the divide-mode result and `P A P^-1` the
/// multiply-mode result (see [`verify_similarity`], which checks both
/// orientations entrywise rather than trusting the formula).
pub fn similarity_matrix(g: &TransformFn, n: usize) -> Result<DenseMatrix, TransformError> {
    if !preserves_eigenvalues(g, n, 1e-10)? {
        let k = (1..=n)
            .find(|&k| g.evaluate(k, k).map(|v| (v - 1.0).abs() > 1e-10).unwrap_or(true))
            .unwrap_or(1);
        return Err(TransformError::EigenvalueCondition { k, value: g.evaluate(k, k)? });
    }
    // Exact diagonal when g evaluates exactly, float otherwise.
    let exact: Result<Vec<BigRational>, EvalError> = (1..=n).map(|k| g.evaluate_exact(k, 1)).collect();
    match exact {
        Ok(diag) => {
            if let Some(k) = diag.iter().position(|v| v.is_zero()) {
                return Err(TransformError::ZeroDiagonal { k: k + 1 });
            }
            let mut entries = vec![BigRational::zero(); n * n];
            for (k, v) in diag.into_iter().enumerate() {
                entries[k * n + k] = v;
            }
            Ok(DenseMatrix::from_rational(n, n, entries)?)
        }
        Err(EvalError { kind: EvalErrorKind::NotExact(_), .. }) => {
            let mut entries = vec![0.0; n * n];
            for k in 1..=n {
                let v = g.evaluate(k, 1)?;
                if v == 0.0 {
                    return Err(TransformError::ZeroDiagonal { k });
                }
                entries[(k - 1) * n + (k - 1)] = v;
            }
            Ok(DenseMatrix::from_float(n, n, entries)?)
        }
        Err(e) => Err(e.into()),
    }
}

/// Which conjugation orientation reproduced the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `B = P^-1 A P`
    PInvAP,
    /// `B = P A P^-1`
    PAPInv,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationReport {
    pub orientation: Orientation,
    /// Largest entrywise deviation of the matching orientation, relative to
    /// the largest entry of the transformed matrix.
    pub max_rel_err: f64,
    /// Same for the opposite orientation, for the record.
    pub other_rel_err: f64,
    /// Diagonal of P.
    pub diag: Vec<f64>,
    /// True when two eigenvalues of the input sit closer than 1e-8 relative
    /// to the spectrum scale. Eigenvalue preservation is only asserted in the
    /// forward direction; degenerate spectra are flagged, not resolved.
    pub degenerate_spectrum: bool,
}

/// Conjugates `a` by the similarity matrix of `g` in both orientations and
/// records which one reproduces `apply_transform(a, g, mode)` entrywise.
pub fn verify_similarity(a: &DenseMatrix, g: &TransformFn, mode: Mode) -> Result<ConjugationReport, TransformError> {
    if a.rows() != a.cols() {
        return Err(MatrixError::NotSquare { rows: a.rows(), cols: a.cols() }.into());
    }
    let n = a.rows();
    let p = similarity_matrix(g, n)?;
    let diag: Vec<f64> = (0..n).map(|k| p.get_float(k, k)).collect();
    let af = a.to_float();
    let b = apply_transform(&af, g, mode)?;
    let scale = b.max_abs_entry().max(1e-300);
    let mut err_pinv_ap = 0.0f64;
    let mut err_p_ap_inv = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let aij = af.get_float(i, j);
            let bij = b.get_float(i, j);
            err_pinv_ap = err_pinv_ap.max((aij * diag[j] / diag[i] - bij).abs());
            err_p_ap_inv = err_p_ap_inv.max((aij * diag[i] / diag[j] - bij).abs());
        }
    }
    let (orientation, best, other) = if err_pinv_ap <= err_p_ap_inv {
        (Orientation::PInvAP, err_pinv_ap, err_p_ap_inv)
    } else {
        (Orientation::PAPInv, err_p_ap_inv, err_pinv_ap)
    };
    let eigenvalues = af.eigenvalues()?;
    let espread = eigenvalues
        .iter()
        .map(|z| z.norm())
        .fold(1e-300f64, f64::max);
    let mut degenerate = false;
    for (k, x) in eigenvalues.iter().enumerate() {
        for y in &eigenvalues[k + 1..] {
            if (x - y).norm() <= 1e-8 * espread {
                degenerate = true;
            }
        }
    }
    Ok(ConjugationReport {
        orientation,
        max_rel_err: best / scale,
        other_rel_err: other / scale,
        diag,
        degenerate_spectrum: degenerate,
    })
}

/// Nullity bookkeeping for one transform of one matrix.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Report {
    pub rank_before: usize,
    pub rank_after: usize,
    pub nullity_before: usize,
    pub nullity_after: usize,
    pub preserved: bool,
    pub separable: bool,
    pub witness: Option<(usize, usize, usize, usize)>,
}

/// Computes rank/nullity of `a` and of its transform, plus the separability
/// verdict. Whenever `separable` holds, `preserved` must hold too; that
/// implication is the testable content.
pub fn verify_theorem1(a: &DenseMatrix, g: &TransformFn, mode: Mode) -> Result<Theorem1Report, TransformError> {
    let b = apply_transform_promoting(a, g, mode)?;
    let tol = DEFAULT_RANK_TOL;
    let rank_before = a.rank(tol);
    let rank_after = b.rank(tol);
    let report = is_separable(g, a.rows(), a.cols(), SEPARABILITY_TOL)?;
    Ok(Theorem1Report {
        rank_before,
        rank_after,
        nullity_before: a.cols() - rank_before,
        nullity_after: b.cols() - rank_after,
        preserved: rank_before == rank_after,
        separable: report.separable,
        witness: report.witness,
    })
}
