//! Theory-space mass matrices and their closed-form zero modes and spectra:
//! uniform and generalized clockwork chains, completely non-local clockwork,
//! the deconstruction tridiagonal, and the Kaluza-Klein bidiagonal link
//! matrix. Every closed form here is checked against an independent numeric
//! route in the test suite (exact kernels via elimination, spectra via SVD).
//!
//! Conventions. Components are indexed 1-based, `k = 1..=len`. The geometric
//! clockwork mode stores exponent `n+2-k` at component k, the orientation that
//! decays from site 1 toward the last site for q > 1. Multiplying the uniform
//! chain entrywise by `q^(i-j)` produces the mirror orientation (equivalently
//! this closed form at `1/q`); dividing by `q^(i-j)` matches it directly. All
//! kernel comparisons are proportionality or subspace checks, so the
//! orientation convention is explicit rather than load-bearing.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{self, GapFit, GapLaw};
use crate::gfdsl::{GfdslError, TransformFn};
use crate::matrix::{DenseMatrix, MatrixError, NullBasis, Spectrum, SpectrumKind, Vector};
use crate::transform::{apply_transform_promoting, Mode, TransformError};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("operation does not apply to model kind `{0:?}`")]
    WrongKind(ModelKind),
    #[error("invalid site count {n}: {reason}")]
    BadSiteCount { n: usize, reason: String },
    #[error("parameter error: {0}")]
    Param(String),
    #[error("no zero mode at n = {0}: formula requires n = 2 (mod 3)")]
    ZeroModeAbsent(usize),
    #[error("non-local enumeration is guarded at n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Gfdsl(#[from] GfdslError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    UniformCw,
    GeneralizedCw,
    NonlocalCw,
    Deconstruction,
    KkBidiagonal,
}

/// A scalar parameter or a per-site list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Scalar(f64),
    List(Vec<f64>),
}

/// Transform attached to a model: expression source, bindings, and mode.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GfSpec {
    pub expr: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub mode: Mode,
}

impl GfSpec {
    pub fn to_transform(&self) -> Result<TransformFn, GfdslError> {
        let params: Vec<(&str, f64)> = self.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        TransformFn::parse(&self.expr, &params)
    }
}

/// Declarative description of a theory-space model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub n: usize,
    #[serde(default)]
    pub params: BTreeMap<String, ParamValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gf: Option<GfSpec>,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, n: usize) -> Self {
        ModelSpec { kind, n, params: BTreeMap::new(), gf: None }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.into(), ParamValue::Scalar(value));
        self
    }

    pub fn with_list(mut self, name: &str, values: &[f64]) -> Self {
        self.params.insert(name.into(), ParamValue::List(values.to_vec()));
        self
    }

    pub fn with_gf(mut self, expr: &str, params: &[(&str, f64)], mode: Mode) -> Self {
        self.gf = Some(GfSpec {
            expr: expr.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            mode,
        });
        self
    }

    fn scalar(&self, name: &str, default: f64) -> Result<f64, ModelError> {
        match self.params.get(name) {
            None => Ok(default),
            Some(ParamValue::Scalar(v)) => Ok(*v),
            Some(ParamValue::List(_)) => {
                Err(ModelError::Param(format!("`{name}` must be a scalar for this model")))
            }
        }
    }

    /// A per-site list of length `len`; scalars broadcast.
    fn list(&self, name: &str, len: usize, default: f64) -> Result<Vec<f64>, ModelError> {
        match self.params.get(name) {
            None => Ok(vec![default; len]),
            Some(ParamValue::Scalar(v)) => Ok(vec![*v; len]),
            Some(ParamValue::List(v)) => {
                if v.len() != len {
                    return Err(ModelError::Param(format!(
                        "`{name}` must have length {len}, got {}",
                        v.len()
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

fn exact(x: f64) -> Result<BigRational, ModelError> {
    BigRational::from_float(x).ok_or_else(|| ModelError::Param(format!("non-finite parameter {x}")))
}

fn exact_vec(xs: &[f64]) -> Result<Vec<BigRational>, ModelError> {
    xs.iter().map(|&x| exact(x)).collect()
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

/// Uniform clockwork chain: n x (n+1) bidiagonal with `m` on both bands.
pub fn uniform_cw(n: usize, m: &BigRational) -> DenseMatrix {
    let mut e = vec![BigRational::zero(); n * (n + 1)];
    for i in 0..n {
        e[i * (n + 1) + i] = m.clone();
        e[i * (n + 1) + i + 1] = m.clone();
    }
    DenseMatrix::from_rational(n, n + 1, e).expect("positive dimensions")
}

/// Generalized clockwork: row i couples with strength `m[i]` to its own site
/// and `m[i] * q[i]` to the next.
pub fn generalized_cw(n: usize, m: &[BigRational], q: &[BigRational]) -> Result<DenseMatrix, ModelError> {
    if m.len() != n || q.len() != n {
        return Err(ModelError::Param(format!("need {n} masses and couplings")));
    }
    let mut e = vec![BigRational::zero(); n * (n + 1)];
    for i in 0..n {
        e[i * (n + 1) + i] = m[i].clone();
        e[i * (n + 1) + i + 1] = &m[i] * &q[i];
    }
    Ok(DenseMatrix::from_rational(n, n + 1, e)?)
}

/// Completely non-local clockwork with uniform bands: H_{i,j} = a_{j-i} on
/// the upper band, i.e. entry (i, i+k) is `a[k]`.
pub fn nonlocal_cw(n: usize, a: &[BigRational]) -> Result<DenseMatrix, ModelError> {
    if a.len() != n + 1 {
        return Err(ModelError::Param(format!("need n+1 = {} band couplings", n + 1)));
    }
    if a[0].is_zero() {
        return Err(ModelError::Param("leading band coupling a_0 must be nonzero".into()));
    }
    let mut e = vec![BigRational::zero(); n * (n + 1)];
    for i in 0..n {
        for j in i..=n {
            e[i * (n + 1) + j] = a[j - i].clone();
        }
    }
    Ok(DenseMatrix::from_rational(n, n + 1, e)?)
}

/// Local deconstruction Hamiltonian: n x n symmetric tridiagonal with `m` on
/// all three bands.
pub fn deconstruction(n: usize, m: &BigRational) -> DenseMatrix {
    let mut e = vec![BigRational::zero(); n * n];
    for i in 0..n {
        e[i * n + i] = m.clone();
        if i + 1 < n {
            e[i * n + i + 1] = m.clone();
            e[(i + 1) * n + i] = m.clone();
        }
    }
    DenseMatrix::from_rational(n, n, e).expect("positive dimensions")
}

/// Kaluza-Klein link matrix: (N+1) x N with `Mf * g` on the diagonal and
/// `-Mf * gp` on the subdiagonal.
pub fn kk_bidiagonal(n: usize, mf: &BigRational, g: &BigRational, gp: &BigRational) -> DenseMatrix {
    let mut e = vec![BigRational::zero(); (n + 1) * n];
    for j in 0..n {
        e[j * n + j] = mf * g;
        e[(j + 1) * n + j] = -(mf * gp);
    }
    DenseMatrix::from_rational(n + 1, n, e).expect("positive dimensions")
}

/// Builds the matrix described by `spec`, composing the attached transform
/// (if any) after construction. The base matrix is exact; a transform with no
/// exact value (a sine factor, say) promotes the result to float.
pub fn build(spec: &ModelSpec) -> Result<DenseMatrix, ModelError> {
    if spec.n == 0 {
        return Err(ModelError::BadSiteCount { n: 0, reason: "need at least one site".into() });
    }
    let n = spec.n;
    let base = match spec.kind {
        ModelKind::UniformCw => {
            let m = exact(spec.scalar("m", 1.0)?)?;
            ensure_positive(&m, "m")?;
            uniform_cw(n, &m)
        }
        ModelKind::GeneralizedCw => {
            let m = exact_vec(&spec.list("m", n, 1.0)?)?;
            let q = exact_vec(&spec.list("q", n, 1.0)?)?;
            for x in &m {
                ensure_positive(x, "m")?;
            }
            generalized_cw(n, &m, &q)?
        }
        ModelKind::NonlocalCw => {
            let a = exact_vec(&spec.list("a", n + 1, 1.0)?)?;
            nonlocal_cw(n, &a)?
        }
        ModelKind::Deconstruction => {
            let m = exact(spec.scalar("m", 1.0)?)?;
            ensure_positive(&m, "m")?;
            deconstruction(n, &m)
        }
        ModelKind::KkBidiagonal => {
            let mf = exact(spec.scalar("Mf", 1.0)?)?;
            ensure_positive(&mf, "Mf")?;
            let g = exact(spec.scalar("g", 1.0)?)?;
            let gp = exact(spec.scalar("gp", 1.0)?)?;
            kk_bidiagonal(n, &mf, &g, &gp)
        }
    };
    match &spec.gf {
        None => Ok(base),
        Some(gf) => {
            let tf = gf.to_transform()?;
            Ok(apply_transform_promoting(&base, &tf, gf.mode)?)
        }
    }
}

fn ensure_positive(x: &BigRational, name: &str) -> Result<(), ModelError> {
    if *x <= BigRational::zero() {
        return Err(ModelError::Param(format!("`{name}` must be positive")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Closed-form zero modes
// ---------------------------------------------------------------------------

/// The closed-form kernel profiles implemented by [`zero_mode_analytic`].
#[derive(Debug, Clone)]
pub enum ZeroModeFormula {
    /// Geometric clockwork mode of the n x (n+1) chain: component k is
    /// `(-q)^(n+2-k)`.
    CwGeometric { q: BigRational },
    /// Mode of the chain rescaled column-wise by `q^((-1)^j j)`: component k
    /// is `(-1)^k q^(n+1-(-1)^k k)`.
    AlternatingCol { q: BigRational },
    /// Kernel of the uniform completely non-local chain with couplings
    /// `a[0]..a[n]`: component K sums multinomial weights over the
    /// compositions `1*k_1 + 2*k_2 + ... + n*k_n = n+1-K`.
    NonlocalMultinomial { couplings: Vec<BigRational> },
    /// Kernel of the deconstruction tridiagonal (n = 2 mod 3): the repeating
    /// pattern (-1, 1, 0, ...) over k mod 3 = (1, 2, 0).
    DeconMod3,
    /// Right kernel of the deconstruction chain rescaled column-wise by
    /// `a^((-1)^j j)`: magnitudes `a^(n-(-1)^(n-k) k)` when (n-2)/3 is even,
    /// their reciprocals when odd; signs +/- over k mod 3 = (1, 2).
    DeconTransformedRight { a: BigRational },
    /// Left kernel of the same chain with row factor `sin(2ai)`: components
    /// `+/- sin(2na)/sin(2ka)` over k mod 3 = (1, 2).
    DeconTransformedLeft { a: f64 },
}

const NONLOCAL_MAX_N: usize = 12;

/// Evaluates a closed-form zero mode at site count `n`, unnormalized.
/// Components are exact rationals whenever the formula permits.
pub fn zero_mode_analytic(formula: &ZeroModeFormula, n: usize) -> Result<Vector, ModelError> {
    match formula {
        ZeroModeFormula::CwGeometric { q } => {
            if q.is_zero() {
                return Err(ModelError::Param("`q` must be nonzero".into()));
            }
            let mq = -q.clone();
            let v = (1..=n + 1).map(|k| pow_rational(&mq, (n + 2 - k) as i64)).collect();
            Ok(Vector::Rational(v))
        }
        ZeroModeFormula::AlternatingCol { q } => {
            if q.is_zero() {
                return Err(ModelError::Param("`q` must be nonzero".into()));
            }
            let v = (1..=n + 1)
                .map(|k| {
                    let sign = if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                    let exponent = n as i64 + 1 - alt_sign(k) * k as i64;
                    sign * pow_rational(q, exponent)
                })
                .collect();
            Ok(Vector::Rational(v))
        }
        ZeroModeFormula::NonlocalMultinomial { couplings } => {
            if n > NONLOCAL_MAX_N {
                return Err(ModelError::TooLarge { n, max: NONLOCAL_MAX_N });
            }
            if couplings.len() != n + 1 {
                return Err(ModelError::Param(format!("need n+1 = {} couplings", n + 1)));
            }
            if couplings[0].is_zero() {
                return Err(ModelError::Param("leading coupling a_0 must be nonzero".into()));
            }
            let v = (1..=n + 1).map(|k| multinomial_component(couplings, n, k)).collect();
            Ok(Vector::Rational(v))
        }
        ZeroModeFormula::DeconMod3 => {
            require_mod3(n)?;
            let v = (1..=n)
                .map(|k| match k % 3 {
                    1 => -BigRational::one(),
                    2 => BigRational::one(),
                    _ => BigRational::zero(),
                })
                .collect();
            Ok(Vector::Rational(v))
        }
        ZeroModeFormula::DeconTransformedRight { a } => {
            require_mod3(n)?;
            if a.is_zero() {
                return Err(ModelError::Param("`a` must be nonzero".into()));
            }
            // Two regimes by the parity of h = (n-2)/3, which equals the
            // parity of n itself; each one makes the column rescaling cancel
            // site-independently.
            let reciprocal = ((n - 2) / 3) % 2 == 1;
            let v = (1..=n)
                .map(|k| {
                    let sign = match k % 3 {
                        1 => BigRational::one(),
                        2 => -BigRational::one(),
                        _ => return BigRational::zero(),
                    };
                    let e = n as i64 - alt_sign(n - k) * k as i64;
                    sign * pow_rational(a, if reciprocal { -e } else { e })
                })
                .collect();
            Ok(Vector::Rational(v))
        }
        ZeroModeFormula::DeconTransformedLeft { a } => {
            require_mod3(n)?;
            let num = (2.0 * n as f64 * a).sin();
            let v = (1..=n)
                .map(|k| {
                    let den = (2.0 * k as f64 * a).sin();
                    match k % 3 {
                        1 => Ok(num / check_nonzero(den, k)?),
                        2 => Ok(-num / check_nonzero(den, k)?),
                        _ => Ok(0.0),
                    }
                })
                .collect::<Result<Vec<f64>, ModelError>>()?;
            Ok(Vector::Float(v))
        }
    }
}

/// Normalized float variant: the analytic mode divided by its Euclidean norm.
pub fn zero_mode_analytic_normalized(formula: &ZeroModeFormula, n: usize) -> Result<Vec<f64>, ModelError> {
    let v = zero_mode_analytic(formula, n)?.to_float();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(ModelError::Param("zero mode vanished".into()));
    }
    Ok(v.iter().map(|x| x / norm).collect())
}

fn require_mod3(n: usize) -> Result<(), ModelError> {
    if n % 3 != 2 {
        return Err(ModelError::ZeroModeAbsent(n));
    }
    Ok(())
}

fn check_nonzero(x: f64, k: usize) -> Result<f64, ModelError> {
    if x.abs() < 1e-300 {
        return Err(ModelError::Param(format!("sin(2ka) vanishes at k = {k}")));
    }
    Ok(x)
}

/// (-1)^k as a multiplier.
fn alt_sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn pow_rational(x: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let mag = e.unsigned_abs() as u32;
    let p = BigRational::new(x.numer().pow(mag), x.denom().pow(mag));
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
}

/// Component K of the non-local kernel: sum over all compositions
/// `sum_t t*k_t = n+1-K` of
/// `(sum k)! / prod(k_t!) * prod (-a_t)^(k_t) / a_0^(sum k)`.
fn multinomial_component(a: &[BigRational], n: usize, component: usize) -> BigRational {
    fn recurse(a: &[BigRational], t: usize, left: usize, counts: &mut [u64], total: &mut BigRational) {
        if t == 0 {
            if left != 0 {
                return;
            }
            let parts: u64 = counts.iter().sum();
            let mut denom = BigInt::one();
            let mut prod = BigRational::one();
            for (idx, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                denom *= factorial(c);
                prod *= pow_rational(&-a[idx].clone(), c as i64);
            }
            let coeff = BigRational::from_integer(factorial(parts)) / BigRational::from_integer(denom);
            *total += coeff * prod / pow_rational(&a[0], parts as i64);
            return;
        }
        for c in 0..=(left / t) as u64 {
            counts[t] = c;
            recurse(a, t - 1, left - c as usize * t, counts, total);
        }
        counts[t] = 0;
    }

    let weight = n + 1 - component;
    let mut total = BigRational::zero();
    let mut counts = vec![0u64; n + 1];
    recurse(a, n.min(weight), weight, &mut counts, &mut total);
    total
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

/// Closed-form mass spectrum matching the built (N+1) x N link matrix
/// exactly: `Mf * sqrt(g^2 + gp^2 - 2 g gp cos(k pi / (N+1)))`, k = 1..N,
/// ascending. The cosine denominator is the matrix row count N+1; see
/// [`compare_spectrum`] for the record of that adjudication against the
/// display form with denominator N.
pub fn spectrum_analytic(spec: &ModelSpec) -> Result<Spectrum, ModelError> {
    let (n, mf, g, gp) = kk_params(spec)?;
    let denom = (n + 1) as f64;
    let values = (1..=n)
        .map(|k| band_mass(mf, g, gp, k as f64 * std::f64::consts::PI / denom))
        .collect();
    Ok(Spectrum::new(values, SpectrumKind::Singular))
}

/// The display form of the same spectrum: denominator N, k = 1..N-1. For
/// g = gp it reduces to `2 Mf sin(k pi / (2N))`; the variant quoted with
/// `+ 2 g gp cos` lists the same multiset walking down from the band top.
pub fn spectrum_quoted(spec: &ModelSpec) -> Result<Spectrum, ModelError> {
    let (n, mf, g, gp) = kk_params(spec)?;
    let denom = n as f64;
    let values = (1..n)
        .map(|k| band_mass(mf, g, gp, k as f64 * std::f64::consts::PI / denom))
        .collect();
    Ok(Spectrum::new(values, SpectrumKind::Singular))
}

fn band_mass(mf: f64, g: f64, gp: f64, theta: f64) -> f64 {
    mf * (g * g + gp * gp - 2.0 * g * gp * theta.cos()).max(0.0).sqrt()
}

fn kk_params(spec: &ModelSpec) -> Result<(usize, f64, f64, f64), ModelError> {
    if spec.kind != ModelKind::KkBidiagonal {
        return Err(ModelError::WrongKind(spec.kind));
    }
    if spec.gf.is_some() {
        return Err(ModelError::Param(
            "analytic spectra describe the bare link matrix; drop the gf transform".into(),
        ));
    }
    if spec.n < 2 {
        return Err(ModelError::BadSiteCount { n: spec.n, reason: "need at least two sites".into() });
    }
    Ok((spec.n, spec.scalar("Mf", 1.0)?, spec.scalar("g", 1.0)?, spec.scalar("gp", 1.0)?))
}

/// Numeric singular values next to both closed forms, with the convention
/// mismatch quantified.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumComparison {
    /// Singular values of the built matrix, ascending (N values).
    pub numeric: Vec<f64>,
    /// Finite-matrix closed form (N values, cosine denominator N+1).
    pub analytic: Vec<f64>,
    /// Display closed form (N-1 values, cosine denominator N).
    pub quoted: Vec<f64>,
    /// Largest relative deviation numeric vs analytic over all N values.
    pub max_rel_err_analytic: f64,
    /// Largest relative deviation numeric vs quoted over the ascending
    /// k = 1..N-1 overlap; stays at the 1/N convention-mismatch level.
    pub max_rel_err_quoted: f64,
    /// The adjudicated cosine denominator (the matrix row count).
    pub denominator: usize,
}

pub fn compare_spectrum(spec: &ModelSpec) -> Result<SpectrumComparison, ModelError> {
    let analytic = spectrum_analytic(spec)?;
    let quoted = spectrum_quoted(spec)?;
    let numeric = build(spec)?.to_float().singular_values();
    let max_rel = |xs: &[f64], ys: &[f64]| {
        xs.iter()
            .zip(ys)
            .map(|(x, y)| (x - y).abs() / y.abs().max(1e-300))
            .fold(0.0f64, f64::max)
    };
    Ok(SpectrumComparison {
        max_rel_err_analytic: max_rel(numeric.values(), analytic.values()),
        max_rel_err_quoted: max_rel(&numeric.values()[..quoted.len()], quoted.values()),
        numeric: numeric.values().to_vec(),
        analytic: analytic.values().to_vec(),
        quoted: quoted.values().to_vec(),
        denominator: spec.n + 1,
    })
}

/// Consecutive gaps of a spectrum (at least two values required).
pub fn mass_gaps(s: &Spectrum) -> Result<Vec<f64>, ModelError> {
    if s.len() < 2 {
        return Err(ModelError::Param("need at least two masses for gaps".into()));
    }
    Ok(s.gaps().to_vec())
}

/// Gap fits against the two laws a tower can follow: constant gaps at the
/// bottom of the tower (ascending order) and linear-in-k gaps walking down
/// from the top of the band (descending order).
#[derive(Debug, Clone, Serialize)]
pub struct GapFitReport {
    pub ascending_gaps: Vec<f64>,
    pub descending_gaps: Vec<f64>,
    pub constant: GapFit,
    pub linear_in_k: GapFit,
}

pub fn gap_fit_report(s: &Spectrum, k_max: usize) -> Result<GapFitReport, ModelError> {
    let gaps = mass_gaps(s)?;
    let take = k_max.min(gaps.len());
    let ascending: Vec<f64> = gaps[..take].to_vec();
    let mut reversed: Vec<f64> = gaps;
    reversed.reverse();
    let descending: Vec<f64> = reversed[..take].to_vec();
    let constant = analysis::fit_gap_law(&ascending, GapLaw::Constant)
        .map_err(|e| ModelError::Param(e.to_string()))?;
    let linear_in_k = analysis::fit_gap_law(&descending, GapLaw::LinearInK)
        .map_err(|e| ModelError::Param(e.to_string()))?;
    Ok(GapFitReport { ascending_gaps: ascending, descending_gaps: descending, constant, linear_in_k })
}

// ---------------------------------------------------------------------------
// Chiral modes
// ---------------------------------------------------------------------------

/// Kernels of a Dirac mass matrix and of its transpose: the right-handed
/// massless modes annihilate M, the left-handed ones annihilate M^T.
#[derive(Debug, Clone)]
pub struct ChiralModes {
    pub right: NullBasis,
    pub left: NullBasis,
}

pub fn chiral_zero_modes(m: &DenseMatrix, tol: f64) -> ChiralModes {
    ChiralModes { right: m.null_basis(tol), left: m.transpose().null_basis(tol) }
}
