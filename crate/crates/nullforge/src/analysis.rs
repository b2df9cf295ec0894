//! Post-processing of zero modes and spectra: normalized amplitude profiles,
//! localization metrics, and least-squares gap-law fits.

use serde::Serialize;
use thiserror::Error;

use crate::matrix::Vector;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("cannot profile the zero vector")]
    ZeroVector,
    #[error("need at least {need} gaps, got {got}")]
    TooFewGaps { need: usize, got: usize },
}

/// Site-by-site magnitude profile of a normalized mode.
///
/// `log10_amplitude` is `None` at exactly-zero components (serialized as JSON
/// null rather than a minus-infinity sentinel).
#[derive(Debug, Clone, Serialize)]
pub struct Profile {
    /// 1-based site indices.
    pub site: Vec<usize>,
    /// |component| after dividing by the Euclidean norm.
    pub amplitude: Vec<f64>,
    pub log10_amplitude: Vec<Option<f64>>,
    /// The Euclidean norm that was divided out.
    pub normalization: f64,
}

pub fn profile(v: &Vector) -> Result<Profile, AnalysisError> {
    let comps = v.to_float();
    let norm = comps.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(AnalysisError::ZeroVector);
    }
    let amplitude: Vec<f64> = comps.iter().map(|x| (x / norm).abs()).collect();
    let log10_amplitude = amplitude
        .iter()
        .map(|&a| if a == 0.0 { None } else { Some(a.log10()) })
        .collect();
    Ok(Profile {
        site: (1..=comps.len()).collect(),
        amplitude,
        log10_amplitude,
        normalization: norm,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LocalizationMetrics {
    /// Inverse participation ratio, sum of |v_k|^4 of the unit-norm mode:
    /// 1 when fully localized, 1/n when uniform.
    pub ipr: f64,
    /// 1-based site of the largest amplitude (first one on ties).
    pub peak_site: usize,
    /// Smallest nonzero amplitude over the largest.
    pub suppression: f64,
}

pub fn localization_metrics(p: &Profile) -> LocalizationMetrics {
    let ipr = p.amplitude.iter().map(|a| a.powi(4)).sum();
    let mut peak_site = 1;
    let mut peak = f64::MIN;
    for (k, &a) in p.amplitude.iter().enumerate() {
        if a > peak {
            peak = a;
            peak_site = k + 1;
        }
    }
    let min_nonzero = p
        .amplitude
        .iter()
        .copied()
        .filter(|&a| a > 0.0)
        .fold(f64::INFINITY, f64::min);
    LocalizationMetrics { ipr, peak_site, suppression: min_nonzero / peak }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapLaw {
    Constant,
    LinearInK,
}

/// Least-squares fit of a gap sequence to one of the two tower laws.
///
/// Residuals are relative to the fitted value at each k; both the worst case
/// and the root-mean-square are reported.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapFit {
    pub law: GapLaw,
    /// Constant law: the level. Linear law: the slope in k.
    pub coeff: f64,
    /// Zero for the constant law.
    pub intercept: f64,
    pub max_rel_residual: f64,
    pub rms_rel_residual: f64,
}

pub fn fit_gap_law(gaps: &[f64], law: GapLaw) -> Result<GapFit, AnalysisError> {
    if gaps.len() < 3 {
        return Err(AnalysisError::TooFewGaps { need: 3, got: gaps.len() });
    }
    let n = gaps.len() as f64;
    let (coeff, intercept) = match law {
        GapLaw::Constant => (gaps.iter().sum::<f64>() / n, 0.0),
        GapLaw::LinearInK => {
            // Ordinary least squares on y = coeff * k + intercept, k = 1-based.
            let sum_k: f64 = (1..=gaps.len()).map(|k| k as f64).sum();
            let sum_k2: f64 = (1..=gaps.len()).map(|k| (k as f64) * (k as f64)).sum();
            let sum_y: f64 = gaps.iter().sum();
            let sum_ky: f64 = gaps.iter().enumerate().map(|(i, y)| (i as f64 + 1.0) * y).sum();
            let det = n * sum_k2 - sum_k * sum_k;
            let slope = (n * sum_ky - sum_k * sum_y) / det;
            let inter = (sum_y - slope * sum_k) / n;
            (slope, inter)
        }
    };
    let mut max_rel: f64 = 0.0;
    let mut sq_sum = 0.0;
    for (i, &y) in gaps.iter().enumerate() {
        let fitted = coeff * match law {
            GapLaw::Constant => 1.0,
            GapLaw::LinearInK => i as f64 + 1.0,
        } + intercept;
        let rel = (y - fitted).abs() / fitted.abs().max(1e-300);
        max_rel = max_rel.max(rel);
        sq_sum += rel * rel;
    }
    Ok(GapFit {
        law,
        coeff,
        intercept,
        max_rel_residual: max_rel,
        rms_rel_residual: (sq_sum / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_mode_profile() {
        let v = Vector::from_i64(&[16, -8, 4, -2]);
        let p = profile(&v).unwrap();
        for w in p.amplitude.windows(2) {
            assert!((w[0] / w[1] - 2.0).abs() < 1e-12);
        }
        let norm: f64 = p.amplitude.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_vector_profile_and_metrics() {
        let v = Vector::Float(vec![1.0, 0.0, 0.0]);
        let p = profile(&v).unwrap();
        assert_eq!(p.amplitude, vec![1.0, 0.0, 0.0]);
        assert_eq!(p.log10_amplitude[1], None);
        let m = localization_metrics(&p);
        assert_eq!(m.peak_site, 1);
        assert!((m.ipr - 1.0).abs() < 1e-12);
        assert!((m.suppression - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_vector_ipr() {
        let n = 10;
        let v = Vector::Float(vec![1.0; n]);
        let m = localization_metrics(&profile(&v).unwrap());
        assert!((m.ipr - 1.0 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn profile_is_scale_invariant() {
        let v = Vector::Float(vec![0.3, -1.2, 0.9]);
        let w = Vector::Float(vec![-0.3 * 7.5, 1.2 * 7.5, -0.9 * 7.5]);
        let (pv, pw) = (profile(&v).unwrap(), profile(&w).unwrap());
        for (a, b) in pv.amplitude.iter().zip(&pw.amplitude) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(profile(&Vector::Float(vec![0.0, 0.0])).unwrap_err(), AnalysisError::ZeroVector);
    }

    #[test]
    fn alternating_profile_differs_from_geometric() {
        use num_rational::BigRational;
        let q = BigRational::from_integer(2.into());
        let n = 15;
        let geo = crate::models::zero_mode_analytic(
            &crate::models::ZeroModeFormula::CwGeometric { q: q.clone() },
            n,
        )
        .unwrap();
        let alt = crate::models::zero_mode_analytic(
            &crate::models::ZeroModeFormula::AlternatingCol { q },
            n,
        )
        .unwrap();
        let slope_spread = |v: &Vector| {
            let p = profile(v).unwrap();
            let diffs: Vec<f64> = p
                .log10_amplitude
                .windows(2)
                .map(|w| w[1].unwrap() - w[0].unwrap())
                .collect();
            let max = diffs.iter().cloned().fold(f64::MIN, f64::max);
            let min = diffs.iter().cloned().fold(f64::MAX, f64::min);
            max - min
        };
        // Geometric: a single log-slope. Alternating: a zig-zag, successive
        // log-steps far apart.
        assert!(slope_spread(&geo) < 1e-9);
        assert!(slope_spread(&alt) > 1.0);
    }

    #[test]
    fn constant_fit_on_flat_gaps() {
        let fit = fit_gap_law(&[1.0, 1.0, 1.0], GapLaw::Constant).unwrap();
        assert_eq!(fit.coeff, 1.0);
        assert_eq!(fit.max_rel_residual, 0.0);
    }

    #[test]
    fn linear_fit_recovers_slope() {
        let gaps: Vec<f64> = (1..=8).map(|k| 0.25 * k as f64 + 0.1).collect();
        let fit = fit_gap_law(&gaps, GapLaw::LinearInK).unwrap();
        assert!((fit.coeff - 0.25).abs() < 1e-12);
        assert!((fit.intercept - 0.1).abs() < 1e-12);
        assert!(fit.max_rel_residual < 1e-12);
    }

    #[test]
    fn too_few_gaps() {
        assert!(matches!(
            fit_gap_law(&[1.0, 2.0], GapLaw::Constant),
            Err(AnalysisError::TooFewGaps { .. })
        ));
    }
}
