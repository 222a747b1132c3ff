use nalgebra::DMatrix;
use rayon::prelude::*;

use super::forms::orthonormal_frame;
use super::jet::{jet_eval_default, ParamImmersion};
use crate::error::{Error, Result};

/// Pointwise least-squares fit `g_other ≈ e^{2φ} g_base`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConformalFit {
    /// `φ` at each sample.
    pub phi: Vec<f64>,
    /// Largest relative residual of the fit over the samples.
    pub anisotropy: f64,
    pub conformal: bool,
}

/// Best scalar `e^{2φ}` with `other ≈ e^{2φ} base` and the relative
/// Frobenius residual of the fit, measured in a base-orthonormal frame.
pub fn metric_ratio(base: &DMatrix<f64>, other: &DMatrix<f64>) -> Result<(f64, f64)> {
    let frame = orthonormal_frame(base)?;
    let m = frame.transpose() * other * &frame;
    let n = m.nrows();
    let scale = m.trace() / n as f64;
    if !(scale > 0.0) {
        return Err(Error::DegenerateMetric(format!("metric ratio {scale} is not positive")));
    }
    let residual = (&m - DMatrix::identity(n, n) * scale).norm() / m.norm();
    Ok((scale, residual))
}

/// Compares the metrics induced by two immersions over a common domain.
pub fn conformal_factor_field(
    base: &(impl ParamImmersion + ?Sized),
    other: &(impl ParamImmersion + ?Sized),
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<ConformalFit> {
    let fits: Vec<(f64, f64)> = samples
        .par_iter()
        .map(|u| {
            let a = jet_eval_default(base, u)?;
            let b = jet_eval_default(other, u)?;
            metric_ratio(&(a.first.transpose() * &a.first), &(b.first.transpose() * &b.first))
        })
        .collect::<Result<_>>()?;
    let phi = fits.iter().map(|(s, _)| 0.5 * s.ln()).collect();
    let anisotropy = fits.iter().map(|(_, r)| *r).fold(0.0, f64::max);
    Ok(ConformalFit {
        phi,
        anisotropy,
        conformal: anisotropy <= tol,
    })
}
