use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{check_darboux_condition, recover_ribaucour_data, CheckReport, Grid, SphereCongruence, Tolerances, VerificationReport};
use crate::darboux::DarbouxPair;
use crate::error::{Error, Result};
use crate::hypersurface::{
    conformal_factor_field, fundamental_forms, jet_eval_default, metric_ratio, orthonormal_frame, unit_normal,
    ParamImmersion,
};
use crate::lorentz::Orientation;
use crate::numeric::spectral_norm;

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

/// Membership plus tangency defect of `f` against the congruence:
/// `|‖f − C‖ − R| + max_X |<f − C, f_* X>|` over unit tangents `X`.
pub fn check_envelope(
    f: &(impl ParamImmersion + ?Sized),
    congruence: &(impl SphereCongruence + ?Sized),
    grid: &Grid,
    tol: f64,
) -> Result<CheckReport> {
    let residuals: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|u| {
            let jet = jet_eval_default(f, u)?;
            let sphere = congruence.sphere_at(u)?;
            let d = &jet.point - DVector::from_column_slice(&sphere.center);
            let membership = (d.norm() - sphere.radius).abs();
            let frame = &jet.first * orthonormal_frame(&(jet.first.transpose() * &jet.first))?;
            let tangency = (frame.transpose() * &d).norm();
            Ok(membership + tangency)
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport::new("envelope", max_of(&residuals), tol, residuals.len()))
}

/// `max ‖(f + R N) − (f̃ + R Ñ)‖` with `R` the radius signed by the sphere
/// orientation, minimised over the global sign of each unit normal.
pub fn check_common_congruence(
    f: &(impl ParamImmersion + ?Sized),
    f_tilde: &(impl ParamImmersion + ?Sized),
    congruence: &(impl SphereCongruence + ?Sized),
    grid: &Grid,
    tol: f64,
) -> Result<CheckReport> {
    let per_point: Vec<[f64; 4]> = grid
        .points()
        .par_iter()
        .map(|u| {
            let a = jet_eval_default(f, u)?;
            let b = jet_eval_default(f_tilde, u)?;
            let sphere = congruence.sphere_at(u)?;
            let r = sphere.orientation.sign() * sphere.radius;
            let n = unit_normal(&a.first)? * r;
            let m = unit_normal(&b.first)? * r;
            let mut out = [0.0; 4];
            for (k, (sa, sb)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].into_iter().enumerate() {
                out[k] = (&a.point + &n * sa - &b.point - &m * sb).norm();
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let best = (0..4)
        .map(|k| max_of(&per_point.iter().map(|r| r[k]).collect::<Vec<_>>()))
        .fold(f64::INFINITY, f64::min);
    Ok(CheckReport::new("common_congruence", best, tol, per_point.len()))
}

/// Largest metric anisotropy `g̃ ≠ e^{2φ} g` on the grid.
pub fn check_conformality(
    f: &(impl ParamImmersion + ?Sized),
    f_tilde: &(impl ParamImmersion + ?Sized),
    grid: &Grid,
    tol: f64,
) -> Result<CheckReport> {
    let fit = conformal_factor_field(f, f_tilde, &grid.points(), tol)?;
    Ok(CheckReport::new("conformality", fit.anisotropy, tol, grid.len()))
}

/// `max ‖B̃² − e^{−2φ} B²‖` with `B = A − α I`, `B̃ = Ã − α I`, the shape
/// operators taken for the given normal orientations and compared in a
/// g-orthonormal frame.
pub fn check_b_squared(
    f: &(impl ParamImmersion + ?Sized),
    f_tilde: &(impl ParamImmersion + ?Sized),
    orientations: [Orientation; 2],
    alpha: &(dyn Fn(&[f64]) -> Result<f64> + Sync),
    grid: &Grid,
    tol: f64,
) -> Result<CheckReport> {
    let residuals: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|u| {
            let a = fundamental_forms(&jet_eval_default(f, u)?, orientations[0])?;
            let b = fundamental_forms(&jet_eval_default(f_tilde, u)?, orientations[1])?;
            let (ratio, _) = metric_ratio(&a.metric, &b.metric)?;
            let al = alpha(u)?;
            let n = a.dim();
            let id = DMatrix::<f64>::identity(n, n);
            let bf = &a.shape - &id * al;
            let bt = &b.shape - &id * al;
            let diff = &bt * &bt - (&bf * &bf) / ratio;
            let frame = orthonormal_frame(&a.metric)?;
            let inv = frame.clone().try_inverse().ok_or(Error::RankDeficient)?;
            Ok(spectral_norm(&(inv * diff * frame)))
        })
        .collect::<Result<_>>()?;
    Ok(CheckReport::new("b_squared", max_of(&residuals), tol, residuals.len()))
}

/// Runs every pair check on `grid`; a check that cannot be evaluated is
/// reported as failing rather than aborting the run.
pub fn verify_pair(pair: &DarbouxPair, grid: &Grid, tol: &Tolerances) -> VerificationReport {
    let or_fail = |name: &str, t: f64, r: Result<CheckReport>| match r {
        Ok(mut c) => {
            c.name = name.to_string();
            c
        }
        Err(_) => CheckReport::failed(name, t),
    };
    let mut checks = vec![
        or_fail("conformality", tol.conformal, check_conformality(&pair.f, &pair.f_tilde, grid, tol.conformal)),
        or_fail("envelope_f", tol.envelope, check_envelope(&pair.f, pair, grid, tol.envelope)),
        or_fail(
            "envelope_f_tilde",
            tol.envelope,
            check_envelope(&pair.f_tilde, pair, grid, tol.envelope),
        ),
        or_fail(
            "common_congruence",
            tol.common,
            check_common_congruence(&pair.f, &pair.f_tilde, pair, grid, tol.common),
        ),
        or_fail(
            "b_squared",
            tol.b_squared,
            check_b_squared(
                &pair.f,
                &pair.f_tilde,
                pair.orientations,
                &|u: &[f64]| {
                    let s = pair.sphere_at(u)?;
                    Ok(s.orientation.sign() / s.radius)
                },
                grid,
                tol.b_squared,
            ),
        ),
    ];
    match recover_ribaucour_data(&pair.f, &pair.f_tilde, grid) {
        Ok(data) => {
            checks.push(CheckReport::new(
                "ribaucour_recovery",
                data.consistency,
                tol.recovery,
                grid.len(),
            ));
            match check_darboux_condition(&pair.f, &pair.f_tilde, &data, grid, tol.darboux) {
                Ok(d) => {
                    checks.push(d.report);
                    checks.push(d.separation);
                }
                Err(_) => {
                    checks.push(CheckReport::failed("darboux_condition", tol.darboux));
                }
            }
        }
        Err(_) => {
            checks.push(CheckReport::failed("ribaucour_recovery", tol.recovery));
            checks.push(CheckReport::failed("darboux_condition", tol.darboux));
        }
    }
    VerificationReport::new(checks, grid.clone())
}
