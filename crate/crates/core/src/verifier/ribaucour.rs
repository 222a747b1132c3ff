use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CheckReport, Grid};
use crate::error::{Error, Result};
use crate::hypersurface::{jet_eval_default, orthonormal_frame, ImmersionJet, ParamImmersion};
use crate::numeric::gauss_legendre_unit;

/// Ribaucour data `(φ, 𝓕, ν)` of a pair with `f̃ = f − 2νφ𝓕` and
/// `ν⟨𝓕, 𝓕⟩ = 1`, normalised by `φ = |f − f̃|²/2` at the first grid point.
#[derive(Clone, Debug)]
pub struct RibaucourData {
    pub phi: Vec<f64>,
    pub field: Vec<DVector<f64>>,
    pub nu: Vec<f64>,
    /// `𝓕 = σ (f − f̃)` at each grid point.
    pub sigma: Vec<f64>,
    /// Largest misfit of `d ln σ` along grid edges.
    pub consistency: f64,
}

const COINCIDENCE_TOL: f64 = 1e-10;

fn separation(f: &ImmersionJet, g: &ImmersionJet) -> Result<DVector<f64>> {
    let v = &f.point - &g.point;
    if v.norm() < COINCIDENCE_TOL * f.point.norm().max(1.0) {
        return Err(Error::Degenerate(format!("the immersions coincide at {:?}", f.param)));
    }
    Ok(v)
}

/// `ω(X) = 2<f − f̃, f̃_* X>/|f − f̃|²`, the logarithmic derivative of `σ`.
fn log_rate(f: &ImmersionJet, g: &ImmersionJet) -> Result<DVector<f64>> {
    let v = separation(f, g)?;
    Ok(g.first.transpose() * &v * (2.0 / v.norm_squared()))
}

/// Recovers `(φ, 𝓕, ν)` from the pair alone. `𝓕` is parallel to `f − f̃`,
/// and requiring its tangential part to be the gradient of `φ` fixes
/// `d ln σ = ω`; this is integrated along grid edges by Gauss quadrature
/// and solved in least squares.
pub fn recover_ribaucour_data(
    f: &(impl ParamImmersion + ?Sized),
    f_tilde: &(impl ParamImmersion + ?Sized),
    grid: &Grid,
) -> Result<RibaucourData> {
    let points = grid.points();
    let jets: Vec<(ImmersionJet, ImmersionJet)> = points
        .par_iter()
        .map(|u| Ok((jet_eval_default(f, u)?, jet_eval_default(f_tilde, u)?)))
        .collect::<Result<_>>()?;
    let separations: Vec<DVector<f64>> = jets.iter().map(|(a, b)| separation(a, b)).collect::<Result<_>>()?;

    let rule = gauss_legendre_unit();
    let edges = grid.edges();
    let increments: Vec<f64> = edges
        .par_iter()
        .map(|&(i, j, axis)| {
            let (p, q) = (&points[i], &points[j]);
            let len = q[axis] - p[axis];
            let mut total = 0.0;
            for &(t, w) in &rule {
                let mut u = p.clone();
                u[axis] += t * len;
                let a = jet_eval_default(f, &u)?;
                let b = jet_eval_default(f_tilde, &u)?;
                total += w * len * log_rate(&a, &b)?[axis];
            }
            Ok(total)
        })
        .collect::<Result<_>>()?;

    // least squares for x = ln σ with x_0 = 0
    let n = points.len();
    let mut log_sigma = vec![0.0; n];
    if n > 1 {
        let m = n - 1;
        let mut lap = DMatrix::<f64>::zeros(m, m);
        let mut rhs = DVector::<f64>::zeros(m);
        for (&(i, j, _), &d) in edges.iter().zip(&increments) {
            // x_j - x_i = d
            for (node, sign) in [(j, 1.0), (i, -1.0)] {
                if node == 0 {
                    continue;
                }
                rhs[node - 1] += sign * d;
                for (other, s2) in [(j, 1.0), (i, -1.0)] {
                    if other != 0 {
                        lap[(node - 1, other - 1)] += sign * s2;
                    }
                }
            }
        }
        let x = lap
            .cholesky()
            .ok_or_else(|| Error::Degenerate("grid is not connected".into()))?
            .solve(&rhs);
        log_sigma[1..].copy_from_slice(x.as_slice());
    }
    let consistency = edges
        .iter()
        .zip(&increments)
        .map(|(&(i, j, _), d)| (log_sigma[j] - log_sigma[i] - d).abs())
        .fold(0.0, f64::max);

    let sigma: Vec<f64> = log_sigma.iter().map(|x| x.exp()).collect();
    let mut phi = Vec::with_capacity(n);
    let mut field = Vec::with_capacity(n);
    let mut nu = Vec::with_capacity(n);
    for (v, s) in separations.iter().zip(&sigma) {
        let ff = v * *s;
        phi.push(0.5 * s * v.norm_squared());
        nu.push(1.0 / ff.norm_squared());
        field.push(ff);
    }
    Ok(RibaucourData {
        phi,
        field,
        nu,
        sigma,
        consistency,
    })
}

/// Eigenvalue structure of the Codazzi tensor `S` with `d𝓕 = df ∘ S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterClass {
    /// Exactly two distinct eigenvalues at every sample.
    TwoClusters,
    /// A single eigenvalue: the pair differs by an inversion.
    SingleCluster,
    /// Gaps too small compared to the differentiation error, or mixed.
    Indeterminate,
}

#[derive(Clone, Debug)]
pub struct DarbouxCheck {
    /// Relative defect of `(λ + μ)φ = <𝓕, 𝓕>`.
    pub report: CheckReport,
    /// Largest ratio of the clustering threshold to the gap between clusters.
    pub separation: CheckReport,
    pub classification: ClusterClass,
    /// Cluster means `(λ, μ)` per sample; equal for a single cluster.
    pub eigenvalues: Vec<(f64, f64)>,
}

/// Floor on the relative error attributed to differentiating `𝓕`.
const DIFFERENTIATION_FLOOR: f64 = 1e-8;
/// Cluster gaps must exceed this multiple of the error estimate.
const GAP_FACTOR: f64 = 10.0;
/// Beyond this, `d𝓕` is not of the form `df ∘ S` with `S` symmetric.
const MAX_STRUCTURE_ERROR: f64 = 1e-4;

struct PointStructure {
    class: ClusterClass,
    lambda: f64,
    mu: f64,
    gap_ratio: f64,
}

fn classify(eigs: &mut [f64], err: f64) -> PointStructure {
    eigs.sort_by(f64::total_cmp);
    let n = eigs.len();
    if !(err <= MAX_STRUCTURE_ERROR) {
        return PointStructure {
            class: ClusterClass::Indeterminate,
            lambda: eigs[0],
            mu: eigs[n - 1],
            gap_ratio: f64::INFINITY,
        };
    }
    let scale = eigs.iter().fold(0.0_f64, |a, e| a.max(e.abs())).max(f64::MIN_POSITIVE);
    let threshold = GAP_FACTOR * err * scale;
    let spread = eigs[n - 1] - eigs[0];
    if spread <= threshold {
        let mean = eigs.iter().sum::<f64>() / n as f64;
        return PointStructure {
            class: ClusterClass::SingleCluster,
            lambda: mean,
            mu: mean,
            gap_ratio: f64::INFINITY,
        };
    }
    let (k, gap) = (0..n - 1)
        .map(|i| (i, eigs[i + 1] - eigs[i]))
        .fold((0, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
    let within = (eigs[k] - eigs[0]).max(eigs[n - 1] - eigs[k + 1]);
    let lambda = eigs[..=k].iter().sum::<f64>() / (k + 1) as f64;
    let mu = eigs[k + 1..].iter().sum::<f64>() / (n - k - 1) as f64;
    let class = if within <= threshold && gap > threshold {
        ClusterClass::TwoClusters
    } else {
        ClusterClass::Indeterminate
    };
    PointStructure {
        class,
        lambda,
        mu,
        gap_ratio: threshold / gap,
    }
}

/// Forms `S` from `d𝓕 = σ(ω v + df − df̃)` (with `v = f − f̃`) projected on
/// the tangent space of `f`, clusters its eigenvalues and tests
/// `(λ + μ)φ = <𝓕, 𝓕>`.
pub fn check_darboux_condition(
    f: &(impl ParamImmersion + ?Sized),
    f_tilde: &(impl ParamImmersion + ?Sized),
    data: &RibaucourData,
    grid: &Grid,
    tol: f64,
) -> Result<DarbouxCheck> {
    let points = grid.points();
    if data.phi.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: data.phi.len(),
        });
    }
    let per_point: Vec<(PointStructure, f64)> = points
        .par_iter()
        .enumerate()
        .map(|(idx, u)| {
            let a = jet_eval_default(f, u)?;
            let b = jet_eval_default(f_tilde, u)?;
            let v = separation(&a, &b)?;
            let omega = log_rate(&a, &b)?;
            let sigma = data.sigma[idx];
            let mut d_field = (&a.first - &b.first) * sigma;
            for k in 0..d_field.ncols() {
                let col = d_field.column(k) + &v * (sigma * omega[k]);
                d_field.set_column(k, &col);
            }
            let g = a.first.transpose() * &a.first;
            let chol = g.clone().cholesky().ok_or(Error::RankDeficient)?;
            let s = chol.solve(&(a.first.transpose() * &d_field));
            let normal_defect = (&d_field - &a.first * &s).norm() / d_field.norm().max(f64::MIN_POSITIVE);
            let frame = orthonormal_frame(&g)?;
            let inv = frame.clone().try_inverse().ok_or(Error::RankDeficient)?;
            let s_hat = inv * &s * &frame;
            let asym = (&s_hat - s_hat.transpose()).norm() / s_hat.norm().max(f64::MIN_POSITIVE);
            let sym = (&s_hat + s_hat.transpose()) * 0.5;
            let mut eigs: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
            let err = normal_defect.max(asym).max(DIFFERENTIATION_FLOOR);
            let structure = classify(&mut eigs, err);
            let ff = data.field[idx].norm_squared();
            let residual = ((structure.lambda + structure.mu) * data.phi[idx] - ff).abs() / ff;
            Ok((structure, residual))
        })
        .collect::<Result<_>>()?;

    let classes: Vec<ClusterClass> = per_point.iter().map(|(p, _)| p.class).collect();
    let classification = if classes.iter().all(|c| *c == ClusterClass::TwoClusters) {
        ClusterClass::TwoClusters
    } else if classes.iter().all(|c| *c == ClusterClass::SingleCluster) {
        ClusterClass::SingleCluster
    } else {
        ClusterClass::Indeterminate
    };
    if classification == ClusterClass::Indeterminate {
        let bad = classes.iter().filter(|c| **c != ClusterClass::TwoClusters).count();
        return Err(Error::NotTwoClusters(format!(
            "{bad} of {} samples lack a clean two-cluster split",
            classes.len()
        )));
    }
    let samples = per_point.len();
    let report = if classification == ClusterClass::TwoClusters {
        let worst = per_point.iter().map(|(_, r)| *r).fold(0.0, f64::max);
        CheckReport::new("darboux_condition", worst, tol, samples)
    } else {
        CheckReport::failed("darboux_condition", tol)
    };
    let gap_ratio = per_point.iter().map(|(p, _)| p.gap_ratio).fold(0.0, f64::max);
    Ok(DarbouxCheck {
        report,
        separation: CheckReport::new("darboux_cluster_separation", gap_ratio, 1.0, samples),
        classification,
        eigenvalues: per_point.iter().map(|(p, _)| (p.lambda, p.mu)).collect(),
    })
}
