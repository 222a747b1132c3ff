use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypersurface::surfaces::InvertedSurface;
use crate::hypersurface::{jet_eval_default, unit_normal, InversionSpec, ParamImmersion};
use crate::lorentz::{Orientation, SphereElement};
use crate::verifier::{Grid, SphereCongruence};

/// Best least-squares fit `target ≈ σ Q M(source) + b`, where `M` is the
/// identity or a unit inversion, `Q` orthogonal and `σ > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct MobiusFit {
    /// RMS misfit relative to the RMS spread of the target.
    pub residual: f64,
    /// Center of the inversion, `None` when a similarity fits best.
    pub inversion_center: Option<DVector<f64>>,
    pub scale: f64,
}

struct Similarity {
    sse: f64,
    scale: f64,
}

/// Closed-form orthogonal Procrustes with scaling (reflections allowed).
fn fit_similarity(x: &[DVector<f64>], y: &[DVector<f64>]) -> Similarity {
    let m = x.len() as f64;
    let dim = x[0].len();
    let mx = x.iter().fold(DVector::zeros(dim), |a, v| a + v) / m;
    let my = y.iter().fold(DVector::zeros(dim), |a, v| a + v) / m;
    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - &mx, b - &my);
        cov += &db * da.transpose();
        var_x += da.norm_squared();
        var_y += db.norm_squared();
    }
    if var_x <= 0.0 {
        return Similarity { sse: var_y, scale: 0.0 };
    }
    let trace: f64 = cov.singular_values().iter().sum();
    let scale = trace / var_x;
    Similarity {
        sse: (var_y - trace * trace / var_x).max(0.0),
        scale,
    }
}

fn invert(points: &[DVector<f64>], center: &DVector<f64>) -> Option<Vec<DVector<f64>>> {
    points
        .iter()
        .map(|p| {
            let q = p - center;
            let r = q.norm_squared();
            (r > 1e-18).then(|| center + q / r)
        })
        .collect()
}

fn inversion_sse(x: &[DVector<f64>], y: &[DVector<f64>], center: &DVector<f64>) -> f64 {
    match invert(x, center) {
        Some(inv) => fit_similarity(&inv, y).sse,
        None => f64::INFINITY,
    }
}

/// Residual vector of the variable-projection problem, for Gauss–Newton.
fn inversion_residuals(x: &[DVector<f64>], y: &[DVector<f64>], center: &DVector<f64>) -> Option<DVector<f64>> {
    let inv = invert(x, center)?;
    let m = inv.len() as f64;
    let dim = inv[0].len();
    let mx = inv.iter().fold(DVector::zeros(dim), |a, v| a + v) / m;
    let my = y.iter().fold(DVector::zeros(dim), |a, v| a + v) / m;
    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    let mut var_x = 0.0;
    for (a, b) in inv.iter().zip(y) {
        let da = a - &mx;
        cov += (b - &my) * da.transpose();
        var_x += da.norm_squared();
    }
    let svd = cov.svd(true, true);
    let (u, vt) = (svd.u?, svd.v_t?);
    let rot = &u * &vt;
    let scale = svd.singular_values.sum() / var_x;
    let mut out = DVector::zeros(inv.len() * dim);
    for (i, (a, b)) in inv.iter().zip(y).enumerate() {
        let r = &rot * (a - &mx) * scale + &my - b;
        out.rows_mut(i * dim, dim).copy_from(&r);
    }
    Some(out)
}

const RANDOM_STARTS: usize = 256;
const REFINED_STARTS: usize = 6;
const MAX_ITERATIONS: usize = 200;

fn levenberg_marquardt(x: &[DVector<f64>], y: &[DVector<f64>], start: DVector<f64>, length: f64) -> (DVector<f64>, f64) {
    let dim = start.len();
    let mut p = start;
    let mut cost = inversion_sse(x, y, &p);
    let mut lambda = 1e-3;
    for _ in 0..MAX_ITERATIONS {
        let Some(r) = inversion_residuals(x, y, &p) else { break };
        let mut jac = DMatrix::<f64>::zeros(r.len(), dim);
        let h = 1e-7 * length;
        let mut ok = true;
        for k in 0..dim {
            let mut plus = p.clone();
            let mut minus = p.clone();
            plus[k] += h;
            minus[k] -= h;
            match (inversion_residuals(x, y, &plus), inversion_residuals(x, y, &minus)) {
                (Some(a), Some(b)) => jac.set_column(k, &((a - b) / (2.0 * h))),
                _ => ok = false,
            }
        }
        if !ok {
            break;
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;
        let mut improved = false;
        for _ in 0..12 {
            let mut damped = jtj.clone();
            for k in 0..dim {
                damped[(k, k)] += lambda * (jtj[(k, k)] + 1e-30);
            }
            let Some(step) = damped.lu().solve(&(-&jtr)) else { break };
            let trial = &p + &step;
            let trial_cost = inversion_sse(x, y, &trial);
            if trial_cost < cost {
                let small = step.norm() <= 1e-15 * (1.0 + p.norm());
                p = trial;
                cost = trial_cost;
                lambda = (lambda * 0.1).max(1e-12);
                improved = !small;
                break;
            }
            lambda *= 10.0;
        }
        if !improved || cost == 0.0 {
            break;
        }
    }
    (p, cost)
}

/// Fits `target` by similarities and by similarities composed with an
/// inversion (center found by multi-start Levenberg–Marquardt).
pub fn best_fit_mobius(source: &[DVector<f64>], target: &[DVector<f64>], seed: u64) -> Result<MobiusFit> {
    if source.len() != target.len() || source.len() < 3 {
        return Err(Error::InvalidInput("need at least three matched points".into()));
    }
    let dim = source[0].len();
    let m = source.len() as f64;
    let my = target.iter().fold(DVector::zeros(dim), |a, v| a + v) / m;
    let spread_y: f64 = target.iter().map(|v| (v - &my).norm_squared()).sum::<f64>();
    if spread_y <= 0.0 {
        return Err(Error::Degenerate("target points coincide".into()));
    }
    let normalise = |sse: f64| (sse / spread_y).sqrt();

    let similarity = fit_similarity(source, target);
    let mut best = MobiusFit {
        residual: normalise(similarity.sse),
        inversion_center: None,
        scale: similarity.scale,
    };

    let mx = source.iter().fold(DVector::zeros(dim), |a, v| a + v) / m;
    let length = (source.iter().map(|v| (v - &mx).norm_squared()).sum::<f64>() / m).sqrt().max(1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<(f64, DVector<f64>)> = (0..RANDOM_STARTS)
        .map(|_| {
            let radius = length * rng.gen_range(0.2..4.0);
            let dir = DVector::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
            let p = &mx + dir.normalize() * radius;
            (inversion_sse(source, target, &p), p)
        })
        .filter(|(c, _)| c.is_finite())
        .collect();
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (_, start) in starts.into_iter().take(REFINED_STARTS) {
        let (center, sse) = levenberg_marquardt(source, target, start, length);
        let residual = normalise(sse);
        if residual < best.residual {
            let inv = invert(source, &center).expect("finite cost implies invertible");
            best = MobiusFit {
                residual,
                scale: fit_similarity(&inv, target).scale,
                inversion_center: Some(center),
            };
        }
    }
    Ok(best)
}

/// Best Möbius fit of `f_tilde` against `f` over the grid points.
pub fn pair_mobius_fit(
    f: &(impl ParamImmersion + ?Sized),
    f_tilde: &(impl ParamImmersion + ?Sized),
    grid: &Grid,
    seed: u64,
) -> Result<MobiusFit> {
    let points = grid.points();
    let a = points.iter().map(|u| f.evaluate(u)).collect::<Result<Vec<_>>>()?;
    let b = points.iter().map(|u| f_tilde.evaluate(u)).collect::<Result<Vec<_>>>()?;
    best_fit_mobius(&a, &b, seed)
}

/// Trivial Blaschke pair `(f, I ∘ f)` with the congruence of spheres tangent
/// to `f` and orthogonal to the inversion sphere, hence invariant under it.
pub struct InversionControl<S> {
    pub f: S,
    pub f_tilde: InvertedSurface<S>,
}

impl<S: ParamImmersion + Clone> InversionControl<S> {
    pub fn new(f: S, inversion: InversionSpec) -> Self {
        Self {
            f_tilde: InvertedSurface {
                base: f.clone(),
                inversion,
            },
            f,
        }
    }
}

impl<S: ParamImmersion> SphereCongruence for InversionControl<S> {
    fn sphere_at(&self, u: &[f64]) -> Result<SphereElement> {
        let jet = jet_eval_default(&self.f, u)?;
        let normal = unit_normal(&jet.first)?;
        let spec = &self.f_tilde.inversion;
        let q = &jet.point - &spec.center;
        let denom = 2.0 * q.dot(&normal);
        if denom.abs() < 1e-14 {
            return Err(Error::Degenerate("tangent sphere through the inversion center is a plane".into()));
        }
        let rho = (spec.radius * spec.radius - q.norm_squared()) / denom;
        let center = &jet.point + normal * rho;
        SphereElement::new(center.iter().copied().collect(), rho.abs(), Orientation::Positive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(seed: u64, count: usize) -> Vec<DVector<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| DVector::from_fn(4, |_, _| rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn rigid_motion_with_scaling_fits_exactly() {
        let x = cloud(1, 40);
        let q = DMatrix::from_row_slice(4, 4, &[0.0, -1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
        let b = DVector::from_vec(vec![1.0, 2.0, -3.0, 0.5]);
        let y: Vec<_> = x.iter().map(|p| &q * p * 2.5 + &b).collect();
        let fit = best_fit_mobius(&x, &y, 0).unwrap();
        assert!(fit.residual < 1e-12, "{fit:?}");
        assert!((fit.scale - 2.5).abs() < 1e-12);
    }

    #[test]
    fn inversion_is_recovered() {
        let x = cloud(2, 60);
        let spec = InversionSpec::new(DVector::from_vec(vec![0.3, -2.0, 1.1, 0.4]), 1.7).unwrap();
        let y: Vec<_> = x.iter().map(|p| spec.apply(p).unwrap()).collect();
        let fit = best_fit_mobius(&x, &y, 3).unwrap();
        assert!(fit.residual < 1e-10, "{fit:?}");
        let c = fit.inversion_center.unwrap();
        assert!((c - &spec.center).norm() < 1e-6);
    }

    #[test]
    fn unrelated_clouds_do_not_fit() {
        let fit = best_fit_mobius(&cloud(4, 50), &cloud(5, 50), 0).unwrap();
        assert!(fit.residual > 0.1, "{fit:?}");
    }
}
