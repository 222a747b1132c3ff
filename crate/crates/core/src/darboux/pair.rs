use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::builders::{build_cone_cylinder, build_cylinder, build_rotation, sphere_chart, Family, ProfileSurface};
use super::congruence::lift_congruence;
use crate::curve::{
    enveloped_circle, integrate_states, project_initial_state, ribaucour_curve_transform, to_half_plane, CircleInQc,
    CurveQc, SampledCurve,
};
use crate::error::{Error, Result};
use crate::hypersurface::{fundamental_forms, jet_eval_default, ParamImmersion};
use crate::lorentz::{Orientation, SphereElement};
use crate::verifier::{verify_pair, CheckReport, Grid, SphereCongruence, Tolerances};

/// Everything a pair is generated from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    pub family: Family,
    pub n: usize,
    pub curve_spec: String,
    pub curve: CurveQc,
    #[serde(rename = "A")]
    pub a: f64,
    pub h0: [f64; 3],
    pub s_range: (f64, f64),
    pub step: f64,
}

impl PairParams {
    /// Parses `curve_spec` in the space form of the family.
    pub fn new(
        family: Family,
        curve_spec: &str,
        a: f64,
        h0: [f64; 3],
        n: usize,
        s_range: (f64, f64),
        step: f64,
    ) -> Result<Self> {
        Ok(Self {
            family,
            n,
            curve_spec: curve_spec.to_string(),
            curve: CurveQc::parse(curve_spec, family.space_form())?,
            a,
            h0,
            s_range,
            step,
        })
    }
}

/// Two hypersurfaces of one family over a curve and its Ribaucour
/// transform, with the sphere congruence they both envelop.
#[derive(Clone, Debug)]
pub struct DarbouxPair {
    pub params: PairParams,
    /// The curve and its transform in the model of the space form.
    pub model_curve: SampledCurve,
    pub model_transformed: SampledCurve,
    pub f: ProfileSurface,
    pub f_tilde: ProfileSurface,
    /// Congruence sphere at each curve node, for zero flat coordinates,
    /// unit cone radius and `ω = e_1`. A sphere is positively oriented when
    /// its center lies on the side of the profile normal.
    pub base_spheres: Vec<SphereElement>,
    /// Orientations of `f` and `f̃` whose normals agree with the oriented
    /// spheres, so that `f + R N = f̃ + R Ñ` with signed radius `R`.
    pub orientations: [Orientation; 2],
}

fn profile_for(family: Family, model: &SampledCurve) -> Result<SampledCurve> {
    match family {
        Family::Rotation => to_half_plane(model),
        _ => Ok(model.clone()),
    }
}

fn build(family: Family, profile: &SampledCurve, n: usize) -> Result<ProfileSurface> {
    match family {
        Family::Cylinder => build_cylinder(profile, n),
        Family::ConeCylinder => build_cone_cylinder(profile, n),
        Family::Rotation => build_rotation(profile, n),
    }
}

impl DarbouxPair {
    /// Assembles a pair from sampled curves and node spheres, as read from a
    /// pair file.
    pub fn from_parts(
        params: PairParams,
        model_curve: SampledCurve,
        model_transformed: SampledCurve,
        base_spheres: Vec<SphereElement>,
    ) -> Result<Self> {
        let family = params.family;
        if model_curve.c != family.space_form() || model_transformed.c != family.space_form() {
            return Err(Error::InvalidInput("sampled curves live in the wrong space form".into()));
        }
        if model_curve.len() != model_transformed.len() || model_curve.len() != base_spheres.len() {
            return Err(Error::InvalidInput(format!(
                "{} curve nodes, {} transformed nodes and {} spheres",
                model_curve.len(),
                model_transformed.len(),
                base_spheres.len()
            )));
        }
        if base_spheres.iter().any(|s| s.dim() != params.n + 1) {
            return Err(Error::DimensionMismatch {
                expected: params.n + 1,
                found: base_spheres[0].dim(),
            });
        }
        let f = build(family, &profile_for(family, &model_curve)?, params.n)?;
        let f_tilde = build(family, &profile_for(family, &model_transformed)?, params.n)?;
        let mut base_spheres = base_spheres;
        for (sphere, node) in base_spheres.iter_mut().zip(&f.profile.nodes) {
            sphere.orientation = profile_side(family, &node.position, &node.velocity, &sphere.center);
        }
        let mut pair = Self {
            params,
            model_curve,
            model_transformed,
            f,
            f_tilde,
            base_spheres,
            orientations: [Orientation::Positive; 2],
        };
        let u = pair.f.domain().center();
        let sphere = pair.sphere_at(&u)?;
        let center = DVector::from_column_slice(&sphere.center);
        for (k, surface) in [&pair.f, &pair.f_tilde].into_iter().enumerate() {
            let jet = jet_eval_default(surface, &u)?;
            let forms = fundamental_forms(&jet, Orientation::Positive)?;
            let toward = forms.normal.dot(&(&center - &jet.point)) >= 0.0;
            pair.orientations[k] = if toward == (sphere.orientation == Orientation::Positive) {
                Orientation::Positive
            } else {
                Orientation::Negative
            };
        }
        Ok(pair)
    }

    pub fn family(&self) -> Family {
        self.params.family
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    /// Circle of the space form enveloped by both curves at `s`.
    pub fn circle_at(&self, s: f64) -> Result<CircleInQc> {
        Ok(enveloped_circle(&self.model_curve, &self.model_transformed, s)?.circle)
    }

    fn base_sphere(&self, s: f64) -> Result<SphereElement> {
        match self.model_curve.node_index(s) {
            Some(i) => Ok(self.base_spheres[i].clone()),
            None => {
                let mut sphere = lift_congruence(self.family(), &self.circle_at(s)?, self.n())?;
                let p = self.f.profile.eval(s)?;
                sphere.orientation = profile_side(self.family(), &p.position, &p.velocity, &sphere.center);
                Ok(sphere)
            }
        }
    }

    /// Metric ratio `e^{2φ} = g̃/g` at arclength `s`.
    pub fn conformal_factor(&self, s: f64) -> Result<f64> {
        match self.family() {
            Family::Cylinder | Family::ConeCylinder => Ok(1.0),
            Family::Rotation => {
                let y = self.f.profile.eval(s)?.position[1];
                let yt = self.f_tilde.profile.eval(s)?.position[1];
                Ok((yt / y).powi(2))
            }
        }
    }

    /// Node-aligned samples along the curve, three values on each other axis.
    pub fn default_grid(&self) -> Result<Grid> {
        let nodes = &self.model_curve.nodes;
        let last = nodes.len() - 1;
        let (lo, hi) = (last / 10, last - last / 10);
        let count = 9.min(hi - lo + 1);
        let mut s_axis: Vec<f64> = (0..count)
            .map(|j| {
                let i = if count == 1 { (lo + hi) / 2 } else { lo + (hi - lo) * j / (count - 1) };
                nodes[i].s
            })
            .collect();
        s_axis.dedup();
        let mut axes = vec![s_axis];
        let n = self.n();
        match self.family() {
            Family::Cylinder => axes.extend((1..n).map(|_| vec![-0.5, 0.0, 0.5])),
            Family::ConeCylinder => {
                axes.push(vec![0.7, 1.0, 1.3]);
                axes.extend((2..n).map(|_| vec![-0.5, 0.0, 0.5]));
            }
            Family::Rotation => axes.extend((1..n).map(|_| vec![0.9, 1.5, 2.1])),
        }
        Grid::new(axes)
    }

    /// `max |R − 2/trace(A|Δ⊥)|` over both members (signed radius), where `Δ` is an
    /// `(n−2)`-dimensional part of the eigenspace of the repeated principal
    /// curvature and `Δ⊥` holds the simple one.
    pub fn radius_trace_check(&self, grid: &Grid, tol: f64) -> Result<CheckReport> {
        let mut worst = 0.0_f64;
        for u in grid.points() {
            let sphere = self.sphere_at(&u)?;
            let radius = sphere.orientation.sign() * sphere.radius;
            for (surface, orientation) in [(&self.f, self.orientations[0]), (&self.f_tilde, self.orientations[1])] {
                let forms = fundamental_forms(&jet_eval_default(surface, &u)?, orientation)?;
                let k = &forms.principal_curvatures;
                let n = k.len();
                // repeated cluster is either the lowest or the highest n-1
                let (simple, repeated) = if k[n - 1] - k[1] <= k[n - 2] - k[0] {
                    (k[0], k[n - 1])
                } else {
                    (k[n - 1], k[0])
                };
                let trace = simple + repeated;
                worst = worst.max((radius - 2.0 / trace).abs());
            }
        }
        Ok(CheckReport::new("radius_trace", worst, tol, grid.len()))
    }
}

impl SphereCongruence for DarbouxPair {
    fn sphere_at(&self, u: &[f64]) -> Result<SphereElement> {
        let n = self.n();
        crate::error::check_dim(n, u.len())?;
        let base = self.base_sphere(u[0])?;
        let mut center = base.center.clone();
        let mut radius = base.radius;
        match self.family() {
            Family::Cylinder => {
                for j in 1..n {
                    center[j + 1] += u[j];
                }
            }
            Family::ConeCylinder => {
                let r = u[1];
                for c in center.iter_mut().take(3) {
                    *c *= r;
                }
                radius *= r;
                for j in 2..n {
                    center[j + 1] += u[j];
                }
            }
            Family::Rotation => {
                let omega = sphere_chart(&u[1..]).point;
                let b = base.center[1];
                for i in 0..n {
                    center[i + 1] = b * omega[i];
                }
            }
        }
        SphereElement::new(center, radius, base.orientation)
    }
}

/// Side of the profile curve on which a sphere center lies, relative to the
/// profile normal: `J φ'` in the plane and half-plane, `γ × γ'` on `S²`.
fn profile_side(family: Family, position: &[f64], velocity: &[f64], center: &[f64]) -> Orientation {
    let side = match family {
        Family::ConeCylinder => {
            let nu = crate::curve::cross(position, velocity);
            (0..3).map(|i| nu[i] * (center[i] - position[i])).sum::<f64>()
        }
        _ => -velocity[1] * (center[0] - position[0]) + velocity[0] * (center[1] - position[1]),
    };
    Orientation::from_sign(side)
}

/// Integrates the Ribaucour data along the curve, transforms it, lifts the
/// pair of curves to hypersurfaces of the family and certifies the result.
pub fn darboux_partner(params: &PairParams) -> Result<DarbouxPair> {
    let pair = darboux_partner_unchecked(params)?;
    let grid = pair.default_grid()?;
    let report = verify_pair(&pair, &grid, &Tolerances::default());
    if !report.pass {
        let detail: Vec<String> = report
            .failing()
            .map(|c| format!("{} residual {:e} > {:e}", c.name, c.max_residual, c.tolerance))
            .collect();
        return Err(Error::VerificationFailed(detail.join("; ")));
    }
    Ok(pair)
}

/// [`darboux_partner`] without the final certification.
pub fn darboux_partner_unchecked(params: &PairParams) -> Result<DarbouxPair> {
    if params.curve.c != params.family.space_form() {
        return Err(Error::InvalidInput(format!(
            "{} hypersurfaces need a curve in the space form of curvature {}",
            params.family.name(),
            params.family.space_form().curvature()
        )));
    }
    let c = params.curve.c.curvature();
    let h0 = project_initial_state(params.h0, params.a, c)?;
    let traj = integrate_states(&params.curve, h0, params.a, params.s_range, params.step)?;
    let transformed = ribaucour_curve_transform(&traj)?;
    let spheres = traj
        .sampled
        .nodes
        .iter()
        .map(|node| {
            let circle = enveloped_circle(&traj.sampled, &transformed, node.s)?.circle;
            lift_congruence(params.family, &circle, params.n)
        })
        .collect::<Result<Vec<_>>>()?;
    DarbouxPair::from_parts(params.clone(), traj.sampled, transformed, spheres)
}
