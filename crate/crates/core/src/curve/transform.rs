use super::hermite::{CurveNode, SampledCurve};
use super::model::{half_plane_jet, SpaceForm};
use super::ode::{RibaucourState, RibaucourTrajectory};
use crate::error::{Error, Result};

/// Relative tolerance of the runtime check `<γ,γ> = A h3²`.
const GAMMA_IDENTITY_TOL: f64 = 1e-10;
const Q_MIN: f64 = 1e-14;

/// `γ = h1 φ' + h2 n + c h3 φ`.
pub fn gamma_vector(node: &CurveNode, state: &RibaucourState, c: f64) -> Vec<f64> {
    let [h1, h2, h3] = state.h;
    (0..node.position.len())
        .map(|i| h1 * node.velocity[i] + h2 * node.normal[i] + c * h3 * node.position[i])
        .collect()
}

/// Measured defects of a transformed curve.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformDefects {
    /// Largest `|<γ,γ> - A h3²| / max(1, A h3²)`.
    pub gamma_identity: f64,
    /// Largest `| |φ̃'| - 1 |` from differences of the transformed positions.
    pub speed: f64,
    /// Largest `|<φ̃,φ̃> - c|`.
    pub space_form: f64,
}

impl TransformDefects {
    pub fn measure(traj: &RibaucourTrajectory, transformed: &SampledCurve) -> Self {
        let c = traj.c().curvature();
        let gamma_identity = traj
            .states
            .iter()
            .zip(&traj.sampled.nodes)
            .map(|(st, node)| {
                let g = gamma_vector(node, st, c);
                let q = traj.c().dot(&g, &g);
                let expect = st.a * st.h[2] * st.h[2];
                (q - expect).abs() / expect.max(1.0)
            })
            .fold(0.0, f64::max);
        Self {
            gamma_identity,
            speed: transformed.speed_defect(),
            space_form: transformed.space_form_defect(),
        }
    }
}

/// Ribaucour transform `φ̃ = φ - 2 h3 γ / <γ,γ>` sampled at the trajectory
/// nodes, with closed-form first and second derivatives.
pub fn ribaucour_curve_transform(traj: &RibaucourTrajectory) -> Result<SampledCurve> {
    if traj.is_trivial() {
        return Err(Error::Degenerate("zero Ribaucour data gives no transform".into()));
    }
    let form = traj.c();
    let c = form.curvature();
    let a = traj.a;
    let mut nodes = Vec::with_capacity(traj.states.len());
    for (st, node) in traj.states.iter().zip(&traj.sampled.nodes) {
        let [h1, h2, h3] = st.h;
        let k = node.curvature;
        let dh1 = k * h2 + (a - c) * h3;
        let g = gamma_vector(node, st, c);
        let q = form.dot(&g, &g);
        if !(q.abs() >= Q_MIN) {
            return Err(Error::Degenerate(format!("<γ,γ> = {q:e} at s = {}", st.s)));
        }
        let expect = a * h3 * h3;
        if (q - expect).abs() > GAMMA_IDENTITY_TOL * expect.max(1.0) {
            return Err(Error::Degenerate(format!(
                "<γ,γ> = {q} differs from A h3² = {expect} at s = {}",
                st.s
            )));
        }
        let (p, v, acc) = (&node.position, &node.velocity, &node.acceleration);
        let q2 = q * q;
        let q3 = q2 * q;
        let h3s = h3 * h3;
        let d = p.len();
        let mut position = vec![0.0; d];
        let mut velocity = vec![0.0; d];
        let mut acceleration = vec![0.0; d];
        for i in 0..d {
            position[i] = p[i] - 2.0 * h3 * g[i] / q;
            let bracket = h1 * g[i] / q + a * h3s * v[i] / q - 2.0 * a * h3s * h1 * g[i] / q2;
            velocity[i] = v[i] - 2.0 * bracket;
            let t1 = dh1 * g[i] / q + a * h1 * h3 * v[i] / q - 2.0 * a * h1 * h1 * h3 * g[i] / q2;
            let t2 = 2.0 * a * h1 * h3 * v[i] / q + a * h3s * acc[i] / q - 2.0 * a * a * h3s * h3 * h1 * v[i] / q2;
            let t3 = 2.0 * a * (2.0 * h1 * h1 * h3 * g[i] + h3s * dh1 * g[i] + a * h3s * h3 * h1 * v[i]) / q2
                - 8.0 * a * a * h3s * h3 * h1 * h1 * g[i] / q3;
            acceleration[i] = acc[i] - 2.0 * (t1 + t2 - t3);
        }
        if form == SpaceForm::Hyperbolic && position[2] <= 0.0 {
            return Err(Error::Degenerate(format!("transform leaves the upper sheet at s = {}", st.s)));
        }
        let mut normal = form.oriented_normal(&position, &velocity);
        let len = form.dot(&normal, &normal).sqrt();
        normal.iter_mut().for_each(|x| *x /= len);
        let curvature = form.dot(&acceleration, &normal);
        nodes.push(CurveNode {
            s: st.s,
            position,
            velocity,
            acceleration,
            normal,
            curvature,
        });
    }
    SampledCurve::new(form, nodes)
}

/// Half-plane picture of a hyperboloid curve. The returned samples carry
/// Euclidean normals and curvatures of the planar image.
pub fn to_half_plane(curve: &SampledCurve) -> Result<SampledCurve> {
    if curve.c != SpaceForm::Hyperbolic {
        return Err(Error::InvalidInput("only hyperboloid curves map to the half-plane".into()));
    }
    let nodes = curve
        .nodes
        .iter()
        .map(|n| {
            let [p, v, acc] = half_plane_jet(&n.position, &n.velocity, &n.acceleration)?;
            let speed = (v[0] * v[0] + v[1] * v[1]).sqrt();
            let normal = vec![-v[1] / speed, v[0] / speed];
            let curvature = (v[0] * acc[1] - v[1] * acc[0]) / speed.powi(3);
            Ok(CurveNode {
                s: n.s,
                position: p.to_vec(),
                velocity: v.to_vec(),
                acceleration: acc.to_vec(),
                normal,
                curvature,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SampledCurve::new(SpaceForm::Flat, nodes)
}
