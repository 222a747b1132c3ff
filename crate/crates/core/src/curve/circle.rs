use serde::{Deserialize, Serialize};

use super::hermite::SampledCurve;
use super::model::{cross, half_plane_jet, SpaceForm};
use crate::error::{Error, Result};

/// Circle of a space form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum CircleInQc {
    /// Euclidean circle in the plane.
    Plane { center: [f64; 2], radius: f64 },
    /// `S² ∩ {x : <m, x> = offset}` with `|m| = 1`.
    Sphere { normal: [f64; 3], offset: f64 },
    /// `H² ∩ {x : <m, x>_L = offset}`, together with the Euclidean circle it
    /// becomes in the upper half-plane.
    Hyperbolic {
        normal: [f64; 3],
        offset: f64,
        half_plane_center: [f64; 2],
        half_plane_radius: f64,
    },
}

/// Circle through `φ(s)` and `φ̃(s)` tangent to `φ` there, with the measured
/// failure of tangency to `φ̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopedCircle {
    pub circle: CircleInQc,
    pub tangency_residual: f64,
}

const SEPARATION_MIN: f64 = 1e-12;
const SINGULAR_TOL: f64 = 1e-12;

/// Planar circle through `p` tangent to `v`, passing through `q`; returns
/// the center, radius and the tangency residual at `q` against `w`.
fn planar_circle(p: &[f64], v: &[f64], q: &[f64], w: &[f64]) -> Result<([f64; 2], f64, f64)> {
    let d = [q[0] - p[0], q[1] - p[1]];
    let dd = d[0] * d[0] + d[1] * d[1];
    if dd.sqrt() < SEPARATION_MIN {
        return Err(Error::Degenerate("points coincide".into()));
    }
    let speed = (v[0] * v[0] + v[1] * v[1]).sqrt();
    let nu = [-v[1] / speed, v[0] / speed];
    let dn = d[0] * nu[0] + d[1] * nu[1];
    if dn.abs() < SINGULAR_TOL * dd.sqrt() {
        return Err(Error::Degenerate("tangency system is singular: the circle is a line".into()));
    }
    let rho = dd / (2.0 * dn);
    let center = [p[0] + rho * nu[0], p[1] + rho * nu[1]];
    let radius = rho.abs();
    let wl = (w[0] * w[0] + w[1] * w[1]).sqrt();
    let residual = ((q[0] - center[0]) * w[0] + (q[1] - center[1]) * w[1]).abs() / (radius * wl);
    Ok((center, radius, residual))
}

/// The circle of the space form touching `curve` at `s` and passing through
/// `transformed(s)`; the Ribaucour property makes it touch `transformed`
/// there as well, which is what `tangency_residual` measures.
pub fn enveloped_circle(curve: &SampledCurve, transformed: &SampledCurve, s: f64) -> Result<EnvelopedCircle> {
    if curve.c != transformed.c {
        return Err(Error::InvalidInput("curves live in different space forms".into()));
    }
    let a = curve.eval(s)?;
    let b = transformed.eval(s)?;
    let form = curve.c;
    match form {
        SpaceForm::Flat => {
            let (center, radius, tangency_residual) = planar_circle(&a.position, &a.velocity, &b.position, &b.velocity)?;
            Ok(EnvelopedCircle {
                circle: CircleInQc::Plane { center, radius },
                tangency_residual,
            })
        }
        SpaceForm::Spherical | SpaceForm::Hyperbolic => {
            let d: Vec<f64> = b.position.iter().zip(&a.position).map(|(x, y)| x - y).collect();
            if d.iter().map(|x| x * x).sum::<f64>().sqrt() < SEPARATION_MIN {
                return Err(Error::Degenerate("points coincide".into()));
            }
            let mut m = cross(&a.velocity, &d);
            if form == SpaceForm::Hyperbolic {
                m[2] = -m[2];
            }
            let len = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
            let dl = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len < SINGULAR_TOL * dl {
                return Err(Error::Degenerate("tangency system is singular".into()));
            }
            m.iter_mut().for_each(|x| *x /= len);
            let offset = form.dot(&m, &a.position);
            let wl = form.dot(&b.velocity, &b.velocity).abs().sqrt();
            let mut tangency_residual = form.dot(&m, &b.velocity).abs() / wl;
            let circle = if form == SpaceForm::Spherical {
                CircleInQc::Sphere { normal: m, offset }
            } else {
                let [pa, va, _] = half_plane_jet(&a.position, &a.velocity, &a.acceleration)?;
                let [pb, vb, _] = half_plane_jet(&b.position, &b.velocity, &b.acceleration)?;
                let (center, radius, res) = planar_circle(&pa, &va, &pb, &vb)?;
                tangency_residual = tangency_residual.max(res);
                CircleInQc::Hyperbolic {
                    normal: m,
                    offset,
                    half_plane_center: center,
                    half_plane_radius: radius,
                }
            };
            Ok(EnvelopedCircle {
                circle,
                tangency_residual,
            })
        }
    }
}
