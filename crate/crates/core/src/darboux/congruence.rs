use crate::curve::CircleInQc;
use crate::darboux::Family;
use crate::error::{Error, Result};
use crate::lorentz::{Orientation, SphereElement};

const GREAT_CIRCLE_TOL: f64 = 1e-12;

fn pad(center: &[f64], ambient: usize) -> Vec<f64> {
    let mut c = center.to_vec();
    c.resize(ambient, 0.0);
    c
}

/// Hypersphere of `R^{n+1}` meeting the 2-dimensional model of the family
/// orthogonally along `circle`: the plane `R² × 0` for cylinders, the unit
/// sphere `S² ⊂ R³ × 0` for cones and the half-plane `{(x, y, 0, …)}` for
/// rotation hypersurfaces.
pub fn lift_congruence(family: Family, circle: &CircleInQc, n: usize) -> Result<SphereElement> {
    let ambient = n + 1;
    match (family, circle) {
        (Family::Cylinder, CircleInQc::Plane { center, radius }) => {
            SphereElement::new(pad(center, ambient), *radius, Orientation::Positive)
        }
        (Family::ConeCylinder, CircleInQc::Sphere { normal, offset }) => {
            if offset.abs() < GREAT_CIRCLE_TOL {
                return Err(Error::HyperplaneElement(*offset));
            }
            if offset.abs() >= 1.0 {
                return Err(Error::Degenerate(format!("plane at offset {offset} misses the sphere")));
            }
            let center: Vec<f64> = normal.iter().map(|m| m / offset).collect();
            let radius = (1.0 / (offset * offset) - 1.0).sqrt();
            SphereElement::new(pad(&center, ambient), radius, Orientation::Positive)
        }
        (
            Family::Rotation,
            CircleInQc::Hyperbolic {
                half_plane_center,
                half_plane_radius,
                ..
            },
        ) => SphereElement::new(pad(half_plane_center, ambient), *half_plane_radius, Orientation::Positive),
        (family, circle) => Err(Error::InvalidInput(format!(
            "{} hypersurfaces cannot lift a circle of kind {circle:?}",
            family.name()
        ))),
    }
}

/// Orthonormal pair spanning the plane orthogonal to a unit vector of R³.
fn complement(m: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let seed = if m[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = seed[0] * m[0] + seed[1] * m[1] + seed[2] * m[2];
    let u: Vec<f64> = (0..3).map(|i| seed[i] - d * m[i]).collect();
    let l = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    let u = [u[0] / l, u[1] / l, u[2] / l];
    let v = crate::curve::cross(m, &u);
    (u, v)
}

/// Largest violation, along `samples` points of the circle, of membership in
/// the sphere and of orthogonality between the sphere and the 2-dimensional
/// model.
pub fn lift_orthogonality_residual(circle: &CircleInQc, sphere: &SphereElement, samples: usize) -> Result<f64> {
    let ambient = sphere.dim();
    if ambient < 3 {
        return Err(Error::InvalidInput("sphere must live in at least R³".into()));
    }
    let mut worst = 0.0_f64;
    for i in 0..samples.max(1) {
        let t = std::f64::consts::TAU * i as f64 / samples.max(1) as f64;
        let (ct, st) = (t.cos(), t.sin());
        // point on the circle and unit normal of the model at that point
        let (point, model_normal): (Vec<f64>, Option<Vec<f64>>) = match circle {
            CircleInQc::Plane { center, radius }
            | CircleInQc::Hyperbolic {
                half_plane_center: center,
                half_plane_radius: radius,
                ..
            } => (vec![center[0] + radius * ct, center[1] + radius * st], None),
            CircleInQc::Sphere { normal, offset } => {
                let (u, v) = complement(normal);
                let r = (1.0 - offset * offset).max(0.0).sqrt();
                let p: Vec<f64> = (0..3).map(|k| offset * normal[k] + r * (ct * u[k] + st * v[k])).collect();
                (p.clone(), Some(p))
            }
        };
        let point = pad(&point, ambient);
        let d: Vec<f64> = point.iter().zip(&sphere.center).map(|(p, c)| (p - c) / sphere.radius).collect();
        let membership = (d.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs();
        let leaving: f64 = d[3.min(ambient)..].iter().map(|x| x * x).sum::<f64>();
        let off_model = match &model_normal {
            // the sphere normal must be tangent to S² inside R³
            Some(nrm) => (nrm.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>().powi(2) + leaving).sqrt(),
            // the sphere normal must lie in the plane of the first two axes
            None => (leaving + d[2] * d[2]).sqrt(),
        };
        worst = worst.max(membership + off_model);
    }
    Ok(worst)
}
