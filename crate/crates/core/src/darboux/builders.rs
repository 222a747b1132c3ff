use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::curve::{SampledCurve, SpaceForm};
use crate::error::{check_dim, Error, Result};
use crate::hypersurface::{ImmersionJet, ParamDomain, ParamImmersion};

/// The three families of hypersurfaces built over a curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `(φ(s), t) ∈ R² × R^{n-1}` over a plane curve.
    Cylinder,
    /// `(r γ(s), t) ∈ R³ × R^{n-2}` over a spherical curve.
    ConeCylinder,
    /// `(γ1(s), γ2(s) ω)` with `ω ∈ S^{n-1}`, over a half-plane curve.
    Rotation,
}

impl Family {
    /// Ambient curvature of the curve the family is built from.
    pub fn space_form(self) -> SpaceForm {
        match self {
            Family::Cylinder => SpaceForm::Flat,
            Family::ConeCylinder => SpaceForm::Spherical,
            Family::Rotation => SpaceForm::Hyperbolic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cylinder => "cylinder",
            Family::ConeCylinder => "cone-cylinder",
            Family::Rotation => "rotation",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "cylinder" => Ok(Family::Cylinder),
            "cone-cylinder" | "cone" => Ok(Family::ConeCylinder),
            "rotation" => Ok(Family::Rotation),
            other => Err(Error::InvalidInput(format!("unknown family '{other}'"))),
        }
    }
}

const FLAT_HALF_WIDTH: f64 = 1.0;
const CONE_RADIAL: (f64, f64) = (0.5, 1.5);
const ANGLE_RANGE: (f64, f64) = (0.4, std::f64::consts::PI - 0.4);

/// Hypersurface of one of the three families over a sampled profile curve.
/// For [`Family::Rotation`] the profile is the half-plane image.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileSurface {
    pub family: Family,
    pub n: usize,
    pub profile: SampledCurve,
}

fn check_family_dim(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("hypersurface dimension must be at least 3, got {n}")));
    }
    Ok(())
}

/// Cylinder `(φ(s), t_1, …, t_{n-1})` over a plane curve.
pub fn build_cylinder(curve: &SampledCurve, n: usize) -> Result<ProfileSurface> {
    check_family_dim(n)?;
    if curve.c != SpaceForm::Flat {
        return Err(Error::InvalidInput("cylinders are built over plane curves".into()));
    }
    Ok(ProfileSurface {
        family: Family::Cylinder,
        n,
        profile: curve.clone(),
    })
}

/// Cone over a spherical curve times a flat factor:
/// `(r γ(s), t_1, …, t_{n-2})` with `r > 0`.
pub fn build_cone_cylinder(curve: &SampledCurve, n: usize) -> Result<ProfileSurface> {
    check_family_dim(n)?;
    if curve.c != SpaceForm::Spherical {
        return Err(Error::InvalidInput("cones are built over curves in the unit sphere".into()));
    }
    Ok(ProfileSurface {
        family: Family::ConeCylinder,
        n,
        profile: curve.clone(),
    })
}

/// Rotation hypersurface `(γ1(s), γ2(s) ω)` over a curve of the upper
/// half-plane (given in half-plane coordinates).
pub fn build_rotation(half_plane_curve: &SampledCurve, n: usize) -> Result<ProfileSurface> {
    check_family_dim(n)?;
    if half_plane_curve.c != SpaceForm::Flat {
        return Err(Error::InvalidInput("rotation profiles are given in half-plane coordinates".into()));
    }
    if let Some(bad) = half_plane_curve.nodes.iter().find(|p| !(p.position[1] > 0.0)) {
        return Err(Error::InvalidInput(format!("profile leaves the upper half-plane at s = {}", bad.s)));
    }
    Ok(ProfileSurface {
        family: Family::Rotation,
        n,
        profile: half_plane_curve.clone(),
    })
}

/// Point of `S^{m}` in hyperspherical angles with first and second
/// derivatives (`m` angles).
pub(crate) struct SphereChart {
    pub point: Vec<f64>,
    pub first: Vec<Vec<f64>>,
    pub second: Vec<Vec<Vec<f64>>>,
}

pub(crate) fn sphere_chart(angles: &[f64]) -> SphereChart {
    let m = angles.len();
    let dim = m + 1;
    // factor (j, order) of component i: sin or cos of angle j, differentiated `order` times
    let factor = |i: usize, j: usize, order: usize| -> f64 {
        let (s, c) = angles[j].sin_cos();
        let base = if i == m || j < i {
            0 // sin
        } else if j == i {
            1 // cos
        } else {
            return if order == 0 { 1.0 } else { 0.0 };
        };
        // derivatives of sin: sin, cos, -sin ; of cos: cos, -sin, -cos
        match (base, order) {
            (0, 0) => s,
            (0, 1) => c,
            (0, _) => -s,
            (_, 0) => c,
            (_, 1) => -s,
            _ => -c,
        }
    };
    let product = |i: usize, orders: &[usize]| -> f64 { (0..m).map(|j| factor(i, j, orders[j])).product() };
    let mut point = vec![0.0; dim];
    let mut first = vec![vec![0.0; dim]; m];
    let mut second = vec![vec![vec![0.0; dim]; m]; m];
    for i in 0..dim {
        let mut orders = vec![0; m];
        point[i] = product(i, &orders);
        for a in 0..m {
            orders[a] = 1;
            first[a][i] = product(i, &orders);
            for b in 0..m {
                orders[b] += 1;
                second[a][b][i] = product(i, &orders);
                orders[b] -= 1;
            }
            orders[a] = 0;
        }
    }
    SphereChart { point, first, second }
}

impl ProfileSurface {
    fn flat_count(&self) -> usize {
        match self.family {
            Family::Cylinder => self.n - 1,
            Family::ConeCylinder => self.n - 2,
            Family::Rotation => 0,
        }
    }

    fn jet_inner(&self, u: &[f64]) -> Result<ImmersionJet> {
        check_dim(self.n, u.len())?;
        let n = self.n;
        let m = n + 1;
        let p = self.profile.eval(u[0])?;
        let mut point = DVector::zeros(m);
        let mut first = DMatrix::zeros(m, n);
        let mut second = vec![DVector::zeros(m); n * n];
        match self.family {
            Family::Cylinder => {
                for k in 0..2 {
                    point[k] = p.position[k];
                    first[(k, 0)] = p.velocity[k];
                    second[0][k] = p.acceleration[k];
                }
                for j in 1..n {
                    point[j + 1] = u[j];
                    first[(j + 1, j)] = 1.0;
                }
            }
            Family::ConeCylinder => {
                let r = u[1];
                if !(r > 0.0) {
                    return Err(Error::OutsideDomain(u.to_vec()));
                }
                for k in 0..3 {
                    point[k] = r * p.position[k];
                    first[(k, 0)] = r * p.velocity[k];
                    first[(k, 1)] = p.position[k];
                    second[0][k] = r * p.acceleration[k];
                    second[1][k] = p.velocity[k];
                    second[n][k] = p.velocity[k];
                }
                for j in 2..n {
                    point[j + 1] = u[j];
                    first[(j + 1, j)] = 1.0;
                }
            }
            Family::Rotation => {
                let (g1, g2) = (p.position[0], p.position[1]);
                let (d1, d2) = (p.velocity[0], p.velocity[1]);
                let (a1, a2) = (p.acceleration[0], p.acceleration[1]);
                let chart = sphere_chart(&u[1..]);
                point[0] = g1;
                first[(0, 0)] = d1;
                second[0][0] = a1;
                for i in 0..n {
                    point[i + 1] = g2 * chart.point[i];
                    first[(i + 1, 0)] = d2 * chart.point[i];
                    second[0][i + 1] = a2 * chart.point[i];
                    for a in 0..n - 1 {
                        first[(i + 1, a + 1)] = g2 * chart.first[a][i];
                        second[a + 1][i + 1] = d2 * chart.first[a][i];
                        second[(a + 1) * n][i + 1] = d2 * chart.first[a][i];
                        for b in 0..n - 1 {
                            second[(a + 1) * n + b + 1][i + 1] = g2 * chart.second[a][b][i];
                        }
                    }
                }
            }
        }
        ImmersionJet::new(u.to_vec(), point, first, second)
    }
}

impl ParamImmersion for ProfileSurface {
    fn domain(&self) -> ParamDomain {
        let (s0, s1) = self.profile.s_range();
        let mut lower = vec![s0];
        let mut upper = vec![s1];
        match self.family {
            Family::ConeCylinder => {
                lower.push(CONE_RADIAL.0);
                upper.push(CONE_RADIAL.1);
            }
            Family::Rotation => {
                lower.extend(std::iter::repeat_n(ANGLE_RANGE.0, self.n - 1));
                upper.extend(std::iter::repeat_n(ANGLE_RANGE.1, self.n - 1));
            }
            Family::Cylinder => {}
        }
        lower.extend(std::iter::repeat_n(-FLAT_HALF_WIDTH, self.flat_count()));
        upper.extend(std::iter::repeat_n(FLAT_HALF_WIDTH, self.flat_count()));
        ParamDomain::new(lower, upper)
    }

    fn ambient_dim(&self) -> usize {
        self.n + 1
    }

    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        Ok(self.jet_inner(u)?.point)
    }

    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        Some(self.jet_inner(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{integrate_states, to_half_plane, CurveQc};
    use crate::hypersurface::{finite_difference_jet, fundamental_forms_toward, jet_eval_default};

    fn sampled(curve: &CurveQc, range: (f64, f64)) -> SampledCurve {
        integrate_states(curve, [0.0; 3], 2.0, range, 1e-3).unwrap().sampled
    }

    #[test]
    fn sphere_chart_is_unit_with_consistent_derivatives() {
        let angles = [0.7, 1.9, -0.4];
        let c = sphere_chart(&angles);
        assert!((c.point.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-15);
        let h = 1e-5;
        for a in 0..3 {
            let mut up = angles;
            let mut dn = angles;
            up[a] += h;
            dn[a] -= h;
            let (p, m) = (sphere_chart(&up), sphere_chart(&dn));
            for i in 0..4 {
                assert!(((p.point[i] - m.point[i]) / (2.0 * h) - c.first[a][i]).abs() < 1e-9);
                for b in 0..3 {
                    assert!(((p.first[b][i] - m.first[b][i]) / (2.0 * h) - c.second[a][b][i]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn circle_cylinder_curvatures() {
        let s = build_cylinder(&sampled(&CurveQc::circle(1.0).unwrap(), (0.0, 1.0)), 3).unwrap();
        let u = [0.5, 0.1, -0.2];
        let jet = jet_eval_default(&s, &u).unwrap();
        let inward = -DVector::from_vec(vec![jet.point[0], jet.point[1], 0.0, 0.0]);
        let forms = fundamental_forms_toward(&jet, &inward).unwrap();
        let k = &forms.principal_curvatures;
        assert!(k[0].abs() < 1e-12 && k[1].abs() < 1e-12 && (k[2] - 1.0).abs() < 1e-11, "{k:?}");
    }

    #[test]
    fn ellipse_cylinder_curvature_at_vertex() {
        // the vertex is the first node, so use the exact jet at the boundary
        let s = build_cylinder(&sampled(&CurveQc::ellipse(2.0, 1.0).unwrap(), (0.0, 0.1)), 3).unwrap();
        let jet = s.analytic_jet(&[0.0, 0.0, 0.0]).unwrap().unwrap();
        let forms = fundamental_forms_toward(&jet, &DVector::from_vec(vec![-1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((forms.principal_curvatures[2] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn analytic_jets_match_differences_for_all_families() {
        let cyl = build_cylinder(&sampled(&CurveQc::circle(1.0).unwrap(), (0.0, 1.0)), 4).unwrap();
        let cone = build_cone_cylinder(&sampled(&CurveQc::latitude(1.0).unwrap(), (0.0, 1.0)), 4).unwrap();
        let hp = to_half_plane(&sampled(&CurveQc::horocycle().unwrap(), (0.0, 1.0))).unwrap();
        let rot = build_rotation(&hp, 4).unwrap();
        for (surface, u) in [
            (&cyl, vec![0.5, 0.1, 0.2, -0.3]),
            (&cone, vec![0.5, 0.9, 0.2, -0.3]),
            (&rot, vec![0.5, 1.0, 1.3, 0.9]),
        ] {
            let exact = surface.analytic_jet(&u).unwrap().unwrap();
            let fd = finite_difference_jet(surface, &u, 1e-4).unwrap();
            assert!(exact.max_gap(&fd.jet) < 1e-6, "{:?}: {}", surface.family, exact.max_gap(&fd.jet));
        }
    }

    #[test]
    fn induced_metrics_have_the_product_form() {
        // cone: r² ds² + dr² + dt²; rotation: γ2² (ds² + dω²)
        let cone = build_cone_cylinder(&sampled(&CurveQc::latitude(0.8).unwrap(), (0.0, 1.0)), 3).unwrap();
        let jet = cone.analytic_jet(&[0.3, 1.2, 0.1]).unwrap().unwrap();
        let g = jet.first.transpose() * &jet.first;
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![1.44, 1.0, 1.0]));
        assert!((g - expect).amax() < 1e-10);

        let hp = to_half_plane(&sampled(&CurveQc::horocycle().unwrap(), (0.0, 1.0))).unwrap();
        let rot = build_rotation(&hp, 3).unwrap();
        let u = [0.4, 1.1, 0.7];
        let jet = rot.analytic_jet(&u).unwrap().unwrap();
        let g = jet.first.transpose() * &jet.first;
        let y = jet.point.rows(1, 3).norm();
        let sin1 = u[1].sin();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![y * y, y * y, y * y * sin1 * sin1]));
        assert!((g - expect).amax() < 1e-10);
        assert!((y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn family_dimension_and_model_checks() {
        let plane = sampled(&CurveQc::circle(1.0).unwrap(), (0.0, 1.0));
        assert!(build_cylinder(&plane, 2).is_err());
        assert!(build_cone_cylinder(&plane, 3).is_err());
        let cone = build_cone_cylinder(&sampled(&CurveQc::latitude(1.0).unwrap(), (0.0, 1.0)), 3).unwrap();
        assert!(matches!(cone.evaluate(&[0.5, -0.1, 0.0]), Err(Error::OutsideDomain(_))));
    }
}
