use nalgebra::{DMatrix, DVector};

use super::forms::{fundamental_forms_toward, FundamentalForms};
use super::jet::ImmersionJet;
use crate::error::{check_dim, Error, Result};

/// Inversion `p ↦ p0 + r² (p - p0) / |p - p0|²` in the sphere of radius `r`
/// about `p0`.
#[derive(Clone, Debug, PartialEq)]
pub struct InversionSpec {
    pub center: DVector<f64>,
    pub radius: f64,
}

impl InversionSpec {
    pub fn new(center: DVector<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonPositiveRadius(radius));
        }
        Ok(Self { center, radius })
    }

    fn offset(&self, p: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
        check_dim(self.center.len(), p.len())?;
        let q = p - &self.center;
        let rho = q.norm_squared();
        if !(rho.sqrt() > 1e-12 * self.radius) {
            return Err(Error::AtInversionCenter);
        }
        Ok((q, rho))
    }

    pub fn apply(&self, p: &DVector<f64>) -> Result<DVector<f64>> {
        let (q, rho) = self.offset(p)?;
        Ok(&self.center + q * (self.radius * self.radius / rho))
    }
}

/// Jet of the inverted immersion, by the chain rule on the closed-form map.
pub fn apply_inversion(spec: &InversionSpec, jet: &ImmersionJet) -> Result<ImmersionJet> {
    let (q, rho) = spec.offset(&jet.point)?;
    let r2 = spec.radius * spec.radius;
    let n = jet.dim();
    let d1 = |v: &DVector<f64>| -> DVector<f64> { (v / rho - &q * (2.0 * q.dot(v) / (rho * rho))) * r2 };
    let d2 = |v: &DVector<f64>, w: &DVector<f64>| -> DVector<f64> {
        let qv = q.dot(v);
        let qw = q.dot(w);
        let vw = v.dot(w);
        let rho2 = rho * rho;
        (v * (-2.0 * qw / rho2) + w * (-2.0 * qv / rho2) + &q * (-2.0 * vw / rho2 + 8.0 * qv * qw / (rho2 * rho)))
            * r2
    };
    let point = &spec.center + &q * (r2 / rho);
    let cols: Vec<DVector<f64>> = (0..n).map(|i| jet.first.column(i).clone_owned()).collect();
    let mut first = DMatrix::zeros(jet.ambient_dim(), n);
    for (i, c) in cols.iter().enumerate() {
        first.set_column(i, &d1(c));
    }
    let mut second = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            second.push(d1(jet.second(i, j)) + d2(&cols[i], &cols[j]));
        }
    }
    ImmersionJet::new(jet.param.clone(), point, first, second)
}

/// Predicted fundamental forms of the inverted immersion, for the normal
/// `Ñ = N - 2<q,N> q / |q|²` with `q = f - p0`:
/// `r² Ã = |q|² A + 2<q,N> I` and `g̃ = r⁴ / |q|⁴ g`.
pub fn inversion_shape_law(spec: &InversionSpec, jet: &ImmersionJet, forms: &FundamentalForms) -> Result<FundamentalForms> {
    let (q, rho) = spec.offset(&jet.point)?;
    let r2 = spec.radius * spec.radius;
    let n = jet.dim();
    let qn = q.dot(&forms.normal);
    let metric = &forms.metric * (r2 * r2 / (rho * rho));
    let shape = (&forms.shape * rho + DMatrix::identity(n, n) * (2.0 * qn)) / r2;
    let second_form = &metric * &shape;
    let second_form = (&second_form + second_form.transpose()) * 0.5;
    let principal_curvatures = forms
        .principal_curvatures
        .iter()
        .map(|l| (l * rho + 2.0 * qn) / r2)
        .collect();
    Ok(FundamentalForms {
        metric,
        normal: &forms.normal - &q * (2.0 * qn / rho),
        second_form,
        shape,
        principal_curvatures,
        principal_frame: &forms.principal_frame * (rho / r2),
    })
}

/// Fundamental forms of the inverted jet with the normal aligned to the one
/// predicted by [`inversion_shape_law`].
pub fn inverted_forms(spec: &InversionSpec, jet: &ImmersionJet, forms: &FundamentalForms) -> Result<FundamentalForms> {
    let predicted = inversion_shape_law(spec, jet, forms)?;
    fundamental_forms_toward(&apply_inversion(spec, jet)?, &predicted.normal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::surfaces::{GraphSurface, Plane};
    use crate::hypersurface::{fundamental_forms, jet_eval_default, ParamImmersion};
    use crate::lorentz::Orientation;

    #[test]
    fn points_on_the_inversion_sphere_are_fixed() {
        let spec = InversionSpec::new(DVector::from_vec(vec![1.0, 2.0, 3.0]), 2.0).unwrap();
        let p = DVector::from_vec(vec![1.0, 2.0 + 2.0_f64.sqrt(), 3.0 + 2.0_f64.sqrt()]);
        assert!((spec.apply(&p).unwrap() - &p).amax() < 1e-14);
    }

    #[test]
    fn center_and_radius_errors() {
        let spec = InversionSpec::new(DVector::zeros(3), 1.0).unwrap();
        assert_eq!(spec.apply(&DVector::zeros(3)), Err(Error::AtInversionCenter));
        assert!(InversionSpec::new(DVector::zeros(3), 0.0).is_err());
    }

    #[test]
    fn double_inversion_restores_jet() {
        let s = GraphSurface::random(3, 3);
        let jet = jet_eval_default(&s, &[0.1, -0.2, 0.3]).unwrap();
        let spec = InversionSpec::new(DVector::from_vec(vec![0.4, -0.3, 0.2, -1.5]), 1.3).unwrap();
        let back = apply_inversion(&spec, &apply_inversion(&spec, &jet).unwrap()).unwrap();
        assert!(back.max_gap(&jet) < 1e-10, "{}", back.max_gap(&jet));
    }

    #[test]
    fn plane_at_unit_height_becomes_sphere_of_radius_half() {
        // plane x3 = 1 parameterized as (u1, u2, 1)
        let plane = Plane::at_height(2, 1.0);
        let jet = jet_eval_default(&plane, &[0.0, 0.0]).unwrap();
        let up = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let forms = fundamental_forms_toward(&jet, &up).unwrap();
        let spec = InversionSpec::new(DVector::zeros(3), 1.0).unwrap();
        let image = apply_inversion(&spec, &jet).unwrap();
        assert!((&image.point - &up).amax() < 1e-15);
        let law = inversion_shape_law(&spec, &jet, &forms).unwrap();
        for l in &law.principal_curvatures {
            assert!((l - 2.0).abs() < 1e-15);
        }
        let actual = inverted_forms(&spec, &jet, &forms).unwrap();
        assert!((&actual.shape - &law.shape).amax() < 1e-12);
    }

    #[test]
    fn curvature_preserving_point() {
        // q tangent-free case: <q,N> = 0 and |q| = r
        let s = GraphSurface::random(2, 9);
        let jet = jet_eval_default(&s, &[0.1, 0.1]).unwrap();
        let forms = fundamental_forms(&jet, Orientation::Positive).unwrap();
        let t = jet.first.column(0).normalize();
        let spec = InversionSpec::new(&jet.point - t * 0.8, 0.8).unwrap();
        let law = inversion_shape_law(&spec, &jet, &forms).unwrap();
        assert!((&law.shape - &forms.shape).amax() < 1e-13);
        assert!((&law.metric - &forms.metric).amax() < 1e-13);
    }

    #[test]
    fn analytic_law_matches_exact_inverted_jet() {
        let s = GraphSurface::random(3, 21);
        let u = [0.05, 0.1, -0.15];
        let jet = s.analytic_jet(&u).unwrap().unwrap();
        let forms = fundamental_forms(&jet, Orientation::Positive).unwrap();
        let spec = InversionSpec::new(DVector::from_vec(vec![0.3, 0.2, -0.4, 1.1]), 0.9).unwrap();
        let law = inversion_shape_law(&spec, &jet, &forms).unwrap();
        let actual = inverted_forms(&spec, &jet, &forms).unwrap();
        assert!((&law.normal - &actual.normal).amax() < 1e-12);
        assert!((&law.metric - &actual.metric).amax() < 1e-10 * law.metric.amax());
        assert!((&law.shape - &actual.shape).amax() < 1e-10 * law.shape.amax().max(1.0));
    }
}
