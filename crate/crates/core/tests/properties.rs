use darboux_core::bonnet::{make_admissible_jet, run_bonnet_suite, second_fundamental_form, Integrability};
use darboux_core::curve::{
    integrate_states, project_initial_state, ribaucour_curve_transform, CurvatureProfile, CurveQc, TransformDefects,
};
use darboux_core::hypersurface::surfaces::GraphSurface;
use darboux_core::hypersurface::{apply_inversion, jet_eval_default, InversionSpec};
use darboux_core::lorentz::{lorentz_to_sphere, minkowski_dot, sphere_to_lorentz, EuclideanEmbedding, Orientation};
use nalgebra::DVector;
use proptest::prelude::*;

fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn light_cone_embedding_is_isometric(x in point(4), y in point(4)) {
        let e = EuclideanEmbedding::canonical(4);
        let px = e.embed_point(&x).unwrap();
        let py = e.embed_point(&y).unwrap();
        let d = px.sub(&py);
        let lorentz = minkowski_dot(&d, &d).unwrap();
        let euclid: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
        prop_assert!((lorentz - euclid).abs() <= 1e-10 * (1.0 + euclid));
        prop_assert!(minkowski_dot(&px, &px).unwrap().abs() <= 1e-10 * (1.0 + euclid));
    }

    #[test]
    fn oriented_spheres_survive_the_lorentz_round_trip(
        center in point(3), radius in 0.05..20.0f64, positive in any::<bool>()
    ) {
        let e = EuclideanEmbedding::canonical(3);
        let orientation = if positive { Orientation::Positive } else { Orientation::Negative };
        let s = sphere_to_lorentz(&e, &center, radius, orientation).unwrap();
        let back = lorentz_to_sphere(&e, &s.lorentz_rep).unwrap();
        prop_assert_eq!(back.sphere.orientation, orientation);
        prop_assert!((back.sphere.radius - radius).abs() <= 1e-9 * radius.max(1.0));
        for (a, b) in back.sphere.center.iter().zip(&center) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + radius));
        }
    }

    #[test]
    fn first_integral_and_transform_identities_hold(
        c in prop::sample::select(vec![-1.0, 0.0, 1.0]),
        excess in 0.3..3.0f64,
        h0 in prop::array::uniform3(0.2..2.0f64),
        k in 0.3..2.0f64,
    ) {
        let a = if c < 0.0 { excess } else { c + excess };
        let profile = CurvatureProfile::Constant { k };
        let curve = match c as i32 {
            0 => CurveQc::plane(profile),
            1 => CurveQc::spherical(profile, 1.1),
            _ => CurveQc::hyperbolic(profile),
        }.unwrap();
        let Ok(h0) = project_initial_state(h0, a, c) else { return Ok(()); };
        let Ok(traj) = integrate_states(&curve, h0, a, (0.0, 1.0), 1e-3) else { return Ok(()); };
        for st in &traj.states {
            prop_assert!(st.first_integral(c).abs() <= 1e-9);
        }
        if let Ok(tilde) = ribaucour_curve_transform(&traj) {
            let d = TransformDefects::measure(&traj, &tilde);
            prop_assert!(d.gamma_identity <= 1e-10 && d.space_form <= 1e-9 && d.speed <= 1e-8, "{:?}", d);
        }
    }

    #[test]
    fn bonnet_cross_term_is_odd_under_the_corrected_constraint(
        seed in any::<u64>(), c in prop::sample::select(vec![-1i8, 0, 1])
    ) {
        let jet = make_admissible_jet(seed, c, Integrability::Corrected).unwrap();
        let p = second_fundamental_form(&jet.with_eps(1)).unwrap();
        let m = second_fundamental_form(&jet.with_eps(-1)).unwrap();
        let scale = p[1].abs().max(1.0);
        prop_assert!((p[1] + m[1]).abs() <= 1e-10 * scale);
        prop_assert!((p[0] - m[0]).abs() <= 1e-10 * p[0].abs().max(1.0));
        prop_assert!((p[3] - m[3]).abs() <= 1e-10 * p[3].abs().max(1.0));
        prop_assert!(p[1].abs() > 0.0);
    }

    #[test]
    fn inversion_is_an_involution_on_jets(seed in 0u64..1000, r in 0.3..3.0f64, offset in point(4)) {
        let s = GraphSurface::random(3, seed);
        let jet = jet_eval_default(&s, &[0.05, -0.1, 0.08]).unwrap();
        let center = DVector::from_vec(offset) + DVector::from_vec(vec![0.0, 0.0, 0.0, 8.0]);
        let spec = InversionSpec::new(center, r).unwrap();
        let back = apply_inversion(&spec, &apply_inversion(&spec, &jet).unwrap()).unwrap();
        prop_assert!(back.max_gap(&jet) <= 1e-8, "{}", back.max_gap(&jet));
    }
}

#[test]
fn bonnet_suite_depends_only_on_its_seed() {
    let a = run_bonnet_suite(1, 32, 99, Integrability::Printed).unwrap();
    let b = run_bonnet_suite(1, 32, 99, Integrability::Printed).unwrap();
    let c = run_bonnet_suite(1, 32, 100, Integrability::Printed).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.checks, c.checks);
}
