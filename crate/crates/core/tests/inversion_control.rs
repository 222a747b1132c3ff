use darboux_core::darboux::{pair_mobius_fit, InversionControl};
use darboux_core::hypersurface::surfaces::GraphSurface;
use darboux_core::hypersurface::{InversionSpec, ParamImmersion};
use darboux_core::verifier::{
    check_common_congruence, check_conformality, check_darboux_condition, check_envelope, recover_ribaucour_data,
    ClusterClass, Grid,
};
use nalgebra::DVector;

fn control() -> (InversionControl<GraphSurface>, Grid) {
    let f = GraphSurface::random(3, 5);
    let grid = Grid::inside(&f.domain(), &[4, 4, 3], 0.15).unwrap();
    let spec = InversionSpec::new(DVector::from_vec(vec![0.3, -0.2, 0.1, 2.5]), 1.5).unwrap();
    (InversionControl::new(f, spec), grid)
}

#[test]
fn inverted_pair_envelopes_the_invariant_congruence() {
    let (pair, grid) = control();
    for surface in [&pair.f as &dyn ParamImmersion, &pair.f_tilde] {
        let r = check_envelope(surface, &pair, &grid, 1e-6).unwrap();
        assert!(r.pass, "{r:?}");
    }
    let r = check_common_congruence(&pair.f, &pair.f_tilde, &pair, &grid, 1e-6).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn conformality_holds_in_both_directions() {
    let (pair, grid) = control();
    let forward = check_conformality(&pair.f, &pair.f_tilde, &grid, 1e-6).unwrap();
    let backward = check_conformality(&pair.f_tilde, &pair.f, &grid, 1e-6).unwrap();
    assert!(forward.pass && backward.pass, "{forward:?} {backward:?}");
}

#[test]
fn inversion_is_classified_as_single_cluster() {
    let (pair, grid) = control();
    let data = recover_ribaucour_data(&pair.f, &pair.f_tilde, &grid).unwrap();
    let check = check_darboux_condition(&pair.f, &pair.f_tilde, &data, &grid, 1e-3).unwrap();
    assert_eq!(check.classification, ClusterClass::SingleCluster, "{:?}", check.separation);
}

#[test]
fn inversion_is_fitted_by_a_mobius_map() {
    let (pair, grid) = control();
    let fit = pair_mobius_fit(&pair.f, &pair.f_tilde, &grid, 11).unwrap();
    assert!(fit.residual < 1e-10, "{fit:?}");
}
