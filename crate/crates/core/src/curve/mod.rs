//! Ribaucour transforms of curves in the space forms.

mod circle;
mod csv;
mod hermite;
mod model;
mod ode;
mod transform;

pub use circle::{enveloped_circle, CircleInQc, EnvelopedCircle};
pub use csv::write_csv;
pub use hermite::{CurveNode, CurvePoint, SampledCurve};
pub use model::{half_plane_jet, half_plane_to_hyperboloid, hyperboloid_to_half_plane, CurvatureProfile, CurveQc, SpaceForm};
pub use ode::{
    first_integral, integrate_states, ode_rhs, project_initial_state, RibaucourState, RibaucourTrajectory, DRIFT_TOL,
    H3_MIN, INITIAL_K_TOL,
};
pub(crate) use model::cross;
pub use transform::{gamma_vector, ribaucour_curve_transform, to_half_plane, TransformDefects};
