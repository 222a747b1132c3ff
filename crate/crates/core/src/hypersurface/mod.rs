//! Parameterized hypersurfaces: jets, fundamental forms, inversions and
//! conformal comparison of induced metrics.

mod conformal;
mod forms;
mod inversion;
mod jet;
pub mod surfaces;

pub use conformal::{conformal_factor_field, metric_ratio, ConformalFit};
pub use forms::{fundamental_forms, fundamental_forms_toward, orthonormal_frame, unit_normal, FundamentalForms};
pub use inversion::{apply_inversion, inversion_shape_law, inverted_forms, InversionSpec};
pub use jet::{
    finite_difference_jet, jet_eval, jet_eval_default, ImmersionJet, JetEstimate, ParamDomain, ParamImmersion,
    DEFAULT_FD_STEP,
};
pub use surfaces::builtin_surface;
