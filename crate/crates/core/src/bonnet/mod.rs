//! Pointwise checks of the Bonnet-pair frame identities for the parallel
//! surfaces `F = f + η/H` (c = 0) and `F = C f + S η` (c ≠ 0) at random 2-jets.

mod checks;
mod dual;
mod frame;
mod jet;

pub use checks::{
    first_order_identity_check, run_bonnet_suite, second_order_identity_check, BonnetSuiteReport,
    FIRST_ORDER_TOL, SECOND_ORDER_TOL,
};
pub use frame::{bonnet_frame, second_fundamental_form, BonnetFrame, FrameVector, Gram};
pub use jet::{make_admissible_jet, BonnetJet, Integrability, MIN_MEAN_CURVATURE};
