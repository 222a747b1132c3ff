//! Darboux pairs of cylinders, cone-cylinders and rotation hypersurfaces
//! built from Ribaucour pairs of curves.

mod builders;
mod congruence;
mod io;
mod mobius;
mod pair;

pub use builders::{build_cone_cylinder, build_cylinder, build_rotation, Family, ProfileSurface};
pub use congruence::{lift_congruence, lift_orthogonality_residual};
pub use io::{CurveEntry, PairFile};
pub use mobius::{best_fit_mobius, pair_mobius_fit, InversionControl, MobiusFit};
pub use pair::{darboux_partner, darboux_partner_unchecked, DarbouxPair, PairParams};
