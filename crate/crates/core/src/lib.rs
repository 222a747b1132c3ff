//! Construction and numerical certification of Darboux pairs of Euclidean
//! hypersurfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`lorentz`] models Euclidean space and its hyperspheres inside Minkowski space.
//! * [`hypersurface`] evaluates jets, fundamental forms and inversions.
//! * [`curve`] integrates the Ribaucour ODE along curves in the space forms.
//! * [`darboux`] lifts curve pairs to cylinder, cone and rotation hypersurface pairs.
//! * [`verifier`] certifies envelope, conformality and Codazzi-tensor conditions.
//! * [`bonnet`] checks the Bonnet-pair frame identities at random 2-jets.

pub mod bonnet;
pub mod curve;
pub mod darboux;
pub mod error;
pub mod hypersurface;
pub mod lorentz;
pub mod verifier;

pub(crate) mod numeric;

pub use error::{Error, Result};
