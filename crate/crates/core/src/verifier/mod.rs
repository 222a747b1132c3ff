//! Independent numerical certification of sphere-congruence properties of
//! hypersurface pairs, and the Weyl tensor of `Q²_c × S²`.

mod checks;
mod grid;
mod ribaucour;
mod weyl;

pub use checks::{check_b_squared, check_common_congruence, check_conformality, check_envelope, verify_pair};
pub use grid::Grid;
pub use ribaucour::{check_darboux_condition, recover_ribaucour_data, ClusterClass, DarbouxCheck, RibaucourData};
pub use weyl::{default_weyl_grid, weyl_product_check, weyl_tensor, WeylReport, WeylTensor};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lorentz::SphereElement;

/// Outcome of one numerical check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub samples: usize,
}

impl CheckReport {
    /// A NaN residual fails.
    pub fn new(name: impl Into<String>, max_residual: f64, tolerance: f64, samples: usize) -> Self {
        Self {
            name: name.into(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
            samples,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, tolerance: f64) -> Self {
        Self::new(name, f64::INFINITY, tolerance, 0)
    }
}

/// A family of oriented hyperspheres indexed by the parameters of a
/// hypersurface.
pub trait SphereCongruence: Send + Sync {
    fn sphere_at(&self, u: &[f64]) -> Result<SphereElement>;
}

impl<F> SphereCongruence for F
where
    F: Fn(&[f64]) -> Result<SphereElement> + Send + Sync,
{
    fn sphere_at(&self, u: &[f64]) -> Result<SphereElement> {
        self(u)
    }
}

/// Thresholds used by [`verify_pair`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub conformal: f64,
    pub envelope: f64,
    pub common: f64,
    pub b_squared: f64,
    pub recovery: f64,
    pub darboux: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            conformal: 1e-6,
            envelope: 1e-6,
            common: 1e-6,
            b_squared: 1e-5,
            recovery: 1e-4,
            darboux: 1e-3,
        }
    }
}

/// All checks of one pair, as written to report files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckReport>,
    pub pass: bool,
    pub grid: Grid,
}

impl VerificationReport {
    pub fn new(checks: Vec<CheckReport>, grid: Grid) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { checks, pass, grid }
    }

    pub fn failing(&self) -> impl Iterator<Item = &CheckReport> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}
