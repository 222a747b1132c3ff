use serde::{Deserialize, Serialize};

use darboux_core::bonnet::Integrability;
use darboux_core::darboux::Family;
use darboux_core::verifier::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Build,
    Verify,
    Bonnet,
    Weyl,
    Curve,
}

/// Everything a command needs, after flag parsing. Fields a command does not
/// use stay `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub family: Option<Family>,
    pub curve_spec: Option<String>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    pub h0: Option<[f64; 3]>,
    pub n: Option<usize>,
    pub c: Option<f64>,
    pub s_range: Option<(f64, f64)>,
    pub step: Option<f64>,
    pub tol: Tolerances,
    pub seed: u64,
    pub trials: Option<usize>,
    pub constraints: Vec<Integrability>,
    pub pair_path: Option<String>,
    pub out_path: Option<String>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            family: None,
            curve_spec: None,
            a: None,
            h0: None,
            n: None,
            c: None,
            s_range: None,
            step: None,
            tol: Tolerances::default(),
            seed: 0,
            trials: None,
            constraints: Vec::new(),
            pair_path: None,
            out_path: None,
        }
    }
}
