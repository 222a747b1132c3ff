use serde::{Deserialize, Serialize};

use super::builders::Family;
use super::pair::{DarbouxPair, PairParams};
use crate::curve::{CurveNode, CurveQc, SampledCurve};
use crate::error::{Error, Result};
use crate::lorentz::SphereElement;

/// Curve entry of a pair file: the command-line spec and its parsed form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub spec: String,
    pub definition: CurveQc,
}

/// On-disk form of a [`DarbouxPair`]. The sampled arrays are authoritative;
/// the generation parameters are kept for reproduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    pub family: Family,
    pub n: usize,
    pub curve: CurveEntry,
    #[serde(rename = "A")]
    pub a: f64,
    pub h0: [f64; 3],
    pub s_range: (f64, f64),
    pub step: f64,
    pub curve_samples: Vec<CurveNode>,
    pub transformed_samples: Vec<CurveNode>,
    pub congruence: Vec<SphereElement>,
}

impl PairFile {
    pub fn from_pair(pair: &DarbouxPair) -> Self {
        let p = &pair.params;
        Self {
            family: p.family,
            n: p.n,
            curve: CurveEntry {
                spec: p.curve_spec.clone(),
                definition: p.curve.clone(),
            },
            a: p.a,
            h0: p.h0,
            s_range: p.s_range,
            step: p.step,
            curve_samples: pair.model_curve.nodes.clone(),
            transformed_samples: pair.model_transformed.nodes.clone(),
            congruence: pair.base_spheres.clone(),
        }
    }

    pub fn into_pair(self) -> Result<DarbouxPair> {
        let c = self.family.space_form();
        let params = PairParams {
            family: self.family,
            n: self.n,
            curve_spec: self.curve.spec,
            curve: self.curve.definition,
            a: self.a,
            h0: self.h0,
            s_range: self.s_range,
            step: self.step,
        };
        DarbouxPair::from_parts(
            params,
            SampledCurve::new(c, self.curve_samples)?,
            SampledCurve::new(c, self.transformed_samples)?,
            self.congruence,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::MalformedPairFile(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedPairFile(e.to_string()))
    }
}
