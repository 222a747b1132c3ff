use serde::{Deserialize, Serialize};

use super::model::SpaceForm;
use crate::error::{Error, Result};

/// Curve sample with its first two arclength derivatives and Frenet data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveNode {
    pub s: f64,
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub acceleration: Vec<f64>,
    pub normal: Vec<f64>,
    pub curvature: f64,
}

/// Curve known at uniformly spaced parameters, evaluated in between by
/// quintic Hermite interpolation of position, velocity and acceleration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    pub c: SpaceForm,
    pub nodes: Vec<CurveNode>,
}

/// Value and first two derivatives at a parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePoint {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub acceleration: Vec<f64>,
}

// Quintic Hermite basis on [0,1]: (value, d/dt, d²/dt²) for the six weights
// of p0, v0, a0, a1, v1, p1.
fn basis(t: f64) -> [[f64; 3]; 6] {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    [
        [
            1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5,
            -30.0 * t2 + 60.0 * t3 - 30.0 * t4,
            -60.0 * t + 180.0 * t2 - 120.0 * t3,
        ],
        [
            t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5,
            1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
            -36.0 * t + 96.0 * t2 - 60.0 * t3,
        ],
        [
            0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5,
            t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4,
            1.0 - 9.0 * t + 18.0 * t2 - 10.0 * t3,
        ],
        [
            0.5 * t3 - t4 + 0.5 * t5,
            1.5 * t2 - 4.0 * t3 + 2.5 * t4,
            3.0 * t - 12.0 * t2 + 10.0 * t3,
        ],
        [
            -4.0 * t3 + 7.0 * t4 - 3.0 * t5,
            -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
            -24.0 * t + 84.0 * t2 - 60.0 * t3,
        ],
        [
            10.0 * t3 - 15.0 * t4 + 6.0 * t5,
            30.0 * t2 - 60.0 * t3 + 30.0 * t4,
            60.0 * t - 180.0 * t2 + 120.0 * t3,
        ],
    ]
}

impl SampledCurve {
    pub fn new(c: SpaceForm, nodes: Vec<CurveNode>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidInput("a sampled curve needs at least two nodes".into()));
        }
        let d = c.model_dim();
        for node in &nodes {
            for v in [&node.position, &node.velocity, &node.acceleration, &node.normal] {
                crate::error::check_dim(d, v.len())?;
            }
        }
        let h = nodes[1].s - nodes[0].s;
        if !(h > 0.0) {
            return Err(Error::InvalidInput("node parameters must increase".into()));
        }
        for (i, node) in nodes.iter().enumerate() {
            let expect = nodes[0].s + i as f64 * h;
            if (node.s - expect).abs() > 1e-9 * h.max(1.0) * (i as f64 + 1.0) {
                return Err(Error::InvalidInput("node parameters must be uniformly spaced".into()));
            }
        }
        Ok(Self { c, nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.nodes[1].s - self.nodes[0].s
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.nodes[0].s, self.nodes[self.len() - 1].s)
    }

    /// Index of a node sitting at `s`, if any.
    pub fn node_index(&self, s: f64) -> Option<usize> {
        let h = self.spacing();
        let x = (s - self.nodes[0].s) / h;
        let i = x.round();
        if i < 0.0 || i as usize >= self.len() || (x - i).abs() > 1e-9 {
            return None;
        }
        Some(i as usize)
    }

    pub fn eval(&self, s: f64) -> Result<CurvePoint> {
        let (lo, hi) = self.s_range();
        let slack = 1e-12 * (hi - lo).abs().max(1.0);
        if !(s >= lo - slack && s <= hi + slack) {
            return Err(Error::OutsideDomain(vec![s]));
        }
        if let Some(i) = self.node_index(s) {
            let n = &self.nodes[i];
            return Ok(CurvePoint {
                position: n.position.clone(),
                velocity: n.velocity.clone(),
                acceleration: n.acceleration.clone(),
            });
        }
        let h = self.spacing();
        let i = (((s - lo) / h).floor() as usize).min(self.len() - 2);
        let a = &self.nodes[i];
        let b = &self.nodes[i + 1];
        let t = (s - a.s) / h;
        let w = basis(t);
        let d = a.position.len();
        let mut out = [vec![0.0; d], vec![0.0; d], vec![0.0; d]];
        let scale = [1.0, 1.0 / h, 1.0 / (h * h)];
        for k in 0..d {
            let data = [
                a.position[k],
                h * a.velocity[k],
                h * h * a.acceleration[k],
                h * h * b.acceleration[k],
                h * b.velocity[k],
                b.position[k],
            ];
            for (order, slot) in out.iter_mut().enumerate() {
                slot[k] = scale[order] * (0..6).map(|j| w[j][order] * data[j]).sum::<f64>();
            }
        }
        let [position, velocity, acceleration] = out;
        Ok(CurvePoint {
            position,
            velocity,
            acceleration,
        })
    }

    /// Largest `| |φ'| - 1 |` with `φ'` from fourth-order central differences
    /// of the node positions.
    pub fn speed_defect(&self) -> f64 {
        let h = self.spacing();
        let p = |i: usize| &self.nodes[i].position;
        let mut worst = 0.0_f64;
        for i in 2..self.len().saturating_sub(2) {
            let v: Vec<f64> = (0..p(i).len())
                .map(|k| (-p(i + 2)[k] + 8.0 * p(i + 1)[k] - 8.0 * p(i - 1)[k] + p(i - 2)[k]) / (12.0 * h))
                .collect();
            let speed = self.c.dot(&v, &v).sqrt();
            worst = worst.max((speed - 1.0).abs());
        }
        worst
    }

    /// Largest `|<φ,φ> - c|`.
    pub fn space_form_defect(&self) -> f64 {
        let c = self.c.curvature();
        if c == 0.0 {
            return 0.0;
        }
        self.nodes
            .iter()
            .map(|n| (self.c.dot(&n.position, &n.position) - c).abs())
            .fold(0.0, f64::max)
    }
}
