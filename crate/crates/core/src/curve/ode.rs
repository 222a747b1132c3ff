use serde::{Deserialize, Serialize};

use super::hermite::{CurveNode, SampledCurve};
use super::model::{CurveQc, SpaceForm};
use crate::error::{Error, Result};
use crate::numeric::{compensated_weighted_dot, Compensated};

/// Below this `|h3|` the Ribaucour transform is singular.
pub const H3_MIN: f64 = 1e-8;
/// Largest tolerated `|K|` along a trajectory.
pub const DRIFT_TOL: f64 = 1e-9;
/// Largest tolerated `|K|` of an initial state.
pub const INITIAL_K_TOL: f64 = 1e-12;
const MAX_HALVINGS: usize = 8;

/// Phase point `(h1, h2, h3)` of the Ribaucour system at arclength `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RibaucourState {
    pub s: f64,
    pub h: [f64; 3],
    #[serde(rename = "A")]
    pub a: f64,
    /// Low-order parts left over by compensated accumulation; the state is
    /// `h + h_low` to about twice the working precision.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub h_low: [f64; 3],
}

fn is_zero(v: &[f64; 3]) -> bool {
    v.iter().all(|x| *x == 0.0)
}

impl RibaucourState {
    pub fn new(s: f64, h: [f64; 3], a: f64) -> Self {
        Self {
            s,
            h,
            a,
            h_low: [0.0; 3],
        }
    }

    /// First integral of the extended-precision state.
    pub fn first_integral(&self, c: f64) -> f64 {
        let w = [1.0, 1.0, c - self.a];
        let base = first_integral(self.h, self.a, c);
        let cross: f64 = (0..3).map(|i| 2.0 * w[i] * self.h[i] * self.h_low[i]).sum();
        base + cross
    }
}

/// `(k h2 + (A - c) h3, -k h1, h1)`.
pub fn ode_rhs(state: &RibaucourState, k: f64, c: f64) -> [f64; 3] {
    let [h1, h2, h3] = state.h;
    [k * h2 + (state.a - c) * h3, -k * h1, h1]
}

/// `h1² + h2² + (c - A) h3²`, evaluated with compensated arithmetic.
pub fn first_integral(h: [f64; 3], a: f64, c: f64) -> f64 {
    compensated_weighted_dot(&[(1.0, h[0], h[0]), (1.0, h[1], h[1]), (c - a, h[2], h[2])])
}

/// Rescales `(h1, h2)` so that the first integral vanishes.
pub fn project_initial_state(h0: [f64; 3], a: f64, c: f64) -> Result<[f64; 3]> {
    let gap = a - c;
    if !(gap > 0.0) {
        return Err(Error::Infeasible("A must exceed c".into()));
    }
    if h0.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("initial state is not finite".into()));
    }
    if first_integral(h0, a, c).abs() <= 1e-14 {
        return Ok(h0);
    }
    let planar = h0[0] * h0[0] + h0[1] * h0[1];
    if h0[2] == 0.0 {
        return Err(Error::Infeasible("h3 = 0 with (h1, h2) ≠ 0 admits no zero first integral".into()));
    }
    if planar == 0.0 {
        return Err(Error::Infeasible("(h1, h2) = 0 cannot be rescaled onto the null cone".into()));
    }
    let scale = (gap * h0[2] * h0[2] / planar).sqrt();
    Ok([h0[0] * scale, h0[1] * scale, h0[2]])
}

/// Integrated Ribaucour data along a curve, with the curve itself sampled
/// at the same arclength nodes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RibaucourTrajectory {
    pub curve: CurveQc,
    #[serde(rename = "A")]
    pub a: f64,
    pub step: f64,
    pub states: Vec<RibaucourState>,
    pub sampled: SampledCurve,
    pub max_drift: f64,
}

impl RibaucourTrajectory {
    pub fn c(&self) -> SpaceForm {
        self.curve.c
    }

    pub fn is_trivial(&self) -> bool {
        self.states.iter().all(|s| is_zero(&s.h))
    }
}

struct Layout {
    d: usize,
    aux: bool,
}

impl Layout {
    fn len(&self) -> usize {
        3 * self.d + 3 + usize::from(self.aux)
    }
    fn h(&self) -> usize {
        3 * self.d
    }
}

fn rhs(curve: &CurveQc, a: f64, layout: &Layout, s: f64, y: &[f64], out: &mut [f64]) {
    let d = layout.d;
    let c = curve.c.curvature();
    let aux = if layout.aux { y[layout.len() - 1] } else { 0.0 };
    let k = curve.signed_curvature(s, aux);
    for i in 0..d {
        let (p, t, n) = (y[i], y[d + i], y[2 * d + i]);
        out[i] = t;
        out[d + i] = k * n - c * p;
        out[2 * d + i] = -k * t;
    }
    let hi = layout.h();
    let state = RibaucourState::new(s, [y[hi], y[hi + 1], y[hi + 2]], a);
    out[hi..hi + 3].copy_from_slice(&ode_rhs(&state, k, c));
    if layout.aux {
        out[layout.len() - 1] = curve.profile.aux_rate(aux);
    }
}

fn run_rk4(curve: &CurveQc, h0: [f64; 3], a: f64, s0: f64, s1: f64, steps: usize) -> Result<RibaucourTrajectory> {
    let layout = Layout {
        d: curve.c.model_dim(),
        aux: curve.profile.needs_aux(),
    };
    let d = layout.d;
    let c = curve.c.curvature();
    let dim = layout.len();
    let hstep = (s1 - s0) / steps as f64;
    let mut y: Vec<Compensated> = Vec::with_capacity(dim);
    y.extend(curve.start.iter().map(|&x| Compensated::new(x)));
    y.extend(curve.tangent.iter().map(|&x| Compensated::new(x)));
    y.extend(curve.start_normal().into_iter().map(Compensated::new));
    y.extend(h0.iter().map(|&x| Compensated::new(x)));
    if layout.aux {
        y.push(Compensated::new(0.0));
    }

    let mut states = Vec::with_capacity(steps + 1);
    let mut nodes = Vec::with_capacity(steps + 1);
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    let mut max_drift = 0.0_f64;

    let record = |i: usize, y: &[Compensated], states: &mut Vec<RibaucourState>, nodes: &mut Vec<CurveNode>| {
        let s = s0 + i as f64 * hstep;
        let v: Vec<f64> = y.iter().map(|x| x.hi).collect();
        let aux = if layout.aux { v[dim - 1] } else { 0.0 };
        let k = curve.signed_curvature(s, aux);
        let position = v[..d].to_vec();
        let normal = v[2 * d..3 * d].to_vec();
        let acceleration = (0..d).map(|j| k * normal[j] - c * position[j]).collect();
        let hi = layout.h();
        states.push(RibaucourState {
            s,
            h: [v[hi], v[hi + 1], v[hi + 2]],
            a,
            h_low: [y[hi].lo, y[hi + 1].lo, y[hi + 2].lo],
        });
        nodes.push(CurveNode {
            s,
            position,
            velocity: v[d..2 * d].to_vec(),
            acceleration,
            normal,
            curvature: k,
        });
    };

    record(0, &y, &mut states, &mut nodes);
    for i in 0..steps {
        let s = s0 + i as f64 * hstep;
        let base: Vec<f64> = y.iter().map(|x| x.hi).collect();
        rhs(curve, a, &layout, s, &base, &mut k1);
        for j in 0..dim {
            tmp[j] = base[j] + 0.5 * hstep * k1[j];
        }
        rhs(curve, a, &layout, s + 0.5 * hstep, &tmp, &mut k2);
        for j in 0..dim {
            tmp[j] = base[j] + 0.5 * hstep * k2[j];
        }
        rhs(curve, a, &layout, s + 0.5 * hstep, &tmp, &mut k3);
        for j in 0..dim {
            tmp[j] = base[j] + hstep * k3[j];
        }
        rhs(curve, a, &layout, s + hstep, &tmp, &mut k4);
        for j in 0..dim {
            y[j].add(hstep / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
        }
        record(i + 1, &y, &mut states, &mut nodes);
        let drift = states.last().map(|st| st.first_integral(c).abs()).unwrap_or(0.0);
        if !drift.is_finite() {
            return Err(Error::DriftUnrecoverable {
                drift,
                tolerance: DRIFT_TOL,
            });
        }
        max_drift = max_drift.max(drift);
    }
    let initial = states[0].first_integral(c).abs();
    Ok(RibaucourTrajectory {
        curve: curve.clone(),
        a,
        step: hstep,
        states,
        sampled: SampledCurve::new(curve.c, nodes)?,
        max_drift: max_drift.max(initial),
    })
}

/// Classical Runge–Kutta integration of the Ribaucour system jointly with
/// the Frenet frame of the curve, halving the step (at most eight times)
/// while the first integral drifts above [`DRIFT_TOL`].
pub fn integrate_states(
    curve: &CurveQc,
    h0: [f64; 3],
    a: f64,
    s_range: (f64, f64),
    step: f64,
) -> Result<RibaucourTrajectory> {
    curve.validate()?;
    let c = curve.c.curvature();
    let (s0, s1) = s_range;
    if !(s1 > s0) || !s0.is_finite() || !s1.is_finite() {
        return Err(Error::InvalidInput(format!("empty arclength range [{s0}, {s1}]")));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    let k0 = first_integral(h0, a, c);
    let scale = h0.iter().map(|x| x * x).sum::<f64>().max(1.0);
    if k0.abs() > INITIAL_K_TOL * scale {
        return Err(Error::InvalidInput(format!(
            "initial state has first integral {k0:e}; project it first"
        )));
    }
    let mut steps = ((s1 - s0) / step - 1e-9).ceil().max(1.0) as usize;
    let mut last_drift = f64::NAN;
    for _ in 0..=MAX_HALVINGS {
        let traj = run_rk4(curve, h0, a, s0, s1, steps);
        match traj {
            Ok(t) if t.max_drift <= DRIFT_TOL => {
                if h0 != [0.0; 3] {
                    check_h3(&t)?;
                }
                return Ok(t);
            }
            Ok(t) => last_drift = t.max_drift,
            Err(Error::DriftUnrecoverable { drift, .. }) => last_drift = drift,
            Err(e) => return Err(e),
        }
        steps *= 2;
    }
    Err(Error::DriftUnrecoverable {
        drift: last_drift,
        tolerance: DRIFT_TOL,
    })
}

fn check_h3(t: &RibaucourTrajectory) -> Result<()> {
    for (i, st) in t.states.iter().enumerate() {
        if st.h[2].abs() < H3_MIN {
            return Err(Error::SingularTransform { s: st.s, h3: st.h[2] });
        }
        if i > 0 && st.h[2].signum() != t.states[i - 1].h[2].signum() {
            return Err(Error::SingularTransform { s: st.s, h3: 0.0 });
        }
    }
    Ok(())
}
