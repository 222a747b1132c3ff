use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which form of the mixed-derivative integrability condition the jet solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrability {
    /// `2H_xy + H_x u_y + H_y + H_x = 0`.
    Printed,
    /// `2H_xy + H_x u_y + H_y u_x = 0`, what `h_xy = h_yx` actually gives.
    Corrected,
}

impl Integrability {
    pub fn name(self) -> &'static str {
        match self {
            Integrability::Printed => "printed",
            Integrability::Corrected => "corrected",
        }
    }

    /// Left-hand side of the condition at the given jets.
    pub fn residual(self, u: &[f64; 6], hm: &[f64; 6]) -> f64 {
        let (hx, hy, hxy) = (hm[1], hm[2], hm[4]);
        match self {
            Integrability::Printed => 2.0 * hxy + hx * u[2] + hy + hx,
            Integrability::Corrected => 2.0 * hxy + hx * u[2] + hy * u[1],
        }
    }

    fn solve_hxy(self, u: &[f64; 6], hx: f64, hy: f64) -> f64 {
        match self {
            Integrability::Printed => -(hx * u[2] + hy + hx) / 2.0,
            Integrability::Corrected => -(hx * u[2] + hy * u[1]) / 2.0,
        }
    }
}

/// 2-jet at a point of an isothermic surface `e^u(dx² + dy²)` in the space
/// form of curvature `c`, with mean curvature `H` and Hopf-type data `h`, `k`.
///
/// Jets are ordered `(v, v_x, v_y, v_xx, v_xy, v_yy)`. The derivatives of `h`
/// are never stored; they follow from `h_x = H_x e^u`, `h_y = -H_y e^u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BonnetJet {
    pub c: i8,
    pub u_jet: [f64; 6],
    #[serde(rename = "H_jet")]
    pub h_jet: [f64; 6],
    pub h: f64,
    pub k: f64,
    pub eps: i8,
    pub constraint: Integrability,
}

impl BonnetJet {
    pub fn with_eps(&self, eps: i8) -> Self {
        Self { eps, ..self.clone() }
    }

    pub fn eps_f(&self) -> f64 {
        self.eps as f64
    }

    pub fn c_f(&self) -> f64 {
        self.c as f64
    }

    /// `(h_x, h_y)` from the Codazzi equations.
    pub fn h_derivatives(&self) -> (f64, f64) {
        let e = self.u_jet[0].exp();
        (self.h_jet[1] * e, -self.h_jet[2] * e)
    }

    pub fn integrability_residual(&self) -> f64 {
        self.constraint.residual(&self.u_jet, &self.h_jet)
    }

    /// `u_xx + u_yy + 2e^u(c + H² - (h² + k²)e^{-2u})`, i.e. the Gauss
    /// equation `K = c + det A` for the conformal metric.
    pub fn gauss_residual(&self) -> f64 {
        self.u_jet[3] + self.u_jet[5] + gauss_rhs_neg(self)
    }

    pub fn validate(&self) -> Result<()> {
        if ![-1, 0, 1].contains(&self.c) {
            return Err(Error::InvalidInput(format!("c must be -1, 0 or 1, got {}", self.c)));
        }
        if self.eps.abs() != 1 {
            return Err(Error::InvalidInput(format!("eps must be ±1, got {}", self.eps)));
        }
        if self.k == 0.0 {
            return Err(Error::InvalidInput("k must be nonzero".into()));
        }
        let hm = self.h_jet[0];
        match self.c {
            0 if hm == 0.0 => Err(Error::Degenerate("H vanishes".into())),
            -1 if hm.abs() <= 1.0 => {
                Err(Error::Degenerate(format!("|H| = {} must exceed 1 when c = -1", hm.abs())))
            }
            _ => Ok(()),
        }
    }
}

fn gauss_rhs_neg(jet: &BonnetJet) -> f64 {
    let u = jet.u_jet[0];
    let hm = jet.h_jet[0];
    2.0 * u.exp() * (jet.c_f() + hm * hm - (jet.h * jet.h + jet.k * jet.k) * (-2.0 * u).exp())
}

/// Smallest |H| accepted when c = 0.
pub const MIN_MEAN_CURVATURE: f64 = 1e-3;

/// Random jet satisfying Codazzi, the chosen integrability form and the Gauss
/// equation. `u_yy` is free and `u_xx` is solved; `H_xy` is solved from the
/// integrability condition. The same seed always yields the same jet.
///
/// For c = -1 the parallel surface needs `coth R = H`, so |H| is drawn from
/// `[1.1, 3]`; otherwise `H ∈ [-2, 2]` with the c = 0 guard `|H| ≥ 1e-3`.
pub fn make_admissible_jet(seed: u64, c: i8, constraint: Integrability) -> Result<BonnetJet> {
    if ![-1, 0, 1].contains(&c) {
        return Err(Error::InvalidInput(format!("c must be -1, 0 or 1, got {c}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hm = loop {
        let v: f64 = match c {
            -1 => {
                let mag = rng.gen_range(1.1..3.0);
                if rng.gen_bool(0.5) {
                    mag
                } else {
                    -mag
                }
            }
            _ => rng.gen_range(-2.0..2.0),
        };
        if c != 0 || v.abs() >= MIN_MEAN_CURVATURE {
            break v;
        }
    };
    let mut u = [0.0; 6];
    for slot in [0, 1, 2, 4, 5] {
        u[slot] = rng.gen_range(-0.5..0.5);
    }
    let mut hj = [hm, 0.0, 0.0, 0.0, 0.0, 0.0];
    for slot in [1, 2, 3, 5] {
        hj[slot] = rng.gen_range(-1.0..1.0);
    }
    let h = rng.gen_range(-1.0..1.0);
    let k = rng.gen_range(0.5..2.0);
    hj[4] = constraint.solve_hxy(&u, hj[1], hj[2]);
    let mut jet = BonnetJet { c, u_jet: u, h_jet: hj, h, k, eps: 1, constraint };
    jet.u_jet[3] = -jet.u_jet[5] - gauss_rhs_neg(&jet);
    Ok(jet)
}
