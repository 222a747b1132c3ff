use serde::{Deserialize, Serialize};

use super::dual::Dual;
use super::jet::BonnetJet;
use crate::error::{Error, Result};

/// Vector written in the moving frame `{X, Y, η, f}`. The `f` slot is only
/// meaningful when c ≠ 0; its Gram entry is `c`, so it drops out otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameVector {
    pub coeffs: [f64; 4],
}

impl FrameVector {
    pub fn new(coeffs: [f64; 4]) -> Self {
        Self { coeffs }
    }

    pub fn inner(&self, other: &FrameVector, gram: &Gram) -> f64 {
        (0..4).map(|i| gram.0[i] * self.coeffs[i] * other.coeffs[i]).sum()
    }

    pub fn norm_sq(&self, gram: &Gram) -> f64 {
        self.inner(self, gram)
    }
}

/// Diagonal Gram matrix `diag(e^u, e^u, 1, c)` of the moving frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gram(pub [f64; 4]);

impl Gram {
    pub fn of(jet: &BonnetJet) -> Self {
        let e = jet.u_jet[0].exp();
        Gram([e, e, 1.0, jet.c_f()])
    }
}

/// Tangent images `F_*X`, `F_*Y` and the (non-unit) normal `N` of the
/// parallel surface `F`, evaluated at the base point of the jet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BonnetFrame {
    pub f_x: FrameVector,
    pub f_y: FrameVector,
    pub n: FrameVector,
    pub gram: Gram,
}

/// Scalar fields of the jet as first-order duals.
struct Fields {
    e_inv: Dual,
    hm: Dual,
    hm_x: Dual,
    hm_y: Dual,
    h: Dual,
    ek: f64,
}

impl Fields {
    fn of(jet: &BonnetJet) -> Self {
        let (u, hj) = (&jet.u_jet, &jet.h_jet);
        let (h_x, h_y) = jet.h_derivatives();
        Fields {
            e_inv: Dual::new(-u[0], -u[1], -u[2]).exp(),
            hm: Dual::new(hj[0], hj[1], hj[2]),
            hm_x: Dual::new(hj[1], hj[3], hj[4]),
            hm_y: Dual::new(hj[2], hj[4], hj[5]),
            h: Dual::new(jet.h, h_x, h_y),
            ek: jet.eps_f() * jet.k,
        }
    }

    /// `S` with `cot R = H` (c = 1) or `coth R = H` (c = -1); `C = S H`.
    fn sine(&self, c: f64) -> Result<Dual> {
        let arg = self.hm * self.hm + Dual::constant(c);
        if !(arg.v > 0.0) {
            return Err(Error::Degenerate(format!("no radius R with H = {}", self.hm.v)));
        }
        let sign = if c < 0.0 { self.hm.v.signum() } else { 1.0 };
        Ok(sign * arg.sqrt().recip())
    }
}

/// `F_*X` and `F_*Y` with coefficients as duals, so that one more derivative
/// is available.
fn tangent_fields(jet: &BonnetJet, fl: &Fields) -> Result<[[Dual; 4]; 2]> {
    let zero = Dual::constant(0.0);
    let ek = fl.ek;
    if jet.c == 0 {
        let inv_h = fl.hm.recip();
        let inv_h2 = inv_h * inv_h;
        Ok([
            [-(fl.e_inv * fl.h * inv_h), -ek * fl.e_inv * inv_h, -(fl.hm_x * inv_h2), zero],
            [-ek * fl.e_inv * inv_h, fl.e_inv * fl.h * inv_h, -(fl.hm_y * inv_h2), zero],
        ])
    } else {
        let c = jet.c_f();
        let s = fl.sine(c)?;
        let cc = s * fl.hm;
        let r_x = -(s * s * fl.hm_x);
        let r_y = -(s * s * fl.hm_y);
        Ok([
            [-(s * fl.h * fl.e_inv), -ek * s * fl.e_inv, r_x * cc, -c * s * r_x],
            [-ek * s * fl.e_inv, s * fl.h * fl.e_inv, r_y * cc, -c * s * r_y],
        ])
    }
}

fn normal(jet: &BonnetJet, fl: &Fields) -> Result<FrameVector> {
    let (h, ek) = (jet.h, fl.ek);
    let q = jet.h * jet.h + jet.k * jet.k;
    if jet.c == 0 {
        let (hx, hy) = (fl.hm_x.v, fl.hm_y.v);
        Ok(FrameVector::new([ek * hy + h * hx, ek * hx - h * hy, -fl.hm.v * q, 0.0]))
    } else {
        let c = jet.c_f();
        let s = fl.sine(c)?.v;
        let cc = s * fl.hm.v;
        let r_x = -s * s * fl.hm_x.v;
        let r_y = -s * s * fl.hm_y.v;
        Ok(FrameVector::new([
            h * r_x + ek * r_y,
            -(h * r_y - ek * r_x),
            s * q * cc,
            -c * s * s * q,
        ]))
    }
}

pub fn bonnet_frame(jet: &BonnetJet) -> Result<BonnetFrame> {
    jet.validate()?;
    let fl = Fields::of(jet);
    let [tx, ty] = tangent_fields(jet, &fl)?;
    let value = |t: [Dual; 4]| FrameVector::new([t[0].v, t[1].v, t[2].v, t[3].v]);
    Ok(BonnetFrame { f_x: value(tx), f_y: value(ty), n: normal(jet, &fl)?, gram: Gram::of(jet) })
}

/// Ambient derivatives of the frame vectors along `∂_x` (axis 0) and `∂_y`
/// (axis 1): Christoffels of `e^u(dx² + dy²)`, the shape operator
/// `A X = (H + h e^{-u})X + εk e^{-u} Y`, `A Y = εk e^{-u} X + (H - h e^{-u})Y`,
/// and `D f = f_*` for the position vector.
fn connection(jet: &BonnetJet) -> [[[f64; 4]; 4]; 2] {
    let u = &jet.u_jet;
    let (ux, uy) = (u[1], u[2]);
    let e = u[0].exp();
    let (hm, h, c) = (jet.h_jet[0], jet.h, jet.c_f());
    let ek = jet.eps_f() * jet.k;
    let d_x_y = [uy / 2.0, ux / 2.0, ek, 0.0];
    [
        [
            [ux / 2.0, -uy / 2.0, e * hm + h, -c * e],
            d_x_y,
            [-(hm + h / e), -ek / e, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ],
        [
            d_x_y,
            [-ux / 2.0, uy / 2.0, e * hm - h, -c * e],
            [-ek / e, -(hm - h / e), 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ],
    ]
}

fn differentiate(field: &[Dual; 4], axis: usize, conn: &[[[f64; 4]; 4]; 2]) -> FrameVector {
    let mut out = [0.0; 4];
    for (i, a) in field.iter().enumerate() {
        out[i] += a.d(axis);
        for (j, slot) in out.iter_mut().enumerate() {
            *slot += a.v * conn[axis][i][j];
        }
    }
    FrameVector::new(out)
}

/// Second fundamental form of `F` against `N`:
/// `[⟨N, D_X F_*X⟩, ⟨N, D_Y F_*X⟩, ⟨N, D_X F_*Y⟩, ⟨N, D_Y F_*Y⟩]`.
/// The two middle entries agree exactly when the jet satisfies Codazzi.
pub fn second_fundamental_form(jet: &BonnetJet) -> Result<[f64; 4]> {
    jet.validate()?;
    let fl = Fields::of(jet);
    let [tx, ty] = tangent_fields(jet, &fl)?;
    let n = normal(jet, &fl)?;
    let conn = connection(jet);
    let gram = Gram::of(jet);
    let b = |field: &[Dual; 4], axis| n.inner(&differentiate(field, axis, &conn), &gram);
    Ok([b(&tx, 0), b(&tx, 1), b(&ty, 0), b(&ty, 1)])
}
