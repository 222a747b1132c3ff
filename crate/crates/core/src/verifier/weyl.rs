use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CheckReport, Grid};
use crate::error::{check_dim, Error, Result};

const DIM: usize = 4;
type Tensor4 = [[[[f64; DIM]; DIM]; DIM]; DIM];

/// Diagonal of the metric of `Q²_c × S²` in stereographic charts of both
/// factors: `e^{2ψ}(dx² + dy²) + e^{2χ}(dz² + dw²)`.
fn metric_diag(c: f64, p: &[f64; DIM]) -> [f64; DIM] {
    let a = 1.0 + 0.25 * c * (p[0] * p[0] + p[1] * p[1]);
    let b = 1.0 + 0.25 * (p[2] * p[2] + p[3] * p[3]);
    let ga = 1.0 / (a * a);
    let gb = 1.0 / (b * b);
    [ga, ga, gb, gb]
}

/// Sixth-order central difference of `f` along coordinate `k`.
fn derivative<const M: usize>(f: impl Fn(&[f64; DIM]) -> [f64; M], p: &[f64; DIM], k: usize, h: f64) -> [f64; M] {
    const W: [(f64, f64); 6] = [
        (-3.0, -1.0),
        (-2.0, 9.0),
        (-1.0, -45.0),
        (1.0, 45.0),
        (2.0, -9.0),
        (3.0, 1.0),
    ];
    let mut out = [0.0; M];
    for (offset, w) in W {
        let mut q = *p;
        q[k] += offset * h;
        let v = f(&q);
        for i in 0..M {
            out[i] += w * v[i];
        }
    }
    out.map(|x| x / (60.0 * h))
}

const METRIC_STEP: f64 = 1e-3;
const CHRISTOFFEL_STEP: f64 = 1e-2;

/// Christoffel symbols `Γ^l_{ij}` flattened as `l*16 + i*4 + j`.
fn christoffel(c: f64, p: &[f64; DIM]) -> [f64; 64] {
    let g = metric_diag(c, p);
    let dg: Vec<[f64; DIM]> = (0..DIM)
        .map(|k| derivative(|q| metric_diag(c, q), p, k, METRIC_STEP))
        .collect();
    // dg[k][i] = ∂_k g_ii
    let dmetric = |k: usize, i: usize, j: usize| if i == j { dg[k][i] } else { 0.0 };
    let mut out = [0.0; 64];
    for l in 0..DIM {
        for i in 0..DIM {
            for j in 0..DIM {
                out[l * 16 + i * 4 + j] = 0.5 / g[l] * (dmetric(i, l, j) + dmetric(j, l, i) - dmetric(l, i, j));
            }
        }
    }
    out
}

/// Weyl tensor of `Q²_c × S²` at a chart point, in the orthonormal frame
/// `e_i = ∂_i/|∂_i|`, from finite-difference curvature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylTensor {
    pub c: f64,
    pub point: [f64; DIM],
    /// `components[i][j][k][l] = <W(e_i, e_j) e_k, e_l>`.
    pub components: Tensor4,
}

impl WeylTensor {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.components[i][j][k][l]
    }

    /// `<W(X, Y) Y, X>` for frame coefficient vectors.
    pub fn plane(&self, x: &[f64; DIM], y: &[f64; DIM]) -> f64 {
        let mut total = 0.0;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        total += self.components[i][j][k][l] * x[i] * y[j] * y[k] * x[l];
                    }
                }
            }
        }
        total
    }
}

/// Riemann tensor with `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`,
/// so `<R(X,Y)Y,X>` is the sectional curvature; then
/// `W = R − P ⊙ g` with the Schouten tensor `P`.
pub fn weyl_tensor(c: f64, point: [f64; DIM]) -> Result<WeylTensor> {
    if !c.is_finite() {
        return Err(Error::InvalidInput("curvature must be finite".into()));
    }
    let a = 1.0 + 0.25 * c * (point[0] * point[0] + point[1] * point[1]);
    if !(a > 0.1) {
        return Err(Error::OutsideDomain(point.to_vec()));
    }
    let gamma = christoffel(c, &point);
    let dgamma: Vec<[f64; 64]> = (0..DIM)
        .map(|k| derivative(|q| christoffel(c, q), &point, k, CHRISTOFFEL_STEP))
        .collect();
    let g = metric_diag(c, &point);
    let gm = |l: usize, i: usize, j: usize| gamma[l * 16 + i * 4 + j];

    // coordinate components R(i,j,k,l) = <R(∂_i,∂_j)∂_k, ∂_l>
    let mut riem: Tensor4 = [[[[0.0; DIM]; DIM]; DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                for l in 0..DIM {
                    // R^l_{kij}
                    let mut r = dgamma[i][l * 16 + j * 4 + k] - dgamma[j][l * 16 + i * 4 + k];
                    for m in 0..DIM {
                        r += gm(l, i, m) * gm(m, j, k) - gm(l, j, m) * gm(m, i, k);
                    }
                    riem[i][j][k][l] = g[l] * r;
                }
            }
        }
    }
    // to the orthonormal frame
    let scale: Vec<f64> = g.iter().map(|x| 1.0 / x.sqrt()).collect();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in 0..DIM {
                for l in 0..DIM {
                    riem[i][j][k][l] *= scale[i] * scale[j] * scale[k] * scale[l];
                }
            }
        }
    }
    // Ric(Y,Z) = Σ_i <R(e_i,Y)Z, e_i>
    let mut ric = [[0.0; DIM]; DIM];
    for j in 0..DIM {
        for k in 0..DIM {
            ric[j][k] = (0..DIM).map(|i| riem[i][j][k][i]).sum();
        }
    }
    let scal: f64 = (0..DIM).map(|i| ric[i][i]).sum();
    let n = DIM as f64;
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let schouten = |i: usize, j: usize| (ric[i][j] - scal / (2.0 * (n - 1.0)) * delta(i, j)) / (n - 2.0);
    let mut w: Tensor4 = [[[[0.0; DIM]; DIM]; DIM]; DIM];
    for x in 0..DIM {
        for y in 0..DIM {
            for z in 0..DIM {
                for t in 0..DIM {
                    let pg = schouten(y, z) * delta(x, t) + schouten(x, t) * delta(y, z)
                        - schouten(x, z) * delta(y, t)
                        - schouten(y, t) * delta(x, z);
                    w[x][y][z][t] = riem[x][y][z][t] - pg;
                }
            }
        }
    }
    Ok(WeylTensor {
        c,
        point,
        components: w,
    })
}

/// Results of the Weyl tensor checks at every grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub c: f64,
    /// `<W(e1,e2)e2,e1>` at the first grid point.
    pub w1221: f64,
    /// `<W(e1,e3)e3,e1>` at the first grid point.
    pub w1331: f64,
    /// The eight components `±(1+c)/3` of the tangent planes of the factors.
    pub components: CheckReport,
    /// Every other component compared with zero.
    pub mixed: CheckReport,
    /// `<W(X,Y)Y,X>` against `(1+c)/3 (p12² + p34²)`.
    pub plane_printed: CheckReport,
    /// `<W(X,Y)Y,X>` against the trace-free form `(1+c)/6 (3(p12² + p34²) − 1)`.
    pub plane_trace_free: CheckReport,
}

impl WeylReport {
    pub fn checks(&self) -> Vec<CheckReport> {
        vec![
            self.components.clone(),
            self.mixed.clone(),
            self.plane_printed.clone(),
            self.plane_trace_free.clone(),
        ]
    }

    pub fn pass(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }
}

fn random_orthonormal_pair(rng: &mut ChaCha8Rng) -> ([f64; DIM], [f64; DIM]) {
    loop {
        let x: [f64; DIM] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let y: [f64; DIM] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let nx = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        if nx < 0.1 {
            continue;
        }
        let x = x.map(|a| a / nx);
        let d: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let y: [f64; DIM] = std::array::from_fn(|i| y[i] - d * x[i]);
        let ny = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        if ny < 0.1 {
            continue;
        }
        return (x, y.map(|a| a / ny));
    }
}

const COMPONENT_TOL: f64 = 1e-6;
const PLANE_TOL: f64 = 1e-8;

/// Computes the Weyl tensor of `Q²_c × S²` at every point of a 4-axis chart
/// grid and compares it with the closed forms on `planes` random 2-planes.
/// Sample points `{-0.3, 0.1, 0.4}⁴` in the stereographic charts.
pub fn default_weyl_grid() -> Grid {
    Grid::new(vec![vec![-0.3, 0.1, 0.4]; DIM]).expect("static grid is valid")
}

pub fn weyl_product_check(c: f64, grid: &Grid, planes: usize, seed: u64) -> Result<WeylReport> {
    check_dim(DIM, grid.dim())?;
    if !(c >= -1.0) {
        return Err(Error::InvalidInput(format!("the product needs c >= -1, got {c}")));
    }
    let third = (1.0 + c) / 3.0;
    let listed: [((usize, usize, usize, usize), f64); 8] = [
        ((0, 1, 1, 0), third),
        ((1, 0, 0, 1), third),
        ((2, 3, 3, 2), third),
        ((3, 2, 2, 3), third),
        ((0, 1, 0, 1), -third),
        ((1, 0, 1, 0), -third),
        ((2, 3, 2, 3), -third),
        ((3, 2, 3, 2), -third),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frames: Vec<_> = (0..planes).map(|_| random_orthonormal_pair(&mut rng)).collect();
    let (mut comp, mut mixed, mut printed, mut trace_free) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let mut first: Option<WeylTensor> = None;
    for p in grid.points() {
        let w = weyl_tensor(c, [p[0], p[1], p[2], p[3]])?;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        let v = w.get(i, j, k, l);
                        match listed.iter().find(|(idx, _)| *idx == (i, j, k, l)) {
                            Some((_, expect)) => comp = comp.max((v - expect).abs()),
                            None => mixed = mixed.max(v.abs()),
                        }
                    }
                }
            }
        }
        for (x, y) in &frames {
            let p12 = x[0] * y[1] - x[1] * y[0];
            let p34 = x[2] * y[3] - x[3] * y[2];
            let q = p12 * p12 + p34 * p34;
            let value = w.plane(x, y);
            printed = printed.max((value - third * q).abs());
            trace_free = trace_free.max((value - (1.0 + c) / 6.0 * (3.0 * q - 1.0)).abs());
        }
        first.get_or_insert(w);
    }
    let first = first.ok_or_else(|| Error::InvalidInput("empty grid".into()))?;
    let n = grid.len();
    Ok(WeylReport {
        c,
        w1221: first.get(0, 1, 1, 0),
        w1331: first.get(0, 2, 2, 0),
        components: CheckReport::new("weyl_components", comp, COMPONENT_TOL, n),
        mixed: CheckReport::new("weyl_mixed_components", mixed, COMPONENT_TOL, n),
        plane_printed: CheckReport::new("weyl_plane_printed", printed, PLANE_TOL, n * planes),
        plane_trace_free: CheckReport::new("weyl_plane_trace_free", trace_free, PLANE_TOL, n * planes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sectional_curvatures_of_the_factors() {
        // W + P⊙g recovers R, whose factor planes have curvature c and 1
        for c in [-0.5, 0.0, 1.0] {
            let w = weyl_tensor(c, [0.2, -0.1, 0.3, 0.4]).unwrap();
            assert!((w.get(0, 1, 1, 0) - (1.0 + c) / 3.0).abs() < 1e-8);
            assert!((w.get(0, 2, 2, 0) + (1.0 + c) / 6.0).abs() < 1e-8);
        }
    }

    #[test]
    fn weyl_tensor_is_trace_free_and_antisymmetric() {
        let w = weyl_tensor(0.3, [0.1, 0.2, -0.3, 0.2]).unwrap();
        for j in 0..DIM {
            for k in 0..DIM {
                let tr: f64 = (0..DIM).map(|i| w.get(i, j, k, i)).sum();
                assert!(tr.abs() < 1e-8);
                for i in 0..DIM {
                    for l in 0..DIM {
                        assert!((w.get(i, j, k, l) + w.get(j, i, k, l)).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn conformally_flat_limit_vanishes() {
        let w = weyl_tensor(-1.0, [0.3, 0.1, 0.2, -0.2]).unwrap();
        let max = w.components.iter().flatten().flatten().flatten().fold(0.0_f64, |a, b| a.max(b.abs()));
        assert!(max < 1e-8, "{max}");
    }
}
