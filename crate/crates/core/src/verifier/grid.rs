use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypersurface::ParamDomain;

/// Tensor-product sample grid given by its coordinate values on each axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: Vec<Vec<f64>>,
}

impl Grid {
    pub fn new(axes: Vec<Vec<f64>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidInput("grid needs at least one axis".into()));
        }
        for axis in &axes {
            if axis.is_empty() || axis.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("grid axes must be finite and non-empty".into()));
            }
            if axis.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::InvalidInput("grid axes must be strictly increasing".into()));
            }
        }
        Ok(Self { axes })
    }

    /// `counts[i]` evenly spaced values on each axis, keeping a relative
    /// `inset` away from the domain boundary.
    pub fn inside(domain: &ParamDomain, counts: &[usize], inset: f64) -> Result<Self> {
        if counts.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: counts.len(),
            });
        }
        let axes = counts
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let (lo, hi) = (domain.lower[i], domain.upper[i]);
                let pad = inset * (hi - lo);
                let (a, b) = (lo + pad, hi - pad);
                match k {
                    0 => Vec::new(),
                    1 => vec![0.5 * (a + b)],
                    _ => (0..k).map(|j| a + (b - a) * j as f64 / (k - 1) as f64).collect(),
                }
            })
            .collect();
        Self::new(axes)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            let k = self.axes[a].len();
            idx[a] = flat % k;
            flat /= k;
        }
        idx
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.axes)
            .fold(0, |acc, (&i, axis)| acc * axis.len() + i)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .zip(&self.axes)
            .map(|(&i, axis)| axis[i])
            .collect()
    }

    /// Points in row-major order (last axis fastest).
    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Pairs of neighbouring points along each axis, with the axis.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for flat in 0..self.len() {
            let idx = self.multi_index(flat);
            for a in 0..self.dim() {
                if idx[a] + 1 < self.axes[a].len() {
                    let mut next = idx.clone();
                    next[a] += 1;
                    out.push((flat, self.flat_index(&next), a));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_and_edges_of_a_small_grid() {
        let g = Grid::new(vec![vec![0.0, 1.0, 2.0], vec![5.0, 6.0]]).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.point(3), vec![1.0, 6.0]);
        // 3 edges along the short axis, 4 along the long one
        assert_eq!(g.edges().len(), 7);
        for (i, j, a) in g.edges() {
            let (p, q) = (g.point(i), g.point(j));
            assert!(q[a] > p[a]);
            assert!((0..2).filter(|&b| b != a).all(|b| p[b] == q[b]));
        }
    }

    #[test]
    fn inside_respects_the_inset() {
        let d = ParamDomain::new(vec![0.0, -1.0], vec![1.0, 1.0]);
        let g = Grid::inside(&d, &[5, 1], 0.1).unwrap();
        for (x, e) in g.axes[0].iter().zip([0.1, 0.3, 0.5, 0.7, 0.9]) {
            assert!((x - e).abs() < 1e-15);
        }
        assert_eq!(g.axes[1], vec![0.0]);
        assert!(Grid::new(vec![vec![1.0, 1.0]]).is_err());
    }
}
