//! Small floating-point helpers shared by the kernels.

use nalgebra::DMatrix;

/// Error-free product: `a * b = p + e` exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Error-free sum: `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Sum of products `Σ w_i x_i y_i` with compensated accumulation.
pub fn compensated_weighted_dot(terms: &[(f64, f64, f64)]) -> f64 {
    let mut sum = 0.0;
    let mut err = 0.0;
    for &(w, x, y) in terms {
        let (p, ep) = two_prod(x, y);
        let (wp, ewp) = two_prod(w, p);
        let (s, es) = two_sum(sum, wp);
        sum = s;
        err += es + ewp + w * ep;
    }
    sum + err
}

/// Double-double accumulator: the represented value is `hi + lo`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Compensated {
    pub hi: f64,
    pub lo: f64,
}

impl Compensated {
    pub fn new(value: f64) -> Self {
        Self { hi: value, lo: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = two_sum(s, self.lo + e);
        self.hi = hi;
        self.lo = lo;
    }
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, &s| acc.max(s))
}

/// Six-point Gauss–Legendre rule on [0, 1].
pub fn gauss_legendre_unit() -> [(f64, f64); 6] {
    const X: [f64; 3] = [
        0.238_619_186_083_196_9,
        0.661_209_386_466_264_5,
        0.932_469_514_203_152,
    ];
    const W: [f64; 3] = [
        0.467_913_934_572_691,
        0.360_761_573_048_138_6,
        0.171_324_492_379_170_3,
    ];
    let mut out = [(0.0, 0.0); 6];
    for i in 0..3 {
        out[2 * i] = (0.5 - 0.5 * X[i], 0.5 * W[i]);
        out[2 * i + 1] = (0.5 + 0.5 * X[i], 0.5 * W[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_quintic_exactly() {
        let rule = gauss_legendre_unit();
        let integral: f64 = rule.iter().map(|&(x, w)| w * x.powi(5)).sum();
        assert!((integral - 1.0 / 6.0).abs() < 1e-15);
        let integral: f64 = rule.iter().map(|&(x, w)| w * x.powi(11)).sum();
        assert!((integral - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn compensated_dot_recovers_cancellation() {
        let big = 1e8_f64;
        let terms = [(1.0, big + 1.0, big + 1.0), (-1.0, big, big), (-1.0, 2.0 * big, 1.0)];
        assert_eq!(compensated_weighted_dot(&terms), 1.0);
    }

    #[test]
    fn compensated_sum_keeps_small_increments() {
        let mut k = Compensated::new(1.0);
        for _ in 0..1_000_000 {
            k.add(1e-16);
        }
        assert!((k.hi - (1.0 + 1e-10)).abs() <= f64::EPSILON);
        let mut plain = 1.0;
        for _ in 0..1_000_000 {
            plain += 1e-16;
        }
        assert_eq!(plain, 1.0);
    }
}
