//! Built-in test surfaces with closed-form jets, plus composable wrappers.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::inversion::{apply_inversion, InversionSpec};
use super::jet::{ImmersionJet, ParamDomain, ParamImmersion};
use crate::error::{check_dim, Error, Result};

fn check_param(domain: &ParamDomain, u: &[f64]) -> Result<()> {
    check_dim(domain.dim(), u.len())
}

/// Affine hyperplane `u ↦ (u, height)`.
#[derive(Clone, Debug)]
pub struct Plane {
    n: usize,
    height: f64,
}

impl Plane {
    pub fn new(n: usize) -> Self {
        Self::at_height(n, 0.0)
    }

    pub fn at_height(n: usize, height: f64) -> Self {
        Self { n, height }
    }
}

impl ParamImmersion for Plane {
    fn domain(&self) -> ParamDomain {
        ParamDomain::cube(self.n, -2.0, 2.0)
    }
    fn ambient_dim(&self) -> usize {
        self.n + 1
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        check_param(&self.domain(), u)?;
        let mut p = u.to_vec();
        p.push(self.height);
        Ok(DVector::from_vec(p))
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        Some(self.evaluate(u).and_then(|point| {
            let n = self.n;
            let first = DMatrix::identity(n + 1, n);
            ImmersionJet::new(u.to_vec(), point, first, vec![DVector::zeros(n + 1); n * n])
        }))
    }
}

/// Graph `u ↦ (u, z(u))` with analytic derivatives supplied by `terms`.
fn graph_jet(u: &[f64], z: f64, grad: &[f64], hess: &DMatrix<f64>) -> Result<ImmersionJet> {
    let n = u.len();
    let mut point = u.to_vec();
    point.push(z);
    let mut first = DMatrix::zeros(n + 1, n);
    for i in 0..n {
        first[(i, i)] = 1.0;
        first[(n, i)] = grad[i];
    }
    let mut second = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut v = DVector::zeros(n + 1);
            v[n] = hess[(i, j)];
            second.push(v);
        }
    }
    ImmersionJet::new(u.to_vec(), DVector::from_vec(point), first, second)
}

/// Upper hemisphere of radius `R` written as a graph over a box.
#[derive(Clone, Debug)]
pub struct SphereGraph {
    radius: f64,
    n: usize,
}

impl SphereGraph {
    pub fn new(radius: f64, n: usize) -> Self {
        Self { radius, n }
    }

    fn height(&self, u: &[f64]) -> Result<f64> {
        let r2: f64 = u.iter().map(|x| x * x).sum();
        let z2 = self.radius * self.radius - r2;
        if z2 <= 0.0 {
            return Err(Error::OutsideDomain(u.to_vec()));
        }
        Ok(z2.sqrt())
    }
}

impl ParamImmersion for SphereGraph {
    fn domain(&self) -> ParamDomain {
        let half = 0.9 * self.radius / (self.n as f64).sqrt();
        ParamDomain::cube(self.n, -half, half)
    }
    fn ambient_dim(&self) -> usize {
        self.n + 1
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        check_param(&self.domain(), u)?;
        let mut p = u.to_vec();
        p.push(self.height(u)?);
        Ok(DVector::from_vec(p))
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        Some((|| {
            check_param(&self.domain(), u)?;
            let z = self.height(u)?;
            let n = self.n;
            let grad: Vec<f64> = u.iter().map(|x| -x / z).collect();
            let hess = DMatrix::from_fn(n, n, |i, j| {
                let d = if i == j { 1.0 } else { 0.0 };
                -d / z - u[i] * u[j] / (z * z * z)
            });
            graph_jet(u, z, &grad, &hess)
        })())
    }
}

/// `(ρ cos θ, ρ sin θ, t_1, …, t_{n-1})`.
#[derive(Clone, Debug)]
pub struct CircularCylinder {
    radius: f64,
    n: usize,
}

impl CircularCylinder {
    pub fn new(radius: f64, n: usize) -> Self {
        Self { radius, n }
    }
}

impl ParamImmersion for CircularCylinder {
    fn domain(&self) -> ParamDomain {
        let mut lower = vec![-2.0; self.n];
        let mut upper = vec![2.0; self.n];
        lower[0] = -3.0;
        upper[0] = 3.0;
        ParamDomain::new(lower, upper)
    }
    fn ambient_dim(&self) -> usize {
        self.n + 1
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        check_param(&self.domain(), u)?;
        let mut p = vec![self.radius * u[0].cos(), self.radius * u[0].sin()];
        p.extend_from_slice(&u[1..]);
        Ok(DVector::from_vec(p))
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        Some(self.evaluate(u).and_then(|point| {
            let n = self.n;
            let (s, c) = u[0].sin_cos();
            let mut first = DMatrix::zeros(n + 1, n);
            first[(0, 0)] = -self.radius * s;
            first[(1, 0)] = self.radius * c;
            for i in 1..n {
                first[(i + 1, i)] = 1.0;
            }
            let mut second = vec![DVector::zeros(n + 1); n * n];
            second[0][0] = -self.radius * c;
            second[0][1] = -self.radius * s;
            ImmersionJet::new(u.to_vec(), point, first, second)
        }))
    }
}

/// Torus of revolution in `R^3` with tube radius `small` about a circle of
/// radius `big`.
#[derive(Clone, Debug)]
pub struct TorusOfRevolution {
    big: f64,
    small: f64,
}

impl TorusOfRevolution {
    pub fn new(big: f64, small: f64) -> Self {
        Self { big, small }
    }
}

impl ParamImmersion for TorusOfRevolution {
    fn domain(&self) -> ParamDomain {
        ParamDomain::cube(2, -3.0, 3.0)
    }
    fn ambient_dim(&self) -> usize {
        3
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        check_param(&self.domain(), u)?;
        let (st, ct) = u[0].sin_cos();
        let (sp, cp) = u[1].sin_cos();
        let w = self.big + self.small * cp;
        Ok(DVector::from_vec(vec![w * ct, w * st, self.small * sp]))
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        Some(self.evaluate(u).and_then(|point| {
            let (st, ct) = u[0].sin_cos();
            let (sp, cp) = u[1].sin_cos();
            let r = self.small;
            let w = self.big + r * cp;
            let first = DMatrix::from_column_slice(3, 2, &[-w * st, w * ct, 0.0, -r * sp * ct, -r * sp * st, r * cp]);
            let tt = DVector::from_vec(vec![-w * ct, -w * st, 0.0]);
            let tp = DVector::from_vec(vec![r * sp * st, -r * sp * ct, 0.0]);
            let pp = DVector::from_vec(vec![-r * cp * ct, -r * cp * st, -r * sp]);
            ImmersionJet::new(u.to_vec(), point, first, vec![tt, tp.clone(), tp, pp])
        }))
    }
}

/// Graph of `z = ½ uᵀQu + Σ c_i u_i³ + Σ a_k sin(ω_k·u + δ_k)`.
#[derive(Clone, Debug)]
pub struct GraphSurface {
    quadratic: DMatrix<f64>,
    cubic: Vec<f64>,
    waves: Vec<(f64, Vec<f64>, f64)>,
    half_width: f64,
}

impl GraphSurface {
    /// `z = ½|u|²`.
    pub fn paraboloid(n: usize) -> Self {
        Self {
            quadratic: DMatrix::identity(n, n),
            cubic: vec![0.0; n],
            waves: Vec::new(),
            half_width: 1.0,
        }
    }

    /// Seeded random graph with quadratic, cubic and oscillating terms.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut quadratic = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-1.0..1.0);
                quadratic[(i, j)] = v;
                quadratic[(j, i)] = v;
            }
        }
        let cubic = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let waves = (0..2)
            .map(|_| {
                let amp = rng.gen_range(0.05..0.15);
                let freq = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
                (amp, freq, rng.gen_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        Self {
            quadratic,
            cubic,
            waves,
            half_width: 0.5,
        }
    }

    fn dim(&self) -> usize {
        self.cubic.len()
    }

    fn height(&self, u: &[f64]) -> (f64, Vec<f64>, DMatrix<f64>) {
        let n = self.dim();
        let x = DVector::from_column_slice(u);
        let qx = &self.quadratic * &x;
        let mut z = 0.5 * x.dot(&qx);
        let mut grad: Vec<f64> = qx.iter().copied().collect();
        let mut hess = self.quadratic.clone();
        for i in 0..n {
            z += self.cubic[i] * u[i].powi(3);
            grad[i] += 3.0 * self.cubic[i] * u[i] * u[i];
            hess[(i, i)] += 6.0 * self.cubic[i] * u[i];
        }
        for (amp, freq, phase) in &self.waves {
            let arg: f64 = freq.iter().zip(u).map(|(w, x)| w * x).sum::<f64>() + phase;
            let (s, c) = arg.sin_cos();
            z += amp * s;
            for i in 0..n {
                grad[i] += amp * c * freq[i];
                for j in 0..n {
                    hess[(i, j)] -= amp * s * freq[i] * freq[j];
                }
            }
        }
        (z, grad, hess)
    }
}

impl ParamImmersion for GraphSurface {
    fn domain(&self) -> ParamDomain {
        ParamDomain::cube(self.dim(), -self.half_width, self.half_width)
    }
    fn ambient_dim(&self) -> usize {
        self.dim() + 1
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        check_param(&self.domain(), u)?;
        let mut p = u.to_vec();
        p.push(self.height(u).0);
        Ok(DVector::from_vec(p))
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        Some(check_param(&self.domain(), u).and_then(|_| {
            let (z, grad, hess) = self.height(u);
            graph_jet(u, z, &grad, &hess)
        }))
    }
}

/// `u ↦ M f(u) + b`.
#[derive(Clone, Debug)]
pub struct LinearImage<S> {
    pub base: S,
    pub matrix: DMatrix<f64>,
    pub offset: DVector<f64>,
}

impl<S: ParamImmersion> LinearImage<S> {
    pub fn homothety(base: S, factor: f64) -> Self {
        let m = base.ambient_dim();
        Self {
            base,
            matrix: DMatrix::identity(m, m) * factor,
            offset: DVector::zeros(m),
        }
    }

    pub fn translation(base: S, offset: DVector<f64>) -> Self {
        let m = base.ambient_dim();
        Self {
            base,
            matrix: DMatrix::identity(m, m),
            offset,
        }
    }
}

impl<S: ParamImmersion> ParamImmersion for LinearImage<S> {
    fn domain(&self) -> ParamDomain {
        self.base.domain()
    }
    fn ambient_dim(&self) -> usize {
        self.matrix.nrows()
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        Ok(&self.matrix * self.base.evaluate(u)? + &self.offset)
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        self.base.analytic_jet(u).map(|jet| {
            let jet = jet?;
            ImmersionJet::new(
                jet.param.clone(),
                &self.matrix * &jet.point + &self.offset,
                &self.matrix * &jet.first,
                jet.second.iter().map(|v| &self.matrix * v).collect(),
            )
        })
    }
}

/// Image of a surface under an inversion.
#[derive(Clone, Debug)]
pub struct InvertedSurface<S> {
    pub base: S,
    pub inversion: InversionSpec,
}

impl<S: ParamImmersion> ParamImmersion for InvertedSurface<S> {
    fn domain(&self) -> ParamDomain {
        self.base.domain()
    }
    fn ambient_dim(&self) -> usize {
        self.base.ambient_dim()
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        self.inversion.apply(&self.base.evaluate(u)?)
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        self.base
            .analytic_jet(u)
            .map(|jet| apply_inversion(&self.inversion, &jet?))
    }
}

/// Hides the analytic jet of the wrapped surface so that derivatives come
/// from finite differences.
#[derive(Clone, Debug)]
pub struct EvaluateOnly<S>(pub S);

impl<S: ParamImmersion> ParamImmersion for EvaluateOnly<S> {
    fn domain(&self) -> ParamDomain {
        self.0.domain()
    }
    fn ambient_dim(&self) -> usize {
        self.0.ambient_dim()
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        self.0.evaluate(u)
    }
}

fn parse_options(rest: &str) -> Result<Vec<(String, f64)>> {
    rest.split(',')
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected key=value, got '{kv}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad number in '{kv}'")))?;
            Ok((k.trim().to_ascii_lowercase(), v))
        })
        .collect()
}

/// Surface registry used by the command line: `plane`, `sphere[:R=..]`,
/// `cylinder[:R=..]`, `torus[:R=..,a=..]`, `paraboloid`, `graph[:seed=..]`.
pub fn builtin_surface(name: &str, n: usize) -> Result<Box<dyn ParamImmersion>> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let (kind, rest) = name.split_once(':').unwrap_or((name, ""));
    let opts = parse_options(rest)?;
    let get = |key: &str, default: f64| {
        opts.iter()
            .find(|(k, _)| k.as_str() == key)
            .map(|&(_, v)| v)
            .unwrap_or(default)
    };
    let positive = |v: f64| {
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::NonPositiveRadius(v))
        }
    };
    match kind {
        "plane" => Ok(Box::new(Plane::new(n))),
        "sphere" => Ok(Box::new(SphereGraph::new(positive(get("r", 1.0))?, n))),
        "cylinder" => Ok(Box::new(CircularCylinder::new(positive(get("r", 1.0))?, n))),
        "torus" => {
            if n != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: n });
            }
            let big = opts.iter().find(|(k, _)| k == "r").map(|&(_, v)| v).unwrap_or(2.0);
            let small = get("a", 0.5);
            Ok(Box::new(TorusOfRevolution::new(positive(big)?, positive(small)?)))
        }
        "paraboloid" => Ok(Box::new(GraphSurface::paraboloid(n))),
        "graph" => Ok(Box::new(GraphSurface::random(n, get("seed", 0.0) as u64))),
        other => Err(Error::InvalidInput(format!("unknown surface '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::{finite_difference_jet, jet_eval, jet_eval_default};

    #[test]
    fn plane_second_derivatives_are_exactly_zero() {
        let jet = jet_eval_default(&Plane::new(3), &[0.3, -0.2, 1.0]).unwrap();
        assert!(jet.second.iter().all(|v| v.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn sphere_graph_analytic_matches_finite_differences() {
        let s = SphereGraph::new(1.0, 2);
        let u = [0.2, -0.3];
        let exact = s.analytic_jet(&u).unwrap().unwrap();
        let fd = finite_difference_jet(&s, &u, 1e-4).unwrap();
        assert!(exact.max_gap(&fd.jet) <= 1e-7, "{}", exact.max_gap(&fd.jet));
    }

    #[test]
    fn analytic_jets_agree_with_finite_differences() {
        let surfaces: Vec<(Box<dyn ParamImmersion>, Vec<f64>)> = vec![
            (Box::new(CircularCylinder::new(0.7, 3)), vec![0.4, 0.1, -0.3]),
            (Box::new(TorusOfRevolution::new(2.0, 0.6)), vec![0.5, -1.2]),
            (Box::new(GraphSurface::random(3, 4)), vec![0.1, 0.2, -0.2]),
            (
                Box::new(InvertedSurface {
                    base: GraphSurface::random(2, 8),
                    inversion: InversionSpec::new(DVector::from_vec(vec![0.1, 0.0, 1.5]), 1.0).unwrap(),
                }),
                vec![0.1, -0.1],
            ),
        ];
        for (s, u) in &surfaces {
            let exact = s.analytic_jet(u).unwrap().unwrap();
            let fd = finite_difference_jet(s.as_ref(), u, 1e-4).unwrap();
            assert!(exact.max_gap(&fd.jet) <= 1e-6, "{}", exact.max_gap(&fd.jet));
        }
    }

    #[test]
    fn boundary_parameters_are_rejected() {
        let s = Plane::new(2);
        assert!(matches!(jet_eval(&s, &[2.0, 0.0], 1e-4), Err(Error::OutsideDomain(_))));
        assert!(matches!(jet_eval(&s, &[1.99999, 0.0], 1e-4), Err(Error::OutsideDomain(_))));
        assert!(matches!(jet_eval(&s, &[0.0, 0.0], 0.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn registry_builds_named_surfaces() {
        for name in ["plane", "sphere:R=2", "cylinder", "paraboloid", "graph:seed=3"] {
            let s = builtin_surface(name, 3).unwrap();
            assert_eq!(s.ambient_dim(), 4);
        }
        assert!(builtin_surface("torus", 2).is_ok());
        assert!(builtin_surface("torus", 3).is_err());
        assert!(builtin_surface("klein", 2).is_err());
        assert!(builtin_surface("sphere:R=-1", 2).is_err());
    }
}
