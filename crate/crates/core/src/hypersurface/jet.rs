use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Position together with first and second parameter derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct ImmersionJet {
    pub param: Vec<f64>,
    pub point: DVector<f64>,
    /// Column `i` is `∂f/∂u_i`.
    pub first: DMatrix<f64>,
    /// `∂²f/∂u_i∂u_j` stored at index `i * n + j`.
    pub second: Vec<DVector<f64>>,
}

impl ImmersionJet {
    /// Builds a jet and checks the array shapes.
    pub fn new(
        param: Vec<f64>,
        point: DVector<f64>,
        first: DMatrix<f64>,
        second: Vec<DVector<f64>>,
    ) -> Result<Self> {
        let n = param.len();
        check_dim(n, first.ncols())?;
        check_dim(point.len(), first.nrows())?;
        check_dim(n * n, second.len())?;
        for v in &second {
            check_dim(point.len(), v.len())?;
        }
        Ok(Self {
            param,
            point,
            first,
            second,
        })
    }

    /// Number of parameters.
    pub fn dim(&self) -> usize {
        self.first.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    pub fn second(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.second[i * self.dim() + j]
    }

    /// Largest componentwise difference with another jet of the same shape.
    pub fn max_gap(&self, other: &ImmersionJet) -> f64 {
        let mut gap = (&self.point - &other.point).amax();
        gap = gap.max((&self.first - &other.first).amax());
        for (a, b) in self.second.iter().zip(&other.second) {
            gap = gap.max((a - b).amax());
        }
        gap
    }
}

/// Axis-aligned parameter box.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ParamDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        Self { lower, upper }
    }

    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        Self::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    /// Distance to the nearest face, negative outside.
    pub fn margin(&self, u: &[f64]) -> f64 {
        u.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(x, (lo, hi))| (x - lo).min(hi - x))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(a, b)| 0.5 * (a + b)).collect()
    }
}

/// A parameterized hypersurface `f: U ⊂ R^n → R^{n+1}`.
pub trait ParamImmersion: Send + Sync {
    fn domain(&self) -> ParamDomain;

    fn ambient_dim(&self) -> usize;

    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>>;

    /// Exact jet when the surface knows its derivatives.
    fn analytic_jet(&self, _u: &[f64]) -> Option<Result<ImmersionJet>> {
        None
    }

    fn param_dim(&self) -> usize {
        self.domain().dim()
    }
}

impl<T: ParamImmersion + ?Sized> ParamImmersion for Box<T> {
    fn domain(&self) -> ParamDomain {
        (**self).domain()
    }
    fn ambient_dim(&self) -> usize {
        (**self).ambient_dim()
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        (**self).evaluate(u)
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        (**self).analytic_jet(u)
    }
}

impl<T: ParamImmersion + ?Sized> ParamImmersion for std::sync::Arc<T> {
    fn domain(&self) -> ParamDomain {
        (**self).domain()
    }
    fn ambient_dim(&self) -> usize {
        (**self).ambient_dim()
    }
    fn evaluate(&self, u: &[f64]) -> Result<DVector<f64>> {
        (**self).evaluate(u)
    }
    fn analytic_jet(&self, u: &[f64]) -> Option<Result<ImmersionJet>> {
        (**self).analytic_jet(u)
    }
}

fn check_inside(surface: &(impl ParamImmersion + ?Sized), u: &[f64], margin: f64) -> Result<()> {
    let domain = surface.domain();
    check_dim(domain.dim(), u.len())?;
    if !(domain.margin(u) >= margin) || domain.margin(u) <= 0.0 {
        return Err(Error::OutsideDomain(u.to_vec()));
    }
    Ok(())
}

/// Jet at `u`: the analytic one when available, otherwise central
/// differences with the given step.
pub fn jet_eval(surface: &(impl ParamImmersion + ?Sized), u: &[f64], step: f64) -> Result<ImmersionJet> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    check_inside(surface, u, 2.0 * step)?;
    match surface.analytic_jet(u) {
        Some(jet) => jet,
        None => fd_jet(surface, u, step),
    }
}

/// [`jet_eval`] with [`DEFAULT_FD_STEP`].
pub fn jet_eval_default(surface: &(impl ParamImmersion + ?Sized), u: &[f64]) -> Result<ImmersionJet> {
    jet_eval(surface, u, DEFAULT_FD_STEP)
}

/// Central-difference jet together with the gap to the jet at twice the step.
#[derive(Clone, Debug)]
pub struct JetEstimate {
    pub jet: ImmersionJet,
    pub richardson_gap: f64,
}

/// Second-order central differences, ignoring any analytic jet.
pub fn finite_difference_jet(surface: &(impl ParamImmersion + ?Sized), u: &[f64], step: f64) -> Result<JetEstimate> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    check_inside(surface, u, 2.0 * step)?;
    let fine = fd_jet(surface, u, step)?;
    let coarse = fd_jet(surface, u, 2.0 * step)?;
    let richardson_gap = fine.max_gap(&coarse);
    Ok(JetEstimate {
        jet: fine,
        richardson_gap,
    })
}

fn fd_jet(surface: &(impl ParamImmersion + ?Sized), u: &[f64], h: f64) -> Result<ImmersionJet> {
    let n = u.len();
    let at = |offsets: &[(usize, f64)]| -> Result<DVector<f64>> {
        let mut v = u.to_vec();
        for &(i, d) in offsets {
            v[i] += d;
        }
        surface.evaluate(&v)
    };
    let point = surface.evaluate(u)?;
    let m = point.len();
    let mut first = DMatrix::zeros(m, n);
    let mut second = vec![DVector::zeros(m); n * n];
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for i in 0..n {
        plus.push(at(&[(i, h)])?);
        minus.push(at(&[(i, -h)])?);
        first.set_column(i, &((&plus[i] - &minus[i]) / (2.0 * h)));
    }
    for i in 0..n {
        second[i * n + i] = (&plus[i] - &point * 2.0 + &minus[i]) / (h * h);
        for j in (i + 1)..n {
            let pp = at(&[(i, h), (j, h)])?;
            let pm = at(&[(i, h), (j, -h)])?;
            let mp = at(&[(i, -h), (j, h)])?;
            let mm = at(&[(i, -h), (j, -h)])?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            second[i * n + j] = v.clone();
            second[j * n + i] = v;
        }
    }
    ImmersionJet::new(u.to_vec(), point, first, second)
}
