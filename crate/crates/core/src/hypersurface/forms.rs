use nalgebra::{DMatrix, DVector};

use super::jet::ImmersionJet;
use crate::error::{check_dim, Error, Result};
use crate::lorentz::Orientation;

/// First and second fundamental forms at a point, in the coordinate frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalForms {
    /// `g_ij = <f_i, f_j>`.
    pub metric: DMatrix<f64>,
    pub normal: DVector<f64>,
    /// `h_ij = <f_ij, N>`.
    pub second_form: DMatrix<f64>,
    /// Matrix of the shape operator, `g^{-1} h`.
    pub shape: DMatrix<f64>,
    /// Ascending.
    pub principal_curvatures: Vec<f64>,
    /// Columns are g-orthonormal principal directions matching `principal_curvatures`.
    pub principal_frame: DMatrix<f64>,
}

impl FundamentalForms {
    pub fn dim(&self) -> usize {
        self.metric.nrows()
    }

    /// Mean of the principal curvatures.
    pub fn mean_curvature(&self) -> f64 {
        self.shape.trace() / self.dim() as f64
    }

    /// Same forms for the opposite normal.
    pub fn flipped(&self) -> Self {
        let n = self.dim();
        let mut frame = self.principal_frame.clone();
        for j in 0..n {
            frame.set_column(j, &self.principal_frame.column(n - 1 - j));
        }
        Self {
            metric: self.metric.clone(),
            normal: -&self.normal,
            second_form: -&self.second_form,
            shape: -&self.shape,
            principal_curvatures: self.principal_curvatures.iter().rev().map(|l| -l).collect(),
            principal_frame: frame,
        }
    }

    /// Shape operator expressed in the g-orthonormal frame `E`: `E^{-1} S E`.
    pub fn shape_in_frame(&self, frame: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let inv = frame
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateMetric("singular frame".into()))?;
        Ok(inv * &self.shape * frame)
    }
}

/// Unit normal with `det[f_1, …, f_n, N] > 0`, from the cofactors of the
/// tangent matrix.
pub fn unit_normal(first: &DMatrix<f64>) -> Result<DVector<f64>> {
    let m = first.nrows();
    let n = first.ncols();
    check_dim(n + 1, m)?;
    let mut normal = DVector::zeros(m);
    for k in 0..m {
        let minor = first.clone().remove_row(k);
        let sign = if (k + n).is_multiple_of(2) { 1.0 } else { -1.0 };
        normal[k] = sign * minor.determinant();
    }
    let scale: f64 = first.column_iter().map(|c| c.norm()).product();
    let len = normal.norm();
    if !(len > 1e-12 * scale) || !len.is_finite() {
        return Err(Error::RankDeficient);
    }
    Ok(normal / len)
}

/// Upper-triangular g-orthonormal frame obtained by Gram–Schmidt on the
/// coordinate directions in order.
pub fn orthonormal_frame(metric: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = metric
        .clone()
        .cholesky()
        .ok_or_else(|| Error::DegenerateMetric("metric is not positive definite".into()))?;
    let lt = chol.l().transpose();
    lt.try_inverse()
        .ok_or_else(|| Error::DegenerateMetric("metric is singular".into()))
}

/// Fundamental forms for the normal whose orientation sign is `orientation`
/// relative to `det[f_1, …, f_n, N]`.
pub fn fundamental_forms(jet: &ImmersionJet, orientation: Orientation) -> Result<FundamentalForms> {
    let n = jet.dim();
    let normal = unit_normal(&jet.first)?;
    let metric = {
        let g = jet.first.transpose() * &jet.first;
        (&g + g.transpose()) * 0.5
    };
    let mut second_form = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            second_form[(i, j)] = jet.second(i, j).dot(&normal);
        }
    }
    second_form = (&second_form + second_form.transpose()) * 0.5;

    let chol = metric
        .clone()
        .cholesky()
        .ok_or(Error::RankDeficient)?;
    let shape = chol.solve(&second_form);
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or(Error::RankDeficient)?;
    let sym = &l_inv * &second_form * l_inv.transpose();
    let sym = (&sym + sym.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt_inv = l_inv.transpose();
    let mut principal_frame = DMatrix::zeros(n, n);
    let mut principal_curvatures = Vec::with_capacity(n);
    for (col, &k) in order.iter().enumerate() {
        principal_curvatures.push(eig.eigenvalues[k]);
        principal_frame.set_column(col, &(&lt_inv * eig.eigenvectors.column(k)));
    }
    let forms = FundamentalForms {
        metric,
        normal,
        second_form,
        shape,
        principal_curvatures,
        principal_frame,
    };
    Ok(match orientation {
        Orientation::Positive => forms,
        Orientation::Negative => forms.flipped(),
    })
}

/// Fundamental forms with the normal on the same side as `reference`.
pub fn fundamental_forms_toward(jet: &ImmersionJet, reference: &DVector<f64>) -> Result<FundamentalForms> {
    let forms = fundamental_forms(jet, Orientation::Positive)?;
    Ok(if forms.normal.dot(reference) < 0.0 {
        forms.flipped()
    } else {
        forms
    })
}
