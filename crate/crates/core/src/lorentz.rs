//! Light-cone model of Euclidean space inside Minkowski space, and the
//! identification of oriented hyperspheres with unit spacelike vectors.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::hypersurface::FundamentalForms;

/// Tolerance on the defining identities of an embedding.
const EMBEDDING_TOL: f64 = 1e-10;
/// Accepted deviation of `<v,v>` from one for a sphere vector.
const UNIT_TOL: f64 = 1e-9;
/// Below this `|<v,w>|` the vector describes a hyperplane.
const HYPERPLANE_TOL: f64 = 1e-12;

/// Vector of the Minkowski space with signature (+,...,+,-).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LorentzVector(pub Vec<f64>);

impl LorentzVector {
    pub fn new(components: Vec<f64>) -> Self {
        Self(components)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// Standard basis vector `e_i` (zero based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> Result<f64> {
        minkowski_dot(self, other)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| s * x).collect())
    }

    /// `self + s * other`; panics on dimension mismatch.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }
}

/// `<x,y> = Σ_{i<m} x_i y_i - x_m y_m` where `m` is the last index.
pub fn minkowski_dot(x: &LorentzVector, y: &LorentzVector) -> Result<f64> {
    check_dim(x.dim(), y.dim())?;
    let m = x.dim();
    if m == 0 {
        return Ok(0.0);
    }
    let space: f64 = x.0[..m - 1].iter().zip(&y.0[..m - 1]).map(|(a, b)| a * b).sum();
    Ok(space - x.0[m - 1] * y.0[m - 1])
}

/// Choice of unit normal for a sphere or hypersurface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Positive => 1.0,
            Orientation::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }

    pub fn from_sign(x: f64) -> Self {
        if x < 0.0 {
            Orientation::Negative
        } else {
            Orientation::Positive
        }
    }
}

impl From<Orientation> for i8 {
    fn from(o: Orientation) -> i8 {
        match o {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

impl TryFrom<i8> for Orientation {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Orientation::Positive),
            -1 => Ok(Orientation::Negative),
            other => Err(format!("orientation must be 1 or -1, got {other}")),
        }
    }
}

/// Isometric model `Ψ(x) = p0 + Dx - ½|x|² w` of Euclidean space
/// `R^{n+1}` on the light cone of `L^{n+3}`.
#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanEmbedding {
    p0: LorentzVector,
    w: LorentzVector,
    /// Columns are the images `D e_i`.
    d: DMatrix<f64>,
}

impl EuclideanEmbedding {
    /// Default embedding: `p0 = (0,…,0,½,½)`, `w = (0,…,0,1,-1)`, `D` the
    /// inclusion of the first `euclidean_dim` coordinates.
    pub fn canonical(euclidean_dim: usize) -> Self {
        let m = euclidean_dim + 2;
        let mut p0 = vec![0.0; m];
        p0[m - 2] = 0.5;
        p0[m - 1] = 0.5;
        let mut w = vec![0.0; m];
        w[m - 2] = 1.0;
        w[m - 1] = -1.0;
        let mut d = DMatrix::zeros(m, euclidean_dim);
        for i in 0..euclidean_dim {
            d[(i, i)] = 1.0;
        }
        Self {
            p0: LorentzVector(p0),
            w: LorentzVector(w),
            d,
        }
    }

    /// Validates the null, normalisation and isometry identities.
    pub fn new(p0: LorentzVector, w: LorentzVector, d: DMatrix<f64>) -> Result<Self> {
        let m = p0.dim();
        check_dim(m, w.dim())?;
        check_dim(m, d.nrows())?;
        check_dim(m - 2, d.ncols())?;
        let e = Self { p0, w, d };
        let fail = |what: &str, got: f64| {
            Err(Error::InvalidInput(format!("embedding violates {what} (got {got:e})")))
        };
        let pp = minkowski_dot(&e.p0, &e.p0)?;
        if pp.abs() > EMBEDDING_TOL {
            return fail("<p0,p0> = 0", pp);
        }
        let ww = minkowski_dot(&e.w, &e.w)?;
        if ww.abs() > EMBEDDING_TOL {
            return fail("<w,w> = 0", ww);
        }
        let pw = minkowski_dot(&e.p0, &e.w)?;
        if (pw - 1.0).abs() > EMBEDDING_TOL {
            return fail("<p0,w> = 1", pw);
        }
        for i in 0..e.d.ncols() {
            let di = e.column(i);
            for j in 0..e.d.ncols() {
                let g = minkowski_dot(&di, &e.column(j))?;
                let expect = if i == j { 1.0 } else { 0.0 };
                if (g - expect).abs() > EMBEDDING_TOL {
                    return fail("<De_i,De_j> = δ_ij", g);
                }
            }
            for (name, v) in [("<De_i,p0> = 0", &e.p0), ("<De_i,w> = 0", &e.w)] {
                let x = minkowski_dot(&di, v)?;
                if x.abs() > EMBEDDING_TOL {
                    return fail(name, x);
                }
            }
        }
        Ok(e)
    }

    pub fn euclidean_dim(&self) -> usize {
        self.d.ncols()
    }

    pub fn p0(&self) -> &LorentzVector {
        &self.p0
    }

    pub fn w(&self) -> &LorentzVector {
        &self.w
    }

    fn column(&self, i: usize) -> LorentzVector {
        LorentzVector(self.d.column(i).iter().copied().collect())
    }

    fn apply_d(&self, x: &[f64]) -> Vec<f64> {
        let v = &self.d * DVector::from_column_slice(x);
        v.iter().copied().collect()
    }

    /// `Ψ(x)`.
    pub fn embed_point(&self, x: &[f64]) -> Result<LorentzVector> {
        check_dim(self.euclidean_dim(), x.len())?;
        let sq: f64 = x.iter().map(|a| a * a).sum();
        let dx = LorentzVector(self.apply_d(x));
        Ok(self.p0.axpy(1.0, &dx).axpy(-0.5 * sq, &self.w))
    }

    /// Differential `Ψ_*(x) v = Dv - (x·v) w`.
    pub fn push_forward(&self, x: &[f64], v: &[f64]) -> Result<LorentzVector> {
        check_dim(self.euclidean_dim(), x.len())?;
        check_dim(self.euclidean_dim(), v.len())?;
        let xv: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
        Ok(LorentzVector(self.apply_d(v)).axpy(-xv, &self.w))
    }

    /// Euclidean coordinates `<u, D e_i>` of a Lorentz vector.
    pub fn euclidean_part(&self, u: &LorentzVector) -> Result<Vec<f64>> {
        check_dim(self.p0.dim(), u.dim())?;
        (0..self.euclidean_dim())
            .map(|i| minkowski_dot(u, &self.column(i)))
            .collect()
    }

    /// Point of the sphere congruence `s = α Ψ(f) + Ψ_*(f) N` attached to a
    /// hypersurface point with unit normal `N` and signed inverse radius `α`.
    pub fn congruence_point(&self, point: &[f64], normal: &[f64], alpha: f64) -> Result<LorentzVector> {
        Ok(self
            .embed_point(point)?
            .scaled(alpha)
            .axpy(1.0, &self.push_forward(point, normal)?))
    }
}

/// Oriented round sphere of `R^{n+1}`.
///
/// `Positive` orientation means the unit normal points towards the center,
/// so the sphere has principal curvatures `+1/radius`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereElement {
    pub center: Vec<f64>,
    pub radius: f64,
    pub orientation: Orientation,
}

impl SphereElement {
    pub fn new(center: Vec<f64>, radius: f64, orientation: Orientation) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonPositiveRadius(radius));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("sphere center is not finite".into()));
        }
        Ok(Self {
            center,
            radius,
            orientation,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Unit normal at `point` selected by the orientation.
    pub fn normal_at(&self, point: &[f64]) -> Vec<f64> {
        let s = self.orientation.sign() / self.radius;
        self.center.iter().zip(point).map(|(c, p)| s * (c - p)).collect()
    }

    pub fn flipped(&self) -> Self {
        Self {
            orientation: self.orientation.flipped(),
            ..self.clone()
        }
    }
}

/// A sphere together with its representative in the de Sitter space.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzSphere {
    pub sphere: SphereElement,
    pub lorentz_rep: LorentzVector,
}

/// Represents an oriented sphere as `v = (1/R) Ψ(f) + Ψ_*(f) N` for any
/// point `f` of the sphere, with `R` signed by the orientation.
pub fn sphere_to_lorentz(
    e: &EuclideanEmbedding,
    center: &[f64],
    radius: f64,
    orientation: Orientation,
) -> Result<LorentzSphere> {
    check_dim(e.euclidean_dim(), center.len())?;
    let sphere = SphereElement::new(center.to_vec(), radius, orientation)?;
    let mut f = center.to_vec();
    f[0] += radius;
    let normal = sphere.normal_at(&f);
    let alpha = orientation.sign() / radius;
    let lorentz_rep = e.congruence_point(&f, &normal, alpha)?;
    Ok(LorentzSphere { sphere, lorentz_rep })
}

/// Inverse of [`sphere_to_lorentz`].
pub fn lorentz_to_sphere(e: &EuclideanEmbedding, v: &LorentzVector) -> Result<LorentzSphere> {
    check_dim(e.p0.dim(), v.dim())?;
    let vv = minkowski_dot(v, v)?;
    if (vv - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidInput(format!(
            "sphere vector must have unit Lorentz length, got <v,v> = {vv}"
        )));
    }
    let vw = minkowski_dot(v, &e.w)?;
    if vw.abs() <= HYPERPLANE_TOL {
        return Err(Error::HyperplaneElement(vw));
    }
    let signed_radius = 1.0 / vw;
    let center = e.euclidean_part(&v.scaled(signed_radius))?;
    let sphere = SphereElement::new(center, signed_radius.abs(), Orientation::from_sign(vw))?;
    Ok(LorentzSphere {
        sphere,
        lorentz_rep: v.clone(),
    })
}

/// Metric `<(A - α)X, (A - α)Y>` induced by the sphere congruence of
/// inverse radius `α`.
pub fn congruence_induced_metric(forms: &FundamentalForms, alpha: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = forms.metric.nrows();
    check_dim(n, x.len())?;
    check_dim(n, y.len())?;
    let b = &forms.shape - DMatrix::identity(n, n) * alpha;
    let bx = &b * DVector::from_column_slice(x);
    let by = &b * DVector::from_column_slice(y);
    Ok((bx.transpose() * &forms.metric * by)[(0, 0)])
}

/// True when `α` stays further than `tol` from every principal curvature.
pub fn congruence_regularity(forms: &FundamentalForms, alpha: f64, tol: f64) -> bool {
    forms
        .principal_curvatures
        .iter()
        .all(|l| (l - alpha).abs() > tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::FundamentalForms;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag_forms(curv: &[f64]) -> FundamentalForms {
        let n = curv.len();
        let shape = DMatrix::from_diagonal(&DVector::from_column_slice(curv));
        FundamentalForms {
            metric: DMatrix::identity(n, n),
            normal: DVector::zeros(n + 1),
            second_form: shape.clone(),
            shape,
            principal_curvatures: curv.to_vec(),
            principal_frame: DMatrix::identity(n, n),
        }
    }

    #[test]
    fn signature() {
        let e1 = LorentzVector::basis(5, 0);
        let e5 = LorentzVector::basis(5, 4);
        assert_eq!(minkowski_dot(&e1, &e1).unwrap(), 1.0);
        assert_eq!(minkowski_dot(&e5, &e5).unwrap(), -1.0);
        let null = LorentzVector(vec![1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(minkowski_dot(&null, &null).unwrap(), 0.0);
        assert!(matches!(
            minkowski_dot(&e1, &LorentzVector::zeros(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn canonical_embedding_is_valid() {
        for dim in 1..6 {
            let e = EuclideanEmbedding::canonical(dim);
            EuclideanEmbedding::new(e.p0.clone(), e.w.clone(), e.d.clone()).unwrap();
        }
    }

    #[test]
    fn rejects_embedding_with_wrong_normalisation() {
        let e = EuclideanEmbedding::canonical(3);
        let err = EuclideanEmbedding::new(e.p0.clone(), e.w.scaled(-1.0), e.d.clone()).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn origin_maps_to_base_point() {
        let e = EuclideanEmbedding::canonical(4);
        assert_eq!(e.embed_point(&[0.0; 4]).unwrap(), e.p0().clone());
    }

    #[test]
    fn embedded_points_are_null_and_normalised() {
        let e = EuclideanEmbedding::canonical(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let p = e.embed_point(&x).unwrap();
            assert!(minkowski_dot(&p, &p).unwrap().abs() < 1e-12);
            assert!((minkowski_dot(&p, e.w()).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_sphere_vector_is_orthogonal_to_its_points() {
        let e = EuclideanEmbedding::canonical(3);
        let s = sphere_to_lorentz(&e, &[0.0, 0.0, 0.0], 1.0, Orientation::Positive).unwrap();
        let v = &s.lorentz_rep;
        assert!((minkowski_dot(v, v).unwrap() - 1.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut worst = 0.0_f64;
        for _ in 0..50 {
            let mut q: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = q.iter().map(|a| a * a).sum::<f64>().sqrt();
            q.iter_mut().for_each(|a| *a /= norm);
            worst = worst.max(minkowski_dot(v, &e.embed_point(&q).unwrap()).unwrap().abs());
        }
        assert!(worst <= 1e-12, "worst pairing {worst}");
    }

    #[test]
    fn flipping_orientation_negates_the_vector() {
        let e = EuclideanEmbedding::canonical(3);
        let c = [0.3, -1.2, 2.0];
        let v = sphere_to_lorentz(&e, &c, 0.7, Orientation::Positive).unwrap().lorentz_rep;
        let v2 = sphere_to_lorentz(&e, &c, 0.7, Orientation::Negative).unwrap().lorentz_rep;
        for (a, b) in v.0.iter().zip(&v2.0) {
            assert!((a + b).abs() < 1e-14);
        }
        let back = lorentz_to_sphere(&e, &v2).unwrap().sphere;
        assert_eq!(back.orientation, Orientation::Negative);
    }

    #[test]
    fn nonpositive_radius_is_rejected() {
        let e = EuclideanEmbedding::canonical(2);
        assert!(matches!(
            sphere_to_lorentz(&e, &[0.0, 0.0], 0.0, Orientation::Positive),
            Err(Error::NonPositiveRadius(_))
        ));
        assert!(matches!(
            sphere_to_lorentz(&e, &[0.0, 0.0], -1.0, Orientation::Positive),
            Err(Error::NonPositiveRadius(_))
        ));
    }

    #[test]
    fn hyperplane_and_non_unit_vectors_are_rejected() {
        let e = EuclideanEmbedding::canonical(3);
        // D e_1 is unit and orthogonal to w: the hyperplane x_1 = 0.
        let plane = LorentzVector::basis(5, 0);
        assert!(matches!(lorentz_to_sphere(&e, &plane), Err(Error::HyperplaneElement(_))));
        let short = LorentzVector(vec![0.5_f64.sqrt(), 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(lorentz_to_sphere(&e, &short), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn sphere_json_layout() {
        let s = SphereElement::new(vec![1.0, 2.0, 3.0], 0.5, Orientation::Negative).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"center":[1.0,2.0,3.0],"radius":0.5,"orientation":-1}"#);
        let back: SphereElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<SphereElement>(r#"{"center":[0],"radius":1,"orientation":0}"#).is_err());
        let v = LorentzVector(vec![1.0, -2.0]);
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1.0,-2.0]");
    }

    #[test]
    fn induced_metric_examples() {
        let umbilic = diag_forms(&[0.7, 0.7, 0.7]);
        let x = [0.3, -1.0, 2.0];
        let y = [1.5, 0.2, -0.4];
        assert!(congruence_induced_metric(&umbilic, 0.7, &x, &y).unwrap().abs() < 1e-15);

        let general = diag_forms(&[0.5, -1.0, 2.0]);
        let third: f64 = (0..3).map(|i| general.principal_curvatures[i].powi(2) * x[i] * y[i]).sum();
        assert!((congruence_induced_metric(&general, 0.0, &x, &y).unwrap() - third).abs() < 1e-14);

        let unit = diag_forms(&[1.0, 1.0]);
        assert_eq!(congruence_induced_metric(&unit, 2.0, &[1.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn regularity_examples() {
        let unit = diag_forms(&[1.0, 1.0]);
        assert!(!congruence_regularity(&unit, 1.0, 1e-9));
        assert!(congruence_regularity(&diag_forms(&[1.0, 3.0]), 2.0, 0.5));
        assert!(congruence_regularity(&unit, 0.0, 0.99));
    }
}
