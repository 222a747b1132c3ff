use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simply connected space form of curvature `c ∈ {-1, 0, 1}`: the plane,
/// the unit sphere `S² ⊂ R³`, or the hyperboloid `H² ⊂ L³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum SpaceForm {
    Hyperbolic,
    Flat,
    Spherical,
}

impl SpaceForm {
    pub fn from_curvature(c: f64) -> Result<Self> {
        match c {
            x if x == -1.0 => Ok(SpaceForm::Hyperbolic),
            x if x == 0.0 => Ok(SpaceForm::Flat),
            x if x == 1.0 => Ok(SpaceForm::Spherical),
            other => Err(Error::InvalidInput(format!("ambient curvature must be -1, 0 or 1, got {other}"))),
        }
    }

    pub fn curvature(self) -> f64 {
        match self {
            SpaceForm::Hyperbolic => -1.0,
            SpaceForm::Flat => 0.0,
            SpaceForm::Spherical => 1.0,
        }
    }

    /// Dimension of the linear model space.
    pub fn model_dim(self) -> usize {
        match self {
            SpaceForm::Flat => 2,
            _ => 3,
        }
    }

    /// Bilinear form of the model: Euclidean, or Lorentzian with the last
    /// coordinate timelike for the hyperboloid.
    pub fn dot(self, a: &[f64], b: &[f64]) -> f64 {
        let mut s: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        if self == SpaceForm::Hyperbolic {
            s -= 2.0 * a[2] * b[2];
        }
        s
    }

    /// Unit normal making `{tangent, normal}` positively oriented.
    pub fn oriented_normal(self, position: &[f64], tangent: &[f64]) -> Vec<f64> {
        match self {
            SpaceForm::Flat => vec![-tangent[1], tangent[0]],
            SpaceForm::Spherical => cross(position, tangent).to_vec(),
            SpaceForm::Hyperbolic => {
                let v = cross(position, tangent);
                vec![v[0], v[1], -v[2]]
            }
        }
    }
}

impl From<SpaceForm> for i8 {
    fn from(c: SpaceForm) -> i8 {
        c.curvature() as i8
    }
}

impl TryFrom<i8> for SpaceForm {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        SpaceForm::from_curvature(v as f64).map_err(|e| e.to_string())
    }
}

pub(crate) fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Geodesic curvature as a function of arclength.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurvatureProfile {
    Constant { k: f64 },
    /// `base + amplitude * sin(frequency * s)`.
    Sinusoid { base: f64, amplitude: f64, frequency: f64 },
    /// Plane ellipse with semi-axes `a` (along x) and `b`; curvature is a
    /// function of the eccentric angle, carried as an auxiliary state.
    Ellipse { a: f64, b: f64 },
}

impl CurvatureProfile {
    pub(crate) fn needs_aux(&self) -> bool {
        matches!(self, CurvatureProfile::Ellipse { .. })
    }

    pub(crate) fn curvature(&self, s: f64, aux: f64) -> f64 {
        match *self {
            CurvatureProfile::Constant { k } => k,
            CurvatureProfile::Sinusoid {
                base,
                amplitude,
                frequency,
            } => base + amplitude * (frequency * s).sin(),
            CurvatureProfile::Ellipse { a, b } => {
                let (st, ct) = aux.sin_cos();
                let speed2 = a * a * st * st + b * b * ct * ct;
                a * b / (speed2 * speed2.sqrt())
            }
        }
    }

    /// `dt/ds` for the auxiliary parameter.
    pub(crate) fn aux_rate(&self, aux: f64) -> f64 {
        match *self {
            CurvatureProfile::Ellipse { a, b } => {
                let (st, ct) = aux.sin_cos();
                1.0 / (a * a * st * st + b * b * ct * ct).sqrt()
            }
            _ => 0.0,
        }
    }

    /// Lower bound of `|k|` used to reject geodesics.
    fn min_abs_curvature(&self) -> f64 {
        match *self {
            CurvatureProfile::Constant { k } => k.abs(),
            CurvatureProfile::Sinusoid { base, amplitude, .. } => base.abs() - amplitude.abs(),
            CurvatureProfile::Ellipse { a, b } => {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                lo / (hi * hi)
            }
        }
    }
}

/// Unit-speed curve in a space form, given by its curvature and an initial
/// point and tangent. Position and frame come from integrating the Frenet
/// equations `φ' = T`, `T' = k n - cφ`, `n' = -k T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveQc {
    pub c: SpaceForm,
    pub profile: CurvatureProfile,
    pub start: Vec<f64>,
    pub tangent: Vec<f64>,
    /// Use `-n` as normal (and `-k` as curvature).
    #[serde(default)]
    pub flip_normal: bool,
}

const UNIT_TOL: f64 = 1e-12;

impl CurveQc {
    pub fn new(c: SpaceForm, profile: CurvatureProfile, start: Vec<f64>, tangent: Vec<f64>) -> Result<Self> {
        let curve = Self {
            c,
            profile,
            start,
            tangent,
            flip_normal: false,
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.c.model_dim();
        crate::error::check_dim(d, self.start.len())?;
        crate::error::check_dim(d, self.tangent.len())?;
        let c = self.c.curvature();
        if c != 0.0 {
            let pp = self.c.dot(&self.start, &self.start);
            if (pp - c).abs() > UNIT_TOL {
                return Err(Error::InvalidInput(format!("start point has <φ,φ> = {pp}, expected {c}")));
            }
            if self.c.dot(&self.start, &self.tangent).abs() > UNIT_TOL {
                return Err(Error::InvalidInput("tangent is not tangent to the space form".into()));
            }
            if self.c == SpaceForm::Hyperbolic && self.start[2] <= 0.0 {
                return Err(Error::InvalidInput("start point must lie on the upper sheet".into()));
            }
        }
        let tt = self.c.dot(&self.tangent, &self.tangent);
        if (tt - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidInput(format!("tangent must be unit, got |T|² = {tt}")));
        }
        if let CurvatureProfile::Ellipse { a, b } = self.profile {
            if self.c != SpaceForm::Flat || !(a > 0.0 && b > 0.0) {
                return Err(Error::InvalidInput("ellipse needs c = 0 and positive semi-axes".into()));
            }
        }
        let kmin = self.profile.min_abs_curvature();
        if !(kmin > 0.0) {
            return Err(Error::VanishingCurvature(0.0));
        }
        Ok(())
    }

    pub fn with_flipped_normal(mut self) -> Self {
        self.flip_normal = !self.flip_normal;
        self
    }

    /// Circle of radius `R` about the origin, counterclockwise from `(R, 0)`.
    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::NonPositiveRadius(radius));
        }
        Self::new(
            SpaceForm::Flat,
            CurvatureProfile::Constant { k: 1.0 / radius },
            vec![radius, 0.0],
            vec![0.0, 1.0],
        )
    }

    /// Ellipse `x²/a² + y²/b² = 1` from the vertex `(a, 0)`.
    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        Self::new(SpaceForm::Flat, CurvatureProfile::Ellipse { a, b }, vec![a, 0.0], vec![0.0, 1.0])
    }

    /// Plane curve with the given curvature, starting at the origin along `x`.
    pub fn plane(profile: CurvatureProfile) -> Result<Self> {
        Self::new(SpaceForm::Flat, profile, vec![0.0, 0.0], vec![1.0, 0.0])
    }

    /// Circle of the unit sphere at polar angle `θ`; geodesic curvature `cot θ`.
    pub fn latitude(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(Error::InvalidInput(format!("polar angle must lie in (0, π), got {theta}")));
        }
        let k = theta.cos() / theta.sin();
        if k.abs() < 1e-12 {
            return Err(Error::VanishingCurvature(0.0));
        }
        Self::new(
            SpaceForm::Spherical,
            CurvatureProfile::Constant { k },
            vec![theta.sin(), 0.0, theta.cos()],
            vec![0.0, 1.0, 0.0],
        )
    }

    /// Spherical curve through the point at polar angle `θ` on the `xz`
    /// meridian, heading east, with arbitrary curvature.
    pub fn spherical(profile: CurvatureProfile, theta: f64) -> Result<Self> {
        Self::new(
            SpaceForm::Spherical,
            profile,
            vec![theta.sin(), 0.0, theta.cos()],
            vec![0.0, 1.0, 0.0],
        )
    }

    /// Hyperbolic curve through the vertex `(0, 0, 1)` of the hyperboloid
    /// with tangent `(1, 0, 0)`; `k = 1` is the horocycle that the
    /// half-plane model shows as the line `y = 1`.
    pub fn hyperbolic(profile: CurvatureProfile) -> Result<Self> {
        Self::new(SpaceForm::Hyperbolic, profile, vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0])
    }

    pub fn horocycle() -> Result<Self> {
        Self::hyperbolic(CurvatureProfile::Constant { k: 1.0 })
    }

    /// Parses `circle:R=1`, `ellipse:a=2,b=1`, `latitude:theta=1.0`,
    /// `horocycle`, `const:k=..`, `sine:k0=..,amp=..,freq=..`, optionally
    /// followed by `,flip`. Constant and sine profiles use the default start
    /// of the space form `c`.
    pub fn parse(spec: &str, c: SpaceForm) -> Result<Self> {
        let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut flip = false;
        let mut opts: Vec<(String, f64)> = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if item == "flip" {
                flip = true;
                continue;
            }
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("expected key=value in curve spec, got '{item}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad number in curve spec item '{item}'")))?;
            opts.push((k.trim().to_string(), v));
        }
        let get = |key: &str| opts.iter().find(|(k, _)| k.eq_ignore_ascii_case(key)).map(|&(_, v)| v);
        let need = |key: &str| get(key).ok_or_else(|| Error::InvalidInput(format!("curve spec '{spec}' needs {key}=")));
        let with_c = |expected: SpaceForm| -> Result<()> {
            if c == expected {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!(
                    "curve '{kind}' lives in the space form c = {}, family needs c = {}",
                    expected.curvature(),
                    c.curvature()
                )))
            }
        };
        let default_start = |profile: CurvatureProfile| match c {
            SpaceForm::Flat => Self::plane(profile),
            SpaceForm::Spherical => Self::spherical(profile, 1.0),
            SpaceForm::Hyperbolic => Self::hyperbolic(profile),
        };
        let curve = match kind.trim() {
            "circle" => {
                with_c(SpaceForm::Flat)?;
                Self::circle(get("R").unwrap_or(1.0))?
            }
            "ellipse" => {
                with_c(SpaceForm::Flat)?;
                Self::ellipse(need("a")?, need("b")?)?
            }
            "latitude" => {
                with_c(SpaceForm::Spherical)?;
                Self::latitude(need("theta")?)?
            }
            "horocycle" => {
                with_c(SpaceForm::Hyperbolic)?;
                Self::horocycle()?
            }
            "const" => default_start(CurvatureProfile::Constant { k: need("k")? })?,
            "sine" => default_start(CurvatureProfile::Sinusoid {
                base: need("k0")?,
                amplitude: need("amp")?,
                frequency: get("freq").unwrap_or(1.0),
            })?,
            other => return Err(Error::InvalidInput(format!("unknown curve kind '{other}'"))),
        };
        Ok(if flip { curve.with_flipped_normal() } else { curve })
    }

    pub(crate) fn signed_curvature(&self, s: f64, aux: f64) -> f64 {
        let k = self.profile.curvature(s, aux);
        if self.flip_normal {
            -k
        } else {
            k
        }
    }

    pub(crate) fn start_normal(&self) -> Vec<f64> {
        let n = self.c.oriented_normal(&self.start, &self.tangent);
        if self.flip_normal {
            n.iter().map(|x| -x).collect()
        } else {
            n
        }
    }
}

/// Upper half-plane image `(x / (z - y), 1 / (z - y))` of a hyperboloid point.
pub fn hyperboloid_to_half_plane(p: &[f64]) -> Result<[f64; 2]> {
    let w = p[2] - p[1];
    if !(w > 0.0) {
        return Err(Error::Degenerate(format!("point {p:?} is not on the upper sheet")));
    }
    Ok([p[0] / w, 1.0 / w])
}

/// Inverse of [`hyperboloid_to_half_plane`].
pub fn half_plane_to_hyperboloid(q: &[f64; 2]) -> Result<[f64; 3]> {
    let (a, b) = (q[0], q[1]);
    if !(b > 0.0) {
        return Err(Error::Degenerate(format!("point {q:?} is not in the upper half-plane")));
    }
    Ok([a / b, 0.5 * (b + a * a / b - 1.0 / b), 0.5 * (1.0 / b + b + a * a / b)])
}

/// Pushes position, velocity and acceleration through the half-plane map.
pub fn half_plane_jet(p: &[f64], v: &[f64], acc: &[f64]) -> Result<[[f64; 2]; 3]> {
    let w = p[2] - p[1];
    if !(w > 0.0) {
        return Err(Error::Degenerate(format!("point {p:?} is not on the upper sheet")));
    }
    let (x, dx, ddx) = (p[0], v[0], acc[0]);
    let dw = v[2] - v[1];
    let ddw = acc[2] - acc[1];
    let w2 = w * w;
    let w3 = w2 * w;
    let a = x / w;
    let da = dx / w - x * dw / w2;
    let dda = ddx / w - 2.0 * dx * dw / w2 - x * ddw / w2 + 2.0 * x * dw * dw / w3;
    let b = 1.0 / w;
    let db = -dw / w2;
    let ddb = -ddw / w2 + 2.0 * dw * dw / w3;
    Ok([[a, b], [da, db], [dda, ddb]])
}
