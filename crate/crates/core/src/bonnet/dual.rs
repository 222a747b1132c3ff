use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value of a function together with its two first partials at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dual {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Dual {
    pub fn new(v: f64, dx: f64, dy: f64) -> Self {
        Self { v, dx, dy }
    }

    pub fn constant(v: f64) -> Self {
        Self::new(v, 0.0, 0.0)
    }

    /// Partial along axis 0 (x) or 1 (y).
    pub fn d(self, axis: usize) -> f64 {
        if axis == 0 {
            self.dx
        } else {
            self.dy
        }
    }

    fn chain(self, value: f64, slope: f64) -> Self {
        Self::new(value, slope * self.dx, slope * self.dy)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }

    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r)
    }

    pub fn recip(self) -> Self {
        self.chain(1.0 / self.v, -1.0 / (self.v * self.v))
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.dx + o.dx, self.dy + o.dy)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.dx - o.dx, self.dy - o.dy)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.dx * o.v + self.v * o.dx, self.dy * o.v + self.v * o.dy)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        self * o.recip()
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.dx, -self.dy)
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, s: f64) -> Dual {
        Dual::new(self.v * s, self.dx * s, self.dy * s)
    }
}

impl Mul<Dual> for f64 {
    type Output = Dual;
    fn mul(self, d: Dual) -> Dual {
        d * self
    }
}
