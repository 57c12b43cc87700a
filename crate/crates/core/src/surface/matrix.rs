use std::fmt;
use std::ops::Mul;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coord::{rat_to_f64, QPoint, Vec2};

/// A real 2×2 matrix `[[a, b], [c, d]]` acting on column vectors.
///
/// Matrices built from rational entries keep them, so that exact surfaces stay
/// exact under the action.
#[derive(Clone, PartialEq)]
pub struct Mat2 {
    m: [f64; 4],
    exact: Option<[BigRational; 4]>,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "Mat2[[{a}, {b}], [{c}, {d}]]")?;
        if self.exact.is_some() {
            f.write_str(" (exact)")?;
        }
        Ok(())
    }
}

impl Mat2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { m: [a, b, c, d], exact: None }
    }

    pub fn from_rationals(entries: [BigRational; 4]) -> Self {
        let m = [
            rat_to_f64(&entries[0]),
            rat_to_f64(&entries[1]),
            rat_to_f64(&entries[2]),
            rat_to_f64(&entries[3]),
        ];
        Self { m, exact: Some(entries) }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::from_rationals([a, b, c, d].map(|v| BigRational::from_integer(v.into())))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 1)
    }

    /// Teichmüller geodesic flow `g_t = diag(e^t, e^-t)`.
    pub fn geodesic(t: f64) -> Self {
        if t == 0.0 {
            return Self::identity();
        }
        Self::new(t.exp(), 0.0, 0.0, (-t).exp())
    }

    /// `g_{k log b} = diag(b^k, b^-k)` kept exact for rational `b`.
    pub fn geodesic_rational(b: &BigRational, k: i32) -> Self {
        let p = num_traits::pow::pow(b.clone(), k.unsigned_abs() as usize);
        let (x, y) = if k >= 0 { (p.clone(), p.recip()) } else { (p.recip(), p) };
        Self::from_rationals([x, BigRational::zero(), BigRational::zero(), y])
    }

    /// Rotation `r_θ` by `theta` radians counterclockwise.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, -s, s, c)
    }

    /// Exact rotation by `k` quarter turns.
    pub fn quarter_turns(k: i32) -> Self {
        match k.rem_euclid(4) {
            0 => Self::from_ints(1, 0, 0, 1),
            1 => Self::from_ints(0, -1, 1, 0),
            2 => Self::from_ints(-1, 0, 0, -1),
            _ => Self::from_ints(0, 1, -1, 0),
        }
    }

    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    pub fn exact_entries(&self) -> Option<&[BigRational; 4]> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.m;
        a * d - b * c
    }

    pub fn det_exact(&self) -> Option<BigRational> {
        self.exact.as_ref().map(|[a, b, c, d]| a * d - b * c)
    }

    pub fn is_singular(&self) -> bool {
        match self.det_exact() {
            Some(d) => d.is_zero(),
            None => {
                let det = self.det();
                let scale = self.m.iter().map(|v| v.abs()).fold(0.0, f64::max);
                !det.is_finite() || det.abs() <= 1e-14 * scale * scale
            }
        }
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        let [a, b, c, d] = self.m;
        Vec2::new(a * v.x + b * v.y, c * v.x + d * v.y)
    }

    pub fn apply_exact(&self, v: &QPoint) -> Option<QPoint> {
        self.exact
            .as_ref()
            .map(|[a, b, c, d]| QPoint::new(a * &v.x + b * &v.y, c * &v.x + d * &v.y))
    }

    pub fn is_identity(&self) -> bool {
        match &self.exact {
            Some([a, b, c, d]) => a.is_one() && b.is_zero() && c.is_zero() && d.is_one(),
            None => self.m == [1.0, 0.0, 0.0, 1.0],
        }
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;

    /// Matrix product `self · rhs` (apply `rhs` first).
    fn mul(self, rhs: &Mat2) -> Mat2 {
        match (&self.exact, &rhs.exact) {
            (Some([a, b, c, d]), Some([e, f, g, h])) => Mat2::from_rationals([
                a * e + b * g,
                a * f + b * h,
                c * e + d * g,
                c * f + d * h,
            ]),
            _ => {
                let [a, b, c, d] = self.m;
                let [e, f, g, h] = rhs.m;
                Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
            }
        }
    }
}
