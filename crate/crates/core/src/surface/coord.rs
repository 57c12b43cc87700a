//! Planar points and the two coordinate models used by surfaces.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Comparison tolerance for the floating coordinate model.
pub const EPS_EXACT: f64 = 1e-12;

/// Cone angles in the floating model must be this close to a multiple of 2π.
pub const CONE_ANGLE_TOL: f64 = 1e-9;

/// A point or vector in the plane, in floating coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Argument in `[-π, π)`; `π` itself is folded to `-π`.
    pub fn arg(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a >= std::f64::consts::PI {
            -std::f64::consts::PI
        } else {
            a
        }
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v.scale(self)
    }
}

/// An exact rational point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl QPoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn to_vec2(&self) -> Vec2 {
        Vec2::new(rat_to_f64(&self.x), rat_to_f64(&self.y))
    }

    pub fn cross(&self, o: &QPoint) -> BigRational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &QPoint) -> BigRational {
        &self.x * &o.x + &self.y * &o.y
    }
}

impl Add for &QPoint {
    type Output = QPoint;
    fn add(self, o: &QPoint) -> QPoint {
        QPoint::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &QPoint {
    type Output = QPoint;
    fn sub(self, o: &QPoint) -> QPoint {
        QPoint::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &QPoint {
    type Output = QPoint;
    fn neg(self) -> QPoint {
        QPoint::new(-&self.x, -&self.y)
    }
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite double.
pub fn f64_to_rat(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

/// Which arithmetic a surface's coordinates live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    /// Rational coordinates, exact predicates.
    Exact,
    /// Double coordinates compared with [`EPS_EXACT`].
    Float,
}

impl fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arithmetic::Exact => f.write_str("exact"),
            Arithmetic::Float => f.write_str("float"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse coordinate {0:?}")]
pub struct CoordParseError(pub String);

/// Parses `"p/q"`, integers and plain or scientific decimals into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, CoordParseError> {
    let err = || CoordParseError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = t[i + 1..].parse().map_err(|_| err())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Text form used in surface files: integers as-is, other rationals as `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Signed area (twice) of a closed polygon in exact arithmetic.
pub fn twice_signed_area_exact(pts: &[QPoint]) -> BigRational {
    let n = pts.len();
    (0..n).fold(BigRational::zero(), |acc, i| acc + pts[i].cross(&pts[(i + 1) % n]))
}

pub fn twice_signed_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].cross(pts[(i + 1) % n])).sum()
}
