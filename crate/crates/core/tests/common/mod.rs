//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's algorithms; it only builds inputs and reference values.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use flatgap::surface::{CoordText, SurfaceDefinition, TranslationSurface};
use flatgap::targets::AreaScalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

/// Every primitive integer vector of Euclidean length at most `r`, sorted.
pub fn primitive_vectors(r: f64) -> Vec<(i64, i64)> {
    let n = r.floor() as i64;
    let mut out = Vec::new();
    for x in -n..=n {
        for y in -n..=n {
            if (x, y) != (0, 0) && x.gcd(&y) == 1 && ((x * x + y * y) as f64) <= r * r {
                out.push((x, y));
            }
        }
    }
    out.sort_unstable();
    out
}

/// The gap by scanning every (non-negative, negative) pair of angles.
pub fn brute_force_gap(angles: &[f64]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for &a in angles.iter().filter(|a| **a >= 0.0) {
        for &b in angles.iter().filter(|b| **b < 0.0) {
            let d = a - b;
            best = Some(best.map_or(d, |x: f64| x.min(d)));
        }
    }
    best
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A one-square torus spanned by `u` and `v` (with `v × u > 0`), from exact
/// rational coordinates.
pub fn parallelogram_torus(u: [&BigRational; 2], v: [&BigRational; 2]) -> TranslationSurface {
    let text = |q: &BigRational| CoordText::Text(format!("{}/{}", q.numer(), q.denom()));
    let pt = |x: BigRational, y: BigRational| [text(&x), text(&y)];
    let zero = BigRational::zero();
    let def = SurfaceDefinition {
        name: Some("planted".into()),
        arithmetic: None,
        polygons: vec![vec![
            pt(zero.clone(), zero),
            pt(v[0].clone(), v[1].clone()),
            pt(v[0] + u[0], v[1] + u[1]),
            pt(u[0].clone(), u[1].clone()),
        ]],
        gluings: vec![[0, 0, 0, 2], [0, 1, 0, 3]],
    };
    TranslationSurface::build(&def).expect("a non-degenerate parallelogram")
}

/// A finite measure space of at most 16 atoms with integer weights; sets
/// are bitmasks, so unions and intersections are exact.
#[derive(Clone, Debug)]
pub struct AtomSpace {
    pub weights: Vec<u64>,
    pub sets: Vec<u16>,
}

impl AtomSpace {
    pub fn random<R: Rng>(rng: &mut R, atoms: usize, sets: usize) -> Self {
        assert!(atoms <= 16);
        let weights = (0..atoms).map(|_| rng.gen_range(1..=1000)).collect();
        let full = if atoms == 16 { u16::MAX } else { (1u16 << atoms) - 1 };
        let sets = (0..sets)
            .map(|_| loop {
                let s = rng.gen::<u16>() & full;
                if s != 0 {
                    break s;
                }
            })
            .collect();
        Self { weights, sets }
    }

    pub fn total(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn mass(&self, mask: u16) -> u64 {
        self.weights.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| *w).sum()
    }

    pub fn measure(&self, mask: u16) -> f64 {
        self.mass(mask) as f64 / self.total() as f64
    }

    pub fn singles(&self) -> Vec<f64> {
        self.sets.iter().map(|&s| self.measure(s)).collect()
    }

    pub fn pairs(&self) -> Vec<Vec<f64>> {
        self.sets.iter().map(|&a| self.sets.iter().map(|&b| self.measure(a & b)).collect()).collect()
    }

    pub fn union(&self) -> f64 {
        self.measure(self.sets.iter().fold(0, |acc, s| acc | s))
    }
}

/// Monte Carlo estimate of an area inside the box `[x0,x1]×[y0,y1]`, with
/// its standard error.
pub fn monte_carlo_area<R: Rng>(
    rng: &mut R,
    samples: usize,
    (x0, x1, y0, y1): (f64, f64, f64, f64),
    inside: impl Fn(f64, f64) -> bool,
) -> (f64, f64) {
    let hits = (0..samples).filter(|_| inside(rng.gen_range(x0..x1), rng.gen_range(y0..y1))).count();
    let p = hits as f64 / samples as f64;
    let box_area = (x1 - x0) * (y1 - y0);
    (p * box_area, box_area * (p * (1.0 - p) / samples as f64).sqrt())
}

/// `a + b√d` with rational `a`, `b`. Constants made by `from_i32` carry no
/// `d` and adopt the one of whatever they are combined with.
#[derive(Clone, Debug)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
    pub d: Option<BigRational>,
}

impl Surd {
    /// The rational `q` in the field `Q(√(1 + κ²))`.
    pub fn in_field(q: BigRational, kappa: &BigRational) -> Self {
        let d = BigRational::one() + kappa * kappa;
        Self { a: q, b: BigRational::zero(), d: Some(d) }
    }

    fn field(&self, o: &Self) -> Option<BigRational> {
        match (&self.d, &o.d) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixed fields");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    /// Exact sign of `a + b√d`.
    pub fn signum(&self) -> Ordering {
        let zero = BigRational::zero();
        let sa = self.a.cmp(&zero);
        let sb = self.b.cmp(&zero);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let d = self.d.as_ref().expect("an irrational part needs a field");
        // opposite signs: compare a² with b²d
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * d)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }
}

impl PartialEq for Surd {
    fn eq(&self, o: &Self) -> bool {
        (self.clone() - o.clone()).is_zero()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some((self.clone() - o.clone()).signum())
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        let d = self.field(&o);
        Surd { a: self.a + o.a, b: self.b + o.b, d }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        let d = self.field(&o);
        Surd { a: self.a - o.a, b: self.b - o.b, d }
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        let d = self.field(&o);
        let cross = if self.b.is_zero() || o.b.is_zero() {
            BigRational::zero()
        } else {
            &self.b * &o.b * d.as_ref().expect("an irrational part needs a field")
        };
        let a = &self.a * &o.a + cross;
        let b = &self.a * &o.b + &self.b * &o.a;
        Surd { a, b, d }
    }
}

impl AreaScalar for Surd {
    fn from_i32(v: i32) -> Self {
        Surd { a: BigRational::from_integer(v.into()), b: BigRational::zero(), d: None }
    }
    fn half(self) -> Self {
        let two = BigRational::from_integer(2.into());
        Surd { a: self.a / &two, b: self.b / two, d: self.d }
    }
    fn sqrt_one_plus_sq(&self) -> Self {
        // √(1 + κ²) is the field generator when called on κ itself
        let d = self.d.clone().expect("κ lives in its own field");
        assert!(self.b.is_zero() && BigRational::one() + &self.a * &self.a == d);
        Surd { a: BigRational::zero(), b: BigRational::one(), d: Some(d) }
    }
}
