//! Number types the unfolding search runs over: scaled integers for rational
//! surfaces (exact predicates) and doubles with a relative tolerance.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use crate::surface::EPS_EXACT;

pub(crate) type P<S> = [S; 2];

pub(crate) trait Field:
    Copy
    + Send
    + Sync
    + Debug
    + PartialOrd
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn to_f64(self) -> f64;
    /// Sign of `cross(a, b)`; `Equal` means parallel within the model.
    fn orient(a: P<Self>, b: P<Self>) -> Ordering;
    /// Integer coordinates, when the model has them.
    fn lattice(p: P<Self>) -> Option<[i128; 2]>;
}

impl Field for i128 {
    fn zero() -> Self {
        0
    }

    fn to_f64(self) -> f64 {
        self as f64
    }

    fn orient(a: P<Self>, b: P<Self>) -> Ordering {
        (a[0] * b[1] - a[1] * b[0]).cmp(&0)
    }

    fn lattice(p: P<Self>) -> Option<[i128; 2]> {
        Some(p)
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn orient(a: P<Self>, b: P<Self>) -> Ordering {
        let c = a[0] * b[1] - a[1] * b[0];
        let scale = a[0].hypot(a[1]) * b[0].hypot(b[1]);
        if c.abs() <= EPS_EXACT * scale {
            Ordering::Equal
        } else if c > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn lattice(_: P<Self>) -> Option<[i128; 2]> {
        None
    }
}

pub(crate) fn add<S: Field>(a: P<S>, b: P<S>) -> P<S> {
    [a[0] + b[0], a[1] + b[1]]
}

pub(crate) fn sub<S: Field>(a: P<S>, b: P<S>) -> P<S> {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn norm_sq<S: Field>(a: P<S>) -> S {
    a[0] * a[0] + a[1] * a[1]
}

pub(crate) fn to_f64<S: Field>(a: P<S>) -> [f64; 2] {
    [a[0].to_f64(), a[1].to_f64()]
}

/// Orientation of `c` relative to the directed line `a → b`.
pub(crate) fn orient3<S: Field>(a: P<S>, b: P<S>, c: P<S>) -> Ordering {
    S::orient(sub(b, a), sub(c, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_signs() {
        assert_eq!(i128::orient([1, 0], [0, 1]), Ordering::Greater);
        assert_eq!(i128::orient([2, 2], [1, 1]), Ordering::Equal);
        assert_eq!(f64::orient([1.0, 0.0], [1.0, -1e-3]), Ordering::Less);
        assert_eq!(f64::orient([1.0, 1.0], [3.0, 3.0 + 1e-15]), Ordering::Equal);
    }
}
