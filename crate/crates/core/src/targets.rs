//! Shrinking-target regions in the holonomy plane: trapezoids `T±`, their
//! pairs `H`, flowed targets `A_k`, sector annuli `W` and annuli `S`, bump
//! functions, and closed-form areas. All regions are closed.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::gaps::fold_angle;
use crate::rate::RateFunction;
use crate::saddle::{enumerate_with, EnumConfig, HolonomySet, SaddleError};
use crate::surface::{f64_to_rat, Mat2, SurfaceError, TranslationSurface, Vec2};

/// Largest denominator of `b` for which pullbacks stay in exact arithmetic.
const EXACT_BASE_MAX_DENOM: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TargetError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("region is empty: {0}")]
    EmptyRegion(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("degenerate region: {0}")]
    DegenerateRegion(String),
    #[error(transparent)]
    Enumeration(#[from] SaddleError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `T±` with corners `(c,0), (1,0), (1, ±κ), (c, ±cκ)`, `κ = σ/ψ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trapezoid {
    pub c: f64,
    pub sigma: f64,
    pub psi_val: f64,
    pub sign: Sign,
}

impl Trapezoid {
    pub fn new(c: f64, sigma: f64, psi_val: f64, sign: Sign) -> Result<Self, TargetError> {
        check_c_sigma(c, sigma)?;
        if !(psi_val > 0.0 && psi_val.is_finite()) {
            return Err(TargetError::InvalidParameter(format!("ψ value {psi_val} must be positive")));
        }
        Ok(Self { c, sigma, psi_val, sign })
    }

    /// Height slope `κ = σ/ψ`.
    pub fn kappa(&self) -> f64 {
        self.sigma / self.psi_val
    }

    /// Corners in counterclockwise order; at `c = 0` the two left corners
    /// coincide and only one is listed.
    pub fn corners(&self) -> Vec<Vec2> {
        let k = self.kappa();
        let pts = [
            Vec2::new(self.c, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, k),
            Vec2::new(self.c, self.c * k),
        ];
        let mut out: Vec<Vec2> = match self.sign {
            Sign::Plus => pts.to_vec(),
            Sign::Minus => pts.iter().rev().map(|p| Vec2::new(p.x, -p.y)).collect(),
        };
        out.dedup();
        if out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        out
    }

    /// Closed membership: `c ≤ x ≤ 1` and `0 ≤ ±y ≤ κx`.
    pub fn contains(&self, v: Vec2) -> bool {
        let y = self.sign.factor() * v.y;
        v.x >= self.c && v.x <= 1.0 && y >= 0.0 && y <= self.kappa() * v.x
    }

    /// Euclidean distance from `v` to the boundary.
    pub fn dist_to_boundary(&self, v: Vec2) -> f64 {
        let c = self.corners();
        (0..c.len())
            .map(|i| point_segment_distance(v, c[i], c[(i + 1) % c.len()]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Farthest point from the origin.
    pub fn reach(&self) -> f64 {
        1f64.hypot(self.kappa())
    }

    pub fn area(&self) -> f64 {
        trapezoid_area(self.c, self.sigma, self.psi_val).expect("validated parameters")
    }
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let e = b - a;
    let len2 = e.norm_sq();
    let t = if len2 > 0.0 { ((p - a).dot(e) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + t * e)).norm()
}

fn check_c_sigma(c: f64, sigma: f64) -> Result<(), TargetError> {
    if !(0.0..1.0).contains(&c) {
        return Err(TargetError::InvalidParameter(format!("c = {c} must lie in [0, 1)")));
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(TargetError::InvalidParameter(format!("σ = {sigma} must lie in (0, 1)")));
    }
    Ok(())
}

pub fn trapezoid_membership(v: Vec2, t: &Trapezoid) -> bool {
    t.contains(v)
}

/// `b`, `c`, `σ`, `ψ` and the index `k` (or `j`) of a target.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetParams {
    pub b: f64,
    pub c: f64,
    pub sigma: f64,
    pub psi: RateFunction,
    pub k: u32,
}

impl TargetParams {
    pub fn new(b: f64, c: f64, sigma: f64, psi: RateFunction, k: u32) -> Result<Self, TargetError> {
        if !(b > 1.0 && b.is_finite()) {
            return Err(TargetError::InvalidParameter(format!("b = {b} must exceed 1")));
        }
        check_c_sigma(c, sigma)?;
        Ok(Self { b, c, sigma, psi, k })
    }

    pub fn with_k(&self, k: u32) -> Self {
        Self { k, ..self.clone() }
    }

    /// `ψ(b^k)`.
    pub fn psi_at_k(&self) -> f64 {
        let ln_t = self.k as f64 * self.b.ln();
        self.psi.ln_eval_at_ln(ln_t).exp()
    }

    pub fn trapezoid(&self, sign: Sign) -> Trapezoid {
        Trapezoid::new(self.c, self.sigma, self.psi_at_k(), sign).expect("validated parameters")
    }

    /// `g_{−k log b}`, exact when `b` is a rational with small denominator.
    pub fn pullback_matrix(&self, k: u32) -> Mat2 {
        match exact_base(self.b) {
            Some(b) => Mat2::geodesic_rational(&b, -(k as i32)),
            None => Mat2::geodesic(-(k as f64) * self.b.ln()),
        }
    }
}

fn exact_base(b: f64) -> Option<BigRational> {
    let q = f64_to_rat(b)?;
    (q.denom() <= &BigInt::from(EXACT_BASE_MAX_DENOM)).then_some(q)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HMembership {
    pub hit: bool,
    /// Indices into the enumerated set of vectors in `T⁺` and `T⁻`.
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    /// Some hit in `T⁺` and some hit in `T⁻` point in different directions.
    pub distinct_witnesses: bool,
    pub holonomies: HolonomySet,
}

/// Whether `ω` has holonomy in both `T⁺_{c,σ,k}` and `T⁻_{c,σ,k}`.
pub fn h_membership(s: &TranslationSurface, p: &TargetParams, cfg: &EnumConfig) -> Result<HMembership, TargetError> {
    let tp = p.trapezoid(Sign::Plus);
    let tm = p.trapezoid(Sign::Minus);
    let set = enumerate_with(s, tp.reach(), cfg)?;
    let plus: Vec<usize> = (0..set.len()).filter(|&i| tp.contains(set.vectors[i].v)).collect();
    let minus: Vec<usize> = (0..set.len()).filter(|&i| tm.contains(set.vectors[i].v)).collect();
    let distinct_witnesses = plus.iter().any(|&i| {
        minus.iter().any(|&j| {
            let (a, b) = (set.vectors[i].v, set.vectors[j].v);
            a.cross(b).abs() > 1e-12 * a.norm() * b.norm()
        })
    });
    Ok(HMembership {
        hit: !plus.is_empty() && !minus.is_empty(),
        plus,
        minus,
        distinct_witnesses,
        holonomies: set,
    })
}

/// `g_{−k log b}·ω`.
pub fn pull_back(s: &TranslationSurface, p: &TargetParams, k: u32) -> Result<TranslationSurface, TargetError> {
    Ok(s.apply_matrix(&p.pullback_matrix(k))?)
}

/// `ω ∈ A_k = g_{k log b} H_{c,σ,k}`, decided on the pulled-back surface.
pub fn a_k_membership(s: &TranslationSurface, p: &TargetParams, cfg: &EnumConfig) -> Result<HMembership, TargetError> {
    h_membership(&pull_back(s, p, p.k)?, p, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnnulusKind {
    /// One vector in the sector and one in its mirror image.
    W,
    /// Any vector in the annulus.
    S,
}

/// `r_min ≤ |v| ≤ r_max`, `θ_min ≤ arg v ≤ θ_max` (closed).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorAnnulus {
    pub r_min: f64,
    pub r_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub kind: AnnulusKind,
}

impl SectorAnnulus {
    pub fn new(r_min: f64, r_max: f64, theta_min: f64, theta_max: f64, kind: AnnulusKind) -> Result<Self, TargetError> {
        if !(r_min > 0.0) || !r_max.is_finite() {
            return Err(TargetError::InvalidRegion(format!("radii ({r_min}, {r_max}) must be positive and finite")));
        }
        if r_min >= r_max {
            return Err(TargetError::EmptyRegion(format!("r_min = {r_min} ≥ r_max = {r_max}")));
        }
        if !(theta_min < theta_max) {
            return Err(TargetError::InvalidRegion(format!("θ range ({theta_min}, {theta_max}) is empty")));
        }
        Ok(Self { r_min, r_max, theta_min, theta_max, kind })
    }

    /// `W`: `c_H√(2σ/ψ) ≤ |v| ≤ √(σ/ψ)` with `arg v ∈ [π/12, π/6]` and mirror.
    pub fn w_band(c_h: f64, sigma: f64, psi_val: f64) -> Result<Self, TargetError> {
        let r_min = c_h * (2.0 * sigma / psi_val).sqrt();
        let r_max = (sigma / psi_val).sqrt();
        Self::new(r_min, r_max, PI / 12.0, PI / 6.0, AnnulusKind::W)
    }

    /// `S`: `c_H√(σ/ψ) ≤ |v| ≤ √(2σ/ψ)`, every direction.
    pub fn s_annulus(c_h: f64, sigma: f64, psi_val: f64) -> Result<Self, TargetError> {
        let r_min = c_h * (sigma / psi_val).sqrt();
        let r_max = (2.0 * sigma / psi_val).sqrt();
        Self::new(r_min, r_max, -PI, PI, AnnulusKind::S)
    }

    fn radial(&self, v: Vec2) -> bool {
        let r = v.norm();
        r >= self.r_min && r <= self.r_max
    }

    /// In the annulus and the (+) sector.
    pub fn contains_plus(&self, v: Vec2) -> bool {
        let a = v.arg();
        self.radial(v) && a >= self.theta_min && a <= self.theta_max
    }

    /// In the annulus and the mirrored (−) sector.
    pub fn contains_minus(&self, v: Vec2) -> bool {
        let a = fold_angle(-v.arg());
        self.radial(v) && a >= self.theta_min && a <= self.theta_max
    }

    pub fn hit_by(&self, vectors: impl IntoIterator<Item = Vec2> + Clone) -> bool {
        match self.kind {
            AnnulusKind::S => vectors.into_iter().any(|v| self.radial(v)),
            AnnulusKind::W => {
                vectors.clone().into_iter().any(|v| self.contains_plus(v))
                    && vectors.into_iter().any(|v| self.contains_minus(v))
            }
        }
    }
}

pub fn sector_annulus_membership(
    s: &TranslationSurface,
    region: &SectorAnnulus,
    cfg: &EnumConfig,
) -> Result<bool, TargetError> {
    let set = enumerate_with(s, region.r_max, cfg)?;
    Ok(region.hit_by(set.vectors.iter().map(|h| h.v)))
}

/// `ρ(x) = min{1, dist(x, ∂T)/ε}` on `T`, zero outside.
pub fn bump_rho(x: Vec2, t: &Trapezoid, eps: f64) -> f64 {
    if !t.contains(x) {
        return 0.0;
    }
    (t.dist_to_boundary(x) / eps).min(1.0)
}

/// The ball factor as a function of the signed distance to the ball boundary.
pub fn ball_factor(x3_dist: f64, eps: f64) -> f64 {
    if x3_dist < 0.0 {
        0.0
    } else {
        (x3_dist / eps).min(1.0)
    }
}

/// `ρ(x₁; T_i) · ρ(x₂; T_j) · f₃(x₃)`.
pub fn product_bump(x1: Vec2, x2: Vec2, x3_dist: f64, ti: &Trapezoid, tj: &Trapezoid, eps: f64) -> f64 {
    bump_rho(x1, ti, eps) * bump_rho(x2, tj, eps) * ball_factor(x3_dist, eps)
}

/// `ε_{i,j} = e^{−(δ/4)|i−j|}`.
pub fn epsilon_ij(i: u64, j: u64, delta: f64) -> f64 {
    (-(delta / 4.0) * i.abs_diff(j) as f64).exp()
}

/// Scalars the area formulas are written over; lets tests run them in exact
/// quadratic-surd arithmetic.
pub trait AreaScalar:
    Clone + PartialOrd + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + std::ops::Mul<Output = Self>
{
    fn from_i32(v: i32) -> Self;
    fn half(self) -> Self;
    /// `√(1 + x²)`.
    fn sqrt_one_plus_sq(&self) -> Self;
}

impl AreaScalar for f64 {
    fn from_i32(v: i32) -> Self {
        v as f64
    }
    fn half(self) -> Self {
        self / 2.0
    }
    fn sqrt_one_plus_sq(&self) -> Self {
        1f64.hypot(*self)
    }
}

/// `κ(1 − c²)/2` for slope `κ`.
pub fn trapezoid_area_generic<T: AreaScalar>(c: T, kappa: T) -> T {
    let one = T::from_i32(1);
    (kappa * (one - c.clone() * c)).half()
}

/// `ε[κ(1+c) + (1−c−2ε)(1+√(1+κ²))]`.
pub fn epsilon_boundary_area_generic<T: AreaScalar>(c: T, kappa: T, eps: T) -> T {
    let one = T::from_i32(1);
    let two = T::from_i32(2);
    let root = kappa.sqrt_one_plus_sq();
    eps.clone() * (kappa * (one.clone() + c.clone()) + (one.clone() - c - two * eps) * (one + root))
}

/// `((1−c−2ε)/2)(κ(1+c) − 2ε√(1+κ²) − 2ε)`.
pub fn inner_trapezoid_area_generic<T: AreaScalar>(c: T, kappa: T, eps: T) -> T {
    let one = T::from_i32(1);
    let two = T::from_i32(2);
    let root = kappa.sqrt_one_plus_sq();
    let width = (one.clone() - c.clone() - two.clone() * eps.clone()).half();
    width * (kappa * (one + c) - two.clone() * eps.clone() * root - two * eps)
}

pub fn trapezoid_area(c: f64, sigma: f64, psi_val: f64) -> Result<f64, TargetError> {
    check_c_sigma(c, sigma)?;
    if !(psi_val > 0.0) {
        return Err(TargetError::InvalidParameter(format!("ψ value {psi_val} must be positive")));
    }
    Ok(trapezoid_area_generic(c, sigma / psi_val))
}

fn check_eps(c: f64, sigma: f64, psi_val: f64, eps: f64) -> Result<(), TargetError> {
    trapezoid_area(c, sigma, psi_val)?;
    if !(eps >= 0.0) {
        return Err(TargetError::InvalidParameter(format!("ε = {eps} must be non-negative")));
    }
    if eps >= (1.0 - c) / 2.0 {
        return Err(TargetError::DegenerateRegion(format!("ε = {eps} ≥ (1 − c)/2")));
    }
    Ok(())
}

pub fn epsilon_boundary_area(c: f64, sigma: f64, psi_val: f64, eps: f64) -> Result<f64, TargetError> {
    check_eps(c, sigma, psi_val, eps)?;
    Ok(epsilon_boundary_area_generic(c, sigma / psi_val, eps))
}

pub fn inner_trapezoid_area(c: f64, sigma: f64, psi_val: f64, eps: f64) -> Result<f64, TargetError> {
    check_eps(c, sigma, psi_val, eps)?;
    let v = inner_trapezoid_area_generic(c, sigma / psi_val, eps);
    if v <= 0.0 {
        return Err(TargetError::DegenerateRegion(format!("inner area {v} is not positive")));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub k: u32,
    pub in_a_k: bool,
    pub in_w_k: Option<bool>,
    pub in_s_k: Option<bool>,
    pub shortest_relevant_vector: Option<f64>,
}

/// For each `k`: membership of `ω` in `A_k`, and of `g_{−k log b}ω` in the
/// `W` band and `S` annulus at `ψ(b^k)`. Empty bands report `None`.
pub fn target_sweep(
    s: &TranslationSurface,
    p: &TargetParams,
    c_h: f64,
    ks: &[u32],
    cfg: &EnumConfig,
) -> Result<Vec<SweepRow>, TargetError> {
    ks.iter()
        .map(|&k| {
            let pk = p.with_k(k);
            let pulled = pull_back(s, &pk, k)?;
            let psi_val = pk.psi_at_k();
            let w = SectorAnnulus::w_band(c_h, pk.sigma, psi_val).ok();
            let sa = SectorAnnulus::s_annulus(c_h, pk.sigma, psi_val).ok();
            let reach = [Some(pk.trapezoid(Sign::Plus).reach()), w.map(|r| r.r_max), sa.map(|r| r.r_max)]
                .into_iter()
                .flatten()
                .fold(0.0, f64::max);
            let set = enumerate_with(&pulled, reach, cfg)?;
            let tp = pk.trapezoid(Sign::Plus);
            let tm = pk.trapezoid(Sign::Minus);
            let vs = || set.vectors.iter().map(|h| h.v);
            let in_a_k = vs().any(|v| tp.contains(v)) && vs().any(|v| tm.contains(v));
            let shortest = set.vectors.iter().map(|h| h.length).fold(f64::INFINITY, f64::min);
            Ok(SweepRow {
                k,
                in_a_k,
                in_w_k: w.map(|r| r.hit_by(vs())),
                in_s_k: sa.map(|r| r.hit_by(vs())),
                shortest_relevant_vector: shortest.is_finite().then_some(shortest),
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let opt = |b: Option<bool>| b.map_or_else(|| "empty".to_string(), |v| v.to_string());
    let mut out = String::from("k,in_A_k,in_W_k,in_S_k,shortest_relevant_vector\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.k,
            r.in_a_k,
            opt(r.in_w_k),
            opt(r.in_s_k),
            r.shortest_relevant_vector.map_or_else(String::new, |v| format!("{v:?}"))
        ));
    }
    out
}

/// `s₀ = ⌈log 2 / (2 log b)⌉`.
pub fn pullback_shift(b: f64) -> u32 {
    (2f64.ln() / (2.0 * b.ln())).ceil() as u32
}

/// `arctan(σ / (ψ(b^ρ) b^{2ρ − 2s₀}))`.
pub fn pullback_gap_bound(p: &TargetParams, rho: u32) -> f64 {
    let s0 = pullback_shift(p.b);
    let psi = p.with_k(rho).psi_at_k();
    let expo = 2.0 * rho as f64 - 2.0 * s0 as f64;
    (p.sigma / (psi * p.b.powf(expo))).atan()
}

/// An exact `b` as a rational, when it has a small denominator.
pub fn base_as_rational(b: f64) -> Option<BigRational> {
    exact_base(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus_get;

    fn t(c: f64, sigma: f64, psi: f64, sign: Sign) -> Trapezoid {
        Trapezoid::new(c, sigma, psi, sign).unwrap()
    }

    #[test]
    fn trapezoid_examples() {
        let tp = t(0.0, 0.5, 1.0, Sign::Plus);
        assert!(tp.contains(Vec2::new(1.0, 0.0)));
        assert!(t(0.3, 0.5, 2.0, Sign::Minus).contains(Vec2::new(1.0, 0.0)));
        assert!(tp.contains(Vec2::new(0.5, 0.2)));
        assert!(!tp.contains(Vec2::new(0.5, 0.3)));
        assert_eq!(tp.corners().len(), 3);
        assert_eq!(t(0.5, 0.5, 1.0, Sign::Minus).corners().len(), 4);
        assert!(Trapezoid::new(1.0, 0.5, 1.0, Sign::Plus).is_err());
    }

    #[test]
    fn area_examples() {
        assert_eq!(trapezoid_area(0.0, 0.5, 2.0).unwrap(), 0.125);
        let tiny = epsilon_boundary_area(0.0, 0.5, 2.0, 1e-12).unwrap();
        assert!(tiny < 1e-11);
        assert_eq!(inner_trapezoid_area(0.0, 0.5, 2.0, 0.0).unwrap(), 0.125);
        assert!(matches!(epsilon_boundary_area(0.2, 0.5, 2.0, 0.4), Err(TargetError::DegenerateRegion(_))));
        let inner = inner_trapezoid_area(0.0, 0.5, 2.0, 0.01).unwrap();
        assert!((inner - 0.10259).abs() < 1e-4);
    }

    #[test]
    fn bump_values() {
        let tp = t(0.0, 0.5, 1.0, Sign::Plus);
        assert_eq!(bump_rho(Vec2::new(2.0, 0.0), &tp, 0.1), 0.0);
        // (0.9, 0.05): nearest boundary is y = 0 at distance 0.05
        assert!((bump_rho(Vec2::new(0.9, 0.05), &tp, 0.1) - 0.5).abs() < 1e-12);
        assert_eq!(bump_rho(Vec2::new(0.7, 0.2), &tp, 0.01), 1.0);
        assert_eq!(product_bump(Vec2::new(0.7, 0.2), Vec2::new(0.7, 0.2), 1.0, &tp, &tp, 0.01), 1.0);
        assert_eq!(product_bump(Vec2::new(0.7, 0.2), Vec2::new(0.7, 0.2), -1.0, &tp, &tp, 0.01), 0.0);
        assert_eq!(epsilon_ij(3, 7, 0.5), (-0.5f64).exp());
    }

    #[test]
    fn torus_memberships() {
        let torus = corpus_get("torus").unwrap();
        let cfg = EnumConfig::default();
        let p = TargetParams::new(std::f64::consts::E, 0.0, 0.5, RateFunction::constant(1.0), 3).unwrap();
        let h = h_membership(&torus, &p, &cfg).unwrap();
        assert!(h.hit);
        assert!(!h.distinct_witnesses);
        let three = torus.apply_matrix(&Mat2::geodesic(3f64.ln())).unwrap();
        let q = TargetParams::new(std::f64::consts::E, 0.9, 0.5, RateFunction::constant(1.0), 0).unwrap();
        assert!(!h_membership(&three, &q, &cfg).unwrap().hit);
        let big = torus.apply_matrix(&Mat2::from_ints(10, 0, 0, 10)).unwrap();
        assert!(!h_membership(&big, &p, &cfg).unwrap().hit);
        // k = 0 is plain H-membership
        assert_eq!(a_k_membership(&torus, &p.with_k(0), &cfg).unwrap().hit, h.hit);
    }

    #[test]
    fn annulus_examples() {
        let torus = corpus_get("torus").unwrap();
        let cfg = EnumConfig::default();
        let s = SectorAnnulus::new(0.9, 1.1, -PI, PI, AnnulusKind::S).unwrap();
        assert!(sector_annulus_membership(&torus, &s, &cfg).unwrap());
        let w = SectorAnnulus::new(0.9, 1.5, PI / 12.0, PI / 6.0, AnnulusKind::W).unwrap();
        assert!(!sector_annulus_membership(&torus, &w, &cfg).unwrap());
        assert!(matches!(SectorAnnulus::new(1.0, 1.0, 0.0, 1.0, AnnulusKind::S), Err(TargetError::EmptyRegion(_))));
        assert!(matches!(SectorAnnulus::w_band(0.9, 0.5, 1.0), Err(TargetError::EmptyRegion(_))));
        assert!(SectorAnnulus::w_band(0.5, 0.5, 1.0).is_ok());
    }

    #[test]
    fn shift_rule() {
        assert_eq!(pullback_shift(std::f64::consts::E), 1);
        assert_eq!(pullback_shift(1.1), 4);
    }
}
