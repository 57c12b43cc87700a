//! Direction sets of holonomy vectors, the horizontal gap `ζ_ω(R)`, gap
//! trajectories, normalized gap distributions, `V_δ` and circle averages.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::rate::RateFunction;
use crate::saddle::{
    enumerate_with, shortest_saddle_length, validate_grid, EnumConfig, HolonomySet, HolonomyVector,
    SaddleError,
};
use crate::surface::{Mat2, TranslationSurface, Vec2};

/// Two directions whose sine differs by less than this are the same angle.
pub const ANGLE_DEDUP_SINE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GapError {
    #[error("angles do not lie on both sides of the horizontal")]
    OneSidedSpectrum,
    #[error("need at least two distinct angles, have {0}")]
    TooFewAngles(usize),
    #[error("quadrature size {0} must be a power of two and at least 8")]
    InvalidQuadrature(usize),
    #[error("evaluation failed at θ = {theta}: {message}")]
    EvaluationFailed { theta: f64, message: String },
    #[error("δ = {0} must lie in (0, 1)")]
    InvalidDelta(f64),
    #[error(transparent)]
    Enumeration(#[from] SaddleError),
}

/// Folds an angle into `[-π, π)`.
pub fn fold_angle(a: f64) -> f64 {
    if (-PI..PI).contains(&a) {
        return a;
    }
    let r = (a + PI).rem_euclid(TAU) - PI;
    if r >= PI {
        -PI
    } else {
        r
    }
}

/// Sorted, deduplicated directions with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleSet {
    pub angles: Vec<f64>,
    pub multiplicity: Vec<usize>,
}

impl AngleSet {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// From raw angles (folded into `[-π, π)`); equal values merge.
    pub fn from_angles(raw: &[f64]) -> Self {
        let mut a: Vec<f64> = raw.iter().map(|&x| fold_angle(x)).collect();
        a.sort_by(f64::total_cmp);
        let mut angles: Vec<f64> = Vec::new();
        let mut multiplicity = Vec::new();
        for x in a {
            if angles.last() == Some(&x) {
                *multiplicity.last_mut().expect("parallel to angles") += 1;
            } else {
                angles.push(x);
                multiplicity.push(1);
            }
        }
        Self { angles, multiplicity }
    }

    /// From planar vectors; parallel vectors (exactly, or within
    /// [`ANGLE_DEDUP_SINE`] in floating point) share one angle.
    pub fn from_vectors(vs: &[Vec2]) -> Self {
        let items: Vec<(f64, Vec2, Option<[i128; 2]>)> = vs.iter().map(|&v| (v.arg(), v, None)).collect();
        Self::from_items(items)
    }

    fn from_items(mut items: Vec<(f64, Vec2, Option<[i128; 2]>)>) -> Self {
        items.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut angles: Vec<f64> = Vec::new();
        let mut multiplicity = Vec::new();
        let mut rep: Option<(Vec2, Option<[i128; 2]>)> = None;
        let mut shortest = f64::INFINITY;
        for (a, v, l) in items {
            let same = rep.is_some_and(|(rv, rl)| parallel(rv, rl, v, l));
            if same {
                *multiplicity.last_mut().expect("parallel to angles") += 1;
                // a class keeps the angle of its shortest member, so a
                // truncated set reports the same direction
                if v.norm_sq() < shortest {
                    shortest = v.norm_sq();
                    *angles.last_mut().expect("parallel to angles") = a;
                }
            } else {
                angles.push(a);
                multiplicity.push(1);
                rep = Some((v, l));
                shortest = v.norm_sq();
            }
        }
        Self { angles, multiplicity }
    }

    pub fn total_multiplicity(&self) -> usize {
        self.multiplicity.iter().sum()
    }
}

fn parallel(a: Vec2, al: Option<[i128; 2]>, b: Vec2, bl: Option<[i128; 2]>) -> bool {
    if let (Some(p), Some(q)) = (al, bl) {
        return p[0] * q[1] - p[1] * q[0] == 0 && p[0] * q[0] + p[1] * q[1] > 0;
    }
    a.dot(b) > 0.0 && a.cross(b).abs() <= ANGLE_DEDUP_SINE * a.norm() * b.norm()
}

/// `Θ_ω(R)` of a holonomy set.
pub fn angles(h: &HolonomySet) -> AngleSet {
    AngleSet::from_items(h.vectors.iter().map(|x| (x.angle, x.v, x.lattice)).collect())
}

/// `ζ = min{φ ≥ 0} − max{φ < 0}`.
pub fn horizontal_gap(a: &AngleSet) -> Result<f64, GapError> {
    let split = a.angles.partition_point(|&x| x < 0.0);
    if split == 0 || split == a.angles.len() {
        return Err(GapError::OneSidedSpectrum);
    }
    Ok(a.angles[split] - a.angles[split - 1])
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapSample {
    pub r: f64,
    pub count: usize,
    pub zeta: f64,
    pub scaled: f64,
    pub running_min: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapTrajectory {
    pub samples: Vec<GapSample>,
    /// Grid points dropped because the spectrum was one-sided there.
    pub dropped: Vec<f64>,
    pub warnings: Vec<String>,
}

impl GapTrajectory {
    /// Smallest scaled value over the grid, the finite stand-in for a liminf.
    pub fn running_min(&self) -> Option<f64> {
        self.samples.last().map(|s| s.running_min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("R,count,zeta,scaled,running_min\n");
        for s in &self.samples {
            out.push_str(&format!("{:?},{},{:?},{:?},{:?}\n", s.r, s.count, s.zeta, s.scaled, s.running_min));
        }
        out
    }
}

/// `ψ(R)·R²·ζ(R)` along `grid` from one enumeration at the largest radius.
pub fn liminf_trajectory(
    s: &TranslationSurface,
    psi: &RateFunction,
    grid: &[f64],
    cfg: &EnumConfig,
) -> Result<GapTrajectory, GapError> {
    validate_grid(grid)?;
    let Some(&r_max) = grid.last() else {
        return Ok(GapTrajectory { samples: Vec::new(), dropped: Vec::new(), warnings: Vec::new() });
    };
    let set = enumerate_with(s, r_max, cfg)?;
    Ok(trajectory_from_set(&set, psi, grid))
}

/// Trajectory over `grid` (all radii at most `set.radius`).
pub fn trajectory_from_set(set: &HolonomySet, psi: &RateFunction, grid: &[f64]) -> GapTrajectory {
    // every vector takes the angle of the shortest member of its parallel
    // class, as in `angles`
    let mut by_angle: Vec<usize> = (0..set.vectors.len()).collect();
    by_angle.sort_by(|&i, &j| set.vectors[i].angle.total_cmp(&set.vectors[j].angle));
    let mut class_of = vec![0usize; set.vectors.len()];
    let mut class_angle: Vec<(f64, f64)> = Vec::new();
    let mut rep: Option<&HolonomyVector> = None;
    for &i in &by_angle {
        let h = &set.vectors[i];
        let len2 = h.v.norm_sq();
        if rep.is_some_and(|r| parallel(r.v, r.lattice, h.v, h.lattice)) {
            let last = class_angle.last_mut().expect("a class is open");
            if len2 < last.1 {
                *last = (h.angle, len2);
            }
        } else {
            rep = Some(h);
            class_angle.push((h.angle, len2));
        }
        class_of[i] = class_angle.len() - 1;
    }
    let mut order: Vec<usize> = (0..set.vectors.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&set.vectors[i], &set.vectors[j]);
        match (a.lattice, b.lattice) {
            (Some(p), Some(q)) => (p[0] * p[0] + p[1] * p[1]).cmp(&(q[0] * q[0] + q[1] * q[1])),
            _ => a.length.total_cmp(&b.length),
        }
    });
    let mut next = 0;
    let mut min_nonneg = f64::INFINITY;
    let mut max_neg = f64::NEG_INFINITY;
    let mut samples: Vec<GapSample> = Vec::new();
    let mut dropped = Vec::new();
    let mut warnings = Vec::new();
    for &r in grid {
        while next < order.len() && set.within(&set.vectors[order[next]], r) {
            let a = class_angle[class_of[order[next]]].0;
            if a >= 0.0 {
                min_nonneg = min_nonneg.min(a);
            } else {
                max_neg = max_neg.max(a);
            }
            next += 1;
        }
        if !(min_nonneg.is_finite() && max_neg.is_finite()) {
            dropped.push(r);
            warnings.push(format!("R = {r}: one-sided spectrum, sample dropped"));
            continue;
        }
        let zeta = min_nonneg - max_neg;
        let scaled = psi.eval(r) * (r * r * zeta);
        let running_min = samples.last().map_or(scaled, |p: &GapSample| p.running_min.min(scaled));
        samples.push(GapSample { r, count: next, zeta, scaled, running_min });
    }
    GapTrajectory { samples, dropped, warnings }
}

/// Cyclic gaps between consecutive distinct angles, scaled by `|Θ|/2π`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedGaps {
    pub gaps: Vec<f64>,
}

impl NormalizedGaps {
    pub fn mean(&self) -> f64 {
        self.gaps.iter().sum::<f64>() / self.gaps.len() as f64
    }

    /// `(bin_left, bin_right, mass)` rows over `[0, upper)`; gaps at or above
    /// `upper` go to the last bin. Masses sum to 1.
    pub fn histogram(&self, bins: usize, upper: f64) -> Vec<(f64, f64, f64)> {
        let bins = bins.max(1);
        let width = upper / bins as f64;
        let mut counts = vec![0usize; bins];
        for &g in &self.gaps {
            let k = ((g / width).floor().max(0.0) as usize).min(bins - 1);
            counts[k] += 1;
        }
        let n = self.gaps.len() as f64;
        (0..bins)
            .map(|k| (k as f64 * width, (k + 1) as f64 * width, counts[k] as f64 / n))
            .collect()
    }
}

pub fn histogram_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("bin_left,bin_right,mass\n");
    for (l, r, m) in rows {
        out.push_str(&format!("{l:?},{r:?},{m:?}\n"));
    }
    out
}

pub fn gap_distribution(a: &AngleSet) -> Result<NormalizedGaps, GapError> {
    let n = a.angles.len();
    if n < 2 {
        return Err(GapError::TooFewAngles(n));
    }
    let scale = n as f64 / TAU;
    let mut gaps: Vec<f64> = a.angles.windows(2).map(|w| (w[1] - w[0]) * scale).collect();
    gaps.push((a.angles[0] + TAU - a.angles[n - 1]) * scale);
    Ok(NormalizedGaps { gaps })
}

/// `V_δ = max{1, ℓ^{−(1+δ)}}`.
pub fn v_delta_from_length(ell: f64, delta: f64) -> f64 {
    ell.powf(-(1.0 + delta)).max(1.0)
}

/// `V_δ(ω)`, with the systole searched up to `cutoff`.
pub fn v_delta(s: &TranslationSurface, delta: f64, cutoff: f64) -> Result<f64, GapError> {
    check_delta(delta)?;
    Ok(v_delta_from_length(shortest_saddle_length(s, cutoff)?, delta))
}

fn check_delta(delta: f64) -> Result<(), GapError> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(GapError::InvalidDelta(delta))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircleAverage {
    pub value: f64,
    pub n: usize,
    pub max_integrand: f64,
}

fn check_quadrature(n: usize) -> Result<(), GapError> {
    if n >= 8 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(GapError::InvalidQuadrature(n))
    }
}

/// Midpoint-rule nodes `θ_k = (k + ½)·2π/n`.
pub fn midpoint_nodes(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| (k as f64 + 0.5) * TAU / n as f64)
}

/// `(1/2π) ∫ f(g_t r_θ ω) dθ` by the midpoint rule with `n` nodes.
pub fn circle_average<F>(s: &TranslationSurface, t: f64, n: usize, f: F) -> Result<CircleAverage, GapError>
where
    F: Fn(&TranslationSurface) -> Result<f64, String> + Sync,
{
    check_quadrature(n)?;
    let g = Mat2::geodesic(t);
    let nodes: Vec<f64> = midpoint_nodes(n).collect();
    let values: Vec<Result<f64, GapError>> = nodes
        .par_iter()
        .map(|&theta| {
            let m = &g * &Mat2::rotation(theta);
            let fail = |message: String| GapError::EvaluationFailed { theta, message };
            let moved = s.apply_matrix(&m).map_err(|e| fail(e.to_string()))?;
            f(&moved).map_err(fail)
        })
        .collect();
    summarize(values, n)
}

fn summarize(values: Vec<Result<f64, GapError>>, n: usize) -> Result<CircleAverage, GapError> {
    let mut sum = 0.0;
    let mut max_integrand = f64::NEG_INFINITY;
    for v in values {
        let v = v?;
        sum += v;
        max_integrand = max_integrand.max(v);
    }
    Ok(CircleAverage { value: sum / n as f64, n, max_integrand })
}

/// Circle average of `V_δ` at flow time `t`, from a single enumeration: the
/// systole of `g_t r_θ ω` is at most `e^t ℓ(ω)`, and only vectors with
/// `|v| ≤ e^{2t} ℓ(ω)` can realise it.
pub fn v_delta_circle_average(
    s: &TranslationSurface,
    delta: f64,
    t: f64,
    n: usize,
    systole_cutoff: f64,
) -> Result<CircleAverage, GapError> {
    check_delta(delta)?;
    check_quadrature(n)?;
    let ell = shortest_saddle_length(s, systole_cutoff)?;
    let reach = (2.0 * t.abs()).exp() * ell * (1.0 + 1e-12);
    let cfg = EnumConfig { keep_witnesses: false, ..EnumConfig::default() };
    let set = enumerate_with(s, reach, &cfg)?;
    let g = Mat2::geodesic(t);
    let values: Vec<Result<f64, GapError>> = midpoint_nodes(n)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&theta| {
            let m = &g * &Mat2::rotation(theta);
            let shortest = set.vectors.iter().map(|h| m.apply(h.v).norm()).fold(f64::INFINITY, f64::min);
            if shortest.is_finite() {
                Ok(v_delta_from_length(shortest, delta))
            } else {
                Err(GapError::EvaluationFailed { theta, message: "no saddle connection".into() })
            }
        })
        .collect();
    summarize(values, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::corpus_get;
    use crate::saddle::enumerate_holonomies;

    #[test]
    fn angle_set_examples() {
        let a = AngleSet::from_vectors(&[Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)]);
        assert_eq!(a.angles, vec![0.0, PI / 2.0]);
        let b = AngleSet::from_vectors(&[Vec2::new(1.0, 1.0), Vec2::new(2.0, 2.0)]);
        assert_eq!(b.angles, vec![PI / 4.0]);
        assert_eq!(b.multiplicity, vec![2]);
        assert!(AngleSet::from_angles(&[]).is_empty());
        assert_eq!(AngleSet::from_angles(&[PI]).angles, vec![-PI]);
    }

    #[test]
    fn gap_examples() {
        assert_eq!(horizontal_gap(&AngleSet::from_angles(&[-PI / 4.0, 0.0])).unwrap(), PI / 4.0);
        assert_eq!(
            horizontal_gap(&AngleSet::from_angles(&[PI / 6.0, PI / 3.0])),
            Err(GapError::OneSidedSpectrum)
        );
        let t = corpus_get("torus").unwrap();
        let a = angles(&enumerate_holonomies(&t, 2.5).unwrap());
        assert_eq!(a.len(), 16);
        assert!((horizontal_gap(&a).unwrap() - 0.5f64.atan()).abs() < 1e-12);
    }

    #[test]
    fn torus_trajectory_and_linearity() {
        let t = corpus_get("torus").unwrap();
        let cfg = EnumConfig::default();
        let one = liminf_trajectory(&t, &RateFunction::constant(1.0), &[0.5, 2.5], &cfg).unwrap();
        assert_eq!(one.dropped, vec![0.5]);
        assert_eq!(one.samples.len(), 1);
        assert!((one.samples[0].scaled - 6.25 * 0.5f64.atan()).abs() < 1e-12);
        let two = liminf_trajectory(&t, &RateFunction::constant(2.0), &[0.5, 2.5], &cfg).unwrap();
        assert_eq!(two.samples[0].scaled, 2.0 * one.samples[0].scaled);
    }

    #[test]
    fn equally_spaced_gaps_are_one() {
        let a = AngleSet::from_angles(&(0..12).map(|k| -PI + k as f64 * TAU / 12.0).collect::<Vec<_>>());
        for g in gap_distribution(&a).unwrap().gaps {
            assert!((g - 1.0).abs() < 1e-12);
        }
        let b = gap_distribution(&AngleSet::from_angles(&[0.0, -PI])).unwrap();
        assert_eq!(b.gaps, vec![1.0, 1.0]);
        assert_eq!(gap_distribution(&AngleSet::from_angles(&[0.3])), Err(GapError::TooFewAngles(1)));
    }

    #[test]
    fn v_delta_examples() {
        assert_eq!(v_delta_from_length(1.0, 0.25), 1.0);
        assert!((v_delta_from_length(0.5, 0.25) - 2f64.powf(1.25)).abs() < 1e-12);
        let t = corpus_get("torus").unwrap();
        let g = t.apply_matrix(&Mat2::geodesic(4f64.ln())).unwrap();
        assert!((v_delta(&g, 0.5, 2.0).unwrap() - 8.0).abs() < 1e-12);
        assert_eq!(v_delta(&t, 1.5, 2.0), Err(GapError::InvalidDelta(1.5)));
    }

    #[test]
    fn circle_average_of_constant() {
        let t = corpus_get("torus").unwrap();
        for n in [8, 16] {
            let a = circle_average(&t, 1.0, n, |_| Ok(1.0)).unwrap();
            assert_eq!(a.value, 1.0);
            assert_eq!(a.n, n);
        }
        assert_eq!(circle_average(&t, 0.0, 12, |_| Ok(1.0)), Err(GapError::InvalidQuadrature(12)));
    }

    #[test]
    fn v_delta_average_matches_direct_evaluation() {
        let t = corpus_get("torus").unwrap();
        let fast = v_delta_circle_average(&t, 0.5, 1.0, 16, 2.0).unwrap();
        let slow = circle_average(&t, 1.0, 16, |s| {
            let ell = shortest_saddle_length(s, 3.0).map_err(|e| e.to_string())?;
            Ok(v_delta_from_length(ell, 0.5))
        })
        .unwrap();
        assert!((fast.value - slow.value).abs() < 1e-9 * slow.value);
    }
}
