//! Complete enumeration of saddle-connection holonomy vectors up to a length
//! bound, by unfolding straight lines from every cone point.

mod cache;
mod field;
mod replay;
mod triangulate;
mod unfold;

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicU64};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

pub use cache::{cache_dir_from_env, enumerate_cached, CacheError, CACHE_DIR_ENV};
pub use replay::{replay_witness, ReplayError};

use crate::surface::{f64_to_rat, Arithmetic, Corner, EdgeRef, TranslationSurface, Vec2, EPS_EXACT};
use field::{Field, P};
use unfold::Search;

/// Default cap on explored unfolding nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Largest scaled coordinate for which the integer path is used; keeps every
/// cross product comfortably inside `i128`.
const MAX_SCALED: f64 = 1e17;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SaddleError {
    #[error("unfolding exceeded the node budget of {limit}")]
    BudgetExceeded { limit: u64 },
    #[error("no saddle connection of length at most {cutoff}")]
    NotFoundBelowCutoff { cutoff: f64 },
    #[error("invalid radius {0}: must be positive and finite")]
    InvalidRadius(f64),
    #[error("radius grid must be positive and strictly increasing")]
    InvalidGrid,
    #[error("internal enumeration failure: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumConfig {
    pub node_budget: u64,
    /// Keep the edge-crossing chain of every vector (memory heavy at large radii).
    pub keep_witnesses: bool,
    /// Spread seeds over the rayon pool.
    pub parallel: bool,
}

impl Default for EnumConfig {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET, keep_witnesses: true, parallel: true }
    }
}

/// The holonomy of one directed saddle connection.
#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyVector {
    pub v: Vec2,
    /// Exact coordinates as integers over [`HolonomySet::denominator`].
    pub lattice: Option<[i128; 2]>,
    pub length: f64,
    /// `arg(v)` in `[-π, π)`.
    pub angle: f64,
    pub start: Corner,
    pub end: Corner,
    pub start_cone: usize,
    pub end_cone: usize,
    /// Polygon edges crossed, in order.
    pub witness: Option<Vec<EdgeRef>>,
}

impl HolonomyVector {
    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.angle
            .total_cmp(&other.angle)
            .then(self.length.total_cmp(&other.length))
            .then(self.start.cmp(&other.start))
            .then(self.end.cmp(&other.end))
            .then(self.witness.cmp(&other.witness))
    }
}

/// Every saddle connection of length at most `radius`, in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct HolonomySet {
    pub radius: f64,
    /// Common denominator of exact coordinates, for rational surfaces.
    pub denominator: Option<i128>,
    pub vectors: Vec<HolonomyVector>,
    /// Unfolding nodes explored.
    pub nodes: u64,
}

impl HolonomySet {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HolonomyVector> {
        self.vectors.iter()
    }

    /// Whether `h` has length at most `r`, decided exactly when possible.
    pub fn within(&self, h: &HolonomyVector, r: f64) -> bool {
        match (h.lattice, self.denominator) {
            (Some([x, y]), Some(l)) => match radius_sq_floor(r, l) {
                Some(bound) => x * x + y * y <= bound,
                None => true,
            },
            _ => h.length <= r + EPS_EXACT * r.max(1.0),
        }
    }

    pub fn count_within(&self, r: f64) -> usize {
        self.vectors.iter().filter(|h| self.within(h, r)).count()
    }

    /// The sub-collection of length at most `r <= radius`.
    pub fn truncated(&self, r: f64) -> HolonomySet {
        HolonomySet {
            radius: r.min(self.radius),
            denominator: self.denominator,
            vectors: self.vectors.iter().filter(|h| self.within(h, r)).cloned().collect(),
            nodes: self.nodes,
        }
    }

    /// Whether `-v` occurs as often as `v` for every holonomy `v`.
    pub fn is_symmetric(&self) -> bool {
        let key = |h: &HolonomyVector, sign: i128| -> (i128, i128) {
            match h.lattice {
                Some([x, y]) => (sign * x, sign * y),
                None => {
                    let q = |v: f64| (sign as f64 * v / 1e-9).round() as i128;
                    (q(h.v.x), q(h.v.y))
                }
            }
        };
        let mut pos: Vec<_> = self.vectors.iter().map(|h| key(h, 1)).collect();
        let mut neg: Vec<_> = self.vectors.iter().map(|h| key(h, -1)).collect();
        pos.sort_unstable();
        neg.sort_unstable();
        pos == neg
    }

    /// CSV with columns `re,im,length,angle,start,end` (cone-point ids).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,length,angle,start,end\n");
        for h in &self.vectors {
            out.push_str(&format!(
                "{:?},{:?},{:?},{:?},{},{}\n",
                h.v.x, h.v.y, h.length, h.angle, h.start_cone, h.end_cone
            ));
        }
        out
    }
}

/// `floor((r·l)²)` as an integer, `None` if it does not fit.
fn radius_sq_floor(r: f64, l: i128) -> Option<i128> {
    let rr = f64_to_rat(r)? * BigRational::from_integer(BigInt::from(l));
    let sq = &rr * &rr;
    sq.floor().to_integer().to_i128()
}

pub fn enumerate_holonomies(s: &TranslationSurface, r: f64) -> Result<HolonomySet, SaddleError> {
    enumerate_with(s, r, &EnumConfig::default())
}

pub fn enumerate_with(
    s: &TranslationSurface,
    r: f64,
    cfg: &EnumConfig,
) -> Result<HolonomySet, SaddleError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(SaddleError::InvalidRadius(r));
    }
    if s.arithmetic() == Arithmetic::Exact {
        if let Some((coords, l)) = scaled_integer_coords(s, r) {
            let r2 = radius_sq_floor(r, l)
                .ok_or_else(|| SaddleError::Internal("radius overflow".into()))?;
            let mut set = run_search::<i128>(s, &coords, r2, r * l as f64, cfg)?;
            set.radius = r;
            set.denominator = Some(l);
            let lf = l as f64;
            for h in &mut set.vectors {
                let [x, y] = h.lattice.expect("integer model");
                h.v = Vec2::new(x as f64 / lf, y as f64 / lf);
                h.length = h.v.norm();
                h.angle = h.v.arg();
            }
            set.vectors.sort_by(HolonomyVector::canonical_cmp);
            return Ok(set);
        }
        log::warn!("coordinates too large for the integer path; using floating predicates");
    }
    let coords: Vec<Vec<P<f64>>> = s
        .polygons()
        .iter()
        .map(|p| p.vertices().iter().map(|v| [v.x, v.y]).collect())
        .collect();
    let bound = r * (1.0 + EPS_EXACT);
    let mut set = run_search::<f64>(s, &coords, bound * bound, r, cfg)?;
    set.radius = r;
    set.vectors.sort_by(HolonomyVector::canonical_cmp);
    Ok(set)
}

/// Polygon coordinates multiplied by the least common denominator.
fn scaled_integer_coords(s: &TranslationSurface, r: f64) -> Option<(Vec<Vec<P<i128>>>, i128)> {
    let exact = s.exact_polygons()?;
    let mut l = BigInt::one();
    for p in exact {
        for v in p {
            l = l.lcm(v.x.denom()).lcm(v.y.denom());
        }
    }
    let lq = BigRational::from_integer(l.clone());
    let mut diam = 0f64;
    let coords = exact
        .iter()
        .map(|p| {
            p.iter()
                .map(|v| {
                    let x = (&v.x * &lq).to_integer().to_i128()?;
                    let y = (&v.y * &lq).to_integer().to_i128()?;
                    diam = diam.max((x as f64).abs()).max((y as f64).abs());
                    Some([x, y])
                })
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    let lf = l.to_f64()?;
    let reach = 4.0 * diam + 2.0 * r * lf;
    (reach.is_finite() && reach < MAX_SCALED).then(|| (coords, l.to_i128().expect("bounded by reach")))
}

fn run_search<S: Field>(
    s: &TranslationSurface,
    coords: &[Vec<P<S>>],
    r2: S,
    r_model: f64,
    cfg: &EnumConfig,
) -> Result<HolonomySet, SaddleError> {
    let tris = triangulate::build_mesh(s, coords).map_err(SaddleError::Internal)?;
    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let search = Search {
        tris: &tris,
        r2,
        r: r_model,
        keep_witnesses: cfg.keep_witnesses,
        budget: cfg.node_budget,
        nodes: &nodes,
        aborted: &aborted,
    };
    let seeds: Vec<(usize, usize)> = (0..tris.len()).flat_map(|t| (0..3).map(move |c| (t, c))).collect();
    let run = |&(t, c): &(usize, usize)| search.run(t, c);
    let parts: Vec<_> = if cfg.parallel {
        seeds.par_iter().map(run).collect()
    } else {
        seeds.iter().map(run).collect()
    };
    let mut vectors = Vec::new();
    for part in parts {
        let found = part.map_err(|_| SaddleError::BudgetExceeded { limit: cfg.node_budget })?;
        vectors.extend(found.into_iter().map(|f| {
            let v = Vec2::new(f.v[0].to_f64(), f.v[1].to_f64());
            HolonomyVector {
                v,
                lattice: S::lattice(f.v),
                length: v.norm(),
                angle: v.arg(),
                start: f.start,
                end: f.end,
                start_cone: f.start_cone,
                end_cone: f.end_cone,
                witness: f.witness,
            }
        }));
    }
    Ok(HolonomySet {
        radius: r_model,
        denominator: None,
        vectors,
        nodes: nodes.load(std::sync::atomic::Ordering::Relaxed),
    })
}

/// `(R, |Λ(R)|)` for each grid radius, from one enumeration at the largest.
pub fn count_growth(s: &TranslationSurface, grid: &[f64]) -> Result<Vec<(f64, usize)>, SaddleError> {
    count_growth_with(s, grid, &EnumConfig { keep_witnesses: false, ..EnumConfig::default() })
}

pub fn count_growth_with(
    s: &TranslationSurface,
    grid: &[f64],
    cfg: &EnumConfig,
) -> Result<Vec<(f64, usize)>, SaddleError> {
    validate_grid(grid)?;
    let Some(&r_max) = grid.last() else { return Ok(Vec::new()) };
    let set = enumerate_with(s, r_max, cfg)?;
    Ok(grid.iter().map(|&r| (r, set.count_within(r))).collect())
}

pub fn validate_grid(grid: &[f64]) -> Result<(), SaddleError> {
    let ok = grid.iter().all(|r| *r > 0.0 && r.is_finite()) && grid.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(SaddleError::InvalidGrid)
    }
}

/// Length of the shortest saddle connection, searched up to `cutoff`.
pub fn shortest_saddle_length(s: &TranslationSurface, cutoff: f64) -> Result<f64, SaddleError> {
    let cfg = EnumConfig { keep_witnesses: false, ..EnumConfig::default() };
    let set = enumerate_with(s, cutoff, &cfg)?;
    set.vectors
        .iter()
        .map(|h| h.length)
        .min_by(f64::total_cmp)
        .ok_or(SaddleError::NotFoundBelowCutoff { cutoff })
}

/// Least-squares slope of `log count` against `log R`, skipping zero counts.
pub fn loglog_slope(counts: &[(f64, usize)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        counts.iter().filter(|(_, c)| *c > 0).map(|&(r, c)| (r.ln(), (c as f64).ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
