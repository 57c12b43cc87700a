//! Straight-line unfolding from one triangle corner.
//!
//! Every direction leaving a cone point lies in exactly one corner sector
//! `[AB, AC)` of one triangle. The ray `AB` ends at the vertex `B`; the open
//! wedge between `AB` and `AC` is pushed across the opposite side and, each
//! time a developed vertex falls strictly inside it, that vertex is emitted as
//! a saddle connection and the wedge splits in two. Branches whose exit side
//! lies beyond the radius inside the wedge are cut.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use super::field::{add, norm_sq, to_f64, Field, P};
use super::triangulate::Tri;
use crate::surface::{Corner, EdgeRef};

/// Nodes are added to the shared counter in batches of this size.
const BUDGET_BATCH: u64 = 1024;

/// Relative slack in the pruning distance, so rounding can never cut a branch
/// that still reaches the closed disk.
const PRUNE_SLACK: f64 = 1e-9;

pub(crate) struct Search<'a, S> {
    pub tris: &'a [Tri<S>],
    /// Emission bound on the squared length, in the model's units.
    pub r2: S,
    /// Pruning radius in the model's units, as a double.
    pub r: f64,
    pub keep_witnesses: bool,
    pub budget: u64,
    pub nodes: &'a AtomicU64,
    pub aborted: &'a AtomicBool,
}

pub(crate) struct Found<S> {
    pub v: P<S>,
    pub start: Corner,
    pub end: Corner,
    pub start_cone: usize,
    pub end_cone: usize,
    pub witness: Option<Vec<EdgeRef>>,
}

struct Frame<S> {
    tri: usize,
    side: usize,
    off: P<S>,
    lo: P<S>,
    hi: P<S>,
    path_len: usize,
}

pub(crate) struct BudgetExceeded;

impl<S: Field> Search<'_, S> {
    /// All saddle connections leaving corner `c` of triangle `t` in the
    /// sector `[AB, AC)`.
    pub fn run(&self, t: usize, c: usize) -> Result<Vec<Found<S>>, BudgetExceeded> {
        let tri = &self.tris[t];
        let a = tri.pos[c];
        let off = [-a[0], -a[1]];
        let b = add(tri.pos[(c + 1) % 3], off);
        let cc = add(tri.pos[(c + 2) % 3], off);
        let start = tri.corner[c];
        let start_cone = tri.cone[c];
        let mut out = Vec::new();
        let mut path: Vec<EdgeRef> = Vec::new();
        let emit = |out: &mut Vec<Found<S>>, v: P<S>, end: Corner, end_cone: usize, path: &Vec<EdgeRef>| {
            out.push(Found {
                v,
                start,
                end,
                start_cone,
                end_cone,
                witness: self.keep_witnesses.then(|| path.clone()),
            });
        };
        if norm_sq(b) <= self.r2 {
            emit(&mut out, b, tri.corner[(c + 1) % 3], tri.cone[(c + 1) % 3], &path);
        }
        let mut stack = vec![Frame { tri: t, side: (c + 1) % 3, off, lo: b, hi: cc, path_len: 0 }];
        let mut local_nodes = 0u64;
        while let Some(f) = stack.pop() {
            let cur = &self.tris[f.tri];
            let p_lo = add(cur.pos[f.side], f.off);
            let p_hi = add(cur.pos[(f.side + 1) % 3], f.off);
            if clipped_distance(to_f64(p_lo), to_f64(p_hi), to_f64(f.lo), to_f64(f.hi))
                > self.r * (1.0 + PRUNE_SLACK) + PRUNE_SLACK
            {
                continue;
            }
            local_nodes += 1;
            if local_nodes == BUDGET_BATCH {
                self.charge(local_nodes)?;
                local_nodes = 0;
            }
            path.truncate(f.path_len);
            if let Some(e) = cur.edge[f.side] {
                path.push(e);
            }
            let (nt, ns) = cur.nb[f.side];
            let next = &self.tris[nt];
            let off = add(f.off, cur.shift[f.side]);
            let apex = (ns + 2) % 3;
            let d = add(next.pos[apex], off);
            let left_of_lo = S::orient(f.lo, d) == Ordering::Greater;
            let right_of_hi = S::orient(d, f.hi) == Ordering::Greater;
            let path_len = path.len();
            if left_of_lo && right_of_hi {
                if norm_sq(d) <= self.r2 {
                    emit(&mut out, d, next.corner[apex], next.cone[apex], &path);
                }
                stack.push(Frame { tri: nt, side: (ns + 2) % 3, off, lo: d, hi: f.hi, path_len });
                stack.push(Frame { tri: nt, side: (ns + 1) % 3, off, lo: f.lo, hi: d, path_len });
            } else if !right_of_hi {
                stack.push(Frame { tri: nt, side: (ns + 1) % 3, off, lo: f.lo, hi: f.hi, path_len });
            } else {
                stack.push(Frame { tri: nt, side: (ns + 2) % 3, off, lo: f.lo, hi: f.hi, path_len });
            }
        }
        self.charge(local_nodes)?;
        Ok(out)
    }

    fn charge(&self, n: u64) -> Result<(), BudgetExceeded> {
        let total = self.nodes.fetch_add(n, AtomicOrdering::Relaxed) + n;
        if total > self.budget {
            self.aborted.store(true, AtomicOrdering::Relaxed);
            return Err(BudgetExceeded);
        }
        if self.aborted.load(AtomicOrdering::Relaxed) {
            return Err(BudgetExceeded);
        }
        Ok(())
    }
}

/// Distance from the origin to the part of segment `p q` inside the wedge
/// spanned by rays `lo` and `hi`. Falls back to the whole segment when the
/// clip is numerically ill-posed, which can only make pruning weaker.
fn clipped_distance(p: [f64; 2], q: [f64; 2], lo: [f64; 2], hi: [f64; 2]) -> f64 {
    let e = [q[0] - p[0], q[1] - p[1]];
    let hit = |w: [f64; 2]| -> Option<[f64; 2]> {
        let den = w[0] * e[1] - w[1] * e[0];
        let num = p[0] * e[1] - p[1] * e[0];
        let lam = num / den;
        (den.abs() > 0.0 && lam.is_finite() && lam > 0.0).then(|| [w[0] * lam, w[1] * lam])
    };
    match (hit(lo), hit(hi)) {
        (Some(a), Some(b)) => segment_distance(a, b),
        _ => segment_distance(p, q),
    }
}

/// Distance from the origin to segment `a b`.
fn segment_distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    let e = [b[0] - a[0], b[1] - a[1]];
    let len2 = e[0] * e[0] + e[1] * e[1];
    let t = if len2 > 0.0 { (-(a[0] * e[0] + a[1] * e[1]) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (a[0] + t * e[0]).hypot(a[1] + t * e[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_distance_inside_wedge() {
        // horizontal segment y = 1 from x = -10 to 10, wedge between 45° and 60°
        let hi = [0.5, 3f64.sqrt() / 2.0];
        let d = clipped_distance([10.0, 1.0], [-10.0, 1.0], [1.0, 1.0], hi);
        assert!((d - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(segment_distance([10.0, 1.0], [-10.0, 1.0]), 1.0);
    }
}
