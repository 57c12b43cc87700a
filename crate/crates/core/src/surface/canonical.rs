//! Relabeling-invariant normal form of a surface presentation.
//!
//! Each polygon is rotated so that its vertex list, after translating the
//! first vertex to the origin, is lexicographically least; polygons are then
//! sorted, and among orderings of congruent polygons the one giving the least
//! sorted gluing list is kept.

use sha2::{Digest, Sha256};

use super::coord::{format_rational, Arithmetic, QPoint, Vec2};
use super::TranslationSurface;

/// Grid used to order floating coordinates; values closer than this may
/// compare either way, which `approx_eq` tolerates.
const FLOAT_KEY_QUANTUM: f64 = 1e-9;

/// Above this many candidate orderings of congruent polygons only the
/// stable order is tried.
const MAX_PERMUTATIONS: usize = 40_320;

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub arithmetic: Arithmetic,
    /// Translated and rotated vertices, in canonical polygon order.
    pub polygons: Vec<Vec<Vec2>>,
    pub exact: Option<Vec<Vec<QPoint>>>,
    /// Gluings `[a, i, b, j]` with `(a, i) < (b, j)`, sorted.
    pub gluings: Vec<[usize; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PolyKey {
    Exact(Vec<QPoint>),
    Float(Vec<(i64, i64)>),
}

fn quantize(v: f64) -> i64 {
    (v / FLOAT_KEY_QUANTUM).round() as i64
}

impl CanonicalForm {
    pub fn of(s: &TranslationSurface) -> Self {
        let polys = s.polygons();
        let exact = s.exact_polygons();
        let rotated_key = |p: usize, r: usize| -> PolyKey {
            let n = polys[p].len();
            match exact {
                Some(q) => {
                    let o = &q[p][r];
                    PolyKey::Exact((0..n).map(|k| &q[p][(r + k) % n] - o).collect())
                }
                None => {
                    let o = polys[p].vertex(r);
                    PolyKey::Float(
                        (0..n)
                            .map(|k| {
                                let d = polys[p].vertex(r + k) - o;
                                (quantize(d.x), quantize(d.y))
                            })
                            .collect(),
                    )
                }
            }
        };
        let mut rotation = Vec::with_capacity(polys.len());
        let mut keys = Vec::with_capacity(polys.len());
        for (p, poly) in polys.iter().enumerate() {
            let (r, key) = (0..poly.len())
                .map(|r| (r, rotated_key(p, r)))
                .min_by(|a, b| a.1.cmp(&b.1))
                .expect("polygons have vertices");
            rotation.push(r);
            keys.push(key);
        }
        let mut order: Vec<usize> = (0..polys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));

        // runs of congruent polygons in sorted order
        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..=order.len() {
            if i == order.len() || keys[order[i]] != keys[order[start]] {
                groups.push((start, i));
                start = i;
            }
        }
        let candidates: usize = groups
            .iter()
            .map(|&(a, b)| (1..=b - a).product::<usize>())
            .fold(1usize, |acc, f| acc.saturating_mul(f));

        let relabel = |order: &[usize]| -> Vec<[usize; 4]> {
            let mut position = vec![0; order.len()];
            for (new, &old) in order.iter().enumerate() {
                position[old] = new;
            }
            let map = |p: usize, e: usize| {
                let n = polys[p].len();
                (position[p], (e + n - rotation[p]) % n)
            };
            let mut out: Vec<[usize; 4]> = s
                .gluings()
                .iter()
                .map(|g| {
                    let a = map(g.polygon_a, g.edge_a);
                    let b = map(g.polygon_b, g.edge_b);
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    [a.0, a.1, b.0, b.1]
                })
                .collect();
            out.sort_unstable();
            out
        };

        let mut best_order = order.clone();
        let mut best = relabel(&order);
        if candidates > 1 && candidates <= MAX_PERMUTATIONS {
            let mut current = order.clone();
            permute_groups(&groups, 0, &mut current, &mut |cand| {
                let g = relabel(cand);
                if g < best {
                    best = g;
                    best_order = cand.to_vec();
                }
            });
        }

        let polygons = best_order
            .iter()
            .map(|&p| {
                let n = polys[p].len();
                let o = polys[p].vertex(rotation[p]);
                (0..n).map(|k| polys[p].vertex(rotation[p] + k) - o).collect()
            })
            .collect();
        let exact = exact.map(|q| {
            best_order
                .iter()
                .map(|&p| {
                    let n = q[p].len();
                    let o = &q[p][rotation[p]];
                    (0..n).map(|k| &q[p][(rotation[p] + k) % n] - o).collect()
                })
                .collect()
        });
        Self { arithmetic: s.arithmetic(), polygons, exact, gluings: best }
    }

    /// Equality of canonical forms: exact comparison when both sides carry
    /// exact coordinates, otherwise coordinates within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.gluings != other.gluings || self.polygons.len() != other.polygons.len() {
            return false;
        }
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return a == b;
        }
        self.polygons.iter().zip(&other.polygons).all(|(p, q)| {
            p.len() == q.len() && p.iter().zip(q).all(|(u, v)| (*u - *v).norm() <= tol)
        })
    }

    /// Stable text rendering, the input to [`CanonicalForm::fingerprint`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.arithmetic.to_string());
        match &self.exact {
            Some(q) => {
                for p in q {
                    out.push('|');
                    for v in p {
                        out.push_str(&format!("{},{};", format_rational(&v.x), format_rational(&v.y)));
                    }
                }
            }
            None => {
                for p in &self.polygons {
                    out.push('|');
                    for v in p {
                        out.push_str(&format!("{:016x},{:016x};", v.x.to_bits(), v.y.to_bits()));
                    }
                }
            }
        }
        for g in &self.gluings {
            out.push_str(&format!("#{},{},{},{}", g[0], g[1], g[2], g[3]));
        }
        out
    }

    /// SHA-256 of the canonical rendering, hex encoded.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.render().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.arithmetic == other.arithmetic && self.render() == other.render()
    }
}

fn permute_groups(
    groups: &[(usize, usize)],
    g: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if g == groups.len() {
        visit(current);
        return;
    }
    let (a, b) = groups[g];
    if b - a == 1 {
        permute_groups(groups, g + 1, current, visit);
        return;
    }
    // Heap's algorithm over current[a..b]
    let n = b - a;
    let mut c = vec![0usize; n];
    permute_groups(groups, g + 1, current, visit);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                current.swap(a, a + i);
            } else {
                current.swap(a + c[i], a + i);
            }
            permute_groups(groups, g + 1, current, visit);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
