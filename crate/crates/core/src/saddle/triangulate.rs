//! Ear-clipping triangulation and the triangle adjacency used for unfolding.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::field::{orient3, sub, Field, P};
use crate::surface::{Corner, EdgeRef, TranslationSurface};

/// Triangles of a simple counterclockwise polygon, as vertex index triples
/// in counterclockwise order. `None` only if the polygon is not simple.
pub(crate) fn triangulate<S: Field>(pts: &[P<S>]) -> Option<Vec<[usize; 3]>> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::with_capacity(pts.len().saturating_sub(2));
    while idx.len() > 3 {
        let m = idx.len();
        let ear = (0..m).find(|&k| {
            let (a, b, c) = (idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]);
            if orient3(pts[a], pts[b], pts[c]) != Ordering::Greater {
                return false;
            }
            idx.iter().all(|&o| o == a || o == b || o == c || !in_closed_triangle(pts[a], pts[b], pts[c], pts[o]))
        })?;
        let (a, b, c) = (idx[(ear + m - 1) % m], idx[ear], idx[(ear + 1) % m]);
        out.push([a, b, c]);
        idx.remove(ear);
    }
    if orient3(pts[idx[0]], pts[idx[1]], pts[idx[2]]) != Ordering::Greater {
        return None;
    }
    out.push([idx[0], idx[1], idx[2]]);
    Some(out)
}

fn in_closed_triangle<S: Field>(a: P<S>, b: P<S>, c: P<S>, p: P<S>) -> bool {
    orient3(a, b, p) != Ordering::Less && orient3(b, c, p) != Ordering::Less && orient3(c, a, p) != Ordering::Less
}

/// A triangle of the surface, in the coordinates of its polygon.
#[derive(Clone, Debug)]
pub(crate) struct Tri<S> {
    pub corner: [Corner; 3],
    pub cone: [usize; 3],
    pub pos: [P<S>; 3],
    /// Across side `s` (corner `s` → `s + 1`): neighbour triangle and its side.
    pub nb: [(usize, usize); 3],
    /// Translation taking neighbour coordinates to ours across side `s`.
    pub shift: [P<S>; 3],
    /// The polygon edge under side `s`, if it is not an internal diagonal.
    pub edge: [Option<EdgeRef>; 3],
}

/// Triangulates every polygon and wires up adjacency across diagonals and
/// glued edges.
pub(crate) fn build_mesh<S: Field>(
    s: &TranslationSurface,
    coords: &[Vec<P<S>>],
) -> Result<Vec<Tri<S>>, String> {
    let mut tris: Vec<Tri<S>> = Vec::new();
    // directed polygon-vertex pair → (triangle, side)
    let mut sides: HashMap<(usize, usize, usize), (usize, usize)> = HashMap::new();
    // polygon edge → (triangle, side)
    let mut edge_side: HashMap<EdgeRef, (usize, usize)> = HashMap::new();
    for (p, pts) in coords.iter().enumerate() {
        let n = pts.len();
        let faces = triangulate(pts).ok_or_else(|| format!("polygon {p} could not be triangulated"))?;
        for f in faces {
            let t = tris.len();
            let mut edge = [None; 3];
            for k in 0..3 {
                let (u, v) = (f[k], f[(k + 1) % 3]);
                sides.insert((p, u, v), (t, k));
                if v == (u + 1) % n {
                    edge[k] = Some((p, u));
                    edge_side.insert((p, u), (t, k));
                }
            }
            tris.push(Tri {
                corner: f.map(|v| (p, v)),
                cone: f.map(|v| s.cone_of((p, v))),
                pos: f.map(|v| pts[v]),
                nb: [(usize::MAX, 0); 3],
                shift: [[S::zero(), S::zero()]; 3],
                edge,
            });
        }
    }
    for t in 0..tris.len() {
        for k in 0..3 {
            let (nb, shift) = match tris[t].edge[k] {
                Some(e) => {
                    let other = s.partner(e);
                    let (t2, k2) = *edge_side.get(&other).ok_or("glued edge has no triangle side")?;
                    // our corner k + 1 sits on their corner k2
                    (( t2, k2), sub(tris[t].pos[(k + 1) % 3], tris[t2].pos[k2]))
                }
                None => {
                    let (p, u) = tris[t].corner[k];
                    let v = tris[t].corner[(k + 1) % 3].1;
                    let (t2, k2) = *sides.get(&(p, v, u)).ok_or("diagonal without a twin")?;
                    ((t2, k2), [S::zero(), S::zero()])
                }
            };
            tris[t].nb[k] = nb;
            tris[t].shift[k] = shift;
        }
    }
    Ok(tris)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_shape_with_flat_vertices() {
        let pts: Vec<P<i128>> = vec![[0, 0], [1, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2], [0, 1]];
        let tris = triangulate(&pts).unwrap();
        assert_eq!(tris.len(), 6);
        let twice_area: i128 = tris
            .iter()
            .map(|t| {
                let (a, b, c) = (pts[t[0]], pts[t[1]], pts[t[2]]);
                (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            })
            .sum();
        assert_eq!(twice_area, 6);
    }

    #[test]
    fn float_octagon() {
        let pts: Vec<P<f64>> = (0..8)
            .map(|k| {
                let a = std::f64::consts::PI * (2 * k + 1) as f64 / 8.0;
                [a.cos(), a.sin()]
            })
            .collect();
        assert_eq!(triangulate(&pts).unwrap().len(), 6);
    }
}
