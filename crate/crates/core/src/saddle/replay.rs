//! Independent check of a recorded witness: develop the straight segment
//! polygon by polygon and confirm it crosses exactly the recorded edges,
//! avoids every cone point in its interior, and lands on the recorded end.

use super::HolonomyVector;
use crate::surface::{TranslationSurface, Vec2};

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReplayError {
    #[error("vector carries no witness")]
    MissingWitness,
    #[error("direction does not leave the start corner into its polygon")]
    BadStartDirection,
    #[error("crossing {step}: expected polygon {expected}, segment is in polygon {actual}")]
    WrongPolygon { step: usize, expected: usize, actual: usize },
    #[error("crossing {step}: segment does not cross edge {edge} through its interior")]
    MissedEdge { step: usize, edge: usize },
    #[error("segment leaves polygon {polygon} before the recorded crossing")]
    EarlyExit { polygon: usize },
    #[error("segment passes through a vertex of polygon {polygon}")]
    HitsVertex { polygon: usize },
    #[error("segment ends at {actual:?}, expected the end corner")]
    WrongEnd { actual: Vec2 },
}

/// Replays `h` on `s`, returning the developed displacement on success.
pub fn replay_witness(s: &TranslationSurface, h: &HolonomyVector) -> Result<Vec2, ReplayError> {
    let chain = h.witness.as_ref().ok_or(ReplayError::MissingWitness)?;
    let v = h.v;
    let polys = s.polygons();
    let (mut p, sv) = h.start;
    let start_poly = &polys[p];
    let d1 = start_poly.edge(sv);
    let opening = start_poly.interior_angle(sv);
    let dir = ccw_angle(d1, v);
    if !(dir < opening - TOL || dir > std::f64::consts::TAU - TOL) {
        return Err(ReplayError::BadStartDirection);
    }
    let mut off = -start_poly.vertex(sv);
    let mut lam_in = 0.0;
    let mut entry: Option<usize> = None;
    for (step, &(q, e)) in chain.iter().enumerate() {
        if q != p {
            return Err(ReplayError::WrongPolygon { step, expected: q, actual: p });
        }
        let poly = &polys[p];
        let a = poly.vertex(e) + off;
        let edge = poly.edge(e);
        let den = v.cross(edge);
        if den.abs() <= TOL * v.norm() * edge.norm() {
            return Err(ReplayError::MissedEdge { step, edge: e });
        }
        let lam = a.cross(edge) / den;
        let mu = a.cross(v) / den;
        if !(lam > lam_in + TOL && lam < 1.0 - TOL && mu > TOL && mu < 1.0 - TOL) {
            return Err(ReplayError::MissedEdge { step, edge: e });
        }
        check_clear(s, p, off, v, lam_in, lam, &[Some(e), entry])?;
        off = off + s.gluing_shift((p, e));
        let (np, ne) = s.partner((p, e));
        p = np;
        entry = Some(ne);
        lam_in = lam;
    }
    let (ep, ev) = h.end;
    if ep != p {
        return Err(ReplayError::WrongPolygon { step: chain.len(), expected: ep, actual: p });
    }
    let n = polys[p].len();
    check_clear(s, p, off, v, lam_in, 1.0, &[Some(ev), Some((ev + n - 1) % n), entry])?;
    let end = polys[p].vertex(ev) + off;
    if (end - v).norm() > TOL * v.norm().max(1.0) {
        return Err(ReplayError::WrongEnd { actual: end });
    }
    Ok(end)
}

/// No vertex of polygon `p` lies on the open piece `(lam_in, lam_out)` of the
/// segment, and no edge other than `allowed` is crossed there.
fn check_clear(
    s: &TranslationSurface,
    p: usize,
    off: Vec2,
    v: Vec2,
    lam_in: f64,
    lam_out: f64,
    allowed: &[Option<usize>],
) -> Result<(), ReplayError> {
    let poly = &s.polygons()[p];
    let vv = v.norm_sq();
    for k in 0..poly.len() {
        let w = poly.vertex(k) + off;
        let lam = w.dot(v) / vv;
        let dist = (w - lam * v).norm();
        if dist <= TOL * v.norm().max(1.0) && lam > lam_in + TOL && lam < lam_out - TOL {
            return Err(ReplayError::HitsVertex { polygon: p });
        }
    }
    for e in 0..poly.len() {
        if allowed.contains(&Some(e)) {
            continue;
        }
        let a = poly.vertex(e) + off;
        let edge = poly.edge(e);
        let den = v.cross(edge);
        if den.abs() <= TOL * v.norm() * edge.norm() {
            continue;
        }
        let lam = a.cross(edge) / den;
        let mu = a.cross(v) / den;
        if lam > lam_in + TOL && lam < lam_out - TOL && (-TOL..=1.0 + TOL).contains(&mu) {
            return Err(ReplayError::EarlyExit { polygon: p });
        }
    }
    Ok(())
}

fn ccw_angle(a: Vec2, b: Vec2) -> f64 {
    let t = a.cross(b).atan2(a.dot(b));
    if t < 0.0 {
        t + std::f64::consts::TAU
    } else {
        t
    }
}
