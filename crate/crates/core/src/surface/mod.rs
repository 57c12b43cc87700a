//! Translation surfaces presented as planar polygons with edges glued by
//! translations, and the linear action of `GL(2, ℝ)` on them.

mod canonical;
mod coord;
mod io;
mod matrix;

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub use canonical::CanonicalForm;
pub use coord::{
    f64_to_rat, format_rational, parse_rational, rat_to_f64, Arithmetic, CoordParseError, QPoint,
    Vec2, CONE_ANGLE_TOL, EPS_EXACT,
};
pub use io::{CoordText, SurfaceDefinition};
pub use matrix::Mat2;

/// A polygon corner: `(polygon index, vertex index)`.
pub type Corner = (usize, usize);
/// A polygon edge: `(polygon index, edge index)`; edge `i` runs from vertex `i` to `i + 1`.
pub type EdgeRef = (usize, usize);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurfaceError {
    #[error("malformed surface definition: {0}")]
    Parse(String),
    #[error("polygon {polygon}: {reason}")]
    NonSimplePolygon { polygon: usize, reason: String },
    #[error("polygon {polygon} is not positively oriented")]
    NotPositivelyOriented { polygon: usize },
    #[error("gluing {gluing} refers to a polygon or edge out of range")]
    IndexOutOfRange { gluing: usize },
    #[error("edge {edge:?} appears in more than one gluing")]
    DuplicateEdge { edge: EdgeRef },
    #[error("edge {edge:?} is not glued to anything")]
    UnpairedEdge { edge: EdgeRef },
    #[error("edges {a:?} and {b:?} are not paired by a translation")]
    MismatchedEdge { a: EdgeRef, b: EdgeRef },
    #[error("polygons do not form a connected surface")]
    Disconnected,
    #[error("cone point {cone} has angle {angle} which is not a multiple of 2π")]
    BadConeAngle { cone: usize, angle: f64 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A planar polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarPolygon {
    vertices: Vec<Vec2>,
}

impl PlanarPolygon {
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Vec2 {
        self.vertices[i % self.vertices.len()]
    }

    pub fn edge(&self, i: usize) -> Vec2 {
        self.vertex(i + 1) - self.vertex(i)
    }

    pub fn area(&self) -> f64 {
        coord::twice_signed_area(&self.vertices) / 2.0
    }

    /// Interior angle at vertex `i`, in `(0, 2π)`.
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.len();
        let d1 = self.edge(i);
        let d2 = self.vertex(i + n - 1) - self.vertex(i);
        ccw_angle(d1, d2)
    }
}

/// Counterclockwise angle from `a` to `b`, in `[0, 2π)`.
fn ccw_angle(a: Vec2, b: Vec2) -> f64 {
    let t = a.cross(b).atan2(a.dot(b));
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

/// An identification of `edge_a` of `polygon_a` with `edge_b` of `polygon_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeIdentification {
    pub polygon_a: usize,
    pub edge_a: usize,
    pub polygon_b: usize,
    pub edge_b: usize,
}

impl EdgeIdentification {
    pub fn new(polygon_a: usize, edge_a: usize, polygon_b: usize, edge_b: usize) -> Self {
        Self { polygon_a, edge_a, polygon_b, edge_b }
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.polygon_a, self.edge_a, self.polygon_b, self.edge_b]
    }
}

/// An equivalence class of polygon vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConePoint {
    pub corners: Vec<Corner>,
    /// Total angle, a multiple of 2π.
    pub angle: f64,
    /// Zero order `k` with `angle = 2π(k + 1)`; marked points have `k = 0`.
    pub order: usize,
}

/// A validated translation surface. Immutable once built.
#[derive(Clone, Debug)]
pub struct TranslationSurface {
    arithmetic: Arithmetic,
    polygons: Vec<PlanarPolygon>,
    exact: Option<Vec<Vec<QPoint>>>,
    gluings: Vec<EdgeIdentification>,
    partner: Vec<Vec<EdgeRef>>,
    cone_points: Vec<ConePoint>,
    corner_cone: Vec<Vec<usize>>,
    area: f64,
    genus: usize,
}

impl TranslationSurface {
    /// Validates a definition and derives its cone-point data.
    pub fn build(def: &SurfaceDefinition) -> Result<Self, SurfaceError> {
        let arithmetic = def.arithmetic.unwrap_or(Arithmetic::Exact);
        let parse_err = |e: CoordParseError| SurfaceError::Parse(e.to_string());
        let gluings: Vec<EdgeIdentification> =
            def.gluings.iter().map(|g| EdgeIdentification::new(g[0], g[1], g[2], g[3])).collect();
        match arithmetic {
            Arithmetic::Exact => {
                let exact = def
                    .polygons
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|[x, y]| Ok(QPoint::new(x.to_rational()?, y.to_rational()?)))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(parse_err)?;
                Self::from_exact(exact, gluings)
            }
            Arithmetic::Float => {
                let polys = def
                    .polygons
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|[x, y]| Ok(Vec2::new(x.to_f64()?, y.to_f64()?)))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(parse_err)?;
                Self::from_float(polys, gluings)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        let def = SurfaceDefinition::from_json(text).map_err(|e| SurfaceError::Parse(e.to_string()))?;
        Self::build(&def)
    }

    pub fn from_exact(
        polygons: Vec<Vec<QPoint>>,
        gluings: Vec<EdgeIdentification>,
    ) -> Result<Self, SurfaceError> {
        for (p, pts) in polygons.iter().enumerate() {
            check_polygon_exact(p, pts)?;
        }
        let floats = polygons
            .iter()
            .map(|p| PlanarPolygon { vertices: p.iter().map(QPoint::to_vec2).collect() })
            .collect();
        Self::assemble(Arithmetic::Exact, floats, Some(polygons), gluings)
    }

    pub fn from_float(
        polygons: Vec<Vec<Vec2>>,
        gluings: Vec<EdgeIdentification>,
    ) -> Result<Self, SurfaceError> {
        for (p, pts) in polygons.iter().enumerate() {
            check_polygon_float(p, pts)?;
        }
        let polys = polygons.into_iter().map(|vertices| PlanarPolygon { vertices }).collect();
        Self::assemble(Arithmetic::Float, polys, None, gluings)
    }

    fn assemble(
        arithmetic: Arithmetic,
        polygons: Vec<PlanarPolygon>,
        exact: Option<Vec<Vec<QPoint>>>,
        gluings: Vec<EdgeIdentification>,
    ) -> Result<Self, SurfaceError> {
        let partner = pair_edges(&polygons, &gluings)?;
        for g in &gluings {
            let a = (g.polygon_a, g.edge_a);
            let b = (g.polygon_b, g.edge_b);
            let paired = match &exact {
                Some(q) => {
                    let ea = exact_edge(q, a);
                    let eb = exact_edge(q, b);
                    (&ea + &eb) == QPoint::zero() && ea != QPoint::zero()
                }
                None => {
                    let ea = polygons[a.0].edge(a.1);
                    let eb = polygons[b.0].edge(b.1);
                    let scale = ea.norm().max(eb.norm());
                    (ea + eb).norm() <= EPS_EXACT * scale.max(1.0)
                }
            };
            if !paired {
                return Err(SurfaceError::MismatchedEdge { a, b });
            }
        }
        check_connected(polygons.len(), &gluings)?;

        let mut corner_cone: Vec<Vec<usize>> =
            polygons.iter().map(|p| vec![usize::MAX; p.len()]).collect();
        let mut cone_points = Vec::new();
        for p in 0..polygons.len() {
            for v in 0..polygons[p].len() {
                if corner_cone[p][v] != usize::MAX {
                    continue;
                }
                let id = cone_points.len();
                let mut corners = Vec::new();
                let mut cur = (p, v);
                loop {
                    if corner_cone[cur.0][cur.1] != usize::MAX {
                        if cur != (p, v) {
                            return Err(SurfaceError::Internal(format!(
                                "vertex link through {cur:?} does not close up"
                            )));
                        }
                        break;
                    }
                    corner_cone[cur.0][cur.1] = id;
                    corners.push(cur);
                    cur = next_corner(&polygons, &partner, cur);
                }
                let angle: f64 = corners.iter().map(|&(q, w)| polygons[q].interior_angle(w)).sum();
                let turns = (angle / TAU).round();
                let ok_float = turns >= 1.0 && (angle - turns * TAU).abs() <= CONE_ANGLE_TOL;
                let ok_exact = match &exact {
                    Some(q) => exact_angle_closes(q, &corners),
                    None => true,
                };
                if !(ok_float && ok_exact) {
                    return Err(SurfaceError::BadConeAngle { cone: id, angle });
                }
                cone_points.push(ConePoint { corners, angle, order: turns as usize - 1 });
            }
        }

        let v = cone_points.len() as i64;
        let e = gluings.len() as i64;
        let f = polygons.len() as i64;
        let chi = v - e + f;
        if chi > 2 || chi % 2 != 0 {
            return Err(SurfaceError::Internal(format!("Euler characteristic {chi} is not 2 - 2g")));
        }
        let genus = ((2 - chi) / 2) as usize;
        let order_sum: usize = cone_points.iter().map(|c| c.order).sum();
        if order_sum as i64 != 2 * genus as i64 - 2 {
            return Err(SurfaceError::Internal(format!(
                "Gauss-Bonnet fails: sum of orders {order_sum}, genus {genus}"
            )));
        }
        let area = polygons.iter().map(PlanarPolygon::area).sum();
        Ok(Self { arithmetic, polygons, exact, gluings, partner, cone_points, corner_cone, area, genus })
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arithmetic
    }

    pub fn polygons(&self) -> &[PlanarPolygon] {
        &self.polygons
    }

    /// Exact coordinates, present for surfaces in the exact model.
    pub fn exact_polygons(&self) -> Option<&[Vec<QPoint>]> {
        self.exact.as_deref()
    }

    pub fn gluings(&self) -> &[EdgeIdentification] {
        &self.gluings
    }

    /// The edge glued to `edge`.
    pub fn partner(&self, edge: EdgeRef) -> EdgeRef {
        self.partner[edge.0][edge.1]
    }

    pub fn cone_points(&self) -> &[ConePoint] {
        &self.cone_points
    }

    /// Cone point id of a polygon corner.
    pub fn cone_of(&self, corner: Corner) -> usize {
        self.corner_cone[corner.0][corner.1]
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Sorted zero orders `k_i`, one per cone point (marked points give 0).
    pub fn stratum_signature(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = self.cone_points.iter().map(|c| c.order).collect();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        orders
    }

    /// Translation carrying polygon `edge.0` onto the polygon across `edge`:
    /// a point `x` of the partner polygon sits at `x + shift` next to `edge`.
    pub fn gluing_shift(&self, edge: EdgeRef) -> Vec2 {
        let (q, f) = self.partner(edge);
        // start of `edge` is identified with the end of its partner
        self.polygons[edge.0].vertex(edge.1) - self.polygons[q].vertex(f + 1)
    }

    pub fn gluing_shift_exact(&self, edge: EdgeRef) -> Option<QPoint> {
        let q = self.exact.as_ref()?;
        let (pb, f) = self.partner(edge);
        let nb = q[pb].len();
        Some(&q[edge.0][edge.1] - &q[pb][(f + 1) % nb])
    }

    /// `M · self`. Gluing combinatorics are kept; orientation-reversing
    /// matrices reverse vertex order so polygons stay counterclockwise.
    pub fn apply_matrix(&self, m: &Mat2) -> Result<Self, SurfaceError> {
        if m.is_singular() {
            return Err(SurfaceError::SingularMatrix);
        }
        let flip = m.det() < 0.0;
        let reindex_vertex = |n: usize, v: usize| if flip { (n - v) % n } else { v };
        let reindex_edge = |n: usize, e: usize| if flip { n - 1 - e } else { e };
        let reorder = |n: usize| -> Vec<usize> { (0..n).map(|new| reindex_vertex(n, new)).collect() };
        let gluings: Vec<EdgeIdentification> = self
            .gluings
            .iter()
            .map(|g| {
                let na = self.polygons[g.polygon_a].len();
                let nb = self.polygons[g.polygon_b].len();
                EdgeIdentification::new(
                    g.polygon_a,
                    reindex_edge(na, g.edge_a),
                    g.polygon_b,
                    reindex_edge(nb, g.edge_b),
                )
            })
            .collect();
        let result = match (&self.exact, m.is_exact()) {
            (Some(q), true) => {
                let polys = q
                    .iter()
                    .map(|pts| {
                        reorder(pts.len())
                            .into_iter()
                            .map(|old| m.apply_exact(&pts[old]).expect("exact matrix"))
                            .collect()
                    })
                    .collect();
                Self::from_exact(polys, gluings)
            }
            _ => {
                let polys = self
                    .polygons
                    .iter()
                    .map(|p| reorder(p.len()).into_iter().map(|old| m.apply(p.vertices[old])).collect())
                    .collect();
                Self::from_float(polys, gluings)
            }
        };
        result.map_err(|e| SurfaceError::Internal(format!("transformed surface failed validation: {e}")))
    }

    /// The same surface with coordinates demoted to the floating model.
    pub fn to_float(&self) -> Self {
        let mut s = self.clone();
        s.exact = None;
        s.arithmetic = Arithmetic::Float;
        s
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        CanonicalForm::of(self)
    }

    /// Isomorphism test via canonical forms; float surfaces compare within `tol`.
    pub fn is_isomorphic(&self, other: &Self, tol: f64) -> bool {
        self.canonical_form().approx_eq(&other.canonical_form(), tol)
    }

    /// The definition this surface would be written back as.
    pub fn to_definition(&self) -> SurfaceDefinition {
        let polygons = match &self.exact {
            Some(q) => q
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|v| [CoordText::Text(format_rational(&v.x)), CoordText::Text(format_rational(&v.y))])
                        .collect()
                })
                .collect(),
            None => self
                .polygons
                .iter()
                .map(|p| {
                    p.vertices
                        .iter()
                        .map(|v| [CoordText::Text(format!("{:?}", v.x)), CoordText::Text(format!("{:?}", v.y))])
                        .collect()
                })
                .collect(),
        };
        SurfaceDefinition {
            name: None,
            arithmetic: Some(self.arithmetic),
            polygons,
            gluings: self.gluings.iter().map(EdgeIdentification::as_array).collect(),
        }
    }
}

fn exact_edge(q: &[Vec<QPoint>], (p, e): EdgeRef) -> QPoint {
    let n = q[p].len();
    &q[p][(e + 1) % n] - &q[p][e]
}

fn pair_edges(
    polygons: &[PlanarPolygon],
    gluings: &[EdgeIdentification],
) -> Result<Vec<Vec<EdgeRef>>, SurfaceError> {
    const UNSET: EdgeRef = (usize::MAX, usize::MAX);
    let mut partner: Vec<Vec<EdgeRef>> = polygons.iter().map(|p| vec![UNSET; p.len()]).collect();
    for (i, g) in gluings.iter().enumerate() {
        let a = (g.polygon_a, g.edge_a);
        let b = (g.polygon_b, g.edge_b);
        for (p, e) in [a, b] {
            if p >= polygons.len() || e >= polygons[p].len() {
                return Err(SurfaceError::IndexOutOfRange { gluing: i });
            }
        }
        if a == b {
            return Err(SurfaceError::MismatchedEdge { a, b });
        }
        for (x, y) in [(a, b), (b, a)] {
            if partner[x.0][x.1] != UNSET {
                return Err(SurfaceError::DuplicateEdge { edge: x });
            }
            partner[x.0][x.1] = y;
        }
    }
    for (p, edges) in partner.iter().enumerate() {
        if let Some(e) = edges.iter().position(|&x| x == UNSET) {
            return Err(SurfaceError::UnpairedEdge { edge: (p, e) });
        }
    }
    Ok(partner)
}

fn check_connected(n: usize, gluings: &[EdgeIdentification]) -> Result<(), SurfaceError> {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for g in gluings {
        let a = find(&mut parent, g.polygon_a);
        let b = find(&mut parent, g.polygon_b);
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    if (0..n).all(|i| find(&mut parent, i) == root) {
        Ok(())
    } else {
        Err(SurfaceError::Disconnected)
    }
}

/// Next corner around the same cone point: cross the edge entering the vertex.
fn next_corner(polygons: &[PlanarPolygon], partner: &[Vec<EdgeRef>], (p, v): Corner) -> Corner {
    let n = polygons[p].len();
    let (q, f) = partner[p][(v + n - 1) % n];
    (q, f)
}

/// The sum of corner angles is a multiple of 2π iff the product of
/// `conj(d1) * d2` over the corners is a positive real.
fn exact_angle_closes(q: &[Vec<QPoint>], corners: &[Corner]) -> bool {
    let mut re = BigRational::from_integer(1.into());
    let mut im = BigRational::zero();
    for &(p, v) in corners {
        let n = q[p].len();
        let d1 = &q[p][(v + 1) % n] - &q[p][v];
        let d2 = &q[p][(v + n - 1) % n] - &q[p][v];
        let zr = d1.dot(&d2);
        let zi = d1.cross(&d2);
        let nr = &re * &zr - &im * &zi;
        let ni = &re * &zi + &im * &zr;
        re = nr;
        im = ni;
    }
    im.is_zero() && re.is_positive()
}

trait PlanePoint {
    /// Sign of `cross(b - a, c - a)`.
    fn orient(a: &Self, b: &Self, c: &Self) -> Ordering;
    /// Whether `c`, collinear with `a b`, lies within their bounding box.
    fn within(a: &Self, b: &Self, c: &Self) -> bool;
    fn same(a: &Self, b: &Self) -> bool;
}

impl PlanePoint for Vec2 {
    fn orient(a: &Self, b: &Self, c: &Self) -> Ordering {
        let u = *b - *a;
        let w = *c - *a;
        let cr = u.cross(w);
        if cr.abs() <= EPS_EXACT * u.norm() * w.norm() {
            Ordering::Equal
        } else if cr > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn within(a: &Self, b: &Self, c: &Self) -> bool {
        let tol = EPS_EXACT * (1.0 + a.norm().max(b.norm()));
        c.x >= a.x.min(b.x) - tol
            && c.x <= a.x.max(b.x) + tol
            && c.y >= a.y.min(b.y) - tol
            && c.y <= a.y.max(b.y) + tol
    }

    fn same(a: &Self, b: &Self) -> bool {
        (*a - *b).norm() <= EPS_EXACT * (1.0 + a.norm())
    }
}

impl PlanePoint for QPoint {
    fn orient(a: &Self, b: &Self, c: &Self) -> Ordering {
        (b - a).cross(&(c - a)).cmp(&BigRational::zero())
    }

    fn within(a: &Self, b: &Self, c: &Self) -> bool {
        let (x0, x1) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
        let (y0, y1) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
        &c.x >= x0 && &c.x <= x1 && &c.y >= y0 && &c.y <= y1
    }

    fn same(a: &Self, b: &Self) -> bool {
        a == b
    }
}

fn segments_touch<P: PlanePoint>(p1: &P, p2: &P, q1: &P, q2: &P) -> bool {
    let o1 = P::orient(p1, p2, q1);
    let o2 = P::orient(p1, p2, q2);
    let o3 = P::orient(q1, q2, p1);
    let o4 = P::orient(q1, q2, p2);
    if o1 != o2 && o3 != o4 && o1 != Ordering::Equal && o2 != Ordering::Equal
        && o3 != Ordering::Equal && o4 != Ordering::Equal
    {
        return true;
    }
    (o1 == Ordering::Equal && P::within(p1, p2, q1))
        || (o2 == Ordering::Equal && P::within(p1, p2, q2))
        || (o3 == Ordering::Equal && P::within(q1, q2, p1))
        || (o4 == Ordering::Equal && P::within(q1, q2, p2))
}

fn check_simple<P: PlanePoint>(polygon: usize, pts: &[P]) -> Result<(), SurfaceError> {
    let n = pts.len();
    let bad = |reason: String| Err(SurfaceError::NonSimplePolygon { polygon, reason });
    if n < 3 {
        return bad(format!("{n} vertices"));
    }
    for i in 0..n {
        if P::same(&pts[i], &pts[(i + 1) % n]) {
            return bad(format!("edge {i} has zero length"));
        }
    }
    for i in 0..n {
        // adjacent edges may only meet at their shared vertex
        let (a, b, c) = (&pts[i], &pts[(i + 1) % n], &pts[(i + 2) % n]);
        if P::orient(a, b, c) == Ordering::Equal && P::within(b, c, a) {
            return bad(format!("edges {i} and {} fold back", (i + 1) % n));
        }
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_touch(&pts[i], &pts[(i + 1) % n], &pts[j], &pts[(j + 1) % n]) {
                return bad(format!("edges {i} and {j} intersect"));
            }
        }
    }
    Ok(())
}

fn check_polygon_exact(polygon: usize, pts: &[QPoint]) -> Result<(), SurfaceError> {
    check_simple(polygon, pts)?;
    if !coord::twice_signed_area_exact(pts).is_positive() {
        return Err(SurfaceError::NotPositivelyOriented { polygon });
    }
    Ok(())
}

fn check_polygon_float(polygon: usize, pts: &[Vec2]) -> Result<(), SurfaceError> {
    if pts.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(SurfaceError::Parse(format!("polygon {polygon} has a non-finite coordinate")));
    }
    check_simple(polygon, pts)?;
    if coord::twice_signed_area(pts) <= 0.0 {
        return Err(SurfaceError::NotPositivelyOriented { polygon });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_torus() -> TranslationSurface {
        let def = SurfaceDefinition::from_integer_polygons(
            &[vec![(0, 0), (1, 0), (1, 1), (0, 1)]],
            &[[0, 0, 0, 2], [0, 1, 0, 3]],
        );
        TranslationSurface::build(&def).unwrap()
    }

    #[test]
    fn torus_has_one_marked_point() {
        let t = square_torus();
        assert_eq!(t.genus(), 1);
        assert_eq!(t.cone_points().len(), 1);
        assert!((t.cone_points()[0].angle - TAU).abs() < 1e-12);
        assert_eq!(t.stratum_signature(), vec![0]);
        assert_eq!(t.area(), 1.0);
    }

    #[test]
    fn half_glued_square_is_rejected() {
        let def = SurfaceDefinition::from_integer_polygons(
            &[vec![(0, 0), (1, 0), (1, 1), (0, 1)]],
            &[[0, 1, 0, 3]],
        );
        assert_eq!(
            TranslationSurface::build(&def).unwrap_err(),
            SurfaceError::UnpairedEdge { edge: (0, 0) }
        );
    }

    #[test]
    fn validation_errors() {
        let sq = vec![(0, 0), (1, 0), (1, 1), (0, 1)];
        let mismatched = SurfaceDefinition::from_integer_polygons(std::slice::from_ref(&sq), &[[0, 0, 0, 1], [0, 2, 0, 3]]);
        assert!(matches!(
            TranslationSurface::build(&mismatched),
            Err(SurfaceError::MismatchedEdge { .. })
        ));
        let bowtie = SurfaceDefinition::from_integer_polygons(
            &[vec![(0, 0), (1, 1), (1, 0), (0, 1)]],
            &[[0, 0, 0, 2], [0, 1, 0, 3]],
        );
        assert!(matches!(
            TranslationSurface::build(&bowtie),
            Err(SurfaceError::NonSimplePolygon { .. })
        ));
        let clockwise = SurfaceDefinition::from_integer_polygons(
            &[vec![(0, 0), (0, 1), (1, 1), (1, 0)]],
            &[[0, 0, 0, 2], [0, 1, 0, 3]],
        );
        assert_eq!(
            TranslationSurface::build(&clockwise).unwrap_err(),
            SurfaceError::NotPositivelyOriented { polygon: 0 }
        );
        let dup = SurfaceDefinition::from_integer_polygons(std::slice::from_ref(&sq), &[[0, 0, 0, 2], [0, 2, 0, 0]]);
        assert!(matches!(TranslationSurface::build(&dup), Err(SurfaceError::DuplicateEdge { .. })));
        let oob = SurfaceDefinition::from_integer_polygons(&[sq], &[[0, 0, 0, 7]]);
        assert_eq!(
            TranslationSurface::build(&oob).unwrap_err(),
            SurfaceError::IndexOutOfRange { gluing: 0 }
        );
    }

    #[test]
    fn two_tori_are_disconnected() {
        let sq = vec![(0, 0), (1, 0), (1, 1), (0, 1)];
        let def = SurfaceDefinition::from_integer_polygons(
            &[sq.clone(), sq],
            &[[0, 0, 0, 2], [0, 1, 0, 3], [1, 0, 1, 2], [1, 1, 1, 3]],
        );
        assert_eq!(TranslationSurface::build(&def).unwrap_err(), SurfaceError::Disconnected);
    }

    #[test]
    fn float_cone_angle_tolerance() {
        // a slightly skewed parallelogram still pairs within tolerance
        let e = 1e-14;
        let polys = vec![vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0 + e, 1.0),
            Vec2::new(e, 1.0),
        ]];
        let g = vec![EdgeIdentification::new(0, 0, 0, 2), EdgeIdentification::new(0, 1, 0, 3)];
        let s = TranslationSurface::from_float(polys, g).unwrap();
        assert_eq!(s.stratum_signature(), vec![0]);
    }

    #[test]
    fn apply_matrix_scales_area_and_keeps_signature() {
        let t = square_torus();
        let m = Mat2::from_ints(2, 1, 1, 1);
        let s = t.apply_matrix(&m).unwrap();
        assert_eq!(s.area(), 1.0);
        assert_eq!(s.stratum_signature(), vec![0]);
        let flip = Mat2::from_ints(1, 0, 0, -3);
        let f = t.apply_matrix(&flip).unwrap();
        assert_eq!(f.area(), 3.0);
        assert_eq!(f.stratum_signature(), vec![0]);
        assert_eq!(t.apply_matrix(&Mat2::from_ints(1, 1, 2, 2)).unwrap_err(), SurfaceError::SingularMatrix);
    }

    #[test]
    fn gluing_shift_maps_partner_edge() {
        let t = square_torus();
        // bottom edge's partner is the top edge; the square below is shifted down
        assert_eq!(t.gluing_shift((0, 0)), Vec2::new(0.0, -1.0));
        assert_eq!(t.gluing_shift((0, 1)), Vec2::new(1.0, 0.0));
        assert_eq!(t.gluing_shift_exact((0, 1)).unwrap().to_vec2(), Vec2::new(1.0, 0.0));
    }
}
