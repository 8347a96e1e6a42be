//! Finite tiling patches: triangle storage, the analysis window, and the
//! vertex/edge incidence indexes every combinatorial check reads from.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::clip::{clip_convex, polygon_area, Rect};
use crate::geometry::{bboxes_touch, interiors_intersect, point_in_segment_interior, GeometryError, Point, Triangle};
use crate::index::{cell_size, Grid};
use crate::scalar::{fmax, Scalar, Sign, Tolerance};

pub type TriId = usize;
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatchError {
    #[error("triangles {0} and {1} have overlapping interiors")]
    Overlap(usize, usize),
    #[error("triangle {index}: {source}")]
    Geometry { index: usize, source: GeometryError },
    #[error("window must satisfy xmin < xmax and ymin < ymax")]
    EmptyWindow,
    #[error("triangle {0} does not meet the window")]
    OutsideWindow(usize),
    #[error("margin must be non-negative")]
    NegativeMargin,
    #[error("point is not a vertex of the patch")]
    UnknownVertex,
}

/// Rectangular analysis window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window<S>(Rect<S>);

impl<S: Scalar> Window<S> {
    pub fn new(xmin: S, xmax: S, ymin: S, ymax: S) -> Result<Self, PatchError> {
        let rect = Rect { xmin, xmax, ymin, ymax };
        if rect.is_empty() {
            return Err(PatchError::EmptyWindow);
        }
        Ok(Window(rect))
    }

    pub fn from_i64(xmin: i64, xmax: i64, ymin: i64, ymax: i64) -> Result<Self, PatchError> {
        Window::new(
            S::from_i64(xmin),
            S::from_i64(xmax),
            S::from_i64(ymin),
            S::from_i64(ymax),
        )
    }

    pub fn rect(&self) -> &Rect<S> {
        &self.0
    }

    pub fn xmin(&self) -> &S {
        &self.0.xmin
    }
    pub fn xmax(&self) -> &S {
        &self.0.xmax
    }
    pub fn ymin(&self) -> &S {
        &self.0.ymin
    }
    pub fn ymax(&self) -> &S {
        &self.0.ymax
    }

    pub fn area(&self) -> S {
        self.0.area()
    }
}

/// How the patch decides which triangles are far enough from the truncation
/// to carry structural claims.
#[derive(Clone, Debug, PartialEq)]
pub enum Interiority<S> {
    /// Every vertex lies at least this far inside each window side.
    Margin(S),
    /// Every vertex on the boundary of the triangle, and of each triangle
    /// touching it, is surrounded by a full 360° of patch triangles. Suited to
    /// patches whose triangle sizes span many orders of magnitude.
    LocallyComplete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mark {
    Interior,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// The point is a corner of the triangle.
    Vertex,
    /// The point lies strictly inside one of the triangle's edges.
    EdgeInterior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Incidence {
    pub triangle: TriId,
    pub role: Role,
    /// Corner index for `Vertex`, edge index for `EdgeInterior`.
    pub slot: usize,
}

/// A finite set of interior-disjoint equilateral triangles inside a window.
#[derive(Clone, Debug, PartialEq)]
pub struct Patch<S> {
    triangles: Vec<Triangle<S>>,
    window: Window<S>,
    tol: Tolerance,
    interiority: Interiority<S>,
    marks: Vec<Mark>,
    vertices: Vec<Point<S>>,
    corners: Vec<[VertexId; 3]>,
    vertex_corners: Vec<Vec<(TriId, usize)>>,
    edge_vertices: Vec<[Vec<VertexId>; 3]>,
    vertex_hosts: Vec<Vec<(TriId, usize)>>,
    tri_grid: Grid,
    vertex_grid: Grid,
}

/// `2 ×` the largest side, or zero for an empty set.
pub fn default_margin<S: Scalar>(triangles: &[Triangle<S>]) -> S {
    let max = triangles
        .iter()
        .map(|t| t.side().clone())
        .max_by(|a, b| a.raw_cmp(b))
        .unwrap_or_else(S::zero);
    max * S::from_i64(2)
}

fn canonical_cmp<S: Scalar>(a: &Triangle<S>, b: &Triangle<S>) -> Ordering {
    let (va, vb) = (a.vertices(), b.vertices());
    va[0]
        .raw_cmp(&vb[0])
        .then_with(|| va[1].raw_cmp(&vb[1]))
        .then_with(|| va[2].raw_cmp(&vb[2]))
}

impl<S: Scalar> Patch<S> {
    /// Builds a patch with the default interiority margin (twice the largest side).
    pub fn new(triangles: Vec<Triangle<S>>, window: Window<S>, tol: Tolerance) -> Result<Self, PatchError> {
        let margin = default_margin(&triangles);
        Patch::with_interiority(triangles, window, tol, Interiority::Margin(margin))
    }

    pub fn with_interiority(
        triangles: Vec<Triangle<S>>,
        window: Window<S>,
        tol: Tolerance,
        interiority: Interiority<S>,
    ) -> Result<Self, PatchError> {
        if let Interiority::Margin(m) = &interiority {
            if m.raw_sign() == Sign::Negative {
                return Err(PatchError::NegativeMargin);
            }
        }
        let mut order: Vec<usize> = (0..triangles.len()).collect();
        order.sort_by(|&i, &j| canonical_cmp(&triangles[i], &triangles[j]).then(i.cmp(&j)));

        let wbox = window.rect().to_f64();
        for &i in &order {
            if !meets_window(&triangles[i], &window, &tol, &wbox) {
                return Err(PatchError::OutsideWindow(i));
            }
        }

        let mut extent = wbox;
        let mut min_side = f64::INFINITY;
        for t in &triangles {
            let b = t.bbox();
            extent = [
                extent[0].min(b[0]),
                extent[1].max(b[1]),
                extent[2].min(b[2]),
                extent[3].max(b[3]),
            ];
            min_side = min_side.min(t.side().to_f64());
        }
        let cell = cell_size(extent, min_side, triangles.len());
        let pad = pad_for(&extent, &tol);

        let mut tri_grid = Grid::new(extent, cell);
        for (k, &i) in order.iter().enumerate() {
            tri_grid.insert_box(k, &triangles[i].bbox(), pad);
        }

        // Interior overlap, reported as original input indices.
        for (k, &i) in order.iter().enumerate() {
            let bi = triangles[i].bbox();
            for m in tri_grid.query_box(&bi, pad) {
                if m <= k {
                    continue;
                }
                let j = order[m];
                if bboxes_touch(&bi, &triangles[j].bbox(), pad)
                    && interiors_intersect(&triangles[i], &triangles[j], &tol)
                {
                    return Err(PatchError::Overlap(i.min(j), i.max(j)));
                }
            }
        }

        let mut slots: Vec<Option<Triangle<S>>> = triangles.into_iter().map(Some).collect();
        let triangles: Vec<Triangle<S>> = order
            .iter()
            .map(|&i| slots[i].take().expect("each index once"))
            .collect();

        let mut vertices: Vec<Point<S>> = Vec::new();
        let mut vertex_grid = Grid::new(extent, cell);
        let mut corners = Vec::with_capacity(triangles.len());
        let mut vertex_corners: Vec<Vec<(TriId, usize)>> = Vec::new();
        for (t, tri) in triangles.iter().enumerate() {
            let mut ids = [0; 3];
            for (c, p) in tri.vertices().iter().enumerate() {
                let (x, y) = p.to_f64();
                let found = vertex_grid
                    .query_point(x, y, pad)
                    .into_iter()
                    .find(|&v| vertices[v].approx_eq(p, &tol));
                let id = match found {
                    Some(v) => v,
                    None => {
                        let v = vertices.len();
                        vertices.push(p.clone());
                        vertex_corners.push(Vec::new());
                        vertex_grid.insert_box(v, &[x, x, y, y], 0.0);
                        v
                    }
                };
                vertex_corners[id].push((t, c));
                ids[c] = id;
            }
            corners.push(ids);
        }

        let mut vertex_hosts: Vec<Vec<(TriId, usize)>> = vec![Vec::new(); vertices.len()];
        let mut edge_vertices = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut per_edge: [Vec<VertexId>; 3] = Default::default();
            for (e, slot) in per_edge.iter_mut().enumerate() {
                let seg = tri.edge(e);
                let (ax, ay) = seg.a.to_f64();
                let (bx, by) = seg.b.to_f64();
                let b = [ax.min(bx), ax.max(bx), ay.min(by), ay.max(by)];
                let mut inside: Vec<(S, VertexId)> = vertex_grid
                    .query_box(&b, pad)
                    .into_iter()
                    .filter(|&v| !corners[t].contains(&v) && point_in_segment_interior(&vertices[v], &seg, &tol))
                    .map(|v| (vertices[v].sub(&seg.a).dot(&seg.direction()), v))
                    .collect();
                inside.sort_by(|a, b| a.0.raw_cmp(&b.0));
                for (_, v) in &inside {
                    vertex_hosts[*v].push((t, e));
                }
                *slot = inside.into_iter().map(|(_, v)| v).collect();
            }
            edge_vertices.push(per_edge);
        }

        let mut patch = Patch {
            marks: vec![Mark::Boundary; triangles.len()],
            triangles,
            window,
            tol,
            interiority,
            vertices,
            corners,
            vertex_corners,
            edge_vertices,
            vertex_hosts,
            tri_grid,
            vertex_grid,
        };
        patch.marks = patch.compute_marks();
        Ok(patch)
    }

    fn compute_marks(&self) -> Vec<Mark> {
        match &self.interiority {
            Interiority::Margin(m) => {
                let inner = self.window.rect().shrink(m);
                self.triangles
                    .iter()
                    .map(|t| {
                        let inside = t.vertices().iter().all(|p| {
                            self.tol.cmp(&p.x, &inner.xmin) != Ordering::Less
                                && self.tol.cmp(&p.x, &inner.xmax) != Ordering::Greater
                                && self.tol.cmp(&p.y, &inner.ymin) != Ordering::Less
                                && self.tol.cmp(&p.y, &inner.ymax) != Ordering::Greater
                        });
                        if inside {
                            Mark::Interior
                        } else {
                            Mark::Boundary
                        }
                    })
                    .collect()
            }
            Interiority::LocallyComplete => {
                let complete: Vec<bool> = (0..self.vertices.len())
                    .map(|v| self.vertex_corners[v].len() + 3 * self.vertex_hosts[v].len() == 6)
                    .collect();
                let level1: Vec<bool> = (0..self.triangles.len())
                    .map(|t| self.boundary_vertices(t).all(|v| complete[v]))
                    .collect();
                (0..self.triangles.len())
                    .map(|t| {
                        if level1[t] && self.touching(t).iter().all(|&u| level1[u]) {
                            Mark::Interior
                        } else {
                            Mark::Boundary
                        }
                    })
                    .collect()
            }
        }
    }

    /// Corners followed by the vertices inside each edge.
    pub fn boundary_vertices(&self, t: TriId) -> impl Iterator<Item = VertexId> + '_ {
        self.corners[t]
            .iter()
            .copied()
            .chain(self.edge_vertices[t].iter().flat_map(|e| e.iter().copied()))
    }

    /// Triangles other than `t` sharing at least one boundary point with it.
    pub fn touching(&self, t: TriId) -> Vec<TriId> {
        let mut out: Vec<TriId> = self
            .boundary_vertices(t)
            .flat_map(|v| {
                self.vertex_corners[v]
                    .iter()
                    .chain(self.vertex_hosts[v].iter())
                    .map(|&(u, _)| u)
            })
            .filter(|&u| u != t)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn triangles(&self) -> &[Triangle<S>] {
        &self.triangles
    }

    pub fn triangle(&self, t: TriId) -> &Triangle<S> {
        &self.triangles[t]
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn window(&self) -> &Window<S> {
        &self.window
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn interiority(&self) -> &Interiority<S> {
        &self.interiority
    }

    pub fn mark(&self, t: TriId) -> Mark {
        self.marks[t]
    }

    pub fn is_interior(&self, t: TriId) -> bool {
        self.marks[t] == Mark::Interior
    }

    pub fn interior_ids(&self) -> impl Iterator<Item = TriId> + '_ {
        (0..self.triangles.len()).filter(|&t| self.is_interior(t))
    }

    pub fn vertices(&self) -> &[Point<S>] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Point<S> {
        &self.vertices[v]
    }

    pub fn corner_ids(&self, t: TriId) -> [VertexId; 3] {
        self.corners[t]
    }

    /// Vertices strictly inside edge `e` of `t`, ordered from its start.
    pub fn edge_vertices(&self, t: TriId, e: usize) -> &[VertexId] {
        &self.edge_vertices[t][e % 3]
    }

    /// `(triangle, corner)` pairs having `v` as a corner.
    pub fn vertex_corners(&self, v: VertexId) -> &[(TriId, usize)] {
        &self.vertex_corners[v]
    }

    /// `(triangle, edge)` pairs having `v` strictly inside an edge.
    pub fn vertex_hosts(&self, v: VertexId) -> &[(TriId, usize)] {
        &self.vertex_hosts[v]
    }

    pub fn find_vertex(&self, p: &Point<S>) -> Option<VertexId> {
        let (x, y) = p.to_f64();
        let pad = self.pad(p.magnitude());
        self.vertex_grid
            .query_point(x, y, pad)
            .into_iter()
            .find(|&v| self.vertices[v].approx_eq(p, &self.tol))
    }

    /// Index of a stored triangle equal to `t` under the patch tolerance.
    pub fn find_triangle(&self, t: &Triangle<S>) -> Option<TriId> {
        let v = self.find_vertex(t.anchor())?;
        self.vertex_corners[v].iter().map(|&(u, _)| u).find(|&u| {
            let other = &self.triangles[u];
            (0..3).all(|i| other.vertex(i).approx_eq(t.vertex(i), &self.tol))
        })
    }

    fn pad(&self, magnitude: f64) -> f64 {
        // Covers the float tolerance and the f64 rounding of exact coordinates.
        4.0 * self.tol.slack(magnitude) + 1e-9 * fmax(1.0, libm::fabs(magnitude))
    }

    /// Every triangle having `p` as a corner, plus the (at most one, in a
    /// valid tiling) triangle having `p` strictly inside an edge.
    pub fn incident_triangles(&self, p: &Point<S>) -> Result<Vec<Incidence>, PatchError> {
        let v = self.find_vertex(p).ok_or(PatchError::UnknownVertex)?;
        Ok(self.incidences(v))
    }

    pub fn incidences(&self, v: VertexId) -> Vec<Incidence> {
        let corners = self.vertex_corners[v].iter().map(|&(t, c)| Incidence {
            triangle: t,
            role: Role::Vertex,
            slot: c,
        });
        let hosts = self.vertex_hosts[v].iter().map(|&(t, e)| Incidence {
            triangle: t,
            role: Role::EdgeInterior,
            slot: e,
        });
        corners.chain(hosts).collect()
    }

    /// Total area of `triangle ∩ window` over all triangles.
    pub fn clipped_area(&self) -> S {
        self.clipped_area_in(self.window.rect())
    }

    pub fn clipped_area_in(&self, rect: &Rect<S>) -> S {
        if rect.is_empty() {
            return S::zero();
        }
        let rb = rect.to_f64();
        let pad = pad_for(&rb, &self.tol);
        self.triangles
            .iter()
            .filter(|t| bboxes_touch(&t.bbox(), &rb, pad))
            .fold(S::zero(), |acc, t| acc + clipped_triangle_area(t, rect))
    }

    pub fn max_side(&self) -> Option<&S> {
        self.triangles.iter().map(|t| t.side()).max_by(|a, b| a.raw_cmp(b))
    }

    pub fn min_side(&self) -> Option<&S> {
        self.triangles.iter().map(|t| t.side()).min_by(|a, b| a.raw_cmp(b))
    }

    /// Window shrunk by the interiority margin (the full window when the
    /// patch uses local completeness).
    pub fn inner_window(&self) -> Rect<S> {
        match &self.interiority {
            Interiority::Margin(m) => self.window.rect().shrink(m),
            Interiority::LocallyComplete => self.window.rect().clone(),
        }
    }
}

/// Bounding-box padding that absorbs tolerance and `f64` rounding.
pub(crate) fn pad_for(b: &[f64; 4], tol: &Tolerance) -> f64 {
    let mag = fmax(
        fmax(libm::fabs(b[0]), libm::fabs(b[1])),
        fmax(libm::fabs(b[2]), libm::fabs(b[3])),
    );
    4.0 * tol.slack(mag) + 1e-9 * fmax(1.0, mag)
}

pub(crate) fn clipped_triangle_area<S: Scalar>(t: &Triangle<S>, rect: &Rect<S>) -> S {
    polygon_area(&clip_convex(t.vertices(), rect))
}

pub(crate) fn meets_window<S: Scalar>(t: &Triangle<S>, window: &Window<S>, tol: &Tolerance, wbox: &[f64; 4]) -> bool {
    if !bboxes_touch(&t.bbox(), wbox, pad_for(wbox, tol)) {
        return false;
    }
    let area = clipped_triangle_area(t, window.rect());
    if S::is_exact() {
        area.raw_sign() == Sign::Positive
    } else {
        area.to_f64() > tol.eps() * t.area().to_f64()
    }
}
