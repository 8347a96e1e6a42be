//! Combinatorial labels of a patch (uncut and subdivided edges, continuation,
//! small/large/improper triangles) and the structural checks built on them.
//!
//! Only Interior triangles are ever reported as violating anything; Boundary
//! triangles are truncated by the window and their labels are meaningless.

use alloc::vec::Vec;

use crate::geometry::{collinear_overlap, Point};
use crate::model::{Patch, TriId};
use crate::scalar::{Scalar, Sign};

#[derive(Clone, Debug, PartialEq)]
pub enum EdgeStatus<S> {
    Uncut,
    /// Vertices strictly inside the edge, ordered from its start.
    Subdivided(Vec<Point<S>>),
}

impl<S> EdgeStatus<S> {
    pub fn is_uncut(&self) -> bool {
        matches!(self, EdgeStatus::Uncut)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TriangleClass {
    /// All three edges uncut.
    Small,
    /// All three edges subdivided.
    Large,
    /// An uncut edge together with an edge continuing at neither endpoint.
    Improper,
    Other,
    /// Boundary triangle; no claim is made.
    Indeterminate,
}

/// Endpoint of the directed edge `v[e] → v[e+1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Start,
    End,
}

impl Endpoint {
    pub const BOTH: [Endpoint; 2] = [Endpoint::Start, Endpoint::End];

    fn corner(self, edge: usize) -> usize {
        match self {
            Endpoint::Start => edge % 3,
            Endpoint::End => (edge + 1) % 3,
        }
    }

    /// The other edge of the triangle meeting this endpoint.
    pub fn adjacent_edge(self, edge: usize) -> usize {
        match self {
            Endpoint::Start => (edge + 2) % 3,
            Endpoint::End => (edge + 1) % 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("triangle {0} is a boundary triangle")]
    IndeterminateForBoundary(TriId),
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("triangle {triangle}: expected exactly one candidate, found {found}")]
    Candidates { triangle: TriId, found: usize },
    #[error("triangle {triangle}: located edge is not uncut")]
    LocatedEdgeCut { triangle: TriId },
    #[error("vertex {corner} of triangle {triangle} lies inside edges of {hosts} triangles")]
    MultipleHosts {
        triangle: TriId,
        corner: usize,
        hosts: usize,
    },
    #[error("triangle {neighbor} hosting a vertex of large triangle {triangle} is not large")]
    NeighborNotLarge { triangle: TriId, neighbor: TriId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    Improper,
    /// Edge continues at the endpoint while the other edge there is subdivided.
    ContinuesIntoSubdivided {
        edge: usize,
        endpoint: Endpoint,
    },
    NotSmallOrLarge(TriangleClass),
    LargeEdgeVertexCount {
        edge: usize,
        count: usize,
    },
    LargeEdgeContinues {
        edge: usize,
        endpoint: Endpoint,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Violation {
    pub triangle: TriId,
    pub kind: ViolationKind,
}

fn require_interior<S: Scalar>(patch: &Patch<S>, t: TriId) -> Result<(), StructureError> {
    if patch.is_interior(t) {
        Ok(())
    } else {
        Err(StructureError::IndeterminateForBoundary(t))
    }
}

pub fn edge_status<S: Scalar>(patch: &Patch<S>, t: TriId, edge: usize) -> Result<EdgeStatus<S>, StructureError> {
    require_interior(patch, t)?;
    Ok(edge_status_unchecked(patch, t, edge))
}

/// Edge status read straight from the incidence index, for any triangle.
pub fn edge_status_unchecked<S: Scalar>(patch: &Patch<S>, t: TriId, edge: usize) -> EdgeStatus<S> {
    let inside = patch.edge_vertices(t, edge);
    if inside.is_empty() {
        EdgeStatus::Uncut
    } else {
        EdgeStatus::Subdivided(inside.iter().map(|&v| patch.vertex(v).clone()).collect())
    }
}

fn is_uncut<S: Scalar>(patch: &Patch<S>, t: TriId, edge: usize) -> bool {
    patch.edge_vertices(t, edge).is_empty()
}

pub fn continues_at<S: Scalar>(
    patch: &Patch<S>,
    t: TriId,
    edge: usize,
    endpoint: Endpoint,
) -> Result<bool, StructureError> {
    require_interior(patch, t)?;
    Ok(continues_at_unchecked(patch, t, edge, endpoint))
}

/// The edge continues at an endpoint when that endpoint lies inside an edge
/// of another triangle which overlaps this edge in a positive-length piece.
pub fn continues_at_unchecked<S: Scalar>(patch: &Patch<S>, t: TriId, edge: usize, endpoint: Endpoint) -> bool {
    let vid = patch.corner_ids(t)[endpoint.corner(edge)];
    let seg = patch.triangle(t).edge(edge);
    patch
        .vertex_hosts(vid)
        .iter()
        .any(|&(u, f)| u != t && collinear_overlap(&patch.triangle(u).edge(f), &seg, patch.tol()).is_some())
}

fn continues_anywhere<S: Scalar>(patch: &Patch<S>, t: TriId, edge: usize) -> bool {
    Endpoint::BOTH
        .iter()
        .any(|&ep| continues_at_unchecked(patch, t, edge, ep))
}

/// Has an uncut edge and an edge that continues at neither endpoint.
pub fn is_improper<S: Scalar>(patch: &Patch<S>, t: TriId) -> bool {
    (0..3).any(|e| is_uncut(patch, t, e)) && (0..3).any(|e| !continues_anywhere(patch, t, e))
}

pub fn classify<S: Scalar>(patch: &Patch<S>, t: TriId) -> TriangleClass {
    if !patch.is_interior(t) {
        return TriangleClass::Indeterminate;
    }
    classify_unchecked(patch, t)
}

/// Classification ignoring the interiority mark. `Small` and `Large` take
/// precedence over `Improper`.
pub fn classify_unchecked<S: Scalar>(patch: &Patch<S>, t: TriId) -> TriangleClass {
    let uncut = (0..3).filter(|&e| is_uncut(patch, t, e)).count();
    match uncut {
        3 => TriangleClass::Small,
        0 => TriangleClass::Large,
        _ if is_improper(patch, t) => TriangleClass::Improper,
        _ => TriangleClass::Other,
    }
}

/// For edge `AB` of `t` that is subdivided and does not continue at `A`,
/// the unique triangle `ADE` with `D` strictly inside `AB`; its edge `AD` is
/// checked to be uncut.
pub fn lemma5_locate<S: Scalar>(
    patch: &Patch<S>,
    t: TriId,
    edge: usize,
    from: Endpoint,
) -> Result<TriId, StructureError> {
    require_interior(patch, t)?;
    let inside = patch.edge_vertices(t, edge);
    if inside.is_empty() {
        return Err(StructureError::PreconditionViolated("edge is uncut"));
    }
    if continues_at_unchecked(patch, t, edge, from) {
        return Err(StructureError::PreconditionViolated(
            "edge continues at the chosen endpoint",
        ));
    }
    let a = patch.corner_ids(t)[from.corner(edge)];
    let mut found: Vec<(TriId, usize, usize)> = Vec::new();
    for &(u, ca) in patch.vertex_corners(a) {
        if u == t {
            continue;
        }
        let corners = patch.corner_ids(u);
        for (cd, d) in corners.iter().enumerate() {
            if cd != ca && inside.contains(d) {
                found.push((u, ca, cd));
            }
        }
    }
    if found.len() != 1 {
        return Err(StructureError::Candidates {
            triangle: t,
            found: found.len(),
        });
    }
    let (u, ca, cd) = found[0];
    // Edge index joining corners ca and cd.
    let ad_edge = if (ca + 1) % 3 == cd { ca } else { cd };
    if !is_uncut(patch, u, ad_edge) {
        return Err(StructureError::LocatedEdgeCut { triangle: u });
    }
    Ok(u)
}

/// Interior triangles meeting the improper definition.
pub fn check_lemma7<S: Scalar>(patch: &Patch<S>) -> Vec<Violation> {
    patch
        .interior_ids()
        .filter(|&t| is_improper(patch, t))
        .map(|t| Violation {
            triangle: t,
            kind: ViolationKind::Improper,
        })
        .collect()
}

/// Edges continuing at an endpoint whose other edge there is subdivided.
pub fn check_lemma8<S: Scalar>(patch: &Patch<S>) -> Vec<Violation> {
    let mut out = Vec::new();
    for t in patch.interior_ids() {
        for edge in 0..3 {
            for endpoint in Endpoint::BOTH {
                if continues_at_unchecked(patch, t, edge, endpoint) && !is_uncut(patch, t, endpoint.adjacent_edge(edge))
                {
                    out.push(Violation {
                        triangle: t,
                        kind: ViolationKind::ContinuesIntoSubdivided { edge, endpoint },
                    });
                }
            }
        }
    }
    out
}

/// Every interior triangle is small or large; every large edge holds exactly
/// one interior vertex and continues in neither direction.
pub fn check_lemma9<S: Scalar>(patch: &Patch<S>) -> Vec<Violation> {
    let mut out = Vec::new();
    for t in patch.interior_ids() {
        match classify_unchecked(patch, t) {
            TriangleClass::Small => {}
            TriangleClass::Large => {
                for edge in 0..3 {
                    let count = patch.edge_vertices(t, edge).len();
                    if count != 1 {
                        out.push(Violation {
                            triangle: t,
                            kind: ViolationKind::LargeEdgeVertexCount { edge, count },
                        });
                    }
                    for endpoint in Endpoint::BOTH {
                        if continues_at_unchecked(patch, t, edge, endpoint) {
                            out.push(Violation {
                                triangle: t,
                                kind: ViolationKind::LargeEdgeContinues { edge, endpoint },
                            });
                        }
                    }
                }
            }
            class => out.push(Violation {
                triangle: t,
                kind: ViolationKind::NotSmallOrLarge(class),
            }),
        }
    }
    out
}

/// The large triangles containing the corners of `t` inside one of their
/// edges, per corner; `None` where the host lies outside the patch.
pub fn lemma10_neighbors<S: Scalar>(patch: &Patch<S>, t: TriId) -> Result<[Option<TriId>; 3], StructureError> {
    let mut out = [None; 3];
    for (corner, &v) in patch.corner_ids(t).iter().enumerate() {
        let hosts = patch.vertex_hosts(v);
        match hosts {
            [] => {}
            [(u, _)] => {
                if classify_unchecked(patch, *u) != TriangleClass::Large {
                    return Err(StructureError::NeighborNotLarge {
                        triangle: t,
                        neighbor: *u,
                    });
                }
                out[corner] = Some(*u);
            }
            _ => {
                return Err(StructureError::MultipleHosts {
                    triangle: t,
                    corner,
                    hosts: hosts.len(),
                })
            }
        }
    }
    Ok(out)
}

/// `|side − (n1 + n2 + n3) / 3|`.
pub fn average_deviation<S: Scalar>(side: &S, neighbors: [&S; 3]) -> S {
    let sum = neighbors[0].clone() + neighbors[1].clone() + neighbors[2].clone();
    let mean = sum.checked_div(&S::from_i64(3)).expect("3 is invertible");
    (side.clone() - mean).abs()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma10Report<S> {
    /// Large interior triangles whose side differs from the neighbor mean.
    pub deviations: Vec<(TriId, S)>,
    /// Large interior triangles with a neighbor outside the patch.
    pub missing: Vec<TriId>,
    pub checked: usize,
}

impl<S> Lemma10Report<S> {
    pub fn is_clean(&self) -> bool {
        self.deviations.is_empty()
    }
}

/// Side of every interior large triangle against the mean of its three
/// neighbors.
pub fn check_lemma10<S: Scalar>(patch: &Patch<S>) -> Result<Lemma10Report<S>, StructureError> {
    let mut report = Lemma10Report {
        deviations: Vec::new(),
        missing: Vec::new(),
        checked: 0,
    };
    for t in patch.interior_ids() {
        if classify_unchecked(patch, t) != TriangleClass::Large {
            continue;
        }
        let [Some(a), Some(b), Some(c)] = lemma10_neighbors(patch, t)? else {
            report.missing.push(t);
            continue;
        };
        report.checked += 1;
        let side = |u: TriId| patch.triangle(u).side();
        let dev = average_deviation(side(t), [side(a), side(b), side(c)]);
        if patch.tol().sign(&dev) != Sign::Zero {
            report.deviations.push((t, dev));
        }
    }
    Ok(report)
}
