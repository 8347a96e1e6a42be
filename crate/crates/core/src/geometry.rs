//! Points, segments, equilateral triangles and the incidence predicates the
//! rest of the crate is built on.

use core::cmp::Ordering;

use crate::scalar::{fmax, Scalar, Sign, Tolerance};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point::new(S::zero(), S::zero())
    }

    pub fn add(&self, other: &Point<S>) -> Point<S> {
        Point::new(self.x.clone() + other.x.clone(), self.y.clone() + other.y.clone())
    }

    pub fn sub(&self, other: &Point<S>) -> Point<S> {
        Point::new(self.x.clone() - other.x.clone(), self.y.clone() - other.y.clone())
    }

    pub fn neg(&self) -> Point<S> {
        Point::new(-self.x.clone(), -self.y.clone())
    }

    pub fn scale(&self, k: &S) -> Point<S> {
        Point::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }

    pub fn dot(&self, other: &Point<S>) -> S {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn cross(&self, other: &Point<S>) -> S {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    /// Rotation by +60° about the origin.
    pub fn rotate60(&self) -> Point<S> {
        let half = S::from_ratio(1, 2);
        let h = S::sqrt3().half();
        Point::new(
            half.clone() * self.x.clone() - h.clone() * self.y.clone(),
            h * self.x.clone() + half * self.y.clone(),
        )
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    /// Largest absolute coordinate, as `f64`.
    pub fn magnitude(&self) -> f64 {
        let (x, y) = self.to_f64();
        fmax(libm::fabs(x), libm::fabs(y))
    }

    pub fn approx_eq(&self, other: &Point<S>, tol: &Tolerance) -> bool {
        tol.eq(&self.x, &other.x) && tol.eq(&self.y, &other.y)
    }

    /// Lexicographic `(y, x)` order, tolerant in the float backend.
    pub fn cmp_yx(&self, other: &Point<S>, tol: &Tolerance) -> Ordering {
        tol.cmp(&self.y, &other.y).then_with(|| tol.cmp(&self.x, &other.x))
    }

    /// Exact (or bitwise-total) `(y, x)` order, used for canonical sorting.
    pub fn raw_cmp(&self, other: &Point<S>) -> Ordering {
        self.y.raw_cmp(&other.y).then_with(|| self.x.raw_cmp(&other.x))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment<S> {
    pub a: Point<S>,
    pub b: Point<S>,
}

impl<S: Scalar> Segment<S> {
    pub fn new(a: Point<S>, b: Point<S>) -> Self {
        Segment { a, b }
    }

    pub fn direction(&self) -> Point<S> {
        self.b.sub(&self.a)
    }

    pub fn reversed(&self) -> Segment<S> {
        Segment::new(self.b.clone(), self.a.clone())
    }

    fn same_points(&self, other: &Segment<S>, tol: &Tolerance) -> bool {
        (self.a.approx_eq(&other.a, tol) && self.b.approx_eq(&other.b, tol))
            || (self.a.approx_eq(&other.b, tol) && self.b.approx_eq(&other.a, tol))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate triangle (zero area)")]
    Degenerate,
    #[error("triangle is not equilateral")]
    NotEquilateral,
    #[error("side length is not representable in the exact field")]
    NonRepresentableSide,
    #[error("segment has coincident endpoints")]
    DegenerateSegment,
}

/// Sign of the doubled signed area of `(p, q, r)`.
///
/// The float backend reports `Zero` when the smallest altitude of the three
/// points is within the tolerance slack of their coordinate magnitude, which
/// keeps the predicate scale-free for tiny triangles away from the origin.
pub fn orient<S: Scalar>(p: &Point<S>, q: &Point<S>, r: &Point<S>, tol: &Tolerance) -> Sign {
    let cross = q.sub(p).cross(&r.sub(p));
    if S::is_exact() {
        return cross.raw_sign();
    }
    let c = cross.to_f64();
    let longest = fmax(
        q.sub(p).norm_sq().to_f64(),
        fmax(r.sub(p).norm_sq().to_f64(), r.sub(q).norm_sq().to_f64()),
    );
    let mag = fmax(p.magnitude(), fmax(q.magnitude(), r.magnitude()));
    let slack = tol.slack(mag);
    // |c| / longest_side is the smallest altitude.
    if c * c <= slack * slack * longest {
        Sign::Zero
    } else if c > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Position of `p` along `s` as the comparison of `(p - a)·(b - a)` against
/// `0` and `|b - a|²`.
fn along<S: Scalar>(p: &Point<S>, s: &Segment<S>, tol: &Tolerance) -> (Ordering, Ordering) {
    let d = s.direction();
    let t = p.sub(&s.a).dot(&d);
    let len = d.norm_sq();
    if S::is_exact() {
        return (t.raw_cmp(&S::zero()), t.raw_cmp(&len));
    }
    // Endpoint coincidence is decided by point equality, not by the projection.
    let at_a = p.approx_eq(&s.a, tol);
    let at_b = p.approx_eq(&s.b, tol);
    let lo = if at_a { Ordering::Equal } else { t.raw_cmp(&S::zero()) };
    let hi = if at_b { Ordering::Equal } else { t.raw_cmp(&len) };
    (lo, hi)
}

/// True iff `p` lies on `s` strictly between its endpoints.
pub fn point_in_segment_interior<S: Scalar>(p: &Point<S>, s: &Segment<S>, tol: &Tolerance) -> bool {
    if orient(&s.a, &s.b, p, tol) != Sign::Zero {
        return false;
    }
    if p.approx_eq(&s.a, tol) || p.approx_eq(&s.b, tol) {
        return false;
    }
    let (lo, hi) = along(p, s, tol);
    lo == Ordering::Greater && hi == Ordering::Less
}

/// Common sub-segment of two collinear segments, when it has positive length.
///
/// The result is oriented along `s1`.
pub fn collinear_overlap<S: Scalar>(s1: &Segment<S>, s2: &Segment<S>, tol: &Tolerance) -> Option<Segment<S>> {
    if orient(&s1.a, &s1.b, &s2.a, tol) != Sign::Zero || orient(&s1.a, &s1.b, &s2.b, tol) != Sign::Zero {
        return None;
    }
    let d = s1.direction();
    let param = |p: &Point<S>| p.sub(&s1.a).dot(&d);
    // Parameters along s1 in units of |d|²; s1 spans [0, |d|²].
    let mut ends = [(param(&s2.a), s2.a.clone()), (param(&s2.b), s2.b.clone())];
    if ends[0].0.raw_cmp(&ends[1].0) == Ordering::Greater {
        ends.swap(0, 1);
    }
    let [(t_lo, p_lo), (t_hi, p_hi)] = ends;
    let (start_t, start) = if t_lo.raw_cmp(&S::zero()) == Ordering::Greater {
        (t_lo, p_lo)
    } else {
        (S::zero(), s1.a.clone())
    };
    let len = d.norm_sq();
    let (end_t, end) = if t_hi.raw_cmp(&len) == Ordering::Less {
        (t_hi, p_hi)
    } else {
        (len, s1.b.clone())
    };
    if end_t.raw_cmp(&start_t) != Ordering::Greater || start.approx_eq(&end, tol) {
        return None;
    }
    Some(Segment::new(start, end))
}

/// An equilateral triangle with counterclockwise vertices.
///
/// Construction normalizes the vertex order: counterclockwise, starting at
/// the lowest vertex (leftmost among ties), so two placements of the same
/// triangle compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangle<S> {
    v: [Point<S>; 3],
    side: S,
}

impl<S: Scalar> Triangle<S> {
    pub fn new(a: Point<S>, b: Point<S>, c: Point<S>, tol: &Tolerance) -> Result<Self, GeometryError> {
        let (a, b, c) = match orient(&a, &b, &c, tol) {
            Sign::Zero => return Err(GeometryError::Degenerate),
            Sign::Positive => (a, b, c),
            Sign::Negative => (a, c, b),
        };
        let l0 = b.sub(&a).norm_sq();
        let l1 = c.sub(&b).norm_sq();
        let l2 = a.sub(&c).norm_sq();
        if !(side_sq_eq(&l0, &l1, tol) && side_sq_eq(&l1, &l2, tol)) {
            return Err(GeometryError::NotEquilateral);
        }
        let mut v = [a, b, c];
        let lowest = (0..3)
            .min_by(|&i, &j| v[i].cmp_yx(&v[j], tol).then(i.cmp(&j)))
            .unwrap_or(0);
        v.rotate_left(lowest);
        // Measured on canonical edge 0 so that equal vertex sets give equal sides.
        let [l0, _, _] = {
            let mut l = [l0, l1, l2];
            l.rotate_left(lowest);
            l
        };
        let side = l0.checked_sqrt().ok_or(GeometryError::NonRepresentableSide)?;
        Ok(Triangle { v, side })
    }

    /// Upward triangle with bottom-left corner `anchor` and side `s`.
    pub fn upward(anchor: &Point<S>, s: &S, tol: &Tolerance) -> Result<Self, GeometryError> {
        let b = anchor.add(&Point::new(s.clone(), S::zero()));
        let c = anchor.add(&Point::new(s.half(), S::sqrt3().half() * s.clone()));
        Triangle::new(anchor.clone(), b, c, tol)
    }

    /// Downward triangle with top-left corner `anchor` and side `s`.
    pub fn downward(anchor: &Point<S>, s: &S, tol: &Tolerance) -> Result<Self, GeometryError> {
        let b = anchor.add(&Point::new(s.clone(), S::zero()));
        let c = anchor.add(&Point::new(s.half(), -(S::sqrt3().half() * s.clone())));
        Triangle::new(anchor.clone(), b, c, tol)
    }

    pub fn vertices(&self) -> &[Point<S>; 3] {
        &self.v
    }

    pub fn vertex(&self, i: usize) -> &Point<S> {
        &self.v[i % 3]
    }

    /// Canonical first vertex, used as the translation anchor.
    pub fn anchor(&self) -> &Point<S> {
        &self.v[0]
    }

    pub fn side(&self) -> &S {
        &self.side
    }

    /// Directed edge `v[i] → v[i+1]`.
    pub fn edge(&self, i: usize) -> Segment<S> {
        Segment::new(self.v[i % 3].clone(), self.v[(i + 1) % 3].clone())
    }

    pub fn edges(&self) -> [Segment<S>; 3] {
        [self.edge(0), self.edge(1), self.edge(2)]
    }

    pub fn side_lengths(&self) -> [S; 3] {
        [self.side.clone(), self.side.clone(), self.side.clone()]
    }

    /// `√3/4 · side²`.
    pub fn area(&self) -> S {
        S::sqrt3() * S::from_ratio(1, 4) * self.side.clone() * self.side.clone()
    }

    /// True when the triangle has a horizontal bottom edge.
    pub fn points_up(&self, tol: &Tolerance) -> bool {
        tol.eq(&self.v[0].y, &self.v[1].y)
    }

    pub fn translate(&self, by: &Point<S>) -> Triangle<S> {
        Triangle {
            v: [self.v[0].add(by), self.v[1].add(by), self.v[2].add(by)],
            side: self.side.clone(),
        }
    }

    /// Edge vectors from the anchor; equal for translates of one triangle.
    pub fn shape(&self) -> (Point<S>, Point<S>) {
        (self.v[1].sub(&self.v[0]), self.v[2].sub(&self.v[0]))
    }

    pub fn bbox(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for p in &self.v {
            let (x, y) = p.to_f64();
            b[0] = b[0].min(x);
            b[1] = b[1].max(x);
            b[2] = b[2].min(y);
            b[3] = b[3].max(y);
        }
        b
    }

    /// Strict interior membership.
    pub fn contains_strict(&self, p: &Point<S>, tol: &Tolerance) -> bool {
        self.edges()
            .iter()
            .all(|e| orient(&e.a, &e.b, p, tol) == Sign::Positive)
    }

    /// Closed membership.
    pub fn contains(&self, p: &Point<S>, tol: &Tolerance) -> bool {
        self.edges()
            .iter()
            .all(|e| orient(&e.a, &e.b, p, tol) != Sign::Negative)
    }
}

fn side_sq_eq<S: Scalar>(a: &S, b: &S, tol: &Tolerance) -> bool {
    if S::is_exact() {
        return a == b;
    }
    let (x, y) = (a.to_f64(), b.to_f64());
    libm::fabs(x - y) <= tol.eps() * fmax(libm::fabs(x), libm::fabs(y))
}

/// True iff the open triangles share a point.
///
/// Two convex polygons have disjoint interiors iff one of their edge lines
/// weakly separates them.
pub fn interiors_intersect<S: Scalar>(t1: &Triangle<S>, t2: &Triangle<S>, tol: &Tolerance) -> bool {
    let separated_by = |t: &Triangle<S>, other: &Triangle<S>| {
        t.edges().iter().any(|e| {
            other
                .vertices()
                .iter()
                .all(|v| orient(&e.a, &e.b, v, tol) != Sign::Positive)
        })
    };
    !(separated_by(t1, t2) || separated_by(t2, t1))
}

/// True iff some edge of `t1` coincides with some edge of `t2`.
pub fn shares_full_side<S: Scalar>(t1: &Triangle<S>, t2: &Triangle<S>, tol: &Tolerance) -> bool {
    if !side_sq_eq(
        &(t1.side().clone() * t1.side().clone()),
        &(t2.side().clone() * t2.side().clone()),
        tol,
    ) {
        return false;
    }
    t1.edges()
        .iter()
        .any(|e1| t2.edges().iter().any(|e2| e1.same_points(e2, tol)))
}

/// `f64` bounding boxes `[xmin, xmax, ymin, ymax]` overlap after padding.
pub(crate) fn bboxes_touch(a: &[f64; 4], b: &[f64; 4], pad: f64) -> bool {
    a[0] <= b[1] + pad && b[0] <= a[1] + pad && a[2] <= b[3] + pad && b[2] <= a[3] + pad
}
