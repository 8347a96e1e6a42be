//! Patch generators: the periodic three-size tiling, the Klaassen spiral,
//! and the edge-to-edge triangular lattice used as a negative control.

use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Signed;

use crate::geometry::{GeometryError, Point, Triangle};
use crate::model::{meets_window, Interiority, Patch, PatchError, Window};
use crate::scalar::{fmax, QSqrt3, Scalar, Tolerance, SQRT_3};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("side lengths must be positive")]
    NonPositiveSide,
    #[error("fixed point and start point coincide")]
    DegenerateSpec,
    #[error("index range {0}..={1} is out of the representable range")]
    Range(i32, i32),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Patch(#[from] PatchError),
}

/// Which of the two mirror images of the periodic tiling to build.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Chirality {
    /// The side-`b` piece comes first along each counterclockwise large edge.
    #[default]
    LeftBFirst,
    /// Mirror image: the side-`b` piece comes last.
    RightBFirst,
}

/// Small sides `b`, `c`; the large side is `a = b + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicSpec {
    b: BigRational,
    c: BigRational,
    pub chirality: Chirality,
}

type Q = QSqrt3;

impl PeriodicSpec {
    pub fn new(b: BigRational, c: BigRational, chirality: Chirality) -> Result<Self, GeneratorError> {
        if !b.is_positive() || !c.is_positive() {
            return Err(GeneratorError::NonPositiveSide);
        }
        Ok(PeriodicSpec { b, c, chirality })
    }

    pub fn from_i64(b: i64, c: i64) -> Result<Self, GeneratorError> {
        if b <= 0 || c <= 0 {
            return Err(GeneratorError::NonPositiveSide);
        }
        PeriodicSpec::new(
            BigRational::from_integer(b.into()),
            BigRational::from_integer(c.into()),
            Chirality::default(),
        )
    }

    pub fn b(&self) -> Q {
        Q::rational(self.b.clone())
    }

    pub fn c(&self) -> Q {
        Q::rational(self.c.clone())
    }

    pub fn a(&self) -> Q {
        Q::rational(&self.b + &self.c)
    }

    fn place(&self, x: Q, y: Q) -> Point<Q> {
        match self.chirality {
            Chirality::LeftBFirst => Point::new(x, y),
            Chirality::RightBFirst => Point::new(-x, y),
        }
    }

    /// Translation lattice basis `(t1, t2)` of the tiling.
    pub fn lattice_vectors(&self) -> (Point<Q>, Point<Q>) {
        let (a, b, c) = (self.a(), self.b(), self.c());
        let h = Q::sqrt3().half();
        let t1 = self.place(b.half() - a.clone(), -(h.clone() * b.clone()));
        let t2 = self.place((a + b).half(), -(h * c));
        (t1, t2)
    }

    /// One large triangle and the two small triangles hanging below its base.
    pub fn cell(&self) -> Result<[Triangle<Q>; 3], GeneratorError> {
        let (a, b, c) = (self.a(), self.b(), self.c());
        let h = Q::sqrt3().half();
        let tol = Tolerance::DEFAULT;
        let z = Q::zero();
        let large = Triangle::new(
            self.place(z.clone(), z.clone()),
            self.place(a.clone(), z.clone()),
            self.place(a.half(), h.clone() * a.clone()),
            &tol,
        )?;
        let small_b = Triangle::new(
            self.place(z.clone(), z.clone()),
            self.place(b.clone(), z.clone()),
            self.place(b.half(), -(h.clone() * b.clone())),
            &tol,
        )?;
        let small_c = Triangle::new(
            self.place(b.clone(), z.clone()),
            self.place(a.clone(), z.clone()),
            self.place((a + b).half(), -(h * c)),
            &tol,
        )?;
        Ok([large, small_b, small_c])
    }

    /// Offsets from a large triangle's anchor to the anchors of the three
    /// large triangles holding its corners inside their edges; they sum to zero.
    pub fn walk_steps(&self) -> [Point<Q>; 3] {
        let (t1, t2) = self.lattice_vectors();
        let t3 = t1.add(&t2).neg();
        [t1, t2, t3]
    }
}

/// The periodic tiling by three triangle sizes, restricted to `window`.
pub fn periodic_three_size(spec: &PeriodicSpec, window: Window<Q>) -> Result<Patch<Q>, GeneratorError> {
    let tol = Tolerance::DEFAULT;
    let cell = spec.cell()?;
    let (t1, t2) = spec.lattice_vectors();
    let a = spec.a();
    let reach = (a.clone() + spec.b() + spec.c()).to_f64();
    let wbox = window.rect().to_f64();

    // Lattice coordinates of the window corners, inflated by the cell reach.
    let (ux, uy) = t1.to_f64();
    let (vx, vy) = t2.to_f64();
    let det = ux * vy - uy * vx;
    let mut m_range = (i64::MAX, i64::MIN);
    let mut n_range = (i64::MAX, i64::MIN);
    for x in [wbox[0] - reach, wbox[1] + reach] {
        for y in [wbox[2] - reach, wbox[3] + reach] {
            let m = (x * vy - y * vx) / det;
            let n = (ux * y - uy * x) / det;
            m_range = (
                m_range.0.min(libm::floor(m) as i64 - 1),
                m_range.1.max(libm::ceil(m) as i64 + 1),
            );
            n_range = (
                n_range.0.min(libm::floor(n) as i64 - 1),
                n_range.1.max(libm::ceil(n) as i64 + 1),
            );
        }
    }

    let mut triangles = Vec::new();
    for m in m_range.0..=m_range.1 {
        let along_m = t1.scale(&Q::from_i64(m));
        for n in n_range.0..=n_range.1 {
            let (ox, oy) = (m as f64 * ux + n as f64 * vx, m as f64 * uy + n as f64 * vy);
            if ox < wbox[0] - reach || ox > wbox[1] + reach || oy < wbox[2] - reach || oy > wbox[3] + reach {
                continue;
            }
            let offset = along_m.add(&t2.scale(&Q::from_i64(n)));
            for t in &cell {
                let moved = t.translate(&offset);
                if meets_window(&moved, &window, &tol, &wbox) {
                    triangles.push(moved);
                }
            }
        }
    }
    let margin = a * Q::from_i64(2);
    Ok(Patch::with_interiority(
        triangles,
        window,
        tol,
        Interiority::Margin(margin),
    )?)
}

/// Fixed point, start point and index range of the spiral.
#[derive(Clone, Debug, PartialEq)]
pub struct SpiralSpec {
    pub center: (f64, f64),
    pub start: (f64, f64),
    pub i_min: i32,
    pub i_max: i32,
    pub tol: Tolerance,
}

impl SpiralSpec {
    pub fn new(center: (f64, f64), start: (f64, f64), i_min: i32, i_max: i32) -> Self {
        SpiralSpec {
            center,
            start,
            i_min,
            i_max,
            tol: Tolerance::DEFAULT,
        }
    }
}

/// The real root of `x³ + x² − 1` (the reciprocal of the plastic number),
/// by Newton's method.
pub fn spiral_ratio() -> f64 {
    let mut x = 0.75_f64;
    for _ in 0..64 {
        let f = x * x * x + x * x - 1.0;
        let df = 3.0 * x * x + 2.0 * x;
        let next = x - f / df;
        if next == x {
            break;
        }
        x = next;
    }
    x
}

/// `(cos, sin)` of `k · 60°`.
fn sixth_turn(k: i32) -> (f64, f64) {
    const H: f64 = SQRT_3 / 2.0;
    match k.rem_euclid(6) {
        0 => (1.0, 0.0),
        1 => (0.5, H),
        2 => (-0.5, H),
        3 => (-1.0, 0.0),
        4 => (-0.5, -H),
        _ => (0.5, -H),
    }
}

/// The spiral similarity `φ^k`: rotation by `k · 60°` and scaling by
/// `ratio^k` about `center`.
pub fn spiral_map(center: (f64, f64), ratio: f64, k: i32, p: (f64, f64)) -> (f64, f64) {
    let (c, s) = sixth_turn(k);
    let r = libm::pow(ratio, k as f64);
    let (dx, dy) = (p.0 - center.0, p.1 - center.1);
    (center.0 + r * (c * dx - s * dy), center.1 + r * (s * dx + c * dy))
}

/// Vertices of the seed triangle: `A`, `φ(A)`, and the apex on the same side
/// of the line `A φ(A)` as the center.
pub fn spiral_seed(center: (f64, f64), start: (f64, f64), ratio: f64) -> [(f64, f64); 3] {
    let a = start;
    let b = spiral_map(center, ratio, 1, a);
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let side_of = |p: (f64, f64)| dx * (p.1 - a.1) - dy * (p.0 - a.0);
    let (c60, s60) = sixth_turn(1);
    let left = (a.0 + c60 * dx - s60 * dy, a.1 + s60 * dx + c60 * dy);
    let right = (a.0 + c60 * dx + s60 * dy, a.1 - s60 * dx + c60 * dy);
    let apex = if (side_of(left) > 0.0) == (side_of(center) > 0.0) {
        left
    } else {
        right
    };
    [a, b, apex]
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0);
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    libm::sqrt(qx * qx + qy * qy)
}

/// The triangles `φ^i(T₀)` for `i_min ≤ i ≤ i_max`.
///
/// The window is the square about the center inscribed in the disc that the
/// triangles with index `≥ i_min` cover, so the only uncovered part of it is
/// the region near the center filled by indices above `i_max`. Triangles are
/// marked with [`Interiority::LocallyComplete`].
pub fn klaassen_spiral(spec: &SpiralSpec) -> Result<Patch<f64>, GeneratorError> {
    let (p, a) = (spec.center, spec.start);
    if spec.i_min > spec.i_max {
        return Err(GeneratorError::Range(spec.i_min, spec.i_max));
    }
    if spec.tol.eq(&p.0, &a.0) && spec.tol.eq(&p.1, &a.1) {
        return Err(GeneratorError::DegenerateSpec);
    }
    let ratio = spiral_ratio();
    let seed = spiral_seed(p, a, ratio);
    let (dx, dy) = (seed[1].0 - seed[0].0, seed[1].1 - seed[0].1);
    let side0 = libm::sqrt(dx * dx + dy * dy);
    let smallest = side0 * libm::pow(ratio, spec.i_max as f64);
    let largest = side0 * libm::pow(ratio, spec.i_min as f64);
    let pmag = fmax(libm::fabs(p.0), libm::fabs(p.1));
    if !largest.is_finite() || largest > 1e100 || smallest.is_nan() || smallest <= 1e3 * spec.tol.slack(pmag) {
        return Err(GeneratorError::Range(spec.i_min, spec.i_max));
    }

    let d0 = (0..3)
        .map(|k| point_segment_distance(p, seed[k], seed[(k + 1) % 3]))
        .fold(f64::INFINITY, f64::min);
    let half = d0 * libm::pow(ratio, (spec.i_min - 1) as f64) / core::f64::consts::SQRT_2;
    let window = Window::new(p.0 - half, p.0 + half, p.1 - half, p.1 + half)?;
    let wbox = window.rect().to_f64();

    let mut triangles = Vec::new();
    for i in spec.i_min..=spec.i_max {
        let v = seed.map(|q| spiral_map(p, ratio, i, q));
        let t = Triangle::new(
            Point::new(v[0].0, v[0].1),
            Point::new(v[1].0, v[1].1),
            Point::new(v[2].0, v[2].1),
            &spec.tol,
        )?;
        if meets_window(&t, &window, &spec.tol, &wbox) {
            triangles.push(t);
        }
    }
    Ok(Patch::with_interiority(
        triangles,
        window,
        spec.tol,
        Interiority::LocallyComplete,
    )?)
}

/// The edge-to-edge triangular lattice of side `s` over `window`.
pub fn uniform_lattice<S: Scalar>(s: &S, window: Window<S>, tol: Tolerance) -> Result<Patch<S>, GeneratorError> {
    if s.raw_sign() != crate::scalar::Sign::Positive {
        return Err(GeneratorError::NonPositiveSide);
    }
    let sf = s.to_f64();
    let hf = sf * SQRT_3 / 2.0;
    let h = S::sqrt3().half() * s.clone();
    let wbox = window.rect().to_f64();
    let j0 = libm::floor(wbox[2] / hf) as i64 - 1;
    let j1 = libm::ceil(wbox[3] / hf) as i64 + 1;
    let mut triangles = Vec::new();
    for j in j0..=j1 {
        // Row j starts at x = j·s/2.
        let shift = j as f64 * sf / 2.0;
        let i0 = libm::floor((wbox[0] - shift) / sf) as i64 - 2;
        let i1 = libm::ceil((wbox[1] - shift) / sf) as i64 + 1;
        let y = h.clone() * S::from_i64(j);
        for i in i0..=i1 {
            let x = s.clone() * S::from_i64(i) + s.half() * S::from_i64(j);
            let up = Triangle::upward(&Point::new(x.clone(), y.clone()), s, &tol)?;
            let top = y.clone() + h.clone();
            let down = Triangle::new(
                Point::new(x.clone() + s.clone(), y.clone()),
                Point::new(x.clone() + s.clone() + s.half(), top.clone()),
                Point::new(x + s.half(), top),
                &tol,
            )?;
            for t in [up, down] {
                if meets_window(&t, &window, &tol, &wbox) {
                    triangles.push(t);
                }
            }
        }
    }
    let margin = s.clone() * S::from_i64(2);
    Ok(Patch::with_interiority(
        triangles,
        window,
        tol,
        Interiority::Margin(margin),
    )?)
}
