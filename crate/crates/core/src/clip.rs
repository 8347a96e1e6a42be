//! Convex polygon clipping against an axis-aligned rectangle.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geometry::Point;
use crate::scalar::Scalar;

/// Axis-aligned rectangle `[xmin, xmax] × [ymin, ymax]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rect<S> {
    pub xmin: S,
    pub xmax: S,
    pub ymin: S,
    pub ymax: S,
}

impl<S: Scalar> Rect<S> {
    pub fn area(&self) -> S {
        (self.xmax.clone() - self.xmin.clone()) * (self.ymax.clone() - self.ymin.clone())
    }

    pub fn is_empty(&self) -> bool {
        self.xmax.raw_cmp(&self.xmin) != Ordering::Greater || self.ymax.raw_cmp(&self.ymin) != Ordering::Greater
    }

    /// Shrinks every side by `m`.
    pub fn shrink(&self, m: &S) -> Rect<S> {
        Rect {
            xmin: self.xmin.clone() + m.clone(),
            xmax: self.xmax.clone() - m.clone(),
            ymin: self.ymin.clone() + m.clone(),
            ymax: self.ymax.clone() - m.clone(),
        }
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.xmin.to_f64(),
            self.xmax.to_f64(),
            self.ymin.to_f64(),
            self.ymax.to_f64(),
        ]
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    /// Inner side of the window line, boundary included.
    fn inside<S: Scalar>(self, p: &Point<S>, r: &Rect<S>) -> bool {
        let ord = match self {
            Side::Left => p.x.raw_cmp(&r.xmin),
            Side::Right => r.xmax.raw_cmp(&p.x),
            Side::Bottom => p.y.raw_cmp(&r.ymin),
            Side::Top => r.ymax.raw_cmp(&p.y),
        };
        ord != Ordering::Less
    }

    fn crossing<S: Scalar>(self, a: &Point<S>, b: &Point<S>, r: &Rect<S>) -> Point<S> {
        let (line, along_x) = match self {
            Side::Left => (&r.xmin, true),
            Side::Right => (&r.xmax, true),
            Side::Bottom => (&r.ymin, false),
            Side::Top => (&r.ymax, false),
        };
        let (a0, b0) = if along_x { (&a.x, &b.x) } else { (&a.y, &b.y) };
        let t = (line.clone() - a0.clone())
            .checked_div(&(b0.clone() - a0.clone()))
            .unwrap_or_else(S::zero);
        let p = a.add(&b.sub(a).scale(&t));
        // Pin the clipped coordinate exactly on the window line.
        if along_x {
            Point::new(line.clone(), p.y)
        } else {
            Point::new(p.x, line.clone())
        }
    }
}

/// Sutherland–Hodgman clipping of a convex polygon to `rect`.
pub fn clip_convex<S: Scalar>(poly: &[Point<S>], rect: &Rect<S>) -> Vec<Point<S>> {
    let mut out: Vec<Point<S>> = poly.to_vec();
    for side in [Side::Left, Side::Right, Side::Bottom, Side::Top] {
        if out.is_empty() {
            break;
        }
        let input = core::mem::take(&mut out);
        let n = input.len();
        for i in 0..n {
            let cur = &input[i];
            let prev = &input[(i + n - 1) % n];
            let cur_in = side.inside(cur, rect);
            let prev_in = side.inside(prev, rect);
            if cur_in {
                if !prev_in {
                    out.push(side.crossing(prev, cur, rect));
                }
                out.push(cur.clone());
            } else if prev_in {
                out.push(side.crossing(prev, cur, rect));
            }
        }
    }
    out
}

/// Shoelace area of a counterclockwise polygon.
pub fn polygon_area<S: Scalar>(poly: &[Point<S>]) -> S {
    let n = poly.len();
    if n < 3 {
        return S::zero();
    }
    let mut twice = S::zero();
    for i in 0..n {
        twice = twice + poly[i].cross(&poly[(i + 1) % n]);
    }
    twice.half()
}
