//! Whole-patch verification: the tiling hypotheses (disjointness, no shared
//! side, size lower bound, coverage) and the conclusions they force (three
//! sizes with `a = b + c`, translated large triangles, two periods).

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::clip::Rect;
use crate::geometry::{interiors_intersect, shares_full_side, Point, Triangle};
use crate::model::{pad_for, Patch, TriId};
use crate::scalar::{Scalar, Sign, Tolerance};
use crate::structure::{classify, TriangleClass};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("size lower bound must be positive")]
    NonPositiveDelta,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesesReport<S> {
    /// Pairs of triangles whose interiors meet.
    pub overlaps: Vec<(TriId, TriId)>,
    /// Pairs of triangles with a common full side.
    pub shared_sides: Vec<(TriId, TriId)>,
    pub delta: S,
    pub min_side: Option<S>,
    /// Triangles with side below `delta`.
    pub below_delta: Vec<TriId>,
    /// Area of the checked region (the margin-shrunk window).
    pub region_area: S,
    pub covered_area: S,
    /// `region_area − covered_area`.
    pub defect: S,
    coverage_ok: bool,
}

impl<S: Scalar> HypothesesReport<S> {
    pub fn disjoint(&self) -> bool {
        self.overlaps.is_empty()
    }

    pub fn no_shared_side(&self) -> bool {
        self.shared_sides.is_empty()
    }

    pub fn bounded_below(&self) -> bool {
        self.below_delta.is_empty()
    }

    /// Zero defect (exact) or at most `eps · area` (float), on a non-empty region.
    pub fn covers(&self) -> bool {
        self.coverage_ok
    }

    pub fn passes(&self) -> bool {
        self.disjoint() && self.no_shared_side() && self.bounded_below() && self.covers()
    }
}

/// Candidate pairs with touching bounding boxes, by a sweep over `x`.
/// Deliberately independent of the patch's bucket index.
fn touching_pairs<S: Scalar>(tris: &[Triangle<S>], tol: &Tolerance) -> Vec<(TriId, TriId)> {
    let boxes: Vec<[f64; 4]> = tris.iter().map(|t| t.bbox()).collect();
    let mut order: Vec<usize> = (0..tris.len()).collect();
    order.sort_by(|&i, &j| boxes[i][0].total_cmp(&boxes[j][0]).then(i.cmp(&j)));
    let mut out = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        let pad = pad_for(&boxes[i], tol);
        for &j in &order[k + 1..] {
            if boxes[j][0] > boxes[i][1] + 2.0 * pad {
                break;
            }
            if boxes[j][2] <= boxes[i][3] + 2.0 * pad && boxes[i][2] <= boxes[j][3] + 2.0 * pad {
                out.push((i.min(j), i.max(j)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Checks the four tiling hypotheses on `patch` with size lower bound `delta`.
pub fn hypotheses<S: Scalar>(patch: &Patch<S>, delta: &S) -> Result<HypothesesReport<S>, VerifyError> {
    if delta.raw_sign() != Sign::Positive {
        return Err(VerifyError::NonPositiveDelta);
    }
    let tol = patch.tol();
    let tris = patch.triangles();
    let mut overlaps = Vec::new();
    let mut shared_sides = Vec::new();
    for (i, j) in touching_pairs(tris, tol) {
        if interiors_intersect(&tris[i], &tris[j], tol) {
            overlaps.push((i, j));
        }
        if shares_full_side(&tris[i], &tris[j], tol) {
            shared_sides.push((i, j));
        }
    }

    let below_delta = (0..tris.len())
        .filter(|&t| tol.cmp(tris[t].side(), delta) == Ordering::Less)
        .collect();

    let region = patch.inner_window();
    let (region_area, covered_area) = if region.is_empty() {
        (S::zero(), S::zero())
    } else {
        (region.area(), patch.clipped_area_in(&region))
    };
    let defect = region_area.clone() - covered_area.clone();
    let coverage_ok = !region.is_empty()
        && if S::is_exact() {
            defect.raw_sign() == Sign::Zero
        } else {
            libm::fabs(defect.to_f64()) <= tol.eps() * region_area.to_f64()
        };

    Ok(HypothesesReport {
        overlaps,
        shared_sides,
        delta: delta.clone(),
        min_side: patch.min_side().cloned(),
        below_delta,
        region_area,
        covered_area,
        defect,
        coverage_ok,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConclusionsReport<S> {
    /// Distinct side lengths of interior triangles, ascending.
    pub sizes: Vec<S>,
    pub large_count: usize,
    /// Large triangles that are not translates of the first one.
    pub large_mismatches: Vec<TriId>,
    /// Reduced period basis (see [`detect_periods`]).
    pub periods: Vec<Point<S>>,
    sum_rule: bool,
}

impl<S: Scalar> ConclusionsReport<S> {
    pub fn at_most_three_sizes(&self) -> bool {
        !self.sizes.is_empty() && self.sizes.len() <= 3
    }

    /// The largest size is the sum of the smaller two (or twice the smaller
    /// one when there are only two).
    pub fn sum_rule(&self) -> bool {
        self.sum_rule
    }

    pub fn large_translates(&self) -> bool {
        self.large_mismatches.is_empty()
    }

    pub fn periodic(&self) -> bool {
        self.periods.len() == 2
    }

    pub fn passes(&self) -> bool {
        self.at_most_three_sizes() && self.sum_rule() && self.large_translates() && self.periodic()
    }
}

/// Distinct values of `xs` up to tolerance, ascending.
fn distinct<S: Scalar>(mut xs: Vec<S>, tol: &Tolerance) -> Vec<S> {
    xs.sort_by(|a, b| a.raw_cmp(b));
    let mut out: Vec<S> = Vec::new();
    for x in xs {
        if out.last().is_none_or(|l| !tol.eq(l, &x)) {
            out.push(x);
        }
    }
    out
}

pub fn conclusions<S: Scalar>(patch: &Patch<S>) -> ConclusionsReport<S> {
    let tol = patch.tol();
    let sizes = distinct(
        patch.interior_ids().map(|t| patch.triangle(t).side().clone()).collect(),
        tol,
    );
    let sum_rule = match sizes.as_slice() {
        [b, a] => tol.eq(a, &(b.clone() + b.clone())),
        [b, c, a] => tol.eq(a, &(b.clone() + c.clone())),
        _ => false,
    };

    let large: Vec<TriId> = patch
        .interior_ids()
        .filter(|&t| classify(patch, t) == TriangleClass::Large)
        .collect();
    let large_mismatches = match large.first() {
        None => Vec::new(),
        Some(&first) => {
            let shape = patch.triangle(first).shape();
            large
                .iter()
                .copied()
                .filter(|&t| {
                    let s = patch.triangle(t).shape();
                    !(s.0.approx_eq(&shape.0, tol) && s.1.approx_eq(&shape.1, tol))
                })
                .collect()
        }
    };

    ConclusionsReport {
        sizes,
        large_count: large.len(),
        large_mismatches,
        periods: detect_periods(patch),
        sum_rule,
    }
}

fn inside<S: Scalar>(t: &Triangle<S>, rect: &Rect<S>, tol: &Tolerance) -> bool {
    t.vertices().iter().all(|p| {
        tol.cmp(&p.x, &rect.xmin) != Ordering::Less
            && tol.cmp(&p.x, &rect.xmax) != Ordering::Greater
            && tol.cmp(&p.y, &rect.ymin) != Ordering::Less
            && tol.cmp(&p.y, &rect.ymax) != Ordering::Greater
    })
}

/// Whether translating by `v` maps every interior triangle whose image stays
/// inside the margin-shrunk window onto a triangle of the patch. At least one
/// image must be checked.
pub fn is_period<S: Scalar>(patch: &Patch<S>, v: &Point<S>) -> bool {
    let tol = patch.tol();
    let inner = patch.inner_window();
    if inner.is_empty() {
        return false;
    }
    let mut checked = 0usize;
    for t in patch.interior_ids() {
        let image = patch.triangle(t).translate(v);
        if !inside(&image, &inner, tol) {
            continue;
        }
        if patch.find_triangle(&image).is_none() {
            return false;
        }
        checked += 1;
    }
    checked > 0
}

/// Sign normalization: `y > 0`, or `y = 0` and `x > 0`.
fn upper<S: Scalar>(v: Point<S>, tol: &Tolerance) -> Point<S> {
    match (tol.sign(&v.y), tol.sign(&v.x)) {
        (Sign::Negative, _) | (Sign::Zero, Sign::Negative) => v.neg(),
        _ => v,
    }
}

/// A reduced basis of at most two independent periods: the shortest period,
/// then the shortest one not parallel to it.
///
/// Candidates are the offsets from a central reference triangle (a large one
/// when the patch has any) to every translate of it, so every period whose
/// image of the reference stays in the patch is considered. Returns an empty
/// list when no period is found at this window size.
pub fn detect_periods<S: Scalar>(patch: &Patch<S>) -> Vec<Point<S>> {
    let tol = patch.tol();
    let interior: Vec<TriId> = patch.interior_ids().collect();
    let large: Vec<TriId> = interior
        .iter()
        .copied()
        .filter(|&t| classify(patch, t) == TriangleClass::Large)
        .collect();
    let pool = if large.is_empty() { &interior } else { &large };
    let w = patch.window().rect().to_f64();
    let (cx, cy) = ((w[0] + w[1]) / 2.0, (w[2] + w[3]) / 2.0);
    let dist = |t: TriId| {
        let (x, y) = patch.triangle(t).anchor().to_f64();
        (x - cx) * (x - cx) + (y - cy) * (y - cy)
    };
    let Some(reference) = pool
        .iter()
        .copied()
        .min_by(|&a, &b| dist(a).total_cmp(&dist(b)).then(a.cmp(&b)))
    else {
        return Vec::new();
    };

    let rt = patch.triangle(reference);
    let shape = rt.shape();
    let mut candidates: Vec<Point<S>> = Vec::new();
    for (u, t) in patch.triangles().iter().enumerate() {
        if u == reference {
            continue;
        }
        let s = t.shape();
        if s.0.approx_eq(&shape.0, tol) && s.1.approx_eq(&shape.1, tol) {
            candidates.push(upper(t.anchor().sub(rt.anchor()), tol));
        }
    }
    candidates.sort_by(|a, b| {
        a.norm_sq()
            .raw_cmp(&b.norm_sq())
            .then_with(|| a.y.raw_cmp(&b.y))
            .then_with(|| b.x.raw_cmp(&a.x))
    });
    candidates.dedup_by(|a, b| a.approx_eq(b, tol));

    let mut basis: Vec<Point<S>> = Vec::new();
    for v in candidates {
        if let Some(first) = basis.first() {
            if tol.sign(&first.cross(&v)) == Sign::Zero {
                continue;
            }
        }
        if is_period(patch, &v) {
            basis.push(v);
            if basis.len() == 2 {
                break;
            }
        }
    }
    basis
}

/// Coefficients `(m, n)` with `v = m·b0 + n·b1`, when both are integers.
fn integer_coords<S: Scalar>(v: &Point<S>, b0: &Point<S>, b1: &Point<S>, tol: &Tolerance) -> Option<(i64, i64)> {
    let det = b0.cross(b1);
    let m = v.cross(b1).checked_div(&det)?;
    let n = b0.cross(v).checked_div(&det)?;
    Some((m.to_integer(tol)?, n.to_integer(tol)?))
}

/// Whether two pairs of vectors generate the same rank-2 lattice.
pub fn same_lattice<S: Scalar>(a: &[Point<S>], b: &[Point<S>], tol: &Tolerance) -> bool {
    let ([a0, a1], [b0, b1]) = (a, b) else {
        return false;
    };
    if tol.sign(&a0.cross(a1)) == Sign::Zero || tol.sign(&b0.cross(b1)) == Sign::Zero {
        return false;
    }
    [a0, a1].iter().all(|v| integer_coords(v, b0, b1, tol).is_some())
        && [b0, b1].iter().all(|v| integer_coords(v, a0, a1, tol).is_some())
}
