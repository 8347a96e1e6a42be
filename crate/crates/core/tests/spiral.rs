//! The spiral of pairwise distinct sizes around a single puncture point.

use tritile_core::generators::{klaassen_spiral, spiral_map, spiral_ratio, spiral_seed, GeneratorError, SpiralSpec};
use tritile_core::geometry::{collinear_overlap, interiors_intersect, shares_full_side};
use tritile_core::structure::{check_lemma9, classify, edge_status_unchecked, is_improper, EdgeStatus, TriangleClass};
use tritile_core::{Patch, Point, Tolerance, Triangle};

const T: Tolerance = Tolerance::DEFAULT;

fn bisect_ratio() -> f64 {
    let f = |x: f64| x * x * x + x * x - 1.0;
    let (mut lo, mut hi) = (0.7_f64, 0.8_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

#[test]
fn ratio_matches_bisection_oracle() {
    let alpha = bisect_ratio();
    assert!((alpha * alpha * alpha + alpha * alpha - 1.0).abs() <= 1e-14);
    assert!((alpha - 0.7548776662466927).abs() <= 1e-15);
    assert!((spiral_ratio() - alpha).abs() <= 1e-15);
}

#[test]
fn sixth_power_is_pure_scaling() {
    let alpha = spiral_ratio();
    let c = (0.5, -2.0);
    for p in [(1.0, 0.0), (3.0, 4.0), (-7.5, 0.25)] {
        let q = spiral_map(c, alpha, 6, p);
        let k = alpha.powi(6);
        assert!((q.0 - (c.0 + k * (p.0 - c.0))).abs() < 1e-12);
        assert!((q.1 - (c.1 + k * (p.1 - c.1))).abs() < 1e-12);
    }
}

const CASES: [((f64, f64), (f64, f64)); 3] = [
    ((0.0, 0.0), (1.0, 0.0)),
    ((0.3, -1.2), (2.5, 0.7)),
    ((5.0, 5.0), (4.0, 9.0)),
];

/// All `φ^i(T₀)` for `i` in `range`, straight from the maps.
fn raw(center: (f64, f64), start: (f64, f64), range: std::ops::RangeInclusive<i32>) -> Vec<(i32, Triangle<f64>)> {
    let alpha = spiral_ratio();
    let seed = spiral_seed(center, start, alpha);
    range
        .map(|i| {
            let v = seed.map(|q| spiral_map(center, alpha, i, q));
            let p = |k: usize| Point::new(v[k].0, v[k].1);
            (i, Triangle::new(p(0), p(1), p(2), &T).unwrap())
        })
        .collect()
}

#[test]
fn all_pairs_are_interior_disjoint_with_distinct_sizes() {
    for (c, a) in CASES {
        let tris = raw(c, a, -40..=40);
        for (x, (_, s)) in tris.iter().enumerate() {
            for (_, t) in &tris[x + 1..] {
                assert!(!interiors_intersect(s, t, &T));
                assert!(!shares_full_side(s, t, &T));
                assert!((s.side() - t.side()).abs() > 1e-9 * s.side().max(*t.side()));
            }
        }
    }
}

#[test]
fn consecutive_side_ratio_is_alpha() {
    let alpha = bisect_ratio();
    for (c, a) in CASES {
        let tris = raw(c, a, -40..=40);
        // Coordinates carry absolute rounding of order ulp(|P|), which is
        // what limits the relative accuracy of the smallest sides.
        let mag = c.0.abs().max(c.1.abs()).max(1.0);
        for w in tris.windows(2) {
            let r = w[1].1.side() / w[0].1.side();
            let rounding = 16.0 * f64::EPSILON * mag / w[1].1.side();
            assert!((r - alpha).abs() <= 1e-12 * alpha + rounding, "{r}");
        }
        let d = ((a.0 - c.0).powi(2) + (a.1 - c.1).powi(2)).sqrt();
        let side0 = tris[40].1.side();
        // |A − φ(A)|² = d²(1 + α² − α) by the law of cosines at 60°.
        assert!((side0 - d * (1.0 + alpha * alpha - alpha).sqrt()).abs() < 1e-12 * d);
    }
}

fn spiral(center: (f64, f64), start: (f64, f64)) -> Patch<f64> {
    klaassen_spiral(&SpiralSpec::new(center, start, -40, 40)).unwrap()
}

/// Index `i` of a spiral triangle, recovered from its side length.
fn index_of(tri: &Triangle<f64>, side0: f64) -> i32 {
    ((tri.side() / side0).ln() / spiral_ratio().ln()).round() as i32
}

/// Each triangle has one subdivided edge carrying one vertex, flanked from
/// outside by `T_{i+1}` and `T_{i+5}`, whose sides add up to `side(T_i)`
/// (`α + α⁵ = 1`, a multiple of `α³ + α² − 1`).
#[test]
fn subdivided_edge_is_flanked_by_two_later_triangles() {
    for (c, a) in CASES {
        let p = spiral(c, a);
        let side0 = raw(c, a, 0..=0)[0].1.side().to_owned();
        let mut checked = 0;
        for t in 0..p.len() {
            let i = index_of(p.triangle(t), side0);
            if i + 5 > 40 || !p.is_interior(t) {
                continue;
            }
            let statuses: Vec<_> = (0..3).map(|e| edge_status_unchecked(&p, t, e)).collect();
            let cut: Vec<usize> = (0..3).filter(|&e| !statuses[e].is_uncut()).collect();
            assert_eq!(cut.len(), 1);
            let EdgeStatus::Subdivided(pts) = &statuses[cut[0]] else {
                unreachable!()
            };
            assert_eq!(pts.len(), 1);

            let edge = p.triangle(t).edge(cut[0]);
            let mut flank: Vec<(i32, f64)> = Vec::new();
            for u in 0..p.len() {
                if u == t {
                    continue;
                }
                for other in p.triangle(u).edges() {
                    if let Some(o) = collinear_overlap(&edge, &other, &T) {
                        let len = ((o.b.x - o.a.x).powi(2) + (o.b.y - o.a.y).powi(2)).sqrt();
                        flank.push((index_of(p.triangle(u), side0), len));
                    }
                }
            }
            flank.sort_by_key(|f| f.0);
            assert_eq!(flank.iter().map(|f| f.0).collect::<Vec<_>>(), [i + 1, i + 5]);
            let sum: f64 = flank.iter().map(|f| f.1).sum();
            let side = p.triangle(t).side();
            assert!((sum - side).abs() <= 1e-9 * side);
            checked += 1;
        }
        assert!(checked > 20);
    }
}

/// Interior spiral triangles are neither small nor large: one edge is cut
/// and continues at neither endpoint. The spiral has no positive lower
/// bound on sizes, so nothing forces the three-size structure here.
#[test]
fn interior_triangles_are_improper() {
    for (c, a) in CASES {
        let p = spiral(c, a);
        let interior: Vec<_> = p.interior_ids().collect();
        assert!(interior.len() > 40);
        for t in interior {
            assert_eq!(classify(&p, t), TriangleClass::Improper);
            assert!(is_improper(&p, t));
        }
        // No large triangle exists, so the large-edge check has nothing to flag
        // beyond the non-small, non-large classes.
        assert!(check_lemma9(&p)
            .iter()
            .all(|v| matches!(v.kind, tritile_core::structure::ViolationKind::NotSmallOrLarge(_))));
    }
}

#[test]
fn boundary_near_the_outer_edge_and_the_center() {
    let p = spiral((0.0, 0.0), (1.0, 0.0));
    let side0 = raw((0.0, 0.0), (1.0, 0.0), 0..=0)[0].1.side().to_owned();
    for t in 0..p.len() {
        let i = index_of(p.triangle(t), side0);
        if i <= -39 || i >= 40 {
            assert!(!p.is_interior(t), "index {i}");
        }
    }
}

#[test]
fn rejects_bad_specs() {
    assert_eq!(
        klaassen_spiral(&SpiralSpec::new((1.0, 1.0), (1.0, 1.0), 0, 3)),
        Err(GeneratorError::DegenerateSpec)
    );
    assert!(matches!(
        klaassen_spiral(&SpiralSpec::new((0.0, 0.0), (1.0, 0.0), 0, 5000)),
        Err(GeneratorError::Range(..))
    ));
    assert!(matches!(
        klaassen_spiral(&SpiralSpec::new((0.0, 0.0), (1.0, 0.0), 3, 2)),
        Err(GeneratorError::Range(..))
    ));
}
