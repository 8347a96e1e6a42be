//! Acceptance criteria 1 to 7. Each criterion prints one `PASS` or `FAIL`
//! line with its measurements; the process exits non-zero if any fails.
//!
//! Values compared against are computed here by independent oracles
//! (brute-force clipping, bisection, closed forms) rather than taken from the
//! library under test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use tritile::io::{load, load_as, save, InteriorRule, LoadError, Token};
use tritile::report::walk_stats;
use tritile::svg::{render_svg, Style};
use tritile_core::generators::{
    klaassen_spiral, periodic_three_size, spiral_map, spiral_seed, uniform_lattice, PeriodicSpec, SpiralSpec,
};
use tritile_core::geometry::{interiors_intersect, orient, shares_full_side};
use tritile_core::structure::{
    check_lemma10, check_lemma7, check_lemma8, check_lemma9, classify, edge_status_unchecked, EdgeStatus, TriangleClass,
};
use tritile_core::verify::{conclusions, hypotheses, same_lattice};
use tritile_core::walk::{extract_graph, martingale_deviation, simulate, Neighbor, SizeField, StepSet};
use tritile_core::{Patch, Point, QSqrt3, Scalar, Sign, Tolerance, Triangle, Window};

type Q = QSqrt3;
const T: Tolerance = Tolerance::DEFAULT;
const SIZES: [(i64, i64); 5] = [(1, 1), (1, 2), (2, 3), (3, 5), (1, 10)];

fn q(n: i64) -> Q {
    Q::from_i64(n)
}

/// Outcome of one criterion: pass flag plus a one-line summary.
struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            ok: true,
            detail: String::new(),
        }
    }

    /// Records a clause; failing clauses are prefixed with `!`.
    fn check(&mut self, ok: bool, what: impl AsRef<str>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        if !ok {
            self.detail.push('!');
        }
        self.detail.push_str(what.as_ref());
        self.ok &= ok;
    }

    fn within(&mut self, elapsed: Duration, limit: Duration, label: &str) {
        self.check(
            elapsed < limit,
            format!("{label} {:.2}s < {}s", elapsed.as_secs_f64(), limit.as_secs()),
        );
    }
}

// ---------------------------------------------------------------------------
// Periodic patches shared by criteria 1, 2 and 7.

struct Case {
    b: i64,
    c: i64,
    spec: PeriodicSpec,
    patch: Patch<Q>,
    build: Duration,
    interior_large: usize,
}

fn interior_large(p: &Patch<Q>) -> usize {
    p.interior_ids()
        .filter(|&t| classify(p, t) == TriangleClass::Large)
        .count()
}

/// Smallest square window, in whole units, whose interior holds at least
/// 200 large triangles. The first guess comes from the cell area.
fn periodic_case(b: i64, c: i64) -> Case {
    let spec = PeriodicSpec::from_i64(b, c).unwrap();
    let cell = 3f64.sqrt() * (b * b + b * c + c * c) as f64 / 2.0;
    let margin = 2 * (b + c);
    let mut half = margin + ((250.0 * cell).sqrt() / 2.0).ceil() as i64;
    loop {
        let start = Instant::now();
        let w = Window::from_i64(-half, half, -half, half).unwrap();
        let patch = periodic_three_size(&spec, w).unwrap();
        let build = start.elapsed();
        let n = interior_large(&patch);
        if n >= 200 {
            return Case {
                b,
                c,
                spec,
                patch,
                build,
                interior_large: n,
            };
        }
        half += b + c;
    }
}

fn criterion_1(cases: &[Case]) -> Outcome {
    let mut o = Outcome::new();
    for k in cases {
        let start = Instant::now();
        let p = &k.patch;
        let h = hypotheses(p, &q(k.b.min(k.c))).unwrap();
        let l7 = check_lemma7(p).len();
        let l8 = check_lemma8(p).len();
        let l9 = check_lemma9(p).len();
        let l10 = check_lemma10(p).map(|r| r.is_clean()).unwrap_or(false);
        let elapsed = k.build + start.elapsed();
        let label = format!("({},{})", k.b, k.c);
        o.check(k.interior_large >= 200, format!("{label} large={}", k.interior_large));
        o.check(h.passes(), format!("{label} hypotheses"));
        o.check(h.defect == Q::zero(), format!("{label} defect={}", h.defect));
        o.check(
            l7 + l8 + l9 == 0 && l10,
            format!("{label} check_lemma7/8/9/10 violations {l7}/{l8}/{l9}/{}", u8::from(!l10)),
        );
        o.within(elapsed, Duration::from_secs(10), &label);
    }
    o
}

fn criterion_2(cases: &[Case]) -> Outcome {
    let mut o = Outcome::new();
    for k in cases {
        let label = format!("({},{})", k.b, k.c);
        let c = conclusions(&k.patch);
        let sizes: Vec<String> = c.sizes.iter().map(|s| s.to_string()).collect();
        o.check(c.at_most_three_sizes(), format!("{label} sizes [{}]", sizes.join(" ")));
        o.check(
            c.sum_rule() && c.sizes.last() == Some(&k.spec.a()),
            format!("{label} a=b+c"),
        );
        o.check(
            c.large_translates(),
            format!("{label} large translates ({})", c.large_count),
        );
        let (t1, t2) = k.spec.lattice_vectors();
        o.check(
            same_lattice(&c.periods, &[t1, t2], &T),
            format!("{label} lattice = <t1,t2>"),
        );
    }
    o
}

// ---------------------------------------------------------------------------
// Criterion 3: brute force over a 3×3 block of fundamental cells.

/// Convex polygon clipped to the half-plane left of `a → b`.
fn clip_half_plane(poly: &[Point<Q>], a: &Point<Q>, b: &Point<Q>) -> Vec<Point<Q>> {
    let side = |p: &Point<Q>| b.sub(a).cross(&p.sub(a));
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let cur = &poly[i];
        let prev = &poly[(i + poly.len() - 1) % poly.len()];
        let (sc, sp) = (side(cur), side(prev));
        let (cur_in, prev_in) = (sc.raw_sign() != Sign::Negative, sp.raw_sign() != Sign::Negative);
        if cur_in != prev_in {
            let t = sp.clone().checked_div(&(sp - sc)).unwrap();
            out.push(prev.add(&cur.sub(prev).scale(&t)));
        }
        if cur_in {
            out.push(cur.clone());
        }
    }
    out
}

fn shoelace(poly: &[Point<Q>]) -> Q {
    let mut s = Q::zero();
    for i in 0..poly.len() {
        s = s + poly[i].cross(&poly[(i + 1) % poly.len()]);
    }
    s.half()
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    for (b, c) in SIZES {
        let label = format!("({b},{c})");
        let spec = PeriodicSpec::from_i64(b, c).unwrap();
        let (t1, t2) = spec.lattice_vectors();
        let (a, bq, cq) = (spec.a(), spec.b(), spec.c());
        let cross = t1.cross(&t2).abs();
        let form1 = Q::sqrt3().half() * (bq.clone() * bq.clone() + bq.clone() * cq.clone() + cq.clone() * cq.clone());
        let form2 = Q::sqrt3() * Q::from_ratio(1, 4) * (a.clone() * a + bq.clone() * bq + cq.clone() * cq);
        o.check(cross == form1 && cross == form2, format!("{label} |t1 x t2|={cross}"));

        let cell = spec.cell().unwrap();
        let mut tris = Vec::new();
        for m in -1..=1 {
            for n in -1..=1 {
                let off = t1.scale(&q(m)).add(&t2.scale(&q(n)));
                tris.extend(cell.iter().map(|t| t.translate(&off)));
            }
        }
        let mut bad = 0;
        for i in 0..tris.len() {
            for j in i + 1..tris.len() {
                if interiors_intersect(&tris[i], &tris[j], &T) || shares_full_side(&tris[i], &tris[j], &T) {
                    bad += 1;
                }
            }
        }
        o.check(bad == 0, format!("{label} overlaps={bad}"));

        // The inner cell: a fundamental parallelogram centred on the
        // centroid of the middle copy, so that the ring of eight neighbours
        // reaches past all of its sides.
        let mut moment = Point::origin();
        let mut mass = Q::zero();
        for t in &cell {
            let v = t.vertices();
            let g = v[0].add(&v[1]).add(&v[2]).scale(&Q::from_ratio(1, 3));
            moment = moment.add(&g.scale(&t.area()));
            mass = mass + t.area();
        }
        let centre = moment.scale(&q(1).checked_div(&mass).unwrap());
        let o0 = centre.sub(&t1.add(&t2).scale(&Q::from_ratio(1, 2)));
        let mut corners = [o0.clone(), o0.add(&t1), o0.add(&t1).add(&t2), o0.add(&t2)];
        if orient(&corners[0], &corners[1], &corners[2], &T) == Sign::Negative {
            corners = [o0.clone(), o0.add(&t2), o0.add(&t1).add(&t2), o0.add(&t1)];
        }
        let mut covered = Q::zero();
        for t in &tris {
            let mut poly = t.vertices().to_vec();
            for k in 0..4 {
                if poly.len() < 3 {
                    break;
                }
                poly = clip_half_plane(&poly, &corners[k], &corners[(k + 1) % 4]);
            }
            if poly.len() >= 3 {
                covered = covered + shoelace(&poly);
            }
        }
        let defect = cross.clone() - covered;
        o.check(defect == Q::zero(), format!("{label} defect={defect}"));
    }
    o
}

// ---------------------------------------------------------------------------
// Criterion 4: the spiral.

fn bisect_ratio() -> f64 {
    let f = |x: f64| x * x * x + x * x - 1.0;
    let (mut lo, mut hi) = (0.5_f64, 1.0_f64);
    loop {
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

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let alpha = bisect_ratio();
    let residual = (alpha * alpha * alpha + alpha * alpha - 1.0).abs();
    o.check(residual <= 1e-14, format!("alpha^3+alpha^2-1={residual:.1e}"));
    o.check((alpha - 0.7548776662466927).abs() <= 1e-15, format!("alpha={alpha}"));

    let (center, first) = ((0.0, 0.0), (1.0, 0.0));
    let seed = spiral_seed(center, first, alpha);
    let raw: Vec<Triangle<f64>> = (-40..=40)
        .map(|i| {
            let v = seed.map(|p| spiral_map(center, alpha, i, p));
            let p = |k: usize| Point::new(v[k].0, v[k].1);
            Triangle::new(p(0), p(1), p(2), &T).unwrap()
        })
        .collect();
    let mut overlaps = 0;
    for i in 0..raw.len() {
        for j in i + 1..raw.len() {
            if interiors_intersect(&raw[i], &raw[j], &T) {
                overlaps += 1;
            }
        }
    }
    o.check(overlaps == 0, format!("overlapping pairs={overlaps}"));
    let worst = raw
        .windows(2)
        .map(|w| (w[1].side() / w[0].side() - alpha).abs())
        .fold(0.0, f64::max);
    o.check(worst <= 1e-12, format!("max |ratio-alpha|={worst:.1e}"));

    let p = klaassen_spiral(&SpiralSpec::new(center, first, -40, 40)).unwrap();
    let mut counts = [0usize; 5];
    let mut bad_large = 0;
    for t in p.interior_ids() {
        let class = classify(&p, t);
        counts[class as usize] += 1;
        if class == TriangleClass::Large {
            let one =
                (0..3).all(|e| matches!(edge_status_unchecked(&p, t, e), EdgeStatus::Subdivided(v) if v.len() == 1));
            bad_large += usize::from(!one);
        }
    }
    let [small, large, improper, other, indeterminate] = counts;
    o.check(
        small + large > 0 && improper + other + indeterminate == 0,
        format!("interior small={small} large={large} improper={improper} other={other} indeterminate={indeterminate}"),
    );
    o.check(
        bad_large == 0,
        format!("large edges with one interior vertex {}/{large}", large - bad_large),
    );
    o.within(start.elapsed(), Duration::from_secs(5), "time");
    o
}

// ---------------------------------------------------------------------------
// Criterion 5: negative controls.

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let lattice = uniform_lattice(&q(1), Window::from_i64(0, 10, 0, 10).unwrap(), T).unwrap();
    let h = hypotheses(&lattice, &q(1)).unwrap();
    o.check(
        !h.no_shared_side(),
        format!("lattice shared sides={}", h.shared_sides.len()),
    );

    let spec = PeriodicSpec::from_i64(1, 2).unwrap();
    let p = periodic_three_size(&spec, Window::from_i64(-20, 20, -20, 20).unwrap()).unwrap();
    let mut g = extract_graph(&p).unwrap();
    let before = martingale_deviation(&g);
    let i = g.nodes().iter().position(|n| n.is_complete()).unwrap();
    let Neighbor::Node(j) = g.node(i).neighbors[0] else {
        unreachable!()
    };
    g.set_side(j, q(4));
    let after = martingale_deviation(&g);
    o.check(
        before == Q::zero() && after > Q::zero(),
        format!("martingale deviation {before} -> {after}"),
    );

    let tri = "0/1:0/1 0/1:0/1 1/1:0/1 0/1:0/1 1/2:0/1 0/1:1/2";
    let text = format!("TILING/1 exact eps=1e-9\nWINDOW -2 2 -2 2\n{tri}\n{tri}\n");
    let rejected = matches!(
        load(&text, &InteriorRule::Default),
        Err(LoadError::Overlap { first: 3, second: 4 })
    );
    o.check(rejected, "duplicate triangle -> Overlap");
    o
}

// ---------------------------------------------------------------------------
// Criterion 6: walk statistics.

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    let spec = PeriodicSpec::from_i64(1, 2).unwrap();
    let steps = spec.walk_steps();
    let set = StepSet::new(&steps, &T).unwrap();
    let n = 10_000;
    let field = SizeField::constant(spec.a());
    let stats = simulate(&set, n, 10_000, 20_240_601, Some(&field)).unwrap();

    let per_step: f64 = steps.iter().map(|s| s.norm_sq().to_f64()).sum::<f64>() / 3.0;
    let expect = n as f64 * per_step;
    let msd = stats.mean_sq_displacement[n - 1];
    let rel = (msd - expect).abs() / expect;
    o.check(
        rel <= 0.05,
        format!("msd={msd:.1} expected={expect:.1} rel.err={rel:.4}"),
    );

    let freqs: Vec<f64> = [100, 1_000, 10_000]
        .iter()
        .map(|&h| stats.return_frequency(h))
        .collect();
    o.check(
        freqs.windows(2).all(|w| w[0] <= w[1]),
        format!("return freq {:.4} {:.4} {:.4}", freqs[0], freqs[1], freqs[2]),
    );
    o.check(
        stats.expected_size_at_stop == Some(spec.a()),
        format!(
            "stopped size {:?} = a",
            stats.expected_size_at_stop.as_ref().map(|s| s.to_string())
        ),
    );
    o.within(start.elapsed(), Duration::from_secs(60), "time");
    o
}

// ---------------------------------------------------------------------------
// Criterion 7: round trip and determinism.

fn round_trip<S: Token>(p: &Patch<S>, rule: &InteriorRule) -> bool {
    let text = save(p);
    load_as::<S>(&text, rule).is_ok_and(|back| back == *p && save(&back) == text)
}

fn criterion_7(cases: &[Case]) -> Outcome {
    let mut o = Outcome::new();
    let mut total = 0;
    let mut good = 0;
    let mut tally = |ok: bool| {
        total += 1;
        good += usize::from(ok);
    };
    for k in cases {
        tally(round_trip(&k.patch, &InteriorRule::Default));
    }
    for (center, first) in [((0.0, 0.0), (1.0, 0.0)), ((0.3, -1.2), (2.5, 0.7))] {
        let s = klaassen_spiral(&SpiralSpec::new(center, first, -40, 40)).unwrap();
        tally(round_trip(&s, &InteriorRule::Local));
    }
    let w = Window::from_i64(-6, 6, -6, 6).unwrap();
    tally(round_trip(
        &uniform_lattice(&q(1), w, T).unwrap(),
        &InteriorRule::Default,
    ));
    let w = Window::new(-6.0, 6.0, -6.0, 6.0).unwrap();
    tally(round_trip(
        &uniform_lattice(&0.75, w, T).unwrap(),
        &InteriorRule::Default,
    ));
    o.check(good == total, format!("save/load identity {good}/{total}"));

    let spec = PeriodicSpec::from_i64(2, 3).unwrap();
    let set = StepSet::new(&spec.walk_steps(), &T).unwrap();
    let run = || walk_stats(&simulate(&set, 2_000, 500, 99, Some(&SizeField::constant(spec.a()))).unwrap());
    o.check(run() == run(), "walk stats identical");

    let p = &cases[1].patch;
    let same_svg = render_svg(p, &Style::labelled()) == render_svg(p, &Style::labelled());
    o.check(same_svg, "SVG identical");

    // The same through the command line, as separate processes.
    let dir = std::env::temp_dir().join(format!("tritile-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("p.tiling");
    std::fs::write(&file, save(p)).unwrap();
    let exe = std::env::current_exe().unwrap();
    let bin = |args: &[&str]| {
        Command::new(&exe)
            .arg(AS_CLI)
            .args(args)
            .current_dir(&dir)
            .output()
            .unwrap()
    };
    let walk = ["walk", "p.tiling", "--steps", "500", "--trials", "100", "--seed", "3"];
    let (w1, w2) = (bin(&walk), bin(&walk));
    o.check(w1.status.success() && w1.stdout == w2.stdout, "cli walk identical");
    bin(&["render", "p.tiling", "-o", "a.svg"]);
    bin(&["render", "p.tiling", "-o", "b.svg"]);
    let (a, b) = (std::fs::read(dir.join("a.svg")), std::fs::read(dir.join("b.svg")));
    o.check(matches!((&a, &b), (Ok(x), Ok(y)) if x == y), "cli SVG identical");
    let _ = std::fs::remove_dir_all(&dir);
    o
}

fn report(n: usize, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Outcome {
            ok: false,
            detail: format!("panicked: {msg}"),
        }
    });
    let verdict = if outcome.ok { "PASS" } else { "FAIL" };
    println!(
        "criterion {n}: {verdict} ({:.2}s) {}",
        start.elapsed().as_secs_f64(),
        outcome.detail
    );
    outcome.ok
}

/// First argument that makes this binary act as the `tritile` command.
const AS_CLI: &str = "--as-tritile";

fn main() -> ExitCode {
    let mut args = std::env::args_os();
    if args.nth(1).is_some_and(|a| a == AS_CLI) {
        return ExitCode::from(tritile::cli::run(std::iter::once("tritile".into()).chain(args)));
    }
    // The generator's lattice is checked before anything builds on it.
    let mut ok = report(3, criterion_3);
    let cases: Vec<Case> = SIZES.iter().map(|&(b, c)| periodic_case(b, c)).collect();
    ok &= report(1, || criterion_1(&cases));
    ok &= report(2, || criterion_2(&cases));
    ok &= report(4, criterion_4);
    ok &= report(5, criterion_5);
    ok &= report(6, criterion_6);
    ok &= report(7, || criterion_7(&cases));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
