//! Key-value rendering of verification reports and walk statistics.

use std::fmt::Write as _;

use tritile_core::structure::{check_lemma10, check_lemma7, check_lemma8, check_lemma9, Violation};
use tritile_core::verify::{conclusions, detect_periods, hypotheses, VerifyError};
use tritile_core::walk::WalkStats;
use tritile_core::{Patch, Point};

use crate::io::Token;

pub const ALL_CHECKS: [&str; 7] = [
    "hypotheses",
    "lemma7",
    "lemma8",
    "lemma9",
    "lemma10",
    "conclusions",
    "periods",
];

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn tok<S: Token>(x: &S) -> String {
    let mut s = String::new();
    x.write_token(&mut s);
    s
}

fn point<S: Token>(p: &Point<S>) -> String {
    format!("({},{})", tok(&p.x), tok(&p.y))
}

/// Key-value lines plus the overall verdict.
pub struct Report {
    pub text: String,
    pub passed: bool,
}

fn violations(out: &mut String, name: &str, v: &[Violation]) -> bool {
    writeln!(out, "{name}={}", verdict(v.is_empty())).unwrap();
    writeln!(out, "{name}.violations={}", v.len()).unwrap();
    for x in v.iter().take(20) {
        writeln!(out, "{name}.violation=triangle {} {:?}", x.triangle, x.kind).unwrap();
    }
    v.is_empty()
}

/// Runs the named checks on `patch`. Unknown names are rejected up front by
/// the caller.
pub fn verify<S: Token>(patch: &Patch<S>, delta: &S, checks: &[&str]) -> Result<Report, VerifyError> {
    let mut out = String::new();
    let mut passed = true;
    writeln!(out, "backend={}", S::BACKEND).unwrap();
    writeln!(out, "triangles={}", patch.len()).unwrap();
    writeln!(out, "interior={}", patch.interior_ids().count()).unwrap();
    for &check in checks {
        let ok = match check {
            "hypotheses" => {
                let h = hypotheses(patch, delta)?;
                writeln!(out, "hypotheses={}", verdict(h.passes())).unwrap();
                writeln!(out, "hypotheses.disjoint={}", verdict(h.disjoint())).unwrap();
                writeln!(out, "hypotheses.overlaps={}", h.overlaps.len()).unwrap();
                writeln!(out, "hypotheses.no_shared_side={}", verdict(h.no_shared_side())).unwrap();
                writeln!(out, "hypotheses.shared_sides={}", h.shared_sides.len()).unwrap();
                writeln!(out, "hypotheses.lower_bound={}", verdict(h.bounded_below())).unwrap();
                writeln!(out, "hypotheses.delta={}", tok(&h.delta)).unwrap();
                if let Some(m) = &h.min_side {
                    writeln!(out, "hypotheses.min_side={}", tok(m)).unwrap();
                }
                writeln!(out, "hypotheses.coverage={}", verdict(h.covers())).unwrap();
                writeln!(out, "hypotheses.region_area={}", tok(&h.region_area)).unwrap();
                writeln!(out, "hypotheses.defect={}", tok(&h.defect)).unwrap();
                h.passes()
            }
            "lemma7" => violations(&mut out, "lemma7", &check_lemma7(patch)),
            "lemma8" => violations(&mut out, "lemma8", &check_lemma8(patch)),
            "lemma9" => violations(&mut out, "lemma9", &check_lemma9(patch)),
            "lemma10" => match check_lemma10(patch) {
                Ok(r) => {
                    writeln!(out, "lemma10={}", verdict(r.is_clean())).unwrap();
                    writeln!(out, "lemma10.checked={}", r.checked).unwrap();
                    writeln!(out, "lemma10.incomplete={}", r.missing.len()).unwrap();
                    writeln!(out, "lemma10.deviations={}", r.deviations.len()).unwrap();
                    r.is_clean()
                }
                Err(e) => {
                    writeln!(out, "lemma10=fail").unwrap();
                    writeln!(out, "lemma10.error={e}").unwrap();
                    false
                }
            },
            "conclusions" => {
                let c = conclusions(patch);
                let sizes: Vec<String> = c.sizes.iter().take(10).map(tok).collect();
                writeln!(out, "conclusions={}", verdict(c.passes())).unwrap();
                writeln!(out, "conclusions.distinct_sizes={}", c.sizes.len()).unwrap();
                writeln!(out, "conclusions.sizes={}", sizes.join(",")).unwrap();
                writeln!(out, "conclusions.at_most_three={}", verdict(c.at_most_three_sizes())).unwrap();
                writeln!(out, "conclusions.sum_rule={}", verdict(c.sum_rule())).unwrap();
                writeln!(out, "conclusions.large={}", c.large_count).unwrap();
                writeln!(out, "conclusions.large_translates={}", verdict(c.large_translates())).unwrap();
                writeln!(out, "conclusions.periodic={}", verdict(c.periodic())).unwrap();
                c.passes()
            }
            "periods" => {
                let basis = detect_periods(patch);
                let ok = basis.len() == 2;
                writeln!(out, "periods={}", verdict(ok)).unwrap();
                writeln!(out, "periods.count={}", basis.len()).unwrap();
                for v in &basis {
                    writeln!(out, "periods.vector={}", point(v)).unwrap();
                }
                ok
            }
            other => unreachable!("unknown check {other}"),
        };
        passed &= ok;
    }
    writeln!(out, "result={}", verdict(passed)).unwrap();
    Ok(Report { text: out, passed })
}

/// Walk statistics as key-value lines. Return frequencies are listed at
/// decade horizons up to the run length.
pub fn walk_stats<S: Token>(stats: &WalkStats<S>) -> String {
    let mut out = String::new();
    writeln!(out, "steps={}", stats.steps).unwrap();
    writeln!(out, "trials={}", stats.trials).unwrap();
    writeln!(out, "seed={}", stats.seed).unwrap();
    writeln!(out, "msd.final={}", stats.mean_sq_displacement[stats.steps - 1]).unwrap();
    let mut h = 10;
    while h < stats.steps {
        writeln!(out, "return_freq.{h}={}", stats.return_frequency(h)).unwrap();
        h *= 10;
    }
    writeln!(
        out,
        "return_freq.{}={}",
        stats.steps,
        stats.return_frequency(stats.steps)
    )
    .unwrap();
    writeln!(out, "absorbed_or_hit={}", stats.hits).unwrap();
    if let Some(s) = &stats.expected_size_at_stop {
        writeln!(out, "expected_size_at_stop={}", tok(s)).unwrap();
    }
    out
}

/// `step,msd,return_freq` rows.
pub fn walk_csv<S>(stats: &WalkStats<S>) -> String {
    let mut out = String::from("step,msd,return_freq\n");
    let mut returned = stats.returns_by_step[0];
    for k in 1..=stats.steps {
        returned += stats.returns_by_step[k];
        writeln!(
            out,
            "{k},{},{}",
            stats.mean_sq_displacement[k - 1],
            returned as f64 / stats.trials as f64
        )
        .unwrap();
    }
    out
}
