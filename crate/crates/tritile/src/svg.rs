//! SVG rendering of patches. Output depends only on the patch and the style.

use std::fmt::Write as _;

use tritile_core::structure::{classify, TriangleClass};
use tritile_core::{Patch, Scalar};

const WIDTH: f64 = 800.0;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Style {
    /// Dots on triangle corners.
    pub vertex_markers: bool,
    /// Rings on vertices lying inside another triangle's edge.
    pub subdivision_markers: bool,
    /// Triangle index at each centroid.
    pub ids: bool,
}

impl Style {
    pub fn labelled() -> Self {
        Style {
            vertex_markers: true,
            subdivision_markers: true,
            ids: true,
        }
    }
}

/// Fill class of a triangle. Small triangles are split by size: the
/// smallest small size is `small-b`, any other `small-c`.
fn fill_class<S: Scalar>(patch: &Patch<S>, t: usize, small_b: Option<&S>) -> (&'static str, &'static str) {
    match classify(patch, t) {
        TriangleClass::Large => ("large", "#e07a5f"),
        TriangleClass::Small => {
            if small_b.is_some_and(|b| patch.tol().eq(b, patch.triangle(t).side())) {
                ("small-b", "#81b29a")
            } else {
                ("small-c", "#3d85c6")
            }
        }
        TriangleClass::Improper => ("improper", "#c9a227"),
        TriangleClass::Other => ("other", "#9c6ade"),
        TriangleClass::Indeterminate => ("indeterminate", "#d9d9d9"),
    }
}

pub fn render_svg<S: Scalar>(patch: &Patch<S>, style: &Style) -> String {
    let w = patch.window().rect().to_f64();
    let (xmin, xmax, ymin, ymax) = (w[0], w[1], w[2], w[3]);
    let scale = WIDTH / (xmax - xmin);
    let height = (ymax - ymin) * scale;
    let px = |x: f64| (x - xmin) * scale;
    let py = |y: f64| (ymax - y) * scale;

    let small_b = patch
        .interior_ids()
        .filter(|&t| classify(patch, t) == TriangleClass::Small)
        .map(|t| patch.triangle(t).side())
        .min_by(|a, b| a.raw_cmp(b));

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{height:.3}" viewBox="0 0 {WIDTH:.0} {height:.3}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<defs><clipPath id="window"><rect x="0" y="0" width="{WIDTH:.0}" height="{height:.3}"/></clipPath></defs>"#
    )
    .unwrap();
    writeln!(
        out,
        r##"<rect x="0" y="0" width="{WIDTH:.0}" height="{height:.3}" fill="#ffffff"/>"##
    )
    .unwrap();
    writeln!(
        out,
        r##"<g clip-path="url(#window)" stroke="#222222" stroke-width="0.5" stroke-linejoin="round">"##
    )
    .unwrap();
    for t in 0..patch.len() {
        let (class, fill) = fill_class(patch, t, small_b);
        let pts: Vec<String> = patch
            .triangle(t)
            .vertices()
            .iter()
            .map(|p| {
                let (x, y) = p.to_f64();
                format!("{:.3},{:.3}", px(x), py(y))
            })
            .collect();
        writeln!(
            out,
            r#"<polygon class="{class}" fill="{fill}" points="{}"/>"#,
            pts.join(" ")
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();

    if style.vertex_markers || style.subdivision_markers {
        writeln!(out, r#"<g clip-path="url(#window)">"#).unwrap();
        for (v, p) in patch.vertices().iter().enumerate() {
            let (x, y) = p.to_f64();
            if style.subdivision_markers && !patch.vertex_hosts(v).is_empty() {
                writeln!(
                    out,
                    r##"<circle class="subdivision" cx="{:.3}" cy="{:.3}" r="3" fill="none" stroke="#b00020" stroke-width="1.2"/>"##,
                    px(x),
                    py(y)
                )
                .unwrap();
            } else if style.vertex_markers {
                writeln!(
                    out,
                    r##"<circle class="vertex" cx="{:.3}" cy="{:.3}" r="1.5" fill="#222222"/>"##,
                    px(x),
                    py(y)
                )
                .unwrap();
            }
        }
        writeln!(out, "</g>").unwrap();
    }

    if style.ids {
        writeln!(out, r#"<g font-family="monospace" font-size="8" text-anchor="middle">"#).unwrap();
        for t in 0..patch.len() {
            let (sx, sy) = patch
                .triangle(t)
                .vertices()
                .iter()
                .map(|p| p.to_f64())
                .fold((0.0, 0.0), |acc, (x, y)| (acc.0 + x, acc.1 + y));
            let (cx, cy) = (px(sx / 3.0), py(sy / 3.0));
            if (0.0..=WIDTH).contains(&cx) && (0.0..=height).contains(&cy) {
                writeln!(out, r#"<text x="{cx:.3}" y="{cy:.3}">{t}</text>"#).unwrap();
            }
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use tritile_core::{QSqrt3, Tolerance, Window};

    #[test]
    fn empty_patch_is_a_blank_canvas() {
        let p = Patch::<QSqrt3>::new(Vec::new(), Window::from_i64(0, 4, 0, 2).unwrap(), Tolerance::DEFAULT).unwrap();
        let svg = render_svg(&p, &Style::labelled());
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"height="400.000""#));
        assert!(!svg.contains("<polygon"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
