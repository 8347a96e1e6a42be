//! Uniform bucket grid over `f64` bounding boxes.
//!
//! Buckets only narrow down candidates; every decision is re-made by the
//! backend predicates.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Grid {
    x0: f64,
    y0: f64,
    cell: f64,
    buckets: BTreeMap<(i64, i64), Vec<usize>>,
}

impl Grid {
    /// `extent` is `[xmin, xmax, ymin, ymax]` of everything that will be inserted.
    pub(crate) fn new(extent: [f64; 4], cell: f64) -> Self {
        let cell = if cell.is_finite() && cell > 0.0 { cell } else { 1.0 };
        Grid {
            x0: extent[0],
            y0: extent[2],
            cell,
            buckets: BTreeMap::new(),
        }
    }

    fn key(&self, x: f64, y: f64) -> (i64, i64) {
        (
            libm::floor((x - self.x0) / self.cell) as i64,
            libm::floor((y - self.y0) / self.cell) as i64,
        )
    }

    fn span(&self, b: &[f64; 4], pad: f64) -> ((i64, i64), (i64, i64)) {
        (self.key(b[0] - pad, b[2] - pad), self.key(b[1] + pad, b[3] + pad))
    }

    pub(crate) fn insert_box(&mut self, id: usize, b: &[f64; 4], pad: f64) {
        let ((i0, j0), (i1, j1)) = self.span(b, pad);
        for i in i0..=i1 {
            for j in j0..=j1 {
                self.buckets.entry((i, j)).or_default().push(id);
            }
        }
    }

    /// Sorted, deduplicated ids whose buckets meet the padded box.
    pub(crate) fn query_box(&self, b: &[f64; 4], pad: f64) -> Vec<usize> {
        let ((i0, j0), (i1, j1)) = self.span(b, pad);
        let mut out = Vec::new();
        for i in i0..=i1 {
            for (_, ids) in self.buckets.range((i, j0)..=(i, j1)) {
                out.extend_from_slice(ids);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub(crate) fn query_point(&self, x: f64, y: f64, pad: f64) -> Vec<usize> {
        self.query_box(&[x, x, y, y], pad)
    }
}

/// Cell size that keeps the bucket count proportional to the item count.
pub(crate) fn cell_size(extent: [f64; 4], min_feature: f64, items: usize) -> f64 {
    let w = extent[1] - extent[0];
    let h = extent[3] - extent[2];
    let area = if w > 0.0 && h > 0.0 { w * h } else { 1.0 };
    let floor = libm::sqrt(area / (4 * items + 64) as f64);
    if min_feature > floor {
        min_feature
    } else {
        floor
    }
}
