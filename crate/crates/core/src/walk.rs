//! The graph on large triangles in which each one points at the three large
//! triangles holding its corners inside their edges, and the random walk on
//! it along which side lengths form a martingale.
//!
//! Randomness comes from ChaCha8 seeded per trial with `seed ^ trial` through
//! `SeedableRng::seed_from_u64`, so every trial is reproducible on its own.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point;
use crate::model::{Patch, TriId};
use crate::scalar::{Scalar, Sign, Tolerance};
use crate::structure::{average_deviation, classify, lemma10_neighbors, StructureError, TriangleClass};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WalkError {
    #[error("step vectors do not sum to zero")]
    NonZeroSum,
    #[error("step vectors are parallel")]
    DegenerateSteps,
    #[error("steps and trials must be at least 1")]
    EmptyRun,
    #[error("need 0 < a < a_prime")]
    BadSizes,
    #[error("node {0} is out of range")]
    UnknownNode(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Neighbor {
    Node(usize),
    /// The neighbor lies outside the patch or is not an interior triangle.
    Missing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraphNode<S> {
    pub triangle: TriId,
    pub anchor: Point<S>,
    pub side: S,
    /// One per corner of the triangle.
    pub neighbors: [Neighbor; 3],
}

impl<S> GraphNode<S> {
    pub fn is_complete(&self) -> bool {
        self.neighbors.iter().all(|n| *n != Neighbor::Missing)
    }
}

/// Directed 3-out graph; the neighbor relation need not be symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct LargeAdjacencyGraph<S> {
    nodes: Vec<GraphNode<S>>,
}

impl<S: Scalar> LargeAdjacencyGraph<S> {
    /// A graph from explicit nodes, e.g. a synthetic size assignment.
    pub fn from_parts(nodes: Vec<GraphNode<S>>) -> Result<Self, WalkError> {
        for node in &nodes {
            for n in node.neighbors {
                if let Neighbor::Node(i) = n {
                    if i >= nodes.len() {
                        return Err(WalkError::UnknownNode(i));
                    }
                }
            }
        }
        Ok(LargeAdjacencyGraph { nodes })
    }

    pub fn nodes(&self) -> &[GraphNode<S>] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &GraphNode<S> {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Replaces the side of node `i`.
    pub fn set_side(&mut self, i: usize, side: S) {
        self.nodes[i].side = side;
    }

    /// The offsets from a node's anchor to its neighbors' anchors, per
    /// corner, when every complete node has the same ones.
    pub fn steps(&self, tol: &Tolerance) -> Option<[Point<S>; 3]> {
        let mut found: Option<[Point<S>; 3]> = None;
        for node in self.nodes.iter().filter(|n| n.is_complete()) {
            let offs = node.neighbors.map(|n| match n {
                Neighbor::Node(j) => self.nodes[j].anchor.sub(&node.anchor),
                Neighbor::Missing => unreachable!(),
            });
            match &found {
                None => found = Some(offs),
                Some(f) => {
                    if !(0..3).all(|k| f[k].approx_eq(&offs[k], tol)) {
                        return None;
                    }
                }
            }
        }
        found
    }
}

/// The graph on interior large triangles of `patch`.
pub fn extract_graph<S: Scalar>(patch: &Patch<S>) -> Result<LargeAdjacencyGraph<S>, StructureError> {
    let large: Vec<TriId> = patch
        .interior_ids()
        .filter(|&t| classify(patch, t) == TriangleClass::Large)
        .collect();
    if large.is_empty() {
        return Err(StructureError::PreconditionViolated("no interior large triangles"));
    }
    let index: BTreeMap<TriId, usize> = large.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut nodes = Vec::with_capacity(large.len());
    for &t in &large {
        let hosts = lemma10_neighbors(patch, t)?;
        let neighbors = hosts.map(|h| match h.and_then(|u| index.get(&u)) {
            Some(&i) => Neighbor::Node(i),
            None => Neighbor::Missing,
        });
        let tri = patch.triangle(t);
        nodes.push(GraphNode {
            triangle: t,
            anchor: tri.anchor().clone(),
            side: tri.side().clone(),
            neighbors,
        });
    }
    Ok(LargeAdjacencyGraph { nodes })
}

/// Largest `|side − mean(neighbor sides)|` over nodes with no missing
/// neighbor; zero when there are none.
pub fn martingale_deviation<S: Scalar>(graph: &LargeAdjacencyGraph<S>) -> S {
    let mut worst = S::zero();
    for node in graph.nodes.iter().filter(|n| n.is_complete()) {
        let side = |n: Neighbor| match n {
            Neighbor::Node(j) => &graph.nodes[j].side,
            Neighbor::Missing => unreachable!(),
        };
        let [a, b, c] = node.neighbors;
        let dev = average_deviation(&node.side, [side(a), side(b), side(c)]);
        if dev.raw_cmp(&worst).is_gt() {
            worst = dev;
        }
    }
    worst
}

/// Three plane steps summing to zero, walked on the integer lattice with
/// `t1 ↦ (1, 0)`, `t2 ↦ (0, 1)`, `t3 ↦ (−1, −1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepSet {
    vectors: [(f64, f64); 3],
}

const LATTICE_STEPS: [(i64, i64); 3] = [(1, 0), (0, 1), (-1, -1)];

impl StepSet {
    pub fn new<S: Scalar>(steps: &[Point<S>; 3], tol: &Tolerance) -> Result<StepSet, WalkError> {
        let sum = steps[0].add(&steps[1]).add(&steps[2]);
        if !sum.approx_eq(&Point::origin(), tol) {
            return Err(WalkError::NonZeroSum);
        }
        if tol.sign(&steps[0].cross(&steps[1])) == Sign::Zero {
            return Err(WalkError::DegenerateSteps);
        }
        Ok(StepSet {
            vectors: [steps[0].to_f64(), steps[1].to_f64(), steps[2].to_f64()],
        })
    }

    pub fn vectors(&self) -> &[(f64, f64); 3] {
        &self.vectors
    }

    fn position(&self, m: i64, n: i64) -> (f64, f64) {
        let [t1, t2, _] = self.vectors;
        (m as f64 * t1.0 + n as f64 * t2.0, m as f64 * t1.1 + n as f64 * t2.1)
    }
}

/// Sizes on lattice positions: `default` everywhere except `targets`. A
/// walk stops the first time it reaches a target.
#[derive(Clone, Debug, PartialEq)]
pub struct SizeField<S> {
    pub default: S,
    pub targets: BTreeMap<(i64, i64), S>,
}

impl<S: Scalar> SizeField<S> {
    pub fn constant(size: S) -> Self {
        SizeField {
            default: size,
            targets: BTreeMap::new(),
        }
    }

    fn at(&self, pos: (i64, i64)) -> &S {
        self.targets.get(&pos).unwrap_or(&self.default)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WalkStats<S> {
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
    /// `returns_by_step[k]`: trials whose first return to the start is at step `k`.
    pub returns_by_step: Vec<u64>,
    /// Mean squared displacement after `k + 1` steps.
    pub mean_sq_displacement: Vec<f64>,
    /// Trials that reached a target (and stopped there).
    pub hits: u64,
    /// Mean size at the stopping time, when a size field was attached.
    pub expected_size_at_stop: Option<S>,
}

impl<S> WalkStats<S> {
    /// Fraction of trials that returned to the start within `horizon` steps.
    pub fn return_frequency(&self, horizon: usize) -> f64 {
        let h = horizon.min(self.steps);
        let n: u64 = self.returns_by_step[..=h].iter().sum();
        n as f64 / self.trials as f64
    }
}

fn rng_for(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial as u64)
}

fn mean<S: Scalar>(sum: S, count: usize) -> S {
    sum.checked_div(&S::from_i64(count as i64)).expect("count is positive")
}

/// Walks with i.i.d. uniform steps from the step set, stopped at the first
/// target of `sizes` (if any) or after `steps` steps. Displacement and
/// returns are recorded on the stopped path.
pub fn simulate<S: Scalar>(
    set: &StepSet,
    steps: usize,
    trials: usize,
    seed: u64,
    sizes: Option<&SizeField<S>>,
) -> Result<WalkStats<S>, WalkError> {
    if steps == 0 || trials == 0 {
        return Err(WalkError::EmptyRun);
    }
    let mut returns = vec![0u64; steps + 1];
    let mut sq = vec![0f64; steps];
    let mut hits = 0u64;
    let mut size_sum = S::zero();
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let (mut m, mut n) = (0i64, 0i64);
        let mut returned = false;
        let mut stopped = false;
        for k in 0..steps {
            if !stopped {
                let (dm, dn) = LATTICE_STEPS[rng.gen_range(0..3usize)];
                m += dm;
                n += dn;
                if !returned && m == 0 && n == 0 {
                    returned = true;
                    returns[k + 1] += 1;
                }
                if sizes.is_some_and(|f| f.targets.contains_key(&(m, n))) {
                    stopped = true;
                    hits += 1;
                }
            }
            let (x, y) = set.position(m, n);
            sq[k] += x * x + y * y;
        }
        if let Some(f) = sizes {
            size_sum = size_sum + f.at((m, n)).clone();
        }
    }
    let t = trials as f64;
    Ok(WalkStats {
        steps,
        trials,
        seed,
        returns_by_step: returns,
        mean_sq_displacement: sq.into_iter().map(|s| s / t).collect(),
        hits,
        expected_size_at_stop: sizes.map(|_| mean(size_sum, trials)),
    })
}

/// The walk on the extracted graph from node `start`, absorbed at the first
/// missing neighbor. The size at the stopping node is averaged.
pub fn simulate_graph<S: Scalar>(
    graph: &LargeAdjacencyGraph<S>,
    start: usize,
    steps: usize,
    trials: usize,
    seed: u64,
) -> Result<WalkStats<S>, WalkError> {
    if steps == 0 || trials == 0 {
        return Err(WalkError::EmptyRun);
    }
    if start >= graph.len() {
        return Err(WalkError::UnknownNode(start));
    }
    let origin = graph.nodes[start].anchor.to_f64();
    let mut returns = vec![0u64; steps + 1];
    let mut sq = vec![0f64; steps];
    let mut hits = 0u64;
    let mut size_sum = S::zero();
    for trial in 0..trials {
        let mut rng = rng_for(seed, trial);
        let mut at = start;
        let mut returned = false;
        let mut absorbed = false;
        for k in 0..steps {
            if !absorbed {
                match graph.nodes[at].neighbors[rng.gen_range(0..3usize)] {
                    Neighbor::Node(j) => at = j,
                    Neighbor::Missing => {
                        absorbed = true;
                        hits += 1;
                    }
                }
                if !absorbed && !returned && at == start {
                    returned = true;
                    returns[k + 1] += 1;
                }
            }
            let (x, y) = graph.nodes[at].anchor.to_f64();
            let (dx, dy) = (x - origin.0, y - origin.1);
            sq[k] += dx * dx + dy * dy;
        }
        size_sum = size_sum + graph.nodes[at].side.clone();
    }
    let t = trials as f64;
    Ok(WalkStats {
        steps,
        trials,
        seed,
        returns_by_step: returns,
        mean_sq_displacement: sq.into_iter().map(|s| s / t).collect(),
        hits,
        expected_size_at_stop: Some(mean(size_sum, trials)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Equal sizes: nothing to contradict.
    Consistent,
    /// The target was reached often enough that the stopped mean exceeds
    /// the value a martingale would keep.
    Inconsistent,
    /// The target was never reached within the horizon.
    Inconclusive,
    /// Reached, but not yet with frequency `a / a_prime`.
    Undetermined,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContradictionReport<S> {
    pub a: S,
    pub a_prime: S,
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub hit_frequency: f64,
    /// `a / a_prime`.
    pub threshold: f64,
    /// Empirical mean size at the stopping time.
    pub stopped_mean: S,
    /// What a martingale started at size `a` would give: `a`.
    pub predicted: S,
    pub verdict: Verdict,
}

/// Sizes `a` everywhere except `a_prime` one step away along `t1`; a walk
/// from the origin stopped on reaching it. A martingale would keep the mean
/// at `a`, while reaching the target with probability at least `a / a_prime`
/// pushes the stopped mean above it.
pub fn contradiction_demo<S: Scalar>(
    set: &StepSet,
    a: &S,
    a_prime: &S,
    horizon: usize,
    trials: usize,
    seed: u64,
) -> Result<ContradictionReport<S>, WalkError> {
    if a.raw_sign() != Sign::Positive || a.raw_cmp(a_prime).is_gt() {
        return Err(WalkError::BadSizes);
    }
    let threshold = a.to_f64() / a_prime.to_f64();
    if a == a_prime {
        return Ok(ContradictionReport {
            a: a.clone(),
            a_prime: a_prime.clone(),
            horizon,
            trials,
            seed,
            hit_frequency: 0.0,
            threshold,
            stopped_mean: a.clone(),
            predicted: a.clone(),
            verdict: Verdict::Consistent,
        });
    }
    let mut field = SizeField::constant(a.clone());
    field.targets.insert((1, 0), a_prime.clone());
    let stats = simulate(set, horizon, trials, seed, Some(&field))?;
    let freq = stats.hits as f64 / trials as f64;
    let verdict = if stats.hits == 0 {
        Verdict::Inconclusive
    } else if freq >= threshold {
        Verdict::Inconsistent
    } else {
        Verdict::Undetermined
    };
    Ok(ContradictionReport {
        a: a.clone(),
        a_prime: a_prime.clone(),
        horizon,
        trials,
        seed,
        hit_frequency: freq,
        threshold,
        stopped_mean: stats.expected_size_at_stop.expect("size field attached"),
        predicted: a.clone(),
        verdict,
    })
}
