//! Pairwise and hierarchical F-scores of a model hierarchy against a
//! ground-truth class hierarchy.
//!
//! Three measures are provided:
//!
//! * classic F-score: ordered pairs of distinct points are related when they
//!   share a node;
//! * partial-order F-score: `x_i` relates to `x_j` when the node of `x_i` lies
//!   in the subtree of the node of `x_j` (or the reverse, for [`Direction::Sup`]);
//! * hierarchical F-score: for every class, the best-matching cluster by
//!   subtree point overlap, weighted by class subtree size.
//!
//! Pair tallies come in two flavours: [`pair_counts_naive`] walks every
//! ordered pair and serves as the reference, [`pair_counts_fast`] aggregates
//! over the occupied cells of the class/cluster contingency table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{AncestorIndex, Hierarchy, Instance, NodeId};

/// Tallies over ordered pairs of distinct points, with the ground-truth
/// relation as condition and the model relation as test outcome.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    /// related in both
    pub true_pos: u64,
    /// related in the model only
    pub false_pos: u64,
    /// related in neither
    pub true_neg: u64,
    /// related in the ground truth only
    pub false_neg: u64,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    /// Both points sit in the same node.
    Equality,
    /// Node of the first point is a descendant of, or equal to, the node of the second.
    PartialOrderSub,
    /// Node of the first point is an ancestor of, or equal to, the node of the second.
    PartialOrderSup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Sub,
    Sup,
}

impl From<Direction> for RelationKind {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Sub => RelationKind::PartialOrderSub,
            Direction::Sup => RelationKind::PartialOrderSup,
        }
    }
}

/// Whether the ordered pair `(i, j)` of distinct points is related in `h`.
pub fn relation_holds(h: &Hierarchy, kind: RelationKind, i: usize, j: usize) -> Result<bool> {
    if i == j {
        return Err(Error::SamePoint(i));
    }
    let a = h.node_of(i).ok_or(Error::UnknownPoint(i))?;
    let b = h.node_of(j).ok_or(Error::UnknownPoint(j))?;
    match kind {
        RelationKind::Equality => Ok(a == b),
        RelationKind::PartialOrderSub => h.is_desc_or_equal(a, b),
        RelationKind::PartialOrderSup => h.is_desc_or_equal(b, a),
    }
}

fn classify(counts: &mut PairCounts, truth: bool, model: bool) {
    match (truth, model) {
        (true, true) => counts.true_pos += 1,
        (false, true) => counts.false_pos += 1,
        (false, false) => counts.true_neg += 1,
        (true, false) => counts.false_neg += 1,
    }
}

/// Reference tally: evaluates both relations on each of the `N(N-1)` ordered
/// pairs. Quadratic in the number of points.
pub fn pair_counts_naive(inst: &Instance, kind: RelationKind) -> PairCounts {
    let n = inst.n_points();
    let mut counts = PairCounts::default();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let truth = relation_holds(inst.ground_truth(), kind, i, j).expect("valid instance");
            let model = relation_holds(inst.model(), kind, i, j).expect("valid instance");
            classify(&mut counts, truth, model);
        }
    }
    counts
}

struct Cell {
    class: NodeId,
    cluster: NodeId,
    count: u64,
}

fn contingency(inst: &Instance) -> Vec<Cell> {
    let mut cells: BTreeMap<(NodeId, NodeId), u64> = BTreeMap::new();
    let gt = inst.ground_truth().assignment();
    let model = inst.model().assignment();
    for (c, e) in gt.iter().zip(model) {
        *cells.entry((*c, *e)).or_default() += 1;
    }
    cells
        .into_iter()
        .map(|((class, cluster), count)| Cell {
            class,
            cluster,
            count,
        })
        .collect()
}

fn occupied(sizes: impl Iterator<Item = usize>) -> Vec<(NodeId, u64)> {
    sizes
        .enumerate()
        .filter(|&(_, s)| s > 0)
        .map(|(i, s)| (NodeId(i), s as u64))
        .collect()
}

fn direct_sizes(h: &Hierarchy) -> impl Iterator<Item = usize> + '_ {
    h.node_ids().map(move |n| h.points(n).len())
}

/// Sum of `m1 * m2` over ordered pairs of occupied nodes related under the
/// ancestor relation, diagonal included.
fn related_mass(nodes: &[(NodeId, u64)], idx: &AncestorIndex) -> u64 {
    let mut total = 0;
    for &(a, ma) in nodes {
        for &(b, mb) in nodes {
            if idx.is_desc_or_equal(a, b) {
                total += ma * mb;
            }
        }
    }
    total
}

/// Same tallies as [`pair_counts_naive`], computed from the contingency table
/// of (class node, cluster node) cells.
///
/// Both relations are reflexive, so every point paired with itself lands in
/// the joint and marginal masses; those `N` self-pairs are subtracted.
pub fn pair_counts_fast(inst: &Instance, kind: RelationKind) -> PairCounts {
    let n = inst.n_points() as u64;
    let all_pairs = n * n.saturating_sub(1);
    let gt = inst.ground_truth();
    let model = inst.model();
    let cells = contingency(inst);

    let (joint, truth_mass, model_mass) = match kind {
        RelationKind::Equality => {
            let sq = |it: Vec<(NodeId, u64)>| it.iter().map(|&(_, m)| m * m).sum::<u64>();
            (
                cells.iter().map(|c| c.count * c.count).sum::<u64>(),
                sq(occupied(direct_sizes(gt))),
                sq(occupied(direct_sizes(model))),
            )
        }
        RelationKind::PartialOrderSub | RelationKind::PartialOrderSup => {
            // Sup counts the transposed pairs of Sub; over all ordered pairs
            // the tallies coincide, but each direction is evaluated as defined.
            let gi = gt.ancestor_index();
            let mi = model.ancestor_index();
            let sub = kind == RelationKind::PartialOrderSub;
            let rel = |idx: &AncestorIndex, a: NodeId, b: NodeId| {
                if sub {
                    idx.is_desc_or_equal(a, b)
                } else {
                    idx.is_desc_or_equal(b, a)
                }
            };
            let mut joint = 0;
            for x in &cells {
                for y in &cells {
                    if rel(&gi, x.class, y.class) && rel(&mi, x.cluster, y.cluster) {
                        joint += x.count * y.count;
                    }
                }
            }
            // The marginal mass is symmetric under transposition.
            (
                joint,
                related_mass(&occupied(direct_sizes(gt)), &gi),
                related_mass(&occupied(direct_sizes(model)), &mi),
            )
        }
    };

    let true_pos = joint - n;
    let false_neg = truth_mass - joint;
    let false_pos = model_mass - joint;
    PairCounts {
        true_pos,
        false_pos,
        false_neg,
        true_neg: all_pairs - true_pos - false_pos - false_neg,
    }
}

/// `2tp / (2tp + fn + fp)`, or 1.0 when no pair is related on either side.
pub fn f1_from_counts(counts: &PairCounts) -> f64 {
    let num = 2 * counts.true_pos;
    let den = num + counts.false_neg + counts.false_pos;
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

pub fn classic_fscore(inst: &Instance) -> f64 {
    f1_from_counts(&pair_counts_fast(inst, RelationKind::Equality))
}

pub fn partial_order_fscore(inst: &Instance, direction: Direction) -> f64 {
    f1_from_counts(&pair_counts_fast(inst, direction.into()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassScore {
    pub class: NodeId,
    pub f: f64,
    pub best_cluster: NodeId,
    /// Points in the class subtree.
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HierFScoreDetail {
    pub classes: Vec<ClassScore>,
    pub overall: f64,
}

/// Per-class best cluster F and their subtree-size weighted mean.
///
/// Classes whose subtree holds no point carry zero weight and are omitted.
/// Ties for the best cluster go to the smallest node id.
pub fn hierarchical_fscore(inst: &Instance) -> HierFScoreDetail {
    let gt = inst.ground_truth();
    let model = inst.model();
    let class_sizes = gt.subtree_sizes();
    let cluster_sizes = model.subtree_sizes();
    let model_post: Vec<NodeId> = model.preorder().into_iter().rev().collect();

    let mut in_class = vec![false; inst.n_points()];
    let mut overlap = vec![0usize; model.node_count()];
    let mut classes = Vec::new();

    for class in gt.node_ids() {
        let weight = class_sizes[class.index()];
        if weight == 0 {
            continue;
        }
        in_class.iter_mut().for_each(|m| *m = false);
        for p in gt.subtree_points(class).expect("own node") {
            in_class[p] = true;
        }
        overlap.iter_mut().for_each(|o| *o = 0);
        for (p, node) in model.assignment().iter().enumerate() {
            if in_class[p] {
                overlap[node.index()] += 1;
            }
        }
        for &n in &model_post {
            if let Some(parent) = model.parent(n) {
                overlap[parent.index()] += overlap[n.index()];
            }
        }

        let mut best = (f64::NEG_INFINITY, model.root());
        for cluster in model.node_ids() {
            let inter = overlap[cluster.index()];
            let f = 2.0 * inter as f64 / (cluster_sizes[cluster.index()] + weight) as f64;
            if f > best.0 {
                best = (f, cluster);
            }
        }
        classes.push(ClassScore {
            class,
            f: best.0,
            best_cluster: best.1,
            weight,
        });
    }

    let total: usize = classes.iter().map(|c| c.weight).sum();
    let overall = if total == 0 {
        // Empty universe: nothing to get wrong.
        1.0
    } else {
        classes.iter().map(|c| c.weight as f64 * c.f).sum::<f64>() / total as f64
    };
    HierFScoreDetail { classes, overall }
}

/// All three measures together with the pair tallies behind the pairwise ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub classic: f64,
    pub classic_counts: PairCounts,
    pub partial_order: f64,
    pub partial_order_sup: f64,
    pub partial_order_counts: PairCounts,
    pub hierarchical: HierFScoreDetail,
}

pub fn score_instance(inst: &Instance) -> ScoreReport {
    let classic_counts = pair_counts_fast(inst, RelationKind::Equality);
    let partial_order_counts = pair_counts_fast(inst, RelationKind::PartialOrderSub);
    ScoreReport {
        classic: f1_from_counts(&classic_counts),
        classic_counts,
        partial_order: f1_from_counts(&partial_order_counts),
        partial_order_sup: partial_order_fscore(inst, Direction::Sup),
        partial_order_counts,
        hierarchical: hierarchical_fscore(inst),
    }
}
