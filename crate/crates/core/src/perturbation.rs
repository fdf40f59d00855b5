//! Model-side degradations: random re-insertion, collapse into the root and
//! flattening to a single level. Ground truth is never touched.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::generator::{beta_one_b, sample_node, GeneratedInstance, StickState, TssbParams};
use crate::hierarchy::{Hierarchy, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerturbationKind {
    Reinsert,
    Collapse,
    Flatten,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovedPoint {
    pub point: usize,
    pub from: NodeId,
    pub to: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationRecord {
    pub kind: PerturbationKind,
    /// One entry per re-insertion event, including events that redrew the
    /// point's current node.
    pub moved_points: Vec<MovedPoint>,
    pub errors_applied: usize,
}

impl PerturbationRecord {
    fn new(kind: PerturbationKind) -> Self {
        PerturbationRecord {
            kind,
            moved_points: Vec::new(),
            errors_applied: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReinsertOptions {
    /// Allow a re-insertion to land in a node that did not exist yet. When
    /// off, descents reaching an uninstantiated child are rejected and redrawn.
    pub allow_new_nodes: bool,
}

impl Default for ReinsertOptions {
    fn default() -> Self {
        ReinsertOptions {
            allow_new_nodes: true,
        }
    }
}

fn sample_existing(sticks: &StickState, params: &TssbParams, rng: &mut impl Rng) -> NodeId {
    'redraw: loop {
        let mut cur = sticks.root();
        loop {
            let node = sticks.node(cur);
            if node.depth + 1 >= params.max_depth {
                return cur;
            }
            let u: f64 = rng.random();
            if u < node.stop {
                return cur;
            }
            let mut i = 0;
            cur = loop {
                if i == node.children.len() {
                    continue 'redraw;
                }
                let v: f64 = rng.random();
                if v < node.branch[i] {
                    break node.children[i];
                }
                i += 1;
            };
        }
    }
}

/// Applies `k` re-insertion events to `model`: each event picks a point
/// uniformly and redraws its node from the stick-breaking process of `sticks`.
pub fn reinsert_model(
    model: &mut Hierarchy,
    sticks: &mut StickState,
    params: &TssbParams,
    k: usize,
    opts: &ReinsertOptions,
    rng: &mut impl Rng,
) -> PerturbationRecord {
    let mut record = PerturbationRecord::new(PerturbationKind::Reinsert);
    let n = model.n_points();
    if n == 0 {
        return record;
    }
    for _ in 0..k {
        let point = rng.random_range(0..n);
        let to = if opts.allow_new_nodes {
            let to = sample_node(sticks, params, rng);
            sticks.extend_hierarchy(model);
            to
        } else {
            sample_existing(sticks, params, rng)
        };
        let from = model.move_point(point, to);
        record.moved_points.push(MovedPoint { point, from, to });
        record.errors_applied += 1;
    }
    record
}

/// In-place variant of [`reinsert_random`].
pub fn apply_reinsertions(
    gi: &mut GeneratedInstance,
    k: usize,
    opts: &ReinsertOptions,
    rng: &mut impl Rng,
) -> PerturbationRecord {
    let params = gi.params;
    reinsert_model(gi.instance.model_mut(), &mut gi.sticks, &params, k, opts, rng)
}

pub fn reinsert_random(
    gi: &GeneratedInstance,
    k: usize,
    rng: &mut impl Rng,
) -> (GeneratedInstance, PerturbationRecord) {
    let mut out = gi.clone();
    let record = apply_reinsertions(&mut out, k, &ReinsertOptions::default(), rng);
    (out, record)
}

/// Every point moved into the root; nodes and edges are kept.
pub fn collapse_to_root(model: &Hierarchy) -> Hierarchy {
    let mut out = model.clone();
    let root = out.root();
    for p in 0..out.n_points() {
        out.move_point(p, root);
    }
    out
}

/// Single-level copy of `model` together with, for every node of the copy,
/// the node of `model` it came from (the fresh root maps to the old root).
pub fn flatten_with_origin(model: &Hierarchy) -> (Hierarchy, Vec<NodeId>) {
    let bearing: Vec<NodeId> = model
        .preorder()
        .into_iter()
        .filter(|&n| !model.points(n).is_empty())
        .collect();
    let mut parents = vec![None];
    parents.extend(bearing.iter().map(|_| Some(NodeId(0))));
    let mut origin = vec![model.root()];
    origin.extend(bearing.iter().copied());

    let mut assignment = vec![NodeId(0); model.n_points()];
    for (leaf, &n) in bearing.iter().enumerate() {
        for &p in model.points(n) {
            assignment[p] = NodeId(leaf + 1);
        }
    }
    let flat = Hierarchy::from_parents(&parents, &assignment).expect("flattening keeps the partition");
    (flat, origin)
}

/// Empty root whose children are the formerly data-bearing nodes, each a leaf
/// holding its own points. Empty nodes are dropped.
pub fn flatten_one_level(model: &Hierarchy) -> Hierarchy {
    flatten_with_origin(model).0
}

/// Branch sticks over the children of a flat hierarchy's root. Draws never
/// stop at the root, so the hierarchy stays single-level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatSticks {
    branch: Vec<f64>,
}

impl FlatSticks {
    pub fn new(flat: &Hierarchy, params: &TssbParams, rng: &mut impl Rng) -> Self {
        let branch = flat
            .children(flat.root())
            .iter()
            .map(|_| beta_one_b(params.gamma, rng))
            .collect();
        FlatSticks { branch }
    }

    pub fn len(&self) -> usize {
        self.branch.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branch.is_empty()
    }
}

/// Re-insertion restricted to the level below the root of a flat hierarchy.
/// New nodes, when allowed, are appended as further leaves of the root.
pub fn reinsert_flat(
    flat: &mut Hierarchy,
    sticks: &mut FlatSticks,
    params: &TssbParams,
    k: usize,
    opts: &ReinsertOptions,
    rng: &mut impl Rng,
) -> PerturbationRecord {
    let mut record = PerturbationRecord::new(PerturbationKind::Flatten);
    let n = flat.n_points();
    let root = flat.root();
    if n == 0 || (sticks.is_empty() && !opts.allow_new_nodes) {
        return record;
    }
    for _ in 0..k {
        let point = rng.random_range(0..n);
        let mut i = 0;
        let to = loop {
            if i == sticks.branch.len() {
                if opts.allow_new_nodes {
                    flat.add_child(root);
                    sticks.branch.push(beta_one_b(params.gamma, rng));
                } else {
                    i = 0;
                    continue;
                }
            }
            let v: f64 = rng.random();
            if v < sticks.branch[i] {
                break flat.children(root)[i];
            }
            i += 1;
        };
        let from = flat.move_point(point, to);
        record.moved_points.push(MovedPoint { point, from, to });
        record.errors_applied += 1;
    }
    record
}
