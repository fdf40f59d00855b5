//! Rooted trees of classes or clusters with hard point assignment.
//!
//! The same [`Hierarchy`] type describes both the ground-truth class
//! hierarchy and a model's cluster hierarchy. Points are dense ids in
//! `[0, n_points)` and may sit in any node, inner nodes included.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One node as it appears in a hierarchy file, before any validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub parent: Option<usize>,
    #[serde(default)]
    pub points: Vec<usize>,
}

/// Unvalidated node-list form of a hierarchy. Children order is the order in
/// which nodes appear in `nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyRecord {
    pub n_points: usize,
    pub nodes: Vec<NodeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoRoot,
    MultipleRoots(Vec<NodeId>),
    DuplicateNode(NodeId),
    NodeIdOutOfRange { node: NodeId, node_count: usize },
    UnknownParent { node: NodeId, parent: usize },
    /// Not reachable from the root; every node on a parent cycle ends up here.
    Unreachable(NodeId),
    PointOutOfRange { point: usize, node: NodeId },
    PointMultiplyAssigned { point: usize, nodes: Vec<NodeId> },
    PointUnassigned(usize),
}

fn join_ids(ids: &[NodeId]) -> String {
    ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRoot => write!(f, "no root (every node has a parent)"),
            Violation::MultipleRoots(ids) => write!(f, "multiple roots: nodes {}", join_ids(ids)),
            Violation::DuplicateNode(id) => write!(f, "node {id} declared more than once"),
            Violation::NodeIdOutOfRange { node, node_count } => {
                write!(f, "node id {node} is outside the dense range [0, {node_count})")
            }
            Violation::UnknownParent { node, parent } => {
                write!(f, "node {node} names unknown parent {parent}")
            }
            Violation::Unreachable(id) => write!(f, "node {id} is not reachable from the root"),
            Violation::PointOutOfRange { point, node } => {
                write!(f, "point {point} in node {node} is outside the point universe")
            }
            Violation::PointMultiplyAssigned { point, nodes } => {
                write!(f, "point {point} multiply assigned: nodes {}", join_ids(nodes))
            }
            Violation::PointUnassigned(p) => write!(f, "point {p} is not assigned to any node"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks every structural invariant of a hierarchy record and reports all
/// violations found. Never fails: violations are returned as data.
pub fn validate_hierarchy(record: &HierarchyRecord) -> ValidationReport {
    let mut violations = Vec::new();
    let node_count = record.nodes.len();

    let mut seen = vec![false; node_count];
    for node in &record.nodes {
        if node.id >= node_count {
            violations.push(Violation::NodeIdOutOfRange {
                node: NodeId(node.id),
                node_count,
            });
        } else if seen[node.id] {
            violations.push(Violation::DuplicateNode(NodeId(node.id)));
        } else {
            seen[node.id] = true;
        }
    }
    // With a broken id space the remaining checks would only produce noise.
    if !violations.is_empty() {
        return ValidationReport { violations };
    }

    let roots: Vec<NodeId> = record
        .nodes
        .iter()
        .filter(|n| n.parent.is_none())
        .map(|n| NodeId(n.id))
        .collect();
    match roots.len() {
        0 => violations.push(Violation::NoRoot),
        1 => {}
        _ => violations.push(Violation::MultipleRoots(roots.clone())),
    }

    let mut children = vec![Vec::new(); node_count];
    for node in &record.nodes {
        if let Some(parent) = node.parent {
            if parent >= node_count {
                violations.push(Violation::UnknownParent {
                    node: NodeId(node.id),
                    parent,
                });
            } else {
                children[parent].push(node.id);
            }
        }
    }

    if let Some(root) = roots.first() {
        let mut reached = vec![false; node_count];
        let mut stack = vec![root.0];
        reached[root.0] = true;
        while let Some(n) = stack.pop() {
            for &c in &children[n] {
                if !reached[c] {
                    reached[c] = true;
                    stack.push(c);
                }
            }
        }
        // Other roots are already reported; only list genuinely detached nodes.
        for node in &record.nodes {
            if !reached[node.id] && node.parent.is_some() {
                violations.push(Violation::Unreachable(NodeId(node.id)));
            }
        }
    }

    let mut owners: Vec<Vec<NodeId>> = vec![Vec::new(); record.n_points];
    for node in &record.nodes {
        for &p in &node.points {
            if p >= record.n_points {
                violations.push(Violation::PointOutOfRange {
                    point: p,
                    node: NodeId(node.id),
                });
            } else {
                owners[p].push(NodeId(node.id));
            }
        }
    }
    for (point, nodes) in owners.into_iter().enumerate() {
        match nodes.len() {
            0 => violations.push(Violation::PointUnassigned(point)),
            1 => {}
            _ => violations.push(Violation::PointMultiplyAssigned { point, nodes }),
        }
    }

    ValidationReport { violations }
}

/// A validated rooted tree with every point of the universe held by exactly
/// one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hierarchy {
    root: NodeId,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    depth: Vec<usize>,
    points: Vec<BTreeSet<usize>>,
    assignment: Vec<NodeId>,
}

impl Hierarchy {
    pub fn from_record(record: &HierarchyRecord) -> Result<Self> {
        let report = validate_hierarchy(record);
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        let node_count = record.nodes.len();
        let mut parent = vec![None; node_count];
        let mut children = vec![Vec::new(); node_count];
        let mut points = vec![BTreeSet::new(); node_count];
        let mut assignment = vec![NodeId(0); record.n_points];
        let mut root = NodeId(0);
        for node in &record.nodes {
            let id = NodeId(node.id);
            match node.parent {
                Some(p) => {
                    parent[node.id] = Some(NodeId(p));
                    children[p].push(id);
                }
                None => root = id,
            }
            for &p in &node.points {
                points[node.id].insert(p);
                assignment[p] = id;
            }
        }
        let mut h = Hierarchy {
            root,
            parent,
            children,
            depth: vec![0; node_count],
            points,
            assignment,
        };
        h.recompute_depths();
        Ok(h)
    }

    /// Builds a hierarchy from a parent table (indexed by node id, exactly one
    /// `None`) and the node of every point.
    pub fn from_parents(parents: &[Option<NodeId>], assignment: &[NodeId]) -> Result<Self> {
        let mut nodes: Vec<NodeRecord> = parents
            .iter()
            .enumerate()
            .map(|(id, p)| NodeRecord {
                id,
                parent: p.map(NodeId::index),
                points: Vec::new(),
            })
            .collect();
        for (point, node) in assignment.iter().enumerate() {
            match nodes.get_mut(node.0) {
                Some(n) => n.points.push(point),
                None => return Err(Error::UnknownNode(*node)),
            }
        }
        Self::from_record(&HierarchyRecord {
            n_points: assignment.len(),
            nodes,
        })
    }

    /// A lone root holding every point.
    pub fn single_node(n_points: usize) -> Self {
        Hierarchy {
            root: NodeId(0),
            parent: vec![None],
            children: vec![Vec::new()],
            depth: vec![0],
            points: vec![(0..n_points).collect()],
            assignment: vec![NodeId(0); n_points],
        }
    }

    /// Node list in preorder, so reloading the record keeps sibling order.
    pub fn to_record(&self) -> HierarchyRecord {
        HierarchyRecord {
            n_points: self.n_points(),
            nodes: self
                .preorder()
                .into_iter()
                .map(|n| NodeRecord {
                    id: n.0,
                    parent: self.parent[n.0].map(NodeId::index),
                    points: self.points[n.0].iter().copied().collect(),
                })
                .collect(),
        }
    }

    fn recompute_depths(&mut self) {
        let order = self.preorder();
        for n in order {
            self.depth[n.0] = match self.parent[n.0] {
                Some(p) => self.depth[p.0] + 1,
                None => 0,
            };
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn n_points(&self) -> usize {
        self.assignment.len()
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn contains(&self, n: NodeId) -> bool {
        n.0 < self.parent.len()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.parent.len()).map(NodeId)
    }

    fn check(&self, n: NodeId) -> Result<()> {
        if self.contains(n) {
            Ok(())
        } else {
            Err(Error::UnknownNode(n))
        }
    }

    // The accessors below index directly and panic on foreign ids, like slices.

    pub fn parent(&self, n: NodeId) -> Option<NodeId> {
        self.parent[n.0]
    }

    pub fn children(&self, n: NodeId) -> &[NodeId] {
        &self.children[n.0]
    }

    /// Number of edges between `n` and the root.
    pub fn depth(&self, n: NodeId) -> usize {
        self.depth[n.0]
    }

    pub fn points(&self, n: NodeId) -> &BTreeSet<usize> {
        &self.points[n.0]
    }

    /// Node holding `point`, or `None` outside the universe.
    pub fn node_of(&self, point: usize) -> Option<NodeId> {
        self.assignment.get(point).copied()
    }

    pub fn assignment(&self) -> &[NodeId] {
        &self.assignment
    }

    /// Deepest level holding at least one point (root level is 0).
    pub fn data_depth(&self) -> usize {
        self.node_ids()
            .filter(|&n| !self.points[n.0].is_empty())
            .map(|n| self.depth[n.0])
            .max()
            .unwrap_or(0)
    }

    /// Deepest level of any node, empty or not.
    pub fn max_node_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Root-first order in which every parent precedes its children, and
    /// siblings keep their stored order.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.node_count());
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            order.push(n);
            stack.extend(self.children[n.0].iter().rev());
        }
        order
    }

    /// `n` together with all of its descendants.
    pub fn descendant_nodes(&self, n: NodeId) -> Result<BTreeSet<NodeId>> {
        self.check(n)?;
        let mut out = BTreeSet::new();
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            out.insert(m);
            stack.extend(self.children[m.0].iter().copied());
        }
        Ok(out)
    }

    /// Points held by `n` or any of its descendants.
    pub fn subtree_points(&self, n: NodeId) -> Result<BTreeSet<usize>> {
        Ok(self
            .descendant_nodes(n)?
            .into_iter()
            .flat_map(|m| self.points[m.0].iter().copied())
            .collect())
    }

    /// Subtree point count for every node, indexed by node id.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.points.iter().map(BTreeSet::len).collect();
        for n in self.preorder().into_iter().rev() {
            if let Some(p) = self.parent[n.0] {
                sizes[p.0] += sizes[n.0];
            }
        }
        sizes
    }

    /// True iff `a` lies in the subtree rooted at `b` (or is `b`).
    pub fn is_desc_or_equal(&self, a: NodeId, b: NodeId) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        let target = self.depth[b.0];
        let mut cur = a;
        while self.depth[cur.0] > target {
            cur = self.parent[cur.0].expect("non-root node has a parent");
        }
        Ok(cur == b)
    }

    /// Euler-tour labels answering ancestor queries in constant time.
    pub fn ancestor_index(&self) -> AncestorIndex {
        let n = self.node_count();
        let mut enter = vec![0u32; n];
        let mut exit = vec![0u32; n];
        let mut clock = 0u32;
        // (node, next child position)
        let mut stack: Vec<(NodeId, usize)> = vec![(self.root, 0)];
        enter[self.root.0] = clock;
        clock += 1;
        while let Some(top) = stack.last_mut() {
            let (node, next) = *top;
            if let Some(&child) = self.children[node.0].get(next) {
                top.1 += 1;
                enter[child.0] = clock;
                clock += 1;
                stack.push((child, 0));
            } else {
                exit[node.0] = clock;
                clock += 1;
                stack.pop();
            }
        }
        AncestorIndex { enter, exit }
    }

    pub(crate) fn add_child(&mut self, parent: NodeId) -> NodeId {
        let id = NodeId(self.parent.len());
        self.parent.push(Some(parent));
        self.children.push(Vec::new());
        self.depth.push(self.depth[parent.0] + 1);
        self.points.push(BTreeSet::new());
        self.children[parent.0].push(id);
        id
    }

    /// Moves `point` to node `to`, returning the node it left.
    pub(crate) fn move_point(&mut self, point: usize, to: NodeId) -> NodeId {
        let from = self.assignment[point];
        if from != to {
            self.points[from.0].remove(&point);
            self.points[to.0].insert(point);
            self.assignment[point] = to;
        }
        from
    }
}

#[derive(Clone, Debug)]
pub struct AncestorIndex {
    enter: Vec<u32>,
    exit: Vec<u32>,
}

impl AncestorIndex {
    #[inline]
    pub fn is_desc_or_equal(&self, a: NodeId, b: NodeId) -> bool {
        self.enter[b.0] <= self.enter[a.0] && self.exit[a.0] <= self.exit[b.0]
    }
}

/// A ground-truth hierarchy paired with a model hierarchy over the same points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    ground_truth: Hierarchy,
    model: Hierarchy,
}

impl Instance {
    pub fn new(ground_truth: Hierarchy, model: Hierarchy) -> Result<Self> {
        if ground_truth.n_points() != model.n_points() {
            return Err(Error::UniverseMismatch {
                ground_truth: ground_truth.n_points(),
                model: model.n_points(),
            });
        }
        Ok(Instance {
            ground_truth,
            model,
        })
    }

    pub fn ground_truth(&self) -> &Hierarchy {
        &self.ground_truth
    }

    pub fn model(&self) -> &Hierarchy {
        &self.model
    }

    pub(crate) fn model_mut(&mut self) -> &mut Hierarchy {
        &mut self.model
    }

    pub fn with_model(&self, model: Hierarchy) -> Result<Self> {
        Instance::new(self.ground_truth.clone(), model)
    }

    pub fn n_points(&self) -> usize {
        self.ground_truth.n_points()
    }

    pub fn into_parts(self) -> (Hierarchy, Hierarchy) {
        (self.ground_truth, self.model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: usize, parent: Option<usize>, points: &[usize]) -> NodeRecord {
        NodeRecord {
            id,
            parent,
            points: points.to_vec(),
        }
    }

    // A({1}) -> B({2}) -> C({0})
    fn chain() -> Hierarchy {
        Hierarchy::from_record(&HierarchyRecord {
            n_points: 3,
            nodes: vec![rec(0, None, &[1]), rec(1, Some(0), &[2]), rec(2, Some(1), &[0])],
        })
        .unwrap()
    }

    #[test]
    fn single_root_is_valid() {
        let r = HierarchyRecord {
            n_points: 4,
            nodes: vec![rec(0, None, &[0, 1, 2, 3])],
        };
        assert!(validate_hierarchy(&r).is_ok());
        assert_eq!(Hierarchy::from_record(&r).unwrap(), Hierarchy::single_node(4));
    }

    #[test]
    fn two_roots_reported() {
        let r = HierarchyRecord {
            n_points: 2,
            nodes: vec![rec(0, None, &[0]), rec(1, None, &[1])],
        };
        let report = validate_hierarchy(&r);
        assert_eq!(
            report.violations,
            vec![Violation::MultipleRoots(vec![NodeId(0), NodeId(1)])]
        );
        assert!(report.to_string().contains("multiple roots"));
    }

    #[test]
    fn multiply_assigned_point_reported() {
        let r = HierarchyRecord {
            n_points: 4,
            nodes: vec![rec(0, None, &[0, 1, 3]), rec(1, Some(0), &[2, 3])],
        };
        let report = validate_hierarchy(&r);
        assert_eq!(
            report.violations,
            vec![Violation::PointMultiplyAssigned {
                point: 3,
                nodes: vec![NodeId(0), NodeId(1)]
            }]
        );
        assert!(report.to_string().contains("point 3 multiply assigned"));
    }

    #[test]
    fn cycles_and_gaps_reported() {
        let r = HierarchyRecord {
            n_points: 3,
            nodes: vec![
                rec(0, None, &[0]),
                rec(1, Some(2), &[1]),
                rec(2, Some(1), &[]),
                rec(3, Some(9), &[]),
            ],
        };
        let v = validate_hierarchy(&r).violations;
        assert!(v.contains(&Violation::Unreachable(NodeId(1))));
        assert!(v.contains(&Violation::Unreachable(NodeId(2))));
        assert!(v.contains(&Violation::UnknownParent {
            node: NodeId(3),
            parent: 9
        }));
        assert!(v.contains(&Violation::PointUnassigned(2)));

        let no_root = HierarchyRecord {
            n_points: 0,
            nodes: vec![rec(0, Some(1), &[]), rec(1, Some(0), &[])],
        };
        assert!(validate_hierarchy(&no_root).violations.contains(&Violation::NoRoot));

        let gap = HierarchyRecord {
            n_points: 0,
            nodes: vec![rec(0, None, &[]), rec(5, Some(0), &[])],
        };
        assert!(matches!(
            validate_hierarchy(&gap).violations[0],
            Violation::NodeIdOutOfRange { .. }
        ));
        assert!(Hierarchy::from_record(&gap).is_err());
    }

    #[test]
    fn descendant_sets() {
        let h = chain();
        let (a, b, c) = (NodeId(0), NodeId(1), NodeId(2));
        assert_eq!(h.descendant_nodes(c).unwrap(), BTreeSet::from([c]));
        assert_eq!(h.descendant_nodes(a).unwrap(), BTreeSet::from([a, b, c]));
        assert_eq!(h.descendant_nodes(b).unwrap(), BTreeSet::from([b, c]));
        assert!(matches!(h.descendant_nodes(NodeId(7)), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn subtree_point_sets() {
        let h = Hierarchy::from_record(&HierarchyRecord {
            n_points: 8,
            nodes: vec![
                rec(0, None, &[0, 1, 3, 4, 6]),
                rec(1, Some(0), &[2]),
                rec(2, Some(0), &[5, 7]),
            ],
        })
        .unwrap();
        assert_eq!(h.subtree_points(NodeId(2)).unwrap(), BTreeSet::from([5, 7]));
        assert_eq!(h.subtree_points(NodeId(0)).unwrap(), (0..8).collect());

        // A({1}) -> B({2})
        let ab = Hierarchy::from_record(&HierarchyRecord {
            n_points: 3,
            nodes: vec![rec(0, None, &[0, 1]), rec(1, Some(0), &[2])],
        })
        .unwrap();
        assert_eq!(ab.subtree_points(NodeId(1)).unwrap(), BTreeSet::from([2]));
        assert_eq!(ab.subtree_sizes(), vec![3, 1]);
        assert!(ab.subtree_points(NodeId(3)).is_err());
    }

    #[test]
    fn desc_or_equal_cases() {
        let h = chain();
        let (a, b) = (NodeId(0), NodeId(1));
        assert!(h.is_desc_or_equal(a, a).unwrap());
        assert!(h.is_desc_or_equal(b, a).unwrap());
        assert!(!h.is_desc_or_equal(a, b).unwrap());

        let siblings = Hierarchy::from_parents(
            &[None, Some(NodeId(0)), Some(NodeId(0))],
            &[NodeId(1), NodeId(2)],
        )
        .unwrap();
        let (b, c) = (NodeId(1), NodeId(2));
        assert!(!siblings.is_desc_or_equal(b, c).unwrap());
        assert!(!siblings.is_desc_or_equal(c, b).unwrap());
        let idx = siblings.ancestor_index();
        assert!(!idx.is_desc_or_equal(b, c));
        assert!(idx.is_desc_or_equal(c, NodeId(0)));
        assert!(siblings.is_desc_or_equal(b, NodeId(9)).is_err());
    }

    #[test]
    fn mutation_keeps_bookkeeping() {
        let mut h = Hierarchy::single_node(3);
        let c = h.add_child(h.root());
        let d = h.add_child(c);
        assert_eq!(h.depth(d), 2);
        assert_eq!(h.move_point(1, d), NodeId(0));
        assert_eq!(h.node_of(1), Some(d));
        assert!(validate_hierarchy(&h.to_record()).is_ok());
        assert_eq!(Hierarchy::from_record(&h.to_record()).unwrap(), h);
        assert_eq!(h.data_depth(), 2);
        h.move_point(1, c);
        assert_eq!(h.data_depth(), 1);
        assert_eq!(h.max_node_depth(), 2);
    }
}
