#![allow(dead_code)]

//! Test-only builders and reference computations. Everything here works from
//! plain parent arrays and explicit sets, independent of the library's
//! aggregated code paths.

use std::collections::BTreeSet;

use hierscore::measures::{HierFScoreDetail, PairCounts};
use hierscore::{Hierarchy, Instance, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parent table where node 0 is the root and each other node hangs below a
/// uniformly chosen earlier node.
pub fn random_parents(nodes: usize, rng: &mut impl Rng) -> Vec<Option<usize>> {
    (0..nodes)
        .map(|i| if i == 0 { None } else { Some(rng.random_range(0..i)) })
        .collect()
}

pub fn random_assignment(nodes: usize, n_points: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..n_points).map(|_| rng.random_range(0..nodes)).collect()
}

pub fn build(parents: &[Option<usize>], assignment: &[usize]) -> Hierarchy {
    let parents: Vec<Option<NodeId>> = parents.iter().map(|p| p.map(NodeId)).collect();
    let assignment: Vec<NodeId> = assignment.iter().map(|&a| NodeId(a)).collect();
    Hierarchy::from_parents(&parents, &assignment).unwrap()
}

/// Plain description of an instance kept next to the built one.
#[derive(Clone, Debug)]
pub struct RawInstance {
    pub gt_parents: Vec<Option<usize>>,
    pub gt_assign: Vec<usize>,
    pub model_parents: Vec<Option<usize>>,
    pub model_assign: Vec<usize>,
}

impl RawInstance {
    pub fn random(seed: u64, max_points: usize, max_nodes: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=max_points);
        let gn = rng.random_range(1..=max_nodes);
        let mn = rng.random_range(1..=max_nodes);
        let gt_parents = random_parents(gn, &mut rng);
        let model_parents = random_parents(mn, &mut rng);
        // Concentrate points on a few nodes now and then so large cells occur.
        let skew = rng.random_bool(0.3);
        let pick = |nodes: usize, rng: &mut ChaCha8Rng| {
            if skew {
                rng.random_range(0..nodes.min(3))
            } else {
                rng.random_range(0..nodes)
            }
        };
        let gt_assign = (0..n).map(|_| pick(gn, &mut rng)).collect();
        let model_assign = (0..n).map(|_| pick(mn, &mut rng)).collect();
        RawInstance {
            gt_parents,
            gt_assign,
            model_parents,
            model_assign,
        }
    }

    pub fn instance(&self) -> Instance {
        Instance::new(
            build(&self.gt_parents, &self.gt_assign),
            build(&self.model_parents, &self.model_assign),
        )
        .unwrap()
    }

    pub fn n_points(&self) -> usize {
        self.gt_assign.len()
    }
}

/// `{n}` plus the descendants of every child, by direct recursion.
pub fn descendants(parents: &[Option<usize>], n: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::from([n]);
    for (child, p) in parents.iter().enumerate() {
        if *p == Some(n) {
            out.extend(descendants(parents, child));
        }
    }
    out
}

pub fn all_descendants(parents: &[Option<usize>]) -> Vec<BTreeSet<usize>> {
    (0..parents.len()).map(|n| descendants(parents, n)).collect()
}

pub fn subtree_points(desc: &BTreeSet<usize>, assign: &[usize]) -> BTreeSet<usize> {
    assign
        .iter()
        .enumerate()
        .filter(|(_, a)| desc.contains(a))
        .map(|(p, _)| p)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Equal,
    Sub,
    Sup,
}

/// Ordered-pair tallies from explicit descendant-set inclusion.
pub fn oracle_pair_counts(raw: &RawInstance, rel: Rel) -> PairCounts {
    let gd = all_descendants(&raw.gt_parents);
    let md = all_descendants(&raw.model_parents);
    let related = |desc: &[BTreeSet<usize>], a: usize, b: usize| match rel {
        Rel::Equal => a == b,
        Rel::Sub => desc[a].is_subset(&desc[b]),
        Rel::Sup => desc[a].is_superset(&desc[b]),
    };
    let mut c = PairCounts::default();
    let n = raw.n_points();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let g = related(&gd, raw.gt_assign[i], raw.gt_assign[j]);
            let m = related(&md, raw.model_assign[i], raw.model_assign[j]);
            match (g, m) {
                (true, true) => c.true_pos += 1,
                (false, true) => c.false_pos += 1,
                (false, false) => c.true_neg += 1,
                (true, false) => c.false_neg += 1,
            }
        }
    }
    c
}

/// Hierarchical F from explicit point sets: per class the best
/// `2|A∩B| / (|A|+|B|)` over all clusters, weighted by `|class subtree|`.
/// Returns `(overall, per-class (class, f, best cluster with smallest id))`.
pub fn oracle_hierarchical(raw: &RawInstance) -> (f64, Vec<(usize, f64, usize)>) {
    let classes: Vec<BTreeSet<usize>> = all_descendants(&raw.gt_parents)
        .iter()
        .map(|d| subtree_points(d, &raw.gt_assign))
        .collect();
    let clusters: Vec<BTreeSet<usize>> = all_descendants(&raw.model_parents)
        .iter()
        .map(|d| subtree_points(d, &raw.model_assign))
        .collect();
    let mut rows = Vec::new();
    let (mut num, mut den) = (0.0, 0usize);
    for (c, class) in classes.iter().enumerate() {
        if class.is_empty() {
            continue;
        }
        let mut best = (-1.0, 0);
        for (e, cluster) in clusters.iter().enumerate() {
            let inter = class.intersection(cluster).count();
            let f = 2.0 * inter as f64 / (class.len() + cluster.len()) as f64;
            if f > best.0 {
                best = (f, e);
            }
        }
        rows.push((c, best.0, best.1));
        num += class.len() as f64 * best.0;
        den += class.len();
    }
    let overall = if den == 0 { 1.0 } else { num / den as f64 };
    (overall, rows)
}

pub fn detail_rows(d: &HierFScoreDetail) -> Vec<(usize, f64, usize)> {
    d.classes
        .iter()
        .map(|c| (c.class.index(), c.f, c.best_cluster.index()))
        .collect()
}

/// Leaf-only single-level instance: empty root, `k` leaves, points only in leaves.
pub fn random_flat(seed: u64, max_points: usize, max_leaves: usize) -> RawInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_points);
    let gk = rng.random_range(1..=max_leaves);
    let mk = rng.random_range(1..=max_leaves);
    let flat_parents = |k: usize| -> Vec<Option<usize>> {
        (0..=k).map(|i| if i == 0 { None } else { Some(0) }).collect()
    };
    RawInstance {
        gt_parents: flat_parents(gk),
        gt_assign: (0..n).map(|_| rng.random_range(1..=gk)).collect(),
        model_parents: flat_parents(mk),
        model_assign: (0..n).map(|_| rng.random_range(1..=mk)).collect(),
    }
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
