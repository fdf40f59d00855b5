//! Tree-structured stick-breaking generator for ground-truth hierarchies.
//!
//! Each instantiated node carries a stop stick `ν ~ Beta(1, α0·λ^depth)` and
//! each of its children a branch stick `ψ ~ Beta(1, γ)`. A point descends
//! from the root, stopping at a node with probability `ν`, otherwise moving to
//! child `i` with probability `ψ_i · Π_{j<i} (1 - ψ_j)`. Sticks are drawn the
//! first time they are needed and then kept, so later draws (re-insertions)
//! follow the same process over the same tree.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{Hierarchy, Instance, NodeId};

pub const DEFAULT_MAX_DEPTH: usize = 50;
pub const DEFAULT_N_POINTS: usize = 1000;

/// The random stream used everywhere in the crate.
pub type StreamRng = ChaCha8Rng;

/// Deterministic stream `stream` of the generator seeded with `seed`.
///
/// Experiments give every (preset, repetition) pair its own stream, see
/// [`crate::experiment::stream_id`].
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TssbParams {
    pub alpha0: f64,
    pub lambda: f64,
    pub gamma: f64,
    /// Number of levels a tree may have; a root-only tree has one.
    pub max_depth: usize,
    pub n_points: usize,
}

impl TssbParams {
    pub fn new(alpha0: f64, lambda: f64, gamma: f64) -> Self {
        TssbParams {
            alpha0,
            lambda,
            gamma,
            max_depth: DEFAULT_MAX_DEPTH,
            n_points: DEFAULT_N_POINTS,
        }
    }

    pub fn with_n_points(mut self, n_points: usize) -> Self {
        self.n_points = n_points;
        self
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha0", self.alpha0),
            ("lambda", self.lambda),
            ("gamma", self.gamma),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidParams("max_depth must be at least 1".into()));
        }
        if self.n_points == 0 {
            return Err(Error::InvalidParams("n_points must be at least 1".into()));
        }
        Ok(())
    }
}

/// The eight parameter sets of the experimental study.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Preset {
    S00,
    S01,
    S02,
    S03,
    S04,
    S05,
    S06,
    S07,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::S00,
        Preset::S01,
        Preset::S02,
        Preset::S03,
        Preset::S04,
        Preset::S05,
        Preset::S06,
        Preset::S07,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["s00", "s01", "s02", "s03", "s04", "s05", "s06", "s07"][self.index()]
    }

    /// `(α0, λ, γ)`
    pub fn triple(self) -> (f64, f64, f64) {
        match self {
            Preset::S00 => (1.0, 0.5, 0.2),
            Preset::S01 => (1.0, 1.0, 0.2),
            Preset::S02 => (1.0, 1.0, 1.0),
            Preset::S03 => (5.0, 0.5, 0.2),
            Preset::S04 => (5.0, 1.0, 0.2),
            Preset::S05 => (5.0, 0.5, 1.0),
            Preset::S06 => (25.0, 0.5, 0.2),
            Preset::S07 => (25.0, 0.5, 1.0),
        }
    }

    pub fn params(self) -> TssbParams {
        let (a, l, g) = self.triple();
        TssbParams::new(a, l, g)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

pub fn preset_params(name: &str) -> Result<TssbParams> {
    Ok(name.parse::<Preset>()?.params())
}

pub fn alpha_at_depth(params: &TssbParams, depth: usize) -> f64 {
    params.alpha0 * params.lambda.powi(depth as i32)
}

/// Draws from `Beta(1, b)` by inverting its CDF `1 - (1 - x)^b`.
pub(crate) fn beta_one_b(b: f64, rng: &mut impl Rng) -> f64 {
    let u: f64 = rng.random();
    1.0 - (1.0 - u).powf(1.0 / b)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StickNode {
    pub parent: Option<NodeId>,
    pub depth: usize,
    /// Probability that a descent reaching this node stops here.
    pub stop: f64,
    pub children: Vec<NodeId>,
    /// Branch stick of each child, aligned with `children`.
    pub branch: Vec<f64>,
}

/// Persisted latent sticks of a generated tree. Node ids coincide with the
/// ids of the hierarchy the sticks describe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StickState {
    nodes: Vec<StickNode>,
}

impl StickState {
    /// A tree holding only a root, with its stop stick drawn.
    pub fn new(params: &TssbParams, rng: &mut impl Rng) -> Self {
        let stop = beta_one_b(alpha_at_depth(params, 0), rng);
        StickState {
            nodes: vec![StickNode {
                parent: None,
                depth: 0,
                stop,
                children: Vec::new(),
                branch: Vec::new(),
            }],
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, n: NodeId) -> &StickNode {
        &self.nodes[n.index()]
    }

    pub fn parents(&self) -> Vec<Option<NodeId>> {
        self.nodes.iter().map(|n| n.parent).collect()
    }

    fn add_child(&mut self, parent: NodeId, params: &TssbParams, rng: &mut impl Rng) -> NodeId {
        let id = NodeId(self.nodes.len());
        let depth = self.nodes[parent.index()].depth + 1;
        let branch = beta_one_b(params.gamma, rng);
        let stop = beta_one_b(alpha_at_depth(params, depth), rng);
        self.nodes.push(StickNode {
            parent: Some(parent),
            depth,
            stop,
            children: Vec::new(),
            branch: Vec::new(),
        });
        let p = &mut self.nodes[parent.index()];
        p.children.push(id);
        p.branch.push(branch);
        id
    }

    /// Checks that the sticks describe exactly the tree of `h`.
    pub fn check_matches(&self, h: &Hierarchy) -> Result<()> {
        if self.nodes.len() != h.node_count() {
            return Err(Error::StickMismatch(format!(
                "{} stick nodes for {} hierarchy nodes",
                self.nodes.len(),
                h.node_count()
            )));
        }
        if h.root() != self.root() {
            return Err(Error::StickMismatch(format!("hierarchy root is node {}", h.root())));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let id = NodeId(i);
            if node.parent != h.parent(id) || node.children != h.children(id) {
                return Err(Error::StickMismatch(format!("links of node {id} differ")));
            }
            if node.branch.len() != node.children.len() {
                return Err(Error::StickMismatch(format!("node {id} lacks branch sticks")));
            }
        }
        Ok(())
    }

    /// Appends to `h` every node instantiated since `h` last matched.
    pub(crate) fn extend_hierarchy(&self, h: &mut Hierarchy) {
        for i in h.node_count()..self.nodes.len() {
            let parent = self.nodes[i].parent.expect("only the root lacks a parent");
            let id = h.add_child(parent);
            debug_assert_eq!(id, NodeId(i));
        }
    }
}

/// One root-to-node descent; new children and their sticks are created on
/// demand. Nodes on the last allowed level always stop.
pub fn sample_node(sticks: &mut StickState, params: &TssbParams, rng: &mut impl Rng) -> NodeId {
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
        // Child i is taken with probability ψ_i given that children 0..i were passed.
        let mut i = 0;
        cur = loop {
            if i == sticks.node(cur).children.len() {
                sticks.add_child(cur, params, rng);
            }
            let node = sticks.node(cur);
            let v: f64 = rng.random();
            if v < node.branch[i] {
                break node.children[i];
            }
            i += 1;
        };
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedInstance {
    /// Ground truth plus a model that starts as an exact copy of it.
    pub instance: Instance,
    /// Sticks of the model tree.
    pub sticks: StickState,
    pub params: TssbParams,
    pub seed: u64,
    pub stream: u64,
}

/// Generates an instance on stream 0 of `seed`.
pub fn generate_instance(params: &TssbParams, seed: u64) -> Result<GeneratedInstance> {
    let mut rng = stream_rng(seed, 0);
    let mut gi = generate_with_rng(params, &mut rng)?;
    gi.seed = seed;
    Ok(gi)
}

/// Generates an instance from an already positioned stream; `seed` and
/// `stream` of the result are left at zero for the caller to fill in.
pub fn generate_with_rng(params: &TssbParams, rng: &mut impl Rng) -> Result<GeneratedInstance> {
    params.validate()?;
    let mut sticks = StickState::new(params, rng);
    let assignment: Vec<NodeId> = (0..params.n_points)
        .map(|_| sample_node(&mut sticks, params, rng))
        .collect();
    let ground_truth = Hierarchy::from_parents(&sticks.parents(), &assignment)?;
    let instance = Instance::new(ground_truth.clone(), ground_truth)?;
    Ok(GeneratedInstance {
        instance,
        sticks,
        params: *params,
        seed: 0,
        stream: 0,
    })
}
