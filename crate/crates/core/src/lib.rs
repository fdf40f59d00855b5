//! Evaluation of hierarchies of clusters against a ground-truth class
//! hierarchy.
//!
//! Points may sit in any node of either hierarchy, not only in leaves. The
//! crate scores a model with three F-score variants (classic pairwise,
//! partial-order pairwise, and the best-match hierarchical F-score), generates
//! ground truths with a tree-structured stick-breaking process, and degrades
//! models in controlled ways to study how each measure reacts.
//!
//! ```
//! use hierscore::{Hierarchy, Instance, NodeId};
//! use hierscore::measures::{classic_fscore, hierarchical_fscore, partial_order_fscore, Direction};
//!
//! // Ground truth: x0 in the root, x1 in its child. Model: both in the root.
//! let parents = [None, Some(NodeId(0))];
//! let gt = Hierarchy::from_parents(&parents, &[NodeId(0), NodeId(1)]).unwrap();
//! let model = Hierarchy::from_parents(&parents, &[NodeId(0), NodeId(0)]).unwrap();
//! let inst = Instance::new(gt, model).unwrap();
//!
//! assert_eq!(classic_fscore(&inst), 0.0);
//! assert!((partial_order_fscore(&inst, Direction::Sub) - 2.0 / 3.0).abs() < 1e-12);
//! assert!((hierarchical_fscore(&inst).overall - 8.0 / 9.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod experiment;
pub mod generator;
pub mod hierarchy;
pub mod io;
pub mod measures;
pub mod perturbation;

pub use error::{Error, Result};
pub use generator::{GeneratedInstance, Preset, StickState, TssbParams};
pub use hierarchy::{Hierarchy, HierarchyRecord, Instance, NodeId, NodeRecord, ValidationReport};
pub use measures::{Direction, HierFScoreDetail, PairCounts, RelationKind};
