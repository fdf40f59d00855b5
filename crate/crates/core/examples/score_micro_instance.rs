// Scores the smallest instance where the three measures disagree: a two-level
// ground truth against a model that put both points into the root.
//
//     cargo run --example score_micro_instance

use hierscore::measures::{pair_counts_fast, score_instance, RelationKind};
use hierscore::{Hierarchy, Instance, NodeId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Ground truth: x0 in the root class, x1 in its child class.
    let parents = [None, Some(NodeId(0))];
    let gt = Hierarchy::from_parents(&parents, &[NodeId(0), NodeId(1)])?;
    // Model: same tree, both points in the root cluster.
    let model = Hierarchy::from_parents(&parents, &[NodeId(0), NodeId(0)])?;
    let inst = Instance::new(gt, model)?;

    for kind in [RelationKind::Equality, RelationKind::PartialOrderSub, RelationKind::PartialOrderSup] {
        let c = pair_counts_fast(&inst, kind);
        println!(
            "{kind:?}: tp {} fp {} fn {} tn {}",
            c.true_pos, c.false_pos, c.false_neg, c.true_neg
        );
    }

    let report = score_instance(&inst);
    println!("classic       {:.6}", report.classic);
    println!("partial order {:.6}", report.partial_order);
    println!("hierarchical  {:.6}", report.hierarchical.overall);
    for row in &report.hierarchical.classes {
        println!(
            "  class {} (weight {}): F {:.6} at cluster {}",
            row.class, row.weight, row.f, row.best_cluster
        );
    }
    Ok(())
}
