// Moves a whole cluster to a different place in the model tree. Pairwise
// co-membership is unchanged, so the classic F-score stays put while the
// partial-order and hierarchical scores react.
//
//     cargo run --example structure_blindness

use hierscore::experiment::score_all;
use hierscore::{Hierarchy, Instance, NodeId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // root {0,1} -> a {2,3} -> b {4,5}
    let gt = Hierarchy::from_parents(
        &[None, Some(NodeId(0)), Some(NodeId(1))],
        &[0, 0, 1, 1, 2, 2].map(NodeId),
    )?;
    // Same clusters, but b hangs directly below the root.
    let moved = Hierarchy::from_parents(
        &[None, Some(NodeId(0)), Some(NodeId(0))],
        &[0, 0, 1, 1, 2, 2].map(NodeId),
    )?;
    // b nested under a again, but a and root swapped.
    let inverted = Hierarchy::from_parents(
        &[None, Some(NodeId(0)), Some(NodeId(1))],
        &[1, 1, 0, 0, 2, 2].map(NodeId),
    )?;

    for (name, model) in [("identical", gt.clone()), ("b re-parented", moved), ("levels swapped", inverted)] {
        let s = score_all(&Instance::new(gt.clone(), model)?);
        println!(
            "{name:<15} classic {:.4}  partial order {:.4}  hierarchical {:.4}",
            s.classic, s.partial_order, s.hierarchical
        );
    }
    Ok(())
}
