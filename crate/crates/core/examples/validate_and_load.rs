// Validation reports for malformed hierarchies, and a round trip through the
// hierarchy file format.
//
//     cargo run --example validate_and_load

use std::path::Path;

use hierscore::hierarchy::validate_hierarchy;
use hierscore::io::{hierarchy_to_string, parse_hierarchy};
use hierscore::{HierarchyRecord, NodeRecord};

fn node(id: usize, parent: Option<usize>, points: &[usize]) -> NodeRecord {
    NodeRecord { id, parent, points: points.to_vec() }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let broken = [
        HierarchyRecord {
            n_points: 2,
            nodes: vec![node(0, None, &[0]), node(1, None, &[1])],
        },
        HierarchyRecord {
            n_points: 4,
            nodes: vec![node(0, None, &[0, 1, 3]), node(1, Some(0), &[2, 3])],
        },
        HierarchyRecord {
            n_points: 3,
            nodes: vec![node(0, None, &[0]), node(1, Some(2), &[1]), node(2, Some(1), &[])],
        },
    ];
    for record in &broken {
        println!("{}", validate_hierarchy(record));
    }

    let text = r#"{"n_points": 5, "nodes": [
        {"id": 0, "parent": null, "points": [0]},
        {"id": 1, "parent": 0, "points": [1, 2]},
        {"id": 2, "parent": 1, "points": [3]},
        {"id": 3, "parent": 0, "points": [4]}
    ]}"#;
    let h = parse_hierarchy(text, Path::new("inline"))?;
    println!("\nsubtree of node 1: {:?}", h.subtree_points(hierscore::NodeId(1))?);
    print!("{}", hierarchy_to_string(&h));

    if let Err(e) = parse_hierarchy("{\"n_points\": 1, \"nodes\": [}", Path::new("inline")) {
        println!("{e}");
    }
    Ok(())
}
