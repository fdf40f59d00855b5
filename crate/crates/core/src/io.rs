//! Hierarchy and stick files.
//!
//! A hierarchy file is a JSON document with the size of the point universe
//! and a node list, one node per line:
//!
//! ```text
//! {
//!   "n_points": 3,
//!   "nodes": [
//!     {"id":0,"parent":null,"points":[0,2]},
//!     {"id":1,"parent":0,"points":[1]}
//!   ]
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{StickState, TssbParams};
use crate::hierarchy::{Hierarchy, HierarchyRecord, Instance};

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn hierarchy_to_string(h: &Hierarchy) -> String {
    let record = h.to_record();
    let nodes: Vec<String> = record
        .nodes
        .iter()
        .map(|n| format!("    {}", serde_json::to_string(n).expect("plain data")))
        .collect();
    format!(
        "{{\n  \"n_points\": {},\n  \"nodes\": [\n{}\n  ]\n}}\n",
        record.n_points,
        nodes.join(",\n")
    )
}

/// Parses and validates a hierarchy; `origin` only labels diagnostics.
pub fn parse_hierarchy(text: &str, origin: &Path) -> Result<Hierarchy> {
    let record: HierarchyRecord = parse_json(text, origin)?;
    Hierarchy::from_record(&record)
}

pub fn read_hierarchy(path: &Path) -> Result<Hierarchy> {
    parse_hierarchy(&read_text(path)?, path)
}

pub fn write_hierarchy(path: &Path, h: &Hierarchy) -> Result<()> {
    write_text(path, &hierarchy_to_string(h))
}

pub fn read_instance(ground_truth: &Path, model: &Path) -> Result<Instance> {
    Instance::new(read_hierarchy(ground_truth)?, read_hierarchy(model)?)
}

/// Generator parameters plus the persisted sticks of a model tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SticksFile {
    pub params: TssbParams,
    pub seed: u64,
    pub sticks: StickState,
}

pub fn read_sticks(path: &Path) -> Result<SticksFile> {
    parse_json(&read_text(path)?, path)
}

pub fn write_sticks(path: &Path, file: &SticksFile) -> Result<()> {
    let mut text = serde_json::to_string_pretty(file).expect("plain data");
    text.push('\n');
    write_text(path, &text)
}
