//! JSON map files: `{ "domain": [lo, hi], "nodes": [[x0, y0], ...] }`.
//!
//! Numbers are integers or `"p/q"` strings; decimal literals are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::builtins::builtin_from_ref;
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::plmap::{Node, PLMap};
use crate::rational::{serde_rat, Rational};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDocument {
    domain: RatInterval,
    nodes: Vec<NodeEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeEntry(
    #[serde(with = "serde_rat")] Rational,
    #[serde(with = "serde_rat")] Rational,
);

pub fn parse_map_json(text: &str) -> Result<PLMap> {
    let doc: MapDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let nodes = doc
        .nodes
        .into_iter()
        .map(|NodeEntry(x, y)| Node::new(x, y))
        .collect();
    PLMap::with_domain(doc.domain, nodes)
}

pub fn map_to_json(map: &PLMap) -> String {
    let doc = MapDocument {
        domain: map.domain().clone(),
        nodes: map
            .nodes()
            .iter()
            .map(|n| NodeEntry(n.x.clone(), n.y.clone()))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("map documents always serialize")
}

/// Where a map came from, recorded in reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MapIdentity {
    Builtin { name: String },
    File { path: String, sha256: String },
}

/// Loads a builtin reference (`tent`, `stefan:2`, ...) or a map file path.
pub fn load_map(reference: &str) -> Result<(PLMap, MapIdentity)> {
    let path = Path::new(reference);
    let looks_like_file = reference.ends_with(".json") || path.is_file();
    if !looks_like_file {
        let map = builtin_from_ref(reference)?;
        return Ok((
            map,
            MapIdentity::Builtin {
                name: reference.to_string(),
            },
        ));
    }
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| Error::Parse(format!("{} is not UTF-8: {e}", path.display())))?;
    let map = parse_map_json(text)?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    Ok((
        map,
        MapIdentity::File {
            path: reference.to_string(),
            sha256,
        },
    ))
}
