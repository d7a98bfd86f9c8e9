//! Graph input formats: a canonical JSON document and an equivalent
//! whitespace edge-list form for hand-authoring.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::system::MasSystem;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub u: String,
    pub v: String,
    pub w: f64,
}

/// On-disk description of a leader-follower system. `parse` accepts either
/// JSON (canonical, detected by a leading '{') or the edge-list form:
/// a `leader <label>` line, then `u v w` lines; `node <label>` lines declare
/// isolated nodes; `#` starts a comment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDocument {
    pub nodes: Vec<String>,
    pub leader: String,
    pub edges: Vec<EdgeDoc>,
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
        } else {
            Self::parse_edge_list(text)
        }
    }

    fn parse_edge_list(text: &str) -> Result<Self> {
        let mut leader: Option<String> = None;
        let mut nodes: Vec<String> = Vec::new();
        let mut edges: Vec<EdgeDoc> = Vec::new();
        let note = |label: &str, nodes: &mut Vec<String>| {
            if !nodes.iter().any(|n| n == label) {
                nodes.push(label.to_string());
            }
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["leader", label] => {
                    if leader.is_some() {
                        return Err(Error::Parse(format!(
                            "line {}: duplicate leader line",
                            lineno + 1
                        )));
                    }
                    note(label, &mut nodes);
                    leader = Some(label.to_string());
                }
                ["node", label] => note(label, &mut nodes),
                [u, v, w] => {
                    let w: f64 = w.parse().map_err(|_| {
                        Error::Parse(format!("line {}: bad weight {:?}", lineno + 1, w))
                    })?;
                    note(u, &mut nodes);
                    note(v, &mut nodes);
                    edges.push(EdgeDoc {
                        u: u.to_string(),
                        v: v.to_string(),
                        w,
                    });
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected 'leader <label>', 'node <label>' or 'u v w'",
                        lineno + 1
                    )))
                }
            }
        }
        let leader = leader
            .ok_or_else(|| Error::Parse("missing 'leader <label>' line".to_string()))?;
        Ok(GraphDocument {
            nodes,
            leader,
            edges,
        })
    }

    pub fn to_system(&self) -> Result<MasSystem> {
        let edges: Vec<(String, String, f64)> = self
            .edges
            .iter()
            .map(|e| (e.u.clone(), e.v.clone(), e.w))
            .collect();
        let g = WeightedGraph::new(&self.nodes, &edges)?;
        MasSystem::new(g, &self.leader)
    }

    pub fn from_system(sys: &MasSystem) -> Self {
        GraphDocument {
            nodes: sys.graph().labels().to_vec(),
            leader: sys.leader().to_string(),
            edges: sys
                .graph()
                .edge_list()
                .into_iter()
                .map(|(u, v, w)| EdgeDoc { u, v, w })
                .collect(),
        }
    }
}

pub fn load_system(path: &std::path::Path) -> Result<MasSystem> {
    let text = std::fs::read_to_string(path)?;
    GraphDocument::parse(&text)?.to_system()
}
