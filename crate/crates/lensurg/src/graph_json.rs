//! JSON form of a plumbing graph:
//!
//! ```json
//! {"vertices": [{"id": 0, "weight": -2}, {"id": 1, "weight": -2}], "edges": [[0, 1]]}
//! ```

use std::path::Path;

use lensurg_core::plumbing::{PlumbingError, PlumbingGraph};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: usize,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, thiserror::Error)]
pub enum GraphFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid graph: {0}")]
    Graph(#[from] PlumbingError),
}

impl GraphDoc {
    pub fn from_graph(g: &PlumbingGraph) -> Self {
        Self {
            vertices: g.weights().iter().enumerate().map(|(id, &weight)| VertexDoc { id, weight }).collect(),
            edges: g.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<PlumbingGraph, PlumbingError> {
        let vertices: Vec<(usize, i64)> = self.vertices.iter().map(|v| (v.id, v.weight)).collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        PlumbingGraph::new(&vertices, &edges)
    }
}

pub fn parse_graph(text: &str) -> Result<PlumbingGraph, GraphFileError> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    Ok(doc.to_graph()?)
}

pub fn read_graph(path: &Path) -> Result<PlumbingGraph, GraphFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| GraphFileError::Io { path: path.display().to_string(), source })?;
    parse_graph(&text)
}
