//! Edge-list file formats.
//!
//! JSON: `{"n":4,"edges":[[0,1],[1,2]]}` followed by a newline.
//! CSV: one `u,v` line per edge, no header. Both writers emit edges in
//! lexicographic order, so reading a written file and writing it again
//! reproduces it byte for byte.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Digraph, Edge, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[u32; 2]>,
}

impl From<&Digraph> for GraphFile {
    fn from(g: &Digraph) -> Self {
        GraphFile {
            n: g.vertex_count(),
            edges: g.edges().map(|(a, b)| [a.0, b.0]).collect(),
        }
    }
}

impl TryFrom<GraphFile> for Digraph {
    type Error = GraphError;

    fn try_from(file: GraphFile) -> Result<Self, Self::Error> {
        Digraph::from_edges(file.n, file.edges.into_iter().map(|[a, b]| (VertexId(a), VertexId(b))))
    }
}

pub fn to_json_string(g: &Digraph) -> String {
    let mut s = serde_json::to_string(&GraphFile::from(g)).expect("graph file always serializes");
    s.push('\n');
    s
}

pub fn from_json_str(s: &str) -> Result<Digraph, GraphError> {
    let file: GraphFile = serde_json::from_str(s).map_err(|e| GraphError::Format(e.to_string()))?;
    Digraph::try_from(file)
}

pub fn write_json<W: Write>(g: &Digraph, mut w: W) -> std::io::Result<()> {
    w.write_all(to_json_string(g).as_bytes())
}

pub fn read_json<R: Read>(mut r: R) -> Result<Digraph, GraphError> {
    let mut s = String::new();
    r.read_to_string(&mut s).map_err(|e| GraphError::Format(e.to_string()))?;
    from_json_str(&s)
}

pub fn write_csv<W: Write>(g: &Digraph, w: W) -> Result<(), GraphError> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for (a, b) in g.edges() {
        wr.write_record([a.0.to_string(), b.0.to_string()])
            .map_err(|e| GraphError::Format(e.to_string()))?;
    }
    wr.flush().map_err(|e| GraphError::Format(e.to_string()))
}

/// Reads `u,v` lines. Without an explicit `n`, the vertex count is one more
/// than the largest id mentioned, so trailing isolated vertices are lost.
pub fn read_csv<R: Read>(r: R, n: Option<usize>) -> Result<Digraph, GraphError> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut edges: Vec<Edge> = Vec::new();
    for rec in rd.deserialize::<(u32, u32)>() {
        let (a, b) = rec.map_err(|e| GraphError::Format(e.to_string()))?;
        edges.push((VertexId(a), VertexId(b)));
    }
    let inferred = edges
        .iter()
        .map(|&(a, b)| a.index().max(b.index()) + 1)
        .max()
        .unwrap_or(0);
    Digraph::from_edges(n.unwrap_or(inferred), edges)
}
