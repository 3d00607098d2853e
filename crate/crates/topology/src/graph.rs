use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use crate::TopologyError;

/// An undirected fibre pair between two nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length_km: f64,
}

/// An optical network topology.
///
/// Undirected edges are expanded into directed link pairs: edge `e` owns
/// directed links `2e` (`u -> v`) and `2e + 1` (`v -> u`). Candidate paths
/// are sequences of directed link indices; spectrum state is tracked per
/// undirected edge.
#[derive(Debug, Clone)]
pub struct Topology {
    name: String,
    node_names: Vec<String>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, usize)>>,
}

#[derive(Deserialize)]
struct TopologyDoc {
    #[serde(default)]
    name: Option<String>,
    nodes: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Deserialize)]
struct EdgeDoc {
    u: String,
    v: String,
    length_km: f64,
}

impl Topology {
    pub fn new(
        name: impl Into<String>,
        node_names: Vec<String>,
        edge_list: Vec<(String, String, f64)>,
    ) -> Result<Self, TopologyError> {
        if node_names.is_empty() {
            return Err(TopologyError::NoNodes);
        }
        let mut index = HashMap::new();
        for (i, n) in node_names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(TopologyError::DuplicateNode(n.clone()));
            }
        }
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut seen = HashMap::new();
        for (us, vs, km) in edge_list {
            let u = *index
                .get(&us)
                .ok_or_else(|| TopologyError::UnknownNode(us.clone()))?;
            let v = *index
                .get(&vs)
                .ok_or_else(|| TopologyError::UnknownNode(vs.clone()))?;
            if u == v {
                return Err(TopologyError::SelfLoop(us));
            }
            if !(km > 0.0) || !km.is_finite() {
                return Err(TopologyError::NonPositiveLength {
                    u: us,
                    v: vs,
                    length_km: km,
                });
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key, ()).is_some() {
                return Err(TopologyError::DuplicateEdge(us, vs));
            }
            edges.push(Edge {
                u: key.0,
                v: key.1,
                length_km: km,
            });
        }
        let mut adj = vec![Vec::new(); node_names.len()];
        for (e, edge) in edges.iter().enumerate() {
            adj[edge.u].push((edge.v, e));
            adj[edge.v].push((edge.u, e));
        }
        let topo = Topology {
            name: name.into(),
            node_names,
            edges,
            adj,
        };
        topo.check_connected()?;
        Ok(topo)
    }

    fn check_connected(&self) -> Result<(), TopologyError> {
        let n = self.num_nodes();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        if let Some(u) = seen.iter().position(|s| !s) {
            return Err(TopologyError::Disconnected(
                self.node_names[u].clone(),
                self.node_names[0].clone(),
            ));
        }
        Ok(())
    }

    /// Parse the JSON topology document format. Unknown fields are ignored.
    pub fn from_json_str(text: &str) -> Result<Self, TopologyError> {
        let doc: TopologyDoc = serde_json::from_str(text)?;
        let edges = doc
            .edges
            .into_iter()
            .map(|e| (e.u, e.v, e.length_km))
            .collect();
        Topology::new(doc.name.unwrap_or_default(), doc.nodes, edges)
    }

    /// Parse a plain edge-list CSV (`u,v,length_km` per line, optional header).
    /// Nodes are created in order of first appearance.
    pub fn from_csv_str(name: &str, text: &str) -> Result<Self, TopologyError> {
        let mut nodes: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
            if fields.len() < 3 {
                return Err(TopologyError::Csv {
                    line: lineno + 1,
                    msg: format!("expected at least 3 fields, got {}", fields.len()),
                });
            }
            let km: f64 = match fields[2].parse() {
                Ok(v) => v,
                // tolerate a single header line
                Err(_) if lineno == 0 => continue,
                Err(e) => {
                    return Err(TopologyError::Csv {
                        line: lineno + 1,
                        msg: format!("bad length {:?}: {e}", fields[2]),
                    })
                }
            };
            for f in &fields[..2] {
                if !index.contains_key(*f) {
                    index.insert(f.to_string(), nodes.len());
                    nodes.push(f.to_string());
                }
            }
            edges.push((fields[0].to_string(), fields[1].to_string(), km));
        }
        Topology::new(name, nodes, edges)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, TopologyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TopologyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or_default()
            .to_ascii_lowercase();
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("topology");
        match ext.as_str() {
            "json" => Self::from_json_str(&text),
            "csv" | "txt" => Self::from_csv_str(stem, &text),
            other => Err(TopologyError::UnsupportedExtension(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_nodes(&self) -> usize {
        self.node_names.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_directed_links(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn node_name(&self, i: usize) -> &str {
        &self.node_names[i]
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.node_names.iter().position(|n| n == name)
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `u` as `(node, edge index)` pairs.
    pub fn neighbors(&self, u: usize) -> &[(usize, usize)] {
        &self.adj[u]
    }

    /// Endpoints of directed link `l` as `(from, to)`.
    pub fn link_endpoints(&self, l: usize) -> (usize, usize) {
        let e = &self.edges[l / 2];
        if l % 2 == 0 {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    /// The directed link index for traversing edge `e` from node `from`.
    pub fn link_from(&self, e: usize, from: usize) -> usize {
        if self.edges[e].u == from {
            2 * e
        } else {
            2 * e + 1
        }
    }

    pub fn edge_of_link(l: usize) -> usize {
        l / 2
    }
}
