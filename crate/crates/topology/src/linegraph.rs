use crate::Topology;

/// The edge-adjacency graph: one vertex per undirected edge of the source
/// topology, vertices adjacent when their edges share a node.
#[derive(Debug, Clone)]
pub struct LineGraph {
    adj: Vec<Vec<usize>>,
}

impl LineGraph {
    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }
}

pub fn build_line_graph(t: &Topology) -> LineGraph {
    let m = t.num_edges();
    let mut adj = vec![Vec::new(); m];
    for node in 0..t.num_nodes() {
        let incident = t.neighbors(node);
        for i in 0..incident.len() {
            for j in i + 1..incident.len() {
                let (a, b) = (incident[i].1, incident[j].1);
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    LineGraph { adj }
}

impl Topology {
    pub fn line_graph(&self) -> LineGraph {
        build_line_graph(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topo(nodes: &[&str], edges: &[(&str, &str)]) -> Topology {
        Topology::new(
            "t",
            nodes.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(u, v)| (u.to_string(), v.to_string(), 1.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn path_graph_gives_single_edge() {
        let lg = topo(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).line_graph();
        assert_eq!(lg.num_vertices(), 2);
        assert_eq!(lg.num_edges(), 1);
        assert_eq!(lg.neighbors(0), &[1]);
    }

    #[test]
    fn triangle_maps_to_triangle() {
        let lg = topo(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]).line_graph();
        assert_eq!(lg.num_vertices(), 3);
        assert_eq!(lg.num_edges(), 3);
    }

    #[test]
    fn star_with_three_leaves_maps_to_triangle() {
        // all three spokes meet at the hub, so every edge pair is adjacent
        let lg = topo(&["h", "a", "b", "c"], &[("h", "a"), ("h", "b"), ("h", "c")]).line_graph();
        assert_eq!(lg.num_vertices(), 3);
        assert_eq!(lg.num_edges(), 3);
        for v in 0..3 {
            assert_eq!(lg.degree(v), 2);
        }
    }
}
