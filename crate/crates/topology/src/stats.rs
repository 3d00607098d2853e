use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::Topology;

/// Summary statistics over all unordered node pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologyStats {
    /// Undirected edge count divided by node count (fibre pairs per node).
    pub avg_degree: f64,
    pub avg_sp_hops: f64,
    pub avg_sp_km: f64,
}

/// Average degree and mean shortest-path length in hops and km.
pub fn topology_stats(t: &Topology) -> TopologyStats {
    let n = t.num_nodes();
    let mut hop_sum = 0u64;
    let mut km_sum = 0.0f64;
    for s in 0..n {
        let hops = bfs_hops(t, s);
        let km = dijkstra_km(t, s);
        for d in s + 1..n {
            hop_sum += hops[d] as u64;
            km_sum += km[d];
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;
    TopologyStats {
        avg_degree: t.num_edges() as f64 / n as f64,
        avg_sp_hops: hop_sum as f64 / pairs,
        avg_sp_km: km_sum / pairs,
    }
}

fn bfs_hops(t: &Topology, s: usize) -> Vec<usize> {
    let n = t.num_nodes();
    let mut dist = vec![usize::MAX; n];
    dist[s] = 0;
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for &(v, _) in t.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn dijkstra_km(t: &Topology, s: usize) -> Vec<f64> {
    let n = t.num_nodes();
    let mut dist = vec![f64::INFINITY; n];
    dist[s] = 0.0;
    let mut heap: BinaryHeap<Reverse<(OrdF64, usize)>> = BinaryHeap::new();
    heap.push(Reverse((OrdF64(0.0), s)));
    while let Some(Reverse((OrdF64(du), u))) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        for &(v, e) in t.neighbors(u) {
            let nd = du + t.edge(e).length_km;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((OrdF64(nd), v)));
            }
        }
    }
    dist
}

#[derive(PartialEq)]
pub(crate) struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
