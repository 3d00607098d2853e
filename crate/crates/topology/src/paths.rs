use std::cmp::Ordering;
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::{required_fsus, ModulationTable, Topology};

/// Path ordering criterion: primary metric first, ties broken by the
/// secondary metric, then by lexicographic link-index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SortBy {
    HopsThenKm,
    KmThenHops,
}

impl SortBy {
    fn key(self, hops: usize, km: f64) -> (f64, f64) {
        match self {
            SortBy::HopsThenKm => (hops as f64, km),
            SortBy::KmThenHops => (km, hops as f64),
        }
    }
}

/// One precomputed candidate route between an ordered node pair.
#[derive(Debug, Clone)]
pub struct CandidatePath {
    /// Directed link indices in traversal order.
    pub links: Vec<usize>,
    /// Undirected edge ids in traversal order (`links[i] / 2`).
    pub edges: Vec<usize>,
    pub hops: usize,
    pub length_km: f64,
    /// Index into the modulation table, or `None` when the path exceeds every reach.
    pub modulation: Option<usize>,
    /// Required FSU per configured bitrate (aligned with `PathTable::bitrates`).
    pub widths: Vec<usize>,
}

/// K candidate paths per ordered node pair, with modulation and FSU sizing
/// resolved against a modulation table and the configured bitrate set.
#[derive(Debug, Clone)]
pub struct PathTable {
    n: usize,
    k: usize,
    sort: SortBy,
    bitrates: Vec<f64>,
    guardband_fsu: usize,
    paths: Vec<Vec<CandidatePath>>,
}

impl PathTable {
    pub fn build(
        t: &Topology,
        k: usize,
        sort: SortBy,
        modulation: &ModulationTable,
        bitrates: &[f64],
        guardband_fsu: usize,
    ) -> PathTable {
        let n = t.num_nodes();
        let mut paths = Vec::with_capacity(n * n);
        for s in 0..n {
            for d in 0..n {
                if s == d {
                    paths.push(Vec::new());
                    continue;
                }
                let routes = yen(t, s, d, k, sort);
                let cands = routes
                    .into_iter()
                    .map(|links| {
                        let (hops, km) = path_cost(t, &links);
                        let edges = links.iter().map(|&l| l / 2).collect();
                        let modulation_idx = modulation.for_distance(km);
                        let widths = match modulation_idx {
                            Some(mi) => bitrates
                                .iter()
                                .map(|&b| {
                                    required_fsus(
                                        b,
                                        modulation.format(mi),
                                        modulation.slot_width_ghz,
                                        guardband_fsu,
                                    )
                                })
                                .collect(),
                            None => Vec::new(),
                        };
                        CandidatePath {
                            links,
                            edges,
                            hops,
                            length_km: km,
                            modulation: modulation_idx,
                            widths,
                        }
                    })
                    .collect();
                paths.push(cands);
            }
        }
        PathTable {
            n,
            k,
            sort,
            bitrates: bitrates.to_vec(),
            guardband_fsu,
            paths,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sort(&self) -> SortBy {
        self.sort
    }

    pub fn guardband_fsu(&self) -> usize {
        self.guardband_fsu
    }

    pub fn bitrates(&self) -> &[f64] {
        &self.bitrates
    }

    pub fn candidates(&self, s: usize, d: usize) -> &[CandidatePath] {
        &self.paths[s * self.n + d]
    }

    /// Required FSU for `path` at `bitrate`, or `None` when the path has no
    /// reach-feasible modulation.
    pub fn width_for(&self, path: &CandidatePath, bitrate: f64) -> Option<usize> {
        path.modulation?;
        let pos = self.bitrates.iter().position(|&b| b == bitrate)?;
        Some(path.widths[pos])
    }

    pub fn width_for_with(
        &self,
        path: &CandidatePath,
        bitrate: f64,
        modulation: &ModulationTable,
    ) -> Option<usize> {
        if let Some(w) = self.width_for(path, bitrate) {
            return Some(w);
        }
        let mi = path.modulation?;
        Some(required_fsus(
            bitrate,
            modulation.format(mi),
            modulation.slot_width_ghz,
            self.guardband_fsu,
        ))
    }
}

/// Loopless K-shortest paths for every ordered pair, as bare link sequences.
pub fn yen_k_shortest_paths(t: &Topology, k: usize, sort: SortBy) -> Vec<Vec<Vec<usize>>> {
    let n = t.num_nodes();
    let mut all = Vec::with_capacity(n * n);
    for s in 0..n {
        for d in 0..n {
            if s == d {
                all.push(Vec::new());
            } else {
                all.push(yen(t, s, d, k, sort));
            }
        }
    }
    all
}

/// Total (hops, km) of a link sequence, km summed in traversal order so that
/// equal routes always compare bit-identically.
fn path_cost(t: &Topology, links: &[usize]) -> (usize, f64) {
    let mut km = 0.0;
    for &l in links {
        km += t.edge(l / 2).length_km;
    }
    (links.len(), km)
}

#[derive(PartialEq, Clone)]
struct Candidate {
    primary: f64,
    secondary: f64,
    links: Vec<usize>,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.primary
            .total_cmp(&other.primary)
            .then_with(|| self.secondary.total_cmp(&other.secondary))
            .then_with(|| self.links.cmp(&other.links))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn make_candidate(t: &Topology, sort: SortBy, links: Vec<usize>) -> Candidate {
    let (hops, km) = path_cost(t, &links);
    let (primary, secondary) = sort.key(hops, km);
    Candidate {
        primary,
        secondary,
        links,
    }
}

/// Yen's algorithm. Enumeration continues past the K-th path until the best
/// remaining candidate is strictly worse on (primary, secondary), so that
/// complete tie classes are collected before the final lexicographic cut.
fn yen(t: &Topology, s: usize, d: usize, k: usize, sort: SortBy) -> Vec<Vec<usize>> {
    let mut banned_edges = vec![false; t.num_edges()];
    let mut banned_nodes = vec![false; t.num_nodes()];

    let first = match dijkstra(t, s, d, sort, &banned_edges, &banned_nodes) {
        Some(p) => p,
        None => return Vec::new(),
    };
    let mut accepted: Vec<Candidate> = vec![make_candidate(t, sort, first)];
    let mut pool: BTreeSet<Candidate> = BTreeSet::new();

    loop {
        // Spur from the most recently accepted path first: paths tying with
        // the current K-th best may only be reachable as its deviations.
        let prev = accepted.last().unwrap().links.clone();
        for spur_idx in 0..prev.len() {
            let root = &prev[..spur_idx];
            let spur_node = if spur_idx == 0 {
                s
            } else {
                t.link_endpoints(prev[spur_idx - 1]).1
            };

            banned_edges.iter_mut().for_each(|b| *b = false);
            banned_nodes.iter_mut().for_each(|b| *b = false);
            for a in &accepted {
                if a.links.len() > spur_idx && a.links[..spur_idx] == *root {
                    banned_edges[a.links[spur_idx] / 2] = true;
                }
            }
            for c in pool.iter() {
                if c.links.len() > spur_idx && c.links[..spur_idx] == *root {
                    banned_edges[c.links[spur_idx] / 2] = true;
                }
            }
            let mut node = s;
            for &l in root {
                banned_nodes[node] = true;
                node = t.link_endpoints(l).1;
            }

            if let Some(spur) = dijkstra(t, spur_node, d, sort, &banned_edges, &banned_nodes) {
                let mut links = root.to_vec();
                links.extend(spur);
                pool.insert(make_candidate(t, sort, links));
            }
        }

        let next = match pool.iter().next().cloned() {
            Some(best) => best,
            None => break,
        };
        if accepted.len() >= k {
            let thresh = &accepted[k - 1];
            if (next.primary, next.secondary) > (thresh.primary, thresh.secondary) {
                break;
            }
        }
        pool.remove(&next);
        accepted.push(next);
    }

    accepted.sort();
    accepted.truncate(k);
    accepted.into_iter().map(|c| c.links).collect()
}

#[derive(PartialEq)]
struct HeapKey {
    primary: f64,
    secondary: f64,
    node: usize,
}

impl Eq for HeapKey {}

impl Ord for HeapKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.primary
            .total_cmp(&other.primary)
            .then_with(|| self.secondary.total_cmp(&other.secondary))
            .then_with(|| self.node.cmp(&other.node))
    }
}

impl PartialOrd for HeapKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(
    t: &Topology,
    s: usize,
    d: usize,
    sort: SortBy,
    banned_edges: &[bool],
    banned_nodes: &[bool],
) -> Option<Vec<usize>> {
    let n = t.num_nodes();
    let mut best: Vec<Option<(f64, f64)>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    best[s] = Some((0.0, 0.0));
    heap.push(Reverse(HeapKey {
        primary: 0.0,
        secondary: 0.0,
        node: s,
    }));
    let mut settled = vec![false; n];

    while let Some(Reverse(HeapKey {
        primary,
        secondary,
        node,
    })) = heap.pop()
    {
        if settled[node] {
            continue;
        }
        settled[node] = true;
        if node == d {
            break;
        }
        for &(nb, e) in t.neighbors(node) {
            if banned_edges[e] || banned_nodes[nb] || settled[nb] {
                continue;
            }
            let km = t.edge(e).length_km;
            let (dp, ds) = match sort {
                SortBy::HopsThenKm => (1.0, km),
                SortBy::KmThenHops => (km, 1.0),
            };
            let cand = (primary + dp, secondary + ds);
            let better = match best[nb] {
                None => true,
                Some(cur) => (cand.0, cand.1) < cur,
            };
            if better {
                best[nb] = Some(cand);
                parent[nb] = Some(t.link_from(e, node));
                heap.push(Reverse(HeapKey {
                    primary: cand.0,
                    secondary: cand.1,
                    node: nb,
                }));
            }
        }
    }

    best[d]?;
    let mut links = Vec::new();
    let mut node = d;
    while node != s {
        let l = parent[node].expect("reachable node has parent");
        links.push(l);
        node = t.link_endpoints(l).0;
    }
    links.reverse();
    Some(links)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn topo(n: usize, edges: &[(usize, usize, f64)]) -> Topology {
        Topology::new(
            "t",
            (0..n).map(|i| i.to_string()).collect(),
            edges
                .iter()
                .map(|&(u, v, w)| (u.to_string(), v.to_string(), w))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_edge_pair_yields_one_path() {
        let t = topo(2, &[(0, 1, 10.0)]);
        let paths = yen(&t, 0, 1, 5, SortBy::HopsThenKm);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0], vec![0]);
    }

    #[test]
    fn square_cycle_opposite_pair_has_two_two_hop_paths() {
        let t = topo(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]);
        let paths = yen(&t, 0, 2, 2, SortBy::HopsThenKm);
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].len(), 2);
        assert_eq!(paths[1].len(), 2);
        assert_ne!(paths[0], paths[1]);
    }

    #[test]
    fn first_path_matches_shortest_hops() {
        let t = topo(
            5,
            &[(0, 1, 5.0), (1, 2, 5.0), (2, 4, 5.0), (0, 3, 100.0), (3, 4, 100.0)],
        );
        let paths = yen(&t, 0, 4, 3, SortBy::HopsThenKm);
        assert_eq!(paths[0].len(), 2); // via node 3 despite longer km
    }

    #[test]
    fn km_sort_prefers_shorter_distance() {
        let t = topo(
            5,
            &[(0, 1, 5.0), (1, 2, 5.0), (2, 4, 5.0), (0, 3, 100.0), (3, 4, 100.0)],
        );
        let paths = yen(&t, 0, 4, 3, SortBy::KmThenHops);
        assert_eq!(paths[0].len(), 3);
        let (_, km) = path_cost(&t, &paths[0]);
        assert_eq!(km, 15.0);
    }

    #[test]
    fn paths_are_simple_and_connect() {
        let t = topo(
            6,
            &[
                (0, 1, 1.0),
                (1, 2, 1.0),
                (2, 5, 1.0),
                (0, 3, 1.0),
                (3, 4, 1.0),
                (4, 5, 1.0),
                (1, 4, 1.0),
                (0, 5, 10.0),
            ],
        );
        let paths = yen(&t, 0, 5, 20, SortBy::HopsThenKm);
        assert!(paths.len() >= 4);
        for p in &paths {
            let mut node = 0;
            let mut visited = vec![false; 6];
            visited[0] = true;
            for &l in p {
                let (from, to) = t.link_endpoints(l);
                assert_eq!(from, node);
                assert!(!visited[to], "revisited node {to}");
                visited[to] = true;
                node = to;
            }
            assert_eq!(node, 5);
        }
    }

    #[test]
    fn path_table_widths() {
        let t = topo(2, &[(0, 1, 1000.0)]);
        let mt = ModulationTable::default();
        let pt = PathTable::build(&t, 3, SortBy::HopsThenKm, &mt, &[100.0], 0);
        let cands = pt.candidates(0, 1);
        assert_eq!(cands.len(), 1);
        // 1000 km -> 16QAM -> ceil(100 / (4 * 12.5)) = 2
        assert_eq!(cands[0].widths, vec![2]);
        assert_eq!(pt.width_for(&cands[0], 100.0), Some(2));
    }
}
