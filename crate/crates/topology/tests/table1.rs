//! Shipped topology documents must reproduce the published summary
//! statistics (node/link counts, average degree, average shortest path in
//! hops and km) within 1%.

use eonlab_topology::{topology_stats, Topology};

fn data_path(file: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/topologies")
        .join(file)
}

struct Row {
    file: &'static str,
    nodes: usize,
    dir_links: usize,
    avg_degree: f64,
    avg_sp_hops: f64,
    avg_sp_km: f64,
}

const ROWS: &[Row] = &[
    Row { file: "nsfnet.json", nodes: 14, dir_links: 44, avg_degree: 1.57, avg_sp_hops: 2.12, avg_sp_km: 2054.0 },
    Row { file: "cost239.json", nodes: 11, dir_links: 52, avg_degree: 2.37, avg_sp_hops: 1.56, avg_sp_km: 1810.0 },
    Row { file: "usnet.json", nodes: 24, dir_links: 86, avg_degree: 1.79, avg_sp_hops: 2.99, avg_sp_km: 2993.0 },
    Row { file: "jpn48.json", nodes: 48, dir_links: 164, avg_degree: 1.71, avg_sp_hops: 5.21, avg_sp_km: 1201.0 },
];

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want
}

#[test]
fn shipped_topologies_match_published_stats() {
    for row in ROWS {
        let t = Topology::from_path(data_path(row.file)).unwrap();
        assert_eq!(t.num_nodes(), row.nodes, "{}: node count", row.file);
        assert_eq!(t.num_directed_links(), row.dir_links, "{}: link count", row.file);
        let s = topology_stats(&t);
        assert!(rel_err(s.avg_degree, row.avg_degree) < 0.01, "{}: avg degree {} vs {}", row.file, s.avg_degree, row.avg_degree);
        assert!(rel_err(s.avg_sp_hops, row.avg_sp_hops) < 0.01, "{}: avg hops {} vs {}", row.file, s.avg_sp_hops, row.avg_sp_hops);
        assert!(rel_err(s.avg_sp_km, row.avg_sp_km) < 0.01, "{}: avg km {} vs {}", row.file, s.avg_sp_km, row.avg_sp_km);
    }
}

#[test]
fn nsfnet_directed_link_expansion() {
    let t = Topology::from_path(data_path("nsfnet.json")).unwrap();
    assert_eq!(t.num_edges(), 22);
    assert_eq!(t.num_directed_links(), 44);
}
