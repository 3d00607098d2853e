use nalgebra::{DMatrix, DVector};

use crate::{LineGraph, Topology, TopologyError};

const RESIDUAL_TOL: f64 = 1e-8;
const CLUSTER_TOL: f64 = 1e-9;

/// The `k` smallest eigenpairs of a combinatorial graph Laplacian `L = D - A`,
/// with a deterministic basis: eigenvalues ascending, degenerate subspaces
/// re-orthonormalized by seeded Gram-Schmidt, and each eigenvector's first
/// non-negligible component made positive.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    eigenvalues: Vec<f64>,
    /// Row-major `n x k`: `vectors[v * k + j]` is coordinate `j` of vertex `v`.
    vectors: Vec<f64>,
    n: usize,
    k: usize,
}

impl SpectralBasis {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Spectral coordinates of one vertex (length `k`).
    pub fn coords(&self, vertex: usize) -> &[f64] {
        &self.vectors[vertex * self.k..(vertex + 1) * self.k]
    }

    /// Column `j` collected across vertices.
    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|v| self.vectors[v * self.k + j]).collect()
    }
}

/// Spectral basis of a line graph Laplacian.
pub fn spectral_basis(lg: &LineGraph, k_spectral: usize) -> Result<SpectralBasis, TopologyError> {
    let n = lg.num_vertices();
    let adj = |i: usize| lg.neighbors(i).iter().copied();
    basis_from_adjacency(n, adj, k_spectral)
}

/// Spectral basis of the node-level Laplacian of a topology, used to encode
/// request endpoints.
pub fn node_spectral_basis(t: &Topology, k_spectral: usize) -> Result<SpectralBasis, TopologyError> {
    let n = t.num_nodes();
    let adj = |i: usize| t.neighbors(i).iter().map(|&(v, _)| v);
    basis_from_adjacency(n, adj, k_spectral)
}

fn basis_from_adjacency<I, F>(n: usize, adjacency: F, k: usize) -> Result<SpectralBasis, TopologyError>
where
    I: Iterator<Item = usize>,
    F: Fn(usize) -> I,
{
    if k < 1 || k > n {
        return Err(TopologyError::SpectralRange { k, n });
    }
    let mut lap = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let mut deg = 0.0;
        for j in adjacency(i) {
            lap[(i, j)] = -1.0;
            deg += 1.0;
        }
        lap[(i, i)] = deg;
    }

    let eig = lap.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut columns: Vec<DVector<f64>> = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();

    // Re-orthonormalize clusters of (numerically) repeated eigenvalues so the
    // basis does not depend on solver internals. The projector onto the
    // cluster subspace is basis independent; applying it to a fixed seeded
    // vector sequence and running Gram-Schmidt yields a reproducible basis.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end] - values[end - 1]).abs() <= CLUSTER_TOL * values[end].abs().max(1.0)
        {
            end += 1;
        }
        if end - start > 1 && start < k {
            let m = end - start;
            let mut new_cols: Vec<DVector<f64>> = Vec::with_capacity(m);
            let mut rng = SplitMix64::new(0x9e37_79b9_7f4a_7c15 ^ (start as u64));
            while new_cols.len() < m {
                let r = DVector::from_fn(n, |_, _| rng.next_sym());
                // project into the cluster subspace
                let mut p = DVector::zeros(n);
                for c in &columns[start..end] {
                    p += c * c.dot(&r);
                }
                // orthogonalize against vectors already accepted
                for c in &new_cols {
                    p -= c * c.dot(&p);
                }
                let norm = p.norm();
                if norm > 1e-6 {
                    new_cols.push(p / norm);
                }
            }
            columns.splice(start..end, new_cols);
        }
        start = end;
    }

    let mut vectors = vec![0.0; n * k];
    for (j, col) in columns.iter().take(k).enumerate() {
        let mut col = col.clone();
        if let Some(lead) = col.iter().find(|x| x.abs() > 1e-10) {
            if *lead < 0.0 {
                col.neg_mut();
            }
        }
        for v in 0..n {
            vectors[v * k + j] = col[v];
        }
    }

    let basis = SpectralBasis {
        eigenvalues: values[..k].to_vec(),
        vectors,
        n,
        k,
    };

    let mut max_residual = 0.0f64;
    for j in 0..k {
        let vj = basis.eigenvector(j);
        let lam = basis.eigenvalues[j];
        for i in 0..n {
            let mut lv = lap[(i, i)] * vj[i];
            for nb in adjacency(i) {
                lv -= vj[nb];
            }
            max_residual = max_residual.max((lv - lam * vj[i]).abs());
        }
    }
    if max_residual > RESIDUAL_TOL {
        return Err(TopologyError::EigenNonConvergence {
            residual: max_residual,
        });
    }
    Ok(basis)
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    fn next_sym(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (2.0 / (1u64 << 53) as f64) - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_line_graph;
    use crate::Topology;

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
    fn path_graph_eigenvalues() {
        // L of P3 = [[1,-1,0],[-1,2,-1],[0,-1,1]] has spectrum {0, 1, 3}
        let t = topo(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]);
        let lg = build_line_graph(&t); // P3
        let b = spectral_basis(&lg, 3).unwrap();
        let expect = [0.0, 1.0, 3.0];
        for (got, want) in b.eigenvalues().iter().zip(expect) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn k3_eigenvalues() {
        let t = topo(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")]);
        let lg = build_line_graph(&t); // K3
        let b = spectral_basis(&lg, 3).unwrap();
        let expect = [0.0, 3.0, 3.0];
        for (got, want) in b.eigenvalues().iter().zip(expect) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn k1_gives_constant_vector() {
        let t = topo(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]);
        let b = node_spectral_basis(&t, 1).unwrap();
        assert!(b.eigenvalues()[0].abs() < 1e-10);
        let v = b.eigenvector(0);
        for x in &v {
            assert!((x - v[0]).abs() < 1e-9);
            assert!(*x > 0.0);
        }
    }

    #[test]
    fn orthonormal_and_reproducible() {
        let t = topo(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a"), ("a", "c")],
        );
        let lg = build_line_graph(&t);
        let b1 = spectral_basis(&lg, lg.num_vertices()).unwrap();
        let b2 = spectral_basis(&lg, lg.num_vertices()).unwrap();
        assert_eq!(b1.vectors, b2.vectors);
        let k = b1.k();
        for i in 0..k {
            for j in 0..k {
                let dot: f64 = b1
                    .eigenvector(i)
                    .iter()
                    .zip(b1.eigenvector(j))
                    .map(|(a, b)| a * b)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-8, "gram[{i},{j}] = {dot}");
            }
        }
    }

    #[test]
    fn k_out_of_range() {
        let t = topo(&["a", "b"], &[("a", "b")]);
        let lg = build_line_graph(&t);
        assert!(matches!(
            spectral_basis(&lg, 2),
            Err(TopologyError::SpectralRange { .. })
        ));
    }
}
