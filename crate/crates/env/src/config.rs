use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use eonlab_topology::{ModulationTable, PathTable, SpectralBasis, Topology};

use crate::RandomStream;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("invalid environment config: {0}")]
    InvalidConfig(String),
    #[error("action id {action} out of range (action space is {num_actions})")]
    ActionOutOfRange { action: usize, num_actions: usize },
    #[error("episode already finished")]
    EpisodeFinished,
}

/// Bitrate of each arriving request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BitrateDistribution {
    Constant(f64),
    /// Weighted discrete choice of (gbps, weight).
    Choice(Vec<(f64, f64)>),
}

impl BitrateDistribution {
    pub fn sample(&self, rng: &mut RandomStream) -> f64 {
        match self {
            BitrateDistribution::Constant(b) => *b,
            BitrateDistribution::Choice(items) => {
                let total: f64 = items.iter().map(|(_, w)| w).sum();
                let mut u = rng.unit() * total;
                for (b, w) in items {
                    if u < *w {
                        return *b;
                    }
                    u -= w;
                }
                items.last().expect("non-empty choice").0
            }
        }
    }

    pub fn max_gbps(&self) -> f64 {
        match self {
            BitrateDistribution::Constant(b) => *b,
            BitrateDistribution::Choice(items) => {
                items.iter().map(|(b, _)| *b).fold(0.0, f64::max)
            }
        }
    }

    /// Distinct bitrates, for path-table sizing.
    pub fn support(&self) -> Vec<f64> {
        match self {
            BitrateDistribution::Constant(b) => vec![*b],
            BitrateDistribution::Choice(items) => items.iter().map(|(b, _)| *b).collect(),
        }
    }

    fn validate(&self) -> Result<(), String> {
        match self {
            BitrateDistribution::Constant(b) if *b > 0.0 => Ok(()),
            BitrateDistribution::Constant(b) => Err(format!("non-positive bitrate {b}")),
            BitrateDistribution::Choice(items) => {
                if items.is_empty() {
                    return Err("empty bitrate choice".into());
                }
                for (b, w) in items {
                    if *b <= 0.0 || *w <= 0.0 {
                        return Err(format!("bad bitrate entry ({b}, {w})"));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Source/destination distribution over ordered node pairs (s != d).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrafficMatrix {
    Uniform,
    /// Row-major `n x n` weights; the diagonal must be zero.
    Weighted(Vec<f64>),
}

impl TrafficMatrix {
    pub fn sample(&self, n: usize, rng: &mut RandomStream) -> (usize, usize) {
        match self {
            TrafficMatrix::Uniform => {
                let idx = rng.below(n * (n - 1));
                let s = idx / (n - 1);
                let mut d = idx % (n - 1);
                if d >= s {
                    d += 1;
                }
                (s, d)
            }
            TrafficMatrix::Weighted(w) => {
                let total: f64 = w.iter().sum();
                let mut u = rng.unit() * total;
                for s in 0..n {
                    for d in 0..n {
                        let wt = w[s * n + d];
                        if wt > 0.0 {
                            if u < wt {
                                return (s, d);
                            }
                            u -= wt;
                        }
                    }
                }
                (0, 1)
            }
        }
    }

    /// Probability of the ordered pair (s, d).
    pub fn pair_prob(&self, n: usize, s: usize, d: usize) -> f64 {
        match self {
            TrafficMatrix::Uniform => 1.0 / (n * (n - 1)) as f64,
            TrafficMatrix::Weighted(w) => {
                let total: f64 = w.iter().sum();
                w[s * n + d] / total
            }
        }
    }

    fn validate(&self, n: usize) -> Result<(), String> {
        if let TrafficMatrix::Weighted(w) = self {
            if w.len() != n * n {
                return Err(format!("traffic matrix has {} entries, expected {}", w.len(), n * n));
            }
            for s in 0..n {
                if w[s * n + s] != 0.0 {
                    return Err(format!("traffic matrix diagonal entry ({s},{s}) must be zero"));
                }
            }
            if w.iter().any(|x| *x < 0.0) {
                return Err("negative traffic matrix entry".into());
            }
            if w.iter().all(|x| *x == 0.0) {
                return Err("all-zero traffic matrix".into());
            }
        }
        Ok(())
    }
}

/// Everything static an environment instance needs. Construction precomputes
/// the f32 copies of the spectral features used in observations.
#[derive(Debug, Clone)]
pub struct EnvConfig {
    pub topology: Arc<Topology>,
    pub paths: Arc<PathTable>,
    pub modulation: Arc<ModulationTable>,
    /// Line-graph Laplacian basis: one coordinate vector per edge token.
    pub edge_basis: Arc<SpectralBasis>,
    /// Node Laplacian basis used to encode request endpoints.
    pub node_basis: Arc<SpectralBasis>,
    pub num_fsu: usize,
    pub slot_aggregation: usize,
    pub load_erlang: f64,
    pub mean_holding_time: f64,
    pub bitrates: BitrateDistribution,
    pub traffic: TrafficMatrix,
    pub episode_length: usize,
    pub warmup: usize,
    /// Occupancy features are remaining holding time over the mean, clipped here.
    pub clip_max: f64,

    pub(crate) edge_spectral_f32: Vec<f32>,
}

impl EnvConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        topology: Arc<Topology>,
        paths: Arc<PathTable>,
        modulation: Arc<ModulationTable>,
        edge_basis: Arc<SpectralBasis>,
        node_basis: Arc<SpectralBasis>,
        num_fsu: usize,
        slot_aggregation: usize,
        load_erlang: f64,
        bitrates: BitrateDistribution,
        traffic: TrafficMatrix,
        episode_length: usize,
        warmup: usize,
    ) -> Result<Arc<EnvConfig>, EnvError> {
        let k_edge = edge_basis.k();
        let mut edge_spectral_f32 = Vec::with_capacity(topology.num_edges() * k_edge);
        for e in 0..topology.num_edges() {
            for &c in edge_basis.coords(e) {
                edge_spectral_f32.push(c as f32);
            }
        }
        let cfg = EnvConfig {
            topology,
            paths,
            modulation,
            edge_basis,
            node_basis,
            num_fsu,
            slot_aggregation,
            load_erlang,
            mean_holding_time: 1.0,
            bitrates,
            traffic,
            episode_length,
            warmup,
            clip_max: 2.0,
            edge_spectral_f32,
        };
        cfg.validate()?;
        Ok(Arc::new(cfg))
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let fail = |msg: String| Err(EnvError::InvalidConfig(msg));
        if self.num_fsu == 0 {
            return fail("num_fsu must be positive".into());
        }
        if self.slot_aggregation == 0 || self.num_fsu % self.slot_aggregation != 0 {
            return fail(format!(
                "num_fsu {} not divisible by slot_aggregation {}",
                self.num_fsu, self.slot_aggregation
            ));
        }
        if !(self.load_erlang > 0.0) {
            return fail(format!("load_erlang {} must be positive", self.load_erlang));
        }
        if !(self.mean_holding_time > 0.0) {
            return fail("mean_holding_time must be positive".into());
        }
        if self.episode_length == 0 {
            return fail("episode_length must be positive".into());
        }
        if self.warmup >= self.episode_length {
            return fail(format!(
                "warmup {} must be below episode_length {}",
                self.warmup, self.episode_length
            ));
        }
        if self.edge_basis.num_vertices() != self.topology.num_edges() {
            return fail("edge basis does not match topology edge count".into());
        }
        if self.node_basis.num_vertices() != self.topology.num_nodes() {
            return fail("node basis does not match topology node count".into());
        }
        if let Err(msg) = self.bitrates.validate() {
            return fail(msg);
        }
        if let Err(msg) = self.traffic.validate(self.topology.num_nodes()) {
            return fail(msg);
        }
        Ok(())
    }

    /// Assemble a config from a topology and scalar knobs, computing the path
    /// table, line graph and spectral bases. `k_spectral` is capped at the
    /// edge/node counts.
    #[allow(clippy::too_many_arguments)]
    pub fn standard(
        topology: Arc<Topology>,
        modulation: Arc<ModulationTable>,
        k_paths: usize,
        sort: eonlab_topology::SortBy,
        guardband_fsu: usize,
        k_spectral: usize,
        num_fsu: usize,
        slot_aggregation: usize,
        load_erlang: f64,
        bitrates: BitrateDistribution,
        traffic: TrafficMatrix,
        episode_length: usize,
        warmup: usize,
    ) -> Result<Arc<EnvConfig>, EnvError> {
        let support = bitrates.support();
        let paths = Arc::new(PathTable::build(
            &topology,
            k_paths,
            sort,
            &modulation,
            &support,
            guardband_fsu,
        ));
        let lg = topology.line_graph();
        let k_edge = k_spectral.min(lg.num_vertices()).max(1);
        let k_node = k_spectral.min(topology.num_nodes()).max(1);
        let edge_basis = eonlab_topology::spectral_basis(&lg, k_edge)
            .map_err(|e| EnvError::InvalidConfig(e.to_string()))?;
        let node_basis = eonlab_topology::node_spectral_basis(&topology, k_node)
            .map_err(|e| EnvError::InvalidConfig(e.to_string()))?;
        EnvConfig::new(
            topology,
            paths,
            modulation,
            Arc::new(edge_basis),
            Arc::new(node_basis),
            num_fsu,
            slot_aggregation,
            load_erlang,
            bitrates,
            traffic,
            episode_length,
            warmup,
        )
    }

    pub fn num_subbands(&self) -> usize {
        self.num_fsu / self.slot_aggregation
    }

    pub fn num_actions(&self) -> usize {
        self.paths.k() * self.num_subbands()
    }

    pub fn arrival_rate(&self) -> f64 {
        self.load_erlang / self.mean_holding_time
    }
}
