use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{EnvConfig, RandomStream};

/// One arriving traffic demand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub id: u64,
    pub source: usize,
    pub dest: usize,
    pub bitrate_gbps: f64,
    pub arrival_time: f64,
    pub holding_time: f64,
}

/// Draws requests: Poisson arrivals (exponential inter-arrival at rate
/// `load / mean_holding`), exponential holding times, endpoints from the
/// traffic matrix, bitrate from the configured distribution. Draw order per
/// request is fixed: inter-arrival, holding, pair, bitrate.
#[derive(Debug, Clone)]
pub struct TrafficModel {
    cfg: Arc<EnvConfig>,
}

impl TrafficModel {
    pub fn new(cfg: Arc<EnvConfig>) -> Self {
        TrafficModel { cfg }
    }

    pub fn sample(&self, rng: &mut RandomStream, id: u64, clock: f64) -> Request {
        let cfg = &self.cfg;
        let inter = rng.exp(1.0 / cfg.arrival_rate());
        let holding = rng.exp(cfg.mean_holding_time);
        let (source, dest) = cfg.traffic.sample(cfg.topology.num_nodes(), rng);
        let bitrate = cfg.bitrates.sample(rng);
        Request {
            id,
            source,
            dest,
            bitrate_gbps: bitrate,
            arrival_time: clock + inter,
            holding_time: holding,
        }
    }
}

/// Where an environment gets its requests: a live generator, or a
/// pre-generated stream replayed verbatim (paired evaluation).
#[derive(Debug, Clone)]
pub enum RequestSource {
    Generative { model: TrafficModel, rng: RandomStream, next_id: u64 },
    Replay { requests: Arc<Vec<Request>>, next: usize },
}

impl RequestSource {
    pub fn generative(cfg: Arc<EnvConfig>, seed: u64) -> Self {
        RequestSource::Generative {
            model: TrafficModel::new(cfg),
            rng: RandomStream::seeded(seed),
            next_id: 0,
        }
    }

    pub fn replay(requests: Arc<Vec<Request>>) -> Self {
        RequestSource::Replay { requests, next: 0 }
    }

    /// Next request; `None` when a replay stream is exhausted.
    pub fn next_request(&mut self, clock: f64) -> Option<Request> {
        match self {
            RequestSource::Generative { model, rng, next_id } => {
                let req = model.sample(rng, *next_id, clock);
                *next_id += 1;
                Some(req)
            }
            RequestSource::Replay { requests, next } => {
                let req = requests.get(*next)?.clone();
                *next += 1;
                Some(req)
            }
        }
    }
}

/// Pre-generate a request stream, e.g. to replay the same traffic against
/// several policies.
pub fn generate_requests(cfg: &Arc<EnvConfig>, seed: u64, count: usize) -> Vec<Request> {
    let model = TrafficModel::new(cfg.clone());
    let mut rng = RandomStream::seeded(seed);
    let mut out = Vec::with_capacity(count);
    let mut clock = 0.0;
    for id in 0..count {
        let req = model.sample(&mut rng, id as u64, clock);
        clock = req.arrival_time;
        out.push(req);
    }
    out
}
