//! Discrete-event dynamic RMSA environment.
//!
//! Requests arrive as a Poisson process, hold spectrum for exponential
//! times, and are allocated a contiguous FSU block on every edge of a
//! candidate path (the same block on both directed links of each edge).
//! The action space is `(path, sub-band)`; first-fit resolves the exact
//! start inside the chosen sub-band. Reward is 0 on acceptance and -1 on
//! blocking.
//!
//! Each environment instance is an independent, single-owner state machine;
//! any number of instances can be stepped concurrently. Random streams are
//! per-instance, so results never depend on scheduling.

mod config;
mod env;
mod grid;
mod mask;
mod metrics;
mod observe;
mod request;
mod rng;

pub use config::{BitrateDistribution, EnvConfig, EnvError, TrafficMatrix};
pub use env::{
    run_episode, DecisionPolicy, FirstValidPolicy, RandomMaskedPolicy, RecordLevel, RmsaEnv,
    StepOutcome,
};
pub use grid::{ActiveConn, SpectrumGrid};
pub use mask::{compute_mask, Action, ActionMask};
pub use metrics::{Metrics, RequestRecord};
pub use observe::TokenBatch;
pub use request::{generate_requests, Request, RequestSource, TrafficModel};
pub use rng::{mix_seed, RandomStream};
