use thiserror::Error;

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("topology document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("topology has no nodes")]
    NoNodes,
    #[error("duplicate node name {0:?}")]
    DuplicateNode(String),
    #[error("edge references unknown node {0:?}")]
    UnknownNode(String),
    #[error("self-loop on node {0:?}")]
    SelfLoop(String),
    #[error("duplicate edge between {0:?} and {1:?}")]
    DuplicateEdge(String, String),
    #[error("edge between {u:?} and {v:?} has non-positive length {length_km}")]
    NonPositiveLength { u: String, v: String, length_km: f64 },
    #[error("topology is disconnected (node {0:?} unreachable from {1:?})")]
    Disconnected(String, String),
    #[error("line {line}: malformed edge record: {msg}")]
    Csv { line: usize, msg: String },
    #[error("cannot read topology file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported topology file extension {0:?} (expected .json or .csv)")]
    UnsupportedExtension(String),
    #[error("modulation table is empty")]
    EmptyModulationTable,
    #[error("modulation table is not ordered: reach must strictly decrease as bits per symbol increase")]
    UnorderedModulationTable,
    #[error("k_spectral {k} out of range 1..={n}")]
    SpectralRange { k: usize, n: usize },
    #[error("eigensolver failed to converge: max residual {residual:.3e}")]
    EigenNonConvergence { residual: f64 },
}
