pub mod maxflow;
pub mod oracle;
pub mod shortest;

pub use maxflow::{max_flow, MaxFlowError, MaxFlowOptions, MaxFlowResult};
pub use oracle::{paft_oracle, sat_oracle, PaftVerdict, SatVerdict};
pub use shortest::{
    shortest_path, shortest_path_default_seed, ShortestPathError, ShortestPathResult,
};
