//! Graph balancing with two edge weights.
//!
//! Orient every edge of an undirected multigraph (equivalently, assign every
//! job to one of its allowed machines) so that the maximum weighted in-degree
//! is at most 3/2 of the optimum, when edge weights take only two values.
//! Small jobs may be allowed on any number of machines; big jobs on at most
//! two.
//!
//! The solver builds the balance flow network for two parameter families,
//! rounds integral flows to orientations, runs a transportation-flow fallback,
//! and keeps the best result. Exact tools (an exhaustive oracle and a
//! single-weight solver) are included for verification.

pub mod bench;
pub mod flow;
pub mod format;
pub mod generate;
pub mod lst;
pub mod model;
pub mod network;
pub mod oracle;
pub mod rounding;
pub mod solver;

pub use model::{
    normalize, ratio_within, Instance, Job, LoadValue, ModelError, Normalized, Orientation, RawJob,
    SizeClass, VerifyError, Weights,
};
pub use network::{build_network, feasible, BalanceNetwork, NetworkParams};
pub use oracle::{brute_force_opt, OracleResult};
pub use rounding::{match_split, round_flow, rounding_bound};
pub use solver::{exact_uniform, solve, Branch, SolveReport};
