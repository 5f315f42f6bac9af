//! The balance network `N(p, q)`.
//!
//! Node layout: source, sink, one node per job, then one gate node and one
//! machine node per machine. Big jobs reach a machine only through its gate,
//! which caps total big-job flow into the machine at `p`. Every machine
//! forwards at most `q` units to the sink.
//!
//! Source arcs carry a lower bound (1 for small jobs, `p` for big ones) with no
//! upper bound. Capping each source arc at exactly its lower bound and asking
//! whether a maximum flow saturates every source arc decides the same
//! feasibility question.

use thiserror::Error;

use crate::flow::{max_flow, DiNetwork, FlowResult};
use crate::model::{Instance, SizeClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("big job {job} has {found} allowed machines; the network needs at most 2")]
    BigJobArity { job: usize, found: usize },
    #[error("network parameter p must be positive")]
    ZeroP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NetworkParams {
    /// Supply of each big job and capacity of each gate.
    pub p: u64,
    /// Machine-to-sink capacity.
    pub q: u64,
}

impl NetworkParams {
    pub fn new(p: u64, q: u64) -> Self {
        Self { p, q }
    }
}

/// An outgoing arc of a job node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JobArc {
    pub machine: usize,
    pub arc: usize,
}

#[derive(Debug, Clone)]
pub struct BalanceNetwork {
    network: DiNetwork,
    params: NetworkParams,
    job_count: usize,
    machine_count: usize,
    source_arcs: Vec<usize>,
    job_arcs: Vec<Vec<JobArc>>,
    gate_arcs: Vec<usize>,
    sink_arcs: Vec<usize>,
    supply: u64,
}

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

impl BalanceNetwork {
    pub fn network(&self) -> &DiNetwork {
        &self.network
    }

    pub fn params(&self) -> NetworkParams {
        self.params
    }

    /// `#small + p * #big`.
    pub fn supply(&self) -> u64 {
        self.supply
    }

    pub fn job_node(&self, job: usize) -> usize {
        2 + job
    }

    pub fn gate_node(&self, machine: usize) -> usize {
        2 + self.job_count + machine
    }

    pub fn machine_node(&self, machine: usize) -> usize {
        2 + self.job_count + self.machine_count + machine
    }

    pub fn source_arc(&self, job: usize) -> usize {
        self.source_arcs[job]
    }

    /// Arcs leaving the job node, in allowed-set order.
    pub fn job_arcs(&self, job: usize) -> &[JobArc] {
        &self.job_arcs[job]
    }

    pub fn gate_arc(&self, machine: usize) -> usize {
        self.gate_arcs[machine]
    }

    pub fn sink_arc(&self, machine: usize) -> usize {
        self.sink_arcs[machine]
    }

    pub fn to_arc_list(&self) -> String {
        self.network.to_arc_list()
    }

    // Node indices come from the layout accessors and are always in range.
    fn push_arc(&mut self, from: usize, to: usize, capacity: u64) -> usize {
        self.network
            .add_arc(from, to, capacity)
            .expect("node in range")
    }
}

pub fn build_network(
    instance: &Instance,
    params: NetworkParams,
) -> Result<BalanceNetwork, NetworkError> {
    if params.p == 0 {
        return Err(NetworkError::ZeroP);
    }
    for job in instance.jobs() {
        if job.size_class == SizeClass::Big && job.allowed.len() > 2 {
            return Err(NetworkError::BigJobArity {
                job: job.id,
                found: job.allowed.len(),
            });
        }
    }
    let job_count = instance.job_count();
    let machine_count = instance.machine_count();
    let node_count = 2 + job_count + 2 * machine_count;
    let mut net = BalanceNetwork {
        network: DiNetwork::new(node_count, SOURCE, SINK).expect("source and sink exist"),
        params,
        job_count,
        machine_count,
        source_arcs: Vec::with_capacity(job_count),
        job_arcs: Vec::with_capacity(job_count),
        gate_arcs: Vec::with_capacity(machine_count),
        sink_arcs: Vec::with_capacity(machine_count),
        supply: 0,
    };
    for job in instance.jobs() {
        let supply = match job.size_class {
            SizeClass::Big => params.p,
            SizeClass::Small => 1,
        };
        net.supply += supply;
        let arc = net.push_arc(SOURCE, net.job_node(job.id), supply);
        net.source_arcs.push(arc);
    }
    for job in instance.jobs() {
        let from = net.job_node(job.id);
        let mut arcs = Vec::with_capacity(job.allowed.len());
        for &machine in &job.allowed {
            let (to, cap) = match job.size_class {
                SizeClass::Big => (net.gate_node(machine), params.p),
                SizeClass::Small => (net.machine_node(machine), 1),
            };
            let arc = net.push_arc(from, to, cap);
            arcs.push(JobArc { machine, arc });
        }
        net.job_arcs.push(arcs);
    }
    for machine in 0..machine_count {
        let arc = net.push_arc(net.gate_node(machine), net.machine_node(machine), params.p);
        net.gate_arcs.push(arc);
    }
    for machine in 0..machine_count {
        let arc = net.push_arc(net.machine_node(machine), SINK, params.q);
        net.sink_arcs.push(arc);
    }
    Ok(net)
}

/// Outcome of a feasibility check, with the integral flow that decided it.
#[derive(Debug, Clone)]
pub struct Feasibility {
    pub feasible: bool,
    pub network: BalanceNetwork,
    pub flow: FlowResult,
}

/// `N(p, q)` is feasible iff a maximum flow saturates the total supply.
pub fn feasible(instance: &Instance, params: NetworkParams) -> Result<Feasibility, NetworkError> {
    let network = build_network(instance, params)?;
    let flow = max_flow(network.network());
    Ok(Feasibility {
        feasible: flow.value == network.supply(),
        network,
        flow,
    })
}
